//! Dessins as transitive permutation pairs `(σx, σy)` on edges `{1..n}`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use thiserror::Error;

use crate::group::{GroupError, GroupOrder, PermGroup};
use crate::perm::{CycleType, PermError, Permutation};

/// Largest degree accepted by [`enumerate_by_passport`] unless overridden.
pub const DEFAULT_ENUM_DEGREE_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DessinError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("permutations are not transitive; orbits {}", fmt_blocks(.orbits))]
    NotTransitive { orbits: Vec<Vec<usize>> },
    #[error("dessin is not regular (degree {degree}, monodromy order {order})")]
    NotRegular { degree: usize, order: GroupOrder },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("block {} is not preserved by {generator}", fmt_block(.block))]
    NotInvariant { block: Vec<usize>, generator: char },
    #[error("{element} is not central in the monodromy group")]
    NotCentral { element: Permutation },
    #[error("central subset is not closed: {product} is missing")]
    NotClosed { product: Permutation },
    #[error("N(1/p+1/q+1/r-1) is not an integer for N = {degree}, type {ty}")]
    NonIntegral { degree: u64, ty: RegularType },
    #[error("degree {degree} exceeds enumeration cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("invalid passport: {0}")]
    InvalidPassport(String),
    #[error("map is not a covering: {0}")]
    NotACovering(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

fn fmt_block(block: &[usize]) -> String {
    format!("{{{}}}", block.iter().join(","))
}

fn fmt_blocks(blocks: &[Vec<usize>]) -> String {
    blocks.iter().map(|b| fmt_block(b)).join(" ")
}

/// Cycle types of `σx`, `σy` and `σz = (σxσy)⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Passport {
    pub x: CycleType,
    pub y: CycleType,
    pub z: CycleType,
}

impl Passport {
    pub fn new(x: CycleType, y: CycleType, z: CycleType) -> Result<Passport, DessinError> {
        if x.degree() != y.degree() || x.degree() != z.degree() {
            return Err(DessinError::InvalidPassport(format!(
                "cycle types have degrees {}, {}, {}",
                x.degree(),
                y.degree(),
                z.degree()
            )));
        }
        Ok(Passport { x, y, z })
    }

    pub fn degree(&self) -> usize {
        self.x.degree()
    }

    /// Euler characteristic of any dessin with this passport.
    pub fn euler_characteristic(&self) -> i64 {
        (self.x.num_cycles() + self.y.num_cycles() + self.z.num_cycles()) as i64
            - self.degree() as i64
    }
}

impl fmt::Display for Passport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {} | {}", self.x, self.y, self.z)
    }
}

impl FromStr for Passport {
    type Err = DessinError;

    /// Parses `PX|PY|PZ`, each part in [`CycleType`] syntax.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split('|').collect();
        if parts.len() != 3 {
            return Err(DessinError::InvalidPassport(format!(
                "expected three cycle types separated by '|', got {}",
                parts.len()
            )));
        }
        let mut types = Vec::with_capacity(3);
        for part in parts {
            types.push(
                part.parse::<CycleType>()
                    .map_err(|e| DessinError::InvalidPassport(format!("{part:?}: {e}")))?,
            );
        }
        let z = types.pop().unwrap();
        let y = types.pop().unwrap();
        let x = types.pop().unwrap();
        Passport::new(x, y, z)
    }
}

/// Orders of `σx`, `σy` and `σxσy` in the monodromy group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegularType {
    pub p: u64,
    pub q: u64,
    pub r: u64,
}

impl fmt::Display for RegularType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.r)
    }
}

/// Euler characteristic `N(1/p + 1/q + 1/r - 1)` of a regular dessin of
/// degree `N` and type `(p,q,r)`.
pub fn euler_rh(degree: u64, ty: RegularType) -> Result<i64, DessinError> {
    let (p, q, r) = (ty.p as i128, ty.q as i128, ty.r as i128);
    if p == 0 || q == 0 || r == 0 {
        return Err(DessinError::NonIntegral { degree, ty });
    }
    let num = degree as i128 * (q * r + p * r + p * q - p * q * r);
    let den = p * q * r;
    if num % den != 0 {
        return Err(DessinError::NonIntegral { degree, ty });
    }
    i64::try_from(num / den).map_err(|_| DessinError::NonIntegral { degree, ty })
}

/// Genus of a closed orientable surface with Euler characteristic `chi`.
pub fn genus_from_euler(chi: i64) -> i64 {
    (2 - chi) / 2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dessin {
    name: Option<String>,
    sigma_x: Permutation,
    sigma_y: Permutation,
}

impl Dessin {
    pub fn new(sigma_x: Permutation, sigma_y: Permutation) -> Result<Dessin, DessinError> {
        if sigma_x.degree() != sigma_y.degree() {
            return Err(DessinError::DegreeMismatch {
                left: sigma_x.degree(),
                right: sigma_y.degree(),
            });
        }
        let orbits = crate::group::orbits_of(&[sigma_x.clone(), sigma_y.clone()], sigma_x.degree());
        if orbits.len() > 1 {
            return Err(DessinError::NotTransitive {
                orbits: orbits
                    .into_iter()
                    .map(|o| o.into_iter().map(|p| p + 1).collect())
                    .collect(),
            });
        }
        Ok(Dessin {
            name: None,
            sigma_x,
            sigma_y,
        })
    }

    /// The one-edge dessin.
    pub fn trivial() -> Dessin {
        Dessin {
            name: None,
            sigma_x: Permutation::identity(1),
            sigma_y: Permutation::identity(1),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Dessin {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.sigma_x.degree()
    }

    pub fn sigma_x(&self) -> &Permutation {
        &self.sigma_x
    }

    pub fn sigma_y(&self) -> &Permutation {
        &self.sigma_y
    }

    /// `σz = (σxσy)⁻¹`, so that `σxσyσz = 1`.
    pub fn sigma_z(&self) -> Permutation {
        self.sigma_x.then(&self.sigma_y).inverse()
    }

    pub fn passport(&self) -> Passport {
        Passport {
            x: self.sigma_x.cycle_type(),
            y: self.sigma_y.cycle_type(),
            z: self.sigma_z().cycle_type(),
        }
    }

    /// `c(σx) + c(σy) + c(σxσy) - n`.
    pub fn euler_characteristic(&self) -> i64 {
        self.passport().euler_characteristic()
    }

    pub fn genus(&self) -> u64 {
        genus_from_euler(self.euler_characteristic()) as u64
    }

    pub fn monodromy_group(&self) -> PermGroup {
        PermGroup::from_generators(&[self.sigma_x.clone(), self.sigma_y.clone()])
            .expect("generators share a degree")
    }

    pub fn is_regular(&self) -> bool {
        self.monodromy_group().order() == self.degree() as u64
    }

    fn require_regular(&self) -> Result<PermGroup, DessinError> {
        let g = self.monodromy_group();
        if g.order() != self.degree() as u64 {
            return Err(DessinError::NotRegular {
                degree: self.degree(),
                order: g.order(),
            });
        }
        Ok(g)
    }

    /// The regular cover: edges are the monodromy group's elements in
    /// lexicographic order, with `x` and `y` acting by right multiplication.
    pub fn regular_cover(&self, cap: u64) -> Result<Dessin, DessinError> {
        Ok(self.regular_cover_with_map(cap)?.source)
    }

    /// The regular cover together with the covering map `g ↦ 1·g`.
    pub fn regular_cover_with_map(&self, cap: u64) -> Result<CoveringMap, DessinError> {
        let elements = self.monodromy_group().elements(cap)?;
        let index: HashMap<&Permutation, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e, i as u32))
            .collect();
        let act = |s: &Permutation| -> Permutation {
            Permutation::from_raw(elements.iter().map(|e| index[&e.then(s)]).collect())
        };
        let mut cover = Dessin::new(act(&self.sigma_x), act(&self.sigma_y))?;
        if let Some(name) = &self.name {
            cover.name = Some(format!("{name}-cover"));
        }
        let map = elements.iter().map(|e| e.image(1)).collect();
        CoveringMap::new(cover, self.clone(), map)
    }

    /// Relabels edge `i` as `g(i)`.
    pub fn relabel(&self, g: &Permutation) -> Dessin {
        Dessin {
            name: self.name.clone(),
            sigma_x: self.sigma_x.conjugate_by(g),
            sigma_y: self.sigma_y.conjugate_by(g),
        }
    }

    /// An edge bijection `b` with `b∘σ = σ'∘b` for both generators.
    pub fn isomorphism_to(&self, other: &Dessin) -> Option<Permutation> {
        if self.degree() != other.degree() {
            return None;
        }
        (1..=other.degree()).find_map(|t| self.extend_from(other, t))
    }

    pub fn isomorphic(&self, other: &Dessin) -> bool {
        self.isomorphism_to(other).is_some()
    }

    /// All self-isomorphisms, ordered by the image of edge 1.
    pub fn automorphisms(&self) -> Vec<Permutation> {
        (1..=self.degree())
            .filter_map(|t| self.extend_from(self, t))
            .collect()
    }

    /// Propagates `1 ↦ target` along the generators. Transitivity makes the
    /// extension unique when it exists.
    fn extend_from(&self, other: &Dessin, target: usize) -> Option<Permutation> {
        let n = self.degree();
        let (ax, ay) = (&self.sigma_x, &self.sigma_y);
        let (bx, by) = (&other.sigma_x, &other.sigma_y);
        let mut map = vec![0u32; n];
        let mut used = vec![false; n];
        let mut set = vec![false; n];
        map[0] = (target - 1) as u32;
        used[target - 1] = true;
        set[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let m = map[i] as usize;
            for (a, b) in [(ax, bx), (ay, by)] {
                let j = a.at(i);
                let want = b.at(m) as u32;
                if set[j] {
                    if map[j] != want {
                        return None;
                    }
                } else {
                    if used[want as usize] {
                        return None;
                    }
                    used[want as usize] = true;
                    set[j] = true;
                    map[j] = want;
                    queue.push_back(j);
                }
            }
        }
        Some(Permutation::from_raw(map))
    }

    /// Induced action on the blocks of an invariant partition. Blocks are
    /// renumbered `1..` in order of their smallest member.
    pub fn quotient_by_partition(&self, blocks: &[Vec<usize>]) -> Result<Dessin, DessinError> {
        let n = self.degree();
        let mut sorted: Vec<Vec<usize>> = blocks
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.sort_unstable();
                b
            })
            .collect();
        let mut block_of = vec![usize::MAX; n];
        for b in &sorted {
            if b.is_empty() {
                return Err(DessinError::InvalidPartition("empty block".into()));
            }
            for &p in b {
                if p == 0 || p > n {
                    return Err(DessinError::InvalidPartition(format!(
                        "point {p} out of range 1..{n}"
                    )));
                }
                if block_of[p - 1] != usize::MAX {
                    return Err(DessinError::InvalidPartition(format!(
                        "point {p} appears twice"
                    )));
                }
                block_of[p - 1] = 0;
            }
        }
        if let Some(p) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(DessinError::InvalidPartition(format!(
                "point {} is not covered",
                p + 1
            )));
        }
        sorted.sort_unstable_by_key(|b| b[0]);
        for (k, b) in sorted.iter().enumerate() {
            for &p in b {
                block_of[p - 1] = k;
            }
        }
        let induced = |s: &Permutation, name: char| -> Result<Permutation, DessinError> {
            let mut images = Vec::with_capacity(sorted.len());
            for b in &sorted {
                let target = block_of[s.at(b[0] - 1)];
                if b.iter().any(|&p| block_of[s.at(p - 1)] != target) {
                    return Err(DessinError::NotInvariant {
                        block: b.clone(),
                        generator: name,
                    });
                }
                images.push(target as u32);
            }
            Ok(Permutation::from_raw(images))
        };
        let qx = induced(&self.sigma_x, 'x')?;
        let qy = induced(&self.sigma_y, 'y')?;
        Dessin::new(qx, qy)
    }

    /// Quotient of a regular dessin by a subgroup `z` of the centre of its
    /// monodromy group; the blocks are the orbits of `z`.
    pub fn quotient_by_central(&self, z: &[Permutation]) -> Result<Dessin, DessinError> {
        let group = self.require_regular()?;
        let members: HashSet<&Permutation> = z.iter().collect();
        for e in z {
            if e.degree() != self.degree() {
                return Err(DessinError::DegreeMismatch {
                    left: self.degree(),
                    right: e.degree(),
                });
            }
            if !group.contains(e)?
                || !e.commutes_with(&self.sigma_x)
                || !e.commutes_with(&self.sigma_y)
            {
                return Err(DessinError::NotCentral { element: e.clone() });
            }
            for f in z {
                let product = e.then(f);
                if !members.contains(&product) {
                    return Err(DessinError::NotClosed { product });
                }
            }
        }
        if z.is_empty() {
            return Ok(self.clone());
        }
        let blocks: Vec<Vec<usize>> = crate::group::orbits_of(z, self.degree())
            .into_iter()
            .map(|o| o.into_iter().map(|p| p + 1).collect())
            .collect();
        let mut q = self.quotient_by_partition(&blocks)?;
        if let Some(name) = &self.name {
            q.name = Some(format!("{name}/Z"));
        }
        Ok(q)
    }

    pub fn type_of_regular(&self) -> Result<RegularType, DessinError> {
        self.require_regular()?;
        let ord = |p: &Permutation| p.small_order().expect("regular degree fits in u64");
        Ok(RegularType {
            p: ord(&self.sigma_x),
            q: ord(&self.sigma_y),
            r: ord(&self.sigma_x.then(&self.sigma_y)),
        })
    }

    /// Isomorphism-invariant encoding: breadth-first relabelling from each
    /// base edge in the neighbour order `x, x⁻¹, y, y⁻¹`, keeping the
    /// lexicographically least big-endian `u32` encoding.
    pub fn canonical_form(&self) -> Vec<u8> {
        let n = self.degree();
        let xi = self.sigma_x.inverse();
        let yi = self.sigma_y.inverse();
        let moves = [&self.sigma_x, &xi, &self.sigma_y, &yi];
        let mut best: Option<Vec<u8>> = None;
        let mut label = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(n);
        for base in 0..n {
            label.fill(u32::MAX);
            order.clear();
            label[base] = 0;
            order.push(base);
            let mut head = 0;
            while head < order.len() {
                let v = order[head];
                head += 1;
                for m in moves {
                    let w = m.at(v);
                    if label[w] == u32::MAX {
                        label[w] = order.len() as u32;
                        order.push(w);
                    }
                }
            }
            let mut code = Vec::with_capacity(4 + 8 * n);
            code.extend_from_slice(&(n as u32).to_be_bytes());
            for &v in &order {
                code.extend_from_slice(&label[self.sigma_x.at(v)].to_be_bytes());
                code.extend_from_slice(&label[self.sigma_y.at(v)].to_be_bytes());
            }
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
        best.expect("degree is positive")
    }
}

impl fmt::Display for Dessin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            write!(f, "{name}: ")?;
        }
        write!(
            f,
            "degree {}, x = {}, y = {}",
            self.degree(),
            self.sigma_x,
            self.sigma_y
        )
    }
}

/// An equivariant surjection from the edges of `source` onto those of `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringMap {
    pub source: Dessin,
    pub target: Dessin,
    /// `map[i - 1]` is the image of edge `i`, 1-based.
    pub map: Vec<usize>,
}

impl CoveringMap {
    pub fn new(
        source: Dessin,
        target: Dessin,
        map: Vec<usize>,
    ) -> Result<CoveringMap, DessinError> {
        let cm = CoveringMap {
            source,
            target,
            map,
        };
        cm.check()?;
        Ok(cm)
    }

    pub fn image(&self, edge: usize) -> usize {
        self.map[edge - 1]
    }

    /// Verifies equivariance edge by edge, and surjectivity.
    pub fn check(&self) -> Result<(), DessinError> {
        let (n, m) = (self.source.degree(), self.target.degree());
        if self.map.len() != n {
            return Err(DessinError::NotACovering(format!(
                "map has {} entries for {n} edges",
                self.map.len()
            )));
        }
        if let Some(&bad) = self.map.iter().find(|&&e| e == 0 || e > m) {
            return Err(DessinError::NotACovering(format!(
                "image {bad} out of range"
            )));
        }
        for i in 1..=n {
            for (s, t, name) in [
                (&self.source.sigma_x, &self.target.sigma_x, 'x'),
                (&self.source.sigma_y, &self.target.sigma_y, 'y'),
            ] {
                if self.image(s.image(i)) != t.image(self.image(i)) {
                    return Err(DessinError::NotACovering(format!(
                        "not equivariant for {name} at edge {i}"
                    )));
                }
            }
        }
        let hit: HashSet<usize> = self.map.iter().copied().collect();
        if hit.len() != m {
            return Err(DessinError::NotACovering("not surjective".into()));
        }
        Ok(())
    }
}

/// All dessins with the given passport up to isomorphism, ordered by
/// canonical form. `σx` is fixed to the canonical permutation of its cycle
/// type and `σy` ranges over the whole symmetric group.
pub fn enumerate_by_passport(
    passport: &Passport,
    cap_degree: usize,
) -> Result<Vec<Dessin>, DessinError> {
    let n = passport.degree();
    if n > cap_degree {
        return Err(DessinError::DegreeCapExceeded {
            degree: n,
            cap: cap_degree,
        });
    }
    let candidates = (0..n as u32).permutations(n).map(Permutation::from_raw);
    Ok(enumerate_from_candidates(passport, candidates))
}

pub(crate) fn enumerate_from_candidates(
    passport: &Passport,
    candidates: impl Iterator<Item = Permutation>,
) -> Vec<Dessin> {
    let sigma_x = passport.x.canonical_permutation();
    let mut found: BTreeMap<Vec<u8>, Dessin> = BTreeMap::new();
    for sigma_y in candidates {
        if sigma_y.cycle_type() != passport.y {
            continue;
        }
        if sigma_x.then(&sigma_y).inverse().cycle_type() != passport.z {
            continue;
        }
        let Ok(d) = Dessin::new(sigma_x.clone(), sigma_y) else {
            continue;
        };
        found.entry(d.canonical_form()).or_insert(d);
    }
    found.into_values().collect()
}
