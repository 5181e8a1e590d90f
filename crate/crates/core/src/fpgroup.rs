//! Coset enumeration for two-generator presentations.
//!
//! [`coset_enumerate`] runs HLT-style Todd–Coxeter with coincidence
//! processing on the trivial subgroup, so a completed run returns the index
//! of the normal closure of the relators together with the regular action of
//! the finite quotient. Cosets are numbered in order of definition, so the
//! output is deterministic.

use thiserror::Error;

use crate::dessin::{Dessin, DessinError};
use crate::perm::Permutation;
use crate::word::{Generator, Word};

pub const DEFAULT_COSET_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpError {
    #[error("cap must be at least 1")]
    ZeroCap,
    #[error("coset enumeration exceeded {cap} live cosets (high-water mark {high_water}); the quotient may be infinite")]
    CapExceeded { cap: usize, high_water: usize },
    #[error("relator {relator} does not hold in the computed action")]
    Unverified { relator: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub relators: Vec<Word>,
    pub cap: usize,
}

impl Presentation {
    pub fn new(relators: Vec<Word>) -> Self {
        Presentation {
            relators,
            cap: DEFAULT_COSET_CAP,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }
}

/// Action of `x` and `y` on the cosets of a completed enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetAction {
    pub sigma_x: Permutation,
    pub sigma_y: Permutation,
}

impl CosetAction {
    pub fn index(&self) -> usize {
        self.sigma_x.degree()
    }

    pub fn to_dessin(&self) -> Result<Dessin, DessinError> {
        Dessin::new(self.sigma_x.clone(), self.sigma_y.clone())
    }
}

/// Enumerates the cosets of the normal closure of the relators in the free
/// group on `x`, `y`.
pub fn coset_enumerate(p: &Presentation) -> Result<CosetAction, FpError> {
    enumerate_subgroup(&p.relators, &[], p.cap)
}

/// Enumerates the cosets of the subgroup generated by `subgroup` in the group
/// presented by `relators`. The action is on cosets, with coset 1 the
/// subgroup itself.
pub(crate) fn enumerate_subgroup(
    relators: &[Word],
    subgroup: &[Word],
    cap: usize,
) -> Result<CosetAction, FpError> {
    if cap == 0 {
        return Err(FpError::ZeroCap);
    }
    let rels: Vec<Vec<usize>> = relators
        .iter()
        .map(columns)
        .filter(|r| !r.is_empty())
        .collect();
    let mut table = Table::new(cap);
    for h in subgroup {
        let cols = columns(h);
        if !cols.is_empty() {
            table.scan_and_fill(0, &cols)?;
        }
    }
    let mut c = 0;
    while c < table.rows.len() {
        if table.is_live(c) {
            for r in &rels {
                table.scan_and_fill(c, r)?;
                if !table.is_live(c) {
                    break;
                }
            }
            for col in 0..4 {
                if !table.is_live(c) {
                    break;
                }
                if table.rows[c][col] == NONE {
                    table.define(c, col)?;
                }
            }
        }
        c += 1;
    }
    let action = table.compact();
    for r in relators {
        let value = r
            .evaluate(&action.sigma_x, &action.sigma_y)
            .expect("equal degrees");
        // Relators hold on every coset of any subgroup.
        if !value.is_identity() {
            return Err(FpError::Unverified {
                relator: r.to_string(),
            });
        }
    }
    Ok(action)
}

const NONE: u32 = u32::MAX;

/// Columns are `x, x⁻¹, y, y⁻¹`; the inverse of column `c` is `c ^ 1`.
fn columns(w: &Word) -> Vec<usize> {
    let mut out = Vec::with_capacity(w.len() as usize);
    for l in w.letters() {
        let base = match l.gen {
            Generator::X => 0,
            Generator::Y => 2,
        };
        let col = if l.exp > 0 { base } else { base + 1 };
        out.extend(std::iter::repeat_n(col, l.exp.unsigned_abs() as usize));
    }
    out
}

struct Table {
    rows: Vec<[u32; 4]>,
    /// Union-find parent; a coset is live iff it is its own parent.
    parent: Vec<u32>,
    live: usize,
    high_water: usize,
    cap: usize,
    queue: Vec<usize>,
}

impl Table {
    fn new(cap: usize) -> Table {
        Table {
            rows: vec![[NONE; 4]],
            parent: vec![0],
            live: 1,
            high_water: 1,
            cap,
            queue: Vec::new(),
        }
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn define(&mut self, c: usize, col: usize) -> Result<(), FpError> {
        if self.live >= self.cap {
            return Err(FpError::CapExceeded {
                cap: self.cap,
                high_water: self.high_water,
            });
        }
        let d = self.rows.len();
        self.rows.push([NONE; 4]);
        self.parent.push(d as u32);
        self.live += 1;
        self.high_water = self.high_water.max(self.live);
        self.rows[c][col] = d as u32;
        self.rows[d][col ^ 1] = c as u32;
        Ok(())
    }

    fn scan_and_fill(&mut self, c: usize, word: &[usize]) -> Result<(), FpError> {
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = word.len();
        loop {
            while i < j && self.rows[f][word[i]] != NONE {
                f = self.rows[f][word[i]] as usize;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i && self.rows[b][word[j - 1] ^ 1] != NONE {
                b = self.rows[b][word[j - 1] ^ 1] as usize;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                // deduction closes the cycle
                self.rows[f][word[i]] = b as u32;
                self.rows[b][word[i] ^ 1] = f as u32;
                return Ok(());
            }
            self.define(f, word[i])?;
        }
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut k = c;
        while self.parent[k] as usize != root {
            let next = self.parent[k] as usize;
            self.parent[k] = root as u32;
            k = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize) {
        let a = self.rep(a);
        let b = self.rep(b);
        if a == b {
            return;
        }
        let (keep, drop) = if a < b { (a, b) } else { (b, a) };
        self.parent[drop] = keep as u32;
        self.live -= 1;
        self.queue.push(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut q = 0;
        while q < self.queue.len() {
            let e = self.queue[q];
            q += 1;
            for col in 0..4 {
                let f = self.rows[e][col];
                if f == NONE {
                    continue;
                }
                let f = f as usize;
                self.rows[f][col ^ 1] = NONE;
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if self.rows[e1][col] != NONE {
                    let t = self.rows[e1][col] as usize;
                    self.merge(f1, t);
                } else if self.rows[f1][col ^ 1] != NONE {
                    let t = self.rows[f1][col ^ 1] as usize;
                    self.merge(e1, t);
                } else {
                    self.rows[e1][col] = f1 as u32;
                    self.rows[f1][col ^ 1] = e1 as u32;
                }
            }
        }
    }

    /// Renumbers live cosets in order and extracts the action.
    fn compact(&mut self) -> CosetAction {
        let mut number = vec![NONE; self.rows.len()];
        let mut next = 0u32;
        for (c, slot) in number.iter_mut().enumerate() {
            if self.parent[c] as usize == c {
                *slot = next;
                next += 1;
            }
        }
        let mut x = Vec::with_capacity(next as usize);
        let mut y = Vec::with_capacity(next as usize);
        for c in 0..self.rows.len() {
            if self.is_live(c) {
                let tx = self.rep(self.rows[c][0] as usize);
                let ty = self.rep(self.rows[c][2] as usize);
                x.push(number[tx]);
                y.push(number[ty]);
            }
        }
        CosetAction {
            sigma_x: Permutation::from_raw(x),
            sigma_y: Permutation::from_raw(y),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PermGroup;

    fn words(list: &[&str]) -> Vec<Word> {
        list.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn index_of(list: &[&str]) -> Result<usize, FpError> {
        coset_enumerate(&Presentation::new(words(list))).map(|a| a.index())
    }

    #[test]
    fn small_quotients() {
        assert_eq!(index_of(&["x", "y"]), Ok(1));
        assert_eq!(index_of(&["x^2", "y^2", "(xy)^2"]), Ok(4));
        assert_eq!(index_of(&["x^3", "y^2", "[x,x^y]"]), Ok(18));
        assert_eq!(index_of(&["x^2", "y^3", "(xy)^5"]), Ok(60));
        assert_eq!(index_of(&["x^2", "y^3", "(xy)^4"]), Ok(24));
        assert_eq!(index_of(&["x^5", "y", "x^3"]), Ok(1));
        assert_eq!(index_of(&["x^6", "y^2", "[x,y]"]), Ok(12));
    }

    #[test]
    fn action_is_regular_on_the_quotient() {
        let action =
            coset_enumerate(&Presentation::new(words(&["x^3", "y^2", "[x,x^y]"]))).unwrap();
        let g =
            PermGroup::from_generators(&[action.sigma_x.clone(), action.sigma_y.clone()]).unwrap();
        assert_eq!(g.order(), 18u64);
        assert!(g.is_transitive());
        assert_eq!(action.sigma_x.order(), 3u32.into());
        assert_eq!(action.sigma_y.order(), 2u32.into());
    }

    #[test]
    fn infinite_groups_hit_the_cap() {
        for rels in [
            &["x^2", "y^3", "(xy)^6"][..],
            &["x^3", "y^3", "(xy)^3"],
            &["x^2", "y^4", "(xy)^4"],
            &[],
        ] {
            let p = Presentation::new(words(rels)).with_cap(2_000);
            match coset_enumerate(&p) {
                Err(FpError::CapExceeded { cap, high_water }) => {
                    assert_eq!(cap, 2_000);
                    assert!(high_water <= 2_000);
                }
                other => panic!("expected cap error for {rels:?}, got {other:?}"),
            }
        }
        assert_eq!(
            coset_enumerate(&Presentation::new(vec![]).with_cap(0)),
            Err(FpError::ZeroCap)
        );
    }

    #[test]
    fn subgroup_indices() {
        // Δ(6,8,2) ⊃ ⟨x, y²⟩ with index 2
        let rels = words(&["x^6", "y^8", "(xy)^2"]);
        let a = enumerate_subgroup(&rels, &words(&["x", "y^2"]), 10_000).unwrap();
        assert_eq!(a.index(), 2);
        // ⟨x⟩ in S3 = ⟨x,y | x^2,y^3,(xy)^2⟩
        let rels = words(&["x^2", "y^3", "(xy)^2"]);
        assert_eq!(
            enumerate_subgroup(&rels, &words(&["x"]), 100)
                .unwrap()
                .index(),
            3
        );
        assert_eq!(
            enumerate_subgroup(&rels, &words(&["y"]), 100)
                .unwrap()
                .index(),
            2
        );
        assert_eq!(
            enumerate_subgroup(&rels, &words(&["x", "y"]), 100)
                .unwrap()
                .index(),
            1
        );
    }
}
