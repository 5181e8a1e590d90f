//! Kernel comparison between dessins, distinguishing words, and orbit reports.
//!
//! Two dessins have the same regular cover exactly when the kernels of their
//! monodromy maps from the free group agree. That is decided without building
//! covers: the kernels agree iff the diagonal group
//! `⟨σx1 ⊕ σx2, σy1 ⊕ σy2⟩` has the same order as both monodromy groups.

use std::collections::HashMap;

use thiserror::Error;

use crate::dessin::{euler_rh, genus_from_euler, Dessin, DessinError, Passport, RegularType};
use crate::group::{GroupError, GroupOrder, PermGroup, DEFAULT_ELEMENT_CAP};
use crate::perm::Permutation;
use crate::word::{Generator, Word};

pub const DEFAULT_WITNESS_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuliError {
    #[error("witness search exceeded its budget of {budget} steps")]
    BudgetExceeded { budget: u64 },
    #[error("orbit report needs at least one dessin")]
    Empty,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Order of `⟨σx1 ⊕ σx2, σy1 ⊕ σy2⟩`.
pub fn subdirect_order(d1: &Dessin, d2: &Dessin) -> GroupOrder {
    subdirect_group(d1, d2).order()
}

fn subdirect_group(d1: &Dessin, d2: &Dessin) -> PermGroup {
    PermGroup::from_generators(&[
        d1.sigma_x().direct_sum(d2.sigma_x()),
        d1.sigma_y().direct_sum(d2.sigma_y()),
    ])
    .expect("direct sums share a degree")
}

pub fn kernels_equal(d1: &Dessin, d2: &Dessin) -> bool {
    let k = subdirect_order(d1, d2);
    k == d1.monodromy_group().order() && k == d2.monodromy_group().order()
}

/// Which dessin a [`Witness`] word is trivial on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

/// A word in the kernel of one dessin's monodromy but not the other's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub word: Word,
    pub trivial_on: Side,
    /// The word's image under the other dessin.
    pub image: Permutation,
}

/// Finds a word trivial on one dessin and non-trivial on the other, or
/// `None` when the kernels agree.
///
/// Walks the Cayley graph of the monodromy group of the dessin whose kernel
/// is the smaller one. Every non-tree edge `v --s--> w` yields a Schreier
/// generator `u_v s u_w⁻¹` of that kernel; these generate it, so one of them
/// acts non-trivially on the other dessin. The budget bounds the number of
/// Cayley-graph edges examined.
pub fn distinguishing_witness(
    d1: &Dessin,
    d2: &Dessin,
    budget: u64,
) -> Result<Option<Witness>, ModuliError> {
    let k = subdirect_order(d1, d2);
    let o1 = d1.monodromy_group().order();
    let o2 = d2.monodromy_group().order();
    let (base, other, side) = if k != o1 {
        (d1, d2, Side::First)
    } else if k != o2 {
        (d2, d1, Side::Second)
    } else {
        return Ok(None);
    };
    let (word, image) = search(base, other, budget)?;
    let witness = Witness {
        word,
        trivial_on: side,
        image,
    };
    verify(&witness, d1, d2);
    Ok(Some(witness))
}

fn search(base: &Dessin, other: &Dessin, budget: u64) -> Result<(Word, Permutation), ModuliError> {
    let exceeded = ModuliError::BudgetExceeded { budget };
    let gens = [
        (Generator::X, base.sigma_x(), other.sigma_x()),
        (Generator::Y, base.sigma_y(), other.sigma_y()),
    ];
    // vertex: (element of the base group, word label, image in the other dessin)
    let mut index: HashMap<Permutation, usize> = HashMap::new();
    let mut labels: Vec<(Word, Permutation)> = Vec::new();
    let mut elements: Vec<Permutation> = Vec::new();
    let identity = Permutation::identity(base.degree());
    index.insert(identity.clone(), 0);
    elements.push(identity);
    labels.push((Word::identity(), Permutation::identity(other.degree())));
    let mut steps = 0u64;
    let mut head = 0;
    while head < elements.len() {
        let v = elements[head].clone();
        for (gen, s_base, s_other) in gens {
            steps += 1;
            if steps > budget {
                return Err(exceeded);
            }
            let w = v.then(s_base);
            let (label_v, image_v) = &labels[head];
            let through = image_v.then(s_other);
            match index.get(&w) {
                None => {
                    let label = label_v.mul(&Word::generator(gen, 1));
                    index.insert(w.clone(), elements.len());
                    elements.push(w);
                    labels.push((label, through));
                }
                Some(&t) => {
                    let (label_w, image_w) = &labels[t];
                    let image = through.then(&image_w.inverse());
                    if !image.is_identity() {
                        let word = label_v
                            .mul(&Word::generator(gen, 1))
                            .mul(&label_w.inverse());
                        return Ok((word, image));
                    }
                }
            }
        }
        head += 1;
    }
    Err(exceeded)
}

fn verify(w: &Witness, d1: &Dessin, d2: &Dessin) {
    let (trivial, nontrivial) = match w.trivial_on {
        Side::First => (d1, d2),
        Side::Second => (d2, d1),
    };
    let on_trivial = w
        .word
        .evaluate(trivial.sigma_x(), trivial.sigma_y())
        .expect("same degree");
    let on_other = w
        .word
        .evaluate(nontrivial.sigma_x(), nontrivial.sigma_y())
        .expect("same degree");
    assert!(
        on_trivial.is_identity(),
        "witness must be trivial on its side"
    );
    assert_eq!(on_other, w.image, "witness image must match");
    assert!(!on_other.is_identity(), "witness must be non-trivial");
}

/// Per-dessin invariants in an [`OrbitReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitEntry {
    pub name: String,
    pub degree: usize,
    pub passport: Passport,
    pub genus: u64,
    pub monodromy_order: GroupOrder,
    /// Degree of the regular cover, which is the monodromy order.
    pub cover_degree: GroupOrder,
    /// Genus of the regular cover, when its degree fits in a `u64`.
    pub cover_genus: Option<u64>,
    pub full_symmetric: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport {
    pub entries: Vec<OrbitEntry>,
    pub isomorphic: Vec<Vec<bool>>,
    pub kernels_equal: Vec<Vec<bool>>,
    /// `(i, j, witness)` for each kernel-distinct pair `i < j`, when requested.
    pub witnesses: Vec<(usize, usize, Witness)>,
}

impl OrbitReport {
    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    /// True when no two dessins share a kernel.
    pub fn pairwise_distinct(&self) -> bool {
        let n = self.entries.len();
        (0..n).all(|i| (0..n).all(|j| i == j || !self.kernels_equal[i][j]))
    }
}

fn entry(d: &Dessin, fallback: String) -> OrbitEntry {
    let g = d.monodromy_group();
    let order = g.order();
    let cover_genus = order.to_u64().and_then(|n| {
        let ord = |p: &Permutation| p.small_order();
        let ty = RegularType {
            p: ord(d.sigma_x())?,
            q: ord(d.sigma_y())?,
            r: ord(&d.sigma_x().then(d.sigma_y()))?,
        };
        euler_rh(n, ty).ok().map(|chi| genus_from_euler(chi) as u64)
    });
    OrbitEntry {
        name: d.name().map(str::to_owned).unwrap_or(fallback),
        degree: d.degree(),
        passport: d.passport(),
        genus: d.genus(),
        monodromy_order: order.clone(),
        cover_degree: order,
        cover_genus,
        full_symmetric: g.is_full_symmetric(),
    }
}

/// Pairwise isomorphism and kernel comparison. With `witness_budget`, a
/// distinguishing word is searched for each kernel-distinct pair.
pub fn orbit_report(
    dessins: &[Dessin],
    witness_budget: Option<u64>,
) -> Result<OrbitReport, ModuliError> {
    if dessins.is_empty() {
        return Err(ModuliError::Empty);
    }
    let n = dessins.len();
    let entries: Vec<OrbitEntry> = dessins
        .iter()
        .enumerate()
        .map(|(i, d)| entry(d, format!("d{}", i + 1)))
        .collect();
    let mut isomorphic = vec![vec![true; n]; n];
    let mut kernels = vec![vec![true; n]; n];
    let mut witnesses = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let iso = dessins[i].isomorphic(&dessins[j]);
            let same = iso || kernels_equal(&dessins[i], &dessins[j]);
            isomorphic[i][j] = iso;
            isomorphic[j][i] = iso;
            kernels[i][j] = same;
            kernels[j][i] = same;
            if let (false, Some(budget)) = (same, witness_budget) {
                if let Some(w) = distinguishing_witness(&dessins[i], &dessins[j], budget)? {
                    witnesses.push((i, j, w));
                }
            }
        }
    }
    Ok(OrbitReport {
        entries,
        isomorphic,
        kernels_equal: kernels,
        witnesses,
    })
}

/// The centre of the regular cover's monodromy group and the central quotient.
pub fn central_quotient_of_cover(
    d: &Dessin,
    cap: u64,
) -> Result<(Dessin, Vec<Permutation>), DessinError> {
    let cover = d.regular_cover(cap)?;
    let centre = cover.monodromy_group().center(cap)?;
    let q = cover.quotient_by_central(&centre)?;
    Ok((q, centre))
}

/// [`central_quotient_of_cover`] with the default element cap.
pub fn central_quotient(d: &Dessin) -> Result<Dessin, DessinError> {
    central_quotient_of_cover(d, DEFAULT_ELEMENT_CAP).map(|(q, _)| q)
}
