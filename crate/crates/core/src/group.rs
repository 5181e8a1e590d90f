//! Finite permutation groups backed by a base and strong generating set.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::perm::Permutation;

/// Default cap on the number of group elements materialised by
/// [`PermGroup::elements`] and friends.
pub const DEFAULT_ELEMENT_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("a group needs at least one generator")]
    NoGenerators,
    #[error("generator degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("group order {order} exceeds cap {cap}")]
    CapExceeded { order: GroupOrder, cap: u64 },
}

/// Exact group order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroupOrder(BigUint);

impl GroupOrder {
    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// `n!` as an order.
    pub fn factorial(n: usize) -> GroupOrder {
        GroupOrder((1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k)))
    }
}

impl From<u64> for GroupOrder {
    fn from(v: u64) -> Self {
        GroupOrder(BigUint::from(v))
    }
}

impl From<BigUint> for GroupOrder {
    fn from(v: BigUint) -> Self {
        GroupOrder(v)
    }
}

impl PartialEq<u64> for GroupOrder {
    fn eq(&self, other: &u64) -> bool {
        self.to_u64() == Some(*other)
    }
}

impl PartialOrd<u64> for GroupOrder {
    fn partial_cmp(&self, other: &u64) -> Option<std::cmp::Ordering> {
        Some(self.0.cmp(&BigUint::from(*other)))
    }
}

impl fmt::Display for GroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One level of the stabiliser chain.
#[derive(Clone, Debug)]
struct Level {
    /// 0-based base point.
    base: usize,
    /// Strong generators fixing all earlier base points.
    gens: Vec<Permutation>,
    /// `reps[p] = (u, u⁻¹)` with `base^u = p` for each orbit point `p`.
    reps: Vec<Option<(Permutation, Permutation)>>,
    orbit: Vec<usize>,
    /// Schreier generators `(orbit index, generator index)` already sifted to
    /// the identity.
    checked: HashSet<(u32, u32)>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut level = Level {
            base,
            gens: Vec::new(),
            reps: vec![None; degree],
            orbit: Vec::new(),
            checked: HashSet::new(),
        };
        level.rebuild_orbit();
        level
    }

    /// Recomputes the orbit of the base point and its transversal.
    /// Existing representatives are kept so that checked pairs stay valid.
    fn rebuild_orbit(&mut self) {
        let degree = self.reps.len();
        if self.orbit.is_empty() {
            let id = Permutation::identity(degree);
            self.reps[self.base] = Some((id.clone(), id));
            self.orbit.push(self.base);
        }
        let mut i = 0;
        while i < self.orbit.len() {
            let p = self.orbit[i];
            for g in &self.gens {
                let q = g.at(p);
                if self.reps[q].is_none() {
                    let u = self.reps[p].as_ref().unwrap().0.then(g);
                    let inv = u.inverse();
                    self.reps[q] = Some((u, inv));
                    self.orbit.push(q);
                }
            }
            i += 1;
        }
    }
}

/// A permutation group with a deterministic base and strong generating set.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

impl PermGroup {
    /// Runs deterministic Schreier–Sims on `gens`. New base points are always
    /// the smallest point moved by the element that needs them.
    pub fn from_generators(gens: &[Permutation]) -> Result<PermGroup, GroupError> {
        let first = gens.first().ok_or(GroupError::NoGenerators)?;
        let degree = first.degree();
        if let Some(bad) = gens.iter().find(|g| g.degree() != degree) {
            return Err(GroupError::DegreeMismatch {
                left: degree,
                right: bad.degree(),
            });
        }
        let mut group = PermGroup {
            degree,
            generators: gens.to_vec(),
            levels: Vec::new(),
        };
        group.schreier_sims();
        Ok(group)
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::from_generators(&[Permutation::identity(degree)]).unwrap()
    }

    /// The symmetric group on `degree` points via `(1,2)` and `(1,2,...,n)`.
    pub fn symmetric(degree: usize) -> PermGroup {
        let mut gens = vec![Permutation::identity(degree)];
        if degree >= 2 {
            let mut t: Vec<usize> = (1..=degree).collect();
            t.swap(0, 1);
            let c: Vec<usize> = (2..=degree).chain(std::iter::once(1)).collect();
            gens = vec![
                Permutation::from_images(&t).unwrap(),
                Permutation::from_images(&c).unwrap(),
            ];
        }
        PermGroup::from_generators(&gens).unwrap()
    }

    fn schreier_sims(&mut self) {
        let degree = self.degree;
        for g in &self.generators {
            if g.is_identity() {
                continue;
            }
            if self.levels.iter().all(|l| g.at(l.base) == l.base) {
                let b = smallest_moved(g).unwrap();
                self.levels.push(Level::new(b, degree));
            }
        }
        for g in self.generators.clone() {
            if g.is_identity() {
                continue;
            }
            // g belongs to S_1..S_j where j is the first level whose base it moves
            for level in self.levels.iter_mut() {
                level.gens.push(g.clone());
                if g.at(level.base) != level.base {
                    break;
                }
            }
        }
        for level in &mut self.levels {
            level.rebuild_orbit();
        }

        let mut i = self.levels.len();
        while i > 0 {
            let idx = i - 1;
            match self.find_unchecked_schreier(idx) {
                None => i -= 1,
                Some((residue, reached)) => {
                    // residue survived sifting below level idx; add it to
                    // levels idx+1..=reached, extending the base if needed
                    if reached == self.levels.len() {
                        let b = smallest_moved(&residue).unwrap();
                        self.levels.push(Level::new(b, degree));
                    }
                    for l in idx + 1..=reached {
                        self.levels[l].gens.push(residue.clone());
                        self.levels[l].rebuild_orbit();
                    }
                    i = reached + 1;
                }
            }
        }
        for level in &mut self.levels {
            level.checked = HashSet::new();
        }
    }

    /// Tests Schreier generators at `idx` until one fails to sift through
    /// the levels below. Returns the residue and the level where sifting stopped.
    fn find_unchecked_schreier(&mut self, idx: usize) -> Option<(Permutation, usize)> {
        let mut k = 0;
        while k < self.levels[idx].orbit.len() {
            let p = self.levels[idx].orbit[k];
            let mut s = 0;
            while s < self.levels[idx].gens.len() {
                let key = (k as u32, s as u32);
                if self.levels[idx].checked.contains(&key) {
                    s += 1;
                    continue;
                }
                let level = &self.levels[idx];
                let g = &level.gens[s];
                let q = g.at(p);
                let t = level.reps[p].as_ref().unwrap().0.then(g);
                let (rep_q, rep_q_inv) = level.reps[q].as_ref().unwrap();
                if &t == rep_q {
                    self.levels[idx].checked.insert(key);
                    s += 1;
                    continue;
                }
                let h = t.then(rep_q_inv);
                let (residue, reached) = self.sift_from(h, idx + 1);
                if reached < self.levels.len() || !residue.is_identity() {
                    return Some((residue, reached));
                }
                self.levels[idx].checked.insert(key);
                s += 1;
            }
            k += 1;
        }
        None
    }

    /// Sifts `g` through levels `start..`. Returns the residue and the index of
    /// the level where it dropped out (`levels.len()` if it went all the way).
    fn sift_from(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(start) {
            let p = g.at(level.base);
            match &level.reps[p] {
                Some((_, inv)) => g = g.then(inv),
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// The base as 1-based points.
    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base + 1).collect()
    }

    /// The strong generating set, without duplicates, in insertion order.
    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for level in &self.levels {
            for g in &level.gens {
                if seen.insert(g.clone()) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Sizes of the basic orbits, one per base point.
    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> GroupOrder {
        GroupOrder(
            self.levels
                .iter()
                .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len())),
        )
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool, GroupError> {
        if p.degree() != self.degree {
            return Err(GroupError::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        let (residue, reached) = self.sift_from(p.clone(), 0);
        Ok(reached == self.levels.len() && residue.is_identity())
    }

    fn check_cap(&self, cap: u64) -> Result<usize, GroupError> {
        let order = self.order();
        match order.to_u64() {
            Some(n) if n <= cap => Ok(n as usize),
            _ => Err(GroupError::CapExceeded { order, cap }),
        }
    }

    /// Every element exactly once, sorted lexicographically by image array.
    pub fn elements(&self, cap: u64) -> Result<Vec<Permutation>, GroupError> {
        let n = self.check_cap(cap)?;
        let mut acc = vec![Permutation::identity(self.degree)];
        acc.reserve(n);
        // g = u_k ... u_1 with u_l from level l
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(acc.len() * level.orbit.len());
            for h in &acc {
                for &p in &level.orbit {
                    next.push(h.then(&level.reps[p].as_ref().unwrap().0));
                }
            }
            acc = next;
        }
        acc.sort_unstable();
        debug_assert_eq!(acc.len(), n);
        Ok(acc)
    }

    /// Elements commuting with every generator, sorted like [`elements`](Self::elements).
    pub fn center(&self, cap: u64) -> Result<Vec<Permutation>, GroupError> {
        Ok(self
            .elements(cap)?
            .into_iter()
            .filter(|e| self.generators.iter().all(|g| e.commutes_with(g)))
            .collect())
    }

    /// Orbits on `{1..degree}`, each sorted, ordered by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(&self.generators, self.degree)
            .into_iter()
            .map(|o| o.into_iter().map(|p| p + 1).collect())
            .collect()
    }

    pub fn is_transitive(&self) -> bool {
        orbits_of(&self.generators, self.degree).len() == 1
    }

    pub fn is_full_symmetric(&self) -> bool {
        self.order() == GroupOrder::factorial(self.degree)
    }
}

fn smallest_moved(g: &Permutation) -> Option<usize> {
    (0..g.degree()).find(|&p| g.at(p) != p)
}

/// Orbits of `gens` on 0-based points, each sorted, ordered by smallest point.
pub(crate) fn orbits_of(gens: &[Permutation], degree: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut i = 0;
        while i < orbit.len() {
            let p = orbit[i];
            for g in gens {
                let q = g.at(p);
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn p(text: &str, n: usize) -> Permutation {
        Permutation::parse(text, n).unwrap()
    }

    fn h0() -> PermGroup {
        PermGroup::from_generators(&[
            p("(1,2,3,7,8,9)(6,12)", 12),
            p("(1,4)(2,5)(7,10)(8,11)(3,6,9,12)", 12),
        ])
        .unwrap()
    }

    /// Closure by breadth-first multiplication; independent of the BSGS.
    fn closure(gens: &[Permutation]) -> HashSet<Permutation> {
        let mut seen = HashSet::new();
        let id = Permutation::identity(gens[0].degree());
        seen.insert(id.clone());
        let mut queue = vec![id];
        while let Some(g) = queue.pop() {
            for s in gens {
                let h = g.then(s);
                if seen.insert(h.clone()) {
                    queue.push(h);
                }
            }
        }
        seen
    }

    #[test]
    fn trivial_and_small_groups() {
        let g = PermGroup::from_generators(&[Permutation::identity(4)]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.elements(10).unwrap(), vec![Permutation::identity(4)]);
        assert_eq!(g.center(10).unwrap(), vec![Permutation::identity(4)]);
        let c3 = PermGroup::from_generators(&[p("(1,2,3)", 3)]).unwrap();
        assert_eq!(c3.order(), 3);
        assert_eq!(c3.elements(10).unwrap().len(), 3);
        assert!(!c3.contains(&p("(1,2)", 3)).unwrap());
        assert!(c3.contains(&Permutation::identity(3)).unwrap());
        assert!(c3.is_transitive());
        assert!(!c3.is_full_symmetric());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            PermGroup::from_generators(&[]).unwrap_err(),
            GroupError::NoGenerators
        );
        assert_eq!(
            PermGroup::from_generators(&[p("(1,2)", 2), p("(1,2)", 3)]).unwrap_err(),
            GroupError::DegreeMismatch { left: 2, right: 3 }
        );
        let c3 = PermGroup::from_generators(&[p("(1,2,3)", 3)]).unwrap();
        assert!(c3.contains(&p("(1,2)", 4)).is_err());
        let err = h0().elements(100).unwrap_err();
        assert_eq!(
            err,
            GroupError::CapExceeded {
                order: GroupOrder::from(576),
                cap: 100
            }
        );
    }

    #[test]
    fn h0_monodromy() {
        let g = h0();
        assert_eq!(g.order(), 576);
        assert!(g.is_transitive());
        let elements = g.elements(DEFAULT_ELEMENT_CAP).unwrap();
        assert_eq!(elements.len(), 576);
        assert!(elements.windows(2).all(|w| w[0] < w[1]));
        let central = p("(1,7)(2,8)(3,9)(4,10)(5,11)(6,12)", 12);
        assert!(g.contains(&central).unwrap());
        assert_eq!(
            g.center(DEFAULT_ELEMENT_CAP).unwrap(),
            vec![Permutation::identity(12), central]
        );
        let sizes: usize = g.transversal_sizes().iter().product();
        assert_eq!(sizes, 576);
    }

    #[test]
    fn f_monodromy() {
        let g = PermGroup::from_generators(&[p("(1,2,3)", 6), p("(1,4)(2,5)(3,6)", 6)]).unwrap();
        assert_eq!(g.order(), 18);
    }

    #[test]
    fn abelian_center_is_everything() {
        let g = PermGroup::from_generators(&[p("(1,2)", 4), p("(3,4)", 4)]).unwrap();
        assert_eq!(g.center(100).unwrap().len(), 4);
        assert!(!g.is_transitive());
        assert_eq!(g.orbits(), vec![vec![1, 2], vec![3, 4]]);
        assert!(!PermGroup::from_generators(&[p("(1,2)", 3)])
            .unwrap()
            .is_transitive());
    }

    #[test]
    fn symmetric_recognition() {
        let g = PermGroup::from_generators(&[p("(1,2)", 6), p("(1,2,3,4,5,6)", 6)]).unwrap();
        assert!(g.is_full_symmetric());
        assert_eq!(g.order(), 720);
        assert!(PermGroup::symmetric(1).is_full_symmetric());
        assert_eq!(PermGroup::symmetric(10).order(), GroupOrder::factorial(10));
    }

    #[test]
    fn deterministic_base() {
        let a = h0();
        let b = h0();
        assert_eq!(a.base(), b.base());
        assert_eq!(a.strong_generators(), b.strong_generators());
        assert_eq!(a.base()[0], 1);
    }

    fn arb_gens(max_degree: usize) -> impl Strategy<Value = Vec<Permutation>> {
        (1..=max_degree).prop_flat_map(|n| {
            prop::collection::vec(Just((1..=n).collect::<Vec<_>>()).prop_shuffle(), 1..4).prop_map(
                |vs| {
                    vs.iter()
                        .map(|v| Permutation::from_images(v).unwrap())
                        .collect()
                },
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn order_matches_closure(gens in arb_gens(8)) {
            let g = PermGroup::from_generators(&gens).unwrap();
            let brute = closure(&gens);
            prop_assert_eq!(g.order(), brute.len() as u64);
            for s in &gens {
                prop_assert!(g.contains(s).unwrap());
            }
            let factorial = GroupOrder::factorial(g.degree());
            prop_assert_eq!(factorial.as_biguint() % g.order().as_biguint(), BigUint::ZERO);
            if g.degree() <= 6 {
                prop_assert_eq!(g.is_full_symmetric(), brute.len() as u64 == factorial.to_u64().unwrap());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn lagrange_and_center(gens in arb_gens(6), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..3)) {
            let g = PermGroup::from_generators(&gens).unwrap();
            let elements = g.elements(5000).unwrap();
            let sub: Vec<Permutation> = picks.iter().map(|i| i.get(&elements).clone()).collect();
            let h = PermGroup::from_generators(&sub).unwrap();
            prop_assert_eq!(g.order().as_biguint() % h.order().as_biguint(), BigUint::ZERO);
            let set: HashSet<_> = elements.iter().cloned().collect();
            prop_assert_eq!(set.len(), elements.len());
            for z in g.center(5000).unwrap() {
                prop_assert!(elements.iter().all(|e| z.commutes_with(e)));
            }
        }
    }
}
