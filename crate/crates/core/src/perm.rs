//! Permutations of `{1..n}` with cycle-notation parsing and printing.
//!
//! Permutations act on the right: `p.then(&q)` sends a point `i` to
//! `q(p(i))`. Points are 1-based at every public boundary; storage is
//! 0-based.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("point {point} out of range 1..{degree} at position {pos}")]
    OutOfRange {
        point: usize,
        degree: usize,
        pos: usize,
    },
    #[error("point {point} repeated at position {pos}")]
    Repeated { point: usize, pos: usize },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
}

/// A bijection of `{1..degree}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 1-based images: `images[i - 1]` is the image of `i`.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let degree = images.len();
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; degree];
        let mut out = Vec::with_capacity(degree);
        for (pos, &point) in images.iter().enumerate() {
            if point == 0 || point > degree {
                return Err(PermError::OutOfRange { point, degree, pos });
            }
            if std::mem::replace(&mut seen[point - 1], true) {
                return Err(PermError::Repeated { point, pos });
            }
            out.push((point - 1) as u32);
        }
        Ok(Permutation { images: out })
    }

    /// Wraps 0-based images. The caller guarantees bijectivity.
    pub(crate) fn from_raw(images: Vec<u32>) -> Self {
        debug_assert!(is_bijection(&images));
        Permutation { images }
    }

    /// 0-based image of a 0-based point.
    #[inline]
    pub(crate) fn at(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    /// Parses cycle notation such as `(1,2,3)(4,5)`. Points not mentioned are fixed.
    pub fn parse(text: &str, degree: usize) -> Result<Self, PermError> {
        parse_cycles(text, degree)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based `point`.
    pub fn image(&self, point: usize) -> usize {
        self.images[point - 1] as usize + 1
    }

    /// 1-based images in point order.
    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&i| i as usize + 1)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Apply `self`, then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        self.check_degree(other)?;
        Ok(self.then(other))
    }

    /// Unchecked [`compose`](Self::compose); panics on degree mismatch.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `g⁻¹ · self · g`, the relabelling of `self` along `g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        assert_eq!(self.degree(), g.degree(), "degree mismatch");
        let mut out = vec![0u32; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            out[g.images[i] as usize] = g.images[j as usize];
        }
        Permutation { images: out }
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &j)| other.images[j as usize] == self.images[other.images[i] as usize])
    }

    /// Integer power, negative exponents allowed. Runs in linear time.
    pub fn pow(&self, exp: i64) -> Permutation {
        let n = self.degree();
        let mut out = vec![0u32; n];
        let mut seen = vec![false; n];
        let mut cycle = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            cycle.clear();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p] as usize;
            }
            let len = cycle.len() as i64;
            let shift = exp.rem_euclid(len) as usize;
            for (k, &q) in cycle.iter().enumerate() {
                out[q] = cycle[(k + shift) % cycle.len()] as u32;
            }
        }
        Permutation { images: out }
    }

    /// All cycles, including fixed points, as 0-based points. Each cycle
    /// starts at its smallest point; cycles are ordered by that point.
    pub(crate) fn raw_orbits(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Non-trivial cycles, 1-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.raw_orbits()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| c.into_iter().map(|p| p + 1).collect())
            .collect()
    }

    /// Every cycle including fixed points, 1-based.
    pub fn all_cycles(&self) -> Vec<Vec<usize>> {
        self.raw_orbits()
            .into_iter()
            .map(|c| c.into_iter().map(|p| p + 1).collect())
            .collect()
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        self.raw_orbits().len()
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::from_parts(self.raw_orbits().iter().map(Vec::len).collect())
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> BigUint {
        self.raw_orbits()
            .iter()
            .fold(BigUint::from(1u32), |acc, c| {
                acc.lcm(&BigUint::from(c.len()))
            })
    }

    /// The order when it fits in a `u64`.
    pub fn small_order(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for c in self.raw_orbits() {
            let len = c.len() as u64;
            acc = (acc / acc.gcd(&len)).checked_mul(len)?;
        }
        Some(acc)
    }

    /// Acts as `self` on `{1..n1}` and as `other` shifted by `n1` on the rest.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let shift = self.degree() as u32;
        let images = self
            .images
            .iter()
            .copied()
            .chain(other.images.iter().map(|&i| i + shift))
            .collect();
        Permutation { images }
    }

    fn check_degree(&self, other: &Permutation) -> Result<(), PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(())
    }
}

fn is_bijection(images: &[u32]) -> bool {
    let mut seen = vec![false; images.len()];
    images
        .iter()
        .all(|&i| (i as usize) < seen.len() && !std::mem::replace(&mut seen[i as usize], true))
}

impl fmt::Display for Permutation {
    /// Cycle notation without fixed points; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

/// Parses `perm := cycle*`, `cycle := '(' int (',' int)* ')' | '()'`, whitespace ignored.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation, PermError> {
    if degree == 0 {
        return Err(PermError::ZeroDegree);
    }
    let mut images: Vec<u32> = (0..degree as u32).collect();
    let mut used = vec![false; degree];
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    loop {
        skip_ws(&mut pos);
        if pos == bytes.len() {
            break;
        }
        if bytes[pos] != b'(' {
            return Err(PermError::Syntax {
                pos,
                msg: format!("expected '(', found {:?}", bytes[pos] as char),
            });
        }
        pos += 1;
        skip_ws(&mut pos);
        if pos < bytes.len() && bytes[pos] == b')' {
            pos += 1;
            continue;
        }
        let mut cycle: Vec<usize> = Vec::new();
        loop {
            skip_ws(&mut pos);
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err(PermError::Syntax {
                    pos,
                    msg: "expected a point".into(),
                });
            }
            let point: usize = text[start..pos].parse().map_err(|_| PermError::Syntax {
                pos: start,
                msg: "integer too large".into(),
            })?;
            if point == 0 || point > degree {
                return Err(PermError::OutOfRange {
                    point,
                    degree,
                    pos: start,
                });
            }
            if std::mem::replace(&mut used[point - 1], true) {
                return Err(PermError::Repeated { point, pos: start });
            }
            cycle.push(point - 1);
            skip_ws(&mut pos);
            match bytes.get(pos) {
                Some(b',') => pos += 1,
                Some(b')') => {
                    pos += 1;
                    break;
                }
                Some(&c) => {
                    return Err(PermError::Syntax {
                        pos,
                        msg: format!("expected ',' or ')', found {:?}", c as char),
                    })
                }
                None => {
                    return Err(PermError::Syntax {
                        pos,
                        msg: "unterminated cycle".into(),
                    })
                }
            }
        }
        for (k, &p) in cycle.iter().enumerate() {
            images[p] = cycle[(k + 1) % cycle.len()] as u32;
        }
    }
    Ok(Permutation { images })
}

/// Multiset of cycle lengths, fixed points included, sorted in decreasing order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    /// Sorts `parts` into decreasing order. Zero parts are dropped.
    pub fn from_parts(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Sum of the parts.
    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn num_cycles(&self) -> usize {
        self.0.len()
    }

    /// Canonical permutation of this type: consecutive runs `(1,..,k1)(k1+1,..)...`.
    pub fn canonical_permutation(&self) -> Permutation {
        let mut images = Vec::with_capacity(self.degree());
        let mut start = 0u32;
        for &len in &self.0 {
            let len = len as u32;
            images.extend((1..len).map(|k| start + k));
            images.push(start);
            start += len;
        }
        Permutation { images }
    }
}

impl fmt::Display for CycleType {
    /// Exponent notation for repeated parts: `2^2 1^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let part = self.0[i];
            let run = self.0[i..].iter().take_while(|&&p| p == part).count();
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{part}^{run}")?;
            } else {
                write!(f, "{part}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl FromStr for CycleType {
    type Err = PermError;

    /// Accepts parts separated by whitespace or commas, each `k` or `k^m`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = Vec::new();
        let mut offset = 0;
        for token in s.split(|c: char| c == ',' || c.is_whitespace()) {
            let pos = offset;
            offset += token.len() + 1;
            if token.is_empty() {
                continue;
            }
            let bad = |msg: &str| PermError::Syntax {
                pos,
                msg: format!("{msg}: {token:?}"),
            };
            let (base, mult) = match token.split_once('^') {
                Some((b, m)) => (b, m.parse::<usize>().map_err(|_| bad("bad multiplicity"))?),
                None => (token, 1),
            };
            let base: usize = base.parse().map_err(|_| bad("bad cycle length"))?;
            if base == 0 || mult == 0 {
                return Err(bad("cycle lengths and multiplicities must be positive"));
            }
            parts.extend(std::iter::repeat_n(base, mult));
        }
        if parts.is_empty() {
            return Err(PermError::Syntax {
                pos: 0,
                msg: "empty cycle type".into(),
            });
        }
        Ok(CycleType::from_parts(parts))
    }
}
