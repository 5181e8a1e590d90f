//! Triangle-group types, the table of inclusions between triangle groups,
//! and normality of a regular dessin's kernel in a larger triangle group.
//!
//! `Δ(p,q,r) = ⟨x, y | x^p, y^q, (xy)^r⟩`. A regular dessin of type
//! `(p,q,r)` is a finite quotient of `Δ(p,q,r)`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::dessin::{Dessin, DessinError};
use crate::fpgroup::{enumerate_subgroup, CosetAction, FpError};
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::word::{Word, WordError};

const BUILTIN_TABLE: &str = include_str!("../data/triangle_inclusions.txt");

/// Coset cap used when checking table rows.
const VALIDATION_CAP: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangleError {
    #[error("triangle type entries must be at least 2, got {0}")]
    EntryTooSmall(String),
    #[error("{0} is spherical; only Euclidean and hyperbolic types are supported")]
    Spherical(TriangleType),
    #[error("cannot parse triangle type {text:?}: {msg}")]
    ParseType { text: String, msg: String },
    #[error("table line {line}: {msg}")]
    Table { line: usize, msg: String },
    #[error("relation {relation} fails in the monodromy group")]
    RelationFails { relation: String },
    #[error("inclusion {0} carries no conjugation data")]
    NoConjugationData(String),
    #[error(transparent)]
    Dessin(#[from] DessinError),
    #[error(transparent)]
    Fp(#[from] FpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Spherical,
    Euclidean,
    Hyperbolic,
}

/// An ordered triple `(p,q,r)` with every entry at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriangleType {
    pub p: u64,
    pub q: u64,
    pub r: u64,
}

impl TriangleType {
    pub fn new(p: u64, q: u64, r: u64) -> Result<TriangleType, TriangleError> {
        if p < 2 || q < 2 || r < 2 {
            return Err(TriangleError::EntryTooSmall(format!("({p},{q},{r})")));
        }
        Ok(TriangleType { p, q, r })
    }

    pub fn entries(&self) -> [u64; 3] {
        [self.p, self.q, self.r]
    }

    /// `1/p + 1/q + 1/r` compared with 1.
    pub fn geometry(&self) -> Geometry {
        let (p, q, r) = (self.p as u128, self.q as u128, self.r as u128);
        let lhs = q * r + p * r + p * q;
        match lhs.cmp(&(p * q * r)) {
            std::cmp::Ordering::Greater => Geometry::Spherical,
            std::cmp::Ordering::Equal => Geometry::Euclidean,
            std::cmp::Ordering::Less => Geometry::Hyperbolic,
        }
    }

    /// `1 - 1/p - 1/q - 1/r` as a fraction `(num, den)`; proportional to the
    /// hyperbolic area of the fundamental domain.
    fn area(&self) -> (i128, i128) {
        let (p, q, r) = (self.p as i128, self.q as i128, self.r as i128);
        (p * q * r - q * r - p * r - p * q, p * q * r)
    }

    /// The defining relators `x^p, y^q, (xy)^r`.
    pub fn relators(&self) -> Vec<Word> {
        let xy = Word::x().mul(&Word::y());
        vec![
            Word::x().pow(self.p as i64),
            Word::y().pow(self.q as i64),
            xy.pow(self.r as i64),
        ]
    }

    fn reject_spherical(self) -> Result<TriangleType, TriangleError> {
        if self.geometry() == Geometry::Spherical {
            return Err(TriangleError::Spherical(self));
        }
        Ok(self)
    }
}

impl fmt::Display for TriangleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.r)
    }
}

impl FromStr for TriangleType {
    type Err = TriangleError;

    /// Accepts `p,q,r`, optionally parenthesised.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |msg: &str| TriangleError::ParseType {
            text: s.to_owned(),
            msg: msg.to_owned(),
        };
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(err("expected three comma-separated integers"));
        }
        let mut v = [0u64; 3];
        for (slot, part) in v.iter_mut().zip(&parts) {
            *slot = part.parse().map_err(|_| err("not a positive integer"))?;
        }
        TriangleType::new(v[0], v[1], v[2])
    }
}

/// Conjugation by a coset representative `rep` of the sub group, recorded as
/// the induced substitution on the sub-group generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjugation {
    /// Representative, as a word in the super-group generators.
    pub rep: Word,
    pub image_x: Word,
    pub image_y: Word,
}

impl Conjugation {
    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.image_x, &self.image_y)
    }

    /// Conjugation by `rep · other.rep`: apply `self`, then `other`.
    pub fn then(&self, other: &Conjugation) -> Conjugation {
        Conjugation {
            rep: self.rep.mul(&other.rep),
            image_x: other.apply(&self.image_x),
            image_y: other.apply(&self.image_y),
        }
    }
}

/// `Δ(sub) ⊂ Δ(over)` with finite index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inclusion {
    pub sub: TriangleType,
    pub over: TriangleType,
    pub index: u64,
    /// Images of the sub-group generators `x, y` in the super group's
    /// generators, when known.
    pub images: Option<(Word, Word)>,
    pub conjugations: Vec<Conjugation>,
}

impl Inclusion {
    /// Images of `x`, `y` and `z = (xy)⁻¹`.
    pub fn generator_images(&self) -> Option<[Word; 3]> {
        let (a, b) = self.images.as_ref()?;
        Some([a.clone(), b.clone(), a.mul(b).inverse()])
    }

    pub fn is_normal_row(&self) -> bool {
        !self.conjugations.is_empty()
    }
}

impl fmt::Display for Inclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ{} ⊂ Δ{} (index {})", self.sub, self.over, self.index)
    }
}

/// An entry of a table row: `coef * var`, or a constant when `var` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Expr {
    coef: u64,
    var: Option<char>,
}

impl Expr {
    fn parse(text: &str) -> Option<Expr> {
        let text = text.trim();
        let split = text
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(text.len());
        let (digits, rest) = text.split_at(split);
        let coef = if digits.is_empty() {
            1
        } else {
            digits.parse().ok()?
        };
        match rest {
            "" if !digits.is_empty() => Some(Expr { coef, var: None }),
            "n" | "s" | "t" => Some(Expr {
                coef,
                var: rest.chars().next(),
            }),
            _ => None,
        }
    }

    fn eval(&self, env: &[(char, u64)]) -> u64 {
        match self.var {
            None => self.coef,
            Some(v) => self.coef * env.iter().find(|(c, _)| *c == v).unwrap().1,
        }
    }
}

#[derive(Debug, Clone)]
struct Row {
    line: usize,
    sub: [Expr; 3],
    over: [Expr; 3],
    index: u64,
    images: Option<(Word, Word)>,
    conjugations: Vec<Conjugation>,
}

impl Row {
    fn vars(&self) -> Vec<char> {
        let mut v: Vec<char> = self
            .sub
            .iter()
            .chain(&self.over)
            .filter_map(|e| e.var)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Binds the parameters so that the sub-type equals `t`.
    fn bind(&self, t: [u64; 3]) -> Option<Vec<(char, u64)>> {
        let mut env: Vec<(char, u64)> = Vec::new();
        for (e, &value) in self.sub.iter().zip(&t) {
            match e.var {
                None if e.coef != value => return None,
                None => {}
                Some(v) => {
                    if value % e.coef != 0 {
                        return None;
                    }
                    let k = value / e.coef;
                    match env.iter().find(|(c, _)| *c == v) {
                        Some(&(_, bound)) if bound != k => return None,
                        Some(_) => {}
                        None => env.push((v, k)),
                    }
                }
            }
        }
        if env.iter().any(|&(_, k)| k < 2) {
            return None;
        }
        Some(env)
    }

    fn instantiate(&self, env: &[(char, u64)]) -> Option<(TriangleType, TriangleType)> {
        let ty = |es: &[Expr; 3]| {
            TriangleType::new(es[0].eval(env), es[1].eval(env), es[2].eval(env)).ok()
        };
        let sub = ty(&self.sub)?;
        let over = ty(&self.over)?;
        if sub.geometry() == Geometry::Spherical || over.geometry() == Geometry::Spherical {
            return None;
        }
        Some((sub, over))
    }

    fn describe(&self) -> String {
        let show = |es: &[Expr; 3]| {
            let part = |e: &Expr| match (e.coef, e.var) {
                (c, None) => c.to_string(),
                (1, Some(v)) => v.to_string(),
                (c, Some(v)) => format!("{c}{v}"),
            };
            format!("({},{},{})", part(&es[0]), part(&es[1]), part(&es[2]))
        };
        format!("{} < {}", show(&self.sub), show(&self.over))
    }
}

/// A relabelling of the generators of a triangle group: the images of `x`,
/// `y` under an isomorphism permuting the type entries, and its inverse.
struct Relabel {
    perm: [usize; 3],
    fwd: (&'static str, &'static str),
    back: (&'static str, &'static str),
}

/// Query entry `i` equals row entry `perm[i]`.
const RELABELS: [Relabel; 6] = [
    Relabel {
        perm: [0, 1, 2],
        fwd: ("x", "y"),
        back: ("x", "y"),
    },
    Relabel {
        perm: [1, 2, 0],
        fwd: ("y", "y^-1x^-1"),
        back: ("y^-1x^-1", "x"),
    },
    Relabel {
        perm: [2, 0, 1],
        fwd: ("y^-1x^-1", "x"),
        back: ("y", "y^-1x^-1"),
    },
    Relabel {
        perm: [1, 0, 2],
        fwd: ("y^-1", "x^-1"),
        back: ("y^-1", "x^-1"),
    },
    Relabel {
        perm: [0, 2, 1],
        fwd: ("x^-1", "xy"),
        back: ("x^-1", "xy"),
    },
    Relabel {
        perm: [2, 1, 0],
        fwd: ("xy", "y^-1"),
        back: ("xy", "y^-1"),
    },
];

fn w(text: &str) -> Word {
    text.parse().expect("built-in word")
}

/// The inclusion table.
#[derive(Debug, Clone)]
pub struct InclusionTable {
    rows: Vec<Row>,
}

impl InclusionTable {
    /// Parses a table without validating it.
    pub fn parse(text: &str) -> Result<InclusionTable, TriangleError> {
        let mut rows = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap().trim();
            if body.is_empty() {
                continue;
            }
            rows.push(parse_row(line, body)?);
        }
        Ok(InclusionTable { rows })
    }

    /// The bundled table, validated on first use.
    pub fn builtin() -> &'static InclusionTable {
        static TABLE: OnceLock<InclusionTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            let t = InclusionTable::parse(BUILTIN_TABLE).expect("bundled table parses");
            t.validate().expect("bundled table is consistent");
            t
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Checks every row on a range of parameter values: hyperbolic instances
    /// must have area ratio equal to the index; rows with images must have
    /// that index by coset enumeration, the images must satisfy the sub-type
    /// relations, and the conjugation data must agree with the images, in
    /// the finite quotient given by the coset action.
    pub fn validate(&self) -> Result<(), TriangleError> {
        for row in &self.rows {
            let vars = row.vars();
            let mut envs: Vec<Vec<(char, u64)>> = vec![Vec::new()];
            for v in &vars {
                envs = envs
                    .into_iter()
                    .flat_map(|env| {
                        (2..=9u64).map(move |k| {
                            let mut e = env.clone();
                            e.push((*v, k));
                            e
                        })
                    })
                    .collect();
            }
            let mut coset_checks = 0;
            for env in &envs {
                let Some((sub, over)) = row.instantiate(env) else {
                    continue;
                };
                let fail = |msg: String| TriangleError::Table {
                    line: row.line,
                    msg: format!("{} at {sub} < {over}: {msg}", row.describe()),
                };
                if sub.geometry() == Geometry::Hyperbolic || over.geometry() == Geometry::Hyperbolic
                {
                    let (a, b) = sub.area();
                    let (c, d) = over.area();
                    if c <= 0 || a * d != row.index as i128 * b * c {
                        return Err(fail(format!(
                            "area ratio is {a}/{b} : {c}/{d}, not {}",
                            row.index
                        )));
                    }
                }
                if let Some(images) = &row.images {
                    if coset_checks < 4 && over.geometry() == Geometry::Hyperbolic {
                        coset_checks += 1;
                        check_images(sub, over, row.index, images, &row.conjugations)
                            .map_err(fail)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Every table inclusion whose sub-type is `t` up to permutation,
    /// rewritten in terms of the generators of `Δ(t)` as given.
    pub fn inclusions_of(&self, t: TriangleType) -> Result<Vec<Inclusion>, TriangleError> {
        let t = t.reject_spherical()?;
        let query = t.entries();
        let mut out = Vec::new();
        let mut seen: HashSet<(usize, Vec<(char, u64)>)> = HashSet::new();
        for (k, row) in self.rows.iter().enumerate() {
            for relabel in &RELABELS {
                let permuted = [
                    query[relabel.perm.iter().position(|&i| i == 0).unwrap()],
                    query[relabel.perm.iter().position(|&i| i == 1).unwrap()],
                    query[relabel.perm.iter().position(|&i| i == 2).unwrap()],
                ];
                let Some(env) = row.bind(permuted) else {
                    continue;
                };
                let Some((_, over)) = row.instantiate(&env) else {
                    continue;
                };
                if !seen.insert((k, env)) {
                    continue;
                }
                let (fx, fy) = (w(relabel.fwd.0), w(relabel.fwd.1));
                let (bx, by) = (w(relabel.back.0), w(relabel.back.1));
                let images = row
                    .images
                    .as_ref()
                    .map(|(ix, iy)| (fx.substitute(ix, iy), fy.substitute(ix, iy)));
                let conjugations = row
                    .conjugations
                    .iter()
                    .map(|c| {
                        let inner = |f: &Word| c.apply(f).substitute(&bx, &by);
                        Conjugation {
                            rep: c.rep.clone(),
                            image_x: inner(&fx),
                            image_y: inner(&fy),
                        }
                    })
                    .collect();
                out.push(Inclusion {
                    sub: t,
                    over,
                    index: row.index,
                    images,
                    conjugations,
                });
            }
        }
        Ok(out)
    }
}

fn parse_row(line: usize, body: &str) -> Result<Row, TriangleError> {
    let err = |msg: String| TriangleError::Table { line, msg };
    let fields: Vec<&str> = body.split('|').map(str::trim).collect();
    if fields.len() < 4 {
        return Err(err(format!(
            "expected at least 4 fields, got {}",
            fields.len()
        )));
    }
    let triple = |text: &str| -> Result<[Expr; 3], TriangleError> {
        let inner = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| err(format!("type {text:?} must be parenthesised")))?;
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 3 {
            return Err(err(format!("type {text:?} needs three entries")));
        }
        let mut out = [Expr { coef: 0, var: None }; 3];
        for (slot, part) in out.iter_mut().zip(parts) {
            *slot = Expr::parse(part).ok_or_else(|| err(format!("bad entry {part:?}")))?;
        }
        Ok(out)
    };
    let word = |text: &str| -> Result<Word, TriangleError> {
        text.parse()
            .map_err(|e: WordError| err(format!("word {text:?}: {e}")))
    };
    let pair = |text: &str| -> Result<(Word, Word), TriangleError> {
        let (a, b) = text
            .split_once(';')
            .ok_or_else(|| err(format!("expected `u ; v`, got {text:?}")))?;
        Ok((word(a.trim())?, word(b.trim())?))
    };
    let sub = triple(fields[0])?;
    let over = triple(fields[1])?;
    let index: u64 = fields[2]
        .parse()
        .map_err(|_| err(format!("bad index {:?}", fields[2])))?;
    if index < 2 {
        return Err(err("index must be at least 2".into()));
    }
    let images = match fields[3] {
        "-" => None,
        text => Some(pair(text)?),
    };
    let mut conjugations = Vec::new();
    for field in &fields[4..] {
        if images.is_none() {
            return Err(err("conjugations need generator images".into()));
        }
        let (rep, rest) = field
            .split_once(':')
            .ok_or_else(|| err(format!("expected `rep: u ; v`, got {field:?}")))?;
        let (image_x, image_y) = pair(rest)?;
        conjugations.push(Conjugation {
            rep: word(rep.trim())?,
            image_x,
            image_y,
        });
    }
    Ok(Row {
        line,
        sub,
        over,
        index,
        images,
        conjugations,
    })
}

/// Extra relators whose quotients of small triangle groups are often finite
/// and non-abelian; used only to obtain test groups.
const EXTRA_RELATORS: [&str; 15] = [
    "[x,y]",
    "[x,y]^2",
    "[x,y]^3",
    "(xy^-1)^2",
    "(xy^-1)^3",
    "(xy^-1)^4",
    "(xy^-1)^5",
    "(xy^-1)^6",
    "(x^2y)^3",
    "(x^2y)^4",
    "(xy^2)^3",
    "(xy^2)^4",
    "[x^2,y]",
    "[x,y^2]",
    "[x^2,y^2]",
];

/// Checks one instance of a row: the index by coset enumeration, then the
/// sub-type relations and the conjugation data in every finite quotient of
/// `Δ(over)` at hand (the coset action itself, and the quotients by each of
/// [`EXTRA_RELATORS`] that complete within the cap).
fn check_images(
    sub: TriangleType,
    over: TriangleType,
    index: u64,
    images: &(Word, Word),
    conjugations: &[Conjugation],
) -> Result<(), String> {
    let (ix, iy) = images;
    let action: CosetAction =
        enumerate_subgroup(&over.relators(), &[ix.clone(), iy.clone()], VALIDATION_CAP)
            .map_err(|e| e.to_string())?;
    if action.index() as u64 != index {
        return Err(format!("coset enumeration gives index {}", action.index()));
    }
    let mut quotients = vec![action];
    for extra in EXTRA_RELATORS {
        let mut rels = over.relators();
        rels.push(w(extra));
        if let Ok(q) = enumerate_subgroup(&rels, &[], VALIDATION_CAP) {
            quotients.push(q);
        }
    }
    for (k, q) in quotients.iter().enumerate() {
        let eval = |word: &Word| word.evaluate(&q.sigma_x, &q.sigma_y).expect("same degree");
        let (ax, ay) = (eval(ix), eval(iy));
        for (rel, name) in sub.relators().iter().zip(["x", "y", "xy"]) {
            if !rel.evaluate(&ax, &ay).expect("same degree").is_identity() {
                return Err(format!("image of {name} has the wrong order"));
            }
        }
        for c in conjugations {
            let r = eval(&c.rep);
            if k == 0 && r.image(1) == 1 {
                return Err(format!("representative {} lies in the sub group", c.rep));
            }
            for (gen, target) in [(&ax, &c.image_x), (&ay, &c.image_y)] {
                let lhs = gen.conjugate_by(&r);
                let rhs = target.evaluate(&ax, &ay).expect("same degree");
                if lhs != rhs {
                    return Err(format!("conjugation by {} disagrees with {target}", c.rep));
                }
            }
        }
    }
    Ok(())
}

/// Whether `t` appears as a sub-type in the bundled table, with the
/// inclusions found.
pub fn is_maximal(t: TriangleType) -> Result<(bool, Vec<Inclusion>), TriangleError> {
    let found = InclusionTable::builtin().inclusions_of(t)?;
    Ok((found.is_empty(), found))
}

/// The first bundled inclusion `Δ(sub) ⊂ Δ(over)`.
pub fn find_inclusion(
    sub: TriangleType,
    over: TriangleType,
) -> Result<Option<Inclusion>, TriangleError> {
    Ok(InclusionTable::builtin()
        .inclusions_of(sub)?
        .into_iter()
        .find(|i| i.over == over))
}

/// Whether the kernel of `Δ(sub) → G`, for the regular dessin `d` with
/// monodromy group `G`, is normal in `Δ(over)`.
///
/// For each conjugation `φ`, the assignment `σx ↦ φ(x)(σx, σy)`,
/// `σy ↦ φ(y)(σx, σy)` must extend to an automorphism of `G`; that holds iff
/// `⟨σx ⊕ φ(x), σy ⊕ φ(y)⟩` and `⟨φ(x), φ(y)⟩` both have order `|G|`.
pub fn normal_in_supergroup(d: &Dessin, inc: &Inclusion) -> Result<bool, TriangleError> {
    let g = d.monodromy_group();
    if g.order() != d.degree() as u64 {
        return Err(DessinError::NotRegular {
            degree: d.degree(),
            order: g.order(),
        }
        .into());
    }
    let (sx, sy) = (d.sigma_x(), d.sigma_y());
    let names = [
        format!("x^{}", inc.sub.p),
        format!("y^{}", inc.sub.q),
        format!("(xy)^{}", inc.sub.r),
    ];
    for (rel, name) in inc.sub.relators().iter().zip(names) {
        if !rel.evaluate(sx, sy).expect("same degree").is_identity() {
            return Err(TriangleError::RelationFails { relation: name });
        }
    }
    if inc.conjugations.is_empty() {
        return Err(TriangleError::NoConjugationData(inc.to_string()));
    }
    let order = g.order();
    for c in &inc.conjugations {
        let ax = c.image_x.evaluate(sx, sy).expect("same degree");
        let ay = c.image_y.evaluate(sx, sy).expect("same degree");
        let image = PermGroup::from_generators(&[ax.clone(), ay.clone()]).expect("same degree");
        let graph = PermGroup::from_generators(&[sx.direct_sum(&ax), sy.direct_sum(&ay)])
            .expect("same degree");
        if image.order() != order || graph.order() != order {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Evaluates a substitution on a dessin's generators.
pub fn substituted_generators(d: &Dessin, c: &Conjugation) -> (Permutation, Permutation) {
    (
        c.image_x
            .evaluate(d.sigma_x(), d.sigma_y())
            .expect("same degree"),
        c.image_y
            .evaluate(d.sigma_x(), d.sigma_y())
            .expect("same degree"),
    )
}
