//! Bundled dessins, addressed on the command line as `@name`.
//!
//! `h0`, `h1`, `h2` are three conjugate genus-1 dessins of degree 12, and `f`
//! is the degree-6 genus-0 dessin they all cover. `e0`, `e1`, `e2` are
//! computed on demand as the central quotients of the regular covers of
//! `h0`, `h1`, `h2`.

use dessin_core::dessin::Dessin;
use dessin_core::moduli::central_quotient;

use crate::format::parse_dessin;

pub const H0: &str = include_str!("../data/h0");
pub const H1: &str = include_str!("../data/h1");
pub const H2: &str = include_str!("../data/h2");
pub const F: &str = include_str!("../data/f");
/// A word trivial under `h0` but not under `h1`.
pub const WITNESS: &str = include_str!("../data/witness");

pub const NAMES: [&str; 7] = ["h0", "h1", "h2", "f", "e0", "e1", "e2"];

/// Looks up a bundled dessin by name.
pub fn bundled(name: &str) -> Option<Dessin> {
    let parse = |text: &str| parse_dessin(text).expect("bundled data parses");
    let quotient = |text: &str, name: &str| {
        central_quotient(&parse(text))
            .expect("bundled cover is small")
            .with_name(name)
    };
    Some(match name {
        "h0" => parse(H0),
        "h1" => parse(H1),
        "h2" => parse(H2),
        "f" => parse(F),
        "e0" => quotient(H0, "e0"),
        "e1" => quotient(H1, "e1"),
        "e2" => quotient(H2, "e2"),
        _ => return None,
    })
}

pub fn witness_word() -> &'static str {
    WITNESS.trim()
}
