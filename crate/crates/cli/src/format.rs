//! The dessin text format:
//!
//! ```text
//! name h0
//! degree 12
//! x (1,2,3,7,8,9)(6,12)
//! y (1,4)(2,5)(7,10)(8,11)(3,6,9,12)
//! ```
//!
//! Keys appear in this order, one per line. Blank lines and lines starting
//! with `#` are skipped. Points are 1-based and fixed points are omitted.

use dessin_core::dessin::Dessin;
use dessin_core::perm::Permutation;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

pub fn parse_dessin(text: &str) -> Result<Dessin, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut last_line = 0;
    let mut field = |key: &str| -> Result<(usize, String), FormatError> {
        let (line, body) = lines.next().ok_or_else(|| FormatError {
            line: last_line + 1,
            msg: format!("missing `{key}` line"),
        })?;
        last_line = line;
        let (k, v) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        if k != key {
            return Err(FormatError {
                line,
                msg: format!("expected `{key}`, found `{k}`"),
            });
        }
        Ok((line, v.trim().to_owned()))
    };
    let (_, name) = field("name")?;
    let (degree_line, degree_text) = field("degree")?;
    let degree: usize = degree_text.parse().map_err(|_| FormatError {
        line: degree_line,
        msg: format!("degree must be a positive integer, found {degree_text:?}"),
    })?;
    let mut perm = |key: &str| -> Result<(usize, Permutation), FormatError> {
        let (line, body) = field(key)?;
        let p = Permutation::parse(&body, degree).map_err(|e| FormatError {
            line,
            msg: format!("{key}: {e}"),
        })?;
        Ok((line, p))
    };
    let (_, x) = perm("x")?;
    let (y_line, y) = perm("y")?;
    if let Some((line, extra)) = lines.next() {
        return Err(FormatError {
            line,
            msg: format!("unexpected trailing content {extra:?}"),
        });
    }
    let d = Dessin::new(x, y).map_err(|e| FormatError {
        line: y_line,
        msg: e.to_string(),
    })?;
    Ok(if name.is_empty() {
        d
    } else {
        d.with_name(name)
    })
}

pub fn write_dessin(d: &Dessin) -> String {
    format!(
        "name {}\ndegree {}\nx {}\ny {}\n",
        d.name().unwrap_or("unnamed"),
        d.degree(),
        d.sigma_x(),
        d.sigma_y()
    )
}
