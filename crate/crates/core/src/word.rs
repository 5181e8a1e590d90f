//! Words in the free group on `x` and `y`.
//!
//! Text grammar (whitespace ignored):
//!
//! ```text
//! word := term+
//! term := atom ('^' (int | atom))*
//! atom := 'x' | 'y' | '(' word ')' | '[' word ',' word ']'
//! ```
//!
//! `a^n` is a power, `a^b` is the conjugate `b⁻¹ab`, and `[a,b]` is the
//! commutator `a⁻¹b⁻¹ab`. Exponents and conjugations chain to the left, so
//! `(w)^x^2` is `((w)^x)^2`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("zero exponent at position {pos}")]
    ZeroExponent { pos: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    X,
    Y,
}

impl Generator {
    pub fn symbol(self) -> char {
        match self {
            Generator::X => 'x',
            Generator::Y => 'y',
        }
    }
}

/// A syllable `gen^exp` with `exp != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: Generator,
    pub exp: i64,
}

/// A freely reduced word: adjacent syllables use different generators and no
/// exponent is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn generator(gen: Generator, exp: i64) -> Word {
        let mut w = Word::identity();
        w.push(gen, exp);
        w
    }

    pub fn x() -> Word {
        Word::generator(Generator::X, 1)
    }

    pub fn y() -> Word {
        Word::generator(Generator::Y, 1)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Length in the free group (sum of absolute exponents).
    pub fn len(&self) -> u64 {
        self.0.iter().map(|l| l.exp.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Appends `gen^exp`, merging with the last syllable.
    pub fn push(&mut self, gen: Generator, exp: i64) {
        if exp == 0 {
            return;
        }
        match self.0.last_mut() {
            Some(last) if last.gen == gen => {
                last.exp += exp;
                if last.exp == 0 {
                    self.0.pop();
                }
            }
            _ => self.0.push(Letter { gen, exp }),
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.clone();
        for l in &other.0 {
            out.push(l.gen, l.exp);
        }
        out
    }

    pub fn inverse(&self) -> Word {
        Word(
            self.0
                .iter()
                .rev()
                .map(|l| Letter {
                    gen: l.gen,
                    exp: -l.exp,
                })
                .collect(),
        )
    }

    pub fn pow(&self, exp: i64) -> Word {
        let base = if exp < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut out = Word::identity();
        for _ in 0..exp.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `b⁻¹ · self · b`.
    pub fn conjugate_by(&self, b: &Word) -> Word {
        b.inverse().mul(self).mul(b)
    }

    /// `[a, b] = a⁻¹b⁻¹ab`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.inverse().mul(&b.inverse()).mul(a).mul(b)
    }

    pub fn exponent_sum(&self, gen: Generator) -> i64 {
        self.0.iter().filter(|l| l.gen == gen).map(|l| l.exp).sum()
    }

    /// Image under the endomorphism `x ↦ image_x`, `y ↦ image_y`.
    pub fn substitute(&self, image_x: &Word, image_y: &Word) -> Word {
        let mut out = Word::identity();
        for l in &self.0 {
            let image = match l.gen {
                Generator::X => image_x,
                Generator::Y => image_y,
            };
            out = out.mul(&image.pow(l.exp));
        }
        out
    }

    /// Image under `x ↦ sigma_x`, `y ↦ sigma_y`, with permutations composed
    /// left to right.
    pub fn evaluate(
        &self,
        sigma_x: &Permutation,
        sigma_y: &Permutation,
    ) -> Result<Permutation, WordError> {
        if sigma_x.degree() != sigma_y.degree() {
            return Err(PermError::DegreeMismatch {
                left: sigma_x.degree(),
                right: sigma_y.degree(),
            }
            .into());
        }
        let mut acc = Permutation::identity(sigma_x.degree());
        for l in &self.0 {
            let base = match l.gen {
                Generator::X => sigma_x,
                Generator::Y => sigma_y,
            };
            acc = acc.then(&base.pow(l.exp));
        }
        Ok(acc)
    }

    /// Cyclically reduced form: strips `u ... u⁻¹` from the ends and merges
    /// the first and last syllables when they share a generator.
    pub fn cyclically_reduced(&self) -> Word {
        let mut letters = self.0.clone();
        while letters.len() > 1 && letters[0].gen == letters[letters.len() - 1].gen {
            let last = letters.pop().unwrap();
            letters[0].exp += last.exp;
            if letters[0].exp == 0 {
                letters.remove(0);
            } else {
                break;
            }
        }
        Word(letters)
    }
}

impl fmt::Display for Word {
    /// Renders in the parse grammar, e.g. `x^3y^-2x`. The identity prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{}", l.gen.symbol())?;
            if l.exp != 1 {
                write!(f, "^{}", l.exp)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s)
    }
}

pub fn parse_word(text: &str) -> Result<Word, WordError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let w = parser.word()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected character"));
    }
    Ok(w)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, msg: &str) -> WordError {
        let found = match self.src.get(self.pos) {
            Some(&c) => format!("{msg} (found {:?})", c as char),
            None => format!("{msg} (found end of input)"),
        };
        WordError::Syntax {
            pos: self.pos,
            msg: found,
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), WordError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected {:?}", c as char)))
        }
    }

    fn word(&mut self) -> Result<Word, WordError> {
        let mut w = self.term()?;
        while matches!(self.peek(), Some(b'x' | b'y' | b'(' | b'[')) {
            w = w.mul(&self.term()?);
        }
        Ok(w)
    }

    fn term(&mut self) -> Result<Word, WordError> {
        let mut w = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            match self.peek() {
                Some(b'-' | b'0'..=b'9') => {
                    let start = self.pos;
                    let exp = self.int()?;
                    if exp == 0 {
                        return Err(WordError::ZeroExponent { pos: start });
                    }
                    w = w.pow(exp);
                }
                _ => {
                    let b = self.atom()?;
                    w = w.conjugate_by(&b);
                }
            }
        }
        Ok(w)
    }

    fn int(&mut self) -> Result<i64, WordError> {
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if digits == self.pos {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| WordError::Syntax {
                pos: start,
                msg: "exponent out of range".into(),
            })
    }

    fn atom(&mut self) -> Result<Word, WordError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(Word::x())
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(Word::y())
            }
            // the identity, so that `Display` output parses back
            Some(b'1') if !matches!(self.src.get(self.pos + 1), Some(b'0'..=b'9')) => {
                self.pos += 1;
                Ok(Word::identity())
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.word()?;
                self.expect(b',')?;
                let b = self.word()?;
                self.expect(b']')?;
                Ok(Word::commutator(&a, &b))
            }
            _ => Err(self.error("expected 'x', 'y', '1', '(' or '['")),
        }
    }
}

/// The word `x^3y^2(x^3y^2)^x(x^3y^2)^(x^2)`, trivial under the first
/// bundled genus-1 dessin and non-trivial under its conjugates.
pub const KNOWN_WITNESS: &str = "x^3y^2(x^3y^2)^x(x^3y^2)^(x^2)";
