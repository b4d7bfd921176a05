//! Sparse Laurent polynomials with exact integer coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent, so iteration and rendering
//! are always in ascending-exponent order and equality is structural.
//! Coefficients are arbitrary-precision integers; nothing here rounds.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Laurent polynomial over the integers in one formal variable.
///
/// The zero polynomial is the empty term map; zero coefficients are never
/// stored, so derived equality is canonical.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

/// Degree data of a nonzero polynomial.
///
/// `leading` is the coefficient at `max_deg`, `trailing` the one at
/// `min_deg`; `span = max_deg - min_deg`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeInfo {
    pub min_deg: i64,
    pub max_deg: i64,
    pub span: i64,
    pub leading: BigInt,
    pub trailing: BigInt,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaurentParseError {
    #[error("empty polynomial text")]
    Empty,
    #[error("unexpected character {found:?} at byte {at}")]
    UnexpectedChar { found: char, at: usize },
    #[error("malformed term at byte {at}")]
    MalformedTerm { at: usize },
    #[error("integer out of range at byte {at}")]
    ExponentRange { at: usize },
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `c * X^exp`, dropped entirely when `c` is zero.
    pub fn monomial(exp: i64, coeff: impl Into<BigInt>) -> Self {
        let coeff = coeff.into();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    /// Builds from `(exponent, coefficient)` pairs, summing duplicates.
    pub fn from_terms<C: Into<BigInt>>(pairs: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut poly = Self::zero();
        for (exp, c) in pairs {
            poly.add_term(exp, c.into());
        }
        poly
    }

    fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Coefficient at `exp`; zero when the term is absent.
    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// `None` for the zero polynomial, which has no degrees.
    pub fn degree_info(&self) -> Option<DegreeInfo> {
        let (&min_deg, trailing) = self.terms.first_key_value()?;
        let (&max_deg, leading) = self.terms.last_key_value()?;
        Some(DegreeInfo {
            min_deg,
            max_deg,
            span: max_deg - min_deg,
            leading: leading.clone(),
            trailing: trailing.clone(),
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `X -> X^k` by scaling every exponent. `k` must be nonzero
    /// so the substitution stays injective on terms.
    pub fn scale_exponents(&self, k: i64) -> Self {
        assert!(k != 0, "exponent scale must be nonzero");
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e * k, c.clone())).collect(),
        }
    }

    /// Renders in ascending exponent order: explicit signs, `^` exponents,
    /// e.g. `-A^-4 - A^4`. The zero polynomial renders as `0`.
    pub fn render(&self, var: char) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (&exp, coeff)) in self.terms.iter().enumerate() {
            let mag = coeff.abs();
            if i == 0 {
                if coeff.is_negative() {
                    out.push('-');
                }
            } else if coeff.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let with_var = exp != 0;
            if !with_var || !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            if with_var {
                out.push(var);
                if exp != 1 {
                    out.push('^');
                    out.push_str(&exp.to_string());
                }
            }
        }
        out
    }

    /// Inverse of [`render`](Self::render); whitespace between tokens is
    /// ignored.
    pub fn parse(text: &str, var: char) -> Result<Self, LaurentParseError> {
        let bytes: Vec<char> = text.chars().collect();
        let mut pos = 0usize;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_whitespace() {
                *pos += 1;
            }
        };
        let read_uint = |pos: &mut usize| -> Option<i64> {
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if *pos == start {
                return None;
            }
            bytes[start..*pos].iter().collect::<String>().parse().ok()
        };
        let read_bigint = |pos: &mut usize| -> Option<BigInt> {
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if *pos == start {
                return None;
            }
            bytes[start..*pos].iter().collect::<String>().parse().ok()
        };

        skip_ws(&mut pos);
        if pos == bytes.len() {
            return Err(LaurentParseError::Empty);
        }
        let mut poly = Self::zero();
        let mut first = true;
        loop {
            skip_ws(&mut pos);
            if pos == bytes.len() {
                if first {
                    return Err(LaurentParseError::Empty);
                }
                break;
            }
            let mut negative = false;
            match bytes[pos] {
                '-' => {
                    negative = true;
                    pos += 1;
                }
                '+' => {
                    pos += 1;
                }
                _ if first => {}
                found => return Err(LaurentParseError::UnexpectedChar { found, at: pos }),
            }
            skip_ws(&mut pos);
            let term_at = pos;
            let magnitude = read_bigint(&mut pos);
            let mut exp = 0i64;
            let mut saw_var = false;
            if pos < bytes.len() && bytes[pos] == var {
                saw_var = true;
                pos += 1;
                exp = 1;
                if pos < bytes.len() && bytes[pos] == '^' {
                    pos += 1;
                    let neg_exp = if pos < bytes.len() && bytes[pos] == '-' {
                        pos += 1;
                        true
                    } else {
                        false
                    };
                    let raw = read_uint(&mut pos)
                        .ok_or(LaurentParseError::MalformedTerm { at: term_at })?;
                    exp = if neg_exp { -raw } else { raw };
                }
            }
            if magnitude.is_none() && !saw_var {
                return Err(LaurentParseError::MalformedTerm { at: term_at });
            }
            let mut coeff = magnitude.unwrap_or_else(BigInt::one);
            if negative {
                coeff = -coeff;
            }
            poly.add_term(exp, coeff);
            first = false;
        }
        Ok(poly)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render('A'))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&exp, c) in &rhs.terms {
            out.add_term(exp, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&exp, c) in &rhs.terms {
            out.add_term(exp, -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                $trait::$method(&self, rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(pairs: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(pairs.iter().copied())
    }

    #[test]
    fn monomial_product() {
        let m = LaurentPoly::monomial(-3, -1);
        assert_eq!(&m * &m, LaurentPoly::monomial(-6, 1));
    }

    #[test]
    fn degree_info_reports_both_ends() {
        let poly = p(&[(4, -1), (-4, -1)]);
        let info = poly.degree_info().unwrap();
        assert_eq!(info.max_deg, 4);
        assert_eq!(info.min_deg, -4);
        assert_eq!(info.span, 8);
        assert_eq!(info.leading, BigInt::from(-1));
        assert_eq!(info.trailing, BigInt::from(-1));
        assert_eq!(LaurentPoly::zero().degree_info(), None);
    }

    #[test]
    fn cancellation_drops_terms() {
        let sum = &p(&[(2, 1), (0, 3)]) + &p(&[(2, -1), (0, -1)]);
        assert_eq!(sum, p(&[(0, 2)]));
        let zero = &p(&[(5, 7)]) - &p(&[(5, 7)]);
        assert!(zero.is_zero());
    }

    #[test]
    fn render_ascending_with_signs() {
        assert_eq!(p(&[(4, -1), (-4, -1)]).render('A'), "-A^-4 - A^4");
        assert_eq!(p(&[(-4, 1), (0, 2), (4, 1)]).render('A'), "A^-4 + 2 + A^4");
        assert_eq!(p(&[(1, 1), (0, -3)]).render('t'), "-3 + t");
        assert_eq!(p(&[(2, 5)]).render('A'), "5A^2");
        assert_eq!(LaurentPoly::zero().render('A'), "0");
    }

    #[test]
    fn parse_round_trips_spec_forms() {
        for text in ["-A^-4 - A^4", "A^-7 - A^-3 - A^5", "0", "3A", "-A + A^2", "-2"] {
            let poly = LaurentPoly::parse(text, 'A').unwrap();
            assert_eq!(poly.render('A'), text, "canonical text should survive");
        }
        assert_eq!(
            LaurentPoly::parse(" -  A^-4-A^4 ", 'A').unwrap(),
            p(&[(-4, -1), (4, -1)])
        );
        assert_eq!(
            LaurentPoly::parse("A^2 - A", 'A').unwrap(),
            p(&[(2, 1), (1, -1)]),
            "descending input parses to the same polynomial"
        );
        assert!(LaurentPoly::parse("", 'A').is_err());
        assert!(LaurentPoly::parse("A^", 'A').is_err());
        assert!(LaurentPoly::parse("t^2", 'A').is_err());
    }

    #[test]
    fn exponent_scaling_substitutes_powers() {
        let tutte = p(&[(2, 1), (1, -1), (-1, -1)]);
        assert_eq!(tutte.scale_exponents(-4), p(&[(-8, 1), (-4, -1), (4, -1)]));
    }
}
