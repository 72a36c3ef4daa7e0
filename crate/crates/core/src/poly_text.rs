//! Shared reader for the canonical polynomial text form, e.g.
//! `3/2*x^2 - x + 5` or `-1/4*v_2*v_4^2 + v_6`.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{AlgebraError, Result};
use crate::scalar::Scalar;

/// One parsed summand: coefficient and `(symbol, exponent)` factors.
pub(crate) type RawTerm = (Scalar, Vec<(String, u32)>);

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Tok::Num(digits.parse().expect("digits")));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => {
                return Err(AlgebraError::Parse(format!(
                    "unexpected character `{other}`"
                )));
            }
        }
    }
    Ok(out)
}

pub(crate) fn parse_terms(s: &str) -> Result<Vec<RawTerm>> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(AlgebraError::Parse("empty polynomial".into()));
    }
    let mut pos = 0;
    let mut terms = Vec::new();
    let mut first = true;
    while pos < toks.len() {
        let mut negative = false;
        match toks[pos] {
            Tok::Plus => pos += 1,
            Tok::Minus => {
                negative = true;
                pos += 1
            }
            _ if first => {}
            _ => return Err(AlgebraError::Parse(format!("expected `+` or `-` in `{s}`"))),
        }
        first = false;
        let (mut coeff, factors, next) = parse_product(&toks, pos, s)?;
        if negative {
            coeff = -coeff;
        }
        terms.push((coeff, factors));
        pos = next;
    }
    Ok(terms)
}

/// Coefficient, symbol powers, and the position after the product.
type Product = (Scalar, Vec<(String, u32)>, usize);

fn parse_product(toks: &[Tok], mut pos: usize, src: &str) -> Result<Product> {
    let mut coeff = Scalar::one();
    let mut factors = Vec::new();
    loop {
        match toks.get(pos) {
            Some(Tok::Num(n)) => {
                pos += 1;
                let mut value = Scalar::from_integer(n.clone());
                if let Some(Tok::Slash) = toks.get(pos) {
                    match toks.get(pos + 1) {
                        Some(Tok::Num(d)) if *d != BigInt::from(0) => {
                            value /= Scalar::from_integer(d.clone());
                            pos += 2;
                        }
                        _ => {
                            return Err(AlgebraError::Parse(format!("bad denominator in `{src}`")))
                        }
                    }
                }
                coeff *= value;
            }
            Some(Tok::Ident(name)) => {
                pos += 1;
                let mut exp = 1u32;
                if let Some(Tok::Caret) = toks.get(pos) {
                    match toks.get(pos + 1) {
                        Some(Tok::Num(e)) => {
                            exp = e
                                .try_into()
                                .map_err(|_| AlgebraError::Parse("exponent too large".into()))?;
                            pos += 2;
                        }
                        _ => return Err(AlgebraError::Parse(format!("bad exponent in `{src}`"))),
                    }
                }
                factors.push((name.clone(), exp));
            }
            _ => return Err(AlgebraError::Parse(format!("expected a factor in `{src}`"))),
        }
        match toks.get(pos) {
            Some(Tok::Star) => pos += 1,
            _ => return Ok((coeff, factors, pos)),
        }
    }
}

/// Joins already-signed term strings as `a - b + c`.
pub(crate) fn join_signed(parts: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (i, (negative, body)) in parts.into_iter().enumerate() {
        match (i, negative) {
            (0, true) => {
                out.push('-');
                out.push_str(&body)
            }
            (0, false) => out.push_str(&body),
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body)
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body)
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn reads_mixed_terms() {
        let t = parse_terms("3/2*x^2 - x + 5").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0], (ratio(3, 2), vec![("x".to_string(), 2)]));
        assert_eq!(t[1], (ratio(-1, 1), vec![("x".to_string(), 1)]));
        assert_eq!(t[2], (ratio(5, 1), vec![]));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_terms("").is_err());
        assert!(parse_terms("x x").is_err());
        assert!(parse_terms("3/0").is_err());
        assert!(parse_terms("x^").is_err());
        assert!(parse_terms("(x)").is_err());
    }
}
