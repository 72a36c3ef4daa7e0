//! Sparse commutative polynomials over a fixed, named symbol alphabet.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{AlgebraError, Result};
use crate::poly_text::{join_signed, parse_terms};
use crate::ring::CoeffRing;
use crate::scalar::Scalar;

/// Ordered list of symbol names shared by every polynomial built on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet(Arc<[String]>);

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Alphabet(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|s| s == name)
    }

    fn same(&self, other: &Alphabet) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

/// Exponent vector. Ordered by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct MultiPoly {
    alphabet: Alphabet,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet.same(&other.alphabet) && self.terms == other.terms
    }
}

impl MultiPoly {
    pub fn zero(alphabet: &Alphabet) -> Self {
        MultiPoly {
            alphabet: alphabet.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(alphabet: &Alphabet, c: Scalar) -> Self {
        let mut p = Self::zero(alphabet);
        p.insert(Monomial(vec![0; alphabet.len()]), c);
        p
    }

    pub fn var(alphabet: &Alphabet, name: &str) -> Result<Self> {
        let idx = alphabet
            .index(name)
            .ok_or_else(|| AlgebraError::UnknownSymbol(name.into()))?;
        let mut exps = vec![0; alphabet.len()];
        exps[idx] = 1;
        let mut p = Self::zero(alphabet);
        p.insert(Monomial(exps), Scalar::one());
        Ok(p)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    fn insert(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    /// Coefficient of the monomial given as `(symbol, exponent)` pairs.
    pub fn coeff_of(&self, factors: &[(&str, u32)]) -> Result<Scalar> {
        let mut exps = vec![0; self.alphabet.len()];
        for (name, e) in factors {
            let idx = self
                .alphabet
                .index(name)
                .ok_or_else(|| AlgebraError::UnknownSymbol((*name).into()))?;
            exps[idx] += e;
        }
        Ok(self
            .terms
            .get(&Monomial(exps))
            .cloned()
            .unwrap_or_else(Scalar::zero))
    }

    fn check(&self, other: &MultiPoly) -> Result<()> {
        if self.alphabet.same(&other.alphabet) {
            Ok(())
        } else {
            Err(AlgebraError::AlphabetMismatch {
                left: self.alphabet.names().to_vec(),
                right: other.alphabet.names().to_vec(),
            })
        }
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check(other)?;
        let mut out = Self::zero(&self.alphabet);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        let mut out = Self::zero(&self.alphabet);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        (0..e).fold(Self::constant(&self.alphabet, Scalar::one()), |acc, _| {
            acc.mul_ref(self)
        })
    }

    /// Ring morphism sending each symbol to a polynomial over `target`.
    /// Symbols without an image are an error.
    pub fn substitute(
        &self,
        target: &Alphabet,
        images: &HashMap<String, MultiPoly>,
    ) -> Result<MultiPoly> {
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (idx, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = &self.alphabet.names()[idx];
                let img = images
                    .get(name)
                    .ok_or_else(|| AlgebraError::UnknownSymbol(name.clone()))?;
                term = term.checked_mul(&img.pow(e))?;
            }
            out = out.checked_add(&term)?;
        }
        Ok(out)
    }

    /// Evaluates with rational values for every symbol.
    pub fn eval(&self, values: &HashMap<String, Scalar>) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (idx, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    let name = &self.alphabet.names()[idx];
                    let v = values
                        .get(name)
                        .ok_or_else(|| AlgebraError::UnknownSymbol(name.clone()))?;
                    term *= crate::scalar::pow(v, e);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Parses the canonical text form over a known alphabet.
    pub fn parse(alphabet: &Alphabet, s: &str) -> Result<Self> {
        let mut out = Self::zero(alphabet);
        for (c, factors) in parse_terms(s)? {
            let mut exps = vec![0; alphabet.len()];
            for (name, e) in factors {
                let idx = alphabet
                    .index(&name)
                    .ok_or(AlgebraError::UnknownSymbol(name))?;
                exps[idx] += e;
            }
            out.insert(Monomial(exps), c);
        }
        Ok(out)
    }

    /// Symbols mentioned in `s`, in order of first appearance.
    pub fn symbols_in(s: &str) -> Result<Vec<String>> {
        let mut names: Vec<String> = Vec::new();
        for (_, factors) in parse_terms(s)? {
            for (name, _) in factors {
                if !names.contains(&name) {
                    names.push(name);
                }
            }
        }
        Ok(names)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts = self.terms.iter().rev().map(|(m, c)| {
            let mut factors = Vec::new();
            let abs = c.abs();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(abs.to_string());
            }
            for (idx, &e) in m.0.iter().enumerate() {
                let name = &self.alphabet.names()[idx];
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            (c.is_negative(), factors.join("*"))
        });
        f.write_str(&join_signed(parts))
    }
}

impl CoeffRing for MultiPoly {
    fn zero_like(&self) -> Self {
        Self::zero(&self.alphabet)
    }
    fn one_like(&self) -> Self {
        Self::constant(&self.alphabet, Scalar::one())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    /// Panics on alphabet mismatch; use [`MultiPoly::checked_add`] to recover.
    fn add_ref(&self, other: &Self) -> Self {
        self.checked_add(other)
            .expect("multipoly alphabet mismatch")
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.checked_sub(other)
            .expect("multipoly alphabet mismatch")
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.checked_mul(other)
            .expect("multipoly alphabet mismatch")
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn scale(&self, c: &Scalar) -> Self {
        MultiPoly::scale(self, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn alpha() -> Alphabet {
        Alphabet::new(&["x", "y", "z"])
    }

    #[test]
    fn canonical_order_and_round_trip() {
        let a = alpha();
        let p = MultiPoly::parse(&a, "5 + y - x + 3/2*x^2 + x*y").unwrap();
        let s = p.to_string();
        assert_eq!(s, "3/2*x^2 + x*y - x + y + 5");
        assert_eq!(MultiPoly::parse(&a, &s).unwrap(), p);
    }

    #[test]
    fn no_zero_terms() {
        let a = alpha();
        let x = MultiPoly::var(&a, "x").unwrap();
        let d = x.checked_sub(&x).unwrap();
        assert!(d.is_zero());
        assert_eq!(d.num_terms(), 0);
        assert_eq!(MultiPoly::parse(&a, "x - x + 0*y").unwrap().num_terms(), 0);
    }

    #[test]
    fn mismatched_alphabets() {
        let p = MultiPoly::var(&alpha(), "x").unwrap();
        let q = MultiPoly::var(&Alphabet::new(&["x"]), "x").unwrap();
        assert!(matches!(
            p.checked_add(&q),
            Err(AlgebraError::AlphabetMismatch { .. })
        ));
        assert!(p.checked_mul(&q).is_err());
        assert!(MultiPoly::var(&alpha(), "w").is_err());
    }

    #[test]
    fn substitution_and_eval() {
        let a = alpha();
        let p = MultiPoly::parse(&a, "x^2 - y").unwrap();
        let b = Alphabet::new(&["t"]);
        let images: HashMap<String, MultiPoly> = [
            ("x".to_string(), MultiPoly::parse(&b, "t + 1").unwrap()),
            ("y".to_string(), MultiPoly::parse(&b, "2*t").unwrap()),
        ]
        .into();
        assert_eq!(
            p.substitute(&b, &images).unwrap(),
            MultiPoly::parse(&b, "t^2 + 1").unwrap()
        );
        let vals: HashMap<String, Scalar> =
            [("x".to_string(), ratio(1, 2)), ("y".to_string(), int(3))].into();
        assert_eq!(p.eval(&vals).unwrap(), ratio(-11, 4));
    }

    #[test]
    fn coefficient_lookup() {
        let a = alpha();
        let p = MultiPoly::parse(&a, "4*x*y^2 - z").unwrap();
        assert_eq!(p.coeff_of(&[("x", 1), ("y", 2)]).unwrap(), int(4));
        assert_eq!(p.coeff_of(&[("z", 1)]).unwrap(), int(-1));
        assert_eq!(p.coeff_of(&[]).unwrap(), int(0));
    }
}
