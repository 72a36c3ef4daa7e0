//! Free associative algebra on the formal symbols `P_2, P_4, P_6, ...` with
//! coefficients in `Q[t]`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::combinatorics::Composition;
use crate::error::{AlgebraError, Result};
use crate::poly_text::join_signed;
use crate::scalar::{latex_scalar, Scalar};
use crate::unipoly::UniPoly;

pub const T: &str = "t";

/// Formal product `P_{2k_1} P_{2k_2} ... P_{2k_r}`; the empty word is the
/// identity.
///
/// Words are ordered by length, then reverse-lexicographically, so
/// `P_6 < P_4P_2 < P_2P_4 < P_2P_2P_2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(AlgebraError::Precondition(format!(
                "word factors must be positive: {factors:?}"
            )));
        }
        Ok(Word(factors))
    }

    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn factors(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut f = self.0.clone();
        f.extend_from_slice(&other.0);
        Word(f)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Runs of equal factors, `(index, power)`.
    fn runs(&self) -> Vec<(usize, usize)> {
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for &k in &self.0 {
            match runs.last_mut() {
                Some((last, p)) if *last == k => *p += 1,
                _ => runs.push((k, 1)),
            }
        }
        runs
    }

    pub fn to_latex(&self) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .runs()
            .into_iter()
            .map(|(k, p)| {
                let base = sub_latex("P", 2 * k);
                if p == 1 {
                    base
                } else {
                    format!("{base}^{p}")
                }
            })
            .collect();
        parts.join(" ")
    }
}

impl From<&Composition> for Word {
    fn from(c: &Composition) -> Self {
        Word(c.parts().to_vec())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for k in &self.0 {
            write!(f, "P_{}", 2 * k)?;
        }
        Ok(())
    }
}

/// `X_k` or `X_{k}` depending on the digit count.
pub(crate) fn sub_latex(base: &str, index: usize) -> String {
    if index < 10 {
        format!("{base}_{index}")
    } else {
        format!("{base}_{{{index}}}")
    }
}

/// Finitely supported map from words to polynomials in `t`. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, UniPoly>,
}

impl NcPoly {
    pub fn zero() -> Self {
        NcPoly::default()
    }

    pub fn one() -> Self {
        Self::term(Word::identity(), UniPoly::one(T))
    }

    /// The generator `P_{2k}`.
    pub fn generator(k: usize) -> Self {
        Self::term(Word(vec![k]), UniPoly::one(T))
    }

    pub fn term(word: Word, coeff: UniPoly) -> Self {
        let mut p = Self::zero();
        p.add_term(word, coeff);
        p
    }

    pub fn scalar_term(word: Word, c: Scalar) -> Self {
        Self::term(word, UniPoly::constant(T, c))
    }

    pub fn add_term(&mut self, word: Word, coeff: UniPoly) {
        if coeff.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&word) {
            Some(old) => &old + &coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.terms.insert(word, sum.with_var(T));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &UniPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &Word) -> UniPoly {
        self.terms
            .get(word)
            .cloned()
            .unwrap_or_else(|| UniPoly::zero(T))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.scale_poly(&UniPoly::constant(T, c.clone()))
    }

    /// Multiplies every coefficient by a polynomial in `t`.
    pub fn scale_poly(&self, c: &UniPoly) -> Self {
        let mut out = Self::zero();
        for (w, a) in &self.terms {
            out.add_term(w.clone(), a * c);
        }
        out
    }

    /// Maximum `t`-degree over all coefficients; `None` for zero.
    pub fn degree_in_t(&self) -> Option<usize> {
        self.terms.values().filter_map(UniPoly::degree).max()
    }

    pub fn has_constant_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.degree() == Some(0))
    }

    /// Evaluates every coefficient at `t = t0`.
    pub fn eval_t(&self, t0: &Scalar) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), UniPoly::constant(T, c.eval(t0)));
        }
        out
    }

    /// Coefficient of `t^k`, as an element with constant coefficients.
    pub fn t_coefficient(&self, k: usize) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), UniPoly::constant(T, c.coeff(k)));
        }
        out
    }

    /// Word-reversal anti-involution (formal adjoint).
    pub fn reversed(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.reversed(), c.clone());
        }
        out
    }

    /// Algebra morphism into a commutative polynomial ring: each generator
    /// `P_{2k}` is sent to `images[k]`. Coefficients must already be constant.
    pub fn substitute_commutative(&self, images: &HashMap<usize, UniPoly>) -> Result<UniPoly> {
        let var = images
            .values()
            .next()
            .map(|p| p.var_name().to_string())
            .unwrap_or_else(|| "x".into());
        let mut out = UniPoly::zero(&var);
        for (w, c) in &self.terms {
            if c.degree().unwrap_or(0) > 0 {
                return Err(AlgebraError::Precondition(format!(
                    "coefficient of {w} still depends on t: {c}"
                )));
            }
            let mut prod = UniPoly::constant(&var, c.coeff(0));
            for k in w.factors() {
                let img = images.get(k).ok_or(AlgebraError::MissingImage(*k))?;
                prod = &prod * img;
            }
            out = &out + &prod;
        }
        Ok(out)
    }

    /// First word (in term order) on which two elements differ.
    pub fn first_difference(&self, other: &NcPoly) -> Option<(Word, UniPoly, UniPoly)> {
        let diff = self - other;
        diff.terms
            .keys()
            .next()
            .map(|w| (w.clone(), self.coeff(w), other.coeff(w)))
    }

    /// LaTeX for an element with constant coefficients, e.g.
    /// `P_6 - 2 P_4 P_2 + \frac{3}{2} P_2^3`.
    pub fn to_latex_constant(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts = self.terms.iter().map(|(w, c)| {
            let c0 = c.coeff(0);
            let abs = c0.abs();
            let body = match (abs.is_one(), w.is_empty()) {
                (true, _) => w.to_latex(),
                (false, true) => latex_scalar(&abs),
                (false, false) => format!("{} {}", latex_scalar(&abs), w.to_latex()),
            };
            (c0.is_negative(), body)
        });
        join_signed(parts)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| json!({ "word": w.factors(), "coeff": c.to_string() }))
                .collect(),
        )
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts = self.terms.iter().map(|(w, c)| {
            if c.degree() == Some(0) {
                let c0 = c.coeff(0);
                let abs = c0.abs();
                let body = match (abs.is_one(), w.is_empty()) {
                    (true, _) => w.to_string(),
                    (false, true) => abs.to_string(),
                    (false, false) => format!("{abs}·{w}"),
                };
                (c0.is_negative(), body)
            } else {
                (false, format!("({c})·{w}"))
            }
        });
        f.write_str(&join_signed(parts))
    }
}

impl<'a> Add<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                out.add_term(wa.concat(wb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        self.scale(&-Scalar::one())
    }
}

impl Zero for NcPoly {
    fn zero() -> Self {
        NcPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Add for NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: NcPoly) -> NcPoly {
        &self + &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn p(k: usize) -> NcPoly {
        NcPoly::generator(k)
    }

    fn word(f: &[usize]) -> Word {
        Word::new(f.to_vec()).unwrap()
    }

    #[test]
    fn products_concatenate() {
        let prod = &p(1) * &p(2);
        assert_eq!(prod.num_terms(), 1);
        assert_eq!(prod.coeff(&word(&[1, 2])), UniPoly::one(T));
        let q = &p(2) + &p(1).scale(&int(3));
        assert_eq!(&NcPoly::one() * &q, q);
        assert_eq!(&q * &NcPoly::one(), q);
    }

    #[test]
    fn noncommutative() {
        let lhs = &(&p(1) + &p(2)) * &p(1);
        let expected = &(&p(1) * &p(1)) + &(&p(2) * &p(1));
        let swapped = &(&p(1) * &p(1)) + &(&p(1) * &p(2));
        assert_eq!(lhs, expected);
        assert_ne!(lhs, swapped);
    }

    #[test]
    fn evaluation_in_t() {
        let t = UniPoly::var(T);
        // (P_4 - P_2^2) t - P_4
        let pi4 = &(&p(2) - &(&p(1) * &p(1))).scale_poly(&t) - &p(2);
        assert_eq!(pi4.eval_t(&int(0)), -&p(2));
        assert_eq!(pi4.eval_t(&int(1)), -&(&p(1) * &p(1)));
        assert!(NcPoly::zero().eval_t(&int(5)).is_zero());
        assert_eq!(pi4.degree_in_t(), Some(1));
        assert_eq!(pi4.t_coefficient(1), &p(2) - &(&p(1) * &p(1)));
    }

    #[test]
    fn commutative_images() {
        let x = UniPoly::var("x");
        let images: HashMap<usize, UniPoly> = [
            (1, x.clone()),
            (2, UniPoly::parse("x", "x^2 + 2*x").unwrap()),
        ]
        .into();
        let e = &p(2) - &(&p(1) * &p(1));
        assert_eq!(
            e.substitute_commutative(&images).unwrap(),
            UniPoly::parse("x", "2*x").unwrap()
        );
        assert_eq!(
            NcPoly::one().substitute_commutative(&images).unwrap(),
            UniPoly::one("x")
        );
        let a = (&p(1) * &p(2)).substitute_commutative(&images).unwrap();
        let b = (&p(2) * &p(1)).substitute_commutative(&images).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            p(3).substitute_commutative(&images),
            Err(AlgebraError::MissingImage(3))
        );
        let tdep = p(1).scale_poly(&UniPoly::var(T));
        assert!(tdep.substitute_commutative(&images).is_err());
    }

    #[test]
    fn word_order_and_text() {
        let c = &(&(&p(3) - &(&p(2) * &p(1)).scale(&int(2))) - &(&p(1) * &p(2)).scale(&int(2)))
            + &(&(&p(1) * &p(1)) * &p(1)).scale(&int(3));
        assert_eq!(
            c.to_latex_constant(),
            "P_6 - 2 P_4 P_2 - 2 P_2 P_4 + 3 P_2^3"
        );
        assert_eq!(c.to_string(), "P_6 - 2·P_4P_2 - 2·P_2P_4 + 3·P_2P_2P_2");
        let tpoly = p(1).scale_poly(&UniPoly::parse(T, "t - 1").unwrap());
        assert_eq!(tpoly.to_string(), "(t - 1)·P_2");
        assert_eq!(NcPoly::zero().to_string(), "0");
        assert_eq!(word(&[5, 5]).to_latex(), "P_{10}^2");
        assert!(Word::new(vec![0]).is_err());
    }

    #[test]
    fn difference_report() {
        let a = &p(1) + &p(2);
        let b = &p(1) + &p(2).scale(&int(2));
        let (w, ca, cb) = a.first_difference(&b).unwrap();
        assert_eq!(w, word(&[2]));
        assert_eq!((ca.coeff(0), cb.coeff(0)), (int(1), int(2)));
        assert!(a.first_difference(&a).is_none());
    }
}
