//! Dense univariate polynomials over exact rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{AlgebraError, Result};
use crate::poly_text::{join_signed, parse_terms};
use crate::scalar::{int, latex_scalar, Scalar};

/// `coeffs[k]` is the coefficient of `var^k`. Trailing zeros are never stored,
/// so the zero polynomial has an empty coefficient vector.
///
/// The variable name is a display label; arithmetic keeps the label of the
/// left operand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
    var: String,
}

impl UniPoly {
    pub fn from_coeffs(var: &str, coeffs: Vec<Scalar>) -> Self {
        let mut p = UniPoly {
            coeffs,
            var: var.to_string(),
        };
        p.trim();
        p
    }

    pub fn zero(var: &str) -> Self {
        UniPoly {
            coeffs: Vec::new(),
            var: var.to_string(),
        }
    }

    pub fn constant(var: &str, c: Scalar) -> Self {
        Self::from_coeffs(var, vec![c])
    }

    pub fn one(var: &str) -> Self {
        Self::constant(var, Scalar::one())
    }

    /// The monomial `var`.
    pub fn var(var: &str) -> Self {
        Self::from_coeffs(var, vec![Scalar::zero(), Scalar::one()])
    }

    /// `var - root`.
    pub fn linear_root(var: &str, root: Scalar) -> Self {
        Self::from_coeffs(var, vec![-root, Scalar::one()])
    }

    pub fn monomial(var: &str, c: Scalar, degree: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(var, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn var_name(&self) -> &str {
        &self.var
    }

    pub fn with_var(mut self, var: &str) -> Self {
        self.var = var.to_string();
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_coeffs(&self.var, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.var), |acc, _| &acc * self)
    }

    /// Composes `self(other(x))`.
    pub fn compose(&self, other: &UniPoly) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(&other.var), |acc, c| {
                &(&acc * other) + &Self::constant(&other.var, c.clone())
            })
    }

    /// Long division; returns `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = divisor.degree().ok_or(AlgebraError::DivisionByZero)?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let qlen = rem.len().saturating_sub(dd);
        let mut quot = vec![Scalar::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * d;
                }
            }
            quot[i] = c;
        }
        Ok((
            Self::from_coeffs(&self.var, quot),
            Self::from_coeffs(&self.var, rem),
        ))
    }

    /// Exact division; a nonzero remainder is an error.
    pub fn div_exact(&self, divisor: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(AlgebraError::InexactDivision {
                remainder: r.to_string(),
            })
        }
    }

    /// Parses the canonical text form. The polynomial may mention at most one
    /// symbol, which must equal `var`.
    pub fn parse(var: &str, s: &str) -> Result<Self> {
        let mut out = Self::zero(var);
        for (c, factors) in parse_terms(s)? {
            let mut deg = 0usize;
            for (name, e) in factors {
                if name != var {
                    return Err(AlgebraError::UnknownSymbol(name));
                }
                deg += e as usize;
            }
            out = &out + &Self::monomial(var, c, deg);
        }
        Ok(out)
    }

    fn term_parts(&self, latex: bool) -> Vec<(bool, String)> {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            let mono = match k {
                0 => String::new(),
                1 => self.var.clone(),
                _ if latex && k > 9 => format!("{}^{{{k}}}", self.var),
                _ => format!("{}^{k}", self.var),
            };
            let body = match (k, abs.is_one(), latex) {
                (0, _, true) => latex_scalar(&abs),
                (0, _, false) => abs.to_string(),
                (_, true, _) => mono,
                (_, false, true) => format!("{} {mono}", latex_scalar(&abs)),
                (_, false, false) => format!("{abs}*{mono}"),
            };
            parts.push((c.is_negative(), body));
        }
        parts
    }

    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        join_signed(self.term_parts(true))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        f.write_str(&join_signed(self.term_parts(false)))
    }
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        UniPoly::from_coeffs(&self.var, coeffs)
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        UniPoly::from_coeffs(&self.var, coeffs)
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(&self.var);
        }
        let mut coeffs = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(&self.var, coeffs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(&self.var, self.coeffs.iter().map(|c| -c).collect())
    }
}

/// The falling factorial `x(x-1)...(x-n+1)`; its coefficients are the signed
/// Stirling numbers of the first kind.
pub fn falling_factorial(var: &str, n: usize) -> UniPoly {
    (0..n).fold(UniPoly::one(var), |acc, j| {
        &acc * &UniPoly::linear_root(var, int(j as i64))
    })
}

/// The unique polynomial of degree `< nodes.len()` through the given points.
pub fn lagrange_basis(var: &str, nodes: &[Scalar], i: usize) -> UniPoly {
    let mut basis = UniPoly::one(var);
    for (j, xj) in nodes.iter().enumerate() {
        if j != i {
            let factor = UniPoly::linear_root(var, xj.clone());
            basis = (&basis * &factor).scale(&(Scalar::one() / (&nodes[i] - xj)));
        }
    }
    basis
}
