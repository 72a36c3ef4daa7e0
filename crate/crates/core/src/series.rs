//! Truncated power series in `s = r^2` over a generic coefficient ring.
//!
//! Coefficient `k` holds the order-`2k` Taylor coefficient in `r`, so the
//! volume series `v(r) = 1 + v_2 r^2 + ...` is stored as `[1, v_2, v_4, ...]`.

use rand::Rng;

use crate::error::{AlgebraError, Result};
use crate::multipoly::{Alphabet, MultiPoly};
use crate::qformula::{lambda_polynomial, q_alphabet};
use crate::ring::CoeffRing;
use crate::scalar::{binomial, factorial_q, int, pow, ratio, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<R: CoeffRing> {
    coeffs: Vec<R>,
}

impl<R: CoeffRing> TruncSeries<R> {
    /// Series `c_0 + c_1 s + ... + c_T s^T`; needs at least `c_0`.
    pub fn new(coeffs: Vec<R>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(AlgebraError::Precondition(
                "a series needs at least one coefficient".into(),
            ));
        }
        Ok(TruncSeries { coeffs })
    }

    /// The multiplicative identity truncated at `order`, built from a template
    /// element of the ring.
    pub fn one(template: &R, order: usize) -> Self {
        let mut coeffs = vec![template.zero_like(); order + 1];
        coeffs[0] = template.one_like();
        TruncSeries { coeffs }
    }

    /// Truncation order `T`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &R {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        TruncSeries {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let t = self.order().min(other.order());
        TruncSeries {
            coeffs: (0..=t)
                .map(|k| self.coeffs[k].add_ref(&other.coeffs[k]))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let t = self.order().min(other.order());
        TruncSeries {
            coeffs: (0..=t)
                .map(|k| self.coeffs[k].sub_ref(&other.coeffs[k]))
                .collect(),
        }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let t = self.order().min(other.order());
        let coeffs = (0..=t)
            .map(|k| {
                (1..=k).fold(self.coeffs[0].mul_ref(&other.coeffs[k]), |acc, i| {
                    acc.add_ref(&self.coeffs[i].mul_ref(&other.coeffs[k - i]))
                })
            })
            .collect();
        TruncSeries { coeffs }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Square root with constant term 1:
    /// `w_k = (v_k - sum_{0<i<k} w_i w_{k-i}) / 2`.
    pub fn sqrt(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if *c0 != c0.one_like() {
            return Err(AlgebraError::BadLeadingCoefficient(format!("{c0:?}")));
        }
        let half = ratio(1, 2);
        let mut w: Vec<R> = Vec::with_capacity(self.coeffs.len());
        w.push(c0.one_like());
        for k in 1..=self.order() {
            let mut acc = self.coeffs[k].clone();
            for i in 1..k {
                acc = acc.sub_ref(&w[i].mul_ref(&w[k - i]));
            }
            w.push(acc.scale(&half));
        }
        Ok(TruncSeries { coeffs: w })
    }
}

/// Name of the formal symbol for `Lambda_{2N}`.
pub fn lambda_symbol(n: usize) -> String {
    format!("Lambda_{}", 2 * n)
}

pub fn v_symbol(n: usize) -> String {
    format!("v_{}", 2 * n)
}

/// `G(s) = 1 + sum_{N=1}^T Lambda_{2N} s^N / (N!(N-1)!)` over the alphabet,
/// where `lambda_symbols[N-1]` names `Lambda_{2N}`.
pub fn build_g(
    alphabet: &Alphabet,
    lambda_symbols: &[String],
    order: usize,
) -> Result<TruncSeries<MultiPoly>> {
    let one = MultiPoly::constant(alphabet, int(1));
    let mut coeffs = vec![one];
    for n in 1..=order {
        let name = lambda_symbols
            .get(n - 1)
            .ok_or_else(|| AlgebraError::Precondition(format!("no Lambda symbol for order {n}")))?;
        let norm = factorial_q(n as u64) * factorial_q(n as u64 - 1);
        coeffs.push(MultiPoly::var(alphabet, name)?.scale(&(int(1) / norm)));
    }
    TruncSeries::new(coeffs)
}

/// Relation at order `N` obtained two ways over symbols `Lambda_*`, `v_*`.
#[derive(Clone, Debug)]
pub struct LambdaSquareCheck {
    pub n: usize,
    /// `N!(N-1)! ([s^N] G^2 - 4^N v_{2N})`.
    pub from_square: MultiPoly,
    /// `2 Lambda_{2N} + sum_j j(N-j)/N binom(N,j)^2 Lambda_{2j} Lambda_{2N-2j} - 2^{2N} N!(N-1)! v_{2N}`.
    pub closed_form: MultiPoly,
}

impl LambdaSquareCheck {
    pub fn passed(&self) -> bool {
        self.from_square == self.closed_form
    }
}

pub fn lambda_square_alphabet(nmax: usize) -> Alphabet {
    let mut names: Vec<String> = (1..=nmax).map(lambda_symbol).collect();
    names.extend((1..=nmax).map(v_symbol));
    Alphabet::new(&names)
}

/// Compares the square of `G` with the closed-form quadratic relation for
/// every `2 <= N <= nmax`.
pub fn verify_lambda_square_relations(nmax: usize) -> Result<Vec<LambdaSquareCheck>> {
    if nmax < 2 {
        return Err(AlgebraError::Precondition("need Nmax >= 2".into()));
    }
    let alpha = lambda_square_alphabet(nmax);
    let lambdas: Vec<String> = (1..=nmax).map(lambda_symbol).collect();
    let g2 = build_g(&alpha, &lambdas, nmax)?.square();
    let lam = |k: usize| MultiPoly::var(&alpha, &lambda_symbol(k)).expect("in alphabet");
    let mut out = Vec::new();
    for n in 2..=nmax {
        let norm = factorial_q(n as u64) * factorial_q(n as u64 - 1);
        let v = MultiPoly::var(&alpha, &v_symbol(n))?;
        let four_n = pow(&int(4), n as u32);
        let from_square = g2.coeff(n).checked_sub(&v.scale(&four_n))?.scale(&norm);
        let mut closed = lam(n).scale(&int(2));
        for j in 1..n {
            let b = Scalar::from_integer(binomial(n as u64, j as u64));
            let w = &b * &b * int((j * (n - j)) as i64) / int(n as i64);
            closed = closed.checked_add(&lam(j).checked_mul(&lam(n - j))?.scale(&w))?;
        }
        closed = closed.checked_sub(&v.scale(&(four_n * norm)))?;
        out.push(LambdaSquareCheck {
            n,
            from_square,
            closed_form: closed,
        });
    }
    Ok(out)
}

/// One of the two fully written-out quadratic relations, in terms of
/// `Q_{2a}` and `P_{2J}(Q_{2a})` symbols.
#[derive(Clone, Debug)]
pub struct DisplayedRelationCheck {
    pub n: usize,
    /// Displayed left side minus displayed right side.
    pub displayed: MultiPoly,
    /// The order-`N` relation with every `Lambda` expanded, halved.
    pub derived: MultiPoly,
}

impl DisplayedRelationCheck {
    /// Whether the displayed equation is a nonzero multiple of the derived one.
    pub fn matches(&self) -> bool {
        proportional(&self.displayed, &self.derived)
    }

    /// The same test after flipping the sign of the right-hand side
    /// `v_{2N}` term of the display.
    pub fn matches_with_rhs_sign_flipped(&self, rhs: &MultiPoly) -> bool {
        let flipped = self
            .displayed
            .checked_add(&rhs.scale(&int(2)))
            .expect("same alphabet");
        proportional(&flipped, &self.derived)
    }
}

fn proportional(a: &MultiPoly, b: &MultiPoly) -> bool {
    let (Some((m, ca)), false) = (a.terms().next(), b.is_zero()) else {
        return a.is_zero() && b.is_zero();
    };
    let cb = b.terms().find(|(mb, _)| *mb == m).map(|(_, c)| c.clone());
    match cb {
        Some(cb) => a.scale(&(cb / ca)) == *b,
        None => false,
    }
}

/// The relation `Lambda_{2N} + 1/2 sum_j ... = 2^{2N-1} N!(N-1)! v_{2N}` with
/// every `Lambda` replaced by its multiplicity sum, as `lhs - rhs`.
pub fn expanded_lambda_relation(alpha: &Alphabet, n: usize) -> Result<MultiPoly> {
    let lam = |k: usize| lambda_polynomial(alpha, k);
    let mut rel = lam(n)?;
    for j in 1..n {
        let b = Scalar::from_integer(binomial(n as u64, j as u64));
        let w = &b * &b * int((j * (n - j)) as i64) / int(2 * n as i64);
        rel = rel.checked_add(&lam(j)?.checked_mul(&lam(n - j)?)?.scale(&w))?;
    }
    let rhs = pow(&int(2), 2 * n as u32 - 1) * factorial_q(n as u64) * factorial_q(n as u64 - 1);
    rel.checked_sub(&MultiPoly::var(alpha, &v_symbol(n))?.scale(&rhs))
}

/// The two written-out relations at `N = 2` and `N = 3`, exactly as
/// displayed, paired with the relation expanded from the multiplicities.
/// Returns `(check, displayed right-hand side)`.
pub fn displayed_lambda_examples() -> Result<Vec<(DisplayedRelationCheck, MultiPoly)>> {
    let alpha = q_alphabet(3, &[v_symbol(2), v_symbol(3)]);
    let p = |s: &str| MultiPoly::parse(&alpha, s);
    let n2_lhs = p("Q4 + P2Q2")?.checked_add(&p("Q2^2")?)?;
    let n2_rhs = p("16*v_4")?;
    let n3_lhs = p("Q6 + 2*P2Q4 - 2*P4Q2 + 3*P2P2Q2")?
        .checked_add(&p("Q4 + P2Q2")?.checked_mul(&p("6*Q2")?)?)?;
    let n3_rhs = p("384*v_6")?;
    let mut out = Vec::new();
    for (n, lhs, rhs) in [(2, n2_lhs, n2_rhs), (3, n3_lhs, n3_rhs)] {
        let check = DisplayedRelationCheck {
            n,
            displayed: lhs.checked_sub(&rhs)?,
            derived: expanded_lambda_relation(&alpha, n)?,
        };
        out.push((check, rhs));
    }
    Ok(out)
}

/// The written-out relations `c_N w_{2N} = ...` for `N = 1..4`, as
/// `(N, c_N, right-hand side)` over the symbols of [`symbolic_volume_series`].
pub const W_V_RELATIONS: [(usize, i64, &str); 4] = [
    (1, 2, "v_2"),
    (2, 8, "4*v_4 - v_2^2"),
    (3, 16, "8*v_6 - 4*v_4*v_2 + v_2^3"),
    (
        4,
        128,
        "64*v_8 - 32*v_6*v_2 - 16*v_4^2 + 24*v_2^2*v_4 - 5*v_2^4",
    ),
];

/// Checks each of [`W_V_RELATIONS`] against the series square root; returns
/// `(N, derived c_N w_{2N}, displayed right-hand side)`.
pub fn check_w_v_relations() -> Result<Vec<(usize, MultiPoly, MultiPoly)>> {
    let (alpha, v) = symbolic_volume_series(4);
    let w = v.sqrt()?;
    W_V_RELATIONS
        .iter()
        .map(|&(n, c, rhs)| Ok((n, w.coeff(n).scale(&int(c)), MultiPoly::parse(&alpha, rhs)?)))
        .collect()
}

/// `v(r) = 1 + v_2 s + ... + v_{2T} s^T` over formal symbols `v_2..v_{2T}`.
pub fn symbolic_volume_series(order: usize) -> (Alphabet, TruncSeries<MultiPoly>) {
    let names: Vec<String> = (1..=order).map(v_symbol).collect();
    let alpha = Alphabet::new(&names);
    let mut coeffs = vec![MultiPoly::constant(&alpha, int(1))];
    coeffs.extend(
        names
            .iter()
            .map(|n| MultiPoly::var(&alpha, n).expect("in alphabet")),
    );
    (alpha, TruncSeries { coeffs })
}

/// `(-2)^{-N} e_N(eigenvalues)`; the trace of the `N`-th exterior power is the
/// elementary symmetric polynomial `e_N`.
pub fn v_from_schouten_spectrum(eigs: &[Scalar], n: usize) -> Scalar {
    if n > eigs.len() {
        return Scalar::from_integer(0.into());
    }
    let mut e = vec![int(0); n + 1];
    e[0] = int(1);
    for x in eigs {
        for k in (1..=n).rev() {
            let add = &e[k - 1] * x;
            e[k] += add;
        }
    }
    &e[n] / pow(&int(-2), n as u32)
}

/// Random series with constant term 1 and small rational coefficients.
pub fn random_unit_series<G: Rng>(rng: &mut G, order: usize) -> TruncSeries<Scalar> {
    let mut coeffs = vec![int(1)];
    for _ in 0..order {
        coeffs.push(ratio(rng.gen_range(-20..=20), rng.gen_range(1..=9)));
    }
    TruncSeries { coeffs }
}
