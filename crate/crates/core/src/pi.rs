//! The operator-valued polynomials `pi_{2N}`, built three independent ways:
//! from the higher multiplicities, from the closed falling-factorial formula,
//! and by interpolating the factorization identities.
//!
//! Bodies are stored in the variable `t = lambda + n/2 - N`, so no dimension
//! appears in the formal layer. Points are passed around as the shifted
//! spectral parameter `mu = lambda + n/2`; each polynomial converts `mu` into
//! its own `t` using its order.

use serde_json::{json, Value};

use num_traits::Zero;

use crate::combinatorics::{compositions, m1, mk};
use crate::error::{AlgebraError, Result};
use crate::free_algebra::{NcPoly, Word, T};
use crate::poly_text::join_signed;
use crate::scalar::{factorial_q, int, sign, Scalar};
use crate::unipoly::{falling_factorial, lagrange_basis, UniPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiPolynomial {
    order: usize,
    body: NcPoly,
}

impl PiPolynomial {
    pub fn new(order: usize, body: NcPoly) -> Self {
        PiPolynomial { order, body }
    }

    /// `N` in `pi_{2N}`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn body(&self) -> &NcPoly {
        &self.body
    }

    /// Evaluates at `lambda + n/2 = mu`, i.e. at `t = mu - N`.
    pub fn eval_mu(&self, mu: &Scalar) -> NcPoly {
        self.body.eval_t(&(mu - int(self.order as i64)))
    }

    pub fn eval_t(&self, t0: &Scalar) -> NcPoly {
        self.body.eval_t(t0)
    }

    pub fn degree_in_t(&self) -> Option<usize> {
        self.body.degree_in_t()
    }

    /// The operator coefficient `C^{(k)}` recovered from the `t^{N-k}` slot.
    pub fn c_coefficient(&self, k: usize) -> NcPoly {
        let p = self.order - k;
        self.body.t_coefficient(p).scale(&factorial_q(p as u64))
    }

    /// `sum_k C^{(k)} 1/(N-k)! (lambda + n/2 - N)^{N-k}` in LaTeX.
    pub fn to_latex(&self) -> String {
        let n = self.order;
        let shift = format!("\\left(\\lambda + \\frac{{n}}{{2}} - {n}\\right)");
        let mut parts = Vec::new();
        for k in 1..=n {
            let p = n - k;
            let c = self.c_coefficient(k);
            if c.is_zero() {
                continue;
            }
            if p == 0 {
                let latex = c.to_latex_constant();
                if c.num_terms() == 1 {
                    match latex.strip_prefix('-') {
                        Some(rest) => parts.push((true, rest.to_string())),
                        None => parts.push((false, latex)),
                    }
                } else {
                    parts.push((false, format!("\\left({latex}\\right)")));
                }
                continue;
            }
            let mut body = format!("\\left({}\\right)", c.to_latex_constant());
            if p >= 2 {
                body.push_str(&format!(" \\frac{{1}}{{{p}!}} {shift}^{p}"));
            } else {
                body.push(' ');
                body.push_str(&shift);
            }
            parts.push((false, body));
        }
        if parts.is_empty() {
            return "0".into();
        }
        join_signed(parts)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "variable": format!("t = lambda + n/2 - {}", self.order),
            "terms": self.body.to_json(),
        })
    }
}

/// `C^{(k)}_{2N}`: the multiplicity-weighted sum over compositions of `N`
/// for `k < N`, and `(-1)^{N-1} P_{2N}` for `k = N`.
pub fn c_operator(n: usize, k: usize) -> Result<NcPoly> {
    if n == 0 || k == 0 || k > n {
        return Err(AlgebraError::Precondition(format!(
            "need 1 <= k <= N, got N={n}, k={k}"
        )));
    }
    if k == n {
        return Ok(NcPoly::generator(n).scale(&sign(n as i64 - 1)));
    }
    let mut out = NcPoly::zero();
    for c in compositions(n) {
        out.add_term(Word::from(&c), UniPoly::constant(T, mk(&c, k)?));
    }
    Ok(out)
}

/// `pi_{2N} = sum_{k=1}^N C^{(k)} t^{N-k}/(N-k)!`.
pub fn pi_definition(n: usize) -> Result<PiPolynomial> {
    if n == 0 {
        return Err(AlgebraError::Precondition("pi needs N >= 1".into()));
    }
    let mut body = NcPoly::zero();
    for k in 1..=n {
        let p = n - k;
        let weight =
            UniPoly::monomial(T, Scalar::from_integer(1.into()) / factorial_q(p as u64), p);
        body = &body + &c_operator(n, k)?.scale_poly(&weight);
    }
    Ok(PiPolynomial::new(n, body))
}

/// Closed form `1/(N-1)! sum_I b_N(t)/(t - (N - I_1)) m_I P_{2I}` where `I_1`
/// is the leftmost part.
pub fn pi_closed(n: usize) -> Result<PiPolynomial> {
    if n == 0 {
        return Err(AlgebraError::Precondition("pi needs N >= 1".into()));
    }
    let b_n = falling_factorial(T, n);
    let norm = Scalar::from_integer(1.into()) / factorial_q(n as u64 - 1);
    let mut body = NcPoly::zero();
    for c in compositions(n) {
        let root = int((n - c.first().expect("nonempty")) as i64);
        let quotient = b_n.div_exact(&UniPoly::linear_root(T, root))?;
        body.add_term(Word::from(&c), quotient.scale(&(m1(&c)? * &norm)));
    }
    Ok(PiPolynomial::new(n, body))
}

/// One factorization identity evaluated on both sides.
#[derive(Clone, Debug)]
pub struct FactorizationCheck {
    pub order: usize,
    pub j: usize,
    pub lhs: NcPoly,
    pub rhs: NcPoly,
}

impl FactorizationCheck {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn statement(&self) -> String {
        let (n, j) = (self.order, self.j);
        if j == n {
            format!("pi_{}(-n/2+{n}) = (-1)^{} P_{}", 2 * n, n - 1, 2 * n)
        } else {
            format!(
                "pi_{}(-n/2+{}) = (-1)^{j} P_{} pi_{}(-n/2+{})",
                2 * n,
                2 * n - j,
                2 * j,
                2 * (n - j),
                2 * n - j
            )
        }
    }

    /// First differing word with both coefficients, if any.
    pub fn mismatch(&self) -> Option<String> {
        self.lhs
            .first_difference(&self.rhs)
            .map(|(w, a, b)| format!("word {w}: lhs coefficient {a}, rhs coefficient {b}"))
    }
}

/// Right-hand sides of the factorization identities at the nodes
/// `t = 0, 1, ..., N-1` of `pi_{2N}`; `lower(m)` must return `pi_{2m}`.
fn factorization_targets(
    n: usize,
    lower: &dyn Fn(usize) -> PiPolynomial,
) -> Vec<(usize, Scalar, NcPoly)> {
    let mut out = Vec::with_capacity(n);
    for j in 1..n {
        let mu = int((2 * n - j) as i64);
        let rhs = &NcPoly::generator(j).scale(&sign(j as i64)) * &lower(n - j).eval_mu(&mu);
        out.push((j, int((n - j) as i64), rhs));
    }
    out.push((
        n,
        Scalar::zero(),
        NcPoly::generator(n).scale(&sign(n as i64 - 1)),
    ));
    out
}

/// Checks all `N` factorization identities for `pi`, using `lower(m)` for the
/// lower-order polynomials.
pub fn check_factorizations(
    pi: &PiPolynomial,
    lower: &dyn Fn(usize) -> PiPolynomial,
) -> Vec<FactorizationCheck> {
    let n = pi.order();
    factorization_targets(n, lower)
        .into_iter()
        .map(|(j, t0, rhs)| FactorizationCheck {
            order: n,
            j,
            lhs: pi.eval_t(&t0),
            rhs,
        })
        .collect()
}

/// Factorization identities for `pi_definition(N)`.
pub fn verify_factorizations(n: usize) -> Result<Vec<FactorizationCheck>> {
    let family = (1..=n).map(pi_definition).collect::<Result<Vec<_>>>()?;
    let lower = |m: usize| family[m - 1].clone();
    Ok(check_factorizations(&family[n - 1], &lower))
}

/// `pi_{2}, ..., pi_{2N}` each obtained as the unique polynomial of degree
/// `N-1` matching the factorization identities, built on the previously
/// interpolated lower orders.
pub fn pi_family_from_factorizations(nmax: usize) -> Vec<PiPolynomial> {
    let mut family: Vec<PiPolynomial> = Vec::with_capacity(nmax);
    for n in 1..=nmax {
        let lower = |m: usize| family[m - 1].clone();
        let targets = factorization_targets(n, &lower);
        let nodes: Vec<Scalar> = targets.iter().map(|(_, t0, _)| t0.clone()).collect();
        let mut body = NcPoly::zero();
        for (i, (_, _, value)) in targets.iter().enumerate() {
            body = &body + &value.scale_poly(&lagrange_basis(T, &nodes, i));
        }
        family.push(PiPolynomial::new(n, body));
    }
    family
}

pub fn pi_from_factorizations(n: usize) -> Result<PiPolynomial> {
    if n == 0 {
        return Err(AlgebraError::Precondition("pi needs N >= 1".into()));
    }
    Ok(pi_family_from_factorizations(n)
        .pop()
        .expect("nonempty family"))
}
