//! Round-sphere model: every GJMS operator is a polynomial in `P_2`, which
//! acts on constants by `x0 = -(n/2)(n/2 - 1)`. Unit-sphere normalization
//! throughout (Schouten tensor `g/2`, `J = n/2`).

use std::collections::HashMap;

use num_traits::Zero;

use crate::combinatorics::{compositions, m1, mk, Composition};
use crate::error::{AlgebraError, Result};
use crate::free_algebra::{NcPoly, Word, T};
use crate::scalar::{binomial_general, factorial_q, int, is_integer, pow, ratio, sign, Scalar};
use crate::series::TruncSeries;
use crate::unipoly::UniPoly;

pub const X: &str = "x";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereContext {
    n: Scalar,
}

impl SphereContext {
    pub fn new(n: Scalar) -> Result<Self> {
        if n <= int(2) {
            return Err(AlgebraError::Precondition(format!(
                "sphere dimension must exceed 2, got {n}"
            )));
        }
        Ok(SphereContext { n })
    }

    pub fn dim(&self) -> &Scalar {
        &self.n
    }

    pub fn half(&self) -> Scalar {
        &self.n / int(2)
    }

    /// Eigenvalue of `P_2` on constants.
    pub fn x0(&self) -> Scalar {
        let h = self.half();
        -(&h * (&h - int(1)))
    }

    pub fn is_even_integer(&self) -> bool {
        is_integer(&self.n) && is_integer(&self.half())
    }

    /// GJMS operators exist for `2N <= n` when `n` is even, for all `N`
    /// otherwise.
    pub fn admits_order(&self, n: usize) -> bool {
        !self.is_even_integer() || int(2 * n as i64) <= self.n
    }

    fn require_order(&self, order: usize) -> Result<()> {
        if self.admits_order(order) {
            Ok(())
        } else {
            Err(AlgebraError::Precondition(format!(
                "even dimension {} admits only 2N <= n, got N = {order}",
                self.n
            )))
        }
    }
}

/// `P_{2N} = prod_{j=0}^{N-1} (P_2 + j(j+1))` as a polynomial in `x = P_2`.
pub fn p_sphere(n: usize) -> UniPoly {
    (0..n).fold(UniPoly::one(X), |acc, j| {
        &acc * &UniPoly::linear_root(X, int(-((j * (j + 1)) as i64)))
    })
}

/// `Q_{2N} = (n/2+N-1) prod_{j=1}^{N-1} (n/2+j-1)(n/2-j)`; at `2N = n` this is
/// the value obtained by continuation in the dimension.
pub fn q_sphere(ctx: &SphereContext, n: usize) -> Scalar {
    let h = ctx.half();
    let mut q = &h + int(n as i64 - 1);
    for j in 1..n as i64 {
        q *= (&h + int(j - 1)) * (&h - int(j));
    }
    q
}

/// `v(r) = (1 - r^2/4)^n` truncated at `s^T`.
pub fn v_sphere(ctx: &SphereContext, order: usize) -> TruncSeries<Scalar> {
    let coeffs = (0..=order as u64)
        .map(|k| binomial_general(ctx.dim(), k) * pow(&ratio(-1, 4), k as u32))
        .collect();
    TruncSeries::new(coeffs).expect("nonempty")
}

/// `w_{2N} = binom(n/2, N) (-1/4)^N`, the closed form of `sqrt(v)`.
pub fn w_sphere_closed(ctx: &SphereContext, n: usize) -> Scalar {
    binomial_general(&ctx.half(), n as u64) * pow(&ratio(-1, 4), n as u32)
}

/// `P_{2J}` applied to constants: the product of the factor eigenvalues.
pub fn word_eigenvalue(ctx: &SphereContext, word: &Composition) -> Scalar {
    let x0 = ctx.x0();
    word.parts()
        .iter()
        .map(|&k| p_sphere(k).eval(&x0))
        .product()
}

fn sphere_images(n: usize) -> HashMap<usize, UniPoly> {
    (1..=n).map(|k| (k, p_sphere(k))).collect()
}

/// `sum_{|I|=N} weight(I) P_{2I}` mapped into `Q[x]`.
fn weighted_sum_on_sphere(
    n: usize,
    weight: impl Fn(&Composition) -> Result<Scalar>,
) -> Result<UniPoly> {
    let mut op = NcPoly::zero();
    for c in compositions(n) {
        op.add_term(Word::from(&c), UniPoly::constant(T, weight(&c)?));
    }
    op.substitute_commutative(&sphere_images(n))
}

/// Left and right sides of a one-variable identity on the sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyIdentity {
    pub lhs: UniPoly,
    pub rhs: UniPoly,
}

impl PolyIdentity {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn norm(n: usize) -> Scalar {
    factorial_q(n as u64) * factorial_q(n as u64 - 1)
}

/// `sum m_I P_{2I} = N!(N-1)! P_2`.
pub fn verify_m1_sphere_sum(n: usize) -> Result<PolyIdentity> {
    if n == 0 {
        return Err(AlgebraError::Precondition("need N >= 1".into()));
    }
    let lhs = weighted_sum_on_sphere(n, m1)?;
    Ok(PolyIdentity {
        lhs,
        rhs: UniPoly::var(X).scale(&norm(n)),
    })
}

/// `sum m^{(2)}_I P_{2I} = -N!(N-1)!/2! (P_2^2 + N P_2)` for `N >= 2`.
pub fn verify_m2_sphere_sum(n: usize) -> Result<PolyIdentity> {
    if n < 2 {
        return Err(AlgebraError::Precondition(
            "second multiplicities need N >= 2".into(),
        ));
    }
    let lhs = weighted_sum_on_sphere(n, |c| mk(c, 2))?;
    let shape = UniPoly::from_coeffs(X, vec![int(0), int(n as i64), int(1)]);
    Ok(PolyIdentity {
        lhs,
        rhs: shape.scale(&(-norm(n) / int(2))),
    })
}

/// `sum m^{(3)}_I P_{2I} = N!(N-1)!/(3!2!) (P_2^3 + (3N-1) P_2^2 + N(3N-1)/2 P_2)`
/// for `N >= 3`.
pub fn verify_m3_sphere_sum(n: usize) -> Result<PolyIdentity> {
    if n < 3 {
        return Err(AlgebraError::Precondition(
            "third multiplicities need N >= 3".into(),
        ));
    }
    let lhs = weighted_sum_on_sphere(n, |c| mk(c, 3))?;
    let nn = n as i64;
    let shape = UniPoly::from_coeffs(
        X,
        vec![int(0), ratio(nn * (3 * nn - 1), 2), int(3 * nn - 1), int(1)],
    );
    Ok(PolyIdentity {
        lhs,
        rhs: shape.scale(&(norm(n) / int(12))),
    })
}

/// Both sides of `sum_{a+|J|=N} m_{(J,a)} (-1)^a P_{2J}(Q_{2a}) = 2^{2N} N!(N-1)! w_{2N}`
/// on the sphere, with `w` taken from the series square root of `v`.
pub fn recursion_sides_on_sphere(ctx: &SphereContext, n: usize) -> Result<(Scalar, Scalar)> {
    if n == 0 {
        return Err(AlgebraError::Precondition("need N >= 1".into()));
    }
    ctx.require_order(n)?;
    let mut lhs = Scalar::zero();
    for c in compositions(n) {
        let (init, a) = c.parts().split_at(c.len() - 1);
        let j = Composition::new(init.to_vec())?;
        lhs += m1(&c)? * sign(a[0] as i64) * word_eigenvalue(ctx, &j) * q_sphere(ctx, a[0]);
    }
    let w = v_sphere(ctx, n).sqrt()?;
    let rhs = pow(&int(4), n as u32) * norm(n) * w.coeff(n);
    Ok((lhs, rhs))
}

pub fn verify_recursion_on_sphere(ctx: &SphereContext, n: usize) -> Result<bool> {
    let (l, r) = recursion_sides_on_sphere(ctx, n)?;
    Ok(l == r)
}

/// `P_{2N}(1) = (-1)^N (n/2 - N) Q_{2N}` with the product formulas.
pub fn constant_term_consistent(ctx: &SphereContext, n: usize) -> bool {
    let lhs = p_sphere(n).eval(&ctx.x0());
    let rhs = sign(n as i64) * (ctx.half() - int(n as i64)) * q_sphere(ctx, n);
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::v_from_schouten_spectrum;

    fn ctx(n: i64) -> SphereContext {
        SphereContext::new(int(n)).unwrap()
    }

    #[test]
    fn context() {
        assert!(SphereContext::new(int(2)).is_err());
        assert_eq!(ctx(4).x0(), int(-2));
        assert_eq!(ctx(3).x0(), ratio(-3, 4));
        assert!(ctx(6).is_even_integer());
        assert!(!ctx(7).is_even_integer());
        assert!(!SphereContext::new(ratio(9, 2)).unwrap().is_even_integer());
        assert!(ctx(6).admits_order(3) && !ctx(6).admits_order(4));
        assert!(ctx(7).admits_order(9));
    }

    #[test]
    fn products() {
        assert_eq!(p_sphere(1), UniPoly::var(X));
        assert_eq!(p_sphere(2), UniPoly::parse(X, "x^2 + 2*x").unwrap());
        assert_eq!(
            p_sphere(3),
            UniPoly::parse(X, "x^3 + 8*x^2 + 12*x").unwrap()
        );
    }

    #[test]
    fn q_values() {
        for n in 3..=13 {
            assert_eq!(q_sphere(&ctx(n), 1), ratio(n, 2));
        }
        assert_eq!(q_sphere(&ctx(4), 2), int(6));
        assert_eq!(q_sphere(&ctx(3), 2), ratio(15, 8));
        for n in [4u64, 6, 8, 10] {
            assert_eq!(q_sphere(&ctx(n as i64), n as usize / 2), factorial_q(n - 1));
        }
    }

    #[test]
    fn paneitz_values_on_sphere() {
        // Q_4 = n/2 J^2 - 2|P|^2 - Delta J with J = n/2, |P|^2 = n/4
        for n in 3..=13 {
            let h = ratio(n, 2);
            let expected = &h * &h * &h - ratio(n, 2);
            assert_eq!(q_sphere(&ctx(n), 2), expected);
        }
    }

    #[test]
    fn constant_terms() {
        for n in 3..=13 {
            for order in 1..=6usize {
                if 2 * order as i64 != n {
                    assert!(constant_term_consistent(&ctx(n), order), "n={n} N={order}");
                }
            }
        }
    }

    #[test]
    fn volume_series() {
        for n in 3..=13 {
            let c = ctx(n);
            let v = v_sphere(&c, 6);
            assert_eq!(v.coeff(1), &ratio(-n, 4));
            assert_eq!(
                v.coeff(2),
                &(Scalar::from_integer(crate::scalar::binomial(n as u64, 2)) / int(16))
            );
            let eigs = vec![ratio(1, 2); n as usize];
            for k in 0..=6 {
                assert_eq!(v.coeff(k), &v_from_schouten_spectrum(&eigs, k));
            }
            let w = v.sqrt().unwrap();
            for k in 0..=6 {
                assert_eq!(w.coeff(k), &w_sphere_closed(&c, k));
            }
        }
    }

    #[test]
    fn summation_identities() {
        let s1 = verify_m1_sphere_sum(2).unwrap();
        assert_eq!(s1.lhs, UniPoly::parse(X, "2*x").unwrap());
        let s2 = verify_m2_sphere_sum(2).unwrap();
        assert_eq!(s2.lhs, UniPoly::parse(X, "-x^2 - 2*x").unwrap());
        let s3 = verify_m3_sphere_sum(3).unwrap();
        assert_eq!(s3.lhs, UniPoly::parse(X, "x^3 + 8*x^2 + 12*x").unwrap());
        for n in 1..=8 {
            assert!(verify_m1_sphere_sum(n).unwrap().passed(), "m1 N={n}");
        }
        for n in 2..=8 {
            assert!(verify_m2_sphere_sum(n).unwrap().passed(), "m2 N={n}");
        }
        for n in 3..=8 {
            assert!(verify_m3_sphere_sum(n).unwrap().passed(), "m3 N={n}");
        }
        assert!(verify_m2_sphere_sum(1).is_err());
        assert!(verify_m3_sphere_sum(2).is_err());
    }

    #[test]
    fn recursion_small() {
        let (l, r) = recursion_sides_on_sphere(&ctx(3), 1).unwrap();
        assert_eq!((l, r), (ratio(-3, 2), ratio(-3, 2)));
        let (l, r) = recursion_sides_on_sphere(&ctx(4), 2).unwrap();
        assert_eq!((l, r), (int(2), int(2)));
        assert!(recursion_sides_on_sphere(&ctx(4), 3).is_err());
        for n in [3, 5, 7] {
            for order in 1..=5 {
                assert!(verify_recursion_on_sphere(&ctx(n), order).unwrap());
            }
        }
    }
}
