//! Compositions, Stirling numbers of the first kind and the multiplicities
//! `m_I^{(k)}` attached to compositions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::scalar::{binomial, factorial, factorial_q, int, pow, sign, Scalar};
use crate::unipoly::falling_factorial;

/// Ordered sequence of positive parts. The empty composition exists only as
/// the "no operator" sentinel in recursion terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(AlgebraError::Precondition(format!(
                "composition parts must be positive: {parts:?}"
            )));
        }
        Ok(Composition(parts))
    }

    pub fn empty() -> Self {
        Composition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn reversed(&self) -> Self {
        Composition(self.0.iter().rev().copied().collect())
    }

    /// `(head, tail)` concatenated.
    pub fn prepend(head: usize, tail: &Composition) -> Self {
        let mut parts = Vec::with_capacity(tail.len() + 1);
        parts.push(head);
        parts.extend_from_slice(&tail.0);
        Composition(parts)
    }

    /// `(init, last)` concatenated.
    pub fn append(init: &Composition, last: usize) -> Self {
        let mut parts = init.0.clone();
        parts.push(last);
        Composition(parts)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All `2^{n-1}` compositions of `n` in lexicographic order.
pub fn compositions(n: usize) -> Vec<Composition> {
    fn rec(rem: usize, prefix: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if rem == 0 {
            out.push(Composition(prefix.clone()));
            return;
        }
        for first in 1..=rem {
            prefix.push(first);
            rec(rem - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, &mut Vec::new(), &mut out);
    }
    out
}

/// Row `s(n, 0..=n)` of the signed Stirling numbers of the first kind.
pub fn stirling1_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for m in 1..=n {
        let mut next = vec![BigInt::zero(); m + 1];
        for k in 1..=m {
            let carry = if k < m {
                &row[k] * BigInt::from(m - 1)
            } else {
                BigInt::zero()
            };
            next[k] = &row[k - 1] - carry;
        }
        row = next;
    }
    row
}

/// Signed Stirling number of the first kind; zero for `k > n`.
pub fn stirling1(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    stirling1_row(n).swap_remove(k)
}

fn stirling_q(n: usize, k: usize) -> Scalar {
    Scalar::from_integer(stirling1(n, k))
}

/// Multiplicity `m_I = -(-1)^r N!(N-1)! prod 1/(I_j!(I_j-1)!) prod 1/(I_j+I_{j+1})`.
pub fn m1(comp: &Composition) -> Result<Scalar> {
    if comp.is_empty() {
        return Err(AlgebraError::EmptyComposition);
    }
    let n = comp.size() as u64;
    let mut numer = factorial(n) * factorial(n - 1);
    if comp.len().is_multiple_of(2) {
        numer = -numer;
    }
    let mut denom = BigInt::one();
    for &p in comp.parts() {
        denom *= factorial(p as u64) * factorial(p as u64 - 1);
    }
    for w in comp.parts().windows(2) {
        denom *= BigInt::from(w[0] + w[1]);
    }
    Ok(Scalar::new(numer, denom))
}

/// `(N-1)(N-2)...(N-k+1)`; empty product for `k = 1`.
fn descending_product(n: usize, k: usize) -> Scalar {
    (1..k).fold(Scalar::one(), |acc, i| acc * int(n as i64 - i as i64))
}

/// Whether one of the two defining formulas covers `(comp, k)`; outside
/// these ranges [`mk`] returns zero.
pub fn mk_is_covered(comp: &Composition, k: usize) -> bool {
    let n = comp.size();
    match (comp.len(), k) {
        (0, _) | (_, 0) => false,
        (_, 1) => true,
        (1, _) => (2..=n).contains(&k),
        _ => (2..n).contains(&k),
    }
}

/// Higher multiplicity `m_I^{(k)}`, extended by zero outside the ranges the
/// defining formulas cover.
pub fn mk(comp: &Composition, k: usize) -> Result<Scalar> {
    if k == 0 {
        return Err(AlgebraError::Precondition(
            "multiplicity order k must be >= 1".into(),
        ));
    }
    if comp.is_empty() {
        return Err(AlgebraError::EmptyComposition);
    }
    if k == 1 {
        return m1(comp);
    }
    if !mk_is_covered(comp, k) {
        return Ok(Scalar::zero());
    }
    let n = comp.size();
    let denom = descending_product(n, k);
    let numer = if comp.len() == 1 {
        stirling_q(n, n + 1 - k)
    } else {
        let tail = int((n - comp.parts()[0]) as i64);
        (0..k).fold(Scalar::zero(), |acc, j| {
            acc + stirling_q(n, n - j) * pow(&tail, (k - 1 - j) as u32)
        })
    };
    Ok(numer / denom * m1(comp)?)
}

/// `sum_{|I|=N} m_I = 0`.
pub fn verify_m_sum_zero(n: usize) -> bool {
    compositions(n)
        .iter()
        .map(|c| m1(c).expect("nonempty"))
        .sum::<Scalar>()
        .is_zero()
}

/// `m_I = m_{I^{-1}}` for every composition of `n`.
pub fn verify_palindrome(n: usize) -> bool {
    compositions(n)
        .iter()
        .all(|c| m1(c).ok() == m1(&c.reversed()).ok())
}

/// `m^{(2)}_{(a,J)} = ((N-a)/(N-1) - N/2) m_{(a,J)}` for `N >= 2` and every
/// composition with a nonempty tail.
pub fn verify_m2_relation(n: usize) -> bool {
    compositions(n).iter().filter(|c| c.len() >= 2).all(|c| {
        let a = c.parts()[0] as i64;
        let nn = n as i64;
        let factor =
            Scalar::new((nn - a).into(), (nn - 1).into()) - Scalar::new(nn.into(), 2.into());
        mk(c, 2).unwrap() == factor * m1(c).unwrap()
    })
}

/// Both sides of `sum_{a,b>=1, a+b<=N} s(N,a+b) x^a y^b = (y b_N(x) - x b_N(y))/(x-y)`.
pub fn stirling_pair_sum_sides(n: usize, x: &Scalar, y: &Scalar) -> Result<(Scalar, Scalar)> {
    if n < 2 {
        return Err(AlgebraError::Precondition(format!("needs N >= 2, got {n}")));
    }
    if x == y {
        return Err(AlgebraError::Precondition("needs x != y".into()));
    }
    let row = stirling1_row(n);
    let mut lhs = Scalar::zero();
    for a in 1..n {
        for b in 1..=(n - a) {
            lhs += Scalar::from_integer(row[a + b].clone()) * pow(x, a as u32) * pow(y, b as u32);
        }
    }
    let b_n = falling_factorial("x", n);
    let rhs = (y * b_n.eval(x) - x * b_n.eval(y)) / (x - y);
    Ok((lhs, rhs))
}

pub fn verify_stirling_pair_sum(n: usize, x: &Scalar, y: &Scalar) -> Result<bool> {
    let (l, r) = stirling_pair_sum_sides(n, x, y)?;
    Ok(l == r)
}

/// Both sides of `sum s(N,a+b) M^{a+b-1} = (-1)^{N-M-1} M! (N-M-1)!`, using
/// `0^0 = 1` in the brute-force sum.
pub fn stirling_node_sum_sides(n: usize, m: usize) -> Result<(Scalar, Scalar)> {
    if n < 2 || m >= n {
        return Err(AlgebraError::Precondition(format!(
            "needs N >= 2 and 0 <= M <= N-1, got N={n}, M={m}"
        )));
    }
    let row = stirling1_row(n);
    let base = int(m as i64);
    let mut lhs = Scalar::zero();
    for a in 1..n {
        for b in 1..=(n - a) {
            lhs += Scalar::from_integer(row[a + b].clone()) * pow(&base, (a + b - 1) as u32);
        }
    }
    let rhs = sign((n - m - 1) as i64) * factorial_q(m as u64) * factorial_q((n - m - 1) as u64);
    Ok((lhs, rhs))
}

pub fn verify_stirling_node_sum(n: usize, m: usize) -> Result<bool> {
    let (l, r) = stirling_node_sum_sides(n, m)?;
    Ok(l == r)
}

/// The two quotient identities for multiplicities used when matching weights
/// in the factorization proof:
///
/// `m(j,r,K)/m(r,K) = -1/(j+r) binom(N,j)^2 j(N-j)/N` for nonempty `K`, and
/// `m(j,r)/m(r) = -1/N binom(N,j)^2 j(N-j)/N`.
pub fn verify_ratio_identities(n: usize) -> bool {
    let nq = int(n as i64);
    compositions(n).iter().filter(|c| c.len() >= 2).all(|c| {
        let j = c.parts()[0];
        let r = c.parts()[1];
        let tail = Composition(c.parts()[1..].to_vec());
        let ratio = m1(c).unwrap() / m1(&tail).unwrap();
        let bin = Scalar::from_integer(binomial(n as u64, j as u64));
        let common = &bin * &bin * int((j * (n - j)) as i64) / &nq;
        let expected = if c.len() == 2 {
            -common / &nq
        } else {
            -common / int((j + r) as i64)
        };
        ratio == expected
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn comp(p: &[usize]) -> Composition {
        Composition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn enumeration() {
        assert_eq!(compositions(1), vec![comp(&[1])]);
        assert_eq!(
            compositions(3),
            vec![comp(&[1, 1, 1]), comp(&[1, 2]), comp(&[2, 1]), comp(&[3])]
        );
        assert_eq!(compositions(6).len(), 32);
        assert!(compositions(0).is_empty());
        for n in 1..=10 {
            let cs = compositions(n);
            assert_eq!(cs.len(), 1 << (n - 1));
            assert!(cs.iter().all(|c| c.size() == n));
            assert!(cs.windows(2).all(|w| w[0] < w[1]));
        }
        assert!(Composition::new(vec![1, 0]).is_err());
    }

    #[test]
    fn stirling_values() {
        assert_eq!(stirling1(4, 1), BigInt::from(-6));
        assert_eq!(stirling1(4, 2), BigInt::from(11));
        assert_eq!(stirling1(3, 5), BigInt::zero());
        for n in 1..=12usize {
            assert_eq!(stirling1(n, n), BigInt::one());
            assert_eq!(stirling1(n, n - 1), -binomial(n as u64, 2));
            assert_eq!(stirling1(n, 0), BigInt::zero());
        }
    }

    #[test]
    fn stirling_recurrence_and_falling_factorial() {
        for n in 1..=12usize {
            let b = falling_factorial("x", n);
            for k in 0..=n {
                assert_eq!(
                    Scalar::from_integer(stirling1(n, k)),
                    b.coeff(k),
                    "n={n} k={k}"
                );
                if n >= 2 && k >= 1 {
                    let rec = stirling1(n - 1, k - 1) - BigInt::from(n - 1) * stirling1(n - 1, k);
                    assert_eq!(stirling1(n, k), rec);
                }
            }
        }
    }

    #[test]
    fn multiplicity_values() {
        for n in 1..=12 {
            assert_eq!(m1(&comp(&[n])).unwrap(), int(1));
        }
        assert_eq!(m1(&comp(&[1, 1])).unwrap(), int(-1));
        assert_eq!(m1(&comp(&[1, 1, 1])).unwrap(), int(3));
        assert_eq!(m1(&comp(&[1, 2])).unwrap(), int(-2));
        assert_eq!(m1(&comp(&[2, 1])).unwrap(), int(-2));
        assert_eq!(
            m1(&Composition::empty()),
            Err(AlgebraError::EmptyComposition)
        );
    }

    #[test]
    fn higher_multiplicities() {
        for n in 1..=10i64 {
            if n >= 2 {
                assert_eq!(mk(&comp(&[n as usize]), 2).unwrap(), ratio(-n, 2));
            }
        }
        assert_eq!(mk(&comp(&[1, 1]), 2).unwrap(), int(0));
        assert_eq!(mk(&comp(&[3]), 3).unwrap(), int(1));
        assert_eq!(mk(&comp(&[1]), 2).unwrap(), int(0));
        assert!(!mk_is_covered(&comp(&[1]), 2));
        assert!(mk(&comp(&[2]), 0).is_err());
        for n in 1..=10 {
            for c in compositions(n) {
                assert_eq!(mk(&c, 1).unwrap(), m1(&c).unwrap());
            }
        }
        // the single-part formula is the J = (0) case of the general one
        for n in 3..=10usize {
            for k in 2..n {
                let direct = mk(&comp(&[n]), k).unwrap();
                let via_general: Scalar = (0..k)
                    .map(|j| {
                        if j == k - 1 {
                            stirling_q(n, n - j)
                        } else {
                            Scalar::zero()
                        }
                    })
                    .sum::<Scalar>()
                    / descending_product(n, k);
                assert_eq!(direct, via_general);
            }
        }
    }

    #[test]
    fn sums_and_symmetry() {
        assert!(verify_m_sum_zero(2));
        assert!(verify_m_sum_zero(3));
        for n in 2..=12 {
            assert!(verify_m_sum_zero(n), "n={n}");
            assert!(verify_palindrome(n));
        }
        for n in 2..=10 {
            assert!(verify_m2_relation(n), "n={n}");
            assert!(verify_ratio_identities(n), "n={n}");
        }
    }

    #[test]
    fn ratio_small_cases() {
        assert_eq!(
            m1(&comp(&[1, 1])).unwrap() / m1(&comp(&[1])).unwrap(),
            int(-1)
        );
        assert_eq!(
            m1(&comp(&[1, 1, 1])).unwrap() / m1(&comp(&[1, 1])).unwrap(),
            int(-3)
        );
    }

    #[test]
    fn stirling_pair_sum() {
        let (l, r) = stirling_pair_sum_sides(2, &int(2), &int(1)).unwrap();
        assert_eq!(l, int(2));
        assert_eq!(r, int(2));
        assert!(verify_stirling_pair_sum(5, &ratio(1, 2), &int(-3)).unwrap());
        let (l, r) = stirling_pair_sum_sides(6, &ratio(7, 3), &int(0)).unwrap();
        assert!(l.is_zero() && r.is_zero());
        assert!(stirling_pair_sum_sides(4, &int(1), &int(1)).is_err());
        assert!(stirling_pair_sum_sides(1, &int(1), &int(2)).is_err());
    }

    #[test]
    fn stirling_node_sum() {
        let (l, r) = stirling_node_sum_sides(3, 1).unwrap();
        assert_eq!((l, r), (int(-1), int(-1)));
        for n in 2..=10 {
            for m in 1..n {
                assert!(verify_stirling_node_sum(n, m).unwrap(), "n={n} m={m}");
            }
        }
        assert!(stirling_node_sum_sides(4, 4).is_err());
    }

    #[test]
    fn stirling_node_sum_degenerate_zero() {
        // With 0^0 = 1 nothing survives on the left since a+b-1 >= 1.
        for n in 2..=10 {
            let (l, r) = stirling_node_sum_sides(n, 0).unwrap();
            assert!(l.is_zero());
            assert_eq!(r, sign(n as i64 - 1) * factorial_q(n as u64 - 1));
        }
    }
}
