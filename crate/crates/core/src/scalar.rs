//! Exact rational scalars.
//!
//! All arithmetic in the crate runs over [`Scalar`], an arbitrary-precision
//! rational kept in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{AlgebraError, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn factorial_q(n: u64) -> Scalar {
    Scalar::from_integer(factorial(n))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `binom(x, k)` for a rational upper argument.
pub fn binomial_general(x: &Scalar, k: u64) -> Scalar {
    let mut acc = Scalar::one();
    for i in 0..k {
        acc *= x - int(i as i64);
        acc /= int(i as i64 + 1);
    }
    acc
}

pub fn pow(base: &Scalar, exp: u32) -> Scalar {
    num_traits::pow(base.clone(), exp as usize)
}

/// `(-1)^k` as a scalar.
pub fn sign(k: i64) -> Scalar {
    if k.is_even() {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

pub fn is_integer(x: &Scalar) -> bool {
    x.is_integer()
}

/// Parses `7`, `-3/2`, `+4`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let s = s.strip_prefix('+').unwrap_or(s);
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad(s))?;
            let d: BigInt = d.trim().parse().map_err(|_| bad(s))?;
            if d.is_zero() {
                return Err(AlgebraError::Parse(format!("zero denominator in `{s}`")));
            }
            Scalar::new(n, d)
        }
        None => Scalar::from_integer(s.parse().map_err(|_| bad(s))?),
    };
    Ok(parsed)
}

fn bad(s: &str) -> AlgebraError {
    AlgebraError::Parse(format!("not a rational number: `{s}`"))
}

/// LaTeX for a rational: `\frac{3}{2}`, `-5`.
pub fn latex_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        let sgn = if x.is_negative() { "-" } else { "" };
        format!("{sgn}\\frac{{{}}}{{{}}}", x.numer().abs(), x.denom())
    }
}
