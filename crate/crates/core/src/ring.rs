use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Commutative coefficient ring with exact rational scaling.
///
/// `zero_like` / `one_like` take a template so that rings carrying extra
/// context (a symbol alphabet) can produce matching constants.
pub trait CoeffRing: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, c: &Scalar) -> Self;
    /// The constant `c` in the same ring as `self`.
    fn constant_like(&self, c: &Scalar) -> Self {
        self.one_like().scale(c)
    }
}

impl CoeffRing for Scalar {
    fn zero_like(&self) -> Self {
        Scalar::zero()
    }
    fn one_like(&self) -> Self {
        Scalar::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Scalar) -> Self {
        self * c
    }
}
