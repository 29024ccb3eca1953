use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::model::Rational;

/// Arithmetic the flow algorithms need. Exact types compare exactly; `f64`
/// treats anything within [`F64_EPS`] of zero as zero.
pub(crate) trait Scalar: Clone + Debug {
    fn zero() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn is_negative(&self) -> bool;
    fn is_positive(&self) -> bool;

    fn is_zero(&self) -> bool {
        !self.is_negative() && !self.is_positive()
    }

    fn lt(&self, rhs: &Self) -> bool {
        self.sub(rhs).is_negative()
    }

    fn min_of(&self, rhs: &Self) -> Self {
        if rhs.lt(self) {
            rhs.clone()
        } else {
            self.clone()
        }
    }
}

pub(crate) const F64_EPS: f64 = 1e-12;

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn is_negative(&self) -> bool {
        *self < -F64_EPS
    }
    fn is_positive(&self) -> bool {
        *self > F64_EPS
    }
}
