use std::fmt::Debug;

use num_traits::{One, Zero};

use super::rat::Rat;

/// Coefficient ring for structure tables: exact rationals at a point, or
/// polynomials over a chart.
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rat(r: &Rat) -> Self;
    fn scale(&self, r: &Rat) -> Self;
    /// The value as a rational, when it does not depend on any coordinate.
    fn as_rat(&self) -> Option<Rat>;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn add_assign(&mut self, other: &Self) {
        *self = self.add(other);
    }
}

impl Scalar for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn scale(&self, r: &Rat) -> Self {
        self * r
    }
    fn as_rat(&self) -> Option<Rat> {
        Some(self.clone())
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
}
