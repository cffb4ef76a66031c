//! The commutative-ring interface shared by matrix entries.

use std::fmt::Debug;

use crate::Rat;

/// A commutative ring with exact division where it exists.
///
/// Constants are produced from an existing element (`zero_like`, `one_like`)
/// because some rings carry context: a multivariate polynomial knows its
/// variable set.
pub trait Ring: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    #[allow(clippy::wrong_self_convention)]
    fn from_rat_like(&self, c: &Rat) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / other` when the quotient lies in the ring, `None` otherwise.
    fn div_exact(&self, other: &Self) -> Option<Self>;
}

impl Ring for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn from_rat_like(&self, c: &Rat) -> Self {
        c.clone()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        self.checked_div(other).ok()
    }
}
