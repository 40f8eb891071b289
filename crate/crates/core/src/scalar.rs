//! Exact scalar fields the library is generic over.
//!
//! Every kernel and subspace identity in this crate is decided by exact zero
//! tests, so only exact fields qualify. The rational types from
//! `num-rational` are provided; `BigRational` is the default used by the
//! crate-root aliases because the CK series produces factorial denominators.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Signed;

/// An exact ordered field with a textual form `INT[/INT]`.
pub trait Scalar: Signed + Clone + Debug + Display + FromStr + Send + Sync + 'static {
    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// `n!` as a field element.
    fn factorial(n: usize) -> Self {
        (1..=n as i64).fold(Self::one(), |acc, i| acc * Self::from_i64(i))
    }
}

impl Scalar for Ratio<BigInt> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }
}

impl Scalar for Ratio<i128> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
}

impl Scalar for Ratio<i64> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }
}
