//! Scalar abstraction for the floating-point statistics.
//!
//! Counts are always `u64`; only derived quantities (shares, per-million
//! frequencies, rank constants, tolerances) are generic.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point type usable by the statistics modules (`f32` or `f64`).
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + FromStr + Default + Send + Sync + 'static
{
    /// Lossy conversion from a count.
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("float conversion from u64 never fails")
    }

    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("float conversion from f64 never fails")
    }
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + FromStr
        + Default
        + Send
        + Sync
        + 'static
{
}

/// `part * 100 / whole`, zero when `whole` is zero.
pub(crate) fn percent<T: Scalar>(part: u64, whole: u64) -> T {
    if whole == 0 {
        return T::zero();
    }
    T::from_count(part) * T::lit(100.0) / T::from_count(whole)
}

/// `part * 10^6 / whole`, zero when `whole` is zero.
pub(crate) fn per_million<T: Scalar>(part: u64, whole: u64) -> T {
    if whole == 0 {
        return T::zero();
    }
    T::from_count(part) * T::lit(1.0e6) / T::from_count(whole)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percent_and_per_million() {
        assert_eq!(percent::<f64>(1, 4), 25.0);
        assert_eq!(percent::<f32>(0, 0), 0.0);
        assert_eq!(per_million::<f64>(54, 1_000_000), 54.0);
        assert_eq!(per_million::<f64>(1, 0), 0.0);
    }
}
