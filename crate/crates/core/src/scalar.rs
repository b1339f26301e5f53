//! Floating-point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar the optimizer can run on: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Tolerance used when checking that weights or probabilities sum to one.
    const SUM_TOLERANCE: f64;

    /// Lossy conversion from `f64`; literals and RNG draws go through here.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 is representable in every Scalar")
    }

    fn sum_tolerance() -> Self {
        Self::of(Self::SUM_TOLERANCE)
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }
}

impl Scalar for f64 {
    const SUM_TOLERANCE: f64 = 1e-9;
}

impl Scalar for f32 {
    const SUM_TOLERANCE: f64 = 1e-5;
}

/// Neumaier-compensated summation.
pub fn compensated_sum<T: Scalar, I: IntoIterator<Item = T>>(values: I) -> T {
    let mut sum = T::zero();
    let mut carry = T::zero();
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry = carry + ((sum - t) + v);
        } else {
            carry = carry + ((v - t) + sum);
        }
        sum = t;
    }
    sum + carry
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancelled_terms() {
        let values = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(values.iter().copied().sum::<f64>(), 0.0);
        assert_eq!(compensated_sum(values), 2.0);
    }

    #[test]
    fn compensated_sum_of_tenths() {
        let s: f64 = compensated_sum(std::iter::repeat_n(0.1, 10));
        assert_eq!(s, 1.0);
        let s32: f32 = compensated_sum(std::iter::repeat_n(0.1f32, 10));
        assert!((s32 - 1.0).abs() <= f32::EPSILON);
    }

    #[test]
    fn empty_sum_is_zero() {
        assert_eq!(compensated_sum::<f64, _>(Vec::new()), 0.0);
    }
}
