//! The arithmetic substrate: one trait bundling what every computation here
//! needs from its number type.

use std::fmt;

use num_traits::{FromPrimitive, Num, NumAssign, Signed};

/// Number type the analyses are generic over.
///
/// [`crate::Rational`] gives exact results; `f64`/`f32` trade exactness for
/// speed. Implementations must be honest fields of characteristic zero as far
/// as the operations go; floats qualify up to rounding.
pub trait Scalar:
    Num + NumAssign + Signed + FromPrimitive + Clone + PartialOrd + fmt::Debug + fmt::Display + 'static
{
    /// False only for values that cannot enter a computation (float NaN or
    /// infinity). Exact types are always finite.
    fn is_finite_value(&self) -> bool {
        true
    }

    /// Embeds a machine integer.
    fn from_int(x: i64) -> Self {
        Self::from_i64(x).expect("i64 embeds into every Scalar")
    }

    /// The fraction `num / den`, exact for exact types.
    fn ratio(num: i64, den: i64) -> Self {
        debug_assert!(den != 0, "zero denominator");
        Self::from_int(num) / Self::from_int(den)
    }
}

impl Scalar for f64 {
    fn is_finite_value(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Scalar for f32 {
    fn is_finite_value(&self) -> bool {
        f32::is_finite(*self)
    }
}

impl Scalar for num_rational::BigRational {}

/// Sums a slice by balanced halving: same exact result as a left fold for
/// exact types, but smaller intermediate denominators there and less error
/// accumulation for floats.
pub(crate) fn balanced_sum<T: Scalar>(xs: &[T]) -> T {
    match xs.len() {
        0 => T::zero(),
        1 => xs[0].clone(),
        len => {
            let (lo, hi) = xs.split_at(len / 2);
            balanced_sum(lo) + balanced_sum(hi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::Zero;

    #[test]
    fn ratio_is_exact_for_rationals() {
        let r = Rational::ratio(1, 3) + Rational::ratio(1, 6);
        assert_eq!(r, Rational::ratio(1, 2));
        assert_eq!(Rational::ratio(-4, 6), Rational::ratio(-2, 3));
    }

    #[test]
    fn finiteness_only_fails_for_non_finite_floats() {
        assert!(1.5f64.is_finite_value());
        assert!(!f64::NAN.is_finite_value());
        assert!(!f64::INFINITY.is_finite_value());
        assert!(Rational::from_int(7).is_finite_value());
    }

    #[test]
    fn balanced_sum_matches_fold() {
        let xs: Vec<Rational> = (1..=9).map(|k| Rational::ratio(1, k)).collect();
        let fold = xs.iter().cloned().fold(Rational::zero(), |a, b| a + b);
        assert_eq!(balanced_sum(&xs), fold);
        assert_eq!(balanced_sum::<Rational>(&[]), Rational::zero());
    }
}
