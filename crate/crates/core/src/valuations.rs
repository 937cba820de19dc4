//! Sealed valuation profiles in canonical order.
//!
//! Every analysis in this crate indexes agents by canonical position:
//! position 1 holds the highest valuation, ties broken in favor of the
//! earlier input position. Callers keep their own agent names; the profile
//! records which input position each canonical slot came from.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Valuations sorted weakly decreasing, with the permutation back to the
/// caller's input order.
///
/// Canonical indices are 1-based: `value(1)` is the highest valuation and its
/// holder wins the object. Negative valuations are allowed; the formulas
/// never require positivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationProfile<T> {
    values: Vec<T>,
    original: Vec<usize>,
}

impl<T: Scalar> ValuationProfile<T> {
    /// Sorts `values` into canonical order.
    ///
    /// The original label of an entry is its 1-based position in the input;
    /// ties keep ascending label order, so among tied maxima the
    /// lowest-labeled agent takes canonical position 1.
    pub fn canonicalize(values: &[T]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidProfile("no valuations given".into()));
        }
        for (pos, v) in values.iter().enumerate() {
            if !v.is_finite_value() {
                return Err(Error::InvalidProfile(format!(
                    "valuation at position {} is not finite",
                    pos + 1
                )));
            }
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| {
            values[b]
                .partial_cmp(&values[a])
                .expect("finite valuations are totally ordered")
        });
        Ok(Self {
            values: order.iter().map(|&i| values[i].clone()).collect(),
            original: order.iter().map(|&i| i + 1).collect(),
        })
    }

    /// Number of agents.
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Valuations in canonical order.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Valuation at canonical position `i` (1-based).
    ///
    /// # Panics
    /// If `i` is outside `1..=n`.
    pub fn value(&self, i: usize) -> &T {
        assert!(i >= 1 && i <= self.n(), "canonical index {i} out of range");
        &self.values[i - 1]
    }

    /// Input position (1-based) that canonical position `i` came from.
    ///
    /// # Panics
    /// If `i` is outside `1..=n`.
    pub fn original_label(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.n(), "canonical index {i} out of range");
        self.original[i - 1]
    }

    /// Canonical position of the agent at input position `label`.
    ///
    /// # Panics
    /// If `label` is outside `1..=n`.
    pub fn canonical_position(&self, label: usize) -> usize {
        assert!(
            label >= 1 && label <= self.n(),
            "input position {label} out of range"
        );
        1 + self
            .original
            .iter()
            .position(|&l| l == label)
            .expect("labels are a bijection")
    }

    /// True when all valuations coincide.
    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|v| *v == self.values[0])
    }

    /// The gaps `v_j - v_{j+1}` for `j = 1..n-1`, all nonnegative.
    ///
    /// Needs at least two agents.
    pub fn adjacent_differences(&self) -> Result<Vec<T>> {
        if self.n() < 2 {
            return Err(Error::DegenerateProfile {
                n: self.n(),
                required: 2,
            });
        }
        Ok(self
            .values
            .windows(2)
            .map(|w| w[0].clone() - w[1].clone())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rational, Scalar};
    use num_traits::Zero;

    fn rat(values: &[i64]) -> Vec<Rational> {
        values.iter().map(|&v| Rational::from_int(v)).collect()
    }

    #[test]
    fn canonical_order_is_weakly_decreasing_with_stable_ties() {
        let p = ValuationProfile::canonicalize(&rat(&[5, 7, 5])).unwrap();
        assert_eq!(p.values(), &rat(&[7, 5, 5])[..]);
        assert_eq!(
            (1..=3).map(|i| p.original_label(i)).collect::<Vec<_>>(),
            vec![2, 1, 3]
        );
        assert_eq!(p.canonical_position(2), 1);
        assert_eq!(p.canonical_position(1), 2);
        assert_eq!(p.canonical_position(3), 3);
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let p = ValuationProfile::canonicalize(&rat(&[3, 9, 9, 1])).unwrap();
        let again = ValuationProfile::canonicalize(p.values()).unwrap();
        assert_eq!(again.values(), p.values());
        assert_eq!(
            (1..=4).map(|i| again.original_label(i)).collect::<Vec<_>>(),
            vec![1, 2, 3, 4]
        );
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(matches!(
            ValuationProfile::<Rational>::canonicalize(&[]),
            Err(Error::InvalidProfile(_))
        ));
        assert!(matches!(
            ValuationProfile::canonicalize(&[1.0, f64::NAN]),
            Err(Error::InvalidProfile(_))
        ));
    }

    #[test]
    fn adjacent_differences_telescope() {
        let p = ValuationProfile::canonicalize(&rat(&[10, 6, 3, 2, 1])).unwrap();
        let d = p.adjacent_differences().unwrap();
        assert_eq!(d, rat(&[4, 3, 1, 1]));
        let total: Rational = d.iter().cloned().fold(Rational::zero(), |a, b| a + b);
        assert_eq!(total, p.value(1) - p.value(5));
        assert!(d.iter().all(|g| *g >= Rational::zero()));
    }

    #[test]
    fn single_agent_has_no_differences() {
        let p = ValuationProfile::canonicalize(&rat(&[4])).unwrap();
        assert_eq!(
            p.adjacent_differences(),
            Err(Error::DegenerateProfile { n: 1, required: 2 })
        );
        assert!(p.is_constant());
    }

    #[test]
    fn negative_valuations_are_accepted() {
        let p = ValuationProfile::canonicalize(&rat(&[0, -1, -1])).unwrap();
        assert_eq!(p.values(), &rat(&[0, -1, -1])[..]);
    }
}
