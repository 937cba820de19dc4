//! The transferable-utility game induced by collusive bidding.
//!
//! A coalition's members all report the best valuation held inside the
//! coalition. Each member's compensation then moves exactly as under a
//! single misreport, and the coalition's pooled net gain is
//!
//! ```text
//! v(S) = (n - s) / n^2 * sum over i in S of (max_S - v_i)
//! ```
//!
//! with `s = |S|` and `max_S` the best valuation in `S`. The game is
//! zero-normalized and inessential at the extremes: the empty coalition,
//! singletons, and the grand coalition are all worth zero. Worth never
//! depends on which agent holds the object, only on the spread of valuations
//! inside the coalition.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{balanced_sum, Scalar};
use crate::valuations::ValuationProfile;

/// A set of canonical agent positions (1-based), kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coalition {
    members: Vec<usize>,
}

impl Coalition {
    /// Builds a coalition from any iterable of 1-based canonical positions.
    ///
    /// Duplicates collapse; position 0 is rejected. Range against a concrete
    /// profile is checked by the operations that take the coalition.
    pub fn new(members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        if members.contains(&0) {
            return Err(Error::InvalidCoalition(
                "agent positions are 1-based; 0 is not an agent".into(),
            ));
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { members })
    }

    /// Members in ascending order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    /// The coalition with `i` added.
    pub fn with(&self, i: usize) -> Result<Self> {
        Self::new(self.members.iter().copied().chain(std::iter::once(i)))
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, m) in self.members.iter().enumerate() {
            if idx > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

/// The collusion gain game on a canonical profile.
#[derive(Debug, Clone)]
pub struct GainGame<T> {
    profile: ValuationProfile<T>,
}

impl<T: Scalar> GainGame<T> {
    pub fn new(profile: ValuationProfile<T>) -> Self {
        Self { profile }
    }

    pub fn profile(&self) -> &ValuationProfile<T> {
        &self.profile
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    fn check_members(&self, coalition: &Coalition) -> Result<()> {
        match coalition.members().last() {
            Some(&m) if m > self.n() => Err(Error::InvalidCoalition(format!(
                "member {m} outside 1..={}",
                self.n()
            ))),
            _ => Ok(()),
        }
    }

    /// Pooled net gain `v(S)` of a colluding coalition. Always nonnegative,
    /// and zero when `|S| <= 1` or `S` is everyone.
    pub fn worth(&self, coalition: &Coalition) -> Result<T> {
        self.check_members(coalition)?;
        if coalition.len() <= 1 {
            return Ok(T::zero());
        }
        // Canonical order is weakly decreasing, so the lowest member index
        // holds the coalition's best valuation.
        let best = self.profile.value(coalition.members()[0]);
        let spread: Vec<T> = coalition
            .members()
            .iter()
            .map(|&i| best.clone() - self.profile.value(i).clone())
            .collect();
        let n = self.n() as i64;
        let s = coalition.len() as i64;
        Ok(T::ratio(n - s, n * n) * balanced_sum(&spread))
    }

    /// `v(S + i) - v(S)` evaluated in closed form, without touching `v(S + i)`.
    ///
    /// For nonempty `S` with best valuation `b` and internal spread
    /// `q = sum over k in S of (b - v_k)`:
    ///
    /// ```text
    /// (n - s - 1) / n^2 * max(s * (v_i - b), b - v_i)  -  q / n^2
    /// ```
    ///
    /// where the first branch of the max is active exactly when `i` takes
    /// over as the coalition's best bidder. Joining the empty coalition is
    /// worth zero by convention, matching `v({i}) - v({}) = 0`.
    pub fn marginal_contribution(&self, coalition: &Coalition, i: usize) -> Result<T> {
        self.check_members(coalition)?;
        if i < 1 || i > self.n() {
            return Err(Error::InvalidCoalition(format!(
                "joining agent {i} outside 1..={}",
                self.n()
            )));
        }
        if coalition.contains(i) {
            return Err(Error::InvalidCoalition(format!(
                "agent {i} already belongs to {coalition}"
            )));
        }
        if coalition.is_empty() {
            return Ok(T::zero());
        }

        let best = self.profile.value(coalition.members()[0]);
        let spread: Vec<T> = coalition
            .members()
            .iter()
            .map(|&k| best.clone() - self.profile.value(k).clone())
            .collect();
        let q = balanced_sum(&spread);
        let n = self.n() as i64;
        let s = coalition.len() as i64;
        let vi = self.profile.value(i).clone();
        let takeover = T::from_int(s) * (vi.clone() - best.clone());
        let join = best.clone() - vi;
        let dominant = if takeover > join { takeover } else { join };
        Ok(T::ratio(n - s - 1, n * n) * dominant - q / T::from_int(n * n))
    }

    /// `v(S + j) - v(S + j+1)` for a coalition `S` avoiding the adjacent
    /// agents `j` and `j+1`.
    ///
    /// The difference collapses to a multiple of the single gap
    /// `v_j - v_{j+1}`: positive `(n-s-1) * s / n^2` times the gap when `S`
    /// sits entirely below position `j`, and `-(n-s-1) / n^2` times the gap
    /// otherwise.
    pub fn adjacent_worth_difference(&self, j: usize, coalition: &Coalition) -> Result<T> {
        let n = self.n();
        if j < 1 || j + 1 > n {
            return Err(Error::InvalidSize(format!(
                "adjacent pair ({j}, {}) outside 1..={n}",
                j + 1
            )));
        }
        self.check_members(coalition)?;
        if coalition.contains(j) || coalition.contains(j + 1) {
            return Err(Error::InvalidCoalition(format!(
                "coalition {coalition} overlaps the adjacent pair ({j}, {})",
                j + 1
            )));
        }

        let gap = self.profile.value(j).clone() - self.profile.value(j + 1).clone();
        let n = n as i64;
        let s = coalition.len() as i64;
        let above = coalition.members().first().is_some_and(|&m| m < j);
        if above {
            Ok(T::zero() - T::ratio(n - s - 1, n * n) * gap)
        } else {
            Ok(T::ratio((n - s - 1) * s, n * n) * gap)
        }
    }
}

/// Worth of the coalition encoded by `mask` (bit `i` = canonical position
/// `i+1`) over canonical `values`. Shared by the enumeration oracles.
pub(crate) fn worth_of_mask<T: Scalar>(values: &[T], mask: u64) -> T {
    let n = values.len();
    let s = mask.count_ones() as i64;
    if s <= 1 || s == n as i64 {
        return T::zero();
    }
    let best = &values[mask.trailing_zeros() as usize];
    let mut spread = T::zero();
    let mut bits = mask;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        spread += best.clone() - values[i].clone();
        bits &= bits - 1;
    }
    T::ratio(n as i64 - s, (n * n) as i64) * spread
}
