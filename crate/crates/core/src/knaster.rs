//! The sealed-bid allocation of one indivisible object with monetary
//! compensation.
//!
//! The highest bidder takes the object at her own valuation, everyone starts
//! from the equal share `v_i / n`, and the surplus the winning bid creates
//! over the mean bid is split evenly. Truth-telling is not a dominant
//! strategy: [`single_misreport_deltas`] quantifies exactly who gains and who
//! pays when one losing agent inflates her bid.

use crate::error::{Error, Result};
use crate::scalar::{balanced_sum, Scalar};
use crate::valuations::ValuationProfile;

/// Outcome of the allocation on a canonical profile.
///
/// All vectors are indexed by canonical position (entry 0 is agent 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnasterAllocation<T> {
    /// Equal shares `v_i / n`, each agent's valuation of a 1/n claim.
    pub initial_shares: Vec<T>,
    /// `v_1 - (1/n) * sum(v)`: what the winning bid adds over the mean bid.
    pub surplus: T,
    /// Final monetary worth `V_i = v_i/n + surplus/n` received by each agent.
    pub adjusted_shares: Vec<T>,
    /// Cash flows: the winner pays `-c_1`, everyone else receives `c_i`.
    pub compensations: Vec<T>,
    /// Canonical position of the agent who takes the object (always 1).
    pub winner: usize,
}

/// Runs the allocation on a canonical profile.
pub fn allocate<T: Scalar>(profile: &ValuationProfile<T>) -> KnasterAllocation<T> {
    let n = profile.n();
    let n_t = T::from_int(n as i64);
    let total = balanced_sum(profile.values());
    let surplus = profile.value(1).clone() - total / n_t.clone();
    let uplift = surplus.clone() / n_t.clone();

    let initial_shares: Vec<T> = profile
        .values()
        .iter()
        .map(|v| v.clone() / n_t.clone())
        .collect();
    let adjusted_shares: Vec<T> = initial_shares
        .iter()
        .map(|e| e.clone() + uplift.clone())
        .collect();
    let compensations: Vec<T> = adjusted_shares
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if i == 0 {
                v.clone() - profile.value(1).clone()
            } else {
                v.clone()
            }
        })
        .collect();

    KnasterAllocation {
        initial_shares,
        surplus,
        adjusted_shares,
        compensations,
        winner: 1,
    }
}

/// Change in every agent's final worth when losing agent `k` reports
/// `v_k + eps` instead of `v_k`, with `0 < eps < v_1 - v_k` so the winner is
/// unchanged.
///
/// Agent `k` gains `(n-1)/n^2 * eps`; every other agent loses `eps / n^2`.
/// The vector is indexed by the canonical positions of `profile`.
pub fn single_misreport_deltas<T: Scalar>(
    profile: &ValuationProfile<T>,
    k: usize,
    eps: &T,
) -> Result<Vec<T>> {
    let n = profile.n();
    if n < 2 {
        return Err(Error::DegenerateProfile { n, required: 2 });
    }
    if k < 2 || k > n {
        return Err(Error::InvalidMisreport(format!(
            "misreporting agent must be a losing agent (canonical 2..={n}), got {k}"
        )));
    }
    if !eps.is_finite_value() || *eps <= T::zero() {
        return Err(Error::InvalidMisreport(
            "misreport size must be finite and positive".into(),
        ));
    }
    let headroom = profile.value(1).clone() - profile.value(k).clone();
    if *eps >= headroom {
        return Err(Error::InvalidMisreport(format!(
            "misreport of {eps} reaches or passes the winning bid (headroom {headroom})"
        )));
    }

    let n_sq = T::from_int((n * n) as i64);
    let common_loss = eps.clone() / n_sq.clone();
    let gain = T::from_int(n as i64 - 1) * eps.clone() / n_sq;
    Ok((1..=n)
        .map(|i| {
            if i == k {
                gain.clone()
            } else {
                T::zero() - common_loss.clone()
            }
        })
        .collect())
}
