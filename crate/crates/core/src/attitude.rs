//! Who gains from collusion on average, by bidder position.
//!
//! The sign of every Shapley coefficient in row `i` of the gap matrix is
//! governed by one quadratic: column `j` carries the sign of
//! `2n - 3j - j^2`, flipped below the diagonal. Its positive root
//!
//! ```text
//! x*(n) = (-3 + sqrt(8n + 9)) / 2
//! ```
//!
//! is an integer exactly when `8n + 9` is an odd perfect square, i.e. when
//! `n` is a ladder number `n_k = (k^2 + k - 2) / 2` (2, 5, 9, 14, 20, ...).
//! On ladder rungs the two positions `x*` and `x* + 1` have identical,
//! nonpositive rows: both are weakly collusion averse, and for `n = 2` the
//! rows are outright zero. Strictly between rungs a single position
//! `ceil(x*)` has an all-negative row. Every other position gains from some
//! gap and loses from another.
//!
//! [`classify`] implements this casework with pure integer arithmetic;
//! [`classify_by_signs`] rederives the same report by scanning the exact
//! coefficient matrix, so the two can be checked against each other.

use crate::error::{Error, Result};
use crate::gain_game::GainGame;
use crate::scalar::Scalar;
use crate::shapley::{psi_matrix, shapley_fast};
use crate::Rational;
use num_traits::Zero;

/// How a bidder position relates to collusion on average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Attitude {
    /// Every gap coefficient in the row is strictly negative.
    StronglyAverse,
    /// Nonpositive row with at least one zero.
    WeaklyAverse,
    /// The row is identically zero (only happens at `n = 2`).
    WeaklyProneAndAverse,
    /// The row mixes signs.
    Neither,
}

/// Classification of every position for a given `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttitudeReport {
    pub n: usize,
    /// Ladder index: the largest `k >= 2` with `n_of_k(k) <= n`.
    pub k: usize,
    /// Whether `n` sits exactly on the ladder (`n == n_of_k(k)`).
    pub on_ladder: bool,
    /// Attitude of each canonical position (entry 0 is position 1).
    pub per_position: Vec<Attitude>,
    /// The averse positions: two on a ladder rung, one otherwise.
    pub averse_positions: Vec<usize>,
}

/// One row of the attitude ladder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderEntry {
    pub n: usize,
    pub kind: LadderKind,
    pub positions: Vec<usize>,
}

/// Shape of the averse region at a given `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    /// Two adjacent weakly averse positions (`n` on the ladder).
    TwoWeak,
    /// A single strongly averse position (`n` between rungs).
    OneStrong,
}

/// The `k`-th ladder number `(k^2 + k - 2) / 2`; requires `k >= 1`.
pub fn n_of_k(k: usize) -> usize {
    assert!(k >= 1, "ladder index starts at 1");
    (k * k + k - 2) / 2
}

/// Largest `k` with `n_of_k(k) <= n`, and whether equality holds. Pure
/// integer arithmetic: `n` is on the ladder iff `8n + 9` is a perfect
/// square (its root is odd whenever it exists).
fn ladder_index(n: usize) -> (usize, bool) {
    debug_assert!(n >= 2);
    let disc = 8 * n + 9;
    let root = disc.isqrt();
    (root.saturating_sub(1) / 2, root * root == disc)
}

/// Casework classification of all positions for `n >= 2` agents.
pub fn classify(n: usize) -> Result<AttitudeReport> {
    if n < 2 {
        return Err(Error::DegenerateProfile { n, required: 2 });
    }
    let (k, on_ladder) = ladder_index(n);
    let mut per_position = vec![Attitude::Neither; n];
    let averse_positions: Vec<usize> = if on_ladder {
        let tag = if n == 2 {
            Attitude::WeaklyProneAndAverse
        } else {
            Attitude::WeaklyAverse
        };
        per_position[k - 2] = tag;
        per_position[k - 1] = tag;
        vec![k - 1, k]
    } else {
        per_position[k - 1] = Attitude::StronglyAverse;
        vec![k]
    };
    Ok(AttitudeReport {
        n,
        k,
        on_ladder,
        per_position,
        averse_positions,
    })
}

/// The same report derived independently: build the exact coefficient matrix
/// and classify each row by its signs alone.
pub fn classify_by_signs(n: usize) -> Result<AttitudeReport> {
    let m = psi_matrix::<Rational>(n)?;
    let mut per_position = Vec::with_capacity(n);
    for i in 1..=n {
        let row = m.row(i);
        let negs = row.iter().filter(|x| **x < Rational::zero()).count();
        let pos = row.iter().filter(|x| **x > Rational::zero()).count();
        let zeros = row.len() - negs - pos;
        per_position.push(if negs + pos == 0 {
            Attitude::WeaklyProneAndAverse
        } else if pos == 0 && zeros > 0 {
            Attitude::WeaklyAverse
        } else if pos == 0 {
            Attitude::StronglyAverse
        } else {
            Attitude::Neither
        });
    }
    let averse_positions: Vec<usize> = per_position
        .iter()
        .enumerate()
        .filter(|(_, a)| !matches!(a, Attitude::Neither))
        .map(|(i0, _)| i0 + 1)
        .collect();
    let on_ladder = averse_positions.len() == 2;
    let k = if on_ladder {
        averse_positions[1]
    } else {
        averse_positions[0]
    };
    Ok(AttitudeReport {
        n,
        k,
        on_ladder,
        per_position,
        averse_positions,
    })
}

/// The ladder for all `n` from 2 up to `max_n` inclusive.
pub fn ladder(max_n: usize) -> Result<Vec<LadderEntry>> {
    if max_n < 2 {
        return Err(Error::DegenerateProfile {
            n: max_n,
            required: 2,
        });
    }
    (2..=max_n)
        .map(|n| {
            let report = classify(n)?;
            Ok(LadderEntry {
                n,
                kind: if report.on_ladder {
                    LadderKind::TwoWeak
                } else {
                    LadderKind::OneStrong
                },
                positions: report.averse_positions,
            })
        })
        .collect()
}

/// Shape check of the Shapley values across positions for one game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodalityReport {
    /// Weakly decreasing up to the averse region, weakly increasing after.
    pub holds: bool,
    pub first_averse: usize,
    pub last_averse: usize,
}

/// Checks that the Shapley values fall until the averse region and rise
/// after it, the valley shape the sign casework predicts.
pub fn unimodality_check<T: Scalar>(game: &GainGame<T>) -> Result<UnimodalityReport> {
    let n = game.n();
    if n < 2 {
        return Err(Error::DegenerateProfile { n, required: 2 });
    }
    let report = classify(n)?;
    let first_averse = report.averse_positions[0];
    let last_averse = *report.averse_positions.last().expect("nonempty");
    let phi = shapley_fast(game);
    let values = phi.canonical_values();
    let falling = (1..first_averse).all(|i| values[i - 1] >= values[i]);
    let rising = (last_averse..n).all(|i| values[i - 1] <= values[i]);
    Ok(UnimodalityReport {
        holds: falling && rising,
        first_averse,
        last_averse,
    })
}
