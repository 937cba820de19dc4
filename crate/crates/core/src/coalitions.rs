//! Which coalitions gain most, in total and per member.
//!
//! Among coalitions of a fixed size `s >= 2`, worth is maximized by pairing
//! the winner with the `s - 1` lowest bidders: `S_s = {1, n+2-s, ..., n}`.
//! Growing `s` along that family changes worth by a weakly decreasing
//! increment `Delta(s)`, so the best total gain is found at the last
//! nonnegative increment; the per-capita increments `delta(s)` single-cross
//! zero as well. Formation can be simulated greedily: the winner pairs with
//! the lowest bidder, then invites the next-lowest while the chosen
//! criterion's increment clears an admission threshold.

use crate::error::{Error, Result};
use crate::gain_game::{Coalition, GainGame};
use crate::scalar::{balanced_sum, Scalar};

/// The best coalition of one size: its members, worth, and per-member worth.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeRow<T> {
    pub size: usize,
    pub coalition: Coalition,
    pub worth: T,
    pub per_capita: T,
}

/// Size bounds on the optimal coalition sizes, evaluated on one game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub s_star: usize,
    pub s_double_star: usize,
    /// `s_double_star <= s_star`.
    pub order_ok: bool,
    /// `2 <= s_star <= floor(n/2 + 1)`.
    pub s_star_ok: bool,
    /// `2 <= s_double_star <= ceil(sqrt(n))`.
    pub s_double_star_ok: bool,
    /// For even `n` with `v_{n/2+1} != v_n`: `s_star <= n/2`, since the
    /// increment at `n/2 + 1` is then strictly negative. None when the
    /// hypothesis fails.
    pub sharper_even: Option<bool>,
    /// When some `l <= n/2 + 1` has `v_1 = v_{n+2-l} > v_n`: `s_star < l`.
    /// None when no such `l` exists.
    pub sharper_tie: Option<bool>,
}

/// Everything about the size family in one report.
#[derive(Debug, Clone, PartialEq)]
pub struct CoalitionAnalysis<T> {
    /// Best coalition per size, `s = 1..=n`.
    pub per_size: Vec<SizeRow<T>>,
    /// Worth increments `Delta(s)` for `s = 2..=n`.
    pub deltas: Vec<T>,
    /// Per-capita increments `delta(s)` for `s = 2..=n`.
    pub small_deltas: Vec<T>,
    /// Largest size with nonnegative worth increment.
    pub s_star: usize,
    /// Largest size with nonnegative per-capita increment.
    pub s_double_star: usize,
    /// None when `v_1 = v_n`, where the bounds are not stated.
    pub bounds: Option<BoundsReport>,
}

/// Admission rule for greedy formation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormationCriterion {
    /// Admit while the total-worth increment stays above the threshold.
    Total,
    /// Admit until the per-capita increment drops below minus the threshold.
    PerCapita,
}

/// One admission decision in the greedy process.
#[derive(Debug, Clone, PartialEq)]
pub struct FormationStep<T> {
    /// Canonical position of the invited agent.
    pub agent: usize,
    /// The increment the rule examined (total or per-capita).
    pub increment: T,
    pub accepted: bool,
}

/// Full trace of the greedy formation process.
#[derive(Debug, Clone, PartialEq)]
pub struct FormationTrace<T> {
    pub criterion: FormationCriterion,
    pub threshold: T,
    pub steps: Vec<FormationStep<T>>,
    pub final_coalition: Coalition,
    pub final_worth: T,
}

/// The size-`s` coalition `{1} + {n+2-s, ..., n}` (just the winner for
/// `s = 1`).
fn nested_coalition(n: usize, s: usize) -> Coalition {
    Coalition::new(std::iter::once(1).chain(n + 2 - s..=n)).expect("positions are 1-based")
}

/// The best coalition of size `s`: the winner plus the `s - 1` lowest
/// bidders. `s` must lie in `1..=n`.
pub fn best_of_size<T: Scalar>(game: &GainGame<T>, s: usize) -> Result<SizeRow<T>> {
    let n = game.n();
    if s < 1 || s > n {
        return Err(Error::InvalidSize(format!("size {s} outside 1..={n}")));
    }
    let coalition = nested_coalition(n, s);
    let worth = game.worth(&coalition)?;
    let per_capita = worth.clone() / T::from_int(s as i64);
    Ok(SizeRow {
        size: s,
        coalition,
        worth,
        per_capita,
    })
}

/// Members strictly between the winner and the tail of `S_{s-1}`, i.e. the
/// spread terms `v_{n+2-s} - v_j` for `j` in the tail of the previous size.
fn tail_spread<T: Scalar>(game: &GainGame<T>, s: usize) -> T {
    let n = game.n();
    let joining = game.profile().value(n + 2 - s);
    let spread: Vec<T> = (n + 3 - s..=n)
        .map(|j| joining.clone() - game.profile().value(j).clone())
        .collect();
    balanced_sum(&spread)
}

/// Worth increment `Delta(s) = v(S_s) - v(S_{s-1})` in closed form, for
/// `s` in `2..=n`:
///
/// ```text
/// Delta(s) = [ (n - 2s + 2) * (v_1 - v_{n+2-s})
///              - sum over j in tail(S_{s-1}) of (v_{n+2-s} - v_j) ] / n^2
/// ```
pub fn delta_total<T: Scalar>(game: &GainGame<T>, s: usize) -> Result<T> {
    let n = game.n();
    if s < 2 || s > n {
        return Err(Error::InvalidSize(format!("size {s} outside 2..={n}")));
    }
    let nn = n as i64;
    let ss = s as i64;
    let gap = game.profile().value(1).clone() - game.profile().value(n + 2 - s).clone();
    let lead = T::from_int(nn - 2 * ss + 2) * gap;
    Ok((lead - tail_spread(game, s)) / T::from_int(nn) / T::from_int(nn))
}

/// Per-capita increment `delta(s) = v(S_s)/s - v(S_{s-1})/(s-1)` in closed
/// form, for `s` in `2..=n`:
///
/// ```text
/// delta(s) = [ (n + s - s^2) * (v_1 - v_{n+2-s})
///              - n * sum over j in tail(S_{s-1}) of (v_{n+2-s} - v_j) ]
///            / (n^2 * s * (s-1))
/// ```
pub fn delta_percapita<T: Scalar>(game: &GainGame<T>, s: usize) -> Result<T> {
    let n = game.n();
    if s < 2 || s > n {
        return Err(Error::InvalidSize(format!("size {s} outside 2..={n}")));
    }
    let nn = n as i64;
    let ss = s as i64;
    let gap = game.profile().value(1).clone() - game.profile().value(n + 2 - s).clone();
    let lead = T::from_int(nn + ss - ss * ss) * gap;
    let num = lead - T::from_int(nn) * tail_spread(game, s);
    Ok(num / T::from_int(nn) / T::from_int(nn) / T::from_int(ss * (ss - 1)))
}

/// `(s_star, s_double_star)`: the largest sizes whose total and per-capita
/// increments are still nonnegative. On a constant profile every increment
/// is zero and both are `n`. Needs `n >= 2`.
pub fn optimal_sizes<T: Scalar>(game: &GainGame<T>) -> Result<(usize, usize)> {
    let n = game.n();
    if n < 2 {
        return Err(Error::DegenerateProfile { n, required: 2 });
    }
    let zero = T::zero();
    let mut s_star = 2;
    let mut s_double_star = 2;
    for s in 2..=n {
        if delta_total(game, s)? >= zero {
            s_star = s;
        }
        if delta_percapita(game, s)? >= zero {
            s_double_star = s;
        }
    }
    Ok((s_star, s_double_star))
}

fn ceil_sqrt(n: usize) -> usize {
    let r = n.isqrt();
    if r * r == n {
        r
    } else {
        r + 1
    }
}

/// Evaluates the size bounds on one game. Refused when `v_1 = v_n`, where
/// the bounds are not stated.
pub fn check_bounds<T: Scalar>(game: &GainGame<T>) -> Result<BoundsReport> {
    let n = game.n();
    if n < 2 {
        return Err(Error::DegenerateProfile { n, required: 2 });
    }
    if game.profile().value(1) == game.profile().value(n) {
        return Err(Error::DegenerateBounds);
    }
    let (s_star, s_double_star) = optimal_sizes(game)?;

    let sharper_even = if n % 2 == 0 && game.profile().value(n / 2 + 1) != game.profile().value(n)
    {
        Some(s_star <= n / 2)
    } else {
        None
    };
    let sharper_tie = (2..=(n + 2) / 2)
        .find(|&l| {
            game.profile().value(1) == game.profile().value(n + 2 - l)
                && game.profile().value(n + 2 - l) > game.profile().value(n)
        })
        .map(|l| s_star < l);

    Ok(BoundsReport {
        s_star,
        s_double_star,
        order_ok: s_double_star <= s_star,
        s_star_ok: (2..=(n + 2) / 2).contains(&s_star),
        s_double_star_ok: s_double_star >= 2 && s_double_star <= ceil_sqrt(n),
        sharper_even,
        sharper_tie,
    })
}

/// The whole size family, its increments, the optima, and the bounds (absent
/// on constant profiles). Needs `n >= 2`.
pub fn analyze<T: Scalar>(game: &GainGame<T>) -> Result<CoalitionAnalysis<T>> {
    let n = game.n();
    if n < 2 {
        return Err(Error::DegenerateProfile { n, required: 2 });
    }
    let per_size = (1..=n)
        .map(|s| best_of_size(game, s))
        .collect::<Result<Vec<_>>>()?;
    let deltas = (2..=n)
        .map(|s| delta_total(game, s))
        .collect::<Result<Vec<_>>>()?;
    let small_deltas = (2..=n)
        .map(|s| delta_percapita(game, s))
        .collect::<Result<Vec<_>>>()?;
    let (s_star, s_double_star) = optimal_sizes(game)?;
    let bounds = match check_bounds(game) {
        Ok(b) => Some(b),
        Err(Error::DegenerateBounds) => None,
        Err(e) => return Err(e),
    };
    Ok(CoalitionAnalysis {
        per_size,
        deltas,
        small_deltas,
        s_star,
        s_double_star,
        bounds,
    })
}

/// Greedy formation: the winner and the lowest bidder pair up first, then
/// agents `n-1, n-2, ...` are invited in turn while the criterion's
/// increment clears the (nonnegative) threshold. The trace records one step
/// per invitation, including the first rejection, where the process stops.
pub fn form_coalition<T: Scalar>(
    game: &GainGame<T>,
    criterion: FormationCriterion,
    threshold: T,
) -> Result<FormationTrace<T>> {
    let n = game.n();
    if n < 2 {
        return Err(Error::DegenerateProfile { n, required: 2 });
    }
    if !threshold.is_finite_value() || threshold < T::zero() {
        return Err(Error::InvalidThreshold(format!(
            "admission threshold must be finite and nonnegative, got {threshold}"
        )));
    }

    let increment_at = |s: usize| -> Result<T> {
        match criterion {
            FormationCriterion::Total => delta_total(game, s),
            FormationCriterion::PerCapita => delta_percapita(game, s),
        }
    };
    let admits = |increment: &T| -> bool {
        match criterion {
            FormationCriterion::Total => *increment > threshold,
            FormationCriterion::PerCapita => {
                *increment >= T::zero() - threshold.clone()
            }
        }
    };

    let mut steps = vec![FormationStep {
        agent: n,
        increment: increment_at(2)?,
        accepted: true,
    }];
    let mut size = 2;
    for s in 3..=n {
        let increment = increment_at(s)?;
        let accepted = admits(&increment);
        steps.push(FormationStep {
            agent: n + 2 - s,
            increment,
            accepted,
        });
        if !accepted {
            break;
        }
        size = s;
    }

    let final_coalition = nested_coalition(n, size);
    let final_worth = game.worth(&final_coalition)?;
    Ok(FormationTrace {
        criterion,
        threshold,
        steps,
        final_coalition,
        final_worth,
    })
}
