//! Shapley values of the collusion gain game.
//!
//! The game is determined by the adjacent gaps `d_j = v_j - v_{j+1}` of the
//! canonical profile, and its Shapley value is linear in them: `phi = Psi d`
//! for an `n x (n-1)` coefficient matrix `Psi` that depends on `n` alone.
//! Column `j` of `Psi` carries exactly two values,
//!
//! ```text
//! a(n,j) = (n - j) * c(n,j) / n    (rows 1..=j)
//! b(n,j) =     -j  * c(n,j) / n    (rows j+1..=n)
//! c(n,j) = (2n - 3j - j^2) / (2n * (j+1) * (j+2))
//! ```
//!
//! so each column sums to zero and `a - b` recovers the single-column gap
//! `c(n,j)`. [`shapley_closed_form`] evaluates the product row by row in
//! `O(n^2)`; [`shapley_fast`] shares prefix and suffix sums across rows and
//! needs `O(n)`. Both are exact over [`crate::Rational`].
//!
//! [`shapley_bruteforce`] is the independent check: the textbook expectation
//! of marginal contributions over all `2^n` coalitions, exact rationals only,
//! refused above a caller-adjustable cap.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gain_game::{worth_of_mask, GainGame};
use crate::scalar::{balanced_sum, Scalar};
use crate::Rational;

/// Enumeration above this many agents must be requested explicitly.
pub const DEFAULT_ORACLE_CAP: usize = 20;

/// Coefficient column `j` for `n` agents: `(a, b, c)` as documented on the
/// module. Stepwise division keeps every machine-integer factor small.
fn psi_coefficients<T: Scalar>(n: usize, j: usize) -> (T, T, T) {
    debug_assert!(n >= 2 && (1..n).contains(&j));
    let nn = n as i64;
    let jj = j as i64;
    let c = T::ratio(2 * nn - 3 * jj - jj * jj, 2 * nn)
        / T::from_int(jj + 1)
        / T::from_int(jj + 2);
    let a = c.clone() * T::ratio(nn - jj, nn);
    let b = T::zero() - c.clone() * T::ratio(jj, nn);
    (a, b, c)
}

/// The full coefficient matrix mapping adjacent gaps to Shapley values.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiMatrix<T> {
    n: usize,
    entries: Vec<T>,
    gaps: Vec<T>,
}

impl<T: Scalar> PsiMatrix<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at row `i` (agent, `1..=n`) and column `j` (gap, `1..=n-1`).
    ///
    /// # Panics
    /// If `i` or `j` is out of range.
    pub fn entry(&self, i: usize, j: usize) -> &T {
        assert!(i >= 1 && i <= self.n, "row {i} out of range");
        assert!(j >= 1 && j < self.n, "column {j} out of range");
        &self.entries[(i - 1) * (self.n - 1) + (j - 1)]
    }

    /// Row `i` as a slice over columns `1..=n-1`.
    pub fn row(&self, i: usize) -> &[T] {
        assert!(i >= 1 && i <= self.n, "row {i} out of range");
        &self.entries[(i - 1) * (self.n - 1)..i * (self.n - 1)]
    }

    /// Within-column jumps `c(n,j) = entry(j,j) - entry(j+1,j)`.
    pub fn gaps(&self) -> &[T] {
        &self.gaps
    }

    /// `c(n,j)`, 1-based.
    pub fn gap(&self, j: usize) -> &T {
        assert!(j >= 1 && j < self.n, "column {j} out of range");
        &self.gaps[j - 1]
    }
}

/// Builds the coefficient matrix for `n >= 2` agents.
pub fn psi_matrix<T: Scalar>(n: usize) -> Result<PsiMatrix<T>> {
    if n < 2 {
        return Err(Error::DegenerateProfile { n, required: 2 });
    }
    let mut columns = Vec::with_capacity(n - 1);
    let mut gaps = Vec::with_capacity(n - 1);
    for j in 1..n {
        let (a, b, c) = psi_coefficients::<T>(n, j);
        columns.push((a, b));
        gaps.push(c);
    }
    let mut entries = Vec::with_capacity(n * (n - 1));
    for i in 1..=n {
        for (jm1, (a, b)) in columns.iter().enumerate() {
            entries.push(if i <= jm1 + 1 { a.clone() } else { b.clone() });
        }
    }
    Ok(PsiMatrix { n, entries, gaps })
}

/// Shapley values in canonical order, with the permutation back to the
/// caller's input positions.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapleyResult<T> {
    values: Vec<T>,
    original_labels: Vec<usize>,
}

impl<T: Scalar> ShapleyResult<T> {
    fn new<U: Scalar>(game: &GainGame<U>, values: Vec<T>) -> Self {
        let labels = (1..=game.n())
            .map(|i| game.profile().original_label(i))
            .collect();
        Self {
            values,
            original_labels: labels,
        }
    }

    /// Values by canonical position (entry 0 is agent 1).
    pub fn canonical_values(&self) -> &[T] {
        &self.values
    }

    /// Value of the agent at canonical position `i` (1-based).
    ///
    /// # Panics
    /// If `i` is out of range.
    pub fn value(&self, i: usize) -> &T {
        assert!(i >= 1 && i <= self.values.len(), "position {i} out of range");
        &self.values[i - 1]
    }

    /// Values rearranged to the caller's input order.
    pub fn by_original_position(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.values.len()];
        for (canonical0, &label) in self.original_labels.iter().enumerate() {
            out[label - 1] = self.values[canonical0].clone();
        }
        out
    }
}

/// Per-gap weighted terms `(a_j * d_j, b_j * d_j)` shared by both closed-form
/// evaluators. Empty for a single agent.
fn weighted_gap_terms<T: Scalar>(game: &GainGame<T>) -> (Vec<T>, Vec<T>) {
    let n = game.n();
    if n < 2 {
        return (Vec::new(), Vec::new());
    }
    let diffs = game
        .profile()
        .adjacent_differences()
        .expect("n >= 2 checked above");
    let mut ta = Vec::with_capacity(n - 1);
    let mut tb = Vec::with_capacity(n - 1);
    for (jm1, d) in diffs.into_iter().enumerate() {
        let (a, b, _) = psi_coefficients::<T>(n, jm1 + 1);
        ta.push(a * d.clone());
        tb.push(b * d);
    }
    (ta, tb)
}

/// Evaluates `phi = Psi d` row by row: `O(n^2)` scalar operations, no matrix
/// materialized. A single agent gets the zero vector.
pub fn shapley_closed_form<T: Scalar>(game: &GainGame<T>) -> ShapleyResult<T> {
    let n = game.n();
    let (ta, tb) = weighted_gap_terms(game);
    let values = (1..=n)
        .map(|i| balanced_sum(&ta[i - 1..]) + balanced_sum(&tb[..i - 1]))
        .collect();
    ShapleyResult::new(game, values)
}

/// Same values as [`shapley_closed_form`] in `O(n)` scalar operations: row
/// `i` needs the suffix sum of the `a`-terms and the prefix sum of the
/// `b`-terms, both shared across rows.
pub fn shapley_fast<T: Scalar>(game: &GainGame<T>) -> ShapleyResult<T> {
    let n = game.n();
    let (ta, tb) = weighted_gap_terms(game);

    let mut suffix = vec![T::zero(); n];
    for i in (1..n).rev() {
        suffix[i - 1] = ta[i - 1].clone() + suffix[i].clone();
    }
    let mut prefix = T::zero();
    let values = (1..=n)
        .map(|i| {
            if i >= 2 {
                prefix += tb[i - 2].clone();
            }
            suffix[i - 1].clone() + prefix.clone()
        })
        .collect();
    ShapleyResult::new(game, values)
}

fn factorials(n: usize) -> Vec<BigInt> {
    let mut f = Vec::with_capacity(n + 1);
    f.push(BigInt::one());
    for k in 1..=n {
        let next = f[k - 1].clone() * BigInt::from(k);
        f.push(next);
    }
    f
}

fn check_oracle_size(n: usize, cap: usize) -> Result<()> {
    let cap = cap.min(u64::BITS as usize - 1);
    if n > cap {
        return Err(Error::OracleTooLarge { n, cap });
    }
    Ok(())
}

/// The definitional Shapley value: for every coalition `S` and member `i`,
/// weight `|S-i|! (n-|S|)! / n!` on the marginal contribution of `i`.
/// Organized as one pass over all `2^n` coalitions, each worth evaluated
/// once. Exact rationals only; refuses `n` above `cap`.
pub fn shapley_bruteforce_capped(
    game: &GainGame<Rational>,
    cap: usize,
) -> Result<ShapleyResult<Rational>> {
    let n = game.n();
    check_oracle_size(n, cap)?;

    let fact = factorials(n);
    // weight_in[s]: coalition of size s, applied to each member's bucket.
    // weight_out[s]: same coalition, subtracted from each non-member.
    let weight_in: Vec<Rational> = (0..=n)
        .map(|s| {
            if s == 0 {
                Rational::zero()
            } else {
                Rational::new(fact[s - 1].clone() * fact[n - s].clone(), fact[n].clone())
            }
        })
        .collect();
    let weight_out: Vec<Rational> = (0..=n)
        .map(|s| {
            if s == n {
                Rational::zero()
            } else {
                Rational::new(fact[s].clone() * fact[n - s - 1].clone(), fact[n].clone())
            }
        })
        .collect();

    let values = game.profile().values();
    let mut acc = vec![Rational::zero(); n];
    for mask in 0u64..(1u64 << n) {
        let worth = worth_of_mask(values, mask);
        if worth.is_zero() {
            continue;
        }
        let s = mask.count_ones() as usize;
        let gain = weight_in[s].clone() * worth.clone();
        let loss = weight_out[s].clone() * worth;
        for (i, slot) in acc.iter_mut().enumerate() {
            if mask >> i & 1 == 1 {
                *slot += gain.clone();
            } else {
                *slot -= loss.clone();
            }
        }
    }
    Ok(ShapleyResult::new(game, acc))
}

/// [`shapley_bruteforce_capped`] at the default cap of
/// [`DEFAULT_ORACLE_CAP`] agents.
pub fn shapley_bruteforce(game: &GainGame<Rational>) -> Result<ShapleyResult<Rational>> {
    shapley_bruteforce_capped(game, DEFAULT_ORACLE_CAP)
}

/// The gap `phi_j - phi_{j+1}` by direct enumeration: coalitions `S` avoiding
/// both `j` and `j+1`, weight `|S|! (n-|S|-2)! / (n-1)!` on the worth
/// difference `v(S+j) - v(S+j+1)`. Exact rationals only.
pub fn shapley_adjacent_gap_capped(
    game: &GainGame<Rational>,
    j: usize,
    cap: usize,
) -> Result<Rational> {
    let n = game.n();
    if n < 2 {
        return Err(Error::DegenerateProfile { n, required: 2 });
    }
    if j < 1 || j + 1 > n {
        return Err(Error::InvalidSize(format!(
            "adjacent pair ({j}, {}) outside 1..={n}",
            j + 1
        )));
    }
    check_oracle_size(n, cap)?;

    let fact = factorials(n);
    let weights: Vec<Rational> = (0..=n - 2)
        .map(|s| Rational::new(fact[s].clone() * fact[n - s - 2].clone(), fact[n - 1].clone()))
        .collect();

    let values = game.profile().values();
    let others: Vec<usize> = (0..n).filter(|&b| b != j - 1 && b != j).collect();
    let mut total = Rational::zero();
    for small in 0u64..(1u64 << others.len()) {
        let mut mask = 0u64;
        for (bit, &agent) in others.iter().enumerate() {
            if small >> bit & 1 == 1 {
                mask |= 1 << agent;
            }
        }
        let s = mask.count_ones() as usize;
        let diff = worth_of_mask(values, mask | 1 << (j - 1))
            - worth_of_mask(values, mask | 1 << j);
        if !diff.is_zero() {
            total += weights[s].clone() * diff;
        }
    }
    Ok(total)
}

/// [`shapley_adjacent_gap_capped`] at the default cap.
pub fn shapley_adjacent_gap(game: &GainGame<Rational>, j: usize) -> Result<Rational> {
    shapley_adjacent_gap_capped(game, j, DEFAULT_ORACLE_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuations::ValuationProfile;

    fn game(values: &[i64]) -> GainGame<Rational> {
        let v: Vec<Rational> = values.iter().map(|&x| Rational::from_int(x)).collect();
        GainGame::new(ValuationProfile::canonicalize(&v).unwrap())
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn rats(pairs: &[(i64, i64)]) -> Vec<Rational> {
        pairs.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn five_agent_matrix_is_reproduced_exactly() {
        let m = psi_matrix::<Rational>(5).unwrap();
        let expected = [
            [(2, 25), (0, 1), (-2, 125), (-3, 250)],
            [(-1, 50), (0, 1), (-2, 125), (-3, 250)],
            [(-1, 50), (0, 1), (-2, 125), (-3, 250)],
            [(-1, 50), (0, 1), (3, 125), (-3, 250)],
            [(-1, 50), (0, 1), (3, 125), (6, 125)],
        ];
        for (i, row) in expected.iter().enumerate() {
            assert_eq!(m.row(i + 1), &rats(row)[..], "row {}", i + 1);
        }
        assert_eq!(
            m.gaps(),
            &rats(&[(1, 10), (0, 1), (-1, 25), (-3, 50)])[..]
        );
    }

    #[test]
    fn two_agent_matrix_is_the_zero_column() {
        let m = psi_matrix::<Rational>(2).unwrap();
        assert_eq!(m.entry(1, 1), &Rational::zero());
        assert_eq!(m.entry(2, 1), &Rational::zero());
        assert_eq!(m.gap(1), &Rational::zero());
        assert!(matches!(
            psi_matrix::<Rational>(1),
            Err(Error::DegenerateProfile { n: 1, required: 2 })
        ));
    }

    #[test]
    fn column_structure_holds_for_a_range_of_n() {
        for n in 2..=40 {
            let m = psi_matrix::<Rational>(n).unwrap();
            for j in 1..n {
                let a = m.entry(1, j).clone();
                let b = m.entry(n, j).clone();
                for i in 1..=n {
                    let expect = if i <= j { &a } else { &b };
                    assert_eq!(m.entry(i, j), expect, "n={n} i={i} j={j}");
                }
                let col_sum = Rational::from_int(j as i64) * a.clone()
                    + Rational::from_int((n - j) as i64) * b.clone();
                assert!(col_sum.is_zero(), "n={n} j={j}");
                assert_eq!(a - b, m.gap(j).clone(), "n={n} j={j}");
            }
        }
    }

    #[test]
    fn worked_shapley_values() {
        let phi = shapley_closed_form(&game(&[10, 6, 3, 2, 1]));
        assert_eq!(
            phi.canonical_values(),
            &rats(&[(73, 250), (-27, 250), (-27, 250), (-17, 250), (-1, 125)])[..]
        );
        let phi = shapley_closed_form(&game(&[10, 9, 8, 4, 1]));
        assert_eq!(
            phi.canonical_values(),
            &rats(&[(-1, 50), (-3, 25), (-3, 25), (1, 25), (11, 50)])[..]
        );
    }

    #[test]
    fn degenerate_profiles_get_zero_values() {
        assert_eq!(
            shapley_closed_form(&game(&[7])).canonical_values(),
            &[Rational::zero()]
        );
        assert_eq!(
            shapley_fast(&game(&[4, 4, 4, 4])).canonical_values(),
            &vec![Rational::zero(); 4][..]
        );
    }

    #[test]
    fn bruteforce_matches_a_hand_computed_case() {
        let phi = shapley_bruteforce(&game(&[3, 2, 1])).unwrap();
        assert_eq!(
            phi.canonical_values(),
            &rats(&[(1, 54), (-1, 27), (1, 54)])[..]
        );
    }

    #[test]
    fn closed_fast_and_bruteforce_agree() {
        for values in [
            &[10, 6, 3, 2, 1][..],
            &[3, 2, 1][..],
            &[9, 9, 9][..],
            &[100, 1][..],
            &[8, 7, 7, 2, 0, 0][..],
            &[5, 4, 4, 4, 1, 0, -2][..],
        ] {
            let g = game(values);
            let closed = shapley_closed_form(&g);
            let fast = shapley_fast(&g);
            let brute = shapley_bruteforce(&g).unwrap();
            assert_eq!(closed, fast, "v = {values:?}");
            assert_eq!(closed, brute, "v = {values:?}");
            let total: Rational = closed.canonical_values().iter().cloned().sum();
            assert!(total.is_zero(), "v = {values:?}");
        }
    }

    #[test]
    fn adjacent_gap_enumeration_matches_value_differences() {
        let g = game(&[10, 6, 3, 2, 1]);
        let phi = shapley_closed_form(&g);
        for j in 1..5 {
            assert_eq!(
                shapley_adjacent_gap(&g, j).unwrap(),
                phi.value(j).clone() - phi.value(j + 1).clone(),
                "j = {j}"
            );
        }
        assert!(matches!(
            shapley_adjacent_gap(&g, 5),
            Err(Error::InvalidSize(_))
        ));
    }

    #[test]
    fn oracle_cap_is_enforced() {
        let values: Vec<i64> = (1..=21).collect();
        let g = game(&values);
        assert!(matches!(
            shapley_bruteforce(&g),
            Err(Error::OracleTooLarge { n: 21, cap: 20 })
        ));
        let small = game(&[5, 3, 3, 1, 0, 0, -1, -4, -4, -9]);
        assert!(matches!(
            shapley_bruteforce_capped(&small, 5),
            Err(Error::OracleTooLarge { n: 10, cap: 5 })
        ));
        let raised = shapley_bruteforce_capped(&small, 10).unwrap();
        assert_eq!(raised, shapley_closed_form(&small));
    }

    #[test]
    fn results_can_be_reported_in_input_order() {
        let v: Vec<Rational> = [1, 10, 3].iter().map(|&x| Rational::from_int(x)).collect();
        let g = GainGame::new(ValuationProfile::canonicalize(&v).unwrap());
        let phi = shapley_closed_form(&g);
        let by_input = phi.by_original_position();
        assert_eq!(by_input[1], phi.value(1).clone());
        assert_eq!(by_input[0], phi.value(3).clone());
        assert_eq!(by_input[2], phi.value(2).clone());
    }

    #[test]
    fn float_instantiation_tracks_the_exact_values() {
        let vals = [10.0f64, 6.0, 3.0, 2.0, 1.0];
        let p = ValuationProfile::canonicalize(&vals).unwrap();
        let g = GainGame::new(p);
        let closed = shapley_closed_form(&g);
        let fast = shapley_fast(&g);
        let expected = [0.292, -0.108, -0.108, -0.068, -0.008];
        for (i, want) in expected.iter().enumerate() {
            assert!((closed.canonical_values()[i] - want).abs() < 1e-12);
            assert!((fast.canonical_values()[i] - want).abs() < 1e-12);
        }
    }
}
