//! End-to-end acceptance checks, one test per advertised guarantee.
//!
//! Each test prints a single `[acceptance] C<k> <tag>: PASS/FAIL` line; run
//! with `--nocapture --test-threads=1` to see the lines in order. A shared
//! lock keeps the checks from overlapping so the wall-clock budgets in C3,
//! C5, C7, C9, and C11 are measured on an otherwise idle process.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kgain::attitude::{classify, classify_by_signs, ladder, n_of_k, LadderEntry, LadderKind};
use kgain::coalitions::{best_of_size, check_bounds, optimal_sizes};
use kgain::gain_game::{Coalition, GainGame};
use kgain::identities::identity_sums;
use kgain::knaster::{allocate, single_misreport_deltas};
use kgain::shapley::{
    psi_matrix, shapley_adjacent_gap, shapley_bruteforce, shapley_closed_form, shapley_fast,
};
use kgain::valuations::ValuationProfile;
use kgain::{ExactGame, ExactProfile, Rational, Scalar};

static SERIAL: Mutex<()> = Mutex::new(());

fn criterion(tag: &str, body: impl FnOnce() -> String) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let started = Instant::now();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(note) => {
            println!(
                "[acceptance] {tag}: PASS — {note} ({:.2?})",
                started.elapsed()
            );
        }
        Err(cause) => {
            println!("[acceptance] {tag}: FAIL ({:.2?})", started.elapsed());
            std::panic::resume_unwind(cause);
        }
    }
}

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

fn exact_profile(values: &[i64]) -> ExactProfile {
    let values: Vec<Rational> = values.iter().map(|&x| Rational::from_int(x)).collect();
    ValuationProfile::canonicalize(&values).expect("test profile is valid")
}

fn exact_game(values: &[i64]) -> ExactGame {
    GainGame::new(exact_profile(values))
}

fn random_values(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(0..=100)).collect()
}

/// Members of the 1-based coalition encoded by `mask` (bit b = position b+1).
fn coalition_of_mask(mask: u64) -> Coalition {
    let members = (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1);
    Coalition::new(members).expect("mask positions are 1-based")
}

#[test]
fn c01_psi_matrix_five_agents() {
    criterion("C1 psi-matrix", || {
        let psi = psi_matrix::<Rational>(5).unwrap();
        // Column j holds one value on rows 1..=j and another on rows j+1..=5.
        let expected = [
            (rat(2, 25), rat(-1, 50)),
            (rat(0, 1), rat(0, 1)),
            (rat(-2, 125), rat(3, 125)),
            (rat(-3, 250), rat(6, 125)),
        ];
        for (j, (top, bottom)) in (1..=4).zip(expected.iter()) {
            for i in 1..=5 {
                let want = if i <= j { top } else { bottom };
                assert_eq!(psi.entry(i, j), want, "entry ({i}, {j})");
            }
        }
        let gaps = [rat(1, 10), rat(0, 1), rat(-1, 25), rat(-3, 50)];
        assert_eq!(psi.gaps(), &gaps);
        "all 20 entries and the 4 gap coefficients match the worked 5-agent table exactly".into()
    });
}

#[test]
fn c02_shapley_worked_examples() {
    criterion("C2 shapley-examples", || {
        let phi = shapley_closed_form(&exact_game(&[10, 6, 3, 2, 1]));
        let want = [
            rat(292, 1000),
            rat(-108, 1000),
            rat(-108, 1000),
            rat(-68, 1000),
            rat(-8, 1000),
        ];
        assert_eq!(phi.canonical_values(), &want);
        assert_eq!(phi.value(1), &rat(73, 250));

        let phi = shapley_closed_form(&exact_game(&[10, 9, 8, 4, 1]));
        let want = [
            rat(-20, 1000),
            rat(-120, 1000),
            rat(-120, 1000),
            rat(40, 1000),
            rat(220, 1000),
        ];
        assert_eq!(phi.canonical_values(), &want);
        assert_eq!(phi.value(5), &rat(11, 50));
        "both worked profiles give the exact rationals behind the 3-decimal renderings".into()
    });
}

#[test]
fn c03_oracle_equivalence() {
    criterion("C3 oracle-equivalence", || {
        let budget = Duration::from_secs(120);
        let started = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        let mut profiles = 0usize;
        for n in 2..=8 {
            for _ in 0..100 {
                let game = exact_game(&random_values(&mut rng, n));
                let closed = shapley_closed_form(&game);
                let fast = shapley_fast(&game);
                let brute = shapley_bruteforce(&game).unwrap();
                assert_eq!(closed, fast);
                assert_eq!(closed, brute);
                assert_eq!(closed.by_original_position(), brute.by_original_position());
                if n <= 7 {
                    let phi = closed.canonical_values();
                    for j in 1..n {
                        let gap = shapley_adjacent_gap(&game, j).unwrap();
                        assert_eq!(gap, &phi[j - 1] - &phi[j], "gap at {j}, n = {n}");
                    }
                }
                profiles += 1;
            }
        }
        let elapsed = started.elapsed();
        assert!(elapsed < budget, "took {elapsed:.2?}, budget {budget:.2?}");
        format!(
            "closed form = fast = subset enumeration on {profiles} random profiles \
             (n = 2..=8), adjacent gaps match for n <= 7, in {elapsed:.2?}"
        )
    });
}

#[test]
fn c04_attitude_ladder_table() {
    criterion("C4 attitude-ladder", || {
        let two = |n: usize, a: usize| LadderEntry {
            n,
            kind: LadderKind::TwoWeak,
            positions: vec![a, a + 1],
        };
        let one = |n: usize, a: usize| LadderEntry {
            n,
            kind: LadderKind::OneStrong,
            positions: vec![a],
        };
        let expected = vec![
            two(2, 1),
            one(3, 2),
            one(4, 2),
            two(5, 2),
            one(6, 3),
            one(7, 3),
            one(8, 3),
            two(9, 3),
            one(10, 4),
            one(11, 4),
            one(12, 4),
            one(13, 4),
            two(14, 4),
            one(15, 5),
        ];
        assert_eq!(ladder(15).unwrap(), expected);
        "averse positions for n = 2..=15 match the published grid cell for cell".into()
    });
}

#[test]
fn c05_classification_cross_derivation() {
    criterion("C5 classification", || {
        let budget = Duration::from_secs(10);
        let started = Instant::now();
        for n in 2..=200 {
            assert_eq!(
                classify(n).unwrap(),
                classify_by_signs(n).unwrap(),
                "casework vs sign scan at n = {n}"
            );
            let psi = psi_matrix::<Rational>(n).unwrap();
            for j in 1..n {
                let column_sum: Rational = (1..=n).map(|i| psi.entry(i, j).clone()).sum();
                assert!(column_sum.is_zero(), "column {j} sum at n = {n}");
                let a = psi.entry(1, j);
                let b = psi.entry(n, j);
                assert_eq!(&(a - b), psi.gap(j), "a - b = c at n = {n}, j = {j}");
                let weighted = a * Rational::from_int(j as i64)
                    + b * Rational::from_int((n - j) as i64);
                assert!(weighted.is_zero(), "j*a + (n-j)*b at n = {n}, j = {j}");
            }
        }
        let elapsed = started.elapsed();
        assert!(elapsed < budget, "took {elapsed:.2?}, budget {budget:.2?}");
        format!(
            "casework classification = sign scan for n = 2..=200; every column sums \
             to zero and satisfies a - b = c and j*a + (n-j)*b = 0, in {elapsed:.2?}"
        )
    });
}

#[test]
fn c06_binomial_identities() {
    criterion("C6 identities", || {
        for j in 1..=30 {
            for t in 1..=30 {
                let check = identity_sums(j, t).unwrap();
                assert!(check.holds(), "identities at j = {j}, t = {t}");
            }
        }
        "both closed forms hold exactly on the full 30 x 30 parameter grid".into()
    });
}

#[test]
fn c07_exhaustive_optimality() {
    criterion("C7 optimal-coalitions", || {
        let budget = Duration::from_secs(120);
        let started = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(107);
        let mut profiles = 0usize;
        for n in 3..=10 {
            for _ in 0..50 {
                let game = exact_game(&random_values(&mut rng, n));
                let mut best_by_size = vec![Rational::from_int(-1); n + 1];
                let mut global_best = Rational::zero();
                let mut global_best_pc = Rational::zero();
                for mask in 1u64..1 << n {
                    let coalition = coalition_of_mask(mask);
                    let worth = game.worth(&coalition).unwrap();
                    let size = coalition.len();
                    let per_capita = &worth / Rational::from_int(size as i64);
                    if worth > best_by_size[size] {
                        best_by_size[size] = worth.clone();
                    }
                    if worth > global_best {
                        global_best = worth;
                    }
                    if per_capita > global_best_pc {
                        global_best_pc = per_capita;
                    }
                }
                for (s, best) in best_by_size.iter().enumerate().skip(1) {
                    let row = best_of_size(&game, s).unwrap();
                    assert_eq!(&row.worth, best, "size {s}, n = {n}");
                }
                let (s_star, s_double_star) = optimal_sizes(&game).unwrap();
                let at_star = best_of_size(&game, s_star).unwrap();
                assert_eq!(at_star.worth, global_best, "s* misses the global max");
                let at_double = best_of_size(&game, s_double_star).unwrap();
                assert_eq!(
                    at_double.per_capita, global_best_pc,
                    "s** misses the per-capita max"
                );
                if game.profile().value(1) != game.profile().value(n) {
                    let bounds = check_bounds(&game).unwrap();
                    assert!(bounds.order_ok, "s** <= s* failed, n = {n}");
                    assert!(bounds.s_star_ok, "s* range failed, n = {n}");
                    assert!(bounds.s_double_star_ok, "s** range failed, n = {n}");
                    assert_ne!(bounds.sharper_even, Some(false), "even-n bound, n = {n}");
                    assert_ne!(bounds.sharper_tie, Some(false), "tie bound, n = {n}");
                }
                profiles += 1;
            }
        }
        let elapsed = started.elapsed();
        assert!(elapsed < budget, "took {elapsed:.2?}, budget {budget:.2?}");
        format!(
            "nested coalitions beat all {profiles}x exhaustive subsets per size, s* and \
             s** hit the global maxima, and all size bounds hold, in {elapsed:.2?}"
        )
    });
}

#[test]
fn c08_tightness_families() {
    criterion("C8 tight-bounds", || {
        for n in 3..=20 {
            let mut values = vec![1i64; n];
            values[n - 1] = 0;
            let game = exact_game(&values);
            assert_eq!(optimal_sizes(&game).unwrap(), (2, 2), "ones profile, n = {n}");
        }
        for n in (4..=20).step_by(2) {
            let mut values = vec![-1i64; n];
            values[0] = 0;
            let game = exact_game(&values);
            let (s_star, s_double_star) = optimal_sizes(&game).unwrap();
            assert_eq!(s_star, n / 2 + 1, "plateau profile, n = {n}");
            let floor = n.isqrt();
            let ceil = if floor * floor == n { floor } else { floor + 1 };
            assert!(
                s_double_star == floor || s_double_star == ceil,
                "s** = {s_double_star} outside sqrt bracket at n = {n}"
            );
        }
        "(1,..,1,0) pins s* = s** = 2; (0,-1,..,-1) pins s* = n/2 + 1 with s** at sqrt(n)"
            .into()
    });
}

#[test]
fn c09_allocation_invariants() {
    criterion("C9 allocation", || {
        let budget = Duration::from_secs(10);
        let started = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(109);
        let mut misreports = 0usize;
        for rep in 0..1000 {
            let n = rng.gen_range(2..=12);
            let mut values = random_values(&mut rng, n);
            if rep % 10 == 0 {
                let first = values[0];
                values.iter_mut().for_each(|v| *v = first);
            }
            let profile = exact_profile(&values);
            let outcome = allocate(&profile);
            let compensation_total: Rational = outcome.compensations.iter().sum();
            assert!(compensation_total.is_zero(), "side payments must balance");
            let share_total: Rational = outcome.adjusted_shares.iter().sum();
            assert_eq!(&share_total, profile.value(1), "shares must sum to the top bid");
            for i in 1..=n {
                assert!(
                    outcome.adjusted_shares[i - 1] >= outcome.initial_shares[i - 1],
                    "position {i} fell below its equal share"
                );
            }
            assert!(!outcome.surplus.is_negative());
            assert_eq!(outcome.surplus.is_zero(), profile.is_constant());

            let k = (2..=n).find(|&k| profile.value(k) < profile.value(1));
            let Some(k) = k else { continue };
            let eps = (profile.value(1) - profile.value(k)) * rat(1, 2);
            let deltas = single_misreport_deltas(&profile, k, &eps).unwrap();
            let delta_total: Rational = deltas.iter().sum();
            assert!(delta_total.is_zero(), "misreport deltas must balance");

            let mut altered: Vec<Rational> =
                values.iter().map(|&x| Rational::from_int(x)).collect();
            altered[profile.original_label(k) - 1] += &eps;
            let new_profile = ValuationProfile::canonicalize(&altered).unwrap();
            let new_outcome = allocate(&new_profile);
            for i in 1..=n {
                let label = profile.original_label(i);
                let new_pos = new_profile.canonical_position(label);
                let observed =
                    &new_outcome.adjusted_shares[new_pos - 1] - &outcome.adjusted_shares[i - 1];
                assert_eq!(deltas[i - 1], observed, "delta for original agent {label}");
            }
            misreports += 1;
        }
        let elapsed = started.elapsed();
        assert!(elapsed < budget, "took {elapsed:.2?}, budget {budget:.2?}");
        format!(
            "1000 random allocations balance, cover the top bid, and dominate equal \
             shares; {misreports} misreports match the recompute oracle, in {elapsed:.2?}"
        )
    });
}

#[test]
fn c10_null_shapley_profiles() {
    criterion("C10 null-profiles", || {
        for k in 2..=5 {
            let n = n_of_k(k);
            // The zero column of the coefficient matrix sits at j = k - 1, so
            // the null profile splits after the first k - 1 values.
            let mut values = vec![3i64; n];
            values[..k - 1].fill(7);
            let game = exact_game(&values);
            let phi = shapley_closed_form(&game);
            assert!(
                phi.canonical_values().iter().all(Rational::is_zero),
                "phi must vanish for n = {n}, split after {}",
                k - 1
            );
            let brute = shapley_bruteforce(&game).unwrap();
            assert_eq!(phi, brute);
            if k >= 3 {
                // Splitting one position later leaves the profile outside the
                // null space: the matching column is nonzero there.
                let mut shifted = vec![3i64; n];
                shifted[..k].fill(7);
                let phi = shapley_closed_form(&exact_game(&shifted));
                assert!(
                    phi.canonical_values().iter().any(|v| !v.is_zero()),
                    "split after {k} must not vanish at n = {n}"
                );
            }
        }
        "two-level profiles split after k - 1 values give phi = 0 exactly at \
         n = 2, 5, 9, 14 (enumeration agrees); the one-later split does not"
            .into()
    });
}

#[test]
fn c11_performance() {
    criterion("C11 performance", || {
        let budget = Duration::from_secs(5);
        let mut rng = ChaCha8Rng::seed_from_u64(111);
        let values: Vec<i64> = (0..2000).map(|_| rng.gen_range(0..=1_000_000)).collect();

        let floats: Vec<f64> = values.iter().map(|&x| x as f64).collect();
        let float_game = GainGame::new(ValuationProfile::canonicalize(&floats).unwrap());
        let started = Instant::now();
        let phi_closed = shapley_closed_form(&float_game);
        let closed_elapsed = started.elapsed();
        assert!(
            closed_elapsed < budget,
            "closed form at n = 2000 took {closed_elapsed:.2?}"
        );

        let big: Vec<f64> = (0..100_000)
            .map(|_| rng.gen_range(0..=1_000_000) as f64)
            .collect();
        let big_game = GainGame::new(ValuationProfile::canonicalize(&big).unwrap());
        let started = Instant::now();
        let phi_fast = shapley_fast(&big_game);
        let fast_elapsed = started.elapsed();
        assert!(
            fast_elapsed < budget,
            "fast path at n = 100000 took {fast_elapsed:.2?}"
        );
        let sum: f64 = phi_fast.canonical_values().iter().sum();
        assert!(sum.abs() < 1e-3, "fast-path values must still balance");

        // Untimed accuracy anchor: the float run at n = 2000 tracks the exact
        // rational computation to within rounding noise.
        let exact_game = GainGame::new(exact_profile(&values));
        let phi_exact = shapley_fast(&exact_game);
        for (approx, exact) in phi_closed
            .canonical_values()
            .iter()
            .zip(phi_exact.canonical_values())
        {
            let exact = exact.to_f64().expect("finite");
            let scale = exact.abs().max(1.0);
            assert!(
                (approx - exact).abs() <= 1e-9 * scale,
                "float drifted: {approx} vs {exact}"
            );
        }
        format!(
            "single-threaded f64 runs: closed form n = 2000 in {closed_elapsed:.2?}, \
             fast path n = 100000 in {fast_elapsed:.2?} (budget 5s each); float \
             values match the exact rationals to 1e-9 relative"
        )
    });
}
