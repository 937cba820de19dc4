//! The two binomial-ratio sums behind the closed-form coefficients, as
//! executable checks.
//!
//! For integers `j, t >= 1`:
//!
//! ```text
//! sum_{s=1..t} C(t,s) / C(j+t,s)     = t / (j+1)
//! sum_{s=1..t} s C(t,s) / C(j+t,s)   = t (j+t+1) / ((j+1)(j+2))
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::{Int, Rational};

/// Exact binomial coefficient, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

/// Both sides of both identities at one parameter point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub j: u64,
    pub t: u64,
    pub plain_sum: Rational,
    pub plain_closed: Rational,
    pub weighted_sum: Rational,
    pub weighted_closed: Rational,
}

impl IdentityCheck {
    /// True when both sums equal their closed forms exactly.
    pub fn holds(&self) -> bool {
        self.plain_sum == self.plain_closed && self.weighted_sum == self.weighted_closed
    }
}

/// Evaluates both identities at `(j, t)`, both required to be at least 1.
pub fn identity_sums(j: u64, t: u64) -> Result<IdentityCheck> {
    if j < 1 || t < 1 {
        return Err(Error::InvalidSize(format!(
            "identity parameters must be at least 1, got j = {j}, t = {t}"
        )));
    }
    let mut plain_sum = Rational::zero();
    let mut weighted_sum = Rational::zero();
    for s in 1..=t {
        let term = Rational::new(binomial(t, s), binomial(j + t, s));
        plain_sum += term.clone();
        weighted_sum += Rational::from_integer(Int::from(s)) * term;
    }
    let plain_closed = Rational::new(Int::from(t), Int::from(j + 1));
    let weighted_closed = Rational::new(
        Int::from(t) * Int::from(j + t + 1),
        Int::from(j + 1) * Int::from(j + 2),
    );
    Ok(IdentityCheck {
        j,
        t,
        plain_sum,
        plain_closed,
        weighted_sum,
        weighted_closed,
    })
}
