//! Fair division of a single indivisible object by sealed bids, and the
//! side-payment game that collusion induces on top of it.
//!
//! The object goes to the highest bidder, who compensates the others out of
//! the surplus her bid creates. A group of agents can inflate their losing
//! bids to the level of the group's best bid and split the extra
//! compensation; the worth of each such group defines a transferable-utility
//! game. This crate computes:
//!
//! * the allocation itself ([`knaster`]),
//! * coalition worths and marginal contributions ([`gain_game`]),
//! * the Shapley value of the game, in closed form and by enumeration
//!   ([`shapley`]),
//! * which bidder positions gain or lose from collusion on average
//!   ([`attitude`]),
//! * the coalitions with the largest total and per-capita gain
//!   ([`coalitions`]),
//! * the combinatorial identities the closed form rests on ([`identities`]).
//!
//! All core routines are generic over the [`Scalar`] arithmetic type. Use
//! [`Rational`] (arbitrary-precision rationals) for exact results, or `f64`
//! when speed matters more than the last bit; the closed-form coefficients
//! are tiny explicit fractions either way.

pub mod attitude;
pub mod coalitions;
pub mod error;
pub mod gain_game;
pub mod identities;
pub mod knaster;
pub mod scalar;
pub mod shapley;
pub mod valuations;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact arbitrary-precision rational, the default scalar.
pub type Rational = num_rational::BigRational;

/// Arbitrary-precision signed integer backing [`Rational`].
pub type Int = num_bigint::BigInt;

/// Valuation profile over exact rationals.
pub type ExactProfile = valuations::ValuationProfile<Rational>;

/// Gain game over exact rationals.
pub type ExactGame = gain_game::GainGame<Rational>;
