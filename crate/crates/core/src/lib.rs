//! Optimal LTLf synthesis with weighted objectives.

pub mod cancel;
pub mod dd;
pub mod dfa;
pub mod io;
pub mod game;
mod error;
pub mod ltlf;
pub mod optimal;
pub mod oracle;
pub mod problem;
pub mod random;
pub mod strategy;
pub mod sym;
pub mod weight;

pub use error::{Error, Result};
pub use weight::Weight;

/// Exact rational weights.
pub type Rational = num_rational::Ratio<i64>;

/// A problem with exact rational weights.
pub type Spec = problem::ProblemSpec<Rational>;

/// A strategy with exact rational annotations.
pub type Strategy = strategy::StrategyTransducer<Rational>;
