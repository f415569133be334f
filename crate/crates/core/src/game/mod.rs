//! Reachability games: the agent picks outputs, then the environment picks
//! inputs, and the agent wins by reaching a target state.

mod explicit;
mod symbolic;

pub use explicit::{prec, solve_explicit, solve_explicit_with, Actions, ExplicitGameResult};
pub use symbolic::{
    controllable_preimage, solve_symbolic, solve_symbolic_with, synthesize_outputs, FixpointMode,
    GameResult,
};

/// Output valuations in tie-breaking order: lexicographic on the bit vector
/// with the first output atom most significant and false before true.
pub fn output_order(num_outputs: usize) -> Vec<u32> {
    (0..1u32 << num_outputs)
        .map(|k| {
            if num_outputs == 0 {
                0
            } else {
                k.reverse_bits() >> (32 - num_outputs)
            }
        })
        .collect()
}

/// Work done by one fixpoint computation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FixpointStats {
    /// Iterations that enlarged the winning region.
    pub steps: usize,
    /// Controllable-preimage computations.
    pub preimages: usize,
}

#[cfg(test)]
mod tests;
