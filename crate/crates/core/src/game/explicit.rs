use super::{output_order, FixpointStats};
use crate::cancel::Deadline;
use crate::dfa::Dfa;
use crate::Result;

/// Winning outputs recorded for a state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Actions {
    /// Losing state.
    None,
    /// Target state: every output is winning.
    Any,
    /// Outputs forcing the next state into a lower rank, in tie-breaking order.
    Some(Vec<u32>),
}

impl Actions {
    /// Preferred output under the tie-breaking order.
    pub fn first(&self) -> Option<u32> {
        match self {
            Actions::None => None,
            Actions::Any => Some(0),
            Actions::Some(ys) => ys.first().copied(),
        }
    }

    pub fn allows(&self, y: u32) -> bool {
        match self {
            Actions::None => false,
            Actions::Any => true,
            Actions::Some(ys) => ys.contains(&y),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExplicitGameResult {
    pub winning: Vec<bool>,
    /// Attractor rank; 0 on the target.
    pub rank: Vec<Option<u32>>,
    /// Positional move on winning non-target states.
    pub moves: Vec<Option<u32>>,
    pub actions: Vec<Actions>,
    pub stats: FixpointStats,
}

fn forces(d: &Dfa, q: u32, y: u32, set: &[bool]) -> bool {
    let a = d.alphabet();
    (0..a.num_input_letters() as u32).all(|x| set[d.next(q, a.join(x, y)) as usize])
}

/// States from which some output forces the next state into `set` against
/// every input.
pub fn prec(d: &Dfa, set: &[bool]) -> Vec<bool> {
    let ny = d.alphabet().num_output_letters() as u32;
    (0..d.num_states() as u32)
        .map(|q| (0..ny).any(|y| forces(d, q, y, set)))
        .collect()
}

pub fn solve_explicit(d: &Dfa, target: &[bool]) -> ExplicitGameResult {
    solve_explicit_with(d, target, false, &Deadline::none()).expect("no deadline")
}

/// Least fixed point of `target ∪ prec`, layer by layer. With `early_exit`
/// the iteration stops once the initial state wins.
pub fn solve_explicit_with(
    d: &Dfa,
    target: &[bool],
    early_exit: bool,
    deadline: &Deadline,
) -> Result<ExplicitGameResult> {
    let n = d.num_states();
    assert_eq!(target.len(), n);
    let order = output_order(d.alphabet().num_outputs());
    let mut winning = target.to_vec();
    let mut rank: Vec<Option<u32>> = target.iter().map(|&t| t.then_some(0)).collect();
    let mut actions: Vec<Actions> = target
        .iter()
        .map(|&t| if t { Actions::Any } else { Actions::None })
        .collect();
    let mut stats = FixpointStats::default();
    let mut r = 0;
    loop {
        if winning.iter().all(|&w| w) || (early_exit && winning[d.initial() as usize]) {
            break;
        }
        deadline.check()?;
        stats.preimages += 1;
        let layer: Vec<(usize, Vec<u32>)> = (0..n)
            .filter(|&q| !winning[q])
            .filter_map(|q| {
                let ys: Vec<u32> = order
                    .iter()
                    .copied()
                    .filter(|&y| forces(d, q as u32, y, &winning))
                    .collect();
                (!ys.is_empty()).then_some((q, ys))
            })
            .collect();
        if layer.is_empty() {
            break;
        }
        r += 1;
        stats.steps += 1;
        for (q, ys) in layer {
            winning[q] = true;
            rank[q] = Some(r);
            actions[q] = Actions::Some(ys);
        }
    }
    let moves = actions
        .iter()
        .map(|a| match a {
            Actions::Some(ys) => Some(ys[0]),
            _ => None,
        })
        .collect();
    Ok(ExplicitGameResult {
        winning,
        rank,
        moves,
        actions,
        stats,
    })
}
