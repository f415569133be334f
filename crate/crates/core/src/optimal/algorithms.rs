//! Engine-independent optimisation algorithms.

use super::arena::{Arena, Solved};
use super::Search;
use crate::cancel::Deadline;
use crate::game::{FixpointMode, FixpointStats};
use crate::sym::ValueLadder;
use crate::{Result, Weight};

/// One solved ladder level.
#[derive(Clone, Debug)]
pub struct LevelResult<W, S> {
    /// 1-based ladder index.
    pub k: usize,
    pub value: W,
    pub w: S,
    pub initial_wins: bool,
    pub stats: FixpointStats,
}

/// Result of a basic max-observation search.
#[derive(Clone, Debug)]
pub struct ObservationRun<W, S, R> {
    /// Levels solved, in the order they were probed.
    pub probes: Vec<LevelResult<W, S>>,
    /// The first winnable level with its solved game.
    pub best: Option<(usize, Solved<S, R>)>,
}

impl<W: Weight, S, R> ObservationRun<W, S, R> {
    pub fn level(&self) -> Option<usize> {
        self.best.as_ref().map(|(k, _)| *k)
    }
}

fn solve_level<A: Arena, W: Weight>(
    arena: &mut A,
    ladder: &ValueLadder<W>,
    k: usize,
    deadline: &Deadline,
) -> Result<(LevelResult<W, A::Set>, Solved<A::Set, A::Rel>)> {
    let v = ladder.value(k).expect("level in range").clone();
    let g = arena.at_least(ladder, &v)?;
    let solved = arena.solve(&g, FixpointMode::Full, deadline)?;
    let initial_wins = arena.initial_in(&solved.w);
    Ok((
        LevelResult {
            k,
            value: v,
            w: solved.w.clone(),
            initial_wins,
            stats: solved.stats,
        },
        solved,
    ))
}

/// Largest ladder value whose target is winnable from the initial state.
pub fn observe_on<A: Arena, W: Weight>(
    arena: &mut A,
    ladder: &ValueLadder<W>,
    search: Search,
    deadline: &Deadline,
) -> Result<ObservationRun<W, A::Set, A::Rel>> {
    let mut probes = Vec::new();
    let mut best = None;
    match search {
        Search::Linear => {
            for k in 1..=ladder.len() {
                let (level, solved) = solve_level(arena, ladder, k, deadline)?;
                let wins = level.initial_wins;
                probes.push(level);
                if wins {
                    best = Some((k, solved));
                    break;
                }
            }
        }
        Search::Binary => {
            // winnability is monotone along the descending ladder
            let (mut lo, mut hi) = (1, ladder.len());
            while lo <= hi {
                let mid = lo + (hi - lo) / 2;
                let (level, solved) = solve_level(arena, ladder, mid, deadline)?;
                let wins = level.initial_wins;
                probes.push(level);
                if wins {
                    best = Some((mid, solved));
                    hi = mid - 1;
                } else {
                    lo = mid + 1;
                }
            }
        }
    }
    Ok(ObservationRun { probes, best })
}

/// Regions of every computed level and the combined state–action relation.
#[derive(Clone, Debug)]
pub struct IncrementalRun<W, S, R> {
    pub levels: Vec<LevelResult<W, S>>,
    pub relation: R,
    /// First level winnable from the initial state.
    pub value_level: Option<usize>,
}

impl<W: Weight, S: Clone, R> IncrementalRun<W, S, R> {
    pub fn ensured_map(&self) -> EnsuredValueMap<W, S> {
        EnsuredValueMap {
            levels: self
                .levels
                .iter()
                .map(|l| (l.value.clone(), l.w.clone()))
                .collect(),
        }
    }

    pub fn total_stats(&self) -> FixpointStats {
        self.levels.iter().fold(FixpointStats::default(), |acc, l| FixpointStats {
            steps: acc.steps + l.stats.steps,
            preimages: acc.preimages + l.stats.preimages,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum IncrementalTargets {
    AtLeast,
    ExactOrBetter,
}

fn incremental_on<A: Arena, W: Weight>(
    arena: &mut A,
    ladder: &ValueLadder<W>,
    full: bool,
    targets: IncrementalTargets,
    deadline: &Deadline,
) -> Result<IncrementalRun<W, A::Set, A::Rel>> {
    let mut levels: Vec<LevelResult<W, A::Set>> = Vec::new();
    let mut relation: Option<A::Rel> = None;
    let mut value_level = None;
    for k in 1..=ladder.len() {
        let v = ladder.value(k).expect("in range").clone();
        let target = match targets {
            IncrementalTargets::AtLeast => arena.at_least(ladder, &v)?,
            IncrementalTargets::ExactOrBetter => {
                let exact = arena.exact_level(ladder, k)?;
                match levels.last() {
                    Some(prev) => {
                        let prev = prev.w.clone();
                        arena.union(&prev, &exact)
                    }
                    None => exact,
                }
            }
        };
        let solved = arena.solve(&target, FixpointMode::Full, deadline)?;
        // keep only the pairs of states first won at this level
        let term = match levels.last() {
            Some(prev) => {
                let prev = prev.w.clone();
                arena.restrict_outside(&solved.t, &prev)
            }
            None => solved.t.clone(),
        };
        relation = Some(match relation {
            Some(r) => arena.rel_union(&r, &term),
            None => term,
        });
        let initial_wins = arena.initial_in(&solved.w);
        levels.push(LevelResult {
            k,
            value: v,
            w: solved.w,
            initial_wins,
            stats: solved.stats,
        });
        if initial_wins && value_level.is_none() {
            value_level = Some(k);
            if !full {
                break;
            }
        }
    }
    let relation = match relation {
        Some(r) => r,
        None => {
            let empty = arena.empty();
            let solved = arena.solve(&empty, FixpointMode::Full, deadline)?;
            solved.t
        }
    };
    Ok(IncrementalRun {
        levels,
        relation,
        value_level,
    })
}

/// Solves every level's `g_{v_k}` game and prefers the actions of the best
/// level a state is won at.
pub fn incremental_extended_on<A: Arena, W: Weight>(
    arena: &mut A,
    ladder: &ValueLadder<W>,
    full: bool,
    deadline: &Deadline,
) -> Result<IncrementalRun<W, A::Set, A::Rel>> {
    incremental_on(arena, ladder, full, IncrementalTargets::AtLeast, deadline)
}

/// Solves targets `w_{k-1} ∪ g^=_{v_k}`, reusing the previous region.
pub fn incremental_improved_on<A: Arena, W: Weight>(
    arena: &mut A,
    ladder: &ValueLadder<W>,
    full: bool,
    deadline: &Deadline,
) -> Result<IncrementalRun<W, A::Set, A::Rel>> {
    incremental_on(arena, ladder, full, IncrementalTargets::ExactOrBetter, deadline)
}

/// Winning regions by descending value.
#[derive(Clone, Debug)]
pub struct EnsuredValueMap<W, S> {
    levels: Vec<(W, S)>,
}

impl<W: Weight, S> EnsuredValueMap<W, S> {
    pub fn new(levels: Vec<(W, S)>) -> Self {
        EnsuredValueMap { levels }
    }

    pub fn levels(&self) -> &[(W, S)] {
        &self.levels
    }

    /// Largest value whose region contains `state`, zero if none.
    pub fn lookup<A: Arena<Set = S>>(&self, arena: &A, state: &A::State) -> W {
        self.levels
            .iter()
            .find(|(_, w)| arena.contains(w, state))
            .map(|(v, _)| v.clone())
            .unwrap_or_else(W::zero)
    }
}
