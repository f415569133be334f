//! Reference semantics for checking synthesis results.
//!
//! The oracle never touches the automata or decision diagrams used by the
//! engines. It unfolds each objective by syntactic progression, explores the
//! resulting game graph explicitly, and computes values by plain minimax:
//! the agent picks an output, then the environment picks an input. Values
//! are least fixpoints of `val(s) = max(score(s), max_y min_x val(s'))`,
//! which equals minimax over plays of length up to the number of states.

mod progression;
mod report;

use std::collections::HashMap;

use progression::{Progression, Residual};

use crate::dfa::{Alphabet, Letter};
use crate::ltlf::Formula;
use crate::problem::ProblemSpec;
use crate::{Error, Result, Weight};

pub use report::{check_strategy, model_check, OracleReport, Violation};

/// Default cap on oracle game states.
pub const DEFAULT_ORACLE_STATES: usize = 200_000;

const DONE: u32 = u32::MAX;

/// The explicit game graph of a problem, built by progression.
#[derive(Clone, Debug)]
pub struct OracleGame {
    alphabet: Alphabet,
    objectives: usize,
    bits: Vec<u64>,
    /// `succ[s * num_letters + letter]`
    succ: Vec<u32>,
}

impl OracleGame {
    pub fn new(alphabet: &Alphabet, formulas: &[Formula], max_states: usize) -> Result<Self> {
        if formulas.len() > 64 {
            return Err(Error::Spec("at most 64 objectives".into()));
        }
        let mut prog = Progression::new();
        let roots = formulas
            .iter()
            .map(|f| prog.add(f, false, alphabet))
            .collect::<Result<Vec<u32>>>()?;
        let mut residuals: Vec<Residual> = Vec::new();
        let mut residual_ids: HashMap<Residual, u32> = HashMap::new();
        let mut rid = |r: Residual, residuals: &mut Vec<Residual>| -> u32 {
            *residual_ids.entry(r.clone()).or_insert_with(|| {
                residuals.push(r);
                residuals.len() as u32 - 1
            })
        };
        let start: Vec<u32> = roots
            .iter()
            .map(|&id| rid(Residual::obligation(id), &mut residuals))
            .collect();
        let k = alphabet.num_letters();
        let mut keys: Vec<(Vec<u32>, u64)> = vec![(start.clone(), 0)];
        let mut index: HashMap<(Vec<u32>, u64), u32> = HashMap::from([((start, 0), 0)]);
        let mut succ = Vec::new();
        let mut i = 0;
        while i < keys.len() {
            let (tuple, bits) = keys[i].clone();
            for letter in 0..k as Letter {
                let mut nt = Vec::with_capacity(tuple.len());
                let mut nb = bits;
                for (j, &r) in tuple.iter().enumerate() {
                    if r == DONE {
                        nt.push(DONE);
                        continue;
                    }
                    let next = prog.step(&residuals[r as usize], letter);
                    if next.holds_at_end() {
                        nb |= 1 << j;
                        nt.push(DONE);
                    } else {
                        nt.push(rid(next, &mut residuals));
                    }
                }
                let key = (nt, nb);
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        if keys.len() >= max_states {
                            return Err(Error::Limit {
                                what: "oracle state count",
                                limit: max_states,
                            });
                        }
                        let id = keys.len() as u32;
                        index.insert(key.clone(), id);
                        keys.push(key);
                        id
                    }
                };
                succ.push(id);
            }
            i += 1;
        }
        Ok(OracleGame {
            alphabet: alphabet.clone(),
            objectives: formulas.len(),
            bits: keys.iter().map(|(_, b)| *b).collect(),
            succ,
        })
    }

    pub fn from_spec<W: Weight>(spec: &ProblemSpec<W>) -> Result<Self> {
        let formulas: Vec<Formula> = spec.objectives().iter().map(|o| o.formula.clone()).collect();
        OracleGame::new(spec.alphabet(), &formulas, DEFAULT_ORACLE_STATES)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_objectives(&self) -> usize {
        self.objectives
    }

    pub fn num_states(&self) -> usize {
        self.bits.len()
    }

    pub fn initial(&self) -> u32 {
        0
    }

    /// Objectives satisfied by every trace reaching `s`.
    pub fn bits(&self, s: u32) -> u64 {
        self.bits[s as usize]
    }

    pub fn next(&self, s: u32, letter: Letter) -> u32 {
        self.succ[s as usize * self.alphabet.num_letters() + letter as usize]
    }

    /// Best value the agent can force from every state.
    pub fn values<W: Weight>(&self, score: impl Fn(u64) -> W) -> Vec<W> {
        let a = &self.alphabet;
        let mut val: Vec<W> = self.bits.iter().map(|&b| score(b)).collect();
        loop {
            let mut changed = false;
            for s in 0..self.num_states() as u32 {
                let best = (0..a.num_output_letters() as u32)
                    .map(|y| {
                        (0..a.num_input_letters() as u32)
                            .map(|x| val[self.next(s, a.join(x, y)) as usize].clone())
                            .min()
                            .expect("at least one input")
                    })
                    .max()
                    .expect("at least one output");
                if best > val[s as usize] {
                    val[s as usize] = best;
                    changed = true;
                }
            }
            if !changed {
                return val;
            }
        }
    }

    pub fn value<W: Weight>(&self, score: impl Fn(u64) -> W) -> W {
        self.values(score).swap_remove(0)
    }

    /// Whether the agent can force every objective in `mask`.
    pub fn forces(&self, mask: u64) -> bool {
        self.value(|b| u8::from(b & mask == mask)) == 1
    }
}

fn weight_of<W: Weight>(weights: &[W], bits: u64) -> W {
    W::sum_of(weights.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, w)| w))
}

/// Largest observation weight the agent can force.
pub fn max_observation<W: Weight>(game: &OracleGame, observation: &[W]) -> W {
    game.value(|b| weight_of(observation, b))
}

/// Largest guarantee weight of a forceable non-empty objective set, with every
/// set attaining it.
pub fn max_guarantee<W: Weight>(game: &OracleGame, guarantee: &[W]) -> (W, Vec<Vec<usize>>) {
    let n = game.num_objectives();
    assert!(n <= 20, "exhaustive search over {n} objectives");
    let mut best = W::zero();
    let mut cores: Vec<Vec<usize>> = Vec::new();
    for mask in 1u64..1 << n {
        let w = weight_of(guarantee, mask);
        if w < best || !game.forces(mask) {
            continue;
        }
        let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if w > best {
            best = w;
            cores.clear();
        }
        cores.push(set);
    }
    (best, cores)
}

/// The lexicographically least objective set among those of largest
/// forceable guarantee weight, with that weight; `None` when no non-empty set
/// can be forced.
pub fn exhaustive_core<W: Weight>(game: &OracleGame, guarantee: &[W]) -> Option<(Vec<usize>, W)> {
    let (w, cores) = max_guarantee(game, guarantee);
    cores.into_iter().min().map(|c| (c, w))
}

/// Observation value over plays satisfying all of `gamma`; zero when `gamma`
/// cannot be forced or nothing is observed.
pub fn observation_given<W: Weight>(game: &OracleGame, observation: &[W], gamma: &[usize]) -> W {
    let mask = gamma.iter().fold(0u64, |m, &i| m | 1 << i);
    game.value(|b| if b & mask == mask { weight_of(observation, b) } else { W::zero() })
}

/// Best guarantee-plus-observation total over all guarantee sets, with the
/// sets attaining it.
pub fn max_combined<W: Weight>(game: &OracleGame, guarantee: &[W], observation: &[W]) -> (W, Vec<Vec<usize>>) {
    let n = game.num_objectives();
    assert!(n <= 16, "exhaustive search over {n} objectives");
    let mut best = W::zero();
    let mut sets = Vec::new();
    for mask in 0u64..1 << n {
        let gamma: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let v = observation_given(game, observation, &gamma);
        if v == W::zero() {
            continue;
        }
        let total = v + weight_of(guarantee, mask);
        if total > best {
            best = total;
            sets = vec![gamma];
        } else if total == best {
            sets.push(gamma);
        }
    }
    (best, sets)
}
