//! Finite-state strategies: the agent's output depends only on the current
//! state, then the environment's input selects the successor.

mod dot;
mod play;

use std::collections::{HashMap, VecDeque};

use crate::dfa::{Alphabet, Dfa, Letter};
use crate::ltlf::FiniteTrace;
use crate::optimal::{Arena, EngineKind, Mode};
use crate::{Error, Result, Weight};

pub use dot::strategy_to_dot;
pub use play::{play, PlayOutcome};

/// Self-contained description of what a strategy was synthesized for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyMeta<W> {
    pub mode: Mode,
    pub engine: EngineKind,
    /// Optimal value reported by the synthesis run.
    pub value: W,
    /// Realisable core (guarantee mode) or guarantee set (combined mode).
    pub core: Vec<usize>,
    pub alphabet: Alphabet,
    pub objectives: Vec<String>,
    pub guarantee_weights: Vec<W>,
    pub observation_weights: Vec<W>,
}

impl<W: Weight> StrategyMeta<W> {
    pub fn core_mask(&self) -> u64 {
        self.core.iter().fold(0, |m, &i| m | 1 << i)
    }

    /// Observation weight of the satisfied set `bits`.
    pub fn observed(&self, bits: u64) -> W {
        W::sum_of(
            self.observation_weights
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, w)| w),
        )
    }

    /// The quantity the mode optimizes, for a satisfied set `bits`: the core's
    /// guarantee weight once the whole core holds in guarantee mode, the
    /// observed weight once the guarantee set holds in combined mode, and the
    /// observed weight otherwise.
    pub fn score(&self, bits: u64) -> W {
        let core = self.core_mask();
        match self.mode {
            Mode::Guarantee => {
                if !self.core.is_empty() && bits & core == core {
                    W::sum_of(self.core.iter().map(|&i| &self.guarantee_weights[i]))
                } else {
                    W::zero()
                }
            }
            Mode::Combined => {
                if bits & core == core {
                    self.observed(bits)
                } else {
                    W::zero()
                }
            }
            _ => self.observed(bits),
        }
    }

    pub fn core_names(&self) -> Vec<&str> {
        self.core.iter().map(|&i| self.objectives[i].as_str()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransducerState<W> {
    /// Objectives satisfied by the trace leading here.
    pub bits: u64,
    /// Value the strategy ensures from here on.
    pub ensured: W,
    /// Output produced in this state.
    pub output: u32,
    /// Successor for every input valuation.
    pub next: Vec<u32>,
}

/// A strategy as an explicit machine; state 0 is initial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyTransducer<W> {
    meta: StrategyMeta<W>,
    states: Vec<TransducerState<W>>,
}

/// Progress of one execution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunState<W> {
    pub state: u32,
    pub trace: FiniteTrace,
    pub satisfied: u64,
    pub observed: W,
    pub ensured: W,
    /// Length of the shortest prefix satisfying each objective.
    pub first_satisfied: Vec<Option<usize>>,
}

impl<W: Weight> StrategyTransducer<W> {
    /// Assembles a transducer, checking that moves are total and in range.
    pub fn from_parts(meta: StrategyMeta<W>, states: Vec<TransducerState<W>>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Strategy("no states".into()));
        }
        let nx = meta.alphabet.num_input_letters();
        let ny = meta.alphabet.num_output_letters() as u32;
        for (i, s) in states.iter().enumerate() {
            if s.next.len() != nx {
                return Err(Error::Strategy(format!("state {i} does not define every input")));
            }
            if s.next.iter().any(|&t| t as usize >= states.len()) {
                return Err(Error::Strategy(format!("state {i} has a successor out of range")));
            }
            if s.output >= ny {
                return Err(Error::Strategy(format!("state {i} has an invalid output")));
            }
        }
        Ok(StrategyTransducer { meta, states })
    }

    pub fn meta(&self) -> &StrategyMeta<W> {
        &self.meta
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.meta.alphabet
    }

    pub fn states(&self) -> &[TransducerState<W>] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, s: u32) -> &TransducerState<W> {
        &self.states[s as usize]
    }

    pub fn initial(&self) -> u32 {
        0
    }

    pub fn output(&self, s: u32) -> u32 {
        self.states[s as usize].output
    }

    pub fn next(&self, s: u32, x: u32) -> u32 {
        self.states[s as usize].next[x as usize]
    }

    /// Letter read in state `s` on input `x`.
    pub fn letter(&self, s: u32, x: u32) -> Letter {
        self.meta.alphabet.join(x, self.output(s))
    }

    pub fn start(&self) -> RunState<W> {
        let s = &self.states[0];
        RunState {
            state: 0,
            trace: FiniteTrace::default(),
            satisfied: s.bits,
            observed: self.meta.observed(s.bits),
            ensured: s.ensured.clone(),
            first_satisfied: vec![None; self.meta.objectives.len()],
        }
    }

    /// Plays one round on input `x`; returns the output of the round.
    pub fn advance(&self, rs: &mut RunState<W>, x: u32) -> u32 {
        let y = self.output(rs.state);
        rs.trace
            .push(self.meta.alphabet.set_of(self.meta.alphabet.join(x, y)));
        rs.state = self.next(rs.state, x);
        let st = &self.states[rs.state as usize];
        for (i, first) in rs.first_satisfied.iter_mut().enumerate() {
            if first.is_none() && st.bits >> i & 1 == 1 {
                *first = Some(rs.trace.len());
            }
        }
        rs.satisfied = st.bits;
        rs.observed = self.meta.observed(st.bits);
        rs.ensured = st.ensured.clone();
        y
    }

    /// Induced trace of a finite input sequence.
    pub fn run(&self, inputs: &[u32]) -> (FiniteTrace, RunState<W>) {
        let mut rs = self.start();
        for &x in inputs {
            self.advance(&mut rs, x);
        }
        (rs.trace.clone(), rs)
    }

    /// Inputs leading from the initial state to every state, shortest first.
    pub fn access_sequences(&self) -> Vec<Vec<u32>> {
        let mut seq: Vec<Option<Vec<u32>>> = vec![None; self.states.len()];
        seq[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0u32]);
        while let Some(s) = queue.pop_front() {
            let base = seq[s as usize].clone().expect("visited");
            for (x, &t) in self.states[s as usize].next.iter().enumerate() {
                if seq[t as usize].is_none() {
                    let mut p = base.clone();
                    p.push(x as u32);
                    seq[t as usize] = Some(p);
                    queue.push_back(t);
                }
            }
        }
        seq.into_iter().map(|s| s.unwrap_or_default()).collect()
    }
}

/// Builds the transducer reachable from the arena's initial state under
/// `controller`.
///
/// A transducer state pairs an arena state with the states of `monitor`, one
/// DFA per objective of the full problem, so acceptance bits cover every
/// objective even when the arena tracks only some of them.
pub fn concretize<A: Arena, W: Weight>(
    arena: &A,
    controller: &A::Controller,
    monitor: &[Dfa],
    ensured: impl Fn(&A::State) -> W,
    meta: StrategyMeta<W>,
    max_states: usize,
) -> Result<StrategyTransducer<W>> {
    let alphabet = meta.alphabet.clone();
    let nx = alphabet.num_input_letters() as u32;
    type Key<S> = (S, Vec<u32>);
    let start: Key<A::State> = (
        arena.initial_state(),
        monitor.iter().map(Dfa::initial).collect(),
    );
    let mut index: HashMap<Key<A::State>, u32> = HashMap::from([(start.clone(), 0)]);
    let mut keys = vec![start];
    let mut states = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        let (s, tuple) = keys[i].clone();
        let y = arena.output(controller, &s).ok_or_else(|| {
            Error::Strategy(format!(
                "reachable state {s:?} has no winning output; the strategy is not winning"
            ))
        })?;
        let mut next = Vec::with_capacity(nx as usize);
        for x in 0..nx {
            let letter = alphabet.join(x, y);
            let key = (
                arena.step(&s, letter),
                tuple
                    .iter()
                    .zip(monitor)
                    .map(|(&q, d)| d.next(q, letter))
                    .collect::<Vec<u32>>(),
            );
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    if keys.len() >= max_states {
                        return Err(Error::Limit {
                            what: "strategy state count",
                            limit: max_states,
                        });
                    }
                    let id = keys.len() as u32;
                    index.insert(key.clone(), id);
                    keys.push(key);
                    id
                }
            };
            next.push(id);
        }
        let bits = tuple
            .iter()
            .zip(monitor)
            .enumerate()
            .filter(|(_, (&q, d))| d.is_accepting(q))
            .fold(0u64, |m, (j, _)| m | 1 << j);
        states.push(TransducerState {
            bits,
            ensured: ensured(&s),
            output: y,
            next,
        });
        i += 1;
    }
    StrategyTransducer::from_parts(meta, states)
}
