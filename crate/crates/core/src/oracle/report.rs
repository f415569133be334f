//! Model checking a strategy transducer against the oracle game.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use super::OracleGame;
use crate::ltlf::FiniteTrace;
use crate::strategy::StrategyTransducer;
use crate::{Error, Result, Weight};

/// A history at which a check fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation<W> {
    /// Input valuations leading to the offending state.
    pub inputs: Vec<u32>,
    pub trace: FiniteTrace,
    pub expected: W,
    pub found: W,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport<W> {
    /// Value the strategy claims to ensure.
    pub claimed: W,
    /// Value the strategy actually ensures from the start.
    pub ensured: W,
    /// Best value any strategy ensures under the same scoring.
    pub optimum: W,
    /// Reachable (strategy state, oracle state) pairs.
    pub pairs: usize,
    /// States whose satisfied set differs from the oracle's.
    pub bit_mismatches: Vec<Violation<u64>>,
    /// States annotated with more than the strategy ensures from there.
    pub unsound_annotations: Vec<Violation<W>>,
    /// Histories after which the strategy ensures less than the best possible.
    pub not_incremental: Vec<Violation<W>>,
    /// Histories whose annotation differs from the value ensured from there.
    pub inexact_annotations: Vec<Violation<W>>,
}

impl<W: Weight> OracleReport<W> {
    /// The strategy ensures what it claims.
    pub fn is_winning(&self) -> bool {
        self.ensured >= self.claimed
    }

    pub fn is_optimal(&self) -> bool {
        self.is_winning() && self.claimed == self.optimum
    }

    /// Satisfied sets agree with the oracle and no annotation overclaims.
    pub fn is_sound(&self) -> bool {
        self.bit_mismatches.is_empty() && self.unsound_annotations.is_empty()
    }

    /// Optimal after every history, with exact annotations.
    pub fn is_incremental(&self) -> bool {
        self.not_incremental.is_empty() && self.inexact_annotations.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "claimed {}", self.claimed);
        let _ = writeln!(s, "ensured {}", self.ensured);
        let _ = writeln!(s, "optimum {}", self.optimum);
        let _ = writeln!(s, "pairs {}", self.pairs);
        let _ = writeln!(s, "winning {}", self.is_winning());
        let _ = writeln!(s, "optimal {}", self.is_optimal());
        let _ = writeln!(s, "sound {}", self.is_sound());
        let _ = writeln!(s, "incremental {}", self.is_incremental());
        for (kind, e, f, trace) in self.rows() {
            let _ = writeln!(s, "{kind} after {trace}: expected {e}, found {f}");
        }
        s
    }

    fn rows(&self) -> Vec<(&'static str, String, String, String)> {
        let mut rows = Vec::new();
        for v in &self.bit_mismatches {
            rows.push(("bits", format!("{:b}", v.expected), format!("{:b}", v.found), v.trace.to_string()));
        }
        for (kind, list) in [
            ("unsound-annotation", &self.unsound_annotations),
            ("not-incremental", &self.not_incremental),
            ("inexact-annotation", &self.inexact_annotations),
        ] {
            for v in list {
                rows.push((kind, v.expected.to_string(), v.found.to_string(), v.trace.to_string()));
            }
        }
        rows
    }

    /// One row per violation: kind, history, expected, found.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["kind", "history", "expected", "found"])?;
        for (kind, e, f, trace) in self.rows() {
            w.write_record([kind, trace.as_str(), e.as_str(), f.as_str()])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Explores every reachable pair of strategy state and oracle state and
/// compares what the strategy ensures with the oracle's values, scoring
/// satisfied sets with the strategy's mode-aware score.
pub fn check_strategy<W: Weight>(t: &StrategyTransducer<W>, game: &OracleGame) -> Result<OracleReport<W>> {
    let a = t.alphabet();
    if a != game.alphabet() {
        return Err(Error::Strategy("strategy and problem alphabets differ".into()));
    }
    let meta = t.meta();
    if meta.objectives.len() != game.num_objectives() {
        return Err(Error::Strategy("strategy and problem objectives differ".into()));
    }
    let score = |b: u64| meta.score(b);
    let opt = game.values(score);

    let nx = a.num_input_letters() as u32;
    let mut index: HashMap<(u32, u32), usize> = HashMap::from([((t.initial(), game.initial()), 0)]);
    let mut nodes = vec![(t.initial(), game.initial())];
    let mut parent: Vec<Option<(usize, u32)>> = vec![None];
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(n) = queue.pop_front() {
        let (ts, gs) = nodes[n];
        let mut out = Vec::with_capacity(nx as usize);
        for x in 0..nx {
            let key = (t.next(ts, x), game.next(gs, t.letter(ts, x)));
            let id = *index.entry(key).or_insert_with(|| {
                nodes.push(key);
                parent.push(Some((n, x)));
                queue.push_back(nodes.len() - 1);
                nodes.len() - 1
            });
            out.push(id);
        }
        if succ.len() <= n {
            succ.resize(n + 1, Vec::new());
        }
        succ[n] = out;
    }

    let mut ens: Vec<W> = nodes.iter().map(|&(_, g)| score(game.bits(g))).collect();
    loop {
        let mut changed = false;
        for n in 0..nodes.len() {
            let worst = succ[n].iter().map(|&m| ens[m].clone()).min().expect("inputs");
            if worst > ens[n] {
                ens[n] = worst;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let history = |mut n: usize| {
        let mut inputs = Vec::new();
        while let Some((p, x)) = parent[n] {
            inputs.push(x);
            n = p;
        }
        inputs.reverse();
        let trace = t.run(&inputs).0;
        (inputs, trace)
    };
    let mut report = OracleReport {
        claimed: meta.value.clone(),
        ensured: ens[0].clone(),
        optimum: opt[game.initial() as usize].clone(),
        pairs: nodes.len(),
        bit_mismatches: Vec::new(),
        unsound_annotations: Vec::new(),
        not_incremental: Vec::new(),
        inexact_annotations: Vec::new(),
    };
    for (n, &(ts, gs)) in nodes.iter().enumerate() {
        let st = t.state(ts);
        let e = &ens[n];
        let best = &opt[gs as usize];
        if st.bits != game.bits(gs) {
            let (inputs, trace) = history(n);
            report.bit_mismatches.push(Violation {
                inputs,
                trace,
                expected: game.bits(gs),
                found: st.bits,
            });
        }
        if st.ensured > *e {
            let (inputs, trace) = history(n);
            report.unsound_annotations.push(Violation {
                inputs,
                trace,
                expected: e.clone(),
                found: st.ensured.clone(),
            });
        }
        if e < best {
            let (inputs, trace) = history(n);
            report.not_incremental.push(Violation {
                inputs,
                trace,
                expected: best.clone(),
                found: e.clone(),
            });
        }
        if st.ensured != *e {
            let (inputs, trace) = history(n);
            report.inexact_annotations.push(Violation {
                inputs,
                trace,
                expected: e.clone(),
                found: st.ensured.clone(),
            });
        }
    }
    Ok(report)
}

/// Least score over all input sequences of length `horizon` of the satisfied
/// set the strategy has latched after them.
///
/// Scores depend only on the pair of strategy state and oracle state reached,
/// so the minimum over the `2^(|X| * horizon)` sequences is computed layer by
/// layer over reachable pairs.
pub fn model_check<W: Weight>(t: &StrategyTransducer<W>, game: &OracleGame, horizon: usize) -> Result<W> {
    if t.alphabet() != game.alphabet() || t.meta().objectives.len() != game.num_objectives() {
        return Err(Error::Strategy("strategy and problem differ".into()));
    }
    let meta = t.meta();
    let nx = t.alphabet().num_input_letters() as u32;
    let mut index: HashMap<(u32, u32), usize> = HashMap::from([((t.initial(), game.initial()), 0)]);
    let mut nodes = vec![(t.initial(), game.initial())];
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let (ts, gs) = nodes[i];
        let out = (0..nx)
            .map(|x| {
                let key = (t.next(ts, x), game.next(gs, t.letter(ts, x)));
                *index.entry(key).or_insert_with(|| {
                    nodes.push(key);
                    nodes.len() - 1
                })
            })
            .collect();
        succ.push(out);
        i += 1;
    }
    let mut layer: Vec<W> = nodes.iter().map(|&(_, g)| meta.score(game.bits(g))).collect();
    for _ in 0..horizon {
        layer = succ
            .iter()
            .map(|out| out.iter().map(|&m| layer[m].clone()).min().expect("inputs"))
            .collect();
    }
    Ok(layer.swap_remove(0))
}
