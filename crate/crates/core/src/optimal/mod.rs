//! Max-guarantee, max-observation and incremental max-observation synthesis,
//! and their combination.

mod algorithms;
mod arena;
mod subsets;

use std::fmt;
use std::str::FromStr;

use crate::cancel::Deadline;
use crate::game::{FixpointMode, FixpointStats};
use crate::problem::{CompiledSpec, Limits, ProblemSpec};
use crate::strategy::{concretize, StrategyMeta, StrategyTransducer};
use crate::sym::{SymbolicArena, ValueLadder, VarOrder};
use crate::{Error, Result, Weight};

pub use algorithms::{
    incremental_extended_on, incremental_improved_on, observe_on, EnsuredValueMap, IncrementalRun,
    LevelResult, ObservationRun,
};
pub use arena::{Arena, ExplicitArena, Solved, SymbolicController};
pub use subsets::SubsetsByWeight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Guarantee,
    Observe,
    IncrementalExtended,
    IncrementalImproved,
    Combined,
}

impl Mode {
    pub const ALL: [Mode; 5] = [
        Mode::Guarantee,
        Mode::Observe,
        Mode::IncrementalExtended,
        Mode::IncrementalImproved,
        Mode::Combined,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Guarantee => "guarantee",
            Mode::Observe => "observe",
            Mode::IncrementalExtended => "incremental-ext",
            Mode::IncrementalImproved => "incremental-imp",
            Mode::Combined => "combined",
        }
    }

    pub fn is_incremental(self) -> bool {
        matches!(self, Mode::IncrementalExtended | Mode::IncrementalImproved)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown mode `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EngineKind {
    Explicit,
    #[default]
    Symbolic,
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Explicit => "explicit",
            EngineKind::Symbolic => "symbolic",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit" => Ok(EngineKind::Explicit),
            "symbolic" => Ok(EngineKind::Symbolic),
            _ => Err(Error::Argument(format!("unknown engine `{s}`"))),
        }
    }
}

/// Order in which basic max-observation probes the value ladder.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Search {
    #[default]
    Linear,
    Binary,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub mode: Mode,
    pub engine: EngineKind,
    pub search: Search,
    /// Guarantee set for combined mode; `None` searches all sets.
    pub guarantee_set: Option<Vec<usize>>,
    /// Incremental modes: solve every level, not only down to the optimum.
    pub full: bool,
    pub order: VarOrder,
    pub limits: Limits,
    /// Cap on the number of strategy states.
    pub strategy_states: usize,
    /// Build the strategy transducer for realised values.
    pub build_strategy: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            mode: Mode::Observe,
            engine: EngineKind::Symbolic,
            search: Search::Linear,
            guarantee_set: None,
            full: false,
            order: VarOrder::AtomsFirst,
            limits: Limits::default(),
            strategy_states: crate::dfa::DEFAULT_STATE_LIMIT,
            build_strategy: true,
        }
    }
}

impl Options {
    pub fn new(mode: Mode, engine: EngineKind) -> Self {
        Options {
            mode,
            engine,
            ..Options::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.search == Search::Binary && self.mode != Mode::Observe {
            return Err(Error::Argument(
                "binary search is only available in observe mode".into(),
            ));
        }
        if self.guarantee_set.is_some() && self.mode != Mode::Combined {
            return Err(Error::Argument(
                "a guarantee set is only meaningful in combined mode".into(),
            ));
        }
        Ok(())
    }
}

/// Work done by a synthesis run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SynthesisStats {
    pub games: usize,
    pub fixpoint_steps: usize,
    pub preimages: usize,
    /// Fixpoint steps of every solved game, in solving order.
    pub game_steps: Vec<usize>,
    /// Arena size of the largest arena built.
    pub states: u128,
    pub dd_nodes_peak: usize,
}

impl SynthesisStats {
    fn record(&mut self, s: FixpointStats) {
        self.games += 1;
        self.fixpoint_steps += s.steps;
        self.preimages += s.preimages;
        self.game_steps.push(s.steps);
    }

    fn observe_arena<A: Arena>(&mut self, arena: &A) {
        self.states = self.states.max(arena.states());
        self.dd_nodes_peak = self.dd_nodes_peak.max(arena.dd_nodes());
    }
}

/// One probed ladder level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSummary<W> {
    pub value: W,
    pub initial_wins: bool,
    pub steps: usize,
    pub preimages: usize,
}

#[derive(Clone, Debug)]
pub struct SynthesisOutcome<W> {
    pub mode: Mode,
    pub engine: EngineKind,
    /// Optimal value; zero when nothing is achievable.
    pub value: W,
    /// Realisable core (guarantee) or guarantee set (combined).
    pub core: Vec<usize>,
    /// Combined mode: guarantee weight of the set plus the observation value.
    pub total: Option<W>,
    pub levels: Vec<LevelSummary<W>>,
    pub strategy: Option<StrategyTransducer<W>>,
    pub stats: SynthesisStats,
}

impl<W: Weight> SynthesisOutcome<W> {
    pub fn realised(&self) -> bool {
        self.value > W::zero()
    }
}

fn summaries<W: Weight, S>(levels: &[LevelResult<W, S>]) -> Vec<LevelSummary<W>> {
    levels
        .iter()
        .map(|l| LevelSummary {
            value: l.value.clone(),
            initial_wins: l.initial_wins,
            steps: l.stats.steps,
            preimages: l.stats.preimages,
        })
        .collect()
}

struct Run<'a, W> {
    compiled: &'a CompiledSpec<W>,
    opts: &'a Options,
}

impl<'a, W: Weight> Run<'a, W> {
    fn deadline(&self) -> &Deadline {
        &self.opts.limits.deadline
    }

    fn meta(&self, value: W, core: Vec<usize>) -> StrategyMeta<W> {
        let spec = self.compiled.spec();
        StrategyMeta {
            mode: self.opts.mode,
            engine: self.opts.engine,
            value,
            core,
            alphabet: spec.alphabet().clone(),
            objectives: spec.names(),
            guarantee_weights: spec.guarantee_weights(),
            observation_weights: spec.observation_weights(),
        }
    }

    fn full_arena<A: Arena>(&self) -> Result<A> {
        A::build(
            self.compiled.alphabet(),
            self.compiled.components(),
            self.opts.order,
            &self.opts.limits,
        )
    }

    fn concretize<A: Arena>(
        &self,
        arena: &mut A,
        t: &A::Rel,
        ensured: impl Fn(&A::State) -> W,
        value: W,
        core: Vec<usize>,
    ) -> Result<Option<StrategyTransducer<W>>> {
        if !self.opts.build_strategy {
            return Ok(None);
        }
        let controller = arena.controller(t);
        concretize(
            arena,
            &controller,
            self.compiled.components(),
            ensured,
            self.meta(value, core),
            self.opts.strategy_states,
        )
        .map(Some)
    }

    fn outcome(&self, value: W, core: Vec<usize>, stats: SynthesisStats) -> SynthesisOutcome<W> {
        SynthesisOutcome {
            mode: self.opts.mode,
            engine: self.opts.engine,
            value,
            core,
            total: None,
            levels: Vec::new(),
            strategy: None,
            stats,
        }
    }

    fn guarantee<A: Arena>(&self) -> Result<SynthesisOutcome<W>> {
        let spec = self.compiled.spec();
        let mut stats = SynthesisStats::default();
        for (psi, g_sum) in SubsetsByWeight::new(&spec.guarantee_weights()) {
            if psi.is_empty() {
                break;
            }
            self.deadline().check()?;
            let mut arena = A::build(
                self.compiled.alphabet(),
                &self.compiled.select(&psi),
                self.opts.order,
                &self.opts.limits,
            )?;
            let local: Vec<usize> = (0..psi.len()).collect();
            let target = arena.all_of(&local)?;
            let solved = arena.solve(&target, FixpointMode::EarlyExit, self.deadline())?;
            stats.record(solved.stats);
            stats.observe_arena(&arena);
            if arena.initial_in(&solved.w) {
                let strategy = self.concretize(
                    &mut arena,
                    &solved.t,
                    |_| g_sum.clone(),
                    g_sum.clone(),
                    psi.clone(),
                )?;
                stats.observe_arena(&arena);
                let mut out = self.outcome(g_sum, psi, stats);
                out.strategy = strategy;
                return Ok(out);
            }
        }
        Ok(self.outcome(W::zero(), Vec::new(), stats))
    }

    fn ladder(&self, base: &[usize]) -> Result<ValueLadder<W>> {
        ValueLadder::with_base(
            &self.compiled.spec().observation_weights(),
            base,
            self.opts.limits.objectives,
        )
    }

    /// Basic max-observation over supersets of `base`.
    fn observe<A: Arena>(&self, arena: &mut A, base: &[usize], stats: &mut SynthesisStats) -> Result<SynthesisOutcome<W>> {
        let ladder = self.ladder(base)?;
        let run = observe_on(arena, &ladder, self.opts.search, self.deadline())?;
        for p in &run.probes {
            stats.record(p.stats);
        }
        stats.observe_arena(arena);
        let mut out = self.outcome(W::zero(), base.to_vec(), stats.clone());
        out.levels = summaries(&run.probes);
        if let Some((k, solved)) = &run.best {
            let v = ladder.value(*k).expect("in range").clone();
            let strategy = self.concretize(arena, &solved.t, |_| v.clone(), v.clone(), base.to_vec())?;
            stats.observe_arena(arena);
            out.stats = stats.clone();
            out.value = v;
            out.strategy = strategy;
        }
        Ok(out)
    }

    fn incremental<A: Arena>(&self, improved: bool) -> Result<SynthesisOutcome<W>> {
        let mut arena: A = self.full_arena()?;
        let ladder = self.ladder(&[])?;
        let run = if improved {
            incremental_improved_on(&mut arena, &ladder, self.opts.full, self.deadline())?
        } else {
            incremental_extended_on(&mut arena, &ladder, self.opts.full, self.deadline())?
        };
        let mut stats = SynthesisStats::default();
        for l in &run.levels {
            stats.record(l.stats);
        }
        stats.observe_arena(&arena);
        let mut out = self.outcome(W::zero(), Vec::new(), stats);
        out.levels = summaries(&run.levels);
        if let Some(k) = run.value_level {
            let v = ladder.value(k).expect("in range").clone();
            let map = run.ensured_map();
            let strategy = if !self.opts.build_strategy {
                None
            } else {
                let controller = arena.controller(&run.relation);
                let arena_ref: &A = &arena;
                let lookup = |s: &A::State| map.lookup(arena_ref, s);
                Some(concretize(
                    &arena,
                    &controller,
                    self.compiled.components(),
                    lookup,
                    self.meta(v.clone(), Vec::new()),
                    self.opts.strategy_states,
                )?)
            };
            out.stats.observe_arena(&arena);
            out.value = v;
            out.strategy = strategy;
        }
        Ok(out)
    }

    fn combined<A: Arena>(&self) -> Result<SynthesisOutcome<W>> {
        let spec = self.compiled.spec();
        let g = spec.guarantee_weights();
        let total_v = W::sum_of(&spec.observation_weights());
        let score = |out: &SynthesisOutcome<W>, gamma: &[usize]| {
            if out.realised() {
                out.value.clone() + W::sum_of(gamma.iter().map(|&i| &g[i]))
            } else {
                W::zero()
            }
        };
        if let Some(gamma) = &self.opts.guarantee_set {
            let mut arena: A = self.full_arena()?;
            let mut stats = SynthesisStats::default();
            let mut out = self.observe(&mut arena, gamma, &mut stats)?;
            out.total = Some(score(&out, gamma));
            return Ok(out);
        }
        let mut stats = SynthesisStats::default();
        let mut best: Option<SynthesisOutcome<W>> = None;
        let mut arena: A = self.full_arena()?;
        for (gamma, g_sum) in SubsetsByWeight::new(&g) {
            if let Some(b) = &best {
                // no later set can beat the incumbent
                if g_sum.clone() + total_v.clone() <= b.total.clone().unwrap_or_else(W::zero) {
                    break;
                }
            }
            self.deadline().check()?;
            let mut out = self.observe(&mut arena, &gamma, &mut stats)?;
            let total = score(&out, &gamma);
            out.total = Some(total.clone());
            let better = match &best {
                None => out.realised(),
                Some(b) => total > b.total.clone().unwrap_or_else(W::zero),
            };
            if better {
                best = Some(out);
            }
        }
        let mut out = best.unwrap_or_else(|| {
            let mut o = self.outcome(W::zero(), Vec::new(), SynthesisStats::default());
            o.total = Some(W::zero());
            o
        });
        out.stats = stats;
        Ok(out)
    }

    fn dispatch<A: Arena>(&self) -> Result<SynthesisOutcome<W>> {
        match self.opts.mode {
            Mode::Guarantee => self.guarantee::<A>(),
            Mode::Observe => {
                let mut arena: A = self.full_arena()?;
                let mut stats = SynthesisStats::default();
                self.observe(&mut arena, &[], &mut stats)
            }
            Mode::IncrementalExtended => self.incremental::<A>(false),
            Mode::IncrementalImproved => self.incremental::<A>(true),
            Mode::Combined => self.combined::<A>(),
        }
    }
}

/// Synthesizes an optimal strategy for an already compiled problem.
pub fn synthesize_compiled<W: Weight>(compiled: &CompiledSpec<W>, opts: &Options) -> Result<SynthesisOutcome<W>> {
    opts.validate()?;
    if let Some(gamma) = &opts.guarantee_set {
        if let Some(&i) = gamma.iter().find(|&&i| i >= compiled.len()) {
            return Err(Error::Argument(format!("objective index {i} out of range")));
        }
    }
    let run = Run { compiled, opts };
    match opts.engine {
        EngineKind::Explicit => run.dispatch::<ExplicitArena>(),
        EngineKind::Symbolic => run.dispatch::<SymbolicArena>(),
    }
}

/// Compiles `spec` and synthesizes an optimal strategy.
pub fn synthesize<W: Weight>(spec: &ProblemSpec<W>, opts: &Options) -> Result<SynthesisOutcome<W>> {
    let compiled = spec.compile(&opts.limits)?;
    synthesize_compiled(&compiled, opts)
}

fn with_mode(opts: &Options, mode: Mode) -> Options {
    Options {
        mode,
        ..opts.clone()
    }
}

/// First realisable objective set in non-increasing guarantee weight.
pub fn max_guarantee<W: Weight>(spec: &ProblemSpec<W>, opts: &Options) -> Result<SynthesisOutcome<W>> {
    synthesize(spec, &with_mode(opts, Mode::Guarantee))
}

/// Largest worst-case observed value.
pub fn max_observation<W: Weight>(spec: &ProblemSpec<W>, opts: &Options) -> Result<SynthesisOutcome<W>> {
    synthesize(spec, &with_mode(opts, Mode::Observe))
}

pub fn incremental_extended<W: Weight>(spec: &ProblemSpec<W>, opts: &Options) -> Result<SynthesisOutcome<W>> {
    synthesize(spec, &with_mode(opts, Mode::IncrementalExtended))
}

pub fn incremental_improved<W: Weight>(spec: &ProblemSpec<W>, opts: &Options) -> Result<SynthesisOutcome<W>> {
    synthesize(spec, &with_mode(opts, Mode::IncrementalImproved))
}

/// Guarantee set plus observation value; `gamma = None` searches all sets.
pub fn combined<W: Weight>(
    spec: &ProblemSpec<W>,
    gamma: Option<Vec<usize>>,
    opts: &Options,
) -> Result<SynthesisOutcome<W>> {
    let opts = Options {
        guarantee_set: gamma,
        ..with_mode(opts, Mode::Combined)
    };
    synthesize(spec, &opts)
}
