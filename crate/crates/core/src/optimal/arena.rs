//! The two game engines behind one interface.

use std::fmt::Debug;
use std::hash::Hash;

use crate::cancel::Deadline;
use crate::dd::Func;
use crate::dfa::{product_with, Alphabet, Dfa, Letter, ProductDfa};
use crate::game::{
    output_order, solve_explicit_with, solve_symbolic_with, synthesize_outputs, Actions,
    FixpointMode, FixpointStats,
};
use crate::problem::Limits;
use crate::sym::{Code, SymbolicArena, ValueLadder, VarOrder};
use crate::{Result, Weight};

/// Winning region and state–action relation of one solved game.
#[derive(Clone, Debug)]
pub struct Solved<S, R> {
    pub w: S,
    pub t: R,
    pub stats: FixpointStats,
}

/// A product arena over which reachability games are solved.
pub trait Arena: Sized {
    /// A set of arena states.
    type Set: Clone + PartialEq + Debug;
    /// A set of (state, output) pairs.
    type Rel: Clone;
    type State: Clone + Eq + Hash + Debug;
    /// Output choice for every state of a relation's domain.
    type Controller;

    /// Product of `components`, which all range over `alphabet`.
    fn build(alphabet: &Alphabet, components: &[Dfa], order: VarOrder, limits: &Limits) -> Result<Self>;

    fn num_components(&self) -> usize;

    fn empty(&self) -> Self::Set;

    /// States satisfying every component of `set`.
    fn all_of(&mut self, set: &[usize]) -> Result<Self::Set>;

    /// States whose satisfied set contains the ladder base and weighs at least `v`.
    fn at_least<W: Weight>(&mut self, ladder: &ValueLadder<W>, v: &W) -> Result<Self::Set>;

    /// States credited exactly the `k`-th ladder value.
    fn exact_level<W: Weight>(&mut self, ladder: &ValueLadder<W>, k: usize) -> Result<Self::Set>;

    fn union(&mut self, a: &Self::Set, b: &Self::Set) -> Self::Set;

    fn solve(&mut self, target: &Self::Set, mode: FixpointMode, deadline: &Deadline) -> Result<Solved<Self::Set, Self::Rel>>;

    fn initial_in(&mut self, set: &Self::Set) -> bool;

    /// Pairs of `t` whose state is outside `set`.
    fn restrict_outside(&mut self, t: &Self::Rel, set: &Self::Set) -> Self::Rel;

    fn rel_union(&mut self, a: &Self::Rel, b: &Self::Rel) -> Self::Rel;

    /// Picks the preferred output of `t` at every state of its domain.
    fn controller(&mut self, t: &Self::Rel) -> Self::Controller;

    fn initial_state(&self) -> Self::State;

    fn output(&self, c: &Self::Controller, s: &Self::State) -> Option<u32>;

    fn step(&self, s: &Self::State, letter: Letter) -> Self::State;

    fn contains(&self, set: &Self::Set, s: &Self::State) -> bool;

    /// Number of arena states (explicit) or size of the state space (symbolic).
    fn states(&self) -> u128;

    /// Decision-diagram nodes allocated so far; zero for explicit arenas.
    fn dd_nodes(&self) -> usize;
}

/// Explicit product arena.
#[derive(Clone, Debug)]
pub struct ExplicitArena {
    product: ProductDfa,
}

impl ExplicitArena {
    pub fn new(product: ProductDfa) -> Self {
        ExplicitArena { product }
    }

    pub fn product(&self) -> &ProductDfa {
        &self.product
    }
}

fn merge_actions(a: &Actions, b: &Actions, order: &[u32]) -> Actions {
    match (a, b) {
        (Actions::None, x) | (x, Actions::None) => x.clone(),
        (Actions::Any, _) | (_, Actions::Any) => Actions::Any,
        (Actions::Some(p), Actions::Some(q)) => Actions::Some(
            order
                .iter()
                .copied()
                .filter(|y| p.contains(y) || q.contains(y))
                .collect(),
        ),
    }
}

impl Arena for ExplicitArena {
    type Set = Vec<bool>;
    type Rel = Vec<Actions>;
    type State = u32;
    type Controller = Vec<Option<u32>>;

    fn build(_: &Alphabet, components: &[Dfa], _: VarOrder, limits: &Limits) -> Result<Self> {
        Ok(ExplicitArena {
            product: product_with(components, limits.product_states, &limits.deadline)?,
        })
    }

    fn num_components(&self) -> usize {
        self.product.num_components()
    }

    fn empty(&self) -> Vec<bool> {
        vec![false; self.product.num_states()]
    }

    fn all_of(&mut self, set: &[usize]) -> Result<Vec<bool>> {
        let mask = set.iter().fold(0u64, |m, &i| m | 1 << i);
        Ok((0..self.product.num_states() as u32)
            .map(|q| self.product.bits(q) & mask == mask)
            .collect())
    }

    fn at_least<W: Weight>(&mut self, ladder: &ValueLadder<W>, v: &W) -> Result<Vec<bool>> {
        Ok((0..self.product.num_states() as u32)
            .map(|q| ladder.credited(self.product.bits(q)) >= *v)
            .collect())
    }

    fn exact_level<W: Weight>(&mut self, ladder: &ValueLadder<W>, k: usize) -> Result<Vec<bool>> {
        let v = ladder
            .value(k)
            .ok_or_else(|| crate::Error::Argument(format!("ladder level {k} out of range")))?;
        Ok((0..self.product.num_states() as u32)
            .map(|q| ladder.credited(self.product.bits(q)) == *v)
            .collect())
    }

    fn union(&mut self, a: &Vec<bool>, b: &Vec<bool>) -> Vec<bool> {
        a.iter().zip(b).map(|(&x, &y)| x || y).collect()
    }

    fn solve(&mut self, target: &Vec<bool>, mode: FixpointMode, deadline: &Deadline) -> Result<Solved<Vec<bool>, Vec<Actions>>> {
        let r = solve_explicit_with(self.product.dfa(), target, mode == FixpointMode::EarlyExit, deadline)?;
        Ok(Solved {
            w: r.winning,
            t: r.actions,
            stats: r.stats,
        })
    }

    fn initial_in(&mut self, set: &Vec<bool>) -> bool {
        set[self.product.dfa().initial() as usize]
    }

    fn restrict_outside(&mut self, t: &Vec<Actions>, set: &Vec<bool>) -> Vec<Actions> {
        t.iter()
            .zip(set)
            .map(|(a, &inside)| if inside { Actions::None } else { a.clone() })
            .collect()
    }

    fn rel_union(&mut self, a: &Vec<Actions>, b: &Vec<Actions>) -> Vec<Actions> {
        let order = output_order(self.product.dfa().alphabet().num_outputs());
        a.iter().zip(b).map(|(x, y)| merge_actions(x, y, &order)).collect()
    }

    fn controller(&mut self, t: &Vec<Actions>) -> Vec<Option<u32>> {
        t.iter().map(Actions::first).collect()
    }

    fn initial_state(&self) -> u32 {
        self.product.dfa().initial()
    }

    fn output(&self, c: &Vec<Option<u32>>, s: &u32) -> Option<u32> {
        c[*s as usize]
    }

    fn step(&self, s: &u32, letter: Letter) -> u32 {
        self.product.dfa().next(*s, letter)
    }

    fn contains(&self, set: &Vec<bool>, s: &u32) -> bool {
        set[*s as usize]
    }

    fn states(&self) -> u128 {
        self.product.num_states() as u128
    }

    fn dd_nodes(&self) -> usize {
        0
    }
}

/// Output functions of a symbolic strategy and the states they are defined on.
#[derive(Clone, Debug)]
pub struct SymbolicController {
    pub outputs: Vec<Func>,
    pub domain: Func,
}

impl Arena for SymbolicArena {
    type Set = Func;
    type Rel = Func;
    type State = Code;
    type Controller = SymbolicController;

    fn build(alphabet: &Alphabet, components: &[Dfa], order: VarOrder, limits: &Limits) -> Result<Self> {
        limits.deadline.check()?;
        Ok(SymbolicArena::with_order(alphabet, components, order))
    }

    fn num_components(&self) -> usize {
        SymbolicArena::num_components(self)
    }

    fn empty(&self) -> Func {
        self.manager().const_false()
    }

    fn all_of(&mut self, set: &[usize]) -> Result<Func> {
        if set.is_empty() {
            return Ok(self.manager().const_true());
        }
        self.target_guarantee(set)
    }

    fn at_least<W: Weight>(&mut self, ladder: &ValueLadder<W>, v: &W) -> Result<Func> {
        self.target_at_least(ladder, v)
    }

    fn exact_level<W: Weight>(&mut self, ladder: &ValueLadder<W>, k: usize) -> Result<Func> {
        self.target_exact_level(ladder, k)
    }

    fn union(&mut self, a: &Func, b: &Func) -> Func {
        self.manager_mut().or(*a, *b)
    }

    fn solve(&mut self, target: &Func, mode: FixpointMode, deadline: &Deadline) -> Result<Solved<Func, Func>> {
        let r = solve_symbolic_with(self, *target, mode, deadline)?;
        Ok(Solved {
            w: r.w,
            t: r.t,
            stats: r.stats,
        })
    }

    fn initial_in(&mut self, set: &Func) -> bool {
        let init = self.initial();
        self.manager_mut().is_implied(init, *set)
    }

    fn restrict_outside(&mut self, t: &Func, set: &Func) -> Func {
        let m = self.manager_mut();
        let outside = m.not(*set);
        m.and(*t, outside)
    }

    fn rel_union(&mut self, a: &Func, b: &Func) -> Func {
        self.manager_mut().or(*a, *b)
    }

    fn controller(&mut self, t: &Func) -> SymbolicController {
        let ys = self.y_vars().to_vec();
        let cube = self.y_cube();
        let m = self.manager_mut();
        let domain = m.exists_cube(cube, *t);
        let outputs = synthesize_outputs(m, *t, &ys);
        SymbolicController { outputs, domain }
    }

    fn initial_state(&self) -> Code {
        self.initial_code()
    }

    fn output(&self, c: &SymbolicController, s: &Code) -> Option<u32> {
        if !self.eval_state(c.domain, s) {
            return None;
        }
        Some(
            c.outputs
                .iter()
                .enumerate()
                .fold(0, |acc, (j, &f)| acc | (self.eval_state(f, s) as u32) << j),
        )
    }

    fn step(&self, s: &Code, letter: Letter) -> Code {
        SymbolicArena::step(self, s, letter)
    }

    fn contains(&self, set: &Func, s: &Code) -> bool {
        self.eval_state(*set, s)
    }

    fn states(&self) -> u128 {
        self.state_space()
    }

    fn dd_nodes(&self) -> usize {
        self.manager().allocated()
    }
}
