use super::FixpointStats;
use crate::cancel::Deadline;
use crate::dd::{DdManager, Func, Var};
use crate::sym::SymbolicArena;
use crate::Result;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FixpointMode {
    /// Stop as soon as the initial state is in the region.
    EarlyExit,
    /// Iterate until the region is stable.
    #[default]
    Full,
}

/// Winning region `w` over state variables and winning state–action relation
/// `t` over state and output variables.
#[derive(Clone, Debug)]
pub struct GameResult {
    pub w: Func,
    pub t: Func,
    /// `(w_i, t_i)` for every computed iterate, starting with `(g, g)`.
    pub trace: Vec<(Func, Func)>,
    pub stats: FixpointStats,
}

impl GameResult {
    pub fn iterations(&self) -> usize {
        self.stats.steps
    }
}

/// `∀X. w(η(Z, X, Y))`.
pub fn controllable_preimage(arena: &mut SymbolicArena, w: Func) -> Func {
    let next = arena.substitute_next(w);
    let xs = arena.x_cube();
    arena.manager_mut().forall_cube(xs, next)
}

pub fn solve_symbolic(arena: &mut SymbolicArena, g: Func, mode: FixpointMode) -> GameResult {
    solve_symbolic_with(arena, g, mode, &Deadline::none()).expect("no deadline")
}

/// `t_0 = w_0 = g`, `t_{i+1} = t_i ∨ (¬w_i ∧ ∀X. w_i(η))`, `w_{i+1} = ∃Y. t_{i+1}`.
pub fn solve_symbolic_with(
    arena: &mut SymbolicArena,
    g: Func,
    mode: FixpointMode,
    deadline: &Deadline,
) -> Result<GameResult> {
    let init = arena.initial();
    let ys = arena.y_cube();
    let mut w = g;
    let mut t = g;
    let mut trace = vec![(w, t)];
    let mut stats = FixpointStats::default();
    loop {
        if arena.manager().is_true(w)
            || (mode == FixpointMode::EarlyExit && arena.manager_mut().is_implied(init, w))
        {
            break;
        }
        deadline.check()?;
        let pre = controllable_preimage(arena, w);
        stats.preimages += 1;
        let m = arena.manager_mut();
        let outside = m.not(w);
        let fresh = m.and(outside, pre);
        let next_t = m.or(t, fresh);
        let next_w = m.exists_cube(ys, next_t);
        if next_w == w {
            break;
        }
        stats.steps += 1;
        w = next_w;
        t = next_t;
        trace.push((w, t));
    }
    Ok(GameResult { w, t, trace, stats })
}

/// Output functions over the remaining variables witnessing `∃Y. t`.
///
/// Outputs are fixed one at a time in the order of `ys`; each takes value
/// false whenever that still admits a witness.
pub fn synthesize_outputs(m: &mut DdManager, t: Func, ys: &[Var]) -> Vec<Func> {
    let mut current = t;
    let mut out = Vec::with_capacity(ys.len());
    for (j, &y) in ys.iter().enumerate() {
        let later = m.cube(&ys[j + 1..]);
        let projected = m.exists_cube(later, current);
        let with_false = m.cofactor(projected, y, false);
        let f = m.not(with_false);
        let subst = std::iter::once((y, f)).collect();
        current = m.vector_compose(current, &subst);
        out.push(f);
    }
    out
}
