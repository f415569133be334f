//! LTLf to DFA by formula progression.
//!
//! A non-initial state is a residual obligation: a Boolean function over
//! "next-instant" obligation variables, one per `X ψ` argument and per
//! `ψ U χ` subformula of the desugared input. Residuals are kept as decision
//! diagrams, so equivalent residuals collapse to one state. A residual is
//! accepting when it holds with every obligation false, i.e. when the trace
//! may end here. The initial state is separate and never accepting, since the
//! empty trace satisfies nothing.

use std::collections::{HashMap, VecDeque};

use super::{Alphabet, Dfa, Letter, DEFAULT_STATE_LIMIT};
use crate::cancel::Deadline;
use crate::dd::{DdManager, Func, Var};
use crate::ltlf::{desugar, Formula};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Core {
    Atom(u32),
    True,
    False,
    Not(usize),
    And(usize, usize),
    Next(usize),
    Until(usize, usize),
}

struct Progression<'a> {
    alphabet: &'a Alphabet,
    nodes: Vec<Core>,
    ids: HashMap<Core, usize>,
    mgr: DdManager,
    obligation: HashMap<usize, Var>,
    var_node: Vec<usize>,
    memo: HashMap<(usize, Letter), Func>,
}

impl<'a> Progression<'a> {
    fn intern(&mut self, f: &Formula) -> Result<usize> {
        let node = match f {
            Formula::Atom(p) => Core::Atom(
                self.alphabet
                    .bit_of(p)
                    .ok_or_else(|| Error::UnknownAtom(p.clone()))? as u32,
            ),
            Formula::True => Core::True,
            Formula::False => Core::False,
            Formula::Not(a) => Core::Not(self.intern(a)?),
            Formula::And(a, b) => Core::And(self.intern(a)?, self.intern(b)?),
            Formula::Next(a) => Core::Next(self.intern(a)?),
            Formula::Until(a, b) => Core::Until(self.intern(a)?, self.intern(b)?),
            other => unreachable!("not in the core fragment: {other}"),
        };
        Ok(*self.ids.entry(node).or_insert_with(|| {
            self.nodes.push(node);
            self.nodes.len() - 1
        }))
    }

    fn obligation(&mut self, node: usize) -> Func {
        let v = match self.obligation.get(&node) {
            Some(v) => *v,
            None => {
                let v = self
                    .mgr
                    .new_var(format!("o{node}"))
                    .expect("obligation names are unique");
                self.obligation.insert(node, v);
                self.var_node.push(node);
                v
            }
        };
        self.mgr.var_func(v)
    }

    /// Residual of `node` after reading `letter` at an existing instant.
    fn progress(&mut self, node: usize, letter: Letter) -> Func {
        if let Some(&f) = self.memo.get(&(node, letter)) {
            return f;
        }
        let r = match self.nodes[node] {
            Core::Atom(bit) => self.mgr.constant(letter >> bit & 1 == 1),
            Core::True => self.mgr.const_true(),
            Core::False => self.mgr.const_false(),
            Core::Not(a) => {
                let fa = self.progress(a, letter);
                self.mgr.not(fa)
            }
            Core::And(a, b) => {
                let fa = self.progress(a, letter);
                if self.mgr.is_false(fa) {
                    fa
                } else {
                    let fb = self.progress(b, letter);
                    self.mgr.and(fa, fb)
                }
            }
            Core::Next(a) => self.obligation(a),
            Core::Until(a, b) => {
                let fb = self.progress(b, letter);
                let fa = self.progress(a, letter);
                let again = self.obligation(node);
                let keep = self.mgr.and(fa, again);
                self.mgr.or(fb, keep)
            }
        };
        self.memo.insert((node, letter), r);
        r
    }

    fn step(&mut self, residual: Func, letter: Letter) -> Func {
        let support: Vec<Var> = self.mgr.support(residual).into_iter().collect();
        let subst: HashMap<Var, Func> = support
            .into_iter()
            .map(|v| {
                let node = self.var_node[v.index()];
                (v, self.progress(node, letter))
            })
            .collect();
        self.mgr.vector_compose(residual, &subst)
    }

    fn accepting(&self, residual: Func) -> bool {
        self.mgr
            .eval_with(residual, |_| Some(false))
            .expect("total assignment")
    }
}

/// Translates `f` into a minimal DFA over `alphabet` with the default cap.
pub fn translate(f: &Formula, alphabet: &Alphabet) -> Result<Dfa> {
    translate_with(f, alphabet, DEFAULT_STATE_LIMIT, &Deadline::none())
}

/// Translates `f` into a minimal DFA over `alphabet`, failing when more than
/// `max_states` states are explored.
pub fn translate_with(
    f: &Formula,
    alphabet: &Alphabet,
    max_states: usize,
    deadline: &Deadline,
) -> Result<Dfa> {
    let core = desugar(f);
    let mut p = Progression {
        alphabet,
        nodes: Vec::new(),
        ids: HashMap::new(),
        mgr: DdManager::new(),
        obligation: HashMap::new(),
        var_node: Vec::new(),
        memo: HashMap::new(),
    };
    let root = p.intern(&core)?;
    let k = alphabet.num_letters() as u32;

    // state 0 is the initial state; residual states follow
    let mut residuals: Vec<Func> = vec![p.mgr.const_false()];
    let mut index: HashMap<Func, u32> = HashMap::new();
    let mut delta: Vec<u32> = vec![0; k as usize];
    let mut queue = VecDeque::new();

    let mut intern_state = |r: Func,
                            residuals: &mut Vec<Func>,
                            queue: &mut VecDeque<u32>,
                            delta: &mut Vec<u32>|
     -> Result<u32> {
        if let Some(&id) = index.get(&r) {
            return Ok(id);
        }
        let id = residuals.len() as u32;
        if residuals.len() >= max_states {
            return Err(Error::Limit {
                what: "DFA state count",
                limit: max_states,
            });
        }
        residuals.push(r);
        index.insert(r, id);
        delta.extend(std::iter::repeat(0).take(k as usize));
        queue.push_back(id);
        Ok(id)
    };

    for l in 0..k {
        let r = p.progress(root, l);
        let id = intern_state(r, &mut residuals, &mut queue, &mut delta)?;
        delta[l as usize] = id;
    }
    while let Some(q) = queue.pop_front() {
        deadline.check()?;
        let r = residuals[q as usize];
        for l in 0..k {
            let next = p.step(r, l);
            let id = intern_state(next, &mut residuals, &mut queue, &mut delta)?;
            delta[(q * k + l) as usize] = id;
        }
    }
    let accepting = residuals
        .iter()
        .enumerate()
        .map(|(i, &r)| i > 0 && p.accepting(r))
        .collect();
    Ok(super::minimize(&Dfa::from_parts(
        alphabet.clone(),
        0,
        delta,
        accepting,
    )))
}
