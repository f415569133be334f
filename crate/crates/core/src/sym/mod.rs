//! Component automata encoded over state variables, and their on-the-fly
//! symbolic product.
//!
//! State `q` of a component is encoded by the binary digits of its BFS index
//! from the initial state, least significant digit on the first variable.
//! Unused codes loop on themselves and are never accepting.

mod ladder;
mod targets;

use std::collections::{HashMap, HashSet, VecDeque};

use crate::dd::{DdManager, Func, Var};
use crate::dfa::{Alphabet, Dfa, Letter};

pub use ladder::ValueLadder;

/// Placement of state variables relative to atom variables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VarOrder {
    /// Inputs, outputs, then the state variables of each component in
    /// component order.
    #[default]
    AtomsFirst,
    /// State variables of each component in component order, then inputs,
    /// then outputs.
    StatesFirst,
}

/// One component automaton over its own state variables.
#[derive(Clone, Debug)]
pub struct SymbolicDfa {
    z: Vec<Var>,
    code_of: Vec<u32>,
    state_of: Vec<u32>,
    init: Func,
    eta: Vec<Func>,
    accept: Func,
}

/// Number of state variables needed for `n` states.
pub fn code_width(n: usize) -> usize {
    let mut bits = 0;
    while (1usize << bits) < n {
        bits += 1;
    }
    bits
}

fn bfs_numbering(d: &Dfa) -> Vec<u32> {
    let k = d.alphabet().num_letters() as u32;
    let mut code = vec![u32::MAX; d.num_states()];
    let mut next = 0;
    let mut queue = VecDeque::from([d.initial()]);
    code[d.initial() as usize] = next;
    next += 1;
    while let Some(q) = queue.pop_front() {
        for l in 0..k {
            let s = d.next(q, l);
            if code[s as usize] == u32::MAX {
                code[s as usize] = next;
                next += 1;
                queue.push_back(s);
            }
        }
    }
    // unreachable states, if any, keep valid codes after the reachable ones
    for c in code.iter_mut() {
        if *c == u32::MAX {
            *c = next;
            next += 1;
        }
    }
    code
}

/// Builds the function that selects `leaf(code)` on each assignment of `z`.
fn mux(m: &mut DdManager, z: &[Var], leaf: &mut dyn FnMut(&mut DdManager, u32) -> Func) -> Func {
    fn go(
        m: &mut DdManager,
        z: &[Var],
        bit: usize,
        prefix: u32,
        leaf: &mut dyn FnMut(&mut DdManager, u32) -> Func,
    ) -> Func {
        if bit == z.len() {
            return leaf(m, prefix);
        }
        let hi = go(m, z, bit + 1, prefix | 1 << bit, leaf);
        let lo = go(m, z, bit + 1, prefix, leaf);
        let v = m.var_func(z[bit]);
        m.ite(v, hi, lo)
    }
    go(m, z, 0, 0, leaf)
}

/// Builds the function over atom variables whose truth table is `table`,
/// indexed by letter.
fn letters_to_func(m: &mut DdManager, atoms: &[Var], table: &[bool]) -> Func {
    fn go(m: &mut DdManager, atoms: &[Var], table: &[bool], bit: usize, prefix: usize) -> Func {
        if bit == atoms.len() {
            return m.constant(table[prefix]);
        }
        let hi = go(m, atoms, table, bit + 1, prefix | 1 << bit);
        let lo = go(m, atoms, table, bit + 1, prefix);
        if hi == lo {
            return hi;
        }
        let v = m.var_func(atoms[bit]);
        m.ite(v, hi, lo)
    }
    go(m, atoms, table, 0, 0)
}

impl SymbolicDfa {
    /// Encodes `d` over the state variables `z`; `atoms` holds one variable
    /// per alphabet atom in letter-bit order.
    pub fn encode(d: &Dfa, m: &mut DdManager, z: Vec<Var>, atoms: &[Var]) -> Self {
        let n = d.num_states();
        assert_eq!(z.len(), code_width(n), "wrong number of state variables");
        assert_eq!(atoms.len(), d.alphabet().len());
        let code_of = bfs_numbering(d);
        let mut state_of = vec![u32::MAX; n];
        for (q, &c) in code_of.iter().enumerate() {
            state_of[c as usize] = q as u32;
        }
        let k = d.alphabet().num_letters() as u32;

        let literal_code = |m: &mut DdManager, code: u32| {
            let lits: Vec<Func> = z
                .iter()
                .enumerate()
                .map(|(b, &v)| m.literal(v, code >> b & 1 == 1))
                .collect();
            m.and_all(lits)
        };
        let init = literal_code(m, code_of[d.initial() as usize]);

        let eta = (0..z.len())
            .map(|bit| {
                let mut leaf = |m: &mut DdManager, code: u32| {
                    if code as usize >= n {
                        return m.constant(code >> bit & 1 == 1);
                    }
                    let q = state_of[code as usize];
                    let table: Vec<bool> = (0..k)
                        .map(|l| code_of[d.next(q, l) as usize] >> bit & 1 == 1)
                        .collect();
                    letters_to_func(m, atoms, &table)
                };
                mux(m, &z, &mut leaf)
            })
            .collect();

        let accept = mux(m, &z, &mut |m, code| {
            m.constant((code as usize) < n && d.is_accepting(state_of[code as usize]))
        });

        SymbolicDfa {
            z,
            code_of,
            state_of,
            init,
            eta,
            accept,
        }
    }

    pub fn z_vars(&self) -> &[Var] {
        &self.z
    }

    pub fn initial(&self) -> Func {
        self.init
    }

    pub fn eta(&self) -> &[Func] {
        &self.eta
    }

    pub fn accepting(&self) -> Func {
        self.accept
    }

    pub fn code_of(&self, q: u32) -> u32 {
        self.code_of[q as usize]
    }

    /// Inverse of [`Self::code_of`]; `None` on unused codes.
    pub fn state_of(&self, code: u32) -> Option<u32> {
        self.state_of.get(code as usize).copied()
    }

    pub fn num_states(&self) -> usize {
        self.code_of.len()
    }
}

#[derive(Clone, Copy, Debug)]
enum Role {
    Z(usize),
    Atom(usize),
}

/// A product of symbolic components sharing one manager.
///
/// A state is a vector of state-variable values, component after component.
#[derive(Debug)]
pub struct SymbolicArena {
    mgr: DdManager,
    alphabet: Alphabet,
    components: Vec<SymbolicDfa>,
    z: Vec<Var>,
    x: Vec<Var>,
    y: Vec<Var>,
    x_cube: Func,
    y_cube: Func,
    init: Func,
    eta: HashMap<Var, Func>,
    roles: Vec<Role>,
}

pub type Code = Vec<bool>;

impl SymbolicArena {
    pub fn new(alphabet: &Alphabet, components: &[Dfa]) -> Self {
        Self::with_order(alphabet, components, VarOrder::default())
    }

    pub fn with_order(alphabet: &Alphabet, components: &[Dfa], order: VarOrder) -> Self {
        let mut mgr = DdManager::new();
        let mut roles = Vec::new();
        let register_atoms = |mgr: &mut DdManager, roles: &mut Vec<Role>| {
            alphabet
                .atoms()
                .enumerate()
                .map(|(bit, a)| {
                    roles.push(Role::Atom(bit));
                    mgr.new_var(a.clone()).expect("atom names are unique")
                })
                .collect::<Vec<Var>>()
        };
        let mut atoms = Vec::new();
        if order == VarOrder::AtomsFirst {
            atoms = register_atoms(&mut mgr, &mut roles);
        }
        let mut zs: Vec<Vec<Var>> = Vec::new();
        let mut pos = 0;
        for (i, d) in components.iter().enumerate() {
            let w = code_width(d.num_states());
            zs.push(
                (0..w)
                    .map(|b| {
                        roles.push(Role::Z(pos));
                        pos += 1;
                        // `#` cannot occur in atom names
                        mgr.new_var(format!("#z{i}_{b}")).expect("fresh name")
                    })
                    .collect(),
            );
        }
        if order == VarOrder::StatesFirst {
            atoms = register_atoms(&mut mgr, &mut roles);
        }
        let comps: Vec<SymbolicDfa> = components
            .iter()
            .zip(zs)
            .map(|(d, z)| SymbolicDfa::encode(d, &mut mgr, z, &atoms))
            .collect();
        let nx = alphabet.num_inputs();
        let x = atoms[..nx].to_vec();
        let y = atoms[nx..].to_vec();
        let x_cube = mgr.cube(&x);
        let y_cube = mgr.cube(&y);
        let inits: Vec<Func> = comps.iter().map(|c| c.init).collect();
        let init = mgr.and_all(inits);
        let eta = comps
            .iter()
            .flat_map(|c| c.z.iter().copied().zip(c.eta.iter().copied()))
            .collect();
        let z = comps.iter().flat_map(|c| c.z.iter().copied()).collect();
        SymbolicArena {
            mgr,
            alphabet: alphabet.clone(),
            components: comps,
            z,
            x,
            y,
            x_cube,
            y_cube,
            init,
            eta,
            roles,
        }
    }

    pub fn manager(&self) -> &DdManager {
        &self.mgr
    }

    pub fn manager_mut(&mut self) -> &mut DdManager {
        &mut self.mgr
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn components(&self) -> &[SymbolicDfa] {
        &self.components
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn z_vars(&self) -> &[Var] {
        &self.z
    }

    pub fn x_vars(&self) -> &[Var] {
        &self.x
    }

    pub fn y_vars(&self) -> &[Var] {
        &self.y
    }

    pub fn x_cube(&self) -> Func {
        self.x_cube
    }

    pub fn y_cube(&self) -> Func {
        self.y_cube
    }

    /// Conjunction of the component initial-state formulas.
    pub fn initial(&self) -> Func {
        self.init
    }

    pub fn eta(&self) -> &HashMap<Var, Func> {
        &self.eta
    }

    /// Acceptance formula of component `i`.
    pub fn accepting(&self, i: usize) -> Func {
        self.components[i].accept
    }

    /// Substitutes the next-state functions into a formula over state variables.
    pub fn substitute_next(&mut self, f: Func) -> Func {
        let eta = std::mem::take(&mut self.eta);
        let r = self.mgr.vector_compose(f, &eta);
        self.eta = eta;
        r
    }

    fn value_of(&self, v: Var, code: &[bool], letter: Option<Letter>) -> Option<bool> {
        match self.roles[v.index()] {
            Role::Z(p) => Some(code[p]),
            Role::Atom(bit) => letter.map(|l| l >> bit & 1 == 1),
        }
    }

    /// Evaluates a formula over state variables at `code`.
    pub fn eval_state(&self, f: Func, code: &[bool]) -> bool {
        self.mgr
            .eval_with(f, |v| self.value_of(v, code, None))
            .expect("formula depends on atom variables")
    }

    /// Evaluates a formula over state and output variables.
    pub fn eval_state_output(&self, f: Func, code: &[bool], y: u32) -> bool {
        let letter = self.alphabet.join(0, y);
        let nx = self.alphabet.num_inputs();
        self.mgr
            .eval_with(f, |v| match self.roles[v.index()] {
                Role::Atom(bit) if bit < nx => None,
                _ => self.value_of(v, code, Some(letter)),
            })
            .expect("formula depends on input variables")
    }

    /// The initial code; BFS numbering gives every initial state code 0.
    pub fn initial_code(&self) -> Code {
        let code = vec![false; self.z.len()];
        debug_assert!(self.eval_state(self.init, &code));
        code
    }

    /// Successor of `code` under `letter`.
    pub fn step(&self, code: &[bool], letter: Letter) -> Code {
        self.z
            .iter()
            .map(|v| {
                self.mgr
                    .eval_with(self.eta[v], |u| self.value_of(u, code, Some(letter)))
                    .expect("total assignment")
            })
            .collect()
    }

    /// Code of a tuple of component states.
    pub fn code_of_tuple(&self, tuple: &[u32]) -> Code {
        let mut code = Vec::with_capacity(self.z.len());
        for (c, &q) in self.components.iter().zip(tuple) {
            let k = c.code_of(q);
            code.extend((0..c.z.len()).map(|b| k >> b & 1 == 1));
        }
        code
    }

    /// Component states of `code`; `None` if some component code is unused.
    pub fn tuple_of_code(&self, code: &[bool]) -> Option<Vec<u32>> {
        let mut pos = 0;
        self.components
            .iter()
            .map(|c| {
                let k = (0..c.z.len()).fold(0u32, |acc, b| acc | (code[pos + b] as u32) << b);
                pos += c.z.len();
                c.state_of(k)
            })
            .collect()
    }

    /// Codes reachable from the initial code, in BFS order.
    pub fn reachable_codes(&self) -> Vec<Code> {
        let k = self.alphabet.num_letters() as u32;
        let start = self.initial_code();
        let mut seen: HashSet<Code> = HashSet::from([start.clone()]);
        let mut order = vec![start];
        let mut i = 0;
        while i < order.len() {
            for l in 0..k {
                let n = self.step(&order[i], l);
                if seen.insert(n.clone()) {
                    order.push(n);
                }
            }
            i += 1;
        }
        order
    }

    /// Upper bound on the number of product states.
    pub fn state_space(&self) -> u128 {
        self.components
            .iter()
            .map(|c| c.num_states() as u128)
            .product()
    }
}
