//! Reduced ordered binary decision diagrams.
//!
//! A [`DdManager`] owns a unique table and an operation cache. Nodes are never
//! freed; the cache lives as long as the manager. There are no complement
//! edges, so two [`Func`]s of one manager denote the same Boolean function
//! exactly when they are equal.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU32, Ordering};

use thiserror::Error;

static NEXT_MANAGER_ID: AtomicU32 = AtomicU32::new(1);

const FALSE_NODE: u32 = 0;
const TRUE_NODE: u32 = 1;
const TERMINAL_VAR: u32 = u32::MAX;

/// A variable; its index is also its position in the global order
/// (smaller index = closer to the root).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Handle to a Boolean function inside one [`DdManager`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Func {
    node: u32,
    mgr: u32,
}

impl Func {
    /// Raw node index, stable for the lifetime of the manager.
    pub fn node_id(self) -> u32 {
        self.node
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DdError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` is already declared")]
    DuplicateVariable(String),
    #[error("function belongs to a different manager")]
    ManagerMismatch,
    #[error("no substitution given for support variable `{0}`")]
    MissingSubstitution(String),
    #[error("assignment does not cover support variable `{0}`")]
    IncompleteAssignment(String),
}

/// Binary Boolean operators accepted by [`DdManager::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
    Xor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum CacheOp {
    And,
    Or,
    Xor,
    Not,
    Ite,
    Exists,
    Forall,
    Restrict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    lo: u32,
    hi: u32,
}

#[derive(Debug)]
pub struct DdManager {
    id: u32,
    names: Vec<String>,
    by_name: HashMap<String, Var>,
    nodes: Vec<Node>,
    unique: HashMap<Node, u32>,
    cache: HashMap<(CacheOp, u32, u32, u32), u32>,
}

impl Default for DdManager {
    fn default() -> Self {
        Self::new()
    }
}

impl DdManager {
    pub fn new() -> Self {
        let terminal = |_| Node {
            var: TERMINAL_VAR,
            lo: 0,
            hi: 0,
        };
        DdManager {
            id: NEXT_MANAGER_ID.fetch_add(1, Ordering::Relaxed),
            names: Vec::new(),
            by_name: HashMap::new(),
            nodes: (0..2).map(terminal).collect(),
            unique: HashMap::new(),
            cache: HashMap::new(),
        }
    }

    /// Appends a variable at the bottom of the order.
    pub fn new_var(&mut self, name: impl Into<String>) -> Result<Var, DdError> {
        let name = name.into();
        if self.by_name.contains_key(&name) {
            return Err(DdError::DuplicateVariable(name));
        }
        let v = Var(self.names.len() as u32);
        self.by_name.insert(name.clone(), v);
        self.names.push(name);
        Ok(v)
    }

    pub fn var_count(&self) -> usize {
        self.names.len()
    }

    pub fn var_name(&self, v: Var) -> &str {
        &self.names[v.index()]
    }

    pub fn lookup(&self, name: &str) -> Result<Var, DdError> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| DdError::UnknownVariable(name.to_string()))
    }

    /// Projection function of a named variable.
    pub fn var(&mut self, name: &str) -> Result<Func, DdError> {
        let v = self.lookup(name)?;
        Ok(self.var_func(v))
    }

    pub fn var_func(&mut self, v: Var) -> Func {
        assert!(v.index() < self.names.len(), "variable out of range");
        let n = self.mk(v.0, FALSE_NODE, TRUE_NODE);
        self.wrap(n)
    }

    pub fn literal(&mut self, v: Var, positive: bool) -> Func {
        let n = if positive {
            self.mk(v.0, FALSE_NODE, TRUE_NODE)
        } else {
            self.mk(v.0, TRUE_NODE, FALSE_NODE)
        };
        self.wrap(n)
    }

    pub fn const_true(&self) -> Func {
        self.wrap(TRUE_NODE)
    }

    pub fn const_false(&self) -> Func {
        self.wrap(FALSE_NODE)
    }

    pub fn constant(&self, value: bool) -> Func {
        if value {
            self.const_true()
        } else {
            self.const_false()
        }
    }

    pub fn is_true(&self, f: Func) -> bool {
        self.own(f) == TRUE_NODE
    }

    pub fn is_false(&self, f: Func) -> bool {
        self.own(f) == FALSE_NODE
    }

    /// Number of nodes ever allocated, terminals included.
    pub fn allocated(&self) -> usize {
        self.nodes.len()
    }

    fn wrap(&self, node: u32) -> Func {
        Func { node, mgr: self.id }
    }

    fn own(&self, f: Func) -> u32 {
        assert_eq!(f.mgr, self.id, "function belongs to a different manager");
        f.node
    }

    /// Checks that `f` was produced by this manager.
    pub fn check(&self, f: Func) -> Result<(), DdError> {
        if f.mgr == self.id {
            Ok(())
        } else {
            Err(DdError::ManagerMismatch)
        }
    }

    fn mk(&mut self, var: u32, lo: u32, hi: u32) -> u32 {
        if lo == hi {
            return lo;
        }
        let node = Node { var, lo, hi };
        if let Some(&id) = self.unique.get(&node) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        self.unique.insert(node, id);
        id
    }

    #[inline]
    fn level(&self, n: u32) -> u32 {
        self.nodes[n as usize].var
    }

    /// Cofactors of `n` with respect to the variable at `level`.
    #[inline]
    fn split(&self, n: u32, level: u32) -> (u32, u32) {
        let node = self.nodes[n as usize];
        if node.var == level {
            (node.lo, node.hi)
        } else {
            (n, n)
        }
    }

    // ---- Boolean connectives ------------------------------------------------

    /// Checked binary apply.
    pub fn apply(&mut self, op: BinOp, f: Func, g: Func) -> Result<Func, DdError> {
        self.check(f)?;
        self.check(g)?;
        let n = match op {
            BinOp::And => self.and_rec(f.node, g.node),
            BinOp::Or => self.or_rec(f.node, g.node),
            BinOp::Xor => self.xor_rec(f.node, g.node),
        };
        Ok(self.wrap(n))
    }

    pub fn and(&mut self, f: Func, g: Func) -> Func {
        let (a, b) = (self.own(f), self.own(g));
        let n = self.and_rec(a, b);
        self.wrap(n)
    }

    pub fn or(&mut self, f: Func, g: Func) -> Func {
        let (a, b) = (self.own(f), self.own(g));
        let n = self.or_rec(a, b);
        self.wrap(n)
    }

    pub fn xor(&mut self, f: Func, g: Func) -> Func {
        let (a, b) = (self.own(f), self.own(g));
        let n = self.xor_rec(a, b);
        self.wrap(n)
    }

    pub fn not(&mut self, f: Func) -> Func {
        let a = self.own(f);
        let n = self.not_rec(a);
        self.wrap(n)
    }

    pub fn implies(&mut self, f: Func, g: Func) -> Func {
        let nf = self.not(f);
        self.or(nf, g)
    }

    pub fn and_all(&mut self, fs: impl IntoIterator<Item = Func>) -> Func {
        let mut acc = self.const_true();
        for f in fs {
            acc = self.and(acc, f);
        }
        acc
    }

    pub fn or_all(&mut self, fs: impl IntoIterator<Item = Func>) -> Func {
        let mut acc = self.const_false();
        for f in fs {
            acc = self.or(acc, f);
        }
        acc
    }

    pub fn ite(&mut self, c: Func, t: Func, e: Func) -> Func {
        let (c, t, e) = (self.own(c), self.own(t), self.own(e));
        let n = self.ite_rec(c, t, e);
        self.wrap(n)
    }

    fn not_rec(&mut self, f: u32) -> u32 {
        match f {
            FALSE_NODE => return TRUE_NODE,
            TRUE_NODE => return FALSE_NODE,
            _ => {}
        }
        let key = (CacheOp::Not, f, 0, 0);
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let Node { var, lo, hi } = self.nodes[f as usize];
        let l = self.not_rec(lo);
        let h = self.not_rec(hi);
        let r = self.mk(var, l, h);
        self.cache.insert(key, r);
        r
    }

    fn and_rec(&mut self, f: u32, g: u32) -> u32 {
        if f == FALSE_NODE || g == FALSE_NODE {
            return FALSE_NODE;
        }
        if f == TRUE_NODE || f == g {
            return g;
        }
        if g == TRUE_NODE {
            return f;
        }
        let (f, g) = if f < g { (f, g) } else { (g, f) };
        self.binary(CacheOp::And, f, g, Self::and_rec)
    }

    fn or_rec(&mut self, f: u32, g: u32) -> u32 {
        if f == TRUE_NODE || g == TRUE_NODE {
            return TRUE_NODE;
        }
        if f == FALSE_NODE || f == g {
            return g;
        }
        if g == FALSE_NODE {
            return f;
        }
        let (f, g) = if f < g { (f, g) } else { (g, f) };
        self.binary(CacheOp::Or, f, g, Self::or_rec)
    }

    fn xor_rec(&mut self, f: u32, g: u32) -> u32 {
        if f == g {
            return FALSE_NODE;
        }
        if f == FALSE_NODE {
            return g;
        }
        if g == FALSE_NODE {
            return f;
        }
        if f == TRUE_NODE {
            return self.not_rec(g);
        }
        if g == TRUE_NODE {
            return self.not_rec(f);
        }
        let (f, g) = if f < g { (f, g) } else { (g, f) };
        self.binary(CacheOp::Xor, f, g, Self::xor_rec)
    }

    fn binary(&mut self, op: CacheOp, f: u32, g: u32, rec: fn(&mut Self, u32, u32) -> u32) -> u32 {
        let key = (op, f, g, 0);
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let top = self.level(f).min(self.level(g));
        let (f0, f1) = self.split(f, top);
        let (g0, g1) = self.split(g, top);
        let lo = rec(self, f0, g0);
        let hi = rec(self, f1, g1);
        let r = self.mk(top, lo, hi);
        self.cache.insert(key, r);
        r
    }

    fn ite_rec(&mut self, c: u32, t: u32, e: u32) -> u32 {
        if c == TRUE_NODE || t == e {
            return t;
        }
        if c == FALSE_NODE {
            return e;
        }
        if t == TRUE_NODE && e == FALSE_NODE {
            return c;
        }
        if t == FALSE_NODE && e == TRUE_NODE {
            return self.not_rec(c);
        }
        if t == TRUE_NODE {
            return self.or_rec(c, e);
        }
        if e == FALSE_NODE {
            return self.and_rec(c, t);
        }
        let key = (CacheOp::Ite, c, t, e);
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let top = self.level(c).min(self.level(t)).min(self.level(e));
        let (c0, c1) = self.split(c, top);
        let (t0, t1) = self.split(t, top);
        let (e0, e1) = self.split(e, top);
        let lo = self.ite_rec(c0, t0, e0);
        let hi = self.ite_rec(c1, t1, e1);
        let r = self.mk(top, lo, hi);
        self.cache.insert(key, r);
        r
    }

    // ---- quantification ----------------------------------------------------

    /// Positive cube over `vars`, used as the cache key of a variable set.
    pub fn cube(&mut self, vars: &[Var]) -> Func {
        let mut sorted: Vec<u32> = vars.iter().map(|v| v.0).collect();
        sorted.sort_unstable();
        sorted.dedup();
        let mut n = TRUE_NODE;
        for &v in sorted.iter().rev() {
            n = self.mk(v, FALSE_NODE, n);
        }
        self.wrap(n)
    }

    /// Existential quantification of `vars` in `f`.
    pub fn exists(&mut self, vars: &[Var], f: Func) -> Func {
        let cube = self.cube(vars);
        self.exists_cube(cube, f)
    }

    /// Universal quantification of `vars` in `f`.
    pub fn forall(&mut self, vars: &[Var], f: Func) -> Func {
        let cube = self.cube(vars);
        self.forall_cube(cube, f)
    }

    /// Existential quantification with a prebuilt cube (see [`Self::cube`]).
    pub fn exists_cube(&mut self, cube: Func, f: Func) -> Func {
        let (c, f) = (self.own(cube), self.own(f));
        let n = self.quant_rec(CacheOp::Exists, f, c);
        self.wrap(n)
    }

    pub fn forall_cube(&mut self, cube: Func, f: Func) -> Func {
        let (c, f) = (self.own(cube), self.own(f));
        let n = self.quant_rec(CacheOp::Forall, f, c);
        self.wrap(n)
    }

    fn quant_rec(&mut self, op: CacheOp, f: u32, mut cube: u32) -> u32 {
        if f <= TRUE_NODE {
            return f;
        }
        let fv = self.level(f);
        while cube != TRUE_NODE && self.level(cube) < fv {
            cube = self.nodes[cube as usize].hi;
        }
        if cube == TRUE_NODE {
            return f;
        }
        let key = (op, f, cube, 0);
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let Node { var, lo, hi } = self.nodes[f as usize];
        let r = if self.level(cube) == var {
            let rest = self.nodes[cube as usize].hi;
            let l = self.quant_rec(op, lo, rest);
            // short-circuit on the absorbing element
            match (op, l) {
                (CacheOp::Exists, TRUE_NODE) => TRUE_NODE,
                (CacheOp::Forall, FALSE_NODE) => FALSE_NODE,
                _ => {
                    let h = self.quant_rec(op, hi, rest);
                    if op == CacheOp::Exists {
                        self.or_rec(l, h)
                    } else {
                        self.and_rec(l, h)
                    }
                }
            }
        } else {
            let l = self.quant_rec(op, lo, cube);
            let h = self.quant_rec(op, hi, cube);
            self.mk(var, l, h)
        };
        self.cache.insert(key, r);
        r
    }

    // ---- substitution ------------------------------------------------------

    /// Shannon cofactor `f[v := value]`.
    pub fn cofactor(&mut self, f: Func, v: Var, value: bool) -> Func {
        let f = self.own(f);
        let n = self.restrict_rec(f, v.0, value);
        self.wrap(n)
    }

    fn restrict_rec(&mut self, f: u32, v: u32, value: bool) -> u32 {
        if f <= TRUE_NODE {
            return f;
        }
        let Node { var, lo, hi } = self.nodes[f as usize];
        if var > v {
            return f;
        }
        if var == v {
            return if value { hi } else { lo };
        }
        let key = (CacheOp::Restrict, f, v, value as u32);
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let l = self.restrict_rec(lo, v, value);
        let h = self.restrict_rec(hi, v, value);
        let r = self.mk(var, l, h);
        self.cache.insert(key, r);
        r
    }

    /// Simultaneous substitution of variables by functions. Variables without
    /// an entry are left unchanged.
    pub fn vector_compose(&mut self, f: Func, subst: &HashMap<Var, Func>) -> Func {
        let root = self.own(f);
        let table: Vec<Option<u32>> = (0..self.names.len())
            .map(|i| subst.get(&Var(i as u32)).map(|g| self.own(*g)))
            .collect();
        let mut memo = HashMap::new();
        let n = self.compose_rec(root, &table, &mut memo);
        self.wrap(n)
    }

    /// Like [`Self::vector_compose`], but every variable in the support of `f`
    /// must be substituted.
    pub fn vector_compose_total(
        &mut self,
        f: Func,
        subst: &HashMap<Var, Func>,
    ) -> Result<Func, DdError> {
        self.check(f)?;
        for g in subst.values() {
            self.check(*g)?;
        }
        if let Some(v) = self.support(f).into_iter().find(|v| !subst.contains_key(v)) {
            return Err(DdError::MissingSubstitution(self.var_name(v).to_string()));
        }
        Ok(self.vector_compose(f, subst))
    }

    fn compose_rec(&mut self, f: u32, table: &[Option<u32>], memo: &mut HashMap<u32, u32>) -> u32 {
        if f <= TRUE_NODE {
            return f;
        }
        if let Some(&r) = memo.get(&f) {
            return r;
        }
        let Node { var, lo, hi } = self.nodes[f as usize];
        let l = self.compose_rec(lo, table, memo);
        let h = self.compose_rec(hi, table, memo);
        let c = match table[var as usize] {
            Some(g) => g,
            None => self.mk(var, FALSE_NODE, TRUE_NODE),
        };
        let r = self.ite_rec(c, h, l);
        memo.insert(f, r);
        r
    }

    // ---- queries -----------------------------------------------------------

    /// `f ⇒ g` holds for every assignment.
    pub fn is_implied(&mut self, f: Func, g: Func) -> bool {
        let ng = self.not(g);
        let both = self.and(f, ng);
        self.is_false(both)
    }

    /// Variables `f` depends on.
    pub fn support(&self, f: Func) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.own(f)];
        while let Some(n) = stack.pop() {
            if n <= TRUE_NODE || !seen.insert(n) {
                continue;
            }
            let node = self.nodes[n as usize];
            out.insert(Var(node.var));
            stack.push(node.lo);
            stack.push(node.hi);
        }
        out
    }

    /// Evaluates `f` under `assignment`, which must give a value to every
    /// variable on the path taken.
    pub fn eval_with(
        &self,
        f: Func,
        assignment: impl Fn(Var) -> Option<bool>,
    ) -> Result<bool, DdError> {
        let mut n = self.own(f);
        while n > TRUE_NODE {
            let node = self.nodes[n as usize];
            let value = assignment(Var(node.var)).ok_or_else(|| {
                DdError::IncompleteAssignment(self.names[node.var as usize].clone())
            })?;
            n = if value { node.hi } else { node.lo };
        }
        Ok(n == TRUE_NODE)
    }

    /// Evaluates `f` under a dense assignment indexed by variable.
    pub fn eval(&self, f: Func, assignment: &[bool]) -> Result<bool, DdError> {
        self.eval_with(f, |v| assignment.get(v.index()).copied())
    }

    /// Evaluates `f` under a sparse assignment.
    pub fn eval_map(&self, f: Func, assignment: &HashMap<Var, bool>) -> Result<bool, DdError> {
        self.eval_with(f, |v| assignment.get(&v).copied())
    }

    /// Number of distinct nodes reachable from `f`, terminals included.
    pub fn size(&self, f: Func) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.own(f)];
        while let Some(n) = stack.pop() {
            if !seen.insert(n) || n <= TRUE_NODE {
                continue;
            }
            let node = self.nodes[n as usize];
            stack.push(node.lo);
            stack.push(node.hi);
        }
        seen.len()
    }

    /// Number of satisfying assignments over the first `nvars` variables
    /// (which must include the support).
    pub fn sat_count(&self, f: Func, nvars: usize) -> u128 {
        fn rec(m: &DdManager, n: u32, nvars: u32, memo: &mut HashMap<u32, u128>) -> (u128, u32) {
            // returns count over variables [level(n), nvars)
            if n == FALSE_NODE {
                return (0, nvars);
            }
            if n == TRUE_NODE {
                return (1, nvars);
            }
            let node = m.nodes[n as usize];
            if let Some(&c) = memo.get(&n) {
                return (c, node.var);
            }
            let (cl, ll) = rec(m, node.lo, nvars, memo);
            let (ch, lh) = rec(m, node.hi, nvars, memo);
            let c = (cl << (ll - node.var - 1)) + (ch << (lh - node.var - 1));
            memo.insert(n, c);
            (c, node.var)
        }
        let root = self.own(f);
        let mut memo = HashMap::new();
        let (c, l) = rec(self, root, nvars as u32, &mut memo);
        c << l
    }

    /// Nested if-then-else rendering, for debugging.
    pub fn to_ite_string(&self, f: Func) -> String {
        fn rec(m: &DdManager, n: u32, out: &mut String) {
            match n {
                FALSE_NODE => out.push('0'),
                TRUE_NODE => out.push('1'),
                _ => {
                    let node = m.nodes[n as usize];
                    let _ = write!(out, "ite({}, ", m.names[node.var as usize]);
                    rec(m, node.hi, out);
                    out.push_str(", ");
                    rec(m, node.lo, out);
                    out.push(')');
                }
            }
        }
        let mut s = String::new();
        rec(self, self.own(f), &mut s);
        s
    }

    /// Checks the ordered/reduced/canonical invariants over the whole table.
    pub fn check_invariants(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.nodes.iter().enumerate().skip(2).all(|(_, n)| {
            n.lo != n.hi
                && self.nodes[n.lo as usize].var > n.var
                && self.nodes[n.hi as usize].var > n.var
                && seen.insert(*n)
        })
    }
}
