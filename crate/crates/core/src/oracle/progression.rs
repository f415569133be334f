//! Syntactic formula progression with canonical residuals.
//!
//! Formulas are put in negation normal form and interned. A residual is a
//! monotone DNF over obligations: interned subformulas that must hold on the
//! remaining suffix, plus the markers `NONEMPTY` and `EMPTY` constraining
//! whether the suffix has any instant. Cubes are kept as a minimal antichain,
//! which makes equal residuals syntactically equal.

use std::collections::{BTreeSet, HashMap};

use crate::dfa::{Alphabet, Letter};
use crate::ltlf::Formula;
use crate::{Error, Result};

pub(super) const NONEMPTY: u32 = 0;
pub(super) const EMPTY: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Nnf {
    True,
    False,
    Lit(u32, bool),
    And(u32, u32),
    Or(u32, u32),
    Next(u32),
    WeakNext(u32),
    Until(u32, u32),
    Release(u32, u32),
    Eventually(u32),
    Always(u32),
}

pub(super) type Cube = BTreeSet<u32>;

/// Minimal antichain of cubes; `{}` is false and `{{}}` is true.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(super) struct Residual(BTreeSet<Cube>);

impl Residual {
    pub fn constant(b: bool) -> Self {
        if b {
            Residual(BTreeSet::from([Cube::new()]))
        } else {
            Residual(BTreeSet::new())
        }
    }

    pub fn obligation(id: u32) -> Self {
        Residual(BTreeSet::from([Cube::from([id])]))
    }

    fn normalized(cubes: impl IntoIterator<Item = Cube>) -> Self {
        let mut cubes: Vec<Cube> = cubes
            .into_iter()
            .filter(|c| !(c.contains(&NONEMPTY) && c.contains(&EMPTY)))
            .collect();
        cubes.sort_by_key(|c| c.len());
        cubes.dedup();
        let mut kept: Vec<Cube> = Vec::new();
        for c in cubes {
            if !kept.iter().any(|k| k.is_subset(&c)) {
                kept.push(c);
            }
        }
        Residual(kept.into_iter().collect())
    }

    pub fn or(&self, other: &Residual) -> Residual {
        Residual::normalized(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn and(&self, other: &Residual) -> Residual {
        Residual::normalized(
            self.0
                .iter()
                .flat_map(|a| other.0.iter().map(move |b| a.union(b).copied().collect())),
        )
    }

    pub fn is_true(&self) -> bool {
        self.0.len() == 1 && self.0.iter().next().is_some_and(|c| c.is_empty())
    }

    pub fn is_false(&self) -> bool {
        self.0.is_empty()
    }

    /// Truth on the empty suffix.
    pub fn holds_at_end(&self) -> bool {
        self.0.iter().any(|c| c.iter().all(|&o| o == EMPTY))
    }
}

/// Interned subformulas and their one-step unfoldings.
pub(super) struct Progression {
    nodes: Vec<Nnf>,
    ids: HashMap<Nnf, u32>,
    memo: HashMap<(u32, Letter), Residual>,
}

impl Progression {
    pub fn new() -> Self {
        // ids 0 and 1 are the markers; their node entries are never read
        Progression {
            nodes: vec![Nnf::True, Nnf::True],
            ids: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    fn intern(&mut self, n: Nnf) -> u32 {
        if let Some(&id) = self.ids.get(&n) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(n.clone());
        self.ids.insert(n, id);
        id
    }

    /// Interns `f` (negated when `neg`) in negation normal form.
    pub fn add(&mut self, f: &Formula, neg: bool, alphabet: &Alphabet) -> Result<u32> {
        use Formula as F;
        let n = match (f, neg) {
            (F::True, false) | (F::False, true) => Nnf::True,
            (F::True, true) | (F::False, false) => Nnf::False,
            (F::Atom(p), _) => Nnf::Lit(
                alphabet.bit_of(p).ok_or_else(|| Error::UnknownAtom(p.clone()))? as u32,
                !neg,
            ),
            (F::Not(a), _) => return self.add(a, !neg, alphabet),
            (F::And(a, b), false) | (F::Or(a, b), true) => {
                Nnf::And(self.add(a, neg, alphabet)?, self.add(b, neg, alphabet)?)
            }
            (F::Or(a, b), false) | (F::And(a, b), true) => {
                Nnf::Or(self.add(a, neg, alphabet)?, self.add(b, neg, alphabet)?)
            }
            (F::Implies(a, b), false) => Nnf::Or(self.add(a, true, alphabet)?, self.add(b, false, alphabet)?),
            (F::Implies(a, b), true) => Nnf::And(self.add(a, false, alphabet)?, self.add(b, true, alphabet)?),
            (F::Next(a), false) | (F::WeakNext(a), true) => Nnf::Next(self.add(a, neg, alphabet)?),
            (F::WeakNext(a), false) | (F::Next(a), true) => Nnf::WeakNext(self.add(a, neg, alphabet)?),
            (F::Until(a, b), false) | (F::Release(a, b), true) => {
                Nnf::Until(self.add(a, neg, alphabet)?, self.add(b, neg, alphabet)?)
            }
            (F::Release(a, b), false) | (F::Until(a, b), true) => {
                Nnf::Release(self.add(a, neg, alphabet)?, self.add(b, neg, alphabet)?)
            }
            (F::Eventually(a), false) | (F::Always(a), true) => Nnf::Eventually(self.add(a, neg, alphabet)?),
            (F::Always(a), false) | (F::Eventually(a), true) => Nnf::Always(self.add(a, neg, alphabet)?),
        };
        Ok(self.intern(n))
    }

    /// What must hold on the rest of the trace after `id` reads `letter`.
    pub fn unfold(&mut self, id: u32, letter: Letter) -> Residual {
        match id {
            NONEMPTY => return Residual::constant(true),
            EMPTY => return Residual::constant(false),
            _ => {}
        }
        if let Some(r) = self.memo.get(&(id, letter)) {
            return r.clone();
        }
        let ne = Residual::obligation(NONEMPTY);
        let end = Residual::obligation(EMPTY);
        let me = Residual::obligation(id);
        let r = match self.nodes[id as usize].clone() {
            Nnf::True => Residual::constant(true),
            Nnf::False => Residual::constant(false),
            Nnf::Lit(bit, pos) => Residual::constant((letter >> bit & 1 == 1) == pos),
            Nnf::And(a, b) => self.unfold(a, letter).and(&self.unfold(b, letter)),
            Nnf::Or(a, b) => self.unfold(a, letter).or(&self.unfold(b, letter)),
            Nnf::Next(a) => ne.and(&Residual::obligation(a)),
            Nnf::WeakNext(a) => end.or(&Residual::obligation(a)),
            Nnf::Until(a, b) => {
                let stay = self.unfold(a, letter).and(&ne.and(&me));
                self.unfold(b, letter).or(&stay)
            }
            Nnf::Release(a, b) => {
                let free = self.unfold(a, letter).or(&end.or(&me));
                self.unfold(b, letter).and(&free)
            }
            Nnf::Eventually(a) => self.unfold(a, letter).or(&ne.and(&me)),
            Nnf::Always(a) => self.unfold(a, letter).and(&end.or(&me)),
        };
        self.memo.insert((id, letter), r.clone());
        r
    }

    /// Residual after reading `letter` with obligation `r`.
    pub fn step(&mut self, r: &Residual, letter: Letter) -> Residual {
        let mut out = Residual::constant(false);
        for cube in &r.0 {
            let mut acc = Residual::constant(true);
            for &o in cube {
                acc = acc.and(&self.unfold(o, letter));
                if acc.is_false() {
                    break;
                }
            }
            out = out.or(&acc);
            if out.is_true() {
                break;
            }
        }
        out
    }
}
