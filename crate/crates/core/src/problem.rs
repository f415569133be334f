//! Multi-objective synthesis problems.

use std::collections::BTreeSet;
use std::time::Duration;

use crate::cancel::Deadline;
use crate::dfa::{translate_with, Alphabet, Dfa, DEFAULT_STATE_LIMIT};
use crate::ltlf::Formula;
use crate::{Error, Result, Weight};

/// Default cap on the number of objectives a value ladder may range over.
pub const DEFAULT_OBJECTIVE_LIMIT: usize = 24;

/// Resource caps shared by every construction in a synthesis run.
#[derive(Clone, Debug)]
pub struct Limits {
    /// States per component automaton.
    pub dfa_states: usize,
    /// States of an explicit product.
    pub product_states: usize,
    /// Objectives a value ladder may range over.
    pub objectives: usize,
    pub deadline: Deadline,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            dfa_states: DEFAULT_STATE_LIMIT,
            product_states: DEFAULT_STATE_LIMIT,
            objectives: DEFAULT_OBJECTIVE_LIMIT,
            deadline: Deadline::none(),
        }
    }
}

impl Limits {
    pub fn with_timeout(budget: Duration) -> Self {
        Limits {
            deadline: Deadline::after(budget),
            ..Limits::default()
        }
    }
}

/// A named objective with its guarantee weight `G` and observation weight `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Objective<W> {
    pub name: String,
    pub formula: Formula,
    pub guarantee: W,
    pub observation: W,
}

impl<W: Weight> Objective<W> {
    pub fn new(name: impl Into<String>, formula: Formula, guarantee: W, observation: W) -> Self {
        Objective {
            name: name.into(),
            formula,
            guarantee,
            observation,
        }
    }
}

/// Objectives over a partitioned alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemSpec<W> {
    alphabet: Alphabet,
    objectives: Vec<Objective<W>>,
}

impl<W: Weight> ProblemSpec<W> {
    /// Validates names, atoms and weights.
    pub fn new(alphabet: Alphabet, objectives: Vec<Objective<W>>) -> Result<Self> {
        let mut names = BTreeSet::new();
        let atoms = alphabet.atom_set();
        for o in &objectives {
            if o.name.is_empty() {
                return Err(Error::Spec("objective with an empty name".into()));
            }
            if !names.insert(o.name.as_str()) {
                return Err(Error::Spec(format!("duplicate objective name `{}`", o.name)));
            }
            if let Some(a) = o.formula.atoms().difference(&atoms).next() {
                return Err(Error::Spec(format!(
                    "objective `{}` uses atom `{a}` that is neither an input nor an output",
                    o.name
                )));
            }
            for (kind, w) in [("G", &o.guarantee), ("V", &o.observation)] {
                if *w <= W::zero() {
                    return Err(Error::Spec(format!(
                        "objective `{}` has non-positive weight {kind}={w}",
                        o.name
                    )));
                }
            }
        }
        if objectives.len() > 64 {
            return Err(Error::Limit {
                what: "number of objectives",
                limit: 64,
            });
        }
        Ok(ProblemSpec {
            alphabet,
            objectives,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn objectives(&self) -> &[Objective<W>] {
        &self.objectives
    }

    pub fn len(&self) -> usize {
        self.objectives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objectives.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.objectives.iter().map(|o| o.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.objectives.iter().position(|o| o.name == name)
    }

    /// Resolves objective names to sorted indices.
    pub fn indices_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        let mut out = names
            .iter()
            .map(|n| {
                self.index_of(n.as_ref())
                    .ok_or_else(|| Error::Spec(format!("no objective named `{}`", n.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub fn guarantee_weights(&self) -> Vec<W> {
        self.objectives.iter().map(|o| o.guarantee.clone()).collect()
    }

    pub fn observation_weights(&self) -> Vec<W> {
        self.objectives.iter().map(|o| o.observation.clone()).collect()
    }

    /// Same objectives with `V` replaced by `G`.
    pub fn with_observation_as_guarantee(&self) -> Self {
        let mut s = self.clone();
        for o in &mut s.objectives {
            o.observation = o.guarantee.clone();
        }
        s
    }

    /// Translates every objective to a minimal DFA with sticky acceptance.
    pub fn compile(&self, limits: &Limits) -> Result<CompiledSpec<W>> {
        let components = self
            .objectives
            .iter()
            .map(|o| {
                limits.deadline.check()?;
                let d = translate_with(&o.formula, &self.alphabet, limits.dfa_states, &limits.deadline)?;
                Ok(d.stickify())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CompiledSpec {
            spec: self.clone(),
            components,
        })
    }
}

/// A problem together with one sticky minimal DFA per objective.
#[derive(Clone, Debug)]
pub struct CompiledSpec<W> {
    spec: ProblemSpec<W>,
    components: Vec<Dfa>,
}

impl<W: Weight> CompiledSpec<W> {
    pub fn spec(&self) -> &ProblemSpec<W> {
        &self.spec
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.spec.alphabet()
    }

    pub fn components(&self) -> &[Dfa] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Components of the objectives in `subset`, in index order.
    pub fn select(&self, subset: &[usize]) -> Vec<Dfa> {
        subset.iter().map(|&i| self.components[i].clone()).collect()
    }
}
