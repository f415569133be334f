//! LTLf formulas: abstract syntax, concrete syntax, desugaring and the
//! finite-trace semantics every automaton in this crate is checked against.

mod parser;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use parser::{parse, parse_unchecked, ParseError};

/// An LTLf formula.
///
/// Derived operators (`Or`, `Implies`, `WeakNext`, `Release`, `Eventually`,
/// `Always`) are kept as distinct node kinds; [`desugar`] rewrites them into
/// the core fragment.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    True,
    False,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// Strong next: fails at the last instant.
    Next(Box<Formula>),
    /// Weak next: holds at the last instant.
    WeakNext(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Always(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn weak_next(f: Formula) -> Self {
        Formula::WeakNext(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Self {
        Formula::Release(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Box::new(f))
    }

    pub fn always(f: Formula) -> Self {
        Formula::Always(Box::new(f))
    }

    /// Direct children, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Atom(_) | True | False => vec![],
            Not(a) | Next(a) | WeakNext(a) | Eventually(a) | Always(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) | Release(a, b) => vec![a, b],
        }
    }

    /// Number of syntactic node occurrences.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    /// Atom names occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        if let Formula::Atom(name) = self {
            out.insert(name.clone());
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// True when the formula only uses atom, tt, ff, not, and, next, until.
    pub fn is_core(&self) -> bool {
        use Formula::*;
        match self {
            Atom(_) | True | False => true,
            Not(a) | Next(a) => a.is_core(),
            And(a, b) | Until(a, b) => a.is_core() && b.is_core(),
            _ => false,
        }
    }

    /// Splits nested top-level conjunctions into their conjuncts.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::And(a, b) => {
                let mut v = a.conjuncts();
                v.extend(b.conjuncts());
                v
            }
            other => vec![other],
        }
    }
}

/// Size of a formula as a count of syntactic node occurrences.
pub fn size(f: &Formula) -> usize {
    f.size()
}

/// Rewrites derived operators into the core fragment
/// {atom, tt, ff, not, and, next, until}.
pub fn desugar(f: &Formula) -> Formula {
    use Formula as F;
    match f {
        F::Atom(_) | F::True | F::False => f.clone(),
        F::Not(a) => F::not(desugar(a)),
        F::And(a, b) => F::and(desugar(a), desugar(b)),
        F::Or(a, b) => F::not(F::and(F::not(desugar(a)), F::not(desugar(b)))),
        F::Implies(a, b) => F::not(F::and(desugar(a), F::not(desugar(b)))),
        F::Next(a) => F::next(desugar(a)),
        F::WeakNext(a) => F::not(F::next(F::not(desugar(a)))),
        F::Until(a, b) => F::until(desugar(a), desugar(b)),
        F::Release(a, b) => F::not(F::until(F::not(desugar(a)), F::not(desugar(b)))),
        F::Eventually(a) => F::until(F::True, desugar(a)),
        F::Always(a) => F::not(F::until(F::True, F::not(desugar(a)))),
    }
}

/// A finite trace: one interpretation (set of true atoms) per instant.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FiniteTrace {
    steps: Vec<BTreeSet<String>>,
}

impl FiniteTrace {
    pub fn new(steps: Vec<BTreeSet<String>>) -> Self {
        FiniteTrace { steps }
    }

    /// Builds a trace from per-instant lists of true atoms.
    pub fn from_lists<S: AsRef<str>>(steps: &[&[S]]) -> Self {
        FiniteTrace {
            steps: steps
                .iter()
                .map(|s| s.iter().map(|a| a.as_ref().to_string()).collect())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Index of the last instant. `None` for the empty trace.
    pub fn last(&self) -> Option<usize> {
        self.steps.len().checked_sub(1)
    }

    pub fn steps(&self) -> &[BTreeSet<String>] {
        &self.steps
    }

    pub fn push(&mut self, step: BTreeSet<String>) {
        self.steps.push(step);
    }

    /// The prefix up to and including instant `k`.
    pub fn prefix(&self, k: usize) -> FiniteTrace {
        FiniteTrace {
            steps: self.steps[..=k.min(self.steps.len().saturating_sub(1))].to_vec(),
        }
    }
}

impl fmt::Display for FiniteTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, a) in s.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, ">")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("position {index} is outside a trace of length {len}")]
    OutOfRange { index: usize, len: usize },
}

/// Whether `f` holds at instant `i` of `trace`.
pub fn evaluate(f: &Formula, trace: &FiniteTrace, i: usize) -> Result<bool, EvalError> {
    if i >= trace.len() {
        return Err(EvalError::OutOfRange {
            index: i,
            len: trace.len(),
        });
    }
    Ok(holds(f, trace.steps(), i))
}

/// `trace ⊨ f`. The empty trace satisfies nothing.
pub fn satisfies(f: &Formula, trace: &FiniteTrace) -> bool {
    !trace.is_empty() && holds(f, trace.steps(), 0)
}

fn holds(f: &Formula, steps: &[BTreeSet<String>], i: usize) -> bool {
    use Formula::*;
    let last = steps.len() - 1;
    match f {
        Atom(p) => steps[i].contains(p),
        True => true,
        False => false,
        Not(a) => !holds(a, steps, i),
        And(a, b) => holds(a, steps, i) && holds(b, steps, i),
        Or(a, b) => holds(a, steps, i) || holds(b, steps, i),
        Implies(a, b) => !holds(a, steps, i) || holds(b, steps, i),
        Next(a) => i < last && holds(a, steps, i + 1),
        WeakNext(a) => i == last || holds(a, steps, i + 1),
        Until(a, b) => {
            for j in i..=last {
                if holds(b, steps, j) {
                    return true;
                }
                if !holds(a, steps, j) {
                    return false;
                }
            }
            false
        }
        Release(a, b) => {
            // b holds up to and including the first instant where a holds,
            // or b holds until the end.
            for j in i..=last {
                if !holds(b, steps, j) {
                    return false;
                }
                if holds(a, steps, j) {
                    return true;
                }
            }
            true
        }
        Eventually(a) => (i..=last).any(|j| holds(a, steps, j)),
        Always(a) => (i..=last).all(|j| holds(a, steps, j)),
    }
}

fn needs_parens(f: &Formula) -> bool {
    use Formula::*;
    matches!(
        f,
        And(..) | Or(..) | Implies(..) | Until(..) | Release(..)
    )
}

impl fmt::Display for Formula {
    /// Prints in the concrete syntax accepted by [`parse`]. Binary nodes are
    /// always parenthesized, so printing then parsing yields the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        let unary = |f: &mut fmt::Formatter<'_>, op: &str, a: &Formula| {
            if needs_parens(a) || op == "!" {
                write!(f, "{op}{a}")
            } else {
                write!(f, "{op} {a}")
            }
        };
        match self {
            Atom(p) => write!(f, "{p}"),
            True => write!(f, "true"),
            False => write!(f, "false"),
            Not(a) => unary(f, "!", a),
            Next(a) => unary(f, "X", a),
            WeakNext(a) => unary(f, "N", a),
            Eventually(a) => unary(f, "F", a),
            Always(a) => unary(f, "G", a),
            And(a, b) => write!(f, "({a} & {b})"),
            Or(a, b) => write!(f, "({a} | {b})"),
            Implies(a, b) => write!(f, "({a} -> {b})"),
            Until(a, b) => write!(f, "({a} U {b})"),
            Release(a, b) => write!(f, "({a} R {b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Formula as F;

    fn a() -> Formula {
        F::atom("a")
    }

    fn b() -> Formula {
        F::atom("b")
    }

    #[test]
    fn desugar_examples() {
        assert_eq!(
            desugar(&F::weak_next(a())),
            F::not(F::next(F::not(a())))
        );
        assert_eq!(desugar(&F::eventually(a())), F::until(F::True, a()));
        assert_eq!(desugar(&a()), a());
    }

    #[test]
    fn evaluate_examples() {
        let t = FiniteTrace::from_lists(&[&["a"]]);
        assert!(!evaluate(&F::next(F::True), &t, 0).unwrap());

        let t = FiniteTrace::from_lists(&[&["a"], &["a"], &["b"]]);
        assert!(evaluate(&F::until(a(), b()), &t, 0).unwrap());

        let t = FiniteTrace::from_lists::<&str>(&[&["a"], &[]]);
        assert!(!evaluate(&F::always(a()), &t, 0).unwrap());
    }

    #[test]
    fn evaluate_rejects_out_of_range() {
        let t = FiniteTrace::from_lists(&[&["a"]]);
        assert_eq!(
            evaluate(&a(), &t, 1),
            Err(EvalError::OutOfRange { index: 1, len: 1 })
        );
        assert!(evaluate(&a(), &FiniteTrace::default(), 0).is_err());
        assert!(!satisfies(&F::True, &FiniteTrace::default()));
    }

    #[test]
    fn size_counts_occurrences() {
        assert_eq!(size(&a()), 1);
        assert_eq!(size(&F::until(a(), b())), 3);
        // Hand count: the and-node plus two separate occurrences of `a`.
        assert_eq!(size(&F::and(a(), a())), 3);
    }

    #[test]
    fn weak_next_holds_at_last_instant() {
        let t = FiniteTrace::from_lists::<&str>(&[&[]]);
        assert!(evaluate(&F::weak_next(F::False), &t, 0).unwrap());
        assert!(evaluate(&desugar(&F::weak_next(F::False)), &t, 0).unwrap());
    }

    #[test]
    fn release_semantics() {
        // b R a: a holds until (and including) b, or forever.
        let t = FiniteTrace::from_lists::<&str>(&[&["a"], &["a", "b"], &[]]);
        assert!(evaluate(&F::release(b(), a()), &t, 0).unwrap());
        let t = FiniteTrace::from_lists::<&str>(&[&["a"], &[], &["b"]]);
        assert!(!evaluate(&F::release(b(), a()), &t, 0).unwrap());
    }

    #[test]
    fn conjunct_split() {
        let f = F::and(F::and(a(), b()), F::eventually(a()));
        assert_eq!(f.conjuncts().len(), 3);
        assert_eq!(a().conjuncts().len(), 1);
    }

    #[test]
    fn display_round_trips_through_parser() {
        let f = F::until(
            F::not(a()),
            F::and(F::next(b()), F::always(F::or(a(), F::weak_next(b())))),
        );
        let printed = f.to_string();
        assert_eq!(parse_unchecked(&printed).unwrap(), f);
    }
}
