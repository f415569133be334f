//! Explicit deterministic finite automata over `2^AP`.
//!
//! Letters are bit vectors over a fixed atom order: input atoms first, then
//! output atoms, each group sorted alphabetically. Bit `i` of a letter is the
//! value of atom `i`.

mod dot;
mod minimize;
mod product;
mod translate;

use std::collections::BTreeSet;

use crate::ltlf::FiniteTrace;
use crate::{Error, Result};

pub use dot::{dfa_to_dot, product_to_dot};
pub use minimize::minimize;
pub use product::{product, product_with, ProductDfa};
pub use translate::{translate, translate_with};

/// Largest alphabet (number of atoms) the explicit constructions accept.
pub const MAX_ATOMS: usize = 20;

/// Default cap on the number of states of any constructed automaton.
pub const DEFAULT_STATE_LIMIT: usize = 1_000_000;

/// A letter of `2^AP`, as a bit vector over the alphabet's atom order.
pub type Letter = u32;

/// Input and output atoms with their bit positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    inputs: Vec<String>,
    outputs: Vec<String>,
}

impl Alphabet {
    /// Sorts both groups; fails if they overlap or the alphabet is too large.
    pub fn new<S: AsRef<str>>(inputs: &[S], outputs: &[S]) -> Result<Self> {
        let inputs: BTreeSet<String> = inputs.iter().map(|s| s.as_ref().to_string()).collect();
        let outputs: BTreeSet<String> = outputs.iter().map(|s| s.as_ref().to_string()).collect();
        if let Some(a) = inputs.intersection(&outputs).next() {
            return Err(Error::Spec(format!("atom `{a}` is both input and output")));
        }
        if inputs.len() + outputs.len() > MAX_ATOMS {
            return Err(Error::Limit {
                what: "number of atoms",
                limit: MAX_ATOMS,
            });
        }
        Ok(Alphabet {
            inputs: inputs.into_iter().collect(),
            outputs: outputs.into_iter().collect(),
        })
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn len(&self) -> usize {
        self.inputs.len() + self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All atoms in bit order.
    pub fn atoms(&self) -> impl Iterator<Item = &String> {
        self.inputs.iter().chain(self.outputs.iter())
    }

    pub fn atom(&self, bit: usize) -> &str {
        if bit < self.inputs.len() {
            &self.inputs[bit]
        } else {
            &self.outputs[bit - self.inputs.len()]
        }
    }

    pub fn bit_of(&self, atom: &str) -> Option<usize> {
        self.atoms().position(|a| a == atom)
    }

    pub fn atom_set(&self) -> BTreeSet<String> {
        self.atoms().cloned().collect()
    }

    pub fn num_letters(&self) -> usize {
        1 << self.len()
    }

    pub fn num_input_letters(&self) -> usize {
        1 << self.inputs.len()
    }

    pub fn num_output_letters(&self) -> usize {
        1 << self.outputs.len()
    }

    /// Joins an input valuation and an output valuation into a letter.
    pub fn join(&self, x: u32, y: u32) -> Letter {
        x | (y << self.inputs.len())
    }

    pub fn split(&self, letter: Letter) -> (u32, u32) {
        let nx = self.inputs.len();
        (letter & ((1 << nx) - 1), letter >> nx)
    }

    pub fn letter_of<'a, I: IntoIterator<Item = &'a String>>(&self, atoms: I) -> Result<Letter> {
        let mut letter = 0;
        for a in atoms {
            let bit = self.bit_of(a).ok_or_else(|| Error::UnknownAtom(a.clone()))?;
            letter |= 1 << bit;
        }
        Ok(letter)
    }

    pub fn set_of(&self, letter: Letter) -> BTreeSet<String> {
        (0..self.len())
            .filter(|&i| letter >> i & 1 == 1)
            .map(|i| self.atom(i).to_string())
            .collect()
    }

    /// Encodes an input-only valuation from atom names.
    pub fn input_of<'a, I: IntoIterator<Item = &'a String>>(&self, atoms: I) -> Result<u32> {
        let mut x = 0;
        for a in atoms {
            match self.inputs.iter().position(|i| i == a) {
                Some(bit) => x |= 1 << bit,
                None => return Err(Error::UnknownAtom(a.clone())),
            }
        }
        Ok(x)
    }

    /// Renders `value` over `width` atoms as a string of `0`/`1`, first atom first.
    pub fn bits_string(value: u32, width: usize) -> String {
        (0..width)
            .map(|i| if value >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Inverse of [`Self::bits_string`].
    pub fn parse_bits(s: &str, width: usize) -> Option<u32> {
        if s.len() != width {
            return None;
        }
        let mut v = 0;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => v |= 1 << i,
                '0' => {}
                _ => return None,
            }
        }
        Some(v)
    }

    pub fn trace_of(&self, letters: &[Letter]) -> FiniteTrace {
        FiniteTrace::new(letters.iter().map(|&l| self.set_of(l)).collect())
    }
}

/// A complete DFA over an [`Alphabet`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: u32,
    /// `delta[q * num_letters + letter]`
    delta: Vec<u32>,
    accepting: Vec<bool>,
}

impl Dfa {
    /// Assembles a DFA from a row-major transition table.
    pub fn from_parts(alphabet: Alphabet, initial: u32, delta: Vec<u32>, accepting: Vec<bool>) -> Self {
        let n = accepting.len();
        assert_eq!(delta.len(), n * alphabet.num_letters(), "transition table is not total");
        assert!((initial as usize) < n);
        assert!(delta.iter().all(|&q| (q as usize) < n));
        Dfa {
            alphabet,
            initial,
            delta,
            accepting,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn next(&self, q: u32, letter: Letter) -> u32 {
        self.delta[q as usize * self.alphabet.num_letters() + letter as usize]
    }

    pub fn is_accepting(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn run(&self, letters: &[Letter]) -> u32 {
        letters.iter().fold(self.initial, |q, &l| self.next(q, l))
    }

    /// Acceptance of a letter sequence; the empty sequence is rejected.
    pub fn accepts_letters(&self, letters: &[Letter]) -> bool {
        !letters.is_empty() && self.is_accepting(self.run(letters))
    }

    /// Acceptance of a named trace.
    pub fn accepts(&self, trace: &FiniteTrace) -> Result<bool> {
        let letters = trace
            .steps()
            .iter()
            .map(|s| self.alphabet.letter_of(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.accepts_letters(&letters))
    }

    /// True when no transition leaves the accepting set.
    pub fn acceptance_is_closed(&self) -> bool {
        (0..self.num_states() as u32).all(|q| {
            !self.is_accepting(q)
                || (0..self.alphabet.num_letters() as u32).all(|l| self.is_accepting(self.next(q, l)))
        })
    }

    /// Language of traces with some accepted non-empty prefix.
    ///
    /// States are pairs (state, latched); the latch is set on entering an
    /// accepting state and never cleared. The result is minimized.
    pub fn stickify(&self) -> Dfa {
        let k = self.alphabet.num_letters();
        let key = |q: u32, latched: bool| (q, latched);
        let mut index = std::collections::HashMap::new();
        let mut states = vec![key(self.initial, false)];
        index.insert(states[0], 0u32);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (q, latched) = states[i];
            for l in 0..k as u32 {
                let nq = self.next(q, l);
                let nk = key(nq, latched || self.is_accepting(nq));
                let id = *index.entry(nk).or_insert_with(|| {
                    states.push(nk);
                    states.len() as u32 - 1
                });
                delta.push(id);
            }
            i += 1;
        }
        let accepting = states.iter().map(|&(_, latched)| latched).collect();
        minimize(&Dfa::from_parts(self.alphabet.clone(), 0, delta, accepting))
    }
}
