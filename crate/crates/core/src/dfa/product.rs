use std::collections::{HashMap, VecDeque};

use super::{Dfa, DEFAULT_STATE_LIMIT};
use crate::cancel::Deadline;
use crate::{Error, Result};

/// Reachable synchronous product of component DFAs, with one acceptance bit
/// per component at every product state.
#[derive(Clone, Debug)]
pub struct ProductDfa {
    dfa: Dfa,
    bits: Vec<u64>,
    tuples: Vec<Vec<u32>>,
    components: usize,
}

impl ProductDfa {
    /// The product automaton; a state is accepting when every bit is set.
    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn num_states(&self) -> usize {
        self.dfa.num_states()
    }

    pub fn num_components(&self) -> usize {
        self.components
    }

    /// Bit `i` is set when component `i` accepts at product state `q`.
    pub fn bits(&self, q: u32) -> u64 {
        self.bits[q as usize]
    }

    pub fn bit(&self, q: u32, i: usize) -> bool {
        self.bits[q as usize] >> i & 1 == 1
    }

    /// Component states of product state `q`.
    pub fn tuple(&self, q: u32) -> &[u32] {
        &self.tuples[q as usize]
    }

    pub fn index_of(&self, tuple: &[u32]) -> Option<u32> {
        self.tuples.iter().position(|t| t == tuple).map(|i| i as u32)
    }
}

pub fn product(components: &[Dfa]) -> Result<ProductDfa> {
    product_with(components, DEFAULT_STATE_LIMIT, &Deadline::none())
}

pub fn product_with(components: &[Dfa], max_states: usize, deadline: &Deadline) -> Result<ProductDfa> {
    if components.len() > 64 {
        return Err(Error::Limit {
            what: "number of objectives in an explicit product",
            limit: 64,
        });
    }
    let alphabet = match components.first() {
        Some(c) => c.alphabet().clone(),
        None => return Err(Error::Spec("product of no automata".into())),
    };
    if components.iter().any(|c| c.alphabet() != &alphabet) {
        return Err(Error::Spec("product components use different alphabets".into()));
    }
    let k = alphabet.num_letters() as u32;
    let start: Vec<u32> = components.iter().map(Dfa::initial).collect();
    let mut index: HashMap<Vec<u32>, u32> = HashMap::from([(start.clone(), 0)]);
    let mut tuples = vec![start];
    let mut delta = Vec::new();
    let mut queue = VecDeque::from([0u32]);
    while let Some(q) = queue.pop_front() {
        deadline.check()?;
        for l in 0..k {
            let next: Vec<u32> = tuples[q as usize]
                .iter()
                .zip(components)
                .map(|(&s, c)| c.next(s, l))
                .collect();
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if tuples.len() >= max_states {
                        return Err(Error::Limit {
                            what: "product state count",
                            limit: max_states,
                        });
                    }
                    let id = tuples.len() as u32;
                    index.insert(next.clone(), id);
                    tuples.push(next);
                    queue.push_back(id);
                    id
                }
            };
            delta.push(id);
        }
    }
    // BFS discovery order matches the queue order, so rows are in state order.
    let bits: Vec<u64> = tuples
        .iter()
        .map(|t| {
            t.iter()
                .zip(components)
                .enumerate()
                .filter(|(_, (&s, c))| c.is_accepting(s))
                .fold(0u64, |acc, (i, _)| acc | 1 << i)
        })
        .collect();
    let full = if components.len() == 64 {
        u64::MAX
    } else {
        (1u64 << components.len()) - 1
    };
    let accepting = bits.iter().map(|&b| b == full).collect();
    Ok(ProductDfa {
        dfa: Dfa::from_parts(alphabet, 0, delta, accepting),
        bits,
        tuples,
        components: components.len(),
    })
}
