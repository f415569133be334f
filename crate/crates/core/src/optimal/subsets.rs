//! Subsets in non-increasing order of weight sum.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::Weight;

/// Enumerates all subsets of `0..n` by non-increasing weight sum, ties in
/// lexicographic order of their sorted indices.
///
/// Removed sets are generated best-first by increasing removed weight: with
/// items sorted by weight, each removed set (as sorted positions) has at most
/// two successors, extending it by the next position or moving its last
/// position one step, and every set is produced exactly once.
pub struct SubsetsByWeight<W> {
    weights: Vec<W>,
    /// Original indices sorted by ascending weight.
    by_weight: Vec<usize>,
    heap: BinaryHeap<Reverse<(W, Vec<usize>)>>,
    ready: VecDeque<(W, Vec<usize>)>,
    total: W,
}

impl<W: Weight> SubsetsByWeight<W> {
    pub fn new(weights: &[W]) -> Self {
        let mut by_weight: Vec<usize> = (0..weights.len()).collect();
        by_weight.sort_by(|&a, &b| weights[a].cmp(&weights[b]).then(a.cmp(&b)));
        SubsetsByWeight {
            weights: weights.to_vec(),
            by_weight,
            heap: BinaryHeap::from([Reverse((W::zero(), Vec::new()))]),
            ready: VecDeque::new(),
            total: W::sum_of(weights),
        }
    }

    fn push_successors(&mut self, removed_sum: &W, removed: &[usize]) {
        let n = self.weights.len();
        let w = |p: usize| self.weights[self.by_weight[p]].clone();
        match removed.last() {
            None => {
                if n > 0 {
                    self.heap.push(Reverse((removed_sum.clone() + w(0), vec![0])));
                }
            }
            Some(&last) if last + 1 < n => {
                let mut extended = removed.to_vec();
                extended.push(last + 1);
                self.heap
                    .push(Reverse((removed_sum.clone() + w(last + 1), extended)));
                let mut moved = removed.to_vec();
                *moved.last_mut().expect("non-empty") = last + 1;
                let sum = removed_sum.clone() - w(last) + w(last + 1);
                self.heap.push(Reverse((sum, moved)));
            }
            Some(_) => {}
        }
    }

    fn kept(&self, removed: &[usize]) -> Vec<usize> {
        let mut out = vec![true; self.weights.len()];
        for &p in removed {
            out[self.by_weight[p]] = false;
        }
        (0..self.weights.len()).filter(|&i| out[i]).collect()
    }
}

impl<W: Weight> Iterator for SubsetsByWeight<W> {
    /// Kept indices and their weight sum.
    type Item = (Vec<usize>, W);

    fn next(&mut self) -> Option<Self::Item> {
        if self.ready.is_empty() {
            let Reverse((sum, first)) = self.heap.pop()?;
            let mut group = vec![first];
            self.push_successors(&sum, &group[0].clone());
            while let Some(Reverse((s, _))) = self.heap.peek() {
                if *s != sum {
                    break;
                }
                let Reverse((_, removed)) = self.heap.pop().expect("peeked");
                self.push_successors(&sum, &removed);
                group.push(removed);
            }
            let mut kept: Vec<Vec<usize>> = group.iter().map(|r| self.kept(r)).collect();
            kept.sort();
            let value = self.total.clone() - sum;
            self.ready
                .extend(kept.into_iter().map(|k| (value.clone(), k)));
        }
        self.ready.pop_front().map(|(w, k)| (k, w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn brute(weights: &[Rational]) -> Vec<(Vec<usize>, Rational)> {
        let n = weights.len();
        let mut all: Vec<(Vec<usize>, Rational)> = (0u32..1 << n)
            .map(|m| {
                let set: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
                let s = set.iter().map(|&i| weights[i]).sum();
                (set, s)
            })
            .collect();
        all.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        all
    }

    #[test]
    fn matches_sorted_enumeration() {
        let cases: Vec<Vec<Rational>> = vec![
            vec![],
            vec![Rational::from_integer(1); 5],
            vec![Rational::new(1, 2), Rational::new(1, 3), Rational::new(1, 6), Rational::new(1, 2)],
            vec![Rational::new(2, 3), Rational::new(1, 4), Rational::new(1, 1), Rational::new(1, 4), Rational::new(5, 12), Rational::new(1, 3)],
        ];
        for w in cases {
            let got: Vec<_> = SubsetsByWeight::new(&w).collect();
            assert_eq!(got, brute(&w));
        }
    }
}
