use std::collections::BTreeMap;

use crate::{Error, Result, Weight};

/// Distinct achievable values in descending order, one per reachability
/// target of the observation algorithms.
///
/// A ladder ranges over subsets of the objectives that contain a fixed base
/// set (empty for plain max-observation); each value is the weight sum of
/// such a subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueLadder<W> {
    weights: Vec<W>,
    base: Vec<usize>,
    values: Vec<W>,
    witnesses: Vec<u64>,
}

impl<W: Weight> ValueLadder<W> {
    /// All distinct non-empty subset sums of `weights`.
    pub fn new(weights: &[W], cap: usize) -> Result<Self> {
        Self::with_base(weights, &[], cap)
    }

    /// Sums of subsets containing every index of `base`.
    pub fn with_base(weights: &[W], base: &[usize], cap: usize) -> Result<Self> {
        if weights.len() > cap || weights.len() > 64 {
            return Err(Error::Limit {
                what: "number of objectives in a value ladder",
                limit: cap.min(64),
            });
        }
        if let Some(&i) = base.iter().find(|&&i| i >= weights.len()) {
            return Err(Error::Argument(format!("objective index {i} out of range")));
        }
        let mut base: Vec<usize> = base.to_vec();
        base.sort_unstable();
        base.dedup();
        let base_mask = base.iter().fold(0u64, |m, &i| m | 1 << i);
        let offset = W::sum_of(base.iter().map(|&i| &weights[i]));
        // first witness found for every sum; insertion order keeps the
        // witness with the lowest indices
        let mut sums: BTreeMap<W, u64> = BTreeMap::from([(offset, base_mask)]);
        for (i, w) in weights.iter().enumerate() {
            if base_mask >> i & 1 == 1 {
                continue;
            }
            let extended: Vec<(W, u64)> = sums
                .iter()
                .map(|(s, m)| (s.clone() + w.clone(), m | 1 << i))
                .collect();
            for (s, m) in extended {
                sums.entry(s).or_insert(m);
            }
        }
        sums.remove(&W::zero());
        let (values, witnesses) = sums.into_iter().rev().unzip();
        Ok(ValueLadder {
            weights: weights.to_vec(),
            base,
            values,
            witnesses,
        })
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    /// Objectives every counted subset must contain.
    pub fn base(&self) -> &[usize] {
        &self.base
    }

    /// Values `v_1 > v_2 > ...`.
    pub fn values(&self) -> &[W] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `v_k` for `1 <= k <= len`.
    pub fn value(&self, k: usize) -> Option<&W> {
        k.checked_sub(1).and_then(|i| self.values.get(i))
    }

    /// 1-based level of `v`.
    pub fn level_of(&self, v: &W) -> Option<usize> {
        self.values.iter().position(|x| x == v).map(|i| i + 1)
    }

    /// A subset (as a bit mask) whose weight sum is `v_k`.
    pub fn witness(&self, k: usize) -> Option<u64> {
        k.checked_sub(1).and_then(|i| self.witnesses.get(i)).copied()
    }

    /// Weight sum of the objectives whose bits are set in `mask`.
    pub fn score(&self, mask: u64) -> W {
        W::sum_of(
            self.weights
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, w)| w),
        )
    }

    /// Value credited to a state with satisfied set `mask`: its weight sum if
    /// it contains the base, zero otherwise.
    pub fn credited(&self, mask: u64) -> W {
        if self.base.iter().all(|&i| mask >> i & 1 == 1) {
            self.score(mask)
        } else {
            W::zero()
        }
    }
}
