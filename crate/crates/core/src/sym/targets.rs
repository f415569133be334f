//! Reachability targets over the symbolic arena.

use std::collections::HashMap;

use super::{SymbolicArena, ValueLadder};
use crate::dd::Func;
use crate::{Error, Result, Weight};

impl SymbolicArena {
    /// `g_Ψ`: every objective of `psi` is satisfied.
    pub fn target_guarantee(&mut self, psi: &[usize]) -> Result<Func> {
        if psi.is_empty() {
            return Err(Error::Argument("empty objective set".into()));
        }
        self.all_of(psi)
    }

    fn all_of(&mut self, set: &[usize]) -> Result<Func> {
        if let Some(&i) = set.iter().find(|&&i| i >= self.num_components()) {
            return Err(Error::Argument(format!("objective index {i} out of range")));
        }
        let gs: Vec<Func> = set.iter().map(|&i| self.accepting(i)).collect();
        Ok(self.manager_mut().and_all(gs))
    }

    /// States whose satisfied objectives contain `base` and weigh at least
    /// `v` in total, built by threshold compilation over the acceptance
    /// formulas.
    fn threshold<W: Weight>(&mut self, weights: &[W], base: &[usize], v: &W) -> Result<Func> {
        if weights.len() != self.num_components() {
            return Err(Error::Argument("one weight per component expected".into()));
        }
        let g_base = self.all_of(base)?;
        let rest: Vec<usize> = (0..weights.len()).filter(|i| !base.contains(i)).collect();
        let mut remaining = vec![W::zero(); rest.len() + 1];
        for j in (0..rest.len()).rev() {
            remaining[j] = remaining[j + 1].clone() + weights[rest[j]].clone();
        }
        let offset = W::sum_of(base.iter().map(|&i| &weights[i]));
        let mut memo: HashMap<(usize, W), Func> = HashMap::new();
        let t = self.threshold_rec(weights, &rest, &remaining, v, 0, offset, &mut memo);
        Ok(self.manager_mut().and(g_base, t))
    }

    #[allow(clippy::too_many_arguments)]
    fn threshold_rec<W: Weight>(
        &mut self,
        weights: &[W],
        rest: &[usize],
        remaining: &[W],
        v: &W,
        j: usize,
        partial: W,
        memo: &mut HashMap<(usize, W), Func>,
    ) -> Func {
        if partial >= *v {
            return self.manager().const_true();
        }
        if partial.clone() + remaining[j].clone() < *v {
            return self.manager().const_false();
        }
        if let Some(&f) = memo.get(&(j, partial.clone())) {
            return f;
        }
        let i = rest[j];
        let hi = self.threshold_rec(
            weights,
            rest,
            remaining,
            v,
            j + 1,
            partial.clone() + weights[i].clone(),
            memo,
        );
        let lo = self.threshold_rec(weights, rest, remaining, v, j + 1, partial.clone(), memo);
        let g = self.accepting(i);
        let f = self.manager_mut().ite(g, hi, lo);
        memo.insert((j, partial), f);
        f
    }

    /// `g_v` for a value of `ladder`; subsets are restricted to supersets of
    /// the ladder's base.
    pub fn target_at_least<W: Weight>(&mut self, ladder: &ValueLadder<W>, v: &W) -> Result<Func> {
        if ladder.level_of(v).is_none() {
            return Err(Error::Argument(format!("{v} is not a ladder value")));
        }
        self.threshold(ladder.weights(), ladder.base(), v)
    }

    /// `g^=_{v_k} = g_{v_k} ∧ ¬g_{v_{k-1}}` with `g_{v_0} = false`.
    pub fn target_exact_level<W: Weight>(&mut self, ladder: &ValueLadder<W>, k: usize) -> Result<Func> {
        let v = ladder
            .value(k)
            .ok_or_else(|| Error::Argument(format!("ladder level {k} out of range")))?
            .clone();
        let g = self.target_at_least(ladder, &v)?;
        if k == 1 {
            return Ok(g);
        }
        let above = ladder.value(k - 1).expect("k > 1").clone();
        let g_above = self.target_at_least(ladder, &above)?;
        let m = self.manager_mut();
        let not_above = m.not(g_above);
        Ok(m.and(g, not_above))
    }

    /// `g_{v,Γ}`: satisfied objectives contain `gamma` and weigh at least `v`.
    pub fn target_combined<W: Weight>(
        &mut self,
        ladder: &ValueLadder<W>,
        v: &W,
        gamma: &[usize],
    ) -> Result<Func> {
        self.threshold(ladder.weights(), gamma, v)
    }
}
