//! Partition-refinement minimization (Moore) with BFS renumbering.

use std::collections::{HashMap, VecDeque};

use super::Dfa;

/// Language-equivalent, state-minimal DFA containing only reachable states.
/// States are numbered in breadth-first order from the initial state, visiting
/// letters in increasing order.
pub fn minimize(d: &Dfa) -> Dfa {
    let k = d.alphabet().num_letters();
    let reach = bfs_order(d, d.initial(), |q, l| d.next(q, l));
    // position in `reach` doubles as the dense index of reachable states
    let mut dense = vec![u32::MAX; d.num_states()];
    for (i, &q) in reach.iter().enumerate() {
        dense[q as usize] = i as u32;
    }
    let n = reach.len();

    let mut class: Vec<u32> = reach.iter().map(|&q| d.is_accepting(q) as u32).collect();
    let mut count = {
        let mut c = class.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    loop {
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut next = Vec::with_capacity(n);
        for (i, &q) in reach.iter().enumerate() {
            let mut sig = Vec::with_capacity(k + 1);
            sig.push(class[i]);
            for l in 0..k as u32 {
                sig.push(class[dense[d.next(q, l) as usize] as usize]);
            }
            let fresh = ids.len() as u32;
            next.push(*ids.entry(sig).or_insert(fresh));
        }
        let new_count = ids.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }

    // quotient, renumbered breadth-first
    let mut rep = vec![u32::MAX; count];
    for (i, &q) in reach.iter().enumerate() {
        if rep[class[i] as usize] == u32::MAX {
            rep[class[i] as usize] = q;
        }
    }
    let class_of = |q: u32| class[dense[q as usize] as usize];
    let order = bfs_order_classes(count, class_of(d.initial()), k, |c, l| {
        class_of(d.next(rep[c as usize], l))
    });
    let mut renum = vec![0u32; count];
    for (i, &c) in order.iter().enumerate() {
        renum[c as usize] = i as u32;
    }
    let mut delta = Vec::with_capacity(count * k);
    let mut accepting = Vec::with_capacity(count);
    for &c in &order {
        let q = rep[c as usize];
        accepting.push(d.is_accepting(q));
        for l in 0..k as u32 {
            delta.push(renum[class_of(d.next(q, l)) as usize]);
        }
    }
    Dfa::from_parts(d.alphabet().clone(), 0, delta, accepting)
}

fn bfs_order(d: &Dfa, start: u32, next: impl Fn(u32, u32) -> u32) -> Vec<u32> {
    let k = d.alphabet().num_letters() as u32;
    let mut seen = vec![false; d.num_states()];
    let mut order = vec![start];
    seen[start as usize] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(q) = queue.pop_front() {
        for l in 0..k {
            let t = next(q, l);
            if !seen[t as usize] {
                seen[t as usize] = true;
                order.push(t);
                queue.push_back(t);
            }
        }
    }
    order
}

fn bfs_order_classes(count: usize, start: u32, k: usize, next: impl Fn(u32, u32) -> u32) -> Vec<u32> {
    let mut seen = vec![false; count];
    let mut order = vec![start];
    seen[start as usize] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        for l in 0..k as u32 {
            let t = next(c, l);
            if !seen[t as usize] {
                seen[t as usize] = true;
                order.push(t);
                queue.push_back(t);
            }
        }
    }
    order
}
