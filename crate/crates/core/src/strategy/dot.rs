use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::StrategyTransducer;
use crate::Weight;

/// Graphviz rendering: nodes show the agent's output and the ensured value,
/// edges the inputs leading to each successor.
pub fn strategy_to_dot<W: Weight>(t: &StrategyTransducer<W>) -> String {
    let a = t.alphabet();
    let mut s = String::from("digraph strategy {\n  rankdir=LR;\n  __start [shape=point];\n");
    for (i, st) in t.states().iter().enumerate() {
        let out: Vec<String> = a.set_of(a.join(0, st.output)).into_iter().collect();
        let bits: String = (0..t.meta().objectives.len())
            .map(|j| if st.bits >> j & 1 == 1 { '1' } else { '0' })
            .collect();
        let _ = writeln!(
            s,
            "  s{i} [shape=box, label=\"{i}: {{{}}}\\nbits {bits}\\nensured {}\"];",
            out.join(","),
            st.ensured
        );
    }
    s.push_str("  __start -> s0;\n");
    for (i, st) in t.states().iter().enumerate() {
        let mut edges: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for (x, &n) in st.next.iter().enumerate() {
            edges.entry(n).or_default().push(x as u32);
        }
        for (n, xs) in edges {
            let label = if xs.len() == a.num_input_letters() {
                "*".to_string()
            } else {
                xs.iter()
                    .map(|&x| {
                        let set: Vec<String> = a.set_of(x).into_iter().collect();
                        format!("{{{}}}", set.join(","))
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let _ = writeln!(s, "  s{i} -> s{n} [label=\"{label}\"];");
        }
    }
    s.push_str("}\n");
    s
}
