//! Graphviz export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{Alphabet, Dfa, ProductDfa};

fn letter_label(alphabet: &Alphabet, letters: &[u32]) -> String {
    if letters.len() == alphabet.num_letters() {
        return "*".into();
    }
    if letters.len() > 6 {
        return format!("{} letters", letters.len());
    }
    letters
        .iter()
        .map(|&l| {
            let set: Vec<String> = alphabet.set_of(l).into_iter().collect();
            format!("{{{}}}", set.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn render(d: &Dfa, node_label: impl Fn(u32) -> String, accepting: impl Fn(u32) -> bool) -> String {
    let mut s = String::from("digraph dfa {\n  rankdir=LR;\n  __start [shape=point];\n");
    for q in 0..d.num_states() as u32 {
        let shape = if accepting(q) { "doublecircle" } else { "circle" };
        let _ = writeln!(s, "  q{q} [shape={shape}, label=\"{}\"];", node_label(q));
    }
    let _ = writeln!(s, "  __start -> q{};", d.initial());
    for q in 0..d.num_states() as u32 {
        let mut edges: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for l in 0..d.alphabet().num_letters() as u32 {
            edges.entry(d.next(q, l)).or_default().push(l);
        }
        for (t, letters) in edges {
            let _ = writeln!(
                s,
                "  q{q} -> q{t} [label=\"{}\"];",
                letter_label(d.alphabet(), &letters)
            );
        }
    }
    s.push_str("}\n");
    s
}

pub fn dfa_to_dot(d: &Dfa) -> String {
    render(d, |q| q.to_string(), |q| d.is_accepting(q))
}

/// Product states are labelled with their acceptance bits, first component first.
pub fn product_to_dot(p: &ProductDfa) -> String {
    render(
        p.dfa(),
        |q| {
            let bits = Alphabet::bits_string(p.bits(q) as u32, p.num_components());
            format!("{q}\\n{bits}")
        },
        |q| p.bits(q) != 0,
    )
}
