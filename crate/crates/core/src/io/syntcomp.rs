//! SyntCOMP-style LTLf benchmarks: a formula file plus a `.part` file.
//!
//! ```text
//! .inputs a b
//! .outputs c
//! ```
//!
//! The top-level conjunction is split into unit-weight objectives named
//! `c1`, `c2`, ...; a formula without a top-level conjunction becomes a
//! single objective.

use std::path::Path;

use num_traits::One;

use crate::dfa::Alphabet;
use crate::ltlf::parse;
use crate::problem::{Objective, ProblemSpec};
use crate::{Error, Rational, Result};

fn parse_part(text: &str, path: &str) -> Result<(Vec<String>, Vec<String>)> {
    let mut inputs = None;
    let mut outputs = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let atoms: Vec<String> = rest
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect();
        match key.trim_end_matches(':').trim_start_matches('.') {
            "inputs" => inputs = Some(atoms),
            "outputs" => outputs = Some(atoms),
            other => {
                return Err(Error::Format {
                    path: path.to_string(),
                    line: i + 1,
                    message: format!("unknown partition key `{other}`"),
                })
            }
        }
    }
    let missing = |what: &str| Error::Format {
        path: path.to_string(),
        line: 0,
        message: format!("missing {what} line"),
    };
    Ok((inputs.ok_or_else(|| missing(".inputs"))?, outputs.ok_or_else(|| missing(".outputs"))?))
}

/// Builds a problem from formula text and partition text.
pub fn parse_syntcomp(formula: &str, part: &str, path: &str) -> Result<ProblemSpec<Rational>> {
    let (inputs, outputs) = parse_part(part, path)?;
    let alphabet = Alphabet::new(&inputs, &outputs)?;
    let text: String = formula
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    let f = parse(&text, &alphabet.atom_set()).map_err(|e| Error::Format {
        path: path.to_string(),
        line: 0,
        message: e.to_string(),
    })?;
    let parts = f.conjuncts();
    if parts.len() == 1 {
        log::warn!("{path}: no top-level conjunction; using a single objective");
    }
    let objectives = parts
        .into_iter()
        .enumerate()
        .map(|(i, c)| Objective::new(format!("c{}", i + 1), c.clone(), Rational::one(), Rational::one()))
        .collect();
    ProblemSpec::new(alphabet, objectives)
}

/// Loads `path` and the partition file next to it (`path` with extension `part`).
pub fn load_syntcomp(path: impl AsRef<Path>) -> Result<ProblemSpec<Rational>> {
    let path = path.as_ref();
    let part_path = path.with_extension("part");
    let formula = std::fs::read_to_string(path)?;
    let part = std::fs::read_to_string(&part_path)?;
    parse_syntcomp(&formula, &part, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_top_level_conjunction() {
        let s = parse_syntcomp("F a & G (a -> c) & X c", ".inputs a\n.outputs c\n", "t").unwrap();
        assert_eq!(s.names(), vec!["c1", "c2", "c3"]);
        let one = parse_syntcomp("F a | c", "inputs: a\noutputs: c\n", "t").unwrap();
        assert_eq!(one.len(), 1);
    }

    #[test]
    fn rejects_unknown_atoms() {
        assert!(parse_syntcomp("F z", ".inputs a\n.outputs c\n", "t").is_err());
        assert!(parse_syntcomp("F a", ".inputs a\n", "t").is_err());
    }
}
