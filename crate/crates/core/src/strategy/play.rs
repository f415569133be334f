//! Interactive execution of a strategy: the user plays the environment.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use super::StrategyTransducer;
use crate::ltlf::FiniteTrace;
use crate::{Result, Weight};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayOutcome<W> {
    pub observed: W,
    pub ensured_history: Vec<W>,
    pub trace: FiniteTrace,
}

fn braces<'a>(items: impl IntoIterator<Item = &'a str>) -> String {
    format!("{{{}}}", items.into_iter().collect::<Vec<_>>().join(", "))
}

/// Runs a session: each round shows the ensured value, the satisfied
/// objectives and the agent's output, then reads one line of
/// space-separated true inputs. `quit` or end of input stops the session.
pub fn play<W: Weight, R: BufRead, O: Write>(
    t: &StrategyTransducer<W>,
    mut input: R,
    out: &mut O,
) -> Result<PlayOutcome<W>> {
    let alphabet = t.alphabet().clone();
    let names = &t.meta().objectives;
    let mut rs = t.start();
    let mut ensured_history = vec![rs.ensured.clone()];
    let mut round = 0;
    'rounds: loop {
        let satisfied: Vec<&str> = (0..names.len())
            .filter(|&i| rs.satisfied >> i & 1 == 1)
            .map(|i| names[i].as_str())
            .collect();
        let y = t.output(rs.state);
        let shown: BTreeSet<String> = alphabet.set_of(alphabet.join(0, y));
        writeln!(
            out,
            "round {round}: ensured {}, observed {}, satisfied {}",
            rs.ensured,
            rs.observed,
            braces(satisfied)
        )?;
        writeln!(out, "agent: {}", braces(shown.iter().map(String::as_str)))?;
        let x = loop {
            write!(out, "inputs> ")?;
            out.flush()?;
            let mut line = String::new();
            if input.read_line(&mut line)? == 0 {
                writeln!(out)?;
                break 'rounds;
            }
            let words: Vec<String> = line.split_whitespace().map(str::to_string).collect();
            if words.len() == 1 && words[0] == "quit" {
                break 'rounds;
            }
            match alphabet.input_of(&words) {
                Ok(x) => break x,
                Err(e) => writeln!(out, "{e}; enter input atoms again")?,
            }
        };
        t.advance(&mut rs, x);
        ensured_history.push(rs.ensured.clone());
        round += 1;
    }
    writeln!(out, "final observed value {}", rs.observed)?;
    for (i, first) in rs.first_satisfied.iter().enumerate() {
        if let Some(k) = first {
            writeln!(out, "  {}: satisfied by {}", names[i], rs.trace.prefix(k.saturating_sub(1)))?;
        }
    }
    Ok(PlayOutcome {
        observed: rs.observed,
        ensured_history,
        trace: rs.trace,
    })
}
