//! Text format for synthesized strategies.
//!
//! ```text
//! optsynth-strategy 1
//! mode observe
//! engine symbolic
//! value 2
//! inputs open up
//! outputs go1 viadoor
//! objective room1 1 1
//! core
//! states 2
//! state 0 bits 0 ensured 2 output 01 next 1 1 1 1
//! ```
//!
//! `objective` lines give the name, guarantee weight and observation weight.
//! Bit strings list the first objective or atom first. `next` has one entry
//! per input valuation in numeric order.

use std::fmt::Write as _;
use std::path::Path;

use super::spec_file::{format_weight, parse_weight};
use crate::dfa::Alphabet;
use crate::strategy::{StrategyMeta, StrategyTransducer, TransducerState};
use crate::{Error, Rational, Result};

const HEADER: &str = "optsynth-strategy 1";

pub fn format_strategy(t: &StrategyTransducer<Rational>) -> String {
    let m = t.meta();
    let a = &m.alphabet;
    let mut s = String::new();
    let _ = writeln!(s, "{HEADER}");
    let _ = writeln!(s, "mode {}", m.mode);
    let _ = writeln!(s, "engine {}", m.engine);
    let _ = writeln!(s, "value {}", format_weight(&m.value));
    let _ = writeln!(s, "inputs {}", a.inputs().join(" "));
    let _ = writeln!(s, "outputs {}", a.outputs().join(" "));
    for (i, name) in m.objectives.iter().enumerate() {
        let _ = writeln!(
            s,
            "objective {name} {} {}",
            format_weight(&m.guarantee_weights[i]),
            format_weight(&m.observation_weights[i])
        );
    }
    let core: Vec<&str> = m.core_names();
    let _ = writeln!(s, "core{}{}", if core.is_empty() { "" } else { " " }, core.join(" "));
    let _ = writeln!(s, "states {}", t.num_states());
    let n = m.objectives.len();
    for (i, st) in t.states().iter().enumerate() {
        let bits: String = (0..n).map(|j| if st.bits >> j & 1 == 1 { '1' } else { '0' }).collect();
        let next: Vec<String> = st.next.iter().map(u32::to_string).collect();
        let _ = writeln!(
            s,
            "state {i} bits {bits} ensured {} output {} next {}",
            format_weight(&st.ensured),
            Alphabet::bits_string(st.output, a.num_outputs()),
            next.join(" ")
        );
    }
    s
}

pub fn save_strategy(t: &StrategyTransducer<Rational>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_strategy(t))?;
    Ok(())
}

pub fn load_strategy(path: impl AsRef<Path>) -> Result<StrategyTransducer<Rational>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_strategy(&text, &path.display().to_string())
}

pub fn parse_strategy(text: &str, path: &str) -> Result<StrategyTransducer<Rational>> {
    let err = |line: usize, message: String| Error::Format {
        path: path.to_string(),
        line,
        message,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, HEADER)) => {}
        Some((n, l)) => return Err(err(n, format!("expected `{HEADER}`, found `{l}`"))),
        None => return Err(err(0, "empty strategy file".into())),
    }
    let mut mode = None;
    let mut engine = None;
    let mut value = None;
    let mut inputs: Option<Vec<String>> = None;
    let mut outputs: Option<Vec<String>> = None;
    let mut objectives = Vec::new();
    let mut gw = Vec::new();
    let mut vw = Vec::new();
    let mut core_names: Option<Vec<String>> = None;
    let mut declared = None;
    let mut states: Vec<TransducerState<Rational>> = Vec::new();
    let weight = |n: usize, s: &str| parse_weight(s).ok_or_else(|| err(n, format!("invalid weight `{s}`")));
    for (n, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        let rest = || words[1..].iter().map(|w| w.to_string()).collect::<Vec<_>>();
        match words[0] {
            "mode" if words.len() == 2 => mode = Some(words[1].parse().map_err(|e: Error| err(n, e.to_string()))?),
            "engine" if words.len() == 2 => {
                engine = Some(words[1].parse().map_err(|e: Error| err(n, e.to_string()))?)
            }
            "value" if words.len() == 2 => value = Some(weight(n, words[1])?),
            "inputs" => inputs = Some(rest()),
            "outputs" => outputs = Some(rest()),
            "objective" if words.len() == 4 => {
                objectives.push(words[1].to_string());
                gw.push(weight(n, words[2])?);
                vw.push(weight(n, words[3])?);
            }
            "core" => core_names = Some(rest()),
            "states" if words.len() == 2 => {
                declared = Some(
                    words[1]
                        .parse::<usize>()
                        .map_err(|_| err(n, "invalid state count".into()))?,
                )
            }
            "state" => {
                let (nx, ny) = match (&inputs, &outputs) {
                    (Some(i), Some(o)) => (1usize << i.len(), o.len()),
                    _ => return Err(err(n, "state before inputs and outputs".into())),
                };
                if words.len() != 9 + nx
                    || words[2] != "bits"
                    || words[4] != "ensured"
                    || words[6] != "output"
                    || words[8] != "next"
                {
                    return Err(err(n, "malformed state line".into()));
                }
                if words[1].parse::<usize>().ok() != Some(states.len()) {
                    return Err(err(n, format!("expected state {}", states.len())));
                }
                let width = objectives.len();
                let bits = words[3];
                if bits.len() != width || !bits.bytes().all(|b| b == b'0' || b == b'1') {
                    return Err(err(n, "invalid objective bits".into()));
                }
                let bits = bits
                    .bytes()
                    .enumerate()
                    .fold(0u64, |m, (j, b)| if b == b'1' { m | 1 << j } else { m });
                let output = Alphabet::parse_bits(words[7], ny)
                    .ok_or_else(|| err(n, format!("invalid output `{}`", words[7])))?;
                let next = words[9..]
                    .iter()
                    .map(|w| w.parse::<u32>().map_err(|_| err(n, format!("invalid successor `{w}`"))))
                    .collect::<Result<Vec<u32>>>()?;
                states.push(TransducerState {
                    bits,
                    ensured: weight(n, words[5])?,
                    output,
                    next,
                });
            }
            _ => return Err(err(n, format!("unrecognised line `{line}`"))),
        }
    }
    let missing = |what: &str| err(0, format!("missing `{what}` line"));
    let alphabet = Alphabet::new(
        &inputs.ok_or_else(|| missing("inputs"))?,
        &outputs.ok_or_else(|| missing("outputs"))?,
    )?;
    let core = core_names
        .ok_or_else(|| missing("core"))?
        .iter()
        .map(|c| {
            objectives
                .iter()
                .position(|o| o == c)
                .ok_or_else(|| err(0, format!("core names unknown objective `{c}`")))
        })
        .collect::<Result<Vec<usize>>>()?;
    if declared != Some(states.len()) {
        return Err(err(0, format!("declared {declared:?} states, found {}", states.len())));
    }
    let meta = StrategyMeta {
        mode: mode.ok_or_else(|| missing("mode"))?,
        engine: engine.ok_or_else(|| missing("engine"))?,
        value: value.ok_or_else(|| missing("value"))?,
        core,
        alphabet,
        objectives,
        guarantee_weights: gw,
        observation_weights: vw,
    };
    StrategyTransducer::from_parts(meta, states)
}
