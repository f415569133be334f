//! Line-oriented problem files.
//!
//! ```text
//! # comment
//! INPUTS: open up
//! OUTPUTS: go1 viadoor
//! NORMALIZE
//! GOAL room1 [G=1] [V=1/2]: go1
//! GOAL room2: !go1 &
//!     up
//! ```
//!
//! Atom lists may be separated by spaces or commas. Weights default to 1 and
//! are written as integers, fractions `p/q` or exact decimals. A goal's
//! formula continues on following indented lines. `NORMALIZE` divides each
//! weight kind by its largest value.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use num_traits::{One, Zero};

use crate::dfa::Alphabet;
use crate::ltlf::{parse, Formula, ParseError};
use crate::problem::{Objective, ProblemSpec};
use crate::{Error, Rational, Result};

/// Parses `p/q`, an integer, or an exact decimal such as `0.125`.
pub fn parse_weight(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        return (q != 0).then(|| Rational::new(p, q));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().ok()? };
        let scale = 10i64.checked_pow(frac.len() as u32)?;
        let f: i64 = frac.parse().ok()?;
        let magnitude = int.abs().checked_mul(scale)?.checked_add(f)?;
        let n = if negative || int < 0 { -magnitude } else { magnitude };
        return Some(Rational::new(n, scale));
    }
    text.parse::<i64>().ok().map(Rational::from_integer)
}

pub(crate) fn format_weight(w: &Rational) -> String {
    if w.is_integer() {
        w.numer().to_string()
    } else {
        format!("{}/{}", w.numer(), w.denom())
    }
}

struct Goal {
    name: String,
    g: Rational,
    v: Rational,
    text: String,
    line: usize,
}

fn atoms_of(list: &str) -> Vec<String> {
    list.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a problem file; `path` is only used in error messages.
pub fn parse_spec(text: &str, path: &str) -> Result<ProblemSpec<Rational>> {
    let err = |line: usize, message: String| Error::Format {
        path: path.to_string(),
        line,
        message,
    };
    let mut inputs: Option<Vec<String>> = None;
    let mut outputs: Option<Vec<String>> = None;
    let mut normalize = false;
    let mut goals: Vec<Goal> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        if raw.starts_with(char::is_whitespace) {
            match goals.last_mut() {
                Some(g) => {
                    g.text.push('\n');
                    g.text.push_str(content);
                    continue;
                }
                None => return Err(err(line_no, "indented line outside a goal".into())),
            }
        }
        let content = content.trim();
        if let Some(rest) = content.strip_prefix("INPUTS:") {
            if inputs.replace(atoms_of(rest)).is_some() {
                return Err(err(line_no, "duplicate INPUTS line".into()));
            }
        } else if let Some(rest) = content.strip_prefix("OUTPUTS:") {
            if outputs.replace(atoms_of(rest)).is_some() {
                return Err(err(line_no, "duplicate OUTPUTS line".into()));
            }
        } else if content == "NORMALIZE" {
            normalize = true;
        } else if let Some(rest) = content.strip_prefix("GOAL") {
            let (head, formula) = rest
                .split_once(':')
                .ok_or_else(|| err(line_no, "expected `:` after the goal name".into()))?;
            let mut words = head.split_whitespace();
            let name = words
                .next()
                .ok_or_else(|| err(line_no, "missing goal name".into()))?
                .to_string();
            if !is_identifier(&name) {
                return Err(err(line_no, format!("invalid goal name `{name}`")));
            }
            let (mut g, mut v) = (Rational::one(), Rational::one());
            for w in words {
                let inner = w
                    .strip_prefix('[')
                    .and_then(|w| w.strip_suffix(']'))
                    .ok_or_else(|| err(line_no, format!("unexpected `{w}` in goal header")))?;
                let (key, value) = inner
                    .split_once('=')
                    .ok_or_else(|| err(line_no, format!("expected KEY=weight, found `{inner}`")))?;
                let value = parse_weight(value)
                    .ok_or_else(|| err(line_no, format!("invalid weight `{value}`")))?;
                match key {
                    "G" => g = value,
                    "V" => v = value,
                    _ => return Err(err(line_no, format!("unknown weight kind `{key}`"))),
                }
            }
            goals.push(Goal {
                name,
                g,
                v,
                text: formula.to_string(),
                line: line_no,
            });
        } else {
            return Err(err(line_no, format!("unrecognised line `{content}`")));
        }
    }
    let inputs = inputs.ok_or_else(|| err(0, "missing INPUTS line".into()))?;
    let outputs = outputs.ok_or_else(|| err(0, "missing OUTPUTS line".into()))?;
    let alphabet = Alphabet::new(&inputs, &outputs).map_err(|e| err(0, e.to_string()))?;
    let atoms: BTreeSet<String> = alphabet.atom_set();
    let mut objectives = Vec::new();
    for goal in &goals {
        let f = parse(&goal.text, &atoms).map_err(|e| match e {
            ParseError::Syntax { line, column, message } => err(
                goal.line + line - 1,
                format!("column {column}: {message}"),
            ),
            ParseError::UndeclaredAtom { name, line, .. } => err(
                goal.line + line - 1,
                format!("atom `{name}` is neither an input nor an output"),
            ),
        })?;
        objectives.push(Objective::new(goal.name.clone(), f, goal.g, goal.v));
    }
    if normalize {
        fn guarantee(o: &mut Objective<Rational>) -> &mut Rational {
            &mut o.guarantee
        }
        fn observation(o: &mut Objective<Rational>) -> &mut Rational {
            &mut o.observation
        }
        let kinds: [fn(&mut Objective<Rational>) -> &mut Rational; 2] = [guarantee, observation];
        for pick in kinds {
            let max = objectives
                .iter_mut()
                .map(|o| *pick(o))
                .max()
                .unwrap_or_else(Rational::one);
            if max > Rational::zero() {
                for o in &mut objectives {
                    *pick(o) /= max;
                }
            }
        }
    }
    for (goal, o) in goals.iter().zip(&objectives) {
        if o.guarantee <= Rational::zero() || o.observation <= Rational::zero() {
            return Err(err(goal.line, "weights must be positive".into()));
        }
    }
    ProblemSpec::new(alphabet, objectives).map_err(|e| err(0, e.to_string()))
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<ProblemSpec<Rational>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_spec(&text, &path.display().to_string())
}

fn formula_text(f: &Formula) -> String {
    f.to_string()
}

/// Renders a problem in the file format accepted by [`parse_spec`].
pub fn format_spec(spec: &ProblemSpec<Rational>) -> String {
    let a = spec.alphabet();
    let mut s = String::new();
    let _ = writeln!(s, "INPUTS: {}", a.inputs().join(" "));
    let _ = writeln!(s, "OUTPUTS: {}", a.outputs().join(" "));
    for o in spec.objectives() {
        let _ = writeln!(
            s,
            "GOAL {} [G={}] [V={}]: {}",
            o.name,
            format_weight(&o.guarantee),
            format_weight(&o.observation),
            formula_text(&o.formula)
        );
    }
    s
}

pub fn save_spec(spec: &ProblemSpec<Rational>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_spec(spec))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_are_exact() {
        assert_eq!(parse_weight("1/3"), Some(Rational::new(1, 3)));
        assert_eq!(parse_weight("0.1"), Some(Rational::new(1, 10)));
        assert_eq!(parse_weight("2"), Some(Rational::from_integer(2)));
        assert_eq!(parse_weight(".5"), Some(Rational::new(1, 2)));
        assert_eq!(parse_weight("1/0"), None);
        assert_eq!(parse_weight("x"), None);
    }

    #[test]
    fn two_goals() {
        let text = "INPUTS: a\nOUTPUTS: b, c\nGOAL one: F a\nGOAL two [V=1/2]: G (b ->\n   c)\n";
        let s = parse_spec(text, "t").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.objectives()[1].observation, Rational::new(1, 2));
        let again = parse_spec(&format_spec(&s), "t").unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn errors_carry_lines() {
        let bad = "INPUTS: a\nOUTPUTS: b\nGOAL one: F a &\n";
        match parse_spec(bad, "f.spec") {
            Err(Error::Format { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let undeclared = "INPUTS: a\nOUTPUTS: b\n\nGOAL one: F z\n";
        match parse_spec(undeclared, "f.spec") {
            Err(Error::Format { line, message, .. }) => {
                assert_eq!(line, 4);
                assert!(message.contains('z'));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_spec("INPUTS: a\nOUTPUTS: a\n", "f").is_err());
        assert!(parse_spec("INPUTS: a\nOUTPUTS: b\nGOAL x [V=0]: a\n", "f").is_err());
        assert!(parse_spec("INPUTS: a\nOUTPUTS: b\nGOAL x: a\nGOAL x: b\n", "f").is_err());
    }

    #[test]
    fn normalize_divides_by_the_maximum() {
        let text = "INPUTS: a\nOUTPUTS: b\nNORMALIZE\nGOAL x [G=4] [V=2]: a\nGOAL y [G=2] [V=3]: b\n";
        let s = parse_spec(text, "t").unwrap();
        assert_eq!(s.guarantee_weights(), vec![Rational::one(), Rational::new(1, 2)]);
        assert_eq!(s.observation_weights(), vec![Rational::new(2, 3), Rational::one()]);
    }
}
