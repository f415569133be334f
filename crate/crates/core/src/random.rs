//! Random formulas and problem instances for differential testing.

use rand::Rng;

use crate::dfa::Alphabet;
use crate::ltlf::Formula;
use crate::problem::{Objective, ProblemSpec};
use crate::Rational;

/// A random formula with exactly `size` nodes over `atoms`.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, atoms: &[String], size: usize) -> Formula {
    let size = size.max(1);
    if size == 1 {
        return match rng.gen_range(0..12) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(atoms[rng.gen_range(0..atoms.len())].clone()),
        };
    }
    if size == 2 || rng.gen_bool(0.45) {
        let c = random_formula(rng, atoms, size - 1);
        return match rng.gen_range(0..6) {
            0 => Formula::not(c),
            1 => Formula::next(c),
            2 => Formula::weak_next(c),
            3 => Formula::eventually(c),
            4 => Formula::always(c),
            _ => Formula::eventually(c),
        };
    }
    let left = rng.gen_range(1..size - 1);
    let a = random_formula(rng, atoms, left);
    let b = random_formula(rng, atoms, size - 1 - left);
    match rng.gen_range(0..6) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        2 => Formula::implies(a, b),
        3 => Formula::until(a, b),
        4 => Formula::release(a, b),
        _ => Formula::or(a, b),
    }
}

/// Shape of generated instances.
#[derive(Clone, Debug)]
pub struct InstanceParams {
    pub max_objectives: usize,
    pub max_formula_size: usize,
    pub max_inputs: usize,
    pub max_outputs: usize,
    /// Draw weights from a small set of fractions instead of all ones.
    pub fractional_weights: bool,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            max_objectives: 3,
            max_formula_size: 6,
            max_inputs: 2,
            max_outputs: 2,
            fractional_weights: true,
        }
    }
}

fn random_weight<R: Rng + ?Sized>(rng: &mut R, fractional: bool) -> Rational {
    if !fractional {
        return Rational::from_integer(1);
    }
    const CHOICES: [(i64, i64); 5] = [(1, 1), (1, 2), (1, 3), (2, 3), (1, 4)];
    let (n, d) = CHOICES[rng.gen_range(0..CHOICES.len())];
    Rational::new(n, d)
}

/// A random problem with inputs `x0, x1, ...` and outputs `y0, y1, ...`.
pub fn random_spec<R: Rng + ?Sized>(rng: &mut R, params: &InstanceParams) -> ProblemSpec<Rational> {
    let nx = rng.gen_range(1..=params.max_inputs.max(1));
    let ny = rng.gen_range(1..=params.max_outputs.max(1));
    let inputs: Vec<String> = (0..nx).map(|i| format!("x{i}")).collect();
    let outputs: Vec<String> = (0..ny).map(|i| format!("y{i}")).collect();
    let atoms: Vec<String> = inputs.iter().chain(&outputs).cloned().collect();
    let alphabet = Alphabet::new(&inputs, &outputs).expect("distinct names");
    let n = rng.gen_range(1..=params.max_objectives.max(1));
    let objectives = (0..n)
        .map(|i| {
            let size = rng.gen_range(1..=params.max_formula_size.max(1));
            let f = random_formula(rng, &atoms, size);
            let g = random_weight(rng, params.fractional_weights);
            let v = random_weight(rng, params.fractional_weights);
            Objective::new(format!("g{i}"), f, g, v)
        })
        .collect();
    ProblemSpec::new(alphabet, objectives).expect("generated instances are well formed")
}
