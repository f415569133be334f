use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use optsynth::dfa::{Alphabet, Letter};
use optsynth::io::{format_spec, format_strategy, parse_spec, parse_strategy};
use optsynth::ltlf::{desugar, parse_unchecked, satisfies, Formula};
use optsynth::optimal::{synthesize, EngineKind, Mode, Options};
use optsynth::random::{random_formula, random_spec, InstanceParams};
use optsynth::{Spec, Strategy};

fn atoms() -> Vec<String> {
    ["a", "b", "c"].iter().map(|s| s.to_string()).collect()
}

fn formula(seed: u64, size: usize) -> Formula {
    random_formula(&mut StdRng::seed_from_u64(seed), &atoms(), size)
}

fn spec(seed: u64) -> Spec {
    random_spec(&mut StdRng::seed_from_u64(seed), &InstanceParams::default())
}

fn letters(seed: u64, alphabet: &Alphabet, len: usize) -> Vec<Letter> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(0..alphabet.num_letters() as Letter)).collect()
}

fn inputs(seed: u64, alphabet: &Alphabet, len: usize) -> Vec<u32> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(0..alphabet.num_input_letters() as u32)).collect()
}

/// Walks both machines on every input sequence up to `depth`, comparing
/// outputs, satisfied sets and annotations.
fn same_behaviour(a: &Strategy, b: &Strategy, sa: u32, sb: u32, depth: usize) -> bool {
    let (x, y) = (a.state(sa), b.state(sb));
    if x.output != y.output || x.bits != y.bits || x.ensured != y.ensured {
        return false;
    }
    depth == 0
        || (0..a.alphabet().num_input_letters() as u32)
            .all(|i| same_behaviour(a, b, a.next(sa, i), b.next(sb, i), depth - 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_formulas_parse_back(seed in any::<u64>(), size in 1usize..12) {
        let f = formula(seed, size);
        let text = f.to_string();
        prop_assert_eq!(parse_unchecked(&text).unwrap(), f);
    }

    #[test]
    fn desugaring_preserves_meaning(seed in any::<u64>(), size in 1usize..10, trace_seed in any::<u64>()) {
        let f = formula(seed, size);
        let g = desugar(&f);
        prop_assert!(g.is_core());
        let alphabet = Alphabet::new(&["a", "b"], &["c"]).unwrap();
        for len in 0..6 {
            let trace = alphabet.trace_of(&letters(trace_seed ^ len as u64, &alphabet, len));
            prop_assert_eq!(satisfies(&f, &trace), satisfies(&g, &trace), "{} on {}", f, trace);
        }
    }

    #[test]
    fn spec_files_round_trip(seed in any::<u64>()) {
        let s = spec(seed);
        let text = format_spec(&s);
        prop_assert_eq!(parse_spec(&text, "generated").unwrap(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn observed_value_never_drops(seed in any::<u64>(), run_seed in any::<u64>(), symbolic in any::<bool>()) {
        let s = spec(seed);
        let engine = if symbolic { EngineKind::Symbolic } else { EngineKind::Explicit };
        let out = synthesize(&s, &Options::new(Mode::Observe, engine)).unwrap();
        if let Some(t) = out.strategy {
            let mut rs = t.start();
            let mut last = rs.observed;
            for x in inputs(run_seed, s.alphabet(), 12) {
                t.advance(&mut rs, x);
                prop_assert!(rs.observed >= last);
                last = rs.observed;
            }
        }
    }

    #[test]
    fn incremental_ensured_value_never_drops(
        seed in any::<u64>(),
        run_seed in any::<u64>(),
        improved in any::<bool>(),
        symbolic in any::<bool>(),
    ) {
        let s = spec(seed);
        let mode = if improved { Mode::IncrementalImproved } else { Mode::IncrementalExtended };
        let engine = if symbolic { EngineKind::Symbolic } else { EngineKind::Explicit };
        let out = synthesize(&s, &Options::new(mode, engine)).unwrap();
        if let Some(t) = out.strategy {
            let mut rs = t.start();
            prop_assert_eq!(&rs.ensured, &out.value);
            for x in inputs(run_seed, s.alphabet(), 12) {
                let before = rs.ensured;
                t.advance(&mut rs, x);
                prop_assert!(rs.ensured >= before);
                prop_assert!(rs.ensured >= rs.observed);
            }
        }
    }

    #[test]
    fn strategy_files_round_trip(seed in any::<u64>(), mode_index in 0usize..4) {
        let s = spec(seed);
        let mode = [Mode::Guarantee, Mode::Observe, Mode::IncrementalExtended, Mode::IncrementalImproved][mode_index];
        let out = synthesize(&s, &Options::new(mode, EngineKind::Symbolic)).unwrap();
        if let Some(t) = out.strategy {
            prop_assume!(t.alphabet().num_inputs() <= 2);
            let back = parse_strategy(&format_strategy(&t), "generated").unwrap();
            prop_assert!(same_behaviour(&t, &back, t.initial(), back.initial(), 10));
            prop_assert_eq!(back, t);
        }
    }
}
