//! End-to-end acceptance checks, one PASS/FAIL line per criterion.

use std::collections::{HashMap, HashSet, VecDeque};
use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use optsynth::cancel::Deadline;
use optsynth::dd::{DdManager, Func, Var};
use optsynth::dfa::{minimize, product_with, translate, Alphabet, Letter};
use optsynth::io::{load_spec, run_bench, BenchConfig, Instance};
use optsynth::ltlf::satisfies;
use optsynth::optimal::{
    incremental_extended_on, incremental_improved_on, synthesize, Arena, EngineKind, ExplicitArena, Mode,
    Options, Search,
};
use optsynth::oracle::{self, check_strategy, model_check, OracleGame};
use optsynth::problem::{Limits, DEFAULT_OBJECTIVE_LIMIT};
use optsynth::random::{random_formula, random_spec, InstanceParams};
use optsynth::strategy::play;
use optsynth::sym::{SymbolicArena, ValueLadder, VarOrder};
use optsynth::{Rational, Spec};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn manifest(path: &str) -> String {
    format!("{}/{path}", env!("CARGO_MANIFEST_DIR"))
}

const ENGINES: [EngineKind; 2] = [EngineKind::Explicit, EngineKind::Symbolic];
const MAX_PRODUCT: usize = 2000;

/// Random instances whose explicit product has at most `MAX_PRODUCT` states.
fn instances(count: usize) -> Vec<(Spec, usize)> {
    let mut rng = StdRng::seed_from_u64(2024);
    // at most 3 objectives, formula size 6, two inputs and two outputs
    let params = InstanceParams::default();
    let mut out = Vec::new();
    while out.len() < count {
        let spec = random_spec(&mut rng, &params);
        let compiled = spec.compile(&Limits::default()).expect("small instance");
        if let Ok(p) = product_with(compiled.components(), MAX_PRODUCT, &Deadline::none()) {
            out.push((spec, p.num_states()));
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let spec = load_spec(manifest("fixtures/robot.spec")).map_err(|e| e.to_string())?;
    ensure!(spec.len() == 5, "expected five goals");
    ensure!(
        spec.objectives().iter().all(|o| o.guarantee == int(1) && o.observation == int(1)),
        "goals are not unit weight"
    );
    // the fixture itself is validated by the oracle first
    let game = OracleGame::from_spec(&spec).map_err(|e| e.to_string())?;
    let ones = spec.observation_weights();
    let (g, _) = oracle::max_guarantee(&game, &ones);
    let v = oracle::max_observation(&game, &ones);
    let vals = game.values(|b| ones.iter().enumerate().filter(|(i, _)| b >> i & 1 == 1).map(|(_, w)| *w).sum());
    // inputs in bit order: open, up; the agent first avoids room 1
    let after_up = game.next(game.initial(), 0b10);
    ensure!(
        (g, v, vals[after_up as usize]) == (int(1), int(2), int(3)),
        "oracle gives guarantee {g}, observation {v}, post-room-2 {}",
        vals[after_up as usize]
    );

    let mut details = Vec::new();
    for engine in ENGINES {
        let gout = synthesize(&spec, &Options::new(Mode::Guarantee, engine)).map_err(|e| e.to_string())?;
        ensure!(gout.value == int(1) && gout.core.len() == 1, "{engine}: guarantee {} core {:?}", gout.value, gout.core);
        let oout = synthesize(&spec, &Options::new(Mode::Observe, engine)).map_err(|e| e.to_string())?;
        ensure!(oout.value == int(2), "{engine}: observation {}", oout.value);
        for mode in [Mode::IncrementalExtended, Mode::IncrementalImproved] {
            let out = synthesize(&spec, &Options::new(mode, engine)).map_err(|e| e.to_string())?;
            let t = out.strategy.ok_or("no strategy")?;
            let ensured = t.run(&[0b10]).1.ensured;
            ensure!(out.value == int(2) && ensured == int(3), "{engine} {mode}: value {}, post-room-2 {ensured}", out.value);
            let mut sink = Vec::new();
            let session = play(&t, "up\nup open\nquit\n".as_bytes(), &mut sink).map_err(|e| e.to_string())?;
            ensure!(
                session.ensured_history.starts_with(&[int(2), int(3)]),
                "{engine} {mode}: play shows {:?}",
                session.ensured_history
            );
            let text = String::from_utf8_lossy(&sink);
            ensure!(text.contains("ensured 2") && text.contains("ensured 3"), "play transcript lacks 2 -> 3");
        }
        details.push(format!("{engine}: guarantee 1 core {{{}}}", spec.names()[gout.core[0]]));
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!(
        "{}; observation 2; ensured 3 after room 2; play 2 -> 3; {elapsed:.2?}",
        details.join(", ")
    ))
}

fn criterion_2(cases: &[(Spec, usize)]) -> Outcome {
    let start = Instant::now();
    for (i, (spec, _)) in cases.iter().enumerate() {
        let game = OracleGame::from_spec(spec).map_err(|e| e.to_string())?;
        let expected = oracle::max_observation(&game, &spec.observation_weights());
        for engine in ENGINES {
            let out = synthesize(spec, &Options::new(Mode::Observe, engine)).map_err(|e| e.to_string())?;
            ensure!(out.value == expected, "instance {i} {engine}: {} vs oracle {expected}", out.value);
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    Ok(format!("{} instances, explicit = symbolic = oracle; {elapsed:.2?}", cases.len()))
}

/// Ensured value at every reachable arena state, from both incremental
/// variants and from the oracle, walked in lockstep.
fn compare_ensured<A: Arena>(spec: &Spec, game: &OracleGame) -> Result<usize, String> {
    let compiled = spec.compile(&Limits::default()).map_err(|e| e.to_string())?;
    let mut arena = A::build(compiled.alphabet(), compiled.components(), VarOrder::AtomsFirst, &Limits::default())
        .map_err(|e| e.to_string())?;
    let weights = spec.observation_weights();
    let ladder = ValueLadder::new(&weights, DEFAULT_OBJECTIVE_LIMIT).map_err(|e| e.to_string())?;
    let none = Deadline::none();
    let ext = incremental_extended_on(&mut arena, &ladder, true, &none).map_err(|e| e.to_string())?;
    let imp = incremental_improved_on(&mut arena, &ladder, true, &none).map_err(|e| e.to_string())?;
    ensure!(ext.levels.len() == imp.levels.len(), "level counts differ");
    for (e, i) in ext.levels.iter().zip(&imp.levels) {
        ensure!(e.w == i.w, "regions differ at level {}", e.k);
    }
    let (me, mi) = (ext.ensured_map(), imp.ensured_map());
    let best = game.values(|b| weights.iter().enumerate().filter(|(i, _)| b >> i & 1 == 1).map(|(_, w)| *w).sum());
    let letters = spec.alphabet().num_letters() as Letter;
    let start = (arena.initial_state(), game.initial());
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((s, g)) = queue.pop_front() {
        let (a, b) = (me.lookup(&arena, &s), mi.lookup(&arena, &s));
        ensure!(a == b && a == best[g as usize], "state {s:?}: extended {a}, improved {b}, oracle {}", best[g as usize]);
        for l in 0..letters {
            let next = (arena.step(&s, l), game.next(g, l));
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen.len())
}

fn criterion_3(cases: &[(Spec, usize)]) -> Outcome {
    let mut states = 0;
    for (i, (spec, _)) in cases.iter().enumerate() {
        let game = OracleGame::from_spec(spec).map_err(|e| e.to_string())?;
        states += compare_ensured::<SymbolicArena>(spec, &game).map_err(|e| format!("instance {i} symbolic: {e}"))?;
        states += compare_ensured::<ExplicitArena>(spec, &game).map_err(|e| format!("instance {i} explicit: {e}"))?;
        let mut opts = Options::default();
        let linear = synthesize(spec, &opts).map_err(|e| e.to_string())?;
        opts.search = Search::Binary;
        let binary = synthesize(spec, &opts).map_err(|e| e.to_string())?;
        ensure!(linear.value == binary.value, "instance {i}: linear {} binary {}", linear.value, binary.value);
    }
    Ok(format!(
        "{} instances: identical regions, ensured values equal to the oracle at {states} reachable states, linear = binary",
        cases.len()
    ))
}

fn criterion_4(cases: &[(Spec, usize)]) -> Outcome {
    let mut strict = 0;
    for (i, (spec, _)) in cases.iter().enumerate() {
        let spec = spec.with_observation_as_guarantee();
        let g = synthesize(&spec, &Options::new(Mode::Guarantee, EngineKind::Symbolic)).map_err(|e| e.to_string())?;
        let v = synthesize(&spec, &Options::new(Mode::Observe, EngineKind::Symbolic)).map_err(|e| e.to_string())?;
        ensure!(g.value <= v.value, "instance {i}: guarantee {} > observation {}", g.value, v.value);
        strict += usize::from(g.value < v.value);
    }
    ensure!(strict > 0, "no instance with a strict gap");
    Ok(format!("guarantee <= observation on {} instances, strict on {strict}", cases.len()))
}

fn criterion_5() -> Outcome {
    let mut rng = StdRng::seed_from_u64(99);
    let inputs = ["a", "b"];
    let outputs = ["c", "d"];
    let alphabet = Alphabet::new(&inputs, &outputs).map_err(|e| e.to_string())?;
    let atoms: Vec<String> = alphabet.atoms().cloned().collect();
    let mut pairs = 0;
    let mut memo = HashMap::new();
    while pairs < 10_000 {
        let size = rng.gen_range(1..=8);
        let f = random_formula(&mut rng, &atoms, size);
        let dfa = match memo.get(&f) {
            Some(d) => d,
            None => {
                let d = minimize(&translate(&f, &alphabet).map_err(|e| e.to_string())?);
                memo.entry(f.clone()).or_insert(d)
            }
        };
        for _ in 0..10 {
            let len = rng.gen_range(0..=5);
            let letters: Vec<Letter> = (0..len).map(|_| rng.gen_range(0..alphabet.num_letters() as Letter)).collect();
            let trace = alphabet.trace_of(&letters);
            let by_dfa = dfa.accepts(&trace).map_err(|e| e.to_string())?;
            ensure!(by_dfa == satisfies(&f, &trace), "mismatch on {f} with {trace}");
            pairs += 1;
        }
    }
    Ok(format!("{pairs} formula/trace pairs, zero mismatches"))
}

#[derive(Clone, Debug)]
enum Expr {
    Var(usize),
    Const(bool),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Xor(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn random(rng: &mut StdRng, n: usize, depth: usize) -> Expr {
        if depth == 0 || rng.gen_bool(0.15) {
            return if rng.gen_bool(0.95) { Expr::Var(rng.gen_range(0..n)) } else { Expr::Const(rng.gen()) };
        }
        let a = Box::new(Expr::random(rng, n, depth - 1));
        match rng.gen_range(0..4) {
            0 => Expr::Not(a),
            1 => Expr::And(a, Box::new(Expr::random(rng, n, depth - 1))),
            2 => Expr::Or(a, Box::new(Expr::random(rng, n, depth - 1))),
            _ => Expr::Xor(a, Box::new(Expr::random(rng, n, depth - 1))),
        }
    }

    fn eval(&self, bits: u32) -> bool {
        match self {
            Expr::Var(i) => bits >> i & 1 == 1,
            Expr::Const(b) => *b,
            Expr::Not(a) => !a.eval(bits),
            Expr::And(a, b) => a.eval(bits) && b.eval(bits),
            Expr::Or(a, b) => a.eval(bits) || b.eval(bits),
            Expr::Xor(a, b) => a.eval(bits) != b.eval(bits),
        }
    }

    fn table(&self, n: usize) -> Vec<bool> {
        (0..1u32 << n).map(|b| self.eval(b)).collect()
    }

    fn build(&self, m: &mut DdManager, vars: &[Var]) -> Func {
        match self {
            Expr::Var(i) => m.var_func(vars[*i]),
            Expr::Const(b) => m.constant(*b),
            Expr::Not(a) => {
                let a = a.build(m, vars);
                m.not(a)
            }
            Expr::And(a, b) => {
                let (a, b) = (a.build(m, vars), b.build(m, vars));
                m.and(a, b)
            }
            Expr::Or(a, b) => {
                let (a, b) = (a.build(m, vars), b.build(m, vars));
                m.or(a, b)
            }
            Expr::Xor(a, b) => {
                let (a, b) = (a.build(m, vars), b.build(m, vars));
                m.xor(a, b)
            }
        }
    }
}

fn table_of(m: &DdManager, f: Func, n: usize) -> Vec<bool> {
    (0..1u32 << n)
        .map(|b| {
            let a: Vec<bool> = (0..n).map(|i| b >> i & 1 == 1).collect();
            m.eval(f, &a).expect("total assignment")
        })
        .collect()
}

fn criterion_6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let mut checks = 0usize;
    for n in 1..=12usize {
        let mut m = DdManager::new();
        let vars: Vec<Var> = (0..n).map(|i| m.new_var(format!("v{i}")).expect("fresh")).collect();
        for _ in 0..12 {
            let (ef, eg, ec) = (Expr::random(&mut rng, n, 6), Expr::random(&mut rng, n, 6), Expr::random(&mut rng, n, 4));
            let (tf, tg, tc) = (ef.table(n), eg.table(n), ec.table(n));
            let (f, g, c) = (ef.build(&mut m, &vars), eg.build(&mut m, &vars), ec.build(&mut m, &vars));
            let zip = |a: &[bool], b: &[bool], op: fn(bool, bool) -> bool| -> Vec<bool> {
                a.iter().zip(b).map(|(x, y)| op(*x, *y)).collect()
            };
            let and = m.and(f, g);
            let or = m.or(f, g);
            let xor = m.xor(f, g);
            let not = m.not(f);
            let ite = m.ite(c, f, g);
            ensure!(table_of(&m, f, n) == tf, "build n={n}");
            ensure!(table_of(&m, and, n) == zip(&tf, &tg, |a, b| a && b), "and n={n}");
            ensure!(table_of(&m, or, n) == zip(&tf, &tg, |a, b| a || b), "or n={n}");
            ensure!(table_of(&m, xor, n) == zip(&tf, &tg, |a, b| a != b), "xor n={n}");
            ensure!(table_of(&m, not, n) == tf.iter().map(|x| !x).collect::<Vec<_>>(), "not n={n}");
            let expected_ite: Vec<bool> = (0..tf.len()).map(|i| if tc[i] { tf[i] } else { tg[i] }).collect();
            ensure!(table_of(&m, ite, n) == expected_ite, "ite n={n}");

            let v = rng.gen_range(0..n);
            let bit = 1usize << v;
            let ex = m.exists(&[vars[v]], f);
            let fa = m.forall(&[vars[v]], f);
            let hi = m.cofactor(f, vars[v], true);
            let expected_ex: Vec<bool> = (0..tf.len()).map(|i| tf[i | bit] || tf[i & !bit]).collect();
            let expected_fa: Vec<bool> = (0..tf.len()).map(|i| tf[i | bit] && tf[i & !bit]).collect();
            let expected_hi: Vec<bool> = (0..tf.len()).map(|i| tf[i | bit]).collect();
            ensure!(table_of(&m, ex, n) == expected_ex, "exists n={n}");
            ensure!(table_of(&m, fa, n) == expected_fa, "forall n={n}");
            ensure!(table_of(&m, hi, n) == expected_hi, "cofactor n={n}");

            let subst: HashMap<Var, Func> = [(vars[v], g)].into_iter().collect();
            let comp = m.vector_compose(f, &subst);
            let expected_comp: Vec<bool> =
                (0..tf.len()).map(|i| if tg[i] { tf[i | bit] } else { tf[i & !bit] }).collect();
            ensure!(table_of(&m, comp, n) == expected_comp, "compose n={n}");
            checks += 10;
        }
    }
    let mut m = DdManager::new();
    let n = 6;
    let vars: Vec<Var> = (0..n).map(|i| m.new_var(format!("v{i}")).expect("fresh")).collect();
    let mut equal = 0;
    for _ in 0..1000 {
        let (ef, eg) = (Expr::random(&mut rng, n, 5), Expr::random(&mut rng, n, 5));
        let (f, g) = (ef.build(&mut m, &vars), eg.build(&mut m, &vars));
        let same = ef.table(n) == eg.table(n);
        ensure!(same == (f == g), "canonicity fails on {ef:?} / {eg:?}");
        equal += usize::from(same);
    }
    Ok(format!("{checks} operation checks up to 12 variables; 1000 canonicity pairs ({equal} equivalent)"))
}

fn criterion_7(cases: &[(Spec, usize)]) -> Outcome {
    let mut strategies = 0;
    for (i, (spec, product)) in cases.iter().enumerate() {
        ensure!(spec.alphabet().num_inputs() <= 2, "instance {i} has too many inputs");
        let game = OracleGame::from_spec(spec).map_err(|e| e.to_string())?;
        for engine in ENGINES {
            for mode in [Mode::Guarantee, Mode::Observe, Mode::IncrementalExtended, Mode::IncrementalImproved] {
                let out = synthesize(spec, &Options::new(mode, engine)).map_err(|e| e.to_string())?;
                let Some(t) = &out.strategy else {
                    ensure!(!out.realised(), "instance {i} {engine} {mode}: realised without a strategy");
                    continue;
                };
                strategies += 1;
                let min = model_check(t, &game, *product).map_err(|e| e.to_string())?;
                ensure!(min == out.value, "instance {i} {engine} {mode}: min over runs {min}, reported {}", out.value);
                if mode.is_incremental() {
                    let r = check_strategy(t, &game).map_err(|e| e.to_string())?;
                    ensure!(
                        r.is_sound() && r.is_incremental(),
                        "instance {i} {engine} {mode}:\n{}",
                        r.to_text()
                    );
                }
            }
        }
    }
    Ok(format!("{strategies} strategies: worst run at horizon = product size equals v*; incremental ones have no counterexample"))
}

fn criterion_8(cases: &[(Spec, usize)]) -> Outcome {
    let (mut ext_total, mut imp_total, mut levels) = (0, 0, 0);
    for (i, (spec, _)) in cases.iter().enumerate() {
        for engine in ENGINES {
            let ext = synthesize(spec, &Options::new(Mode::IncrementalExtended, engine)).map_err(|e| e.to_string())?;
            let imp = synthesize(spec, &Options::new(Mode::IncrementalImproved, engine)).map_err(|e| e.to_string())?;
            ensure!(
                imp.stats.preimages <= ext.stats.preimages,
                "instance {i} {engine}: improved {} preimages, extended {}",
                imp.stats.preimages,
                ext.stats.preimages
            );
            ensure!(ext.levels.len() == imp.levels.len(), "instance {i} {engine}: level counts differ");
            for (e, m) in ext.levels.iter().zip(&imp.levels) {
                ensure!(m.steps <= e.steps, "instance {i} {engine}: level {} steps {} > {}", e.value, m.steps, e.steps);
            }
            ext_total += ext.stats.preimages;
            imp_total += imp.stats.preimages;
            levels += ext.levels.len();
        }
    }
    Ok(format!("{levels} levels; preimages improved {imp_total} <= extended {ext_total}; per-level steps never larger"))
}

fn criterion_9() -> Outcome {
    let instances = Instance::discover(manifest("fixtures/corpus")).map_err(|e| e.to_string())?;
    ensure!(instances.len() == 20, "found {} instances", instances.len());
    ensure!(instances.iter().all(|i| i.spec.len() <= 12), "an instance has more than 12 objectives");
    let config = BenchConfig {
        timeout: Duration::from_secs(60),
        ..BenchConfig::default()
    };
    let mut buffer = Vec::new();
    let start = Instant::now();
    let rows = run_bench(&instances, &config, &mut buffer).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let timeouts = rows.iter().filter(|r| r.status == "timeout").count();
    ensure!(timeouts == 0, "{timeouts} timeouts");
    ensure!(rows.iter().all(|r| r.status == "ok"), "unfinished runs: {:?}", rows.iter().filter(|r| r.status != "ok").collect::<Vec<_>>());
    let mut reader = csv::Reader::from_reader(buffer.as_slice());
    let header: Vec<String> = reader.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
    let expected = [
        "instance", "mode", "engine", "value", "states", "dd-nodes-peak", "fixpoint-steps", "preimage-count", "wall-ms", "status",
    ];
    ensure!(header == expected, "header {header:?}");
    let records = reader.records().collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    ensure!(records.len() == instances.len() * config.modes.len(), "{} rows", records.len());
    ensure!(records.iter().all(|r| r.len() == expected.len()), "ragged rows");
    Ok(format!("{} rows over {} instances, zero timeouts, well-formed CSV; {elapsed:.2?}", records.len(), instances.len()))
}

fn main() {
    let cases = instances(200);
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("robot example", Box::new(criterion_1)),
        ("oracle equivalence", Box::new(|| criterion_2(&cases))),
        ("engine cross-checks", Box::new(|| criterion_3(&cases))),
        ("guarantee below observation", Box::new(|| criterion_4(&cases))),
        ("translation soundness", Box::new(criterion_5)),
        ("decision-diagram kernel", Box::new(criterion_6)),
        ("strategy model checking", Box::new(|| criterion_7(&cases))),
        ("improved step bound", Box::new(|| criterion_8(&cases))),
        ("mini-corpus benchmark", Box::new(criterion_9)),
    ];
    let mut failed = 0;
    let mut out = std::io::stdout();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let (tag, detail) = match result {
            Ok(d) => ("PASS", d),
            Err(e) => {
                failed += 1;
                ("FAIL", e)
            }
        };
        let _ = writeln!(out, "{tag} {} {name}: {detail}", i + 1);
    }
    if failed > 0 {
        let _ = writeln!(out, "{failed} criteria failed");
        std::process::exit(1);
    }
}
