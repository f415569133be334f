use std::collections::HashSet;
use std::time::Duration;

use optsynth::cancel::Deadline;
use optsynth::dfa::{dfa_to_dot, product_to_dot, product_with};
use optsynth::io::{load_spec, load_strategy, load_syntcomp, run_bench, save_spec, save_strategy, BenchConfig, Instance};
use optsynth::optimal::{synthesize, EngineKind, Mode, Options};
use optsynth::problem::Limits;
use optsynth::strategy::strategy_to_dot;
use optsynth::{Error, Rational};

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Nodes are declared before use and every edge joins declared nodes.
fn assert_valid_dot(text: &str) {
    assert!(text.starts_with("digraph "), "{text}");
    assert_eq!(text.matches('{').count(), text.matches('}').count());
    assert!(text.trim_end().ends_with('}'));
    let mut nodes = HashSet::new();
    for line in text.lines().map(str::trim) {
        let body = line.split(" [").next().unwrap().trim_end_matches(';');
        if let Some((a, b)) = body.split_once(" -> ") {
            assert!(nodes.contains(a) && nodes.contains(b), "undeclared node in `{line}`");
        } else if line.ends_with("];") {
            nodes.insert(body.to_string());
        }
    }
    assert!(nodes.len() > 1);
}

#[test]
fn robot_fixture_has_five_unit_goals() {
    let spec = load_spec(fixture("robot.spec")).unwrap();
    assert_eq!(spec.names(), ["room1", "room2", "room3", "room4", "room5"]);
    assert_eq!(spec.alphabet().inputs(), ["open", "up"]);
    assert_eq!(spec.alphabet().outputs(), ["go1", "viadoor"]);
    let one = Rational::from_integer(1);
    assert!(spec.objectives().iter().all(|o| o.guarantee == one && o.observation == one));
}

#[test]
fn spec_files_survive_disk() {
    let dir = tempfile::tempdir().unwrap();
    let spec = load_spec(fixture("corpus/15_fractional.spec")).unwrap();
    let path = dir.path().join("copy.spec");
    save_spec(&spec, &path).unwrap();
    assert_eq!(load_spec(&path).unwrap(), spec);
}

#[test]
fn syntcomp_pairs_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let ltlf = dir.path().join("arbiter.ltlf");
    std::fs::write(&ltlf, "G (r -> F g)\n& G (!g | !h)\n& F h\n").unwrap();
    std::fs::write(dir.path().join("arbiter.part"), ".inputs r\n.outputs g h\n").unwrap();
    let spec = load_syntcomp(&ltlf).unwrap();
    assert_eq!(spec.names(), ["c1", "c2", "c3"]);
    assert_eq!(spec.alphabet().inputs(), ["r"]);
    let out = synthesize(&spec, &Options::default()).unwrap();
    assert_eq!(out.value, Rational::from_integer(3));

    let via_instance = Instance::load(&ltlf).unwrap();
    assert_eq!(via_instance.name, "arbiter");
    assert_eq!(via_instance.spec, spec);

    std::fs::remove_file(dir.path().join("arbiter.part")).unwrap();
    assert!(matches!(load_syntcomp(&ltlf), Err(Error::Io(_))));
}

#[test]
fn malformed_spec_reports_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.spec");
    std::fs::write(&path, "INPUTS: a\nOUTPUTS: b\nGOAL g: a & b\nGOAL h [G=1]: a U\n").unwrap();
    match load_spec(&path) {
        Err(Error::Format { line, .. }) => assert_eq!(line, 4),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn strategies_survive_disk() {
    let dir = tempfile::tempdir().unwrap();
    let spec = load_spec(fixture("robot.spec")).unwrap();
    let out = synthesize(&spec, &Options::new(Mode::IncrementalImproved, EngineKind::Symbolic)).unwrap();
    let t = out.strategy.unwrap();
    let path = dir.path().join("robot.strategy");
    save_strategy(&t, &path).unwrap();
    assert_eq!(load_strategy(&path).unwrap(), t);
}

#[test]
fn bench_over_three_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["01_robot", "03_arbiter", "11_weak_next"] {
        std::fs::copy(fixture(&format!("corpus/{name}.spec")), dir.path().join(format!("{name}.spec"))).unwrap();
    }
    std::fs::write(dir.path().join("notes.txt"), "not an instance").unwrap();
    let instances = Instance::discover(dir.path()).unwrap();
    assert_eq!(instances.iter().map(|i| i.name.as_str()).collect::<Vec<_>>(), ["01_robot", "03_arbiter", "11_weak_next"]);
    let config = BenchConfig {
        modes: vec![Mode::Guarantee, Mode::Observe, Mode::IncrementalImproved],
        engines: vec![EngineKind::Symbolic, EngineKind::Explicit],
        timeout: Duration::from_secs(30),
        ..BenchConfig::default()
    };
    let mut csv_out = Vec::new();
    let rows = run_bench(&instances, &config, &mut csv_out).unwrap();
    assert_eq!(rows.len(), 3 * 3 * 2);
    assert!(rows.iter().all(|r| r.status == "ok"));
    let robot_observe: Vec<_> = rows.iter().filter(|r| r.instance == "01_robot" && r.mode == "observe").collect();
    assert!(robot_observe.iter().all(|r| r.value == "2"));
    let text = String::from_utf8(csv_out).unwrap();
    assert_eq!(text.lines().count(), 1 + rows.len());
    assert!(text.starts_with("instance,mode,engine,value,states,dd-nodes-peak,fixpoint-steps,preimage-count,wall-ms,status\n"));
}

#[test]
fn bench_reports_timeouts_without_failing() {
    let instances = vec![Instance::load(fixture("corpus/19_choice.spec")).unwrap()];
    let config = BenchConfig {
        modes: vec![Mode::Combined],
        timeout: Duration::from_millis(1),
        ..BenchConfig::default()
    };
    let rows = run_bench(&instances, &config, std::io::sink()).unwrap();
    assert_eq!(rows[0].status, "timeout");
}

#[test]
fn dot_exports_are_well_formed() {
    let spec = load_spec(fixture("robot.spec")).unwrap();
    let compiled = spec.compile(&Limits::default()).unwrap();
    for d in compiled.components() {
        assert_valid_dot(&dfa_to_dot(d));
    }
    let p = product_with(compiled.components(), 10_000, &Deadline::none()).unwrap();
    assert_valid_dot(&product_to_dot(&p));
    let t = synthesize(&spec, &Options::default()).unwrap().strategy.unwrap();
    assert_valid_dot(&strategy_to_dot(&t));
}
