//! Batch runs over a directory of problems, reported as CSV.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::Serialize;

use super::{load_spec, load_syntcomp};
use crate::cancel::Deadline;
use crate::optimal::{synthesize, EngineKind, Mode, Options};
use crate::problem::{Limits, ProblemSpec};
use crate::{Error, Rational, Result};

/// A named problem.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub spec: ProblemSpec<Rational>,
}

impl Instance {
    /// Every `*.spec` file, and every `*.ltlf` file with a sibling `.part`
    /// file, under `dir`, sorted by name.
    pub fn discover(dir: impl AsRef<Path>) -> Result<Vec<Instance>> {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("spec" | "ltlf")))
            .collect();
        paths.sort();
        paths.iter().map(Instance::load).collect()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Instance> {
        let path = path.as_ref();
        let spec = match path.extension().and_then(|e| e.to_str()) {
            Some("ltlf") => load_syntcomp(path)?,
            _ => load_spec(path)?,
        };
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Ok(Instance { name, spec })
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub modes: Vec<Mode>,
    pub engines: Vec<EngineKind>,
    /// Wall-clock budget per instance, mode and engine.
    pub timeout: Duration,
    pub limits: Limits,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            modes: vec![Mode::Guarantee, Mode::Observe],
            engines: vec![EngineKind::Symbolic],
            timeout: Duration::from_secs(60),
            limits: Limits::default(),
        }
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub mode: String,
    pub engine: String,
    pub value: String,
    pub states: String,
    #[serde(rename = "dd-nodes-peak")]
    pub dd_nodes_peak: String,
    #[serde(rename = "fixpoint-steps")]
    pub fixpoint_steps: String,
    #[serde(rename = "preimage-count")]
    pub preimage_count: String,
    #[serde(rename = "wall-ms")]
    pub wall_ms: u128,
    pub status: String,
}

/// Runs one instance in one mode and engine under a fresh deadline.
pub fn bench_instance(inst: &Instance, mode: Mode, engine: EngineKind, config: &BenchConfig) -> BenchRow {
    let mut opts = Options::new(mode, engine);
    opts.limits = Limits {
        deadline: Deadline::after(config.timeout),
        ..config.limits.clone()
    };
    opts.build_strategy = false;
    let start = Instant::now();
    let result = synthesize(&inst.spec, &opts);
    let wall_ms = start.elapsed().as_millis();
    let mut row = BenchRow {
        instance: inst.name.clone(),
        mode: mode.to_string(),
        engine: engine.to_string(),
        value: String::new(),
        states: String::new(),
        dd_nodes_peak: String::new(),
        fixpoint_steps: String::new(),
        preimage_count: String::new(),
        wall_ms,
        status: String::new(),
    };
    match result {
        Ok(out) => {
            row.value = out.total.unwrap_or(out.value).to_string();
            row.states = out.stats.states.to_string();
            row.dd_nodes_peak = out.stats.dd_nodes_peak.to_string();
            row.fixpoint_steps = out.stats.fixpoint_steps.to_string();
            row.preimage_count = out.stats.preimages.to_string();
            row.status = "ok".into();
        }
        Err(Error::Timeout) => row.status = "timeout".into(),
        Err(Error::Limit { .. }) => row.status = "limit".into(),
        Err(e) => row.status = format!("error: {e}"),
    }
    row
}

/// Runs every instance in every configured mode and engine, writing CSV rows
/// to `out` as they complete.
pub fn run_bench<W: Write>(instances: &[Instance], config: &BenchConfig, out: W) -> Result<Vec<BenchRow>> {
    let mut writer = csv::Writer::from_writer(out);
    let mut rows = Vec::new();
    for inst in instances {
        for &mode in &config.modes {
            for &engine in &config.engines {
                let row = bench_instance(inst, mode, engine, config);
                log::info!("{} {} {}: {}", row.instance, row.mode, row.engine, row.status);
                writer.serialize(&row)?;
                writer.flush()?;
                rows.push(row);
            }
        }
    }
    Ok(rows)
}
