use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use optsynth::cancel::Deadline;
use optsynth::dfa::{dfa_to_dot, product_to_dot, product_with};
use optsynth::io::{format_strategy, load_strategy, run_bench, BenchConfig, Instance};
use optsynth::optimal::{synthesize, EngineKind, Mode, Options, Search, SynthesisOutcome};
use optsynth::oracle::{check_strategy, model_check, OracleGame, DEFAULT_ORACLE_STATES};
use optsynth::problem::Limits;
use optsynth::strategy::{play, strategy_to_dot};
use optsynth::sym::VarOrder;
use optsynth::{Error, Rational, Spec, Strategy};

/// Writes a line to standard output, ignoring a closed pipe.
macro_rules! outln {
    ($($arg:tt)*) => {{
        let _ = writeln!(io::stdout(), $($arg)*);
    }};
}

const EXIT_REALISED: u8 = 0;
const EXIT_FAILURE: u8 = 1;
const EXIT_UNREALISED: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "optsynth", version, about = "Optimal LTLf synthesis with weighted objectives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize an optimal strategy.
    Synth {
        /// Problem file (`.spec`), or an `.ltlf` formula with a sibling `.part` file.
        spec: PathBuf,
        #[arg(long, default_value = "observe")]
        mode: Mode,
        #[arg(long, default_value = "symbolic")]
        engine: EngineKind,
        #[arg(long, value_enum, default_value = "linear")]
        search: SearchArg,
        /// Comma-separated objective names that must all be satisfied (combined mode).
        #[arg(long, value_delimiter = ',')]
        guarantee_set: Option<Vec<String>>,
        /// Incremental modes: solve every level, valuing every state.
        #[arg(long)]
        full: bool,
        #[arg(long, value_enum, default_value = "atoms-first")]
        order: OrderArg,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        timeout: Option<f64>,
        /// Write the strategy here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a strategy against the problem it was synthesized for.
    Verify {
        spec: PathBuf,
        strategy: PathBuf,
        /// Input sequence length for the worst-case run; defaults to the
        /// number of product states.
        #[arg(long)]
        horizon: Option<usize>,
        /// Also write the report as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Play the environment against a strategy on the terminal.
    Play { spec: PathBuf, strategy: PathBuf },
    /// Graphviz export of a problem's product automaton, one objective's
    /// automaton, or a strategy.
    Dot {
        file: PathBuf,
        /// Export only this objective's automaton.
        #[arg(long)]
        objective: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run every instance in a directory and report CSV.
    Bench {
        dir: PathBuf,
        /// Seconds per instance, mode and engine.
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "guarantee,observe")]
        modes: Vec<Mode>,
        #[arg(long, value_delimiter = ',', default_value = "symbolic")]
        engines: Vec<EngineKind>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SearchArg {
    Linear,
    Binary,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum OrderArg {
    AtomsFirst,
    StatesFirst,
}

fn load_problem(path: &Path) -> anyhow::Result<Spec> {
    Ok(Instance::load(path)
        .with_context(|| format!("cannot load {}", path.display()))?
        .spec)
}

fn braces(names: &[&str]) -> String {
    format!("{{{}}}", names.join(", "))
}

fn report(spec: &Spec, out: &SynthesisOutcome<Rational>, wall: Duration) {
    let names = spec.names();
    let core: Vec<&str> = out.core.iter().map(|&i| names[i].as_str()).collect();
    match out.mode {
        Mode::Guarantee if out.realised() => outln!("value {}, core {}", out.value, braces(&core)),
        Mode::Combined => {
            let total = out.total.unwrap_or_default();
            outln!("value {}, guarantee set {}, total {total}", out.value, braces(&core));
        }
        _ => outln!("value {}", out.value),
    }
    let s = &out.stats;
    outln!(
        "games {}, fixpoint steps {}, preimages {}, states {}, dd nodes {}, wall time {} ms",
        s.games,
        s.fixpoint_steps,
        s.preimages,
        s.states,
        s.dd_nodes_peak,
        wall.as_millis()
    );
}

fn product_size(spec: &Spec) -> anyhow::Result<usize> {
    let compiled = spec.compile(&Limits::default())?;
    let p = product_with(compiled.components(), DEFAULT_ORACLE_STATES, &Deadline::none())?;
    Ok(p.num_states())
}

fn check_matches(spec: &Spec, t: &Strategy) -> anyhow::Result<()> {
    if spec.alphabet() != t.alphabet() || spec.names() != t.meta().objectives {
        bail!("the strategy was synthesized for a different problem");
    }
    Ok(())
}

fn write_text(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Synth {
            spec,
            mode,
            engine,
            search,
            guarantee_set,
            full,
            order,
            timeout,
            output,
        } => {
            let problem = load_problem(&spec)?;
            let mut opts = Options::new(mode, engine);
            opts.search = match search {
                SearchArg::Linear => Search::Linear,
                SearchArg::Binary => Search::Binary,
            };
            opts.order = match order {
                OrderArg::StatesFirst => VarOrder::StatesFirst,
                OrderArg::AtomsFirst => VarOrder::AtomsFirst,
            };
            opts.full = full;
            if let Some(names) = guarantee_set {
                opts.guarantee_set = Some(problem.indices_of(&names)?);
            }
            if let Some(secs) = timeout {
                opts.limits.deadline = Deadline::after(Duration::from_secs_f64(secs));
            }
            let start = Instant::now();
            let out = synthesize(&problem, &opts)?;
            report(&problem, &out, start.elapsed());
            if let (Some(path), Some(t)) = (&output, &out.strategy) {
                write_text(Some(path), &format_strategy(t))?;
            }
            Ok(if out.realised() { EXIT_REALISED } else { EXIT_UNREALISED })
        }
        Command::Verify {
            spec,
            strategy,
            horizon,
            csv,
        } => {
            let problem = load_problem(&spec)?;
            let t = load_strategy(&strategy)?;
            check_matches(&problem, &t)?;
            let game = OracleGame::from_spec(&problem)?;
            let h = match horizon {
                Some(h) => h,
                None => product_size(&problem)?,
            };
            let min = model_check(&t, &game, h)?;
            let r = check_strategy(&t, &game)?;
            outln!("min observed value = {min} (horizon {h})");
            outln!("{}", r.to_text().trim_end());
            if let Some(path) = csv {
                write_text(Some(&path), &r.to_csv()?)?;
            }
            let ok = r.is_sound()
                && r.is_winning()
                && min >= t.meta().value
                && (!t.meta().mode.is_incremental() || r.is_incremental());
            Ok(if ok { EXIT_REALISED } else { EXIT_FAILURE })
        }
        Command::Play { spec, strategy } => {
            let problem = load_problem(&spec)?;
            let t = load_strategy(&strategy)?;
            check_matches(&problem, &t)?;
            let stdin = io::stdin();
            let mut out = io::stdout();
            play(&t, stdin.lock(), &mut out)?;
            Ok(EXIT_REALISED)
        }
        Command::Dot {
            file,
            objective,
            output,
        } => {
            let text = match load_strategy(&file) {
                Ok(t) if objective.is_none() => strategy_to_dot(&t),
                _ => {
                    let problem = load_problem(&file)?;
                    let compiled = problem.compile(&Limits::default())?;
                    match objective {
                        Some(name) => {
                            let i = problem
                                .index_of(&name)
                                .with_context(|| format!("no objective named `{name}`"))?;
                            dfa_to_dot(&compiled.components()[i])
                        }
                        None => product_to_dot(&product_with(
                            compiled.components(),
                            DEFAULT_ORACLE_STATES,
                            &Deadline::none(),
                        )?),
                    }
                }
            };
            write_text(output.as_deref(), &text)?;
            Ok(EXIT_REALISED)
        }
        Command::Bench {
            dir,
            timeout,
            csv,
            modes,
            engines,
        } => {
            let instances = Instance::discover(&dir)?;
            let config = BenchConfig {
                modes,
                engines,
                timeout: Duration::from_secs_f64(timeout),
                limits: Limits::default(),
            };
            let rows = match csv {
                Some(path) => {
                    let file = std::fs::File::create(&path)
                        .with_context(|| format!("cannot write {}", path.display()))?;
                    run_bench(&instances, &config, BufWriter::new(file))?
                }
                None => run_bench(&instances, &config, io::stdout())?,
            };
            let unfinished = rows.iter().filter(|r| r.status != "ok").count();
            eprintln!("{} runs, {unfinished} unfinished", rows.len());
            Ok(EXIT_REALISED)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FAILURE } else { EXIT_REALISED };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let resource = e
                .downcast_ref::<Error>()
                .is_some_and(Error::is_resource);
            ExitCode::from(if resource { EXIT_RESOURCE } else { EXIT_FAILURE })
        }
    }
}
