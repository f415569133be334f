//! File formats and the benchmark runner.

mod bench;
mod spec_file;
mod strategy_file;
mod syntcomp;

pub use bench::{bench_instance, run_bench, BenchConfig, BenchRow, Instance};
pub use spec_file::{format_spec, load_spec, parse_spec, parse_weight, save_spec};
pub use strategy_file::{format_strategy, load_strategy, parse_strategy, save_strategy};
pub use syntcomp::{load_syntcomp, parse_syntcomp};
