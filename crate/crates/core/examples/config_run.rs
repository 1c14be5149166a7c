//! Parses a configuration, runs it and writes the CSV artifact to stdout.
//!
//! `cargo run --example config_run -- [path]`; without a path a small
//! spin-map configuration is used.

use zmap_lab::config::{load_config, Experiment, RunConfig};
use zmap_lab::runner::run;

const SAMPLE: &str = "\
experiment = SpinMap
spin.species = both
spin.method = both
map.theta_count = 4
map.phi_count = 3
";

fn main() {
    let cfg = match std::env::args().nth(1) {
        Some(path) => load_config(path.as_ref(), None),
        None => RunConfig::parse(SAMPLE, Some(Experiment::SpinMap)),
    }
    .unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(2)
    });
    let artifact = run(&cfg).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(3)
    });
    artifact.write(&mut std::io::stdout().lock(), cfg.format).expect("stdout");
}
