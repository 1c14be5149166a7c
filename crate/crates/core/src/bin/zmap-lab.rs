use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use zmap_lab::config::{load_config, Experiment, OutputFormat};
use zmap_lab::runner::run;

const USAGE: &str = "usage: zmap-lab <spin-map|spin-osc|band-sweep|bias-sweep> --config <path> \
                     [--out <path>] [--format csv|jsonl] [--workers N] [--seed N]";

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_IO: u8 = 1;

struct Args {
    experiment: Experiment,
    config: PathBuf,
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
    workers: Option<usize>,
    seed: Option<u64>,
}

fn parse_args(mut argv: impl Iterator<Item = String>) -> Result<Args, String> {
    let experiment = argv
        .next()
        .ok_or("missing subcommand")?
        .parse::<Experiment>()?;
    let mut config = None;
    let mut args = Args {
        experiment,
        config: PathBuf::new(),
        out: None,
        format: None,
        workers: None,
        seed: None,
    };
    while let Some(flag) = argv.next() {
        let mut value = || argv.next().ok_or(format!("{flag} needs a value"));
        match flag.as_str() {
            "--config" => config = Some(PathBuf::from(value()?)),
            "--out" => args.out = Some(PathBuf::from(value()?)),
            "--format" => args.format = Some(value()?.parse()?),
            "--workers" => {
                let v = value()?;
                let n: usize = v.parse().map_err(|_| format!("bad worker count `{v}`"))?;
                if n == 0 {
                    return Err("--workers must be at least 1".into());
                }
                args.workers = Some(n);
            }
            "--seed" => {
                let v = value()?;
                args.seed = Some(v.parse().map_err(|_| format!("bad seed `{v}`"))?);
            }
            other => return Err(format!("unknown argument `{other}`")),
        }
    }
    args.config = config.ok_or("--config is required")?;
    Ok(args)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ZMAP_LOG", "warn")).init();

    let args = match parse_args(std::env::args().skip(1)) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}\n{USAGE}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let mut cfg = match load_config(&args.config, Some(args.experiment)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Some(out) = args.out {
        cfg.output_path = Some(out);
    }
    if let Some(format) = args.format {
        cfg.format = format;
    }
    if let Some(workers) = args.workers {
        cfg.workers = workers;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }

    let artifact = match run(&cfg) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("numerical failure: {e}");
            return ExitCode::from(EXIT_NUMERICAL);
        }
    };

    let written = match &cfg.output_path {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            artifact.write(&mut w, cfg.format)?;
            w.flush()
        }),
        None => {
            let mut w = io::stdout().lock();
            artifact.write(&mut w, cfg.format).and_then(|_| w.flush())
        }
    };
    if let Err(e) = written {
        eprintln!("cannot write output: {e}");
        return ExitCode::from(EXIT_IO);
    }
    ExitCode::SUCCESS
}
