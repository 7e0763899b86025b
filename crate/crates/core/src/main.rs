use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use surfconv::experiment::{cmd_report, cmd_run, gen_matrix, load_config, resolve_seed, GenMatrixSpec};
use surfconv::rational::Rational;
use surfconv::surface::MatrixFile;
use surfconv::Error;

#[derive(Parser)]
#[command(name = "surfconv", version, about = "Convolution estimates on quadratic model surfaces")]
struct Cli {
    /// Worker threads for the numeric kernels (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Master seed; overrides SURFCONV_SEED and the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory (or file, for gen-matrix).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random integer coefficient matrix satisfying the minor condition.
    GenMatrix {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        /// Lower bound on every |l x l minor|, e.g. `1` or `3/2`.
        #[arg(long, default_value = "1")]
        threshold: Rational,
    },
    /// Run one experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Summarise every run report in a directory.
    Report {
        dir: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } | Error::Json(_) => 2,
        _ => 1,
    }
}

fn fail(e: Error, code: u8) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match cli.command {
        Command::GenMatrix { k, l, threshold } => {
            let seed = match resolve_seed(cli.seed, None) {
                Ok(s) => s,
                Err(e) => return fail(e, 2),
            };
            let m = match gen_matrix(&GenMatrixSpec { k, l, seed, threshold }) {
                Ok(m) => m,
                Err(e) => {
                    let code = if matches!(e, Error::InvalidDimension(_)) { 2 } else { 1 };
                    return fail(e, code);
                }
            };
            let mut text = serde_json::to_string_pretty(&MatrixFile::from(m)).expect("matrix serializes");
            text.push('\n');
            match cli.out {
                Some(p) => {
                    if let Err(e) = surfconv::experiment::run::write_atomic(&p, text.as_bytes()) {
                        return fail(e, 1);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Command::Run { config } => {
            let cfg = match load_config(&config, cli.seed) {
                Ok(c) => c,
                Err(e) => return fail(e, 2),
            };
            let dir = cli.out.or_else(|| cfg.config.output.clone()).unwrap_or_else(|| PathBuf::from("runs"));
            match cmd_run(&cfg, &dir) {
                Ok(out) => {
                    for v in &out.report.verdicts {
                        println!("{} {:<40} value={} tolerance={}", if v.passed { "PASS" } else { "FAIL" }, v.name, v.value, v.tolerance);
                    }
                    println!("{} {} ({:.1}s) -> {}", out.report.id, if out.report.passed { "PASS" } else { "FAIL" }, out.wall_seconds, dir.display());
                    if out.report.passed {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    let code = exit_code(&e);
                    fail(e, code)
                }
            }
        }
        Command::Report { dir } => {
            let dir = dir.or(cli.out).unwrap_or_else(|| PathBuf::from("runs"));
            match cmd_report(&dir) {
                Ok(s) => {
                    print!("{}", s.text);
                    if s.passed {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    let code = exit_code(&e);
                    fail(e, code)
                }
            }
        }
    }
}
