//! Binary entry point: flag parsing, config merging, and dispatch to the
//! verify / eval / sweep commands.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use regl4::config::{parse_complex, RunConfig};
use regl4::eval::{evaluate, EvalParams};
use regl4::sweep::{self, Axis};
use regl4::verify;
use regl4::CliError;

#[derive(Parser)]
#[command(
    name = "regl4",
    version,
    about = "Checks closed forms for twisted Eisenstein data: character sums, completed \
             L-functions, regularized pairings, and the fourth-moment constant term."
)]
struct Cli {
    /// Config file with one key=value per line; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Levels, comma separated.
    #[arg(long = "N", global = true, value_delimiter = ',', value_name = "LEVELS")]
    levels: Option<Vec<u64>>,

    /// Character selector: a Conrey index, `quadratic`, or `first-even`.
    #[arg(long = "char", global = true, value_name = "SELECTOR")]
    character: Option<String>,

    /// First factor of the level decomposition.
    #[arg(long, global = true)]
    q1: Option<u64>,

    /// Height of the diagonal point.
    #[arg(long = "T", global = true, allow_hyphen_values = true)]
    t: Option<f64>,

    /// Heights for the T-axis sweep, comma separated.
    #[arg(long = "T-grid", global = true, value_delimiter = ',', allow_hyphen_values = true)]
    t_grid: Option<Vec<f64>>,

    /// Deformation grid, comma separated.
    #[arg(long = "eta-grid", global = true, value_delimiter = ',')]
    eta_grid: Option<Vec<f64>>,

    /// Base step of the derivative stencils.
    #[arg(long = "fd-step", global = true)]
    fd_step: Option<f64>,

    /// Relative tolerance for tunable evaluations.
    #[arg(long = "rel-tol", global = true)]
    rel_tol: Option<f64>,

    /// Prime-sum cutoff for the zero-distribution diagnostics.
    #[arg(long, global = true)]
    cutoff: Option<f64>,

    /// Worker count for sweeps; 0 uses the library default.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print one line per check.
    Verify {
        /// all, characters, special, lfun, eisenstein, regprod, or i2.
        #[arg(default_value = "all")]
        suite: String,
    },
    /// Evaluate one quantity and print a JSON record.
    Eval {
        /// gauss_sum, lfun, xi, lambda_completed, fourier_coeff,
        /// triple_product, h_factor, f_factor, i2_constant, i2_report,
        /// or grh_report.
        quantity: String,
        /// Complex argument `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        /// Modulus for character-level quantities (defaults to the first --N).
        #[arg(long)]
        modulus: Option<u64>,
        /// Nonzero coefficient index.
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        w1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        w2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        w3: Option<String>,
        /// Factor index 1..=4.
        #[arg(long)]
        j: Option<usize>,
        /// Derivative order (reserved for report quantities).
        #[arg(long)]
        order: Option<u32>,
        /// Outer deformation.
        #[arg(long)]
        eta: Option<f64>,
        /// Inner deformation (defaults to 0).
        #[arg(long = "eta-inner")]
        eta_inner: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        s1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        s2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        s3: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        s4: Option<String>,
    },
    /// Emit a sweep table as CSV.
    Sweep {
        /// n (across levels), t (across heights), or eta (across the grid).
        #[arg(long, default_value = "n")]
        axis: String,
    },
}

fn build_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    if let Some(v) = &cli.levels {
        cfg.levels = v.clone();
    }
    if let Some(v) = &cli.character {
        cfg.character = v.clone();
    }
    if let Some(v) = cli.q1 {
        cfg.q1 = v;
    }
    if let Some(v) = cli.t {
        cfg.t = v;
    }
    if let Some(v) = &cli.t_grid {
        cfg.t_grid = v.clone();
    }
    if let Some(v) = &cli.eta_grid {
        cfg.eta_grid = v.clone();
    }
    if let Some(v) = cli.fd_step {
        cfg.fd_step = v;
    }
    if let Some(v) = cli.rel_tol {
        cfg.rel_tol = v;
    }
    if let Some(v) = cli.cutoff {
        cfg.cutoff = v;
    }
    if let Some(v) = cli.threads {
        cfg.threads = v;
    }
    if let Some(v) = &cli.output {
        cfg.output = Some(v.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn opt_complex(flag: &str, v: &Option<String>) -> Result<Option<regl4_core::Complex>, CliError> {
    v.as_deref().map(|s| parse_complex(flag, s)).transpose()
}

/// Routes the result text: to `--output` when given, to stdout otherwise.
fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = build_config(cli)?;
    match &cli.command {
        Command::Verify { suite } => {
            let out = verify::run(suite, &cfg)?;
            print!("{}", out.report);
            if out.failed > 0 {
                return Err(CliError::Check(format!("{} check(s) failed", out.failed)));
            }
            Ok(())
        }
        Command::Eval {
            quantity,
            s,
            modulus,
            n,
            w1,
            w2,
            w3,
            j,
            order,
            eta,
            eta_inner,
            s1,
            s2,
            s3,
            s4,
        } => {
            let params = EvalParams {
                s: opt_complex("s", s)?,
                modulus: *modulus,
                n: *n,
                w1: opt_complex("w1", w1)?,
                w2: opt_complex("w2", w2)?,
                w3: opt_complex("w3", w3)?,
                j: *j,
                order: *order,
                eta: *eta,
                eta_inner: *eta_inner,
                s1: opt_complex("s1", s1)?,
                s2: opt_complex("s2", s2)?,
                s3: opt_complex("s3", s3)?,
                s4: opt_complex("s4", s4)?,
            };
            let record = evaluate(quantity, &params, &cfg)?;
            let mut text = serde_json::to_string_pretty(&record)
                .map_err(|e| CliError::Numeric(format!("cannot serialize record: {e}")))?;
            text.push('\n');
            emit(&cfg, &text)
        }
        Command::Sweep { axis } => {
            let table = sweep::run(Axis::parse(axis)?, &cfg)?;
            emit(&cfg, &table)
        }
    }
}

fn main() {
    // Clap itself exits 2 on malformed flags, matching the usage code.
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
