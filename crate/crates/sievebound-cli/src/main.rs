use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use sievebound_cli::commands::{cmd_eval, cmd_optimize, cmd_table, cmd_verify, ParamSpec};
use sievebound_cli::config;
use sievebound_cli::report::{Format, Report};
use sievebound_cli::CliError;

#[derive(Parser)]
#[command(name = "sievebound", version, about = "Sieve-theoretic variational bounds")]
struct Cli {
    /// key=value configuration file; explicit flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// output format: text, csv, or json
    #[arg(long, global = true)]
    format: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute a bound table against the stored targets
    Table {
        /// table name: B, C, D, E, or G
        name: String,
    },
    /// Evaluate the functionals at a polynomial
    Eval {
        #[arg(long)]
        regime: Option<String>,
        #[arg(long)]
        k: Option<u32>,
        /// rational, e.g. 1/4
        #[arg(long)]
        theta: Option<String>,
        #[arg(long)]
        ell: Option<String>,
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        eta: Option<String>,
        /// polynomial literal "c0,c1,...[@basis]"
        #[arg(long)]
        poly: Option<String>,
        /// basis when the literal has none: x, 1-x, or 1+eps-x
        #[arg(long)]
        basis: Option<String>,
        /// quadrature tolerance; exact evaluation when omitted
        #[arg(long)]
        tol: Option<String>,
    },
    /// Minimize the quotient over a shifted power basis
    Optimize {
        #[arg(long)]
        regime: Option<String>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        theta: Option<String>,
        #[arg(long)]
        ell: Option<String>,
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        eta: Option<String>,
        #[arg(long)]
        degree: Option<String>,
        /// comma-separated epsilon grid to scan (epsilon regime)
        #[arg(long)]
        eps_grid: Option<String>,
        #[arg(long)]
        tol: Option<String>,
    },
    /// Run a verification suite: identities, collapse, or tables
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        k: Option<u32>,
        /// sample count, e.g. 1e6
        #[arg(long)]
        samples: Option<String>,
        #[arg(long)]
        seed: Option<String>,
        /// z-score tolerance for the collapse suite
        #[arg(long)]
        tol: Option<String>,
    },
}

fn parse_num<T: FromStr>(slot: &Option<String>, key: &str) -> Result<Option<T>, CliError> {
    match slot {
        None => Ok(None),
        Some(s) => s
            .parse::<T>()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("cannot parse --{key} value {s:?}"))),
    }
}

fn parse_samples(slot: &Option<String>) -> Result<Option<u64>, CliError> {
    match slot {
        None => Ok(None),
        Some(s) => s
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite() && *v >= 1.0)
            .map(|v| Some(v as u64))
            .ok_or_else(|| CliError::Usage(format!("cannot parse --samples value {s:?}"))),
    }
}

fn run(cli: Cli) -> Result<(Report, i32), CliError> {
    let file = match &cli.config {
        Some(path) => config::load(path)?,
        None => BTreeMap::new(),
    };
    let fill = |slot: &mut Option<String>, key: &str| config::fill(slot, &file, key);
    match cli.command {
        Command::Table { name } => Ok((cmd_table(&name)?, 0)),
        Command::Eval {
            mut regime,
            mut k,
            mut theta,
            mut ell,
            mut eps,
            mut eta,
            mut poly,
            mut basis,
            mut tol,
        } => {
            for (slot, key) in [
                (&mut regime, "regime"),
                (&mut theta, "theta"),
                (&mut ell, "ell"),
                (&mut eps, "eps"),
                (&mut eta, "eta"),
                (&mut poly, "poly"),
                (&mut basis, "basis"),
                (&mut tol, "tol"),
            ] {
                fill(slot, key);
            }
            if k.is_none() {
                let mut raw = None;
                fill(&mut raw, "k");
                k = parse_num::<u32>(&raw, "k")?;
            }
            let spec = ParamSpec {
                regime,
                k,
                theta,
                ell,
                eps,
                eta,
            };
            let poly = poly.ok_or_else(|| CliError::Usage("--poly is required".into()))?;
            let tol = parse_num::<f64>(&tol, "tol")?;
            Ok((cmd_eval(&spec, &poly, basis.as_deref(), tol)?, 0))
        }
        Command::Optimize {
            mut regime,
            mut k,
            mut theta,
            mut ell,
            mut eps,
            mut eta,
            mut degree,
            mut eps_grid,
            mut tol,
        } => {
            for (slot, key) in [
                (&mut regime, "regime"),
                (&mut theta, "theta"),
                (&mut ell, "ell"),
                (&mut eps, "eps"),
                (&mut eta, "eta"),
                (&mut degree, "degree"),
                (&mut eps_grid, "eps-grid"),
                (&mut tol, "tol"),
            ] {
                fill(slot, key);
            }
            if k.is_none() {
                let mut raw = None;
                fill(&mut raw, "k");
                k = parse_num::<u32>(&raw, "k")?;
            }
            let spec = ParamSpec {
                regime,
                k,
                theta,
                ell,
                eps,
                eta,
            };
            let degree = parse_num::<usize>(&degree, "degree")?
                .ok_or_else(|| CliError::Usage("--degree is required".into()))?;
            let tol = parse_num::<f64>(&tol, "tol")?;
            Ok((cmd_optimize(&spec, degree, eps_grid.as_deref(), tol)?, 0))
        }
        Command::Verify {
            mut suite,
            k,
            mut samples,
            mut seed,
            mut tol,
        } => {
            fill(&mut suite, "suite");
            fill(&mut samples, "samples");
            fill(&mut seed, "seed");
            fill(&mut tol, "tol");
            let suite = suite.ok_or_else(|| CliError::Usage("--suite is required".into()))?;
            let samples = parse_samples(&samples)?.unwrap_or(1_000_000);
            let seed = parse_num::<u64>(&seed, "seed")?.unwrap_or(42);
            let z_tol = parse_num::<f64>(&tol, "tol")?.unwrap_or(4.0);
            let report = cmd_verify(&suite, k, samples, seed, z_tol)?;
            let code = if report.all_passed() { 0 } else { 3 };
            Ok((report, code))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut format = cli.format.clone();
    if format.is_none() {
        if let Some(path) = &cli.config {
            if let Ok(map) = config::load(path) {
                format = map.get("format").cloned();
            }
        }
    }
    let format = match format.as_deref().map(Format::from_str).transpose() {
        Ok(f) => f.unwrap_or(Format::Text),
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok((report, code)) => {
            print!("{}", report.render(format));
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
