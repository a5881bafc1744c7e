//! `dissres`: figure data and parameter sweeps for dissipative tunneling.
//!
//! All inputs and outputs are dimensionless: energies in `V0`, widths in
//! `lambda0`, times and rates in `tau* = d / v0`.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dissres_core::{resonance_table, run_sweep, Error, Grid, Quantity, SweepRequest, SweepResult};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICS: u8 = 3;

#[derive(Parser)]
#[command(name = "dissres", version, about = "Transmission and traversal times through a damped rectangular barrier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// |w_D|^2 against energy (default gammas 1e-3 and 5e-3 plus g0)
    Figure3(SweepArgs),
    /// |<tau>| - tau_cl against energy above the barrier
    Figure4(SweepArgs),
    /// |C_D(tau)| at eps = 1.3 (default gamma 5e-3 plus g0)
    Figure5(SweepArgs),
    /// |w_D|^2 over an energy range
    Transmission(SweepArgs),
    /// |<tau_D>| - tau_cl over an energy range
    Traversal(SweepArgs),
    /// |C_D(tau)| over a time range at one energy
    Cumulative(SweepArgs),
    /// Over-barrier resonance table
    Resonances(ResonanceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file, stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave the generation time out of JSON output
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 5.0)]
    d_over_lambda0: f64,
    /// Damping rate gamma * tau*, repeatable; the g0 column is always written
    #[arg(long)]
    gamma_star: Vec<f64>,
    #[arg(long, default_value_t = 100.0)]
    omega_star: f64,
    /// Energies as lo:hi:n
    #[arg(long)]
    epsilon_range: Option<String>,
    /// Times tau / tau* as lo:hi:n
    #[arg(long)]
    tau_range: Option<String>,
    /// Energy of a cumulative sweep
    #[arg(long)]
    epsilon: Option<f64>,
    /// Absolute tolerance of the damped amplitude
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Worker threads, all cores when absent
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ResonanceArgs {
    #[arg(long, default_value_t = 5.0)]
    d_over_lambda0: f64,
    #[arg(long, default_value_t = 4)]
    n_max: usize,
    #[command(flatten)]
    output: OutputArgs,
}

struct Preset {
    quantity: Quantity,
    range: Option<&'static str>,
    gammas: &'static [f64],
    epsilon: Option<f64>,
}

fn preset(cmd: &Command) -> Preset {
    let (quantity, range, gammas, epsilon): (_, _, &'static [f64], _) = match cmd {
        Command::Figure3(_) => (Quantity::Transmission, Some("0.05:5:256"), &[1e-3, 5e-3], None),
        Command::Figure4(_) => (Quantity::MeanTau, Some("1.01:5:256"), &[], None),
        Command::Figure5(_) => (Quantity::Cumulative, Some("0:30:301"), &[5e-3], Some(1.3)),
        Command::Transmission(_) => (Quantity::Transmission, None, &[], None),
        Command::Traversal(_) => (Quantity::MeanTau, None, &[], None),
        Command::Cumulative(_) => (Quantity::Cumulative, None, &[], None),
        Command::Resonances(_) => unreachable!(),
    };
    Preset { quantity, range, gammas, epsilon }
}

fn build_request(p: &Preset, a: &SweepArgs) -> Result<SweepRequest, String> {
    let (given, flag) = match p.quantity {
        Quantity::Cumulative => (&a.tau_range, "--tau-range"),
        _ => (&a.epsilon_range, "--epsilon-range"),
    };
    let range = given.as_deref().or(p.range).ok_or_else(|| format!("{flag} is required"))?;
    let grid: Grid = range.parse().map_err(|e: Error| e.to_string())?;
    let gamma_star = if a.gamma_star.is_empty() { p.gammas.to_vec() } else { a.gamma_star.clone() };
    let epsilon = match p.quantity {
        Quantity::Cumulative => Some(a.epsilon.or(p.epsilon).ok_or("--epsilon is required")?),
        _ => None,
    };
    let req = SweepRequest {
        quantity: p.quantity,
        grid,
        epsilon,
        d_over_lambda0: a.d_over_lambda0,
        omega_star: a.omega_star,
        gamma_star,
        tol: a.tol,
    };
    req.validate().map_err(|e| e.to_string())?;
    Ok(req)
}

fn emit(result: &SweepResult, out: &OutputArgs) -> io::Result<()> {
    let text = match out.format {
        Format::Csv => result.to_csv(),
        Format::Json => {
            let stamp = (!out.no_timestamp)
                .then(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0));
            result.to_json(stamp)
        }
    };
    match &out.out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn run_command(cli: Cli) -> Result<ExitCode, (u8, String)> {
    let config = |m: String| (EXIT_CONFIG, m);
    let (result, output) = match &cli.command {
        Command::Resonances(a) => (resonance_table(a.d_over_lambda0, a.n_max).map_err(|e| config(e.to_string()))?, &a.output),
        Command::Figure3(a)
        | Command::Figure4(a)
        | Command::Figure5(a)
        | Command::Transmission(a)
        | Command::Traversal(a)
        | Command::Cumulative(a) => {
            let req = build_request(&preset(&cli.command), a).map_err(config)?;
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(n) = a.threads {
                if n == 0 {
                    return Err(config("--threads must be at least 1".into()));
                }
                pool = pool.num_threads(n);
            }
            let pool = pool.build().map_err(|e| (1, e.to_string()))?;
            let result = pool.install(|| run_sweep(&req)).map_err(|e| (EXIT_NUMERICS, e.to_string()))?;
            (result, &a.output)
        }
    };
    emit(&result, output).map_err(|e| (1, format!("writing output: {e}")))?;
    if result.is_complete() {
        return Ok(ExitCode::SUCCESS);
    }
    for f in &result.failures {
        eprintln!("row {} column {}: {}", f.row, f.column, f.message);
    }
    eprintln!("{} point(s) failed, partial output written", result.failures.len());
    Ok(ExitCode::from(EXIT_NUMERICS))
}

fn main() -> ExitCode {
    match run_command(Cli::parse()) {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("dissres: {msg}");
            ExitCode::from(code)
        }
    }
}
