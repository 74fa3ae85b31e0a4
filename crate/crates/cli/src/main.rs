mod commands;
mod config;
mod error;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{Axis, RunConfig};
use crate::error::CliError;

/// Green functions and boundary-value solutions of the viscous wave equation
/// on a finite strip.
#[derive(Debug, Parser)]
#[command(name = "viscowave", version)]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true, env = "VISCOWAVE_CONFIG")]
    config: Option<PathBuf>,
    /// Wave speed.
    #[arg(long, global = true)]
    c: Option<f64>,
    /// Strip length.
    #[arg(long, global = true)]
    l: Option<f64>,
    /// Viscosity (default 0.05).
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the wave Green function, the viscous one and the slow-time approximant.
    Green(GreenArgs),
    /// Solve the boundary-value problem for built-in or tabulated data.
    Solve(SolveArgs),
    /// Run the numerical self-check battery.
    Verify(VerifyArgs),
    /// Evaluate the wave-to-viscous time transform of a signal.
    Transform(TransformArgs),
    /// Track the viscous-minus-approximant gap along a ladder of viscosities.
    Probe(ProbeArgs),
}

#[derive(Debug, Args)]
struct GreenArgs {
    /// Observation points, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    x: Option<Vec<f64>>,
    /// Source points, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    xi: Option<Vec<f64>>,
    /// Times, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    t: Option<Vec<f64>>,
    /// Mode cap of the series.
    #[arg(long)]
    modes: Option<usize>,
    /// Tail tolerance of the series.
    #[arg(long)]
    tail_tol: Option<f64>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Built-in data: sect5, zero, mode:N, pulse, smooth.
    #[arg(long)]
    data: Option<String>,
    /// CSV with columns x,f0,f1; overrides --data.
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    x: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    t: Option<Vec<f64>>,
    /// Number of modes synthesized.
    #[arg(long)]
    modes: Option<usize>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Replace every per-check tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Debug, Args)]
struct TransformArgs {
    /// mode:N, sine:OMEGA, constant:V or images:X:XI.
    #[arg(long)]
    signal: Option<String>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    t: Option<Vec<f64>>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// Strictly decreasing viscosities, comma separated.
    #[arg(long, value_delimiter = ',')]
    ladder: Option<Vec<f64>>,
    /// Sum exactly this many modes.
    #[arg(long)]
    modes: Option<usize>,
}

fn list(v: Option<Vec<f64>>) -> Option<Axis> {
    v.map(Axis::List)
}

fn merge(cli: Cli) -> Result<(RunConfig, Command), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.medium.c = cli.c.or(cfg.medium.c);
    cfg.medium.l = cli.l.or(cfg.medium.l);
    cfg.medium.eps = cli.eps.or(cfg.medium.eps);
    cfg.output = cli.output.or(cfg.output);
    match &cli.command {
        Command::Green(a) => {
            let g = &mut cfg.green;
            g.x = list(a.x.clone()).or(g.x.take());
            g.xi = list(a.xi.clone()).or(g.xi.take());
            g.t = list(a.t.clone()).or(g.t.take());
            g.max_modes = a.modes.or(g.max_modes);
            g.tail_tol = a.tail_tol.or(g.tail_tol);
        }
        Command::Solve(a) => {
            let s = &mut cfg.solve;
            s.data = a.data.clone().or(s.data.take());
            s.table = a.table.clone().or(s.table.take());
            s.x = list(a.x.clone()).or(s.x.take());
            s.t = list(a.t.clone()).or(s.t.take());
            s.modes = a.modes.or(s.modes);
        }
        Command::Verify(a) => cfg.verify.tolerance = a.tolerance.or(cfg.verify.tolerance),
        Command::Transform(a) => {
            let s = &mut cfg.transform;
            s.signal = a.signal.clone().or(s.signal.take());
            s.t = list(a.t.clone()).or(s.t.take());
            s.abs_tol = a.abs_tol.or(s.abs_tol);
            s.rel_tol = a.rel_tol.or(s.rel_tol);
        }
        Command::Probe(a) => {
            let s = &mut cfg.probe;
            s.x = a.x.or(s.x);
            s.xi = a.xi.or(s.xi);
            s.t = a.t.or(s.t);
            s.eps_ladder = a.ladder.clone().or(s.eps_ladder.take());
            s.modes = a.modes.or(s.modes);
        }
    }
    Ok((cfg, cli.command))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (cfg, command) = merge(cli)?;
    match command {
        Command::Green(_) => commands::green(&cfg),
        Command::Solve(_) => commands::solve(&cfg),
        Command::Verify(_) => commands::verify(&cfg),
        Command::Transform(_) => commands::transform(&cfg),
        Command::Probe(_) => commands::probe(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("viscowave: {e}");
            e.exit_code()
        }
    }
}
