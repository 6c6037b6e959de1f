use std::path::PathBuf;
use std::process::ExitCode;

use bursty_relay::AntennaConfig;
use bursty_relay_cli::{
    cmd_check, cmd_formulas, cmd_simulate, cmd_sweep, emit, output_path, read_trace, CliError,
    RunSpec, OUT_DIR_ENV,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bursty-relay",
    version,
    about = "Bursty two-user interference channel with a relay"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the outer bounds and the achievable per-user DoF at one point.
    Formulas {
        m: usize,
        n: usize,
        l: usize,
        /// Arrival probability, as a decimal or a fraction such as 1/3.
        p: String,
    },
    /// Write the bounds (and optionally simulated DoF) over a grid of p as CSV.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compare the closed-form necessary condition with the numeric oracle.
    Check {
        m_max: usize,
        n_max: usize,
        l_max: usize,
        #[arg(long, default_value_t = bursty_relay::formulas::DEFAULT_ORACLE_GRID)]
        grid: usize,
    },
    /// Run the scheme for the configured antennas and report the empirical DoF.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        /// Forced traffic trace, one "s1 s2" pair per line.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// JSONL slot log of the first run.
        #[arg(long)]
        log: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON run spec.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    slots: Option<usize>,
    #[arg(long)]
    drain: Option<usize>,
    /// Field prime (default 2^31 - 1).
    #[arg(long)]
    prime: Option<u64>,
}

impl RunArgs {
    fn spec(&self) -> Result<RunSpec, CliError> {
        let mut spec = match &self.config {
            Some(path) => RunSpec::load(path)?,
            None => RunSpec::default(),
        };
        spec.seed = self.seed.unwrap_or(spec.seed);
        spec.slots = self.slots.unwrap_or(spec.slots);
        spec.drain_slots = self.drain.unwrap_or(spec.drain_slots);
        spec.prime = self.prime.unwrap_or(spec.prime);
        spec.validate()?;
        Ok(spec)
    }
}

fn execute(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Formulas { m, n, l, p } => {
            emit(&cmd_formulas(AntennaConfig::new(m, n, l), &p)?, None)?;
        }
        Command::Sweep { run, csv } => {
            let text = cmd_sweep(&run.spec()?)?;
            let path = csv.map(|p| output_path(&p)).or_else(|| {
                std::env::var_os(OUT_DIR_ENV).map(|d| PathBuf::from(d).join("sweep.csv"))
            });
            emit(&text, path.as_deref())?;
        }
        Command::Check {
            m_max,
            n_max,
            l_max,
            grid,
        } => {
            let report = cmd_check(m_max, n_max, l_max, grid)?;
            emit(&report.render(), None)?;
            if !report.disagreements.is_empty() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Simulate { run, trace, log } => {
            let spec = run.spec()?;
            let trace = trace.map(|p| read_trace(&p)).transpose()?;
            let log = log.map(|p| output_path(&p));
            let report = cmd_simulate(&spec, trace, log.as_deref())?;
            emit(&report.render(), None)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
