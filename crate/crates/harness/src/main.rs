use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kirchhoff_harness::run::{
    constants_table, render_constants, render_summary, run_certify, run_simulate,
    write_certificate_row, write_time_series,
};
use kirchhoff_harness::sweep::{render_sweep_summary, run_sweep, write_sweep};
use kirchhoff_harness::{parse_config, parse_sweep, HarnessError, Overrides};

#[derive(Parser)]
#[command(
    name = "kirchhoff",
    version,
    about = "Simulate and certify energy decay of a damped Kirchhoff string"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured solver(s) and write the energy time series
    Simulate(CommonArgs),
    /// Run a simulation and check the exponential decay certificate
    Certify(CommonArgs),
    /// Certify every cell of the configured parameter grid
    Sweep(CommonArgs),
    /// Print the closed-form decay constants without simulating
    Constants(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// TOML configuration file
    config: PathBuf,
    /// Output file, overriding [output] csv
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed of the random_modes preset
    #[arg(long)]
    seed: Option<u64>,
    /// Number of retained sine modes
    #[arg(long)]
    modes: Option<usize>,
    /// Fixed RK4 time step
    #[arg(long)]
    dt: Option<f64>,
    /// Final time
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    /// Safety margin for the automatic epsilon, in (0, 1)
    #[arg(long)]
    kappa: Option<f64>,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            modes: self.modes,
            dt: self.dt,
            t_end: self.t_end,
            kappa: self.kappa,
        }
    }

    fn read(&self) -> Result<String, HarnessError> {
        fs::read_to_string(&self.config).map_err(|e| HarnessError::io(&self.config, e))
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, HarnessError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| HarnessError::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<(), HarnessError> {
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

/// Writes a table to `path` or to stdout, then prints `summary` to whichever
/// stream the table did not use.
fn emit<F>(path: Option<&Path>, summary: &str, table: F) -> Result<(), HarnessError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), HarnessError>,
{
    match path {
        Some(p) => {
            let mut f = create(p)?;
            table(&mut f)?;
            f.flush().map_err(|e| HarnessError::io(p, e))?;
            print!("{summary}");
        }
        None => {
            table(&mut io::stdout().lock())?;
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn pass_code(pass: bool) -> u8 {
    if pass {
        0
    } else {
        1
    }
}

fn execute(command: Command) -> Result<u8, HarnessError> {
    match command {
        Command::Simulate(args) => {
            let mut cfg = parse_config(&args.read()?)?;
            cfg.apply(&args.overrides())?;
            let sim = run_simulate(&cfg)?;
            let summary = render_summary(&sim);
            if let Some(p) = &cfg.output.report {
                write_text(p, &summary)?;
            }
            let csv = args.out.as_deref().or(cfg.output.csv.as_deref());
            emit(csv, &summary, |w| write_time_series(&sim, w))?;
            Ok(pass_code(sim.passed()))
        }
        Command::Certify(args) => {
            let mut cfg = parse_config(&args.read()?)?;
            cfg.apply(&args.overrides())?;
            let sim = run_certify(&cfg)?;
            let report = render_summary(&sim);
            print!("{report}");
            if let Some(p) = &cfg.output.report {
                write_text(p, &report)?;
            }
            if let Some(p) = args.out.as_deref().or(cfg.output.csv.as_deref()) {
                let mut f = create(p)?;
                write_certificate_row(&sim, &mut f)?;
                f.flush().map_err(|e| HarnessError::io(p, e))?;
            }
            Ok(pass_code(sim.passed()))
        }
        Command::Sweep(args) => {
            let mut sweep = parse_sweep(&args.read()?)?;
            sweep.apply(&args.overrides())?;
            let outcome = run_sweep(&sweep)?;
            let summary = render_sweep_summary(&outcome);
            if let Some(p) = &sweep.template.output.report {
                write_text(p, &summary)?;
            }
            let csv = args.out.as_deref().or(sweep.template.output.csv.as_deref());
            emit(csv, &summary, |w| write_sweep(&outcome, w))?;
            Ok(pass_code(outcome.passed() == outcome.cells.len()))
        }
        Command::Constants(args) => {
            let mut cfg = parse_config(&args.read()?)?;
            cfg.apply(&args.overrides())?;
            let table = render_constants(&constants_table(&cfg)?);
            print!("{table}");
            if let Some(p) = &args.out {
                write_text(p, &table)?;
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
