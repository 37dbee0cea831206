//! Parameter sweeps over damping, nonlinearity, amplitude and seed.

use std::io::Write;

use kirchhoff_core::energy::InequalityMargins;
use rayon::prelude::*;

use crate::config::{RunConfig, SweepConfig};
use crate::error::HarnessError;
use crate::run::{num, run_certify, Simulation};

/// Columns of the aggregated sweep CSV.
pub const SWEEP_HEADER: [&str; 27] = [
    "cell",
    "damping",
    "b",
    "amplitude",
    "seed",
    "dimensionless_damping",
    "epsilon",
    "mu0",
    "mu",
    "M",
    "E0",
    "max_normalized_ratio",
    "worst_sample_time",
    "decay_verdict",
    "amplitude_max_ratio",
    "amplitude_verdict",
    "min_scheefer",
    "min_schwarz",
    "min_g_upper",
    "min_g_lower",
    "min_sandwich_lo",
    "min_sandwich_hi",
    "min_dg_bound",
    "margin_verdict",
    "status",
    "note",
    "error",
];

/// One grid point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub index: usize,
    pub damping: f64,
    pub b: f64,
    pub amplitude: f64,
    pub seed: u64,
}

/// Condensed result of one cell; samples are not retained.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub initial_energy: f64,
    pub dimensionless_damping: f64,
    pub epsilon: f64,
    pub mu0: f64,
    pub mu: f64,
    pub big_m: f64,
    pub max_normalized_ratio: f64,
    pub worst_sample_time: f64,
    pub decay_verdict: bool,
    pub amplitude_max_ratio: f64,
    pub amplitude_verdict: bool,
    pub min_margins: InequalityMargins,
    pub margin_verdict: bool,
    pub samples: usize,
    pub note: Option<&'static str>,
}

impl CellSummary {
    pub fn passed(&self) -> bool {
        self.decay_verdict && self.amplitude_verdict && self.margin_verdict
    }

    fn from_simulation(sim: &Simulation) -> Self {
        let c = sim.constants.expect("certified run has constants");
        let r = sim
            .certificate
            .as_ref()
            .expect("certified run has a report");
        CellSummary {
            initial_energy: sim.initial_energy(),
            dimensionless_damping: c.dimensionless_damping,
            epsilon: c.epsilon,
            mu0: c.mu0,
            mu: c.mu,
            big_m: c.big_m,
            max_normalized_ratio: r.max_normalized_ratio,
            worst_sample_time: r.worst_sample_time,
            decay_verdict: r.verdict,
            amplitude_max_ratio: r.amplitude_max_ratio,
            amplitude_verdict: r.amplitude_verdict,
            min_margins: sim.min_margins,
            margin_verdict: sim.margins_pass().unwrap_or(true),
            samples: sim.samples.len(),
            note: c.note(),
        }
    }
}

#[derive(Debug)]
pub struct CellOutcome {
    pub cell: Cell,
    pub result: Result<CellSummary, HarnessError>,
}

impl CellOutcome {
    pub fn passed(&self) -> bool {
        self.result.as_ref().is_ok_and(CellSummary::passed)
    }
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub cells: Vec<CellOutcome>,
}

impl SweepOutcome {
    pub fn passed(&self) -> usize {
        self.cells.iter().filter(|c| c.passed()).count()
    }

    pub fn errored(&self) -> usize {
        self.cells.iter().filter(|c| c.result.is_err()).count()
    }

    pub fn failed(&self) -> usize {
        self.cells.len() - self.passed() - self.errored()
    }
}

/// Cells in row-major order: damping, then b, then amplitude, then seed.
pub fn cells(sweep: &SweepConfig) -> Vec<Cell> {
    let mut out = Vec::with_capacity(sweep.num_cells());
    for &damping in &sweep.damping {
        for &b in &sweep.b {
            for &amplitude in &sweep.amplitude {
                for &seed in &sweep.seed {
                    out.push(Cell {
                        index: out.len(),
                        damping,
                        b,
                        amplitude,
                        seed,
                    });
                }
            }
        }
    }
    out
}

/// The template with one cell's values substituted.
pub fn cell_config(template: &RunConfig, cell: &Cell) -> Result<RunConfig, HarnessError> {
    let mut cfg = template.clone();
    cfg.params = template
        .params
        .with_damping(cell.damping)?
        .with_b_coeff(cell.b)?;
    cfg.initial = template
        .initial
        .with_amplitude(cell.amplitude)
        .with_seed(cell.seed);
    cfg.output = Default::default();
    Ok(cfg)
}

fn run_cell(template: &RunConfig, cell: &Cell) -> Result<CellSummary, HarnessError> {
    let cfg = cell_config(template, cell)?;
    Ok(CellSummary::from_simulation(&run_certify(&cfg)?))
}

/// Certifies every cell on a pool of `sweep.workers` threads. Rows come back
/// in cell order whatever the scheduling, and a failing cell only affects
/// its own row.
pub fn run_sweep(sweep: &SweepConfig) -> Result<SweepOutcome, HarnessError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(sweep.workers)
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;
    let grid = cells(sweep);
    let cells = pool.install(|| {
        grid.par_iter()
            .map(|cell| CellOutcome {
                cell: *cell,
                result: run_cell(&sweep.template, cell),
            })
            .collect()
    });
    Ok(SweepOutcome { cells })
}

fn flag(pass: bool) -> String {
    if pass { "pass" } else { "fail" }.to_string()
}

pub fn write_sweep<W: Write>(outcome: &SweepOutcome, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for o in &outcome.cells {
        let c = &o.cell;
        let mut row = vec![
            c.index.to_string(),
            num(c.damping),
            num(c.b),
            num(c.amplitude),
            c.seed.to_string(),
        ];
        match &o.result {
            Ok(s) => {
                let m = &s.min_margins;
                row.extend([
                    num(s.dimensionless_damping),
                    num(s.epsilon),
                    num(s.mu0),
                    num(s.mu),
                    num(s.big_m),
                    num(s.initial_energy),
                    num(s.max_normalized_ratio),
                    num(s.worst_sample_time),
                    flag(s.decay_verdict),
                    num(s.amplitude_max_ratio),
                    flag(s.amplitude_verdict),
                    num(m.scheefer),
                    num(m.schwarz),
                    num(m.g_upper),
                    num(m.g_lower),
                    num(m.sandwich_lo),
                    num(m.sandwich_hi),
                    num(m.dg_bound),
                    flag(s.margin_verdict),
                    flag(s.passed()),
                    s.note.unwrap_or_default().to_string(),
                    String::new(),
                ]);
            }
            Err(e) => {
                row.extend(std::iter::repeat_n(String::new(), 19));
                row.extend(["error".to_string(), String::new(), e.to_string()]);
            }
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| HarnessError::io("<csv>", e))?;
    Ok(())
}

pub fn render_sweep_summary(outcome: &SweepOutcome) -> String {
    format!(
        "cells = {}\npassed = {}\nfailed = {}\nerrored = {}\n",
        outcome.cells.len(),
        outcome.passed(),
        outcome.failed(),
        outcome.errored()
    )
}
