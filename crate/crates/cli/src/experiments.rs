use lzd_core::dynamics::{self, schmidt_initial, uniform_grid, PauliState};
use lzd_core::entanglement::survival_time;
use lzd_core::ode::SolverStats;
use lzd_core::{Result, Trajectory};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Experiment, ExperimentConfig, SweepVariable};

/// Time samples used for the secular check when only the final negativity
/// is reported.
pub const CHECK_SAMPLES: usize = 101;
/// Survival-time search: samples per window and chunks per window.
pub const CROSSING_SAMPLES: f64 = 20_000.0;
pub const CROSSING_CHUNKS: f64 = 50.0;
/// Bound the oracle comparison is reported against.
pub const ORACLE_TOL: f64 = 1e-6;

const SECULAR_WARNING: &str = "secular approximation not valid";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Text(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecularSummary {
    pub samples: usize,
    pub violations: usize,
    pub min_margin: f64,
}

impl Default for SecularSummary {
    fn default() -> Self {
        SecularSummary {
            samples: 0,
            violations: 0,
            min_margin: f64::INFINITY,
        }
    }
}

impl SecularSummary {
    fn add(&mut self, ok: bool, margin: f64) {
        self.samples += 1;
        self.violations += usize::from(!ok);
        self.min_margin = self.min_margin.min(margin);
    }

    fn add_trajectory(&mut self, t: &Trajectory) {
        for (&ok, &m) in t.secular_ok.iter().zip(&t.secular_margin) {
            self.add(ok, m);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleSummary {
    pub max_deviation: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
    pub max_trace_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub secular: SecularSummary,
    pub oracle: Option<OracleSummary>,
    pub solver_stats: SolverStats,
}

impl Table {
    /// Numeric column by name, non-numeric cells as NaN.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[i] {
                    Cell::Num(x) => x,
                    _ => f64::NAN,
                })
                .collect(),
        )
    }
}

/// Runs the configured experiment on the current rayon pool. Rows come back
/// in sweep order.
pub fn run(cfg: &ExperimentConfig) -> Result<Table> {
    match cfg.experiment {
        Experiment::TauEntVsT => tau_ent_vs_t(cfg),
        Experiment::NegVsTheta | Experiment::NegVsRatio => final_negativity_sweep(cfg),
        Experiment::NegVsTime => neg_vs_time(cfg),
        Experiment::CustomTrajectory if cfg.sweep.variable == SweepVariable::Time => {
            custom_trajectory(cfg)
        }
        Experiment::CustomTrajectory => custom_sweep(cfg),
    }
}

fn initial(cfg: &ExperimentConfig) -> Result<PauliState> {
    schmidt_initial(cfg.eta)
}

fn tau_ent_vs_t(cfg: &ExperimentConfig) -> Result<Table> {
    let init = initial(cfg)?;
    let window = cfg.t_end - cfg.t_int;
    let solver = cfg.solver.solver_config();
    let rows: Vec<_> = cfg
        .sweep
        .values()
        .into_par_iter()
        .map(|temp| {
            let c = cfg.with_value(SweepVariable::Temperature, temp);
            let (lz, bath) = (c.lz()?, c.bath()?);
            let formula = survival_time(&bath, &lz)?;
            let crossing = dynamics::negativity_crossing(
                &init,
                c.t_int,
                c.t_end,
                &lz,
                &bath,
                c.threshold,
                window / CROSSING_SAMPLES,
                window / CROSSING_CHUNKS,
                &solver,
            )?;
            Ok((temp, formula, crossing))
        })
        .collect::<Result<_>>()?;
    let mut table = Table {
        columns: vec!["T".into(), "tau_ent_formula".into(), "tau_ent_ode".into()],
        rows: Vec::new(),
        secular: SecularSummary::default(),
        oracle: None,
        solver_stats: SolverStats::default(),
    };
    for (temp, formula, crossing) in rows {
        table
            .secular
            .add(crossing.all_secular, crossing.min_secular_margin);
        table.solver_stats.merge(&crossing.solver_stats);
        table.rows.push(vec![
            Cell::Num(temp),
            Cell::Num(formula),
            Cell::Num(crossing.time.unwrap_or(f64::INFINITY)),
        ]);
    }
    Ok(table)
}

fn run_to_end(c: &ExperimentConfig, init: &PauliState) -> Result<Trajectory> {
    let grid = uniform_grid(c.t_int, c.t_end, CHECK_SAMPLES);
    dynamics::evolve_numeric(
        init,
        c.t_int,
        c.t_end,
        &c.lz()?,
        &c.bath()?,
        &grid,
        &c.solver.solver_config(),
    )
}

fn compare_columns(cfg: &ExperimentConfig) -> Vec<String> {
    let var = cfg.experiment.compare_variable();
    cfg.compare_values()
        .into_iter()
        .map(|x| match (var, x) {
            (Some(var), Some(x)) => format!("negativity[{}={}]", var.label(), x),
            _ => "negativity".to_string(),
        })
        .collect()
}

fn with_compare(cfg: &ExperimentConfig, x: Option<f64>) -> ExperimentConfig {
    match (cfg.experiment.compare_variable(), x) {
        (Some(var), Some(x)) => cfg.with_value(var, x),
        _ => cfg.clone(),
    }
}

/// Negativity at `t_end` over the sweep, one column per comparison value.
fn final_negativity_sweep(cfg: &ExperimentConfig) -> Result<Table> {
    let init = initial(cfg)?;
    let xs = cfg.sweep.values();
    let cmp = cfg.compare_values();
    let jobs: Vec<(f64, Option<f64>)> = xs
        .iter()
        .flat_map(|&x| cmp.iter().map(move |&y| (x, y)))
        .collect();
    let trajs: Vec<Trajectory> = jobs
        .par_iter()
        .map(|&(x, y)| {
            run_to_end(
                &with_compare(cfg, y).with_value(cfg.sweep.variable, x),
                &init,
            )
        })
        .collect::<Result<_>>()?;
    let mut columns = vec![cfg.sweep.variable.column().to_string()];
    columns.extend(compare_columns(cfg));
    let mut table = Table {
        columns,
        rows: Vec::new(),
        secular: SecularSummary::default(),
        oracle: None,
        solver_stats: SolverStats::default(),
    };
    for (i, &x) in xs.iter().enumerate() {
        let mut row = vec![Cell::Num(x)];
        for t in &trajs[i * cmp.len()..(i + 1) * cmp.len()] {
            table.secular.add_trajectory(t);
            table.solver_stats.merge(&t.solver_stats);
            row.push(Cell::Num(t.final_negativity()));
        }
        table.rows.push(row);
    }
    Ok(table)
}

fn neg_vs_time(cfg: &ExperimentConfig) -> Result<Table> {
    let init = initial(cfg)?;
    let grid = cfg.sweep.values();
    let solver = cfg.solver.solver_config();
    let trajs: Vec<Trajectory> = cfg
        .compare_values()
        .into_par_iter()
        .map(|y| {
            let c = with_compare(cfg, y);
            dynamics::evolve_numeric(
                &init,
                c.t_int,
                c.t_end,
                &c.lz()?,
                &c.bath()?,
                &grid,
                &solver,
            )
        })
        .collect::<Result<_>>()?;
    let mut columns = vec!["t".to_string()];
    columns.extend(compare_columns(cfg));
    let mut table = Table {
        columns,
        rows: Vec::new(),
        secular: SecularSummary::default(),
        oracle: None,
        solver_stats: SolverStats::default(),
    };
    for t in &trajs {
        table.secular.add_trajectory(t);
        table.solver_stats.merge(&t.solver_stats);
    }
    for (i, &t) in grid.iter().enumerate() {
        let mut row = vec![Cell::Num(t)];
        row.extend(trajs.iter().map(|tr| Cell::Num(tr.negativity[i])));
        table.rows.push(row);
    }
    Ok(table)
}

fn warning(ok: bool) -> Cell {
    Cell::Text(if ok {
        String::new()
    } else {
        SECULAR_WARNING.to_string()
    })
}

fn custom_trajectory(cfg: &ExperimentConfig) -> Result<Table> {
    let init = initial(cfg)?;
    let grid = cfg.sweep.values();
    let (lz, bath) = (cfg.lz()?, cfg.bath()?);
    let solver = cfg.solver.solver_config();
    let numeric =
        || dynamics::evolve_numeric(&init, cfg.t_int, cfg.t_end, &lz, &bath, &grid, &solver);
    let (traj, master) = if cfg.oracle {
        let (a, b) = rayon::join(numeric, || {
            dynamics::evolve_full_master(&init, cfg.t_int, cfg.t_end, &lz, &bath, &grid, &solver)
        });
        (a?, Some(b?))
    } else {
        (numeric()?, None)
    };

    let mut columns = vec!["t".to_string()];
    columns.extend(PauliState::COORDINATE_NAMES.iter().map(|s| s.to_string()));
    columns.extend(
        [
            "negativity",
            "min_eigenvalue",
            "secular_margin",
            "secular_ok",
            "warning",
        ]
        .map(String::from),
    );
    if master.is_some() {
        columns.extend(
            PauliState::COORDINATE_NAMES
                .iter()
                .map(|s| format!("master_{s}")),
        );
        columns.extend(["master_negativity", "master_trace_error", "deviation"].map(String::from));
    }

    let mut table = Table {
        columns,
        rows: Vec::new(),
        secular: SecularSummary::default(),
        oracle: None,
        solver_stats: traj.solver_stats,
    };
    table.secular.add_trajectory(&traj);
    for i in 0..traj.len() {
        let mut row = vec![Cell::Num(traj.times[i])];
        row.extend(traj.states[i].coordinates().map(Cell::Num));
        row.push(Cell::Num(traj.negativity[i]));
        row.push(Cell::Num(traj.min_eigenvalue[i]));
        row.push(Cell::Num(traj.secular_margin[i]));
        row.push(Cell::Bool(traj.secular_ok[i]));
        row.push(warning(traj.secular_ok[i]));
        if let Some(m) = &master {
            row.extend(m.states[i].coordinates().map(Cell::Num));
            row.push(Cell::Num(m.negativity[i]));
            row.push(Cell::Num(m.trace_error[i]));
            row.push(Cell::Num(traj.states[i].max_abs_diff(&m.states[i])));
        }
        table.rows.push(row);
    }
    if let Some(m) = &master {
        let max_deviation = traj.max_deviation(m);
        table.oracle = Some(OracleSummary {
            max_deviation,
            tolerance: ORACLE_TOL,
            within_tolerance: max_deviation <= ORACLE_TOL,
            max_trace_error: m.trace_error.iter().fold(0.0, |a, &b| a.max(b.abs())),
        });
        table.solver_stats.merge(&m.solver_stats);
    }
    Ok(table)
}

/// Custom sweep over a model parameter: final negativity and validity per
/// point.
fn custom_sweep(cfg: &ExperimentConfig) -> Result<Table> {
    let init = initial(cfg)?;
    let xs = cfg.sweep.values();
    let trajs: Vec<Trajectory> = xs
        .par_iter()
        .map(|&x| run_to_end(&cfg.with_value(cfg.sweep.variable, x), &init))
        .collect::<Result<_>>()?;
    let mut table = Table {
        columns: vec![
            cfg.sweep.variable.column().to_string(),
            "negativity".into(),
            "min_eigenvalue".into(),
            "secular_margin".into(),
            "secular_ok".into(),
            "warning".into(),
        ],
        rows: Vec::new(),
        secular: SecularSummary::default(),
        oracle: None,
        solver_stats: SolverStats::default(),
    };
    for (&x, t) in xs.iter().zip(&trajs) {
        table.secular.add_trajectory(t);
        table.solver_stats.merge(&t.solver_stats);
        let ok = t.all_secular();
        table.rows.push(vec![
            Cell::Num(x),
            Cell::Num(t.final_negativity()),
            Cell::Num(
                t.min_eigenvalue
                    .iter()
                    .copied()
                    .fold(f64::INFINITY, f64::min),
            ),
            Cell::Num(t.min_secular_margin()),
            Cell::Bool(ok),
            warning(ok),
        ]);
    }
    Ok(table)
}
