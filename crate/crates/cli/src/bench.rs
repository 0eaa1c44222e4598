//! Rate benchmarks: a grid of independent cells, each one schedule run on
//! one objective over a list of stopping times.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use silverstep::gd::{descent_bound_slacks, run_source, EngineOptions, Retention, ScheduleSpec, StartSpec};
use silverstep::scalar::theta;
use silverstep::verify::{default_t_grid, rate_fit, worst_case_series, DESCENT_TOL};
use silverstep::{ObjectiveSpec, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cell {
    /// Row label in the rate table; defaults to the schedule kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub schedule: ScheduleSpec,
    pub objective: ObjectiveSpec,
    pub x1: StartSpec,
    /// Stopping times. When empty, the default grid `16, 32, ..., 16384`
    /// restricted to what a finite schedule can reach.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub horizons: Vec<usize>,
}

impl Cell {
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.schedule.name().to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub cells: Vec<Cell>,
    /// Output paths, relative to the working directory.
    #[serde(default = "default_table")]
    pub rate_table: std::path::PathBuf,
    #[serde(default = "default_summary")]
    pub summary: std::path::PathBuf,
    /// Worker threads; `None` defers to the command line, then the
    /// environment, then the number of cores.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
}

fn default_table() -> std::path::PathBuf {
    "rate_table.csv".into()
}

fn default_summary() -> std::path::PathBuf {
    "summary.json".into()
}

impl ExperimentConfig {
    /// Constant `alpha = 1`, anytime and silver on the scalar quadratic,
    /// i.e. on the worst-case oracle.
    pub fn default_rates() -> Self {
        let scalar = ObjectiveSpec::ScalarQuadratic { lambda: 1.0, x_star: 0.0, smoothness: 1.0 };
        let x1 = StartSpec::Point { x: vec![1.0] };
        let cell = |schedule| Cell { name: None, schedule, objective: scalar.clone(), x1: x1.clone(), horizons: vec![] };
        Self {
            cells: vec![
                cell(ScheduleSpec::Constant { alpha: 1.0 }),
                cell(ScheduleSpec::Anytime { c: None }),
                cell(ScheduleSpec::Silver { order: 14 }),
            ],
            rate_table: default_table(),
            summary: default_summary(),
            jobs: None,
        }
    }
}

/// How a row's value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// Worst case over all 1-smooth scalar quadratics with `|x_1 - x*| = 1`.
    Oracle,
    /// `f(x_T) - f*` of the run itself.
    Measured,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateRow {
    pub kind: String,
    pub t: usize,
    pub value: f64,
    pub measure: Measure,
}

impl RateRow {
    /// `value * T^theta`, bounded for the anytime schedule.
    pub fn scaled(&self) -> f64 {
        self.value * (self.t as f64).powf(theta::<f64>())
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RateTable {
    pub rows: Vec<RateRow>,
    /// Fitted log-log slope per kind, when at least five positive points exist.
    pub slopes: BTreeMap<String, f64>,
}

impl RateTable {
    fn new(mut rows: Vec<RateRow>) -> Self {
        rows.sort_by(|a, b| a.kind.cmp(&b.kind).then(a.t.cmp(&b.t)));
        let mut slopes = BTreeMap::new();
        for kind in rows.iter().map(|r| r.kind.clone()).collect::<std::collections::BTreeSet<_>>() {
            let pts: Vec<(f64, f64)> =
                rows.iter().filter(|r| r.kind == kind).map(|r| (r.t as f64, r.value)).collect();
            if let Ok(fit) = rate_fit(&pts) {
                slopes.insert(kind, fit.slope);
            }
        }
        Self { rows, slopes }
    }

    /// Columns `kind,T,value,scaled,measure,slope`; floats with 17
    /// significant digits, an empty slope when none was fitted.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "kind,T,value,scaled,measure,slope")?;
        for r in &self.rows {
            let slope = self.slopes.get(&r.kind).map(|s| format!("{s:.16e}")).unwrap_or_default();
            let measure = match r.measure {
                Measure::Oracle => "oracle",
                Measure::Measured => "measured",
            };
            writeln!(out, "{},{},{:.16e},{:.16e},{},{}", r.kind, r.t, r.value, r.scaled(), measure, slope)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CellOutcome {
    pub label: String,
    pub objective: String,
    pub horizons: Vec<usize>,
    /// Smallest relative slack of the per-step descent bound over the run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_descent_slack: Option<f64>,
    pub descent_pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchSummary {
    pub cells: Vec<CellOutcome>,
    pub slopes: BTreeMap<String, f64>,
    pub failures: usize,
    pub pass: bool,
}

fn run_cell(cell: &Cell) -> Result<(Vec<RateRow>, CellOutcome)> {
    let obj = cell.objective.build::<f64>()?;
    let x1 = cell.x1.point(&*obj)?;
    let source = cell.schedule.source::<f64>()?;
    let mut horizons = if cell.horizons.is_empty() {
        let reach = source.available().map_or(usize::MAX, |n| n + 1);
        default_t_grid().into_iter().filter(|&t| t <= reach).collect()
    } else {
        cell.horizons.clone()
    };
    horizons.sort_unstable();
    horizons.dedup();
    let t_max = horizons.last().copied().unwrap_or(1);
    let traj = run_source(&*obj, x1, &source, t_max, &EngineOptions { retention: Retention::Sparse, anchor: None })?;
    let slacks = descent_bound_slacks(&traj);
    let min_slack = slacks.iter().copied().reduce(f64::min);
    let descent_pass = slacks.iter().all(|&s| s >= -DESCENT_TOL);

    let label = cell.label();
    let rows = if matches!(cell.objective, ObjectiveSpec::ScalarQuadratic { .. }) {
        let values = traj.stepsizes();
        worst_case_series(&values, &horizons)
            .into_iter()
            .zip(&horizons)
            .map(|(value, &t)| RateRow { kind: label.clone(), t, value, measure: Measure::Oracle })
            .collect()
    } else {
        horizons
            .iter()
            .map(|&t| match traj.at(t).gap {
                Some(g) => Ok(RateRow { kind: label.clone(), t, value: (g * traj.smoothness).max(0.0), measure: Measure::Measured }),
                None => Err(silverstep::Error::Precondition(format!(
                    "objective {} has no known optimum",
                    cell.objective.family()
                ))),
            })
            .collect::<Result<_>>()?
    };
    let outcome = CellOutcome {
        label,
        objective: cell.objective.describe(),
        horizons,
        min_descent_slack: min_slack,
        descent_pass,
        error: None,
    };
    Ok((rows, outcome))
}

/// Runs every cell on a pool of `jobs` threads (all cores when `None`).
/// A failing cell is recorded in the summary; the others still produce rows.
pub fn run_bench(config: &ExperimentConfig, jobs: Option<usize>) -> Result<(RateTable, BenchSummary)> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs.or(config.jobs) {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build().map_err(|e| silverstep::Error::Precondition(e.to_string()))?;
    let results: Vec<Result<(Vec<RateRow>, CellOutcome)>> =
        pool.install(|| config.cells.par_iter().map(run_cell).collect());

    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for (cell, result) in config.cells.iter().zip(results) {
        match result {
            Ok((r, outcome)) => {
                rows.extend(r);
                cells.push(outcome);
            }
            Err(e) => cells.push(CellOutcome {
                label: cell.label(),
                objective: cell.objective.describe(),
                horizons: cell.horizons.clone(),
                min_descent_slack: None,
                descent_pass: false,
                error: Some(e.to_string()),
            }),
        }
    }
    let table = RateTable::new(rows);
    let failures = cells.iter().filter(|c| c.error.is_some() || !c.descent_pass).count();
    let summary = BenchSummary { cells, slopes: table.slopes.clone(), failures, pass: failures == 0 };
    Ok((table, summary))
}
