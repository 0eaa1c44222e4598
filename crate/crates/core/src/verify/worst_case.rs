//! Worst case of a schedule over 1-D quadratics:
//! `F_T = sup_{0 < lambda <= 1} (lambda/2) prod_{i<T} (1 - lambda alpha_i)^2`,
//! the largest `f(x_T) - f*` over `f = lambda/2 x^2` with `|x_1 - x*| = 1`.

use rayon::prelude::*;

use crate::Scalar;

/// Number of geometric grid points on `[LAMBDA_FLOOR, 1]`.
pub const LAMBDA_GRID: usize = 10_000;
pub const LAMBDA_FLOOR: f64 = 1e-8;

const GOLDEN_ITERS: usize = 60;
/// Factors multiplied together before one logarithm is taken.
const CHUNK: usize = 8;

fn grid() -> Vec<f64> {
    let lo = LAMBDA_FLOOR.ln();
    (0..LAMBDA_GRID)
        .map(|i| (lo * (1.0 - i as f64 / (LAMBDA_GRID - 1) as f64)).exp())
        .collect()
}

/// `ln F(lambda)`; `-inf` when some factor vanishes.
fn log_value(values: &[f64], lambda: f64) -> f64 {
    let mut acc = (lambda / 2.0).ln();
    for chunk in values.chunks(CHUNK) {
        let p: f64 = chunk.iter().map(|a| (1.0 - lambda * a).powi(2)).product();
        acc += p.ln();
    }
    acc
}

/// Golden-section search for the maximum of `ln F` over `[lo, hi]` in
/// `ln lambda`.
fn refine(values: &[f64], lo: f64, hi: f64) -> f64 {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = log_value(values, c.exp());
    let mut fd = log_value(values, d.exp());
    for _ in 0..GOLDEN_ITERS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = log_value(values, c.exp());
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = log_value(values, d.exp());
        }
    }
    fc.max(fd)
}

fn refine_around(values: &[f64], grid: &[f64], best: usize, grid_log: f64) -> f64 {
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    refine(values, lo, hi).max(grid_log).exp()
}

fn argmax(log_values: &[f64]) -> (usize, f64) {
    log_values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best })
}

/// `F_T` for the schedule prefix `values` (so `T = values.len() + 1`),
/// from the grid maximum refined by golden-section search in its
/// neighbouring cells.
pub fn worst_case_quadratic<T: Scalar>(values: &[T]) -> f64 {
    let values: Vec<f64> = values.iter().map(|v| v.as_f64()).collect();
    let grid = grid();
    let logs: Vec<f64> = grid.iter().map(|&l| log_value(&values, l)).collect();
    let (best, best_log) = argmax(&logs);
    refine_around(&values, &grid, best, best_log)
}

/// Incremental evaluation of `F_T` as stepsizes are appended. Each push
/// costs one pass over the grid; [`WorstCaseSeries::value`] adds the
/// golden-section refinement over the stored prefix.
#[derive(Clone, Debug)]
pub struct WorstCaseSeries {
    grid: Vec<f64>,
    log_acc: Vec<f64>,
    pending: Vec<f64>,
    pending_count: usize,
    values: Vec<f64>,
}

impl Default for WorstCaseSeries {
    fn default() -> Self {
        Self::new()
    }
}

impl WorstCaseSeries {
    pub fn new() -> Self {
        let grid = grid();
        let log_acc = grid.iter().map(|l| (l / 2.0).ln()).collect();
        Self { pending: vec![1.0; grid.len()], grid, log_acc, pending_count: 0, values: Vec::new() }
    }

    /// Current horizon `T` (number of stepsizes plus one).
    pub fn horizon(&self) -> usize {
        self.values.len() + 1
    }

    pub fn push(&mut self, alpha: f64) {
        for (p, &l) in self.pending.iter_mut().zip(&self.grid) {
            *p *= (1.0 - l * alpha).powi(2);
        }
        self.values.push(alpha);
        self.pending_count += 1;
        if self.pending_count == CHUNK {
            self.flush();
        }
    }

    fn flush(&mut self) {
        for (acc, p) in self.log_acc.iter_mut().zip(self.pending.iter_mut()) {
            *acc += p.ln();
            *p = 1.0;
        }
        self.pending_count = 0;
    }

    /// Best grid point: index and `ln F` there.
    pub fn grid_max(&self) -> (usize, f64) {
        let logs: Vec<f64> = self
            .log_acc
            .iter()
            .zip(&self.pending)
            .map(|(a, p)| a + p.ln())
            .collect();
        argmax(&logs)
    }

    /// Grid-only lower estimate of the current `F_T`.
    pub fn grid_value(&self) -> f64 {
        self.grid_max().1.exp()
    }

    /// Refined `F_T` for the current prefix.
    pub fn value(&self) -> f64 {
        let (best, best_log) = self.grid_max();
        refine_around(&self.values, &self.grid, best, best_log)
    }
}

/// `F_T` for every horizon in `horizons` (each `<= values.len() + 1`),
/// returned in the order given. Refinements run in parallel.
pub fn worst_case_series(values: &[f64], horizons: &[usize]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..horizons.len()).collect();
    order.sort_by_key(|&i| horizons[i]);
    let mut series = WorstCaseSeries::new();
    let mut cells = vec![(0usize, 0f64); horizons.len()];
    for &i in &order {
        let t = horizons[i];
        assert!(t >= 1 && t <= values.len() + 1, "horizon {t} outside the schedule");
        while series.horizon() < t {
            series.push(values[series.horizon() - 1]);
        }
        cells[i] = series.grid_max();
    }
    let grid = series.grid;
    horizons
        .par_iter()
        .zip(cells.par_iter())
        .map(|(&t, &(best, best_log))| refine_around(&values[..t - 1], &grid, best, best_log))
        .collect()
}
