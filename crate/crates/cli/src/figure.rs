//! Data behind the bar plots of the first stepsizes and their join steps.

use std::io::Write;

use silverstep::schedule::{anytime_prefix, silver, AnytimeParams, FiniteSchedule};
use silverstep::{Error, Result};

/// The first `n` silver and anytime stepsizes. Silver is cut from the
/// smallest complete schedule holding `n` values.
pub fn figure_series(n: usize) -> Result<[(&'static str, FiniteSchedule<f64>); 2]> {
    if n < 2 {
        return Err(Error::Domain(format!("figure needs at least 2 steps, got {n}")));
    }
    let order = (n + 1).next_power_of_two().trailing_zeros();
    let s = silver::<f64>(order)?.truncated(n);
    let a = anytime_prefix::<f64>(n, AnytimeParams::default())?;
    Ok([("silver", s), ("anytime", a)])
}

/// Columns `series,index,value,is_join`, one row per stepsize.
pub fn write_figure_csv<W: Write>(n: usize, mut out: W) -> Result<()> {
    writeln!(out, "series,index,value,is_join")?;
    for (name, s) in figure_series(n)? {
        for (i, (v, join)) in s.steps().enumerate() {
            writeln!(out, "{name},{},{v:.16e},{}", i + 1, u8::from(join))?;
        }
    }
    Ok(())
}
