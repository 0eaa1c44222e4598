use std::io::Write;

use super::Trajectory;
use crate::error::Result;
use crate::Scalar;

/// Writes `t,alpha,f_gap,grad_norm,is_join`. `alpha` is in units of `1/L`;
/// `f_gap` and `grad_norm` are in the units of `f`. Reals carry 17
/// significant digits; unknown or absent entries are left empty.
pub fn write_trajectory_csv<T: Scalar, W: Write>(traj: &Trajectory<T>, mut out: W) -> Result<()> {
    let l = traj.smoothness;
    writeln!(out, "t,alpha,f_gap,grad_norm,is_join")?;
    for r in &traj.records {
        let alpha = r.alpha.map(|a| fmt17(a.as_f64())).unwrap_or_default();
        let gap = r.gap.map(|g| fmt17((g * l).as_f64())).unwrap_or_default();
        let gn = fmt17((r.grad_norm() * l).as_f64());
        writeln!(out, "{},{},{},{},{}", r.t, alpha, gap, gn, u8::from(r.is_join))?;
    }
    Ok(())
}

pub(crate) fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}
