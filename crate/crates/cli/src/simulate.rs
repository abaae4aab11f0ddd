use std::fs::File;
use std::path::Path;

use kgsphere::numerics::{run, RunConfig};

use crate::report::{Check, RunReport};

/// Allowed flux-corrected drift, relative to the largest initial integral
/// (or absolute when all integrals start at zero).
pub const BUDGET_TOLERANCE: f64 = 1e-3;

/// Accepted range for the observed convergence order.
pub const ORDER_RANGE: (f64, f64) = (1.8, 2.2);

pub fn simulate(r: &mut RunReport, cfg: &RunConfig, csv: Option<&Path>) -> anyhow::Result<()> {
    let out = run(cfg)?;
    r.mark("simulate");
    let s = &out.summary;
    r.line(format!(
        "grid {}x{}, dt = {:.6e}, {} steps to t = {:.6}",
        s.grid.nx, s.grid.ny, s.grid.dt, s.steps, s.t_final
    ));
    let scale = s
        .monitors
        .iter()
        .map(|m| m.initial.abs())
        .fold(1.0, f64::max);
    for m in &s.monitors {
        r.line(format!(
            "  {}: initial {:.9e}, drift {:.3e}, wall flux {:.3e}, corrected {:.3e}",
            m.name, m.initial, m.drift, m.flux, m.corrected_drift
        ));
        let c = match m.relative {
            Some(rel) => Check::near(
                &format!("{} relative drift after flux correction", m.name),
                rel,
                0.0,
                BUDGET_TOLERANCE,
            ),
            None => Check::near(
                &format!("{} drift after flux correction", m.name),
                m.corrected_drift,
                0.0,
                BUDGET_TOLERANCE * scale,
            ),
        };
        r.check(c);
    }
    if let Some(e) = s.max_error {
        r.line(format!("  max error against the exact solution: {e:.3e}"));
    }
    for row in &s.ladder {
        let order = row.order.map_or("-".to_string(), |o| format!("{o:.3}"));
        r.line(format!(
            "  N = {:4}  dt = {:.4e}  error = {:.4e}  order = {order}",
            row.n, row.dt, row.max_error
        ));
    }
    if let Some(o) = s.ladder.last().and_then(|row| row.order) {
        r.check(Check::within(
            "observed convergence order",
            o,
            ORDER_RANGE.0,
            ORDER_RANGE.1,
        ));
    }
    if let Some(path) = csv {
        out.series.write_csv(File::create(path)?)?;
        r.input("csv", path.display());
    }
    r.data("summary", s);
    Ok(())
}
