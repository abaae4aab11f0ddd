//! Finite-difference solver for the equation on the truncated sphere times
//! the line, with monitors for the conserved integrals.
//!
//! Sweeps run in parallel over grid rows. Every reduction first sums each
//! row with [`pairwise_sum`] and then combines the row totals with the same
//! scheme in row order, so results do not depend on the thread count.

mod grid;
mod kernel;
mod monitor;
mod residual;
mod run;
mod solver;

use thiserror::Error;

use crate::equation::FSpecError;
use crate::noether::NoetherError;
use crate::symcore::{EvalError, SymError};

pub use grid::{Boundary, Grid, DEFAULT_CFL, DEFAULT_X_MAX, DEFAULT_X_MIN};
pub use kernel::{Kernel, Params, Workspace};
pub use monitor::{boundary_flux, conserved_integral, Levels, Monitor};
pub use residual::{divergence_residual, operator_defect, sample_points, ResidualLadder};
pub use run::{
    convergence_order, manufactured_forcing, run, Companion, LadderRow, MonitorSummary, RunConfig,
    RunOutput, RunSummary, TimeSeries, PRESETS,
};
pub use solver::{spatial_operator, step, GridField, Problem};

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("time step {dt} exceeds the stability limit {limit}")]
    Cfl { dt: f64, limit: f64 },
    #[error("x-range [{x_min}, {x_max}] must lie strictly inside (0, pi)")]
    Domain { x_min: f64, x_max: f64 },
    #[error("grid {nx} x {ny}: need nx >= 2 and an even ny >= 4")]
    Resolution { nx: usize, ny: usize },
    #[error("non-finite value after step {step} (t = {t})")]
    NonFinite { step: usize, t: f64 },
    #[error("run config: {0}")]
    Config(String),
    #[error("expression `{text}`: {source}")]
    Expression { text: String, source: SymError },
    #[error("cannot evaluate `{expr}`: {source}")]
    Compile { expr: String, source: EvalError },
    #[error(transparent)]
    Source(#[from] FSpecError),
    #[error(transparent)]
    Current(#[from] NoetherError),
}

/// Recursive pairwise summation with a fixed split, error `O(ε log n)`.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if v.len() <= LEAF {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_is_accurate() {
        let v = vec![0.1; 1 << 20];
        assert!((pairwise_sum(&v) - 104857.6).abs() < 1e-9);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }
}
