//! Tensor calculus on a coordinate chart.

mod curvature;
mod killing;
mod metric;

use thiserror::Error;

use crate::symcore::{EvalError, SymError};

pub use curvature::{
    christoffel, curvature, laplace_beltrami, laplace_beltrami_divergence, ricci, riemann,
    scalar_curvature, sectional_curvature, Christoffel, CurvatureBundle, CONVENTION,
};
pub use killing::{killing_check, lie_derivative_metric, KillingComponent, KillingReport};
pub use metric::ChartMetric;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("metric must be square with 1 to 3 coordinates, got {0}")]
    Dimension(usize),
    #[error("coordinate `{0}` listed twice")]
    DuplicateCoordinate(String),
    #[error("unknown coordinate `{0}`; charts use t, x and y")]
    UnknownCoordinate(String),
    #[error("metric component depends on `{0}`, which is not a chart coordinate")]
    ForeignCoordinate(String),
    #[error("metric is not symmetric at ({0},{1})")]
    Asymmetric(usize, usize),
    #[error("metric determinant vanishes identically")]
    Singular,
    #[error("unknown metric preset `{0}`")]
    UnknownPreset(String),
    #[error("metric entry key `{0}` must be two chart coordinates separated by a comma")]
    BadEntryKey(String),
    #[error("metric entry `{key}`: {source}")]
    Entry { key: String, source: SymError },
    #[error("metric file: {0}")]
    File(String),
    #[error("vector field has a component along `{0}`, outside the chart")]
    FieldLeavesChart(String),
    #[error("plane is degenerate at the sample point")]
    DegeneratePlane,
    #[error(transparent)]
    Eval(EvalError),
}
