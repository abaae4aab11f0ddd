//! Symbolic and numerical verification toolkit for the semilinear
//! Klein-Gordon equation `u_tt = u_xx + cot(x) u_x + u_yy / sin(x)^2 + f(u)`
//! on the product manifold S^2 x R with metric `dt^2 - dx^2 - sin(x)^2 dy^2`.

// Tensor code reads best with explicit index loops.
#![allow(clippy::needless_range_loop)]

pub mod equation;
pub mod geom;
pub mod liesym;
pub mod noether;
pub mod numerics;
pub mod symcore;
