use serde::Serialize;

use super::{Kernel, NumericsError, Params, Problem, Workspace};
use crate::equation::wave_operator;
use crate::noether::ConservedCurrent;
use crate::symcore::{diff_multi, substitute_with, Atom, Coord, Expr};

/// Centred-difference divergence errors on a sequence of step sizes.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualLadder {
    pub h: Vec<f64>,
    pub max_error: Vec<f64>,
    /// `log2` of successive error ratios; the ladder halves `h`.
    pub orders: Vec<f64>,
}

impl ResidualLadder {
    pub fn final_order(&self) -> Option<f64> {
        self.orders.last().copied()
    }
}

/// Replace every `u` jet by the matching partial of the field `u(t, x, y)`.
fn plug_in(e: &Expr, u: &Expr) -> Result<Expr, NumericsError> {
    substitute_with(e, &mut |a, _| match a {
        Atom::Jet(j) if &*j.field == "u" => Some(diff_multi(u, j.orders)),
        _ => None,
    })
    .map_err(|source| NumericsError::Expression {
        text: e.to_string(),
        source,
    })
}

/// Interior sample points `(t, x, y)` away from the poles.
pub fn sample_points() -> Vec<[f64; 3]> {
    let mut pts = Vec::new();
    for &t in &[0.3, 1.1] {
        for &x in &[0.5, 1.0, 1.6, 2.2, 2.7] {
            for &y in &[0.4, 2.0, 4.5] {
                pts.push([t, x, y]);
            }
        }
    }
    pts
}

/// Finite-difference `D_t A^t + D_x A^x + D_y A^y` of a current evaluated on
/// the field `u`, compared with `expected` (a jet expression, zero for a
/// conserved current on a solution) at `points`, for each step in `hs`.
pub fn divergence_residual(
    u: &Expr,
    current: &ConservedCurrent,
    expected: &Expr,
    params: &Params,
    points: &[[f64; 3]],
    hs: &[f64],
) -> Result<ResidualLadder, NumericsError> {
    let txy = Coord::ALL.map(Atom::Coord);
    let comps = current
        .components
        .iter()
        .map(|c| Kernel::new(&plug_in(c, u)?, &txy, params))
        .collect::<Result<Vec<_>, _>>()?;
    let target = Kernel::new(&plug_in(expected, u)?, &txy, params)?;
    let mut ws = Workspace::new();
    let mut max_error = Vec::with_capacity(hs.len());
    for &h in hs {
        let mut worst: f64 = 0.0;
        for p in points {
            let mut div = 0.0;
            for (k, a) in comps.iter().enumerate() {
                let (mut fwd, mut back) = (*p, *p);
                fwd[k] += h;
                back[k] -= h;
                div += (a.eval(&fwd, &mut ws) - a.eval(&back, &mut ws)) / (2.0 * h);
            }
            worst = worst.max((div - target.eval(p, &mut ws)).abs());
        }
        max_error.push(worst);
    }
    Ok(ResidualLadder {
        h: hs.to_vec(),
        orders: super::convergence_order(&max_error),
        max_error,
    })
}

/// Largest gap between the discrete spatial operator applied to samples of
/// `u` at time `t` and the exact `u_xx + cot(x) u_x + u_yy / sin(x)^2`,
/// over cells at least two cells away from the walls.
pub fn operator_defect(
    p: &Problem,
    u: &Expr,
    t: f64,
    params: &Params,
) -> Result<f64, NumericsError> {
    let txy = Coord::ALL.map(Atom::Coord);
    let exact_op = Expr::jet_of("u", "tt") - wave_operator("u");
    let field = Kernel::new(u, &txy, params)?;
    let op = Kernel::new(&plug_in(&exact_op, u)?, &txy, params)?;
    let mut ws = Workspace::new();
    let g = &p.grid;
    let samples = g.sample(|x, y| field.eval(&[t, x, y], &mut ws));
    let discrete = super::spatial_operator(p, &samples, t);
    let mut worst: f64 = 0.0;
    for i in 2..g.nx - 2 {
        for j in 0..g.ny {
            let want = op.eval(&[t, g.x(i as isize), g.y(j)], &mut ws);
            worst = worst.max((discrete[g.index(i, j)] - want).abs());
        }
    }
    Ok(worst)
}
