use rayon::prelude::*;

use super::{Boundary, Grid, Kernel, NumericsError, Params, Workspace};
use crate::equation::FSpec;
use crate::symcore::{Atom, Coord, Expr, Jet};

/// Grid, compiled source terms and boundary data for one run.
#[derive(Clone, Debug)]
pub struct Problem {
    pub grid: Grid,
    source: Option<Kernel>,
    forcing: Option<Kernel>,
    exact: Option<Kernel>,
}

fn txy() -> [Atom; 3] {
    Coord::ALL.map(Atom::Coord)
}

impl Problem {
    /// `forcing` and `exact` are functions of (t, x, y). The source must be
    /// a concrete function of `u`.
    pub fn new(
        grid: Grid,
        spec: &FSpec,
        forcing: Option<&Expr>,
        exact: Option<&Expr>,
        params: &Params,
    ) -> Result<Problem, NumericsError> {
        let f = spec.source();
        let source = if f.is_zero() {
            None
        } else {
            Some(Kernel::new(
                &f,
                &[Atom::Jet(Jet::new("u", [0, 0, 0]))],
                params,
            )?)
        };
        let forcing = forcing
            .map(|g| Kernel::new(g, &txy(), params))
            .transpose()?;
        let exact = exact.map(|e| Kernel::new(e, &txy(), params)).transpose()?;
        if grid.boundary == Boundary::Prescribed && exact.is_none() {
            return Err(NumericsError::Config(
                "prescribed boundary needs an exact solution".into(),
            ));
        }
        Ok(Problem {
            grid,
            source,
            forcing,
            exact,
        })
    }

    /// The same problem with the forcing removed, for a companion field.
    pub fn homogeneous(&self) -> Problem {
        Problem {
            forcing: None,
            ..self.clone()
        }
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact_at(&self, t: f64, x: f64, y: f64, ws: &mut Workspace) -> Option<f64> {
        self.exact.as_ref().map(|k| k.eval(&[t, x, y], ws))
    }

    /// Exact solution on the cell centres.
    pub fn sample_exact(&self, t: f64) -> Option<Vec<f64>> {
        let k = self.exact.as_ref()?;
        let mut ws = Workspace::new();
        Some(self.grid.sample(|x, y| k.eval(&[t, x, y], &mut ws)))
    }

    /// Ghost rows at `i = -1` and `i = nx` for the level `u` at time `t`.
    pub fn ghost_rows(&self, u: &[f64], t: f64) -> (Vec<f64>, Vec<f64>) {
        let g = &self.grid;
        match (g.boundary, &self.exact) {
            (Boundary::Prescribed, Some(k)) => {
                let mut ws = Workspace::new();
                let row = |i: isize, ws: &mut Workspace| {
                    (0..g.ny)
                        .map(|j| k.eval(&[t, g.x(i), g.y(j)], ws))
                        .collect::<Vec<_>>()
                };
                (row(-1, &mut ws), row(g.nx as isize, &mut ws))
            }
            _ => (u[..g.ny].to_vec(), u[(g.nx - 1) * g.ny..].to_vec()),
        }
    }

    fn rhs_extra(&self, t: f64, x: f64, y: f64, u: f64, ws: &mut Workspace) -> f64 {
        let mut r = 0.0;
        if let Some(f) = &self.source {
            r += f.eval(&[u], ws);
        }
        if let Some(g) = &self.forcing {
            r += g.eval(&[t, x, y], ws);
        }
        r
    }

    /// `u_tt` from the discrete equation at every cell.
    fn acceleration_row(
        &self,
        u: &[f64],
        ghosts: &(Vec<f64>, Vec<f64>),
        t: f64,
        i: usize,
        out: &mut [f64],
    ) {
        let g = &self.grid;
        let ny = g.ny;
        let x = g.x(i as isize);
        let row = &u[i * ny..(i + 1) * ny];
        let lo = if i == 0 {
            &ghosts.0[..]
        } else {
            &u[(i - 1) * ny..i * ny]
        };
        let hi = if i + 1 == g.nx {
            &ghosts.1[..]
        } else {
            &u[(i + 1) * ny..(i + 2) * ny]
        };
        let (s, cot) = (x.sin(), x.cos() / x.sin());
        let (idx2, idy2) = (1.0 / (g.dx * g.dx), 1.0 / (s * s * g.dy * g.dy));
        let half_idx = 0.5 / g.dx;
        let mut ws = Workspace::new();
        for j in 0..ny {
            let (jm, jp) = (
                if j == 0 { ny - 1 } else { j - 1 },
                if j + 1 == ny { 0 } else { j + 1 },
            );
            let c = row[j];
            let lap = (hi[j] - 2.0 * c + lo[j]) * idx2
                + cot * (hi[j] - lo[j]) * half_idx
                + (row[jp] - 2.0 * c + row[jm]) * idy2;
            out[j] = lap + self.rhs_extra(t, x, g.y(j), c, &mut ws);
        }
    }

    /// Discrete right-hand side `Δ_h u + f(u) + g` of the level at time `t`.
    pub fn acceleration(&self, u: &[f64], t: f64) -> Vec<f64> {
        let ghosts = self.ghost_rows(u, t);
        let mut out = vec![0.0; u.len()];
        out.par_chunks_mut(self.grid.ny)
            .enumerate()
            .for_each(|(i, row)| self.acceleration_row(u, &ghosts, t, i, row));
        out
    }
}

/// The discrete spatial operator alone: centred second differences, the
/// centred first difference for `cot(x) u_x`, periodic y.
pub fn spatial_operator(p: &Problem, u: &[f64], t: f64) -> Vec<f64> {
    let bare = Problem {
        source: None,
        forcing: None,
        ..p.clone()
    };
    bare.acceleration(u, t)
}

/// Two time levels of the discrete solution.
#[derive(Clone, Debug)]
pub struct GridField {
    pub prev: Vec<f64>,
    pub curr: Vec<f64>,
    pub t: f64,
    pub steps: usize,
    /// +1 forward in time, -1 after [`GridField::reverse`].
    pub direction: f64,
    /// Accumulated boundary flux per monitor.
    pub flux: Vec<f64>,
}

impl GridField {
    /// Start from `u(t0)` and `u_t(t0)` with a second-order Taylor step back.
    pub fn from_data(p: &Problem, u0: Vec<f64>, v0: &[f64], t0: f64) -> GridField {
        let dt = p.grid.dt;
        let a0 = p.acceleration(&u0, t0);
        let prev = u0
            .iter()
            .zip(v0)
            .zip(&a0)
            .map(|((u, v), a)| u - dt * v + 0.5 * dt * dt * a)
            .collect();
        GridField {
            prev,
            curr: u0,
            t: t0,
            steps: 0,
            direction: 1.0,
            flux: Vec::new(),
        }
    }

    /// Start from the exact solution at `t0 - dt` and `t0`.
    pub fn from_exact(p: &Problem, t0: f64) -> Option<GridField> {
        let prev = p.sample_exact(t0 - p.grid.dt)?;
        let curr = p.sample_exact(t0)?;
        Some(GridField {
            prev,
            curr,
            t: t0,
            steps: 0,
            direction: 1.0,
            flux: Vec::new(),
        })
    }

    /// Swap the levels so that further steps run backwards in time.
    pub fn reverse(&mut self, dt: f64) {
        std::mem::swap(&mut self.prev, &mut self.curr);
        self.t -= self.direction * dt;
        self.direction = -self.direction;
    }

    /// Time of the `prev` level.
    pub fn t_prev(&self, dt: f64) -> f64 {
        self.t - self.direction * dt
    }
}

/// Leapfrog `u^{n+1} = 2u^n − u^{n−1} + dt² (Δ_h u^n + f(u^n) + g)`.
pub fn step(mut state: GridField, p: &Problem) -> Result<GridField, NumericsError> {
    let dt = p.grid.dt;
    let a = p.acceleration(&state.curr, state.t);
    let dt2 = dt * dt;
    let ny = p.grid.ny;
    state
        .prev
        .par_chunks_mut(ny)
        .zip(state.curr.par_chunks(ny))
        .zip(a.par_chunks(ny))
        .for_each(|((next, curr), acc)| {
            for j in 0..next.len() {
                next[j] = 2.0 * curr[j] - next[j] + dt2 * acc[j];
            }
        });
    std::mem::swap(&mut state.prev, &mut state.curr);
    state.t += state.direction * dt;
    state.steps += 1;
    if state.curr.iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::NonFinite {
            step: state.steps,
            t: state.t,
        });
    }
    Ok(state)
}
