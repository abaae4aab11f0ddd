use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::NumericsError;

pub const DEFAULT_CFL: f64 = 0.5;
pub const DEFAULT_X_MIN: f64 = 0.15;
pub const DEFAULT_X_MAX: f64 = PI - 0.15;

/// Treatment of the two x-walls that cut off the polar caps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Ghost cells mirror the adjacent interior cells, so `u_x = 0` on the
    /// wall faces.
    #[default]
    Neumann,
    /// Ghost cells take the values of a supplied exact solution.
    Prescribed,
}

/// Cell-centred grid on `[x_min, x_max] x [0, 2π)`, periodic in y.
#[derive(Clone, Debug, Serialize)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
    pub dy: f64,
    pub dt: f64,
    pub cfl: f64,
    pub boundary: Boundary,
}

impl Grid {
    /// Grid with the largest stable step `cfl * min(dx, sin(x_min) dy)`.
    pub fn new(
        nx: usize,
        ny: usize,
        x_min: f64,
        x_max: f64,
        cfl: f64,
        boundary: Boundary,
    ) -> Result<Grid, NumericsError> {
        if !(x_min > 0.0 && x_max < PI && x_min < x_max) {
            return Err(NumericsError::Domain { x_min, x_max });
        }
        if nx < 2 || ny < 4 || !ny.is_multiple_of(2) {
            return Err(NumericsError::Resolution { nx, ny });
        }
        if !(cfl > 0.0 && cfl <= 1.0) {
            return Err(NumericsError::Cfl {
                dt: f64::NAN,
                limit: cfl,
            });
        }
        let dx = (x_max - x_min) / nx as f64;
        let dy = TAU / ny as f64;
        let mut g = Grid {
            nx,
            ny,
            x_min,
            x_max,
            dx,
            dy,
            dt: 0.0,
            cfl,
            boundary,
        };
        g.dt = g.dt_limit();
        Ok(g)
    }

    pub fn standard(nx: usize, ny: usize, boundary: Boundary) -> Result<Grid, NumericsError> {
        Grid::new(nx, ny, DEFAULT_X_MIN, DEFAULT_X_MAX, DEFAULT_CFL, boundary)
    }

    pub fn dt_limit(&self) -> f64 {
        self.cfl
            * self
                .dx
                .min(self.x_min.sin().min(self.x_max.sin()) * self.dy)
    }

    /// Shrink the step so that `t_end` is reached in a whole number of steps.
    pub fn fit_to(&mut self, t_end: f64) -> usize {
        let n = (t_end / self.dt_limit()).ceil().max(1.0) as usize;
        self.dt = t_end / n as f64;
        n
    }

    pub fn with_dt(mut self, dt: f64) -> Result<Grid, NumericsError> {
        let limit = self.dt_limit();
        if !(dt > 0.0 && dt <= limit * (1.0 + 1e-12)) {
            return Err(NumericsError::Cfl { dt, limit });
        }
        self.dt = dt;
        Ok(self)
    }

    /// Cell centre; `i = -1` and `i = nx` are the ghost cells.
    pub fn x(&self, i: isize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx
    }

    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.dy
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }

    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    /// Sample a function of `(x, y)` at the cell centres.
    pub fn sample(&self, mut f: impl FnMut(f64, f64) -> f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.nx {
            let x = self.x(i as isize);
            for j in 0..self.ny {
                out.push(f(x, self.y(j)));
            }
        }
        out
    }
}
