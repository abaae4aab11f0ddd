use rayon::prelude::*;

use super::{pairwise_sum, Kernel, NumericsError, Params, Problem, Workspace};
use crate::noether::ConservedCurrent;
use crate::symcore::{Atom, Coord, Jet};

/// Three consecutive levels of one field, centred on time `t`. `dt` is the
/// signed step from `before` to `at`.
#[derive(Clone, Copy, Debug)]
pub struct Levels<'a> {
    pub before: &'a [f64],
    pub at: &'a [f64],
    pub after: &'a [f64],
    pub t: f64,
    pub dt: f64,
}

/// Compiled time and x components of a current.
#[derive(Clone, Debug)]
pub struct Monitor {
    pub name: String,
    density: Kernel,
    flux: Kernel,
    pair: bool,
}

fn first_jets(field: &str) -> [Atom; 4] {
    let base = Jet::new(field, [0, 0, 0]);
    [
        Atom::Jet(base.clone()),
        Atom::Jet(base.bump(Coord::T)),
        Atom::Jet(base.bump(Coord::X)),
        Atom::Jet(base.bump(Coord::Y)),
    ]
}

fn inputs() -> Vec<Atom> {
    let mut v: Vec<Atom> = Coord::ALL.map(Atom::Coord).to_vec();
    v.extend(first_jets("u"));
    v.extend(first_jets("b"));
    v
}

impl Monitor {
    /// The current must be first order with a concrete potential; it may
    /// involve a companion solution `b`.
    pub fn new(
        name: &str,
        current: &ConservedCurrent,
        params: &Params,
    ) -> Result<Monitor, NumericsError> {
        let inputs = inputs();
        let pair = current
            .components
            .iter()
            .any(|c| c.contains_atom(&|a| matches!(a, Atom::Jet(j) if &*j.field == "b")));
        Ok(Monitor {
            name: name.to_string(),
            density: Kernel::new(&current.components[0], &inputs, params)?,
            flux: Kernel::new(&current.components[1], &inputs, params)?,
            pair,
        })
    }

    pub fn needs_companion(&self) -> bool {
        self.pair
    }
}

/// A field's three levels together with their ghost rows.
struct Padded<'a> {
    lv: Levels<'a>,
    ny: usize,
    ghosts: [(Vec<f64>, Vec<f64>); 3],
}

impl<'a> Padded<'a> {
    fn new(p: &Problem, lv: Levels<'a>) -> Padded<'a> {
        let ghosts = [
            p.ghost_rows(lv.before, lv.t - lv.dt),
            p.ghost_rows(lv.at, lv.t),
            p.ghost_rows(lv.after, lv.t + lv.dt),
        ];
        Padded {
            lv,
            ny: p.grid.ny,
            ghosts,
        }
    }

    fn level(&self, k: usize) -> &[f64] {
        [self.lv.before, self.lv.at, self.lv.after][k]
    }

    /// Row `i` of level `k`, with `-1` and `nx` reading the ghosts.
    fn row(&self, k: usize, i: isize, nx: usize) -> &[f64] {
        if i < 0 {
            &self.ghosts[k].0
        } else if i as usize == nx {
            &self.ghosts[k].1
        } else {
            let i = i as usize;
            &self.level(k)[i * self.ny..(i + 1) * self.ny]
        }
    }

    /// `(u, u_t, u_x, u_y)` at cell `(i, j)`.
    fn cell(&self, p: &Problem, i: usize, j: usize) -> [f64; 4] {
        let (nx, ny, g) = (p.grid.nx, self.ny, &p.grid);
        let ii = i as isize;
        let (jm, jp) = ((j + ny - 1) % ny, (j + 1) % ny);
        let at = self.row(1, ii, nx);
        [
            at[j],
            (self.row(2, ii, nx)[j] - self.row(0, ii, nx)[j]) / (2.0 * self.lv.dt),
            (self.row(1, ii + 1, nx)[j] - self.row(1, ii - 1, nx)[j]) / (2.0 * g.dx),
            (at[jp] - at[jm]) / (2.0 * g.dy),
        ]
    }

    /// `(u, u_t, u_x, u_y)` on the lower (`upper = false`) or upper wall face.
    fn face(&self, p: &Problem, upper: bool, j: usize) -> [f64; 4] {
        let (nx, ny) = (p.grid.nx, self.ny);
        let (inner, outer) = if upper {
            (nx as isize - 1, nx as isize)
        } else {
            (0, -1)
        };
        let val =
            |k: usize, j: usize| 0.5 * (self.row(k, inner, nx)[j] + self.row(k, outer, nx)[j]);
        let (jm, jp) = ((j + ny - 1) % ny, (j + 1) % ny);
        let ux = (self.row(1, inner.max(outer), nx)[j] - self.row(1, inner.min(outer), nx)[j])
            / p.grid.dx;
        [
            val(1, j),
            (val(2, j) - val(0, j)) / (2.0 * self.lv.dt),
            ux,
            (val(1, jp) - val(1, jm)) / (2.0 * p.grid.dy),
        ]
    }
}

fn companion_check(m: &Monitor, b: Option<&Levels>) {
    assert!(
        !m.pair || b.is_some(),
        "monitor {} needs the companion field",
        m.name
    );
}

fn args(t: f64, x: f64, y: f64, u: [f64; 4], b: [f64; 4]) -> [f64; 11] {
    [t, x, y, u[0], u[1], u[2], u[3], b[0], b[1], b[2], b[3]]
}

/// Midpoint quadrature of the time component over the grid at `u.t`.
pub fn conserved_integral(m: &Monitor, p: &Problem, u: Levels, b: Option<Levels>) -> f64 {
    companion_check(m, b.as_ref());
    let (pu, pb) = (Padded::new(p, u), b.map(|b| Padded::new(p, b)));
    let g = &p.grid;
    let rows: Vec<f64> = (0..g.nx)
        .into_par_iter()
        .map_init(Workspace::new, |ws, i| {
            let x = g.x(i as isize);
            let vals: Vec<f64> = (0..g.ny)
                .map(|j| {
                    let bj = pb.as_ref().map_or([0.0; 4], |pb| pb.cell(p, i, j));
                    m.density
                        .eval(&args(u.t, x, g.y(j), pu.cell(p, i, j), bj), ws)
                })
                .collect();
            pairwise_sum(&vals)
        })
        .collect();
    pairwise_sum(&rows) * g.cell_area()
}

/// Net outward flux `∫ (A^x(x_max) − A^x(x_min)) dy` through the walls at `u.t`.
pub fn boundary_flux(m: &Monitor, p: &Problem, u: Levels, b: Option<Levels>) -> f64 {
    companion_check(m, b.as_ref());
    let (pu, pb) = (Padded::new(p, u), b.map(|b| Padded::new(p, b)));
    let g = &p.grid;
    let mut ws = Workspace::new();
    let (x_lo, x_hi) = (g.x_min, g.x_max);
    let vals: Vec<f64> = (0..g.ny)
        .map(|j| {
            let y = g.y(j);
            let side = |upper: bool, x: f64, ws: &mut Workspace| {
                let bj = pb.as_ref().map_or([0.0; 4], |pb| pb.face(p, upper, j));
                m.flux.eval(&args(u.t, x, y, pu.face(p, upper, j), bj), ws)
            };
            side(true, x_hi, &mut ws) - side(false, x_lo, &mut ws)
        })
        .collect();
    pairwise_sum(&vals) * g.dy
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::FSpec;
    use crate::noether::canonical_currents;
    use crate::numerics::{Boundary, Grid};

    #[test]
    fn axisymmetric_state_has_no_y_momentum() {
        let grid = Grid::standard(24, 24, Boundary::Neumann).unwrap();
        let p = Problem::new(grid, &FSpec::zero(), None, None, &Params::new()).unwrap();
        let currents = canonical_currents(&FSpec::zero()).unwrap();
        let m = Monitor::new("S1", &currents[1], &Params::new()).unwrap();
        let u0 = p.grid.sample(|x, _| (2.0 * x).cos());
        let u1 = p.grid.sample(|x, _| 0.9 * (2.0 * x).cos());
        let lv = Levels {
            before: &u0,
            at: &u1,
            after: &u0,
            t: 0.0,
            dt: p.grid.dt,
        };
        assert_eq!(conserved_integral(&m, &p, lv, None), 0.0);
        assert_eq!(boundary_flux(&m, &p, lv, None), 0.0);
    }

    #[test]
    fn energy_of_a_static_profile() {
        // -∫ sin(x)/2 u_x^2 dx dy for u = x, over the strip.
        let grid = Grid::standard(200, 8, Boundary::Neumann).unwrap();
        let p = Problem::new(grid, &FSpec::zero(), None, None, &Params::new()).unwrap();
        let m = Monitor::new(
            "S0",
            &canonical_currents(&FSpec::zero()).unwrap()[0],
            &Params::new(),
        )
        .unwrap();
        let u = p.grid.sample(|x, _| x);
        let lv = Levels {
            before: &u,
            at: &u,
            after: &u,
            t: 0.0,
            dt: p.grid.dt,
        };
        let (a, b) = (p.grid.x_min, p.grid.x_max);
        let exact = -std::f64::consts::PI * (a.cos() - b.cos());
        // The Neumann ghosts halve u_x in the edge cells only.
        let got = conserved_integral(&m, &p, lv, None);
        assert!((got - exact).abs() < 0.02 * exact.abs(), "{got} vs {exact}");
    }
}
