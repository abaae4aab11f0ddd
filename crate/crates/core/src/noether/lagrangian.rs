use crate::equation::FSpec;
use crate::geom::ChartMetric;
use crate::liesym::{prolong, VectorField};
use crate::symcore::{diff, partial, Coord, Expr, Jet, Var};

use super::NoetherError;

/// First-order Lagrangian density in the jets of `u`.
#[derive(Clone, Debug)]
pub struct Lagrangian {
    pub density: Expr,
    pub spec: FSpec,
}

pub(crate) fn u_first(c: Coord) -> Var {
    Var::Jet(Jet::new("u", [0, 0, 0]).bump(c))
}

impl Lagrangian {
    pub fn from_density(density: Expr, spec: FSpec) -> Lagrangian {
        Lagrangian { density, spec }
    }

    /// `∂L/∂u_c`.
    pub fn momentum(&self, c: Coord) -> Expr {
        partial(&self.density, &u_first(c))
    }

    pub fn wire(&self, e: &Expr) -> Expr {
        self.spec.wire_potential(e)
    }

    pub fn is_first_order(&self) -> bool {
        !self
            .density
            .contains_atom(&|a| matches!(a, crate::symcore::Atom::Jet(j) if j.order() > 1))
    }
}

/// `√|g| (½ g^ij u_i u_j + F(u))` on a chart.
pub fn lagrangian_on(m: &ChartMetric, spec: &FSpec) -> Result<Lagrangian, NoetherError> {
    let vol = m.sqrt_abs_det().ok_or(NoetherError::NoVolumeForm)?.clone();
    let n = m.dim();
    let jet = |i: usize| Expr::jet(Jet::new("u", [0, 0, 0]).bump(m.coords()[i]));
    let mut kinetic = Expr::zero();
    for i in 0..n {
        for j in 0..n {
            kinetic = kinetic + m.inv(i, j) * &jet(i) * jet(j);
        }
    }
    let density = &vol * &(kinetic * Expr::frac(1, 2) + spec.potential()?);
    Ok(Lagrangian {
        density,
        spec: spec.clone(),
    })
}

/// The Lagrangian of the wave equation on the sphere-times-line.
pub fn lagrangian(spec: &FSpec) -> Result<Lagrangian, NoetherError> {
    lagrangian_on(&ChartMetric::preset("s2xr").expect("bundled metric"), spec)
}

/// `E(L) = ∂L/∂u − D_i(∂L/∂u_i)`.
pub fn euler_lagrange(l: &Lagrangian) -> Expr {
    let mut e = partial(&l.density, &Var::u());
    for c in Coord::ALL {
        e = e - diff(&l.momentum(c), c);
    }
    l.wire(&e)
}

/// `X^(1) L + L D_i ξ^i`.
pub fn variational_defect(field: &VectorField, l: &Lagrangian) -> Expr {
    let p = prolong(field, 1);
    let mut div = Expr::zero();
    for c in Coord::ALL {
        div = div + diff(&field.xi[c.index()], c);
    }
    l.wire(&(p.apply(&l.density) + &l.density * &div))
}
