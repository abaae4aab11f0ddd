use rand::Rng;
use serde::Serialize;

use super::lagrangian::{euler_lagrange, Lagrangian};
use super::NoetherError;
use crate::equation::{FSpec, OnShell};
use crate::geom::{killing_check, ChartMetric};
use crate::liesym::VectorField;
use crate::symcore::{clear_denominators, diff, is_zero, Coord, Expr, Jet, ZeroTest};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurrentOrigin {
    /// Metric contraction with a Killing field.
    Isometry,
    /// Bilinear current of a gauge solution of the linear equation.
    Gauge,
    /// `ξ^k L + (η − ξ^j u_j) ∂L/∂u_k − V^k`.
    Canonical,
    /// Transcribed reference formula.
    Reference,
}

/// A triple `(A^t, A^x, A^y)` whose total divergence should vanish on
/// solutions.
#[derive(Clone, Debug, Serialize)]
pub struct ConservedCurrent {
    pub generator: String,
    pub origin: CurrentOrigin,
    pub components: [Expr; 3],
    pub warnings: Vec<String>,
}

impl ConservedCurrent {
    pub fn new(generator: &str, origin: CurrentOrigin, components: [Expr; 3]) -> ConservedCurrent {
        ConservedCurrent {
            generator: generator.to_string(),
            origin,
            components,
            warnings: Vec::new(),
        }
    }

    /// `D_t A^t + D_x A^x + D_y A^y`.
    pub fn divergence(&self) -> Expr {
        Coord::ALL
            .iter()
            .map(|&c| diff(&self.components[c.index()], c))
            .sum()
    }

    /// Indices of components that differ from `other` as exact expressions.
    pub fn mismatches(&self, other: &ConservedCurrent) -> Vec<usize> {
        (0..3)
            .filter(|&k| {
                let d = &self.components[k] - &other.components[k];
                !(d.is_zero() || clear_denominators(&d).is_zero())
            })
            .collect()
    }
}

fn spacetime_chart(m: &ChartMetric) -> Result<Expr, NoetherError> {
    if m.coords() != [Coord::T, Coord::X, Coord::Y] {
        return Err(NoetherError::ChartCoordinates);
    }
    m.sqrt_abs_det().cloned().ok_or(NoetherError::NoVolumeForm)
}

fn grad_u(c: Coord) -> Expr {
    Expr::jet(Jet::new("u", [0, 0, 0]).bump(c))
}

/// `A^k = √g (½ g^ij ξ^k − g^kj ξ^i) u_i u_j − √g ξ^k F(u)`.
pub fn current_from_isometry<R: Rng>(
    m: &ChartMetric,
    field: &VectorField,
    spec: &FSpec,
    rng: &mut R,
) -> Result<ConservedCurrent, NoetherError> {
    let vol = spacetime_chart(m)?;
    let big_f = spec.potential()?;
    let xi = &field.xi;
    let mut quad = Expr::zero();
    for i in Coord::ALL {
        for j in Coord::ALL {
            quad = quad + m.inv(i.index(), j.index()) * &grad_u(i) * grad_u(j);
        }
    }
    let xi_grad: Expr = Coord::ALL
        .iter()
        .map(|&i| &xi[i.index()] * &grad_u(i))
        .sum();
    let comp = |k: Coord| {
        let raised: Expr = Coord::ALL
            .iter()
            .map(|&j| m.inv(k.index(), j.index()) * &grad_u(j))
            .sum();
        let kinetic = &xi[k.index()] * &quad * Expr::frac(1, 2) - raised * &xi_grad;
        &vol * &(kinetic - &xi[k.index()] * &big_f)
    };
    let mut current = ConservedCurrent::new(
        &field.label(),
        CurrentOrigin::Isometry,
        Coord::ALL.map(comp),
    );
    if !field.eta.is_zero() {
        current.warnings.push(format!(
            "{} moves u; the contraction ignores its u-component",
            field.label()
        ));
    }
    let killing = killing_check(m, field, rng)?;
    if !killing.is_killing() {
        current.warnings.push(format!(
            "{} is not a Killing field of {}",
            field.label(),
            m.name()
        ));
    }
    Ok(current)
}

/// `A^k = √g g^jk (b u_j − b_j u)`.
pub fn current_from_gauge(m: &ChartMetric, b: &str) -> Result<ConservedCurrent, NoetherError> {
    let vol = spacetime_chart(m)?;
    let (bf, u) = (Expr::field(b), Expr::field("u"));
    let comp = |k: Coord| {
        let s: Expr = Coord::ALL
            .iter()
            .map(|&j| {
                let bj = Expr::jet(Jet::new(b, [0, 0, 0]).bump(j));
                m.inv(j.index(), k.index()) * &(&bf * &grad_u(j) - bj * &u)
            })
            .sum();
        &vol * &s
    };
    Ok(ConservedCurrent::new(
        &format!("{b} d_u"),
        CurrentOrigin::Gauge,
        Coord::ALL.map(comp),
    ))
}

/// Noether's current for a divergence symmetry with flux `v`.
pub fn noether_current(field: &VectorField, l: &Lagrangian, v: &[Expr; 3]) -> ConservedCurrent {
    let w = characteristic(field);
    let comp = |k: Coord| &field.xi[k.index()] * &l.density + &w * &l.momentum(k) - &v[k.index()];
    ConservedCurrent::new(
        &field.label(),
        CurrentOrigin::Canonical,
        Coord::ALL.map(comp),
    )
}

/// `η − ξ^j u_j`.
pub fn characteristic(field: &VectorField) -> Expr {
    let mut w = field.eta.clone();
    for c in Coord::ALL {
        w = w - &field.xi[c.index()] * &grad_u(c);
    }
    w
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceReport {
    pub generator: String,
    pub origin: CurrentOrigin,
    pub residual: Expr,
    pub verdict: ZeroTest,
}

impl DivergenceReport {
    pub fn is_conserved(&self) -> bool {
        self.verdict.is_proven()
    }
}

/// Divergence restricted by `on_shell` (which should also carry any
/// auxiliary field equations).
pub fn divergence_check<R: Rng>(
    a: &ConservedCurrent,
    spec: &FSpec,
    on_shell: &OnShell,
    rng: &mut R,
) -> DivergenceReport {
    let residual = on_shell.reduce(&spec.wire_potential(&a.divergence()));
    DivergenceReport {
        generator: a.generator.clone(),
        origin: a.origin,
        verdict: is_zero(&residual, rng),
        residual,
    }
}

/// `D_i A^i + E(L) (η − ξ^j u_j)`, which vanishes identically for a
/// canonical current.
pub fn noether_identity_defect(field: &VectorField, l: &Lagrangian, a: &ConservedCurrent) -> Expr {
    l.wire(&(a.divergence() + euler_lagrange(l) * characteristic(field)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liesym::{gauge, isometries, s0};
    use crate::noether::lagrangian;
    use crate::symcore::{parse, seeded_rng};

    fn s2xr() -> ChartMetric {
        ChartMetric::preset("s2xr").unwrap()
    }

    #[test]
    fn isometry_current_for_time_translation() {
        let a =
            current_from_isometry(&s2xr(), &s0(), &FSpec::Arbitrary, &mut seeded_rng(31)).unwrap();
        let a0 =
            parse("-sin(x)/2*u_t^2 - sin(x)/2*u_x^2 - u_y^2/(2*sin(x)) - sin(x)*F(u)").unwrap();
        assert_eq!(a.components[0], a0);
        assert_eq!(a.components[1], parse("sin(x)*u_t*u_x").unwrap());
        assert_eq!(a.components[2], parse("u_t*u_y/sin(x)").unwrap());
        assert!(a.warnings.is_empty());
    }

    #[test]
    fn isometry_contraction_conserved_only_for_reversed_source() {
        // The contraction carries −F; it is conserved for u_tt = ... − f.
        let mut rng = seeded_rng(32);
        let a = current_from_isometry(&s2xr(), &s0(), &FSpec::Arbitrary, &mut rng).unwrap();
        let r = divergence_check(
            &a,
            &FSpec::Arbitrary,
            &OnShell::new(&FSpec::Arbitrary),
            &mut rng,
        );
        let expected = parse("-2*sin(x)*f(u)*u_t").unwrap();
        assert_eq!(r.residual, expected);
        let on_reversed = OnShell::new(&FSpec::Explicit(-Expr::fun("f", 0, &Expr::field("u"))));
        assert!(divergence_check(&a, &FSpec::Arbitrary, &on_reversed, &mut rng).is_conserved());
        let free = FSpec::zero();
        let a = current_from_isometry(&s2xr(), &s0(), &free, &mut rng).unwrap();
        assert!(divergence_check(&a, &free, &OnShell::new(&free), &mut rng).is_conserved());
    }

    #[test]
    fn canonical_currents_are_conserved_and_satisfy_the_identity() {
        let spec = FSpec::Arbitrary;
        let l = lagrangian(&spec).unwrap();
        let zero = [Expr::zero(), Expr::zero(), Expr::zero()];
        let mut rng = seeded_rng(33);
        for f in isometries() {
            let a = noether_current(&f, &l, &zero);
            assert!(
                noether_identity_defect(&f, &l, &a).is_zero(),
                "{}",
                f.label()
            );
            assert!(
                divergence_check(&a, &spec, &OnShell::new(&spec), &mut rng).is_conserved(),
                "{}",
                f.label()
            );
        }
    }

    #[test]
    fn gauge_current() {
        let a = current_from_gauge(&s2xr(), "b").unwrap();
        assert_eq!(a.components[0], parse("sin(x)*(b*u_t - b_t*u)").unwrap());
        assert_eq!(a.components[1], parse("sin(x)*(b_x*u - b*u_x)").unwrap());
        assert_eq!(a.components[2], parse("(b_y*u - b*u_y)/sin(x)").unwrap());
        let c = Expr::param("c");
        let spec = FSpec::Linear(c.clone());
        let on = OnShell::new(&spec).with_linear_field("b", &c);
        assert!(divergence_check(&a, &spec, &on, &mut seeded_rng(34)).is_conserved());
    }

    #[test]
    fn gauge_current_is_antisymmetric_in_its_fields() {
        let a = current_from_gauge(&s2xr(), "b").unwrap();
        let swapped =
            crate::symcore::substitute_with(&a.components[1], &mut |atom, _| match atom {
                crate::symcore::Atom::Jet(j) if &*j.field == "u" => {
                    Some(Expr::jet(Jet::new("b", j.orders)))
                }
                crate::symcore::Atom::Jet(j) if &*j.field == "b" => {
                    Some(Expr::jet(Jet::new("u", j.orders)))
                }
                _ => None,
            })
            .unwrap();
        assert_eq!(swapped, -a.components[1].clone());
    }

    #[test]
    fn canonical_gauge_current_matches_contraction() {
        let c = Expr::param("c");
        let l = lagrangian(&FSpec::Linear(c)).unwrap();
        let v = [
            parse("sin(x)*b_t*u").unwrap(),
            parse("-sin(x)*b_x*u").unwrap(),
            parse("-b_y*u/sin(x)").unwrap(),
        ];
        let a = noether_current(&gauge("b"), &l, &v);
        assert!(a
            .mismatches(&current_from_gauge(&s2xr(), "b").unwrap())
            .is_empty());
    }

    #[test]
    fn non_killing_field_warns() {
        let f = VectorField::new([Expr::t(), Expr::zero(), Expr::zero()], Expr::zero());
        let a = current_from_isometry(&s2xr(), &f, &FSpec::Arbitrary, &mut seeded_rng(35)).unwrap();
        assert_eq!(a.warnings.len(), 1);
        let sphere = ChartMetric::preset("sphere").unwrap();
        assert!(matches!(
            current_from_isometry(&sphere, &s0(), &FSpec::Arbitrary, &mut seeded_rng(35)),
            Err(NoetherError::ChartCoordinates)
        ));
    }
}
