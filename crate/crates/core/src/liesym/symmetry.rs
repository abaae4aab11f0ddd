use std::collections::BTreeMap;

use num_traits::One;
use rand::Rng;
use serde::Serialize;

use super::{prolong, VectorField};
use crate::equation::{residual, wave_operator, FSpec, OnShell};
use crate::symcore::{
    diff_multi, is_zero, substitute, substitute_with, Atom, Bindings, Expr, Jet, Monomial,
    Rational, ZeroTest,
};

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub field: String,
    pub source: String,
    /// `X^(2)(Δ)` restricted to solutions.
    pub residual: Expr,
    pub verdict: ZeroTest,
}

impl SymmetryReport {
    pub fn is_symmetry(&self) -> bool {
        self.verdict.is_proven()
    }
}

/// Second prolongation applied to the equation residual, then restricted
/// with `on_shell`.
pub fn symmetry_residual(field: &VectorField, spec: &FSpec, on_shell: &OnShell) -> Expr {
    let p = prolong(field, 2);
    on_shell.reduce(&p.apply(&residual(spec)))
}

/// Infinitesimal invariance of the equation under `field`, with `u_tt`
/// eliminated.
pub fn symmetry_check<R: Rng>(field: &VectorField, spec: &FSpec, rng: &mut R) -> SymmetryReport {
    let r = symmetry_residual(field, spec, &OnShell::new(spec));
    SymmetryReport {
        field: field.label(),
        source: spec.to_string(),
        verdict: is_zero(&r, rng),
        residual: r,
    }
}

/// Generic point generator with unknown coefficients of (t, x, y, u).
pub fn generic_generator() -> VectorField {
    VectorField::new(
        [
            Expr::ansatz("xi0", [0; 4]),
            Expr::ansatz("xi1", [0; 4]),
            Expr::ansatz("xi2", [0; 4]),
        ],
        Expr::ansatz("eta", [0; 4]),
    )
    .named("generic")
}

/// One coefficient equation of the symmetry condition.
#[derive(Clone, Debug)]
pub struct DeterminingEquation {
    /// Product of derivative atoms the coefficient multiplies, `1` for the
    /// derivative-free part.
    pub derivatives: Expr,
    pub coefficient: Expr,
}

fn is_derivative(a: &Atom) -> bool {
    matches!(a, Atom::Jet(j) if j.is_dependent() && j.order() > 0)
}

/// Split the on-shell symmetry condition of a generic generator by
/// monomials in the derivatives of `u`.
pub fn determining_system(spec: &FSpec) -> Vec<DeterminingEquation> {
    let cond = symmetry_residual(&generic_generator(), spec, &OnShell::new(spec));
    let mut groups: BTreeMap<Monomial, Expr> = BTreeMap::new();
    for (m, c) in cond.terms() {
        let (jets, rest): (Vec<_>, Vec<_>) = m
            .factors()
            .iter()
            .cloned()
            .partition(|(a, _)| is_derivative(a));
        let key = Monomial::from_factors(jets);
        let coeff = Expr::from_monomial(Monomial::from_factors(rest), c.clone());
        let slot = groups.entry(key).or_insert_with(Expr::zero);
        *slot = &*slot + &coeff;
    }
    groups
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| DeterminingEquation {
            derivatives: Expr::from_monomial(k, Rational::one()),
            coefficient: c,
        })
        .collect()
}

/// Plug a concrete generator into every determining equation.
pub fn evaluate_determining<R: Rng>(
    eqs: &[DeterminingEquation],
    field: &VectorField,
    rng: &mut R,
) -> Vec<(DeterminingEquation, ZeroTest)> {
    let b = Bindings::new()
        .bind_ansatz("xi0", field.xi[0].clone())
        .bind_ansatz("xi1", field.xi[1].clone())
        .bind_ansatz("xi2", field.xi[2].clone())
        .bind_ansatz("eta", field.eta.clone());
    eqs.iter()
        .map(|eq| {
            let v = substitute(&eq.coefficient, &b).expect("generator coefficients are regular");
            let verdict = is_zero(&v, rng);
            (
                DeterminingEquation {
                    derivatives: eq.derivatives.clone(),
                    coefficient: v,
                },
                verdict,
            )
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftReport {
    pub k: Expr,
    pub residual: Expr,
    pub verdict: ZeroTest,
}

/// Substitute `u = v + k t^2 / 2` into the equation with constant source `k`
/// and compare with the source-free equation for `v`.
pub fn shift_reduction_check<R: Rng>(k: &Expr, rng: &mut R) -> ShiftReport {
    let shift = k * &Expr::t().pow(2) * Expr::frac(1, 2);
    let lhs = residual(&FSpec::Constant(k.clone()));
    let moved = substitute_with(&lhs, &mut |a, _| match a {
        Atom::Jet(j) if &*j.field == "u" => {
            Some(Expr::jet(Jet::new("v", j.orders)) + diff_multi(&shift, j.orders))
        }
        _ => None,
    })
    .expect("polynomial substitution");
    let r = moved - wave_operator("v");
    ShiftReport {
        k: k.clone(),
        verdict: is_zero(&r, rng),
        residual: r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liesym::{gauge, isometries, s0, s2, s4};
    use crate::symcore::{parse, seeded_rng};

    #[test]
    fn isometries_are_symmetries_for_any_source() {
        let mut rng = seeded_rng(11);
        for f in isometries() {
            assert!(
                symmetry_check(&f, &FSpec::Arbitrary, &mut rng).is_symmetry(),
                "{}",
                f.label()
            );
        }
    }

    #[test]
    fn scaling_needs_linear_source() {
        let mut rng = seeded_rng(12);
        assert!(symmetry_check(&s4(), &FSpec::linear_symbolic(), &mut rng).is_symmetry());
        let r = symmetry_check(&s4(), &"u^2".parse().unwrap(), &mut rng);
        assert_eq!(r.residual, parse("-u^2").unwrap());
        assert!(!symmetry_check(&s4(), &FSpec::Arbitrary, &mut rng).is_symmetry());
    }

    #[test]
    fn gauge_residual_is_the_linear_equation() {
        let spec = FSpec::linear_symbolic();
        let r = symmetry_check(&gauge("b"), &spec, &mut seeded_rng(13));
        assert_eq!(
            r.residual,
            wave_operator("b") - Expr::param("c") * Expr::field("b")
        );
        let c = Expr::param("c");
        let on = OnShell::new(&spec).with_linear_field("b", &c);
        assert!(symmetry_residual(&gauge("b"), &spec, &on).is_zero());
    }

    #[test]
    fn determining_equations_vanish_on_symmetries() {
        let eqs = determining_system(&FSpec::Arbitrary);
        assert!(eqs.len() > 5);
        let mut rng = seeded_rng(14);
        for f in [s0(), s2()] {
            assert!(
                evaluate_determining(&eqs, &f, &mut rng)
                    .iter()
                    .all(|(_, v)| v.is_proven()),
                "{}",
                f.label()
            );
        }
        let dil = VectorField::new([Expr::zero(), Expr::x(), Expr::zero()], Expr::zero());
        assert!(evaluate_determining(&eqs, &dil, &mut rng)
            .iter()
            .any(|(_, v)| matches!(v, ZeroTest::LikelyNonzero { .. })));
    }

    #[test]
    fn shift_reduction() {
        let mut rng = seeded_rng(15);
        for k in [
            Expr::one(),
            Expr::zero(),
            Expr::frac(-3, 2),
            Expr::param("k"),
        ] {
            assert!(shift_reduction_check(&k, &mut rng).verdict.is_proven());
        }
    }
}
