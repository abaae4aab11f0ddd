use rand::Rng;
use serde::Serialize;

use super::lagrangian::{u_first, variational_defect, Lagrangian};
use crate::equation::{antiderivative_in_u, OnShell};
use crate::liesym::VectorField;
use crate::symcore::{diff, is_zero, partial, Atom, Coord, Expr, ZeroTest};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum VariationalOutcome {
    /// `X^(1) L + L D_i ξ^i` vanishes identically.
    ExactZero,
    /// It equals `D_i V^i` for the returned `V`, with `V` a function of
    /// (t, x, y, u).
    Divergence([Expr; 3]),
    /// Not a divergence of that form.
    Residual(Expr),
}

#[derive(Clone, Debug, Serialize)]
pub struct VariationalReport {
    pub field: String,
    pub outcome: VariationalOutcome,
    pub defect: Expr,
    pub verdict: ZeroTest,
}

impl VariationalReport {
    pub fn is_variational(&self) -> bool {
        !matches!(self.outcome, VariationalOutcome::Residual(_))
    }

    /// The divergence flux, zero for an exact symmetry.
    pub fn flux(&self) -> Option<[Expr; 3]> {
        match &self.outcome {
            VariationalOutcome::ExactZero => Some([Expr::zero(), Expr::zero(), Expr::zero()]),
            VariationalOutcome::Divergence(v) => Some(v.clone()),
            VariationalOutcome::Residual(_) => None,
        }
    }
}

fn has_u_derivatives(e: &Expr) -> bool {
    e.contains_atom(&|a| matches!(a, Atom::Jet(j) if j.is_dependent() && j.order() > 0))
}

/// Try `R = D_i V^i` with `∂_u V^i` read off the coefficient of `u_i`.
fn divergence_ansatz(r: &Expr, constraints: &OnShell) -> Option<[Expr; 3]> {
    let mut v = [Expr::zero(), Expr::zero(), Expr::zero()];
    for c in Coord::ALL {
        let coeff = partial(r, &u_first(c));
        if has_u_derivatives(&coeff) {
            return None;
        }
        v[c.index()] = antiderivative_in_u(&coeff)?;
    }
    let div: Expr = Coord::ALL.iter().map(|&c| diff(&v[c.index()], c)).sum();
    constraints.reduce(&(div - r)).is_zero().then_some(v)
}

/// Classify `field` as an exact variational symmetry, a divergence
/// symmetry, or neither. `constraints` reduces auxiliary fields such as a
/// gauge function obeying its own equation.
pub fn variational_check<R: Rng>(
    field: &VectorField,
    l: &Lagrangian,
    constraints: &OnShell,
    rng: &mut R,
) -> VariationalReport {
    let defect = constraints.reduce(&variational_defect(field, l));
    let verdict = is_zero(&defect, rng);
    let outcome = if verdict.is_proven() {
        VariationalOutcome::ExactZero
    } else {
        match divergence_ansatz(&defect, constraints) {
            Some(v) => VariationalOutcome::Divergence(v),
            None => VariationalOutcome::Residual(defect.clone()),
        }
    };
    VariationalReport {
        field: field.label(),
        outcome,
        defect,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::FSpec;
    use crate::liesym::{gauge, isometries, s4};
    use crate::noether::lagrangian;
    use crate::symcore::{parse, seeded_rng};

    #[test]
    fn isometries_are_exact() {
        let l = lagrangian(&FSpec::Arbitrary).unwrap();
        let mut rng = seeded_rng(21);
        for f in isometries() {
            let r = variational_check(&f, &l, &OnShell::off_shell(), &mut rng);
            assert_eq!(r.outcome, VariationalOutcome::ExactZero, "{}", f.label());
        }
    }

    #[test]
    fn gauge_is_a_divergence_symmetry() {
        let c = Expr::param("c");
        let spec = FSpec::Linear(c.clone());
        let l = lagrangian(&spec).unwrap();
        let on = OnShell::off_shell().with_linear_field("b", &c);
        let r = variational_check(&gauge("b"), &l, &on, &mut seeded_rng(22));
        let expected = [
            parse("sin(x)*b_t*u").unwrap(),
            parse("-sin(x)*b_x*u").unwrap(),
            parse("-b_y*u/sin(x)").unwrap(),
        ];
        assert_eq!(r.outcome, VariationalOutcome::Divergence(expected));
    }

    #[test]
    fn scaling_is_not_variational() {
        let l = lagrangian(&FSpec::linear_symbolic()).unwrap();
        let r = variational_check(&s4(), &l, &OnShell::off_shell(), &mut seeded_rng(23));
        assert!(matches!(r.outcome, VariationalOutcome::Residual(_)));
        assert!(matches!(r.verdict, ZeroTest::LikelyNonzero { .. }));
    }
}
