//! Lagrangian, variational symmetries and conserved currents.

mod current;
mod lagrangian;
mod reference;
mod variational;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::equation::{FSpec, FSpecError};
use crate::geom::{ChartMetric, GeomError};
use crate::liesym::isometries;
use crate::symcore::Expr;

pub use current::{
    characteristic, current_from_gauge, current_from_isometry, divergence_check, noether_current,
    noether_identity_defect, ConservedCurrent, CurrentOrigin, DivergenceReport,
};
pub use lagrangian::{euler_lagrange, lagrangian, lagrangian_on, variational_defect, Lagrangian};
pub use reference::{reference_current, reference_current_for, reference_generators};
pub use variational::{variational_check, VariationalOutcome, VariationalReport};

#[derive(Debug, Error)]
pub enum NoetherError {
    #[error("metric has no polynomial square root of |det g|")]
    NoVolumeForm,
    #[error("currents need a chart on (t, x, y)")]
    ChartCoordinates,
    #[error(transparent)]
    Potential(#[from] FSpecError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Currents of the four isometries from the metric contraction, followed by
/// the gauge current in the auxiliary solution `b`.
pub fn generated_currents<R: Rng>(
    spec: &FSpec,
    rng: &mut R,
) -> Result<Vec<ConservedCurrent>, NoetherError> {
    let m = ChartMetric::preset("s2xr").expect("bundled metric");
    let mut out = isometries()
        .iter()
        .map(|f| current_from_isometry(&m, f, spec, rng))
        .collect::<Result<Vec<_>, _>>()?;
    out.push(current_from_gauge(&m, "b")?);
    Ok(out)
}

/// Noether currents `ξ^k L + W ∂L/∂u_k` of the four isometries.
pub fn canonical_currents(spec: &FSpec) -> Result<Vec<ConservedCurrent>, NoetherError> {
    let l = lagrangian(spec)?;
    let zero = [Expr::zero(), Expr::zero(), Expr::zero()];
    Ok(isometries()
        .iter()
        .map(|f| noether_current(f, &l, &zero))
        .collect())
}

/// A component where a computed current and the reference one disagree.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentMismatch {
    pub generator: String,
    pub component: usize,
    pub computed: Expr,
    pub reference: Expr,
    pub difference: Expr,
}

pub fn compare_with_reference(
    computed: &ConservedCurrent,
    reference: &ConservedCurrent,
) -> Vec<ComponentMismatch> {
    computed
        .mismatches(reference)
        .into_iter()
        .map(|k| ComponentMismatch {
            generator: reference.generator.clone(),
            component: k,
            computed: computed.components[k].clone(),
            reference: reference.components[k].clone(),
            difference: crate::symcore::simplify(
                &(&computed.components[k] - &reference.components[k]),
            ),
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentExport {
    pub infix: String,
    pub latex: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurrentExport {
    pub generator: String,
    pub origin: CurrentOrigin,
    pub components: Vec<ComponentExport>,
    pub warnings: Vec<String>,
}

impl From<&ConservedCurrent> for CurrentExport {
    fn from(a: &ConservedCurrent) -> CurrentExport {
        CurrentExport {
            generator: a.generator.clone(),
            origin: a.origin,
            components: a
                .components
                .iter()
                .map(|c| ComponentExport {
                    infix: c.to_string(),
                    latex: c.to_latex(),
                })
                .collect(),
            warnings: a.warnings.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::seeded_rng;

    #[test]
    fn generated_against_reference() {
        let spec = FSpec::Arbitrary;
        let got = generated_currents(&spec, &mut seeded_rng(41)).unwrap();
        let names: Vec<_> = got.iter().map(|a| a.generator.clone()).collect();
        assert_eq!(names, ["S0", "S1", "S2", "S3", "b d_u"]);
        let mismatched = |i: usize, name: &str| {
            compare_with_reference(&got[i], &reference_current(name).unwrap())
                .iter()
                .map(|m| m.component)
                .collect::<Vec<_>>()
        };
        assert!(mismatched(0, "S0").is_empty());
        assert!(mismatched(1, "S1").is_empty());
        assert!(mismatched(2, "S2").is_empty());
        assert_eq!(mismatched(3, "S3"), [2]);
        assert_eq!(mismatched(4, "Sinf"), [2]);
    }

    #[test]
    fn canonical_and_contraction_differ_by_the_potential() {
        let spec = FSpec::Arbitrary;
        let gen = generated_currents(&spec, &mut seeded_rng(42)).unwrap();
        let can = canonical_currents(&spec).unwrap();
        let f = crate::symcore::parse("F(u)").unwrap();
        for ((g, c), field) in gen.iter().zip(&can).zip(isometries()) {
            for k in 0..3 {
                // contraction − canonical = −2 √g ξ^k F
                let diff = &g.components[k] - &c.components[k];
                let expected = Expr::int(-2) * Expr::sin(&Expr::x()) * &field.xi[k] * &f;
                assert!(
                    crate::symcore::clear_denominators(&(diff - expected)).is_zero(),
                    "{} {k}",
                    g.generator
                );
            }
        }
    }

    #[test]
    fn export_has_both_notations() {
        let a = reference_current("S0").unwrap();
        let e = CurrentExport::from(&a);
        assert_eq!(e.components.len(), 3);
        assert!(e.components[1].latex.contains("\\sin"));
    }
}
