use serde::Serialize;

use super::{commutator_table, s0, s1, s2, s3, s4, AlgebraTag, BracketEntry, VectorField};
use crate::symcore::Expr;

/// `Σ k_i X_i` with exact or parametric coefficients.
pub fn combination(terms: &[(Expr, VectorField)]) -> VectorField {
    let mut out = VectorField::zero();
    for (k, f) in terms {
        out = &out + &f.scale(k);
    }
    let name = terms
        .iter()
        .map(|(k, f)| {
            if k.is_one() {
                f.label()
            } else {
                format!("({k})*{}", f.label())
            }
        })
        .collect::<Vec<_>>()
        .join(" + ");
    out.named(&name)
}

#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub name: &'static str,
    pub generators: Vec<VectorField>,
    pub expected: AlgebraTag,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubalgebraReport {
    pub name: String,
    pub generators: Vec<String>,
    pub closed: bool,
    pub tag: AlgebraTag,
    pub tag_label: String,
    /// Parameter expressions assumed nonzero during resolution.
    pub conditions: Vec<String>,
    pub brackets: Vec<BracketEntry>,
}

pub fn subalgebra_check(name: &str, generators: &[VectorField]) -> SubalgebraReport {
    let t = commutator_table(generators);
    let tag = t.classify();
    SubalgebraReport {
        name: name.to_string(),
        generators: generators.iter().map(VectorField::label).collect(),
        closed: t.is_closed(),
        tag_label: tag.to_string(),
        tag,
        conditions: t.conditions.iter().map(|c| format!("{c} != 0")).collect(),
        brackets: t.entries(),
    }
}

/// The catalogued subalgebras, with free parameters `alpha` and `beta`.
/// `I*` live in the isometry algebra, `L*` in its extension by `u ∂_u`.
pub fn listed_subalgebras() -> Vec<Subalgebra> {
    let (a, b) = (Expr::param("alpha"), Expr::param("beta"));
    let one = Expr::one;
    let a0_b4 = || combination(&[(a.clone(), s0()), (b.clone(), s4())]);
    vec![
        Subalgebra {
            name: "I1",
            generators: vec![combination(&[(one(), s0()), (a.clone(), s1())])],
            expected: AlgebraTag::Abelian(1),
        },
        Subalgebra {
            name: "I2",
            generators: vec![s1()],
            expected: AlgebraTag::Abelian(1),
        },
        Subalgebra {
            name: "L1",
            generators: vec![combination(&[
                (a.clone(), s0()),
                (one(), s1()),
                (b.clone(), s4()),
            ])],
            expected: AlgebraTag::Abelian(1),
        },
        Subalgebra {
            name: "L2",
            generators: vec![a0_b4()],
            expected: AlgebraTag::Abelian(1),
        },
        Subalgebra {
            name: "L3",
            generators: vec![a0_b4(), s1()],
            expected: AlgebraTag::Abelian(2),
        },
        Subalgebra {
            name: "L4",
            generators: vec![s0(), s4()],
            expected: AlgebraTag::Abelian(2),
        },
        Subalgebra {
            name: "L5",
            generators: vec![s1(), s2(), s3()],
            expected: AlgebraTag::So3PlusAbelian(0),
        },
        Subalgebra {
            name: "L6",
            generators: vec![s0(), s1(), s4()],
            expected: AlgebraTag::Abelian(3),
        },
        Subalgebra {
            name: "L7",
            generators: vec![a0_b4(), s1(), s2(), s3()],
            expected: AlgebraTag::So3PlusAbelian(1),
        },
    ]
}
