use rand::Rng;
use serde::Serialize;

use super::{ChartMetric, GeomError};
use crate::liesym::VectorField;
use crate::symcore::{is_zero, partial, Coord, Expr, Var, ZeroTest};

/// `(L_X g)_ij = ξ^s ∂_s g_ij + g_kj ∂_i ξ^k + g_ik ∂_j ξ^k`.
pub fn lie_derivative_metric(
    m: &ChartMetric,
    field: &VectorField,
) -> Result<Vec<Vec<Expr>>, GeomError> {
    for c in Coord::ALL {
        if m.index_of(c).is_none() && !field.xi[c.index()].is_zero() {
            return Err(GeomError::FieldLeavesChart(c.name().to_string()));
        }
    }
    let n = m.dim();
    let xi: Vec<&Expr> = m.coords().iter().map(|c| &field.xi[c.index()]).collect();
    let d = |e: &Expr, i: usize| partial(e, &Var::Coord(m.coords()[i]));
    let mut out = vec![vec![Expr::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let mut e = Expr::zero();
            for s in 0..n {
                e = e + xi[s] * &d(m.g(i, j), s);
            }
            for k in 0..n {
                e = e + m.g(k, j) * &d(xi[k], i) + m.g(i, k) * &d(xi[k], j);
            }
            out[i][j] = e.clone();
            out[j][i] = e;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct KillingComponent {
    pub i: usize,
    pub j: usize,
    pub value: String,
    pub verdict: ZeroTest,
}

#[derive(Clone, Debug, Serialize)]
pub struct KillingReport {
    pub field: String,
    pub metric: String,
    pub components: Vec<KillingComponent>,
}

impl KillingReport {
    pub fn is_killing(&self) -> bool {
        self.components.iter().all(|c| c.verdict.is_proven())
    }

    pub fn has_undecided(&self) -> bool {
        self.components
            .iter()
            .any(|c| c.verdict == ZeroTest::Undecided)
    }
}

/// Zero test of every independent component of `L_X g`.
pub fn killing_check<R: Rng>(
    m: &ChartMetric,
    field: &VectorField,
    rng: &mut R,
) -> Result<KillingReport, GeomError> {
    let l = lie_derivative_metric(m, field)?;
    let n = m.dim();
    let mut components = Vec::new();
    for i in 0..n {
        for j in i..n {
            components.push(KillingComponent {
                i,
                j,
                value: l[i][j].to_string(),
                verdict: is_zero(&l[i][j], rng),
            });
        }
    }
    Ok(KillingReport {
        field: field.label(),
        metric: m.name().to_string(),
        components,
    })
}
