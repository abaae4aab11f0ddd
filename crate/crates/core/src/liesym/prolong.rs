use super::VectorField;
use crate::symcore::{diff, partial, Coord, Expr, Jet, Var};

/// A point generator extended to first and second derivatives of `u`.
#[derive(Clone, Debug)]
pub struct ProlongedGenerator {
    pub base: VectorField,
    /// `first[i] = η^i`.
    pub first: [Expr; 3],
    /// `second[i][j] = η^{ij}`, symmetric; empty for a first prolongation.
    pub second: Vec<Vec<Expr>>,
}

fn u_jet(idx: &[Coord]) -> Expr {
    let mut j = Jet::new("u", [0, 0, 0]);
    for &c in idx {
        j = j.bump(c);
    }
    Expr::jet(j)
}

/// `η^i = D_i η − (D_i ξ^j) u_j`, and for order 2
/// `η^{ij} = D_j η^i − (D_j ξ^k) u_{ik}`.
pub fn prolong(field: &VectorField, order: u8) -> ProlongedGenerator {
    assert!(
        order == 1 || order == 2,
        "prolongation order must be 1 or 2"
    );
    let first = Coord::ALL.map(|i| {
        let mut e = diff(&field.eta, i);
        for j in Coord::ALL {
            let dxi = diff(&field.xi[j.index()], i);
            if !dxi.is_zero() {
                e = e - dxi * u_jet(&[j]);
            }
        }
        e
    });
    let mut second = Vec::new();
    if order == 2 {
        second = vec![vec![Expr::zero(); 3]; 3];
        for i in Coord::ALL {
            for j in Coord::ALL {
                if j < i {
                    second[i.index()][j.index()] = second[j.index()][i.index()].clone();
                    continue;
                }
                let mut e = diff(&first[i.index()], j);
                for k in Coord::ALL {
                    let dxi = diff(&field.xi[k.index()], j);
                    if !dxi.is_zero() {
                        e = e - dxi * u_jet(&[i, k]);
                    }
                }
                second[i.index()][j.index()] = e;
            }
        }
    }
    ProlongedGenerator {
        base: field.clone(),
        first,
        second,
    }
}

impl ProlongedGenerator {
    /// Apply to a function of coordinates, `u` and its derivatives up to the
    /// prolongation order.
    pub fn apply(&self, e: &Expr) -> Expr {
        let mut out = self.base.apply(e);
        for i in Coord::ALL {
            let d = partial(e, &Var::Jet(Jet::new("u", [0, 0, 0]).bump(i)));
            if !d.is_zero() {
                out = out + &self.first[i.index()] * &d;
            }
        }
        if !self.second.is_empty() {
            for i in Coord::ALL {
                for j in Coord::ALL.into_iter().filter(|&j| j >= i) {
                    let d = partial(e, &Var::Jet(Jet::new("u", [0, 0, 0]).bump(i).bump(j)));
                    if !d.is_zero() {
                        out = out + &self.second[i.index()][j.index()] * &d;
                    }
                }
            }
        }
        out
    }
}
