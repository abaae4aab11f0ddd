use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::VectorField;
use crate::symcore::{clear_denominators, Atom, Expr, Monomial, Rational};

/// `[X, Y]^a = X(Y^a) − Y(X^a)` over (t, x, y, u).
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    let c = |i: usize| x.apply(y.coefficient(i)) - y.apply(x.coefficient(i));
    VectorField::new([c(0), c(1), c(2)], c(3))
}

fn exact_zero(e: &Expr) -> bool {
    e.is_zero() || clear_denominators(e).is_zero()
}

/// Coefficients of a field over (component, parameter-free monomial), with
/// parameter dependence kept in the values.
fn coefficient_map(f: &VectorField) -> BTreeMap<(usize, Monomial), Expr> {
    let mut out: BTreeMap<(usize, Monomial), Expr> = BTreeMap::new();
    for comp in 0..4 {
        for (m, c) in f.coefficient(comp).terms() {
            let (params, rest): (Vec<_>, Vec<_>) = m
                .factors()
                .iter()
                .cloned()
                .partition(|(a, _)| matches!(a, Atom::Param(_)));
            let value = Expr::from_monomial(Monomial::from_factors(params), c.clone());
            let slot = out
                .entry((comp, Monomial::from_factors(rest)))
                .or_insert_with(Expr::zero);
            *slot = &*slot + &value;
        }
    }
    out
}

/// Outcome of Gaussian elimination over the field of rational functions in
/// the parameters.
struct Elimination {
    rows: Vec<Vec<Expr>>,
    pivots: Vec<(usize, usize)>,
    /// Pivots that are not plain rationals, assumed nonzero.
    conditions: Vec<Expr>,
}

fn eliminate(mut rows: Vec<Vec<Expr>>, cols: usize) -> Elimination {
    let mut pivots = Vec::new();
    let mut conditions = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let candidates: Vec<usize> = (r..rows.len())
            .filter(|&i| !exact_zero(&rows[i][col]))
            .collect();
        let Some(&p) = candidates
            .iter()
            .find(|&&i| rows[i][col].as_rational().is_some())
            .or(candidates.first())
        else {
            continue;
        };
        rows.swap(r, p);
        let piv = rows[r][col].clone();
        if piv.as_rational().is_none() {
            conditions.push(piv.clone());
        }
        let inv = piv.recip();
        rows[r] = rows[r].iter().map(|e| e * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !exact_zero(&rows[i][col]) {
                let factor = rows[i][col].clone();
                let pivot_row = rows[r].clone();
                for (e, pe) in rows[i].iter_mut().zip(&pivot_row) {
                    *e = &*e - &(&factor * pe);
                }
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    Elimination {
        rows,
        pivots,
        conditions,
    }
}

fn rank(rows: Vec<Vec<Expr>>, cols: usize) -> usize {
    eliminate(rows, cols).pivots.len()
}

/// Express `target` in the span of `basis`; `None` when it lies outside.
fn resolve(
    basis: &[VectorField],
    target: &VectorField,
    conditions: &mut Vec<Expr>,
) -> Option<Vec<Expr>> {
    let maps: Vec<_> = basis.iter().map(coefficient_map).collect();
    let tmap = coefficient_map(target);
    let mut keys: Vec<&(usize, Monomial)> = maps
        .iter()
        .flat_map(|m| m.keys())
        .chain(tmap.keys())
        .collect();
    keys.sort();
    keys.dedup();
    let n = basis.len();
    let rows: Vec<Vec<Expr>> = keys
        .iter()
        .map(|k| {
            let mut row: Vec<Expr> = maps
                .iter()
                .map(|m| m.get(*k).cloned().unwrap_or_else(Expr::zero))
                .collect();
            row.push(tmap.get(*k).cloned().unwrap_or_else(Expr::zero));
            row
        })
        .collect();
    let el = eliminate(rows, n);
    if el
        .rows
        .iter()
        .skip(el.pivots.len())
        .any(|row| !exact_zero(&row[n]))
    {
        return None;
    }
    let mut coeffs = vec![Expr::zero(); n];
    for &(r, c) in &el.pivots {
        coeffs[c] = el.rows[r][n].clone();
    }
    let mut check = target.clone();
    for (b, k) in basis.iter().zip(&coeffs) {
        check = &check - &b.scale(k);
    }
    if !(0..4).all(|i| exact_zero(check.coefficient(i))) {
        return None;
    }
    conditions.extend(el.conditions);
    Some(coeffs)
}

/// Isomorphism class recognized from structure constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AlgebraTag {
    /// `nA1`.
    Abelian(usize),
    /// `so(3) ⊕ mA1`; `m = 0` is `A3,9` itself.
    So3PlusAbelian(usize),
    Unclassified,
}

impl fmt::Display for AlgebraTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let abelian = |n: usize| {
            if n == 1 {
                "A1".to_string()
            } else {
                format!("{n}A1")
            }
        };
        match self {
            AlgebraTag::Abelian(n) => f.write_str(&abelian(*n)),
            AlgebraTag::So3PlusAbelian(0) => f.write_str("A3,9"),
            AlgebraTag::So3PlusAbelian(m) => write!(f, "A3,9+{}", abelian(*m)),
            AlgebraTag::Unclassified => f.write_str("unclassified"),
        }
    }
}

/// Brackets of an ordered generator list resolved against its span.
#[derive(Clone, Debug)]
pub struct AlgebraTable {
    pub generators: Vec<VectorField>,
    /// `constants[i][j][k] = c^k_ij`, zero where unresolved.
    pub constants: Vec<Vec<Vec<Expr>>>,
    /// Brackets that leave the span.
    pub unresolved: Vec<(usize, usize, VectorField)>,
    /// Non-constant pivots assumed nonzero during resolution.
    pub conditions: Vec<Expr>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub value: String,
    pub resolved: bool,
}

pub fn commutator_table(fields: &[VectorField]) -> AlgebraTable {
    let n = fields.len();
    let mut constants = vec![vec![vec![Expr::zero(); n]; n]; n];
    let mut unresolved = Vec::new();
    let mut conditions = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let b = lie_bracket(&fields[i], &fields[j]);
            match resolve(fields, &b, &mut conditions) {
                Some(c) => {
                    for k in 0..n {
                        constants[j][i][k] = -c[k].clone();
                        constants[i][j][k] = c[k].clone();
                    }
                }
                None => unresolved.push((i, j, b)),
            }
        }
    }
    conditions.sort();
    conditions.dedup();
    AlgebraTable {
        generators: fields.to_vec(),
        constants,
        unresolved,
        conditions,
    }
}

impl AlgebraTable {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn is_closed(&self) -> bool {
        self.unresolved.is_empty()
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Expr {
        &self.constants[i][j][k]
    }

    /// Structure constant when it is a plain rational.
    pub fn rational_constant(&self, i: usize, j: usize, k: usize) -> Option<Rational> {
        self.constants[i][j][k].as_rational()
    }

    /// `[X_i, X_j]` as a combination of the generators.
    pub fn bracket_expr(&self, i: usize, j: usize) -> String {
        if let Some((_, _, f)) = self
            .unresolved
            .iter()
            .find(|(a, b, _)| (*a, *b) == (i, j) || (*a, *b) == (j, i))
        {
            let f = if i < j { f.clone() } else { -f };
            return format!("outside span: {f}");
        }
        let mut parts = Vec::new();
        for k in 0..self.dim() {
            let c = &self.constants[i][j][k];
            if c.is_zero() {
                continue;
            }
            let name = self.generators[k].label();
            parts.push(if c.is_one() {
                name
            } else if *c == Expr::int(-1) {
                format!("-{name}")
            } else {
                format!("({c})*{name}")
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }

    pub fn entries(&self) -> Vec<BracketEntry> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in (i + 1)..self.dim() {
                out.push(BracketEntry {
                    left: self.generators[i].label(),
                    right: self.generators[j].label(),
                    value: self.bracket_expr(i, j),
                    resolved: !self.unresolved.iter().any(|(a, b, _)| (*a, *b) == (i, j)),
                });
            }
        }
        out
    }

    pub fn is_central(&self, i: usize) -> bool {
        self.is_closed() && (0..self.dim()).all(|j| self.constants[i][j].iter().all(Expr::is_zero))
    }

    /// Largest violation of antisymmetry; empty when it holds.
    pub fn antisymmetry_defects(&self) -> Vec<Expr> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let s = &self.constants[i][j][k] + &self.constants[j][i][k];
                    if !exact_zero(&s) {
                        out.push(s);
                    }
                }
            }
        }
        out
    }

    /// Jacobi sums `c^m_ij c^l_mk + c^m_jk c^l_mi + c^m_ki c^l_mj` that fail
    /// to vanish.
    pub fn jacobi_defects(&self) -> Vec<Expr> {
        let n = self.dim();
        let c = &self.constants;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = Expr::zero();
                        for m in 0..n {
                            s = s
                                + &c[i][j][m] * &c[m][k][l]
                                + &c[j][k][m] * &c[m][i][l]
                                + &c[k][i][m] * &c[m][j][l];
                        }
                        if !exact_zero(&s) {
                            out.push(s);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn center_dim(&self) -> usize {
        let n = self.dim();
        let rows: Vec<Vec<Expr>> = (0..n)
            .flat_map(|j| (0..n).map(move |k| (j, k)))
            .map(|(j, k)| (0..n).map(|i| self.constants[i][j][k].clone()).collect())
            .collect();
        n - rank(rows, n)
    }

    /// Basis of the derived algebra in generator coordinates.
    pub fn derived_basis(&self) -> Vec<Vec<Expr>> {
        let n = self.dim();
        let rows: Vec<Vec<Expr>> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| self.constants[i][j].clone())
            .collect();
        let el = eliminate(rows, n);
        el.pivots.iter().map(|&(r, _)| el.rows[r].clone()).collect()
    }

    /// `K_ab = c^d_ac c^c_bd`.
    pub fn killing_form(&self) -> Vec<Vec<Expr>> {
        let n = self.dim();
        let c = &self.constants;
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let mut s = Expr::zero();
                        for p in 0..n {
                            for q in 0..n {
                                s = s + &c[a][p][q] * &c[b][q][p];
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    }

    /// Killing form restricted to the span of `basis` vectors.
    pub fn restricted_killing_form(&self, basis: &[Vec<Expr>]) -> Vec<Vec<Expr>> {
        let k = self.killing_form();
        let n = self.dim();
        basis
            .iter()
            .map(|u| {
                basis
                    .iter()
                    .map(|v| {
                        let mut s = Expr::zero();
                        for a in 0..n {
                            for b in 0..n {
                                s = s + &u[a] * &k[a][b] * &v[b];
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    }

    pub fn classify(&self) -> AlgebraTag {
        if !self.is_closed() {
            return AlgebraTag::Unclassified;
        }
        let n = self.dim();
        let derived = self.derived_basis();
        if derived.is_empty() {
            return AlgebraTag::Abelian(n);
        }
        if derived.len() == 3 && self.center_dim() == n - 3 {
            let form = self.restricted_killing_form(&derived);
            if negative_definite(&form) == Some(true) {
                return AlgebraTag::So3PlusAbelian(n - 3);
            }
        }
        AlgebraTag::Unclassified
    }
}

fn rational_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= a[col][col].clone();
        for r in (col + 1)..n {
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    det
}

/// Sylvester's criterion on a symmetric matrix with rational entries;
/// `None` when an entry is not a rational number.
pub fn negative_definite(form: &[Vec<Expr>]) -> Option<bool> {
    let q: Vec<Vec<Rational>> = form
        .iter()
        .map(|row| {
            row.iter()
                .map(Expr::as_rational)
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<_>>()?;
    let n = q.len();
    Some((1..=n).all(|k| {
        let minor: Vec<Vec<Rational>> = q[..k].iter().map(|r| r[..k].to_vec()).collect();
        let d = rational_det(&minor);
        if k % 2 == 1 {
            d < Rational::zero()
        } else {
            d > Rational::zero()
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liesym::{isometries, s0, s1, s2, s3, s4};

    #[test]
    fn rotation_brackets() {
        assert_eq!(lie_bracket(&s1(), &s2()), s3().named_none());
        assert_eq!(lie_bracket(&s1(), &s3()), (-&s2()).named_none());
        assert_eq!(lie_bracket(&s2(), &s3()), s1().named_none());
        assert!(lie_bracket(&s0(), &s2()).is_zero());
    }

    impl VectorField {
        fn named_none(mut self) -> VectorField {
            self.name = None;
            self
        }
    }

    #[test]
    fn isometry_table() {
        let t = commutator_table(&isometries());
        assert!(t.is_closed());
        assert!(t.is_central(0));
        assert_eq!(t.bracket_expr(1, 2), "S3");
        assert_eq!(t.bracket_expr(1, 3), "-S2");
        assert_eq!(t.bracket_expr(2, 3), "S1");
        assert_eq!(t.classify(), AlgebraTag::So3PlusAbelian(1));
        assert!(t.antisymmetry_defects().is_empty());
        assert!(t.jacobi_defects().is_empty());
        assert!(t.conditions.is_empty());
    }

    #[test]
    fn open_pair() {
        let t = commutator_table(&[s1(), s2()]);
        assert!(!t.is_closed());
        assert!(t.bracket_expr(0, 1).starts_with("outside span"));
        assert_eq!(t.classify(), AlgebraTag::Unclassified);
    }

    #[test]
    fn tags() {
        assert_eq!(
            commutator_table(&[s0(), s4()]).classify(),
            AlgebraTag::Abelian(2)
        );
        assert_eq!(commutator_table(&[s2()]).classify(), AlgebraTag::Abelian(1));
        assert_eq!(
            commutator_table(&[s1(), s2(), s3()]).classify(),
            AlgebraTag::So3PlusAbelian(0)
        );
        assert_eq!(AlgebraTag::So3PlusAbelian(2).to_string(), "A3,9+2A1");
        assert_eq!(AlgebraTag::Abelian(3).to_string(), "3A1");
    }

    #[test]
    fn parametric_combination_resolves() {
        let a = Expr::param("alpha");
        let gen = &s0().scale(&a) + &s4();
        let t = commutator_table(&[gen, s1(), s2(), s3()]);
        assert!(t.is_closed());
        assert_eq!(t.classify(), AlgebraTag::So3PlusAbelian(1));
    }

    #[test]
    fn sylvester() {
        let m = |v: [[i64; 2]; 2]| {
            v.iter()
                .map(|r| r.iter().map(|&x| Expr::int(x)).collect())
                .collect::<Vec<_>>()
        };
        assert_eq!(negative_definite(&m([[-2, 0], [0, -2]])), Some(true));
        assert_eq!(negative_definite(&m([[-2, 0], [0, 2]])), Some(false));
        assert_eq!(negative_definite(&[vec![Expr::param("a")]]), None);
    }
}
