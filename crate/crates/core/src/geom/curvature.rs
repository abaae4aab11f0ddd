use super::{ChartMetric, GeomError};
use crate::symcore::{clear_denominators, diff, eval_numeric, partial, Expr, Jet, Point, Var};

/// Index convention shared by every curvature result.
pub const CONVENTION: &str = "R^i_jks = d_k G^i_sj - d_s G^i_kj + G^i_kl G^l_sj - G^i_sl G^l_kj; \
R_ij = R^k_ikj; R = g^ij R_ij";

/// `gamma[k][i][j] = Γ^k_ij`.
pub type Christoffel = Vec<Vec<Vec<Expr>>>;

#[derive(Clone, Debug)]
pub struct CurvatureBundle {
    pub christoffel: Christoffel,
    /// `riemann[i][j][k][s] = R^i_jks`.
    pub riemann: Vec<Vec<Vec<Vec<Expr>>>>,
    pub ricci: Vec<Vec<Expr>>,
    pub scalar: Expr,
    pub convention: &'static str,
}

fn d(m: &ChartMetric, e: &Expr, i: usize) -> Expr {
    partial(e, &Var::Coord(m.coords()[i]))
}

pub fn christoffel(m: &ChartMetric) -> Christoffel {
    let n = m.dim();
    let half = Expr::frac(1, 2);
    // dg[l][i][j] = ∂_l g_ij
    let dg: Vec<Vec<Vec<Expr>>> = (0..n)
        .map(|l| {
            (0..n)
                .map(|i| (0..n).map(|j| d(m, m.g(i, j), l)).collect())
                .collect()
        })
        .collect();
    (0..n)
        .map(|k| {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let s: Expr = (0..n)
                                .filter(|&l| !m.inv(k, l).is_zero())
                                .map(|l| {
                                    m.inv(k, l) * &(&dg[i][l][j] + &dg[j][l][i] - &dg[l][i][j])
                                })
                                .sum();
                            &half * &s
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

pub fn riemann(m: &ChartMetric, gamma: &Christoffel) -> Vec<Vec<Vec<Vec<Expr>>>> {
    let n = m.dim();
    let mut r = vec![vec![vec![vec![Expr::zero(); n]; n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for s in 0..n {
                    if s == k {
                        continue;
                    }
                    if s < k {
                        r[i][j][k][s] = -r[i][j][s][k].clone();
                        continue;
                    }
                    let mut e = d(m, &gamma[i][s][j], k) - d(m, &gamma[i][k][j], s);
                    for l in 0..n {
                        e = e + &gamma[i][k][l] * &gamma[l][s][j]
                            - &gamma[i][s][l] * &gamma[l][k][j];
                    }
                    r[i][j][k][s] = e;
                }
            }
        }
    }
    r
}

pub fn ricci(m: &ChartMetric, riem: &[Vec<Vec<Vec<Expr>>>]) -> Vec<Vec<Expr>> {
    let n = m.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| riem[k][i][k][j].clone()).sum())
                .collect()
        })
        .collect()
}

pub fn scalar_curvature(m: &ChartMetric, ric: &[Vec<Expr>]) -> Expr {
    let n = m.dim();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| m.inv(i, j) * &ric[i][j])
        .sum()
}

pub fn curvature(m: &ChartMetric) -> CurvatureBundle {
    let christoffel = christoffel(m);
    let riemann = riemann(m, &christoffel);
    let ricci = ricci(m, &riemann);
    let scalar = scalar_curvature(m, &ricci);
    CurvatureBundle {
        christoffel,
        riemann,
        ricci,
        scalar,
        convention: CONVENTION,
    }
}

impl CurvatureBundle {
    /// True when the scalar curvature depends on no coordinate.
    pub fn scalar_is_constant(&self) -> bool {
        self.scalar.is_constant()
    }

    /// Nonvanishing entries of `R^i_jks + R^i_ksj + R^i_sjk`.
    pub fn bianchi_defects(&self) -> Vec<Expr> {
        let n = self.riemann.len();
        let r = &self.riemann;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for s in 0..n {
                        out.push(&r[i][j][k][s] + &r[i][k][s][j] + &r[i][s][j][k]);
                    }
                }
            }
        }
        nonvanishing(out)
    }

    /// Nonvanishing entries of `∇^i R_ij − ½ ∂_j R`, the contracted second
    /// Bianchi identity.
    pub fn contracted_bianchi_defects(&self, m: &ChartMetric) -> Vec<Expr> {
        let n = m.dim();
        let (gam, ric) = (&self.christoffel, &self.ricci);
        let mut out = Vec::new();
        for j in 0..n {
            let mut div = Expr::zero();
            for i in 0..n {
                for k in 0..n {
                    let ginv = m.inv(i, k);
                    if ginv.is_zero() {
                        continue;
                    }
                    let mut cov = d(m, &ric[i][j], k);
                    for l in 0..n {
                        cov = cov - &gam[l][k][i] * &ric[l][j] - &gam[l][k][j] * &ric[i][l];
                    }
                    div = div + ginv * &cov;
                }
            }
            out.push(div - d(m, &self.scalar, j) * Expr::frac(1, 2));
        }
        nonvanishing(out)
    }
}

fn nonvanishing(v: Vec<Expr>) -> Vec<Expr> {
    v.into_iter()
        .filter(|e| !(e.is_zero() || clear_denominators(e).is_zero()))
        .collect()
}

fn chart_point(m: &ChartMetric, p: &Point) -> Result<Point, GeomError> {
    let mut q = p.clone();
    for c in m.coords() {
        if p.get(&crate::symcore::Atom::Coord(*c)).is_none() {
            q.set(crate::symcore::Atom::Coord(*c), 0.0);
        }
    }
    Ok(q)
}

/// Sectional curvature of the plane spanned by `x` and `y` at `p`.
pub fn sectional_curvature(
    m: &ChartMetric,
    bundle: &CurvatureBundle,
    p: &Point,
    x: &[f64],
    y: &[f64],
) -> Result<f64, GeomError> {
    let n = m.dim();
    if x.len() != n || y.len() != n {
        return Err(GeomError::Dimension(x.len().max(y.len())));
    }
    let p = chart_point(m, p)?;
    let ev = |e: &Expr| eval_numeric(e, &p).map_err(GeomError::Eval);
    let mut g = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            g[i][j] = ev(m.g(i, j))?;
        }
    }
    let dot = |a: &[f64], b: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += g[i][j] * a[i] * b[j];
            }
        }
        s
    };
    let den = dot(x, x) * dot(y, y) - dot(x, y).powi(2);
    let scale = dot(x, x).abs() * dot(y, y).abs();
    if den.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE) || den == 0.0 {
        return Err(GeomError::DegeneratePlane);
    }
    let mut num = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let w = x[i] * y[j] * x[k] * y[l];
                    if w == 0.0 {
                        continue;
                    }
                    let mut lowered = 0.0;
                    for mm in 0..n {
                        let r = &bundle.riemann[mm][j][k][l];
                        if g[i][mm] != 0.0 && !r.is_zero() {
                            lowered += g[i][mm] * ev(r)?;
                        }
                    }
                    num += lowered * w;
                }
            }
        }
    }
    Ok(num / den)
}

/// `g^ij (φ_ij − Γ^k_ij φ_k)` in jet atoms of `field`.
pub fn laplace_beltrami(m: &ChartMetric, field: &str) -> Expr {
    let n = m.dim();
    let gamma = christoffel(m);
    let jet = |idx: &[usize]| {
        let mut j = Jet::new(field, [0, 0, 0]);
        for &i in idx {
            j = j.bump(m.coords()[i]);
        }
        Expr::jet(j)
    };
    let mut out = Expr::zero();
    for i in 0..n {
        for j in 0..n {
            if m.inv(i, j).is_zero() {
                continue;
            }
            let mut inner = jet(&[i, j]);
            for k in 0..n {
                inner = inner - &gamma[k][i][j] * &jet(&[k]);
            }
            out = out + m.inv(i, j) * &inner;
        }
    }
    out
}

/// `(1/√|g|) ∂_i(√|g| g^ij ∂_j φ)`, available when `√|g|` is.
pub fn laplace_beltrami_divergence(m: &ChartMetric, field: &str) -> Option<Expr> {
    let n = m.dim();
    let vol = m.sqrt_abs_det()?;
    let mut out = Expr::zero();
    for i in 0..n {
        let flux: Expr = (0..n)
            .map(|j| vol * m.inv(i, j) * Expr::jet(Jet::new(field, [0, 0, 0]).bump(m.coords()[j])))
            .sum();
        out = out + diff(&flux, m.coords()[i]);
    }
    Some(out * vol.recip())
}
