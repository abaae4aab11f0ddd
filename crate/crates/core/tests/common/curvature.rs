//! Diagonal test metrics and a finite-difference curvature oracle working
//! on plain f64 metric functions.

use kgsphere::geom::ChartMetric;
use kgsphere::symcore::{seeded_rng, Coord, Expr, Point, DEFAULT_SEED};
use rand::Rng;

pub type Metric = Box<dyn Fn([f64; 3]) -> [f64; 3]>;
pub type Entry = Box<dyn Fn([f64; 3]) -> f64>;

/// A diagonal metric on (t, x, y), symbolic and numeric.
pub struct Diagonal {
    pub name: String,
    pub symbolic: ChartMetric,
    pub numeric: Metric,
}

/// Diagonal entry `s (a + b h)` with `h` one of a few profiles.
pub fn entry(profile: usize, s: i64, a: i64, b: i64) -> (Expr, Entry) {
    let (x, y) = (Expr::x(), Expr::y());
    let h = match profile {
        0 => Expr::cos(&x).pow(2),
        1 => Expr::sin(&y).pow(2),
        2 => x.pow(2),
        _ => Expr::sin(&x) * Expr::cos(&y),
    };
    let f: fn([f64; 3]) -> f64 = match profile {
        0 => |p| p[1].cos().powi(2),
        1 => |p| p[2].sin().powi(2),
        2 => |p| p[1] * p[1],
        _ => |p| p[1].sin() * p[2].cos(),
    };
    let e = Expr::int(s) * (Expr::int(a) + Expr::int(b) * h);
    (
        e,
        Box::new(move |p| s as f64 * (a as f64 + b as f64 * f(p))),
    )
}

pub fn random_metrics(count: usize) -> Vec<Diagonal> {
    let mut rng = seeded_rng(DEFAULT_SEED);
    (0..count)
        .map(|n| {
            let mut sym = Vec::new();
            let mut num = Vec::new();
            for k in 0..3 {
                let s = if k == 0 || rng.gen_bool(0.5) { 1 } else { -1 };
                let b = rng.gen_range(1..=2);
                let a = b + rng.gen_range(1..=3);
                let (e, f) = entry(rng.gen_range(0..4), s, a, b);
                sym.push(e);
                num.push(f);
            }
            let name = format!("random{n}");
            let symbolic = ChartMetric::diagonal(&name, Coord::ALL.to_vec(), sym).unwrap();
            let numeric: Metric = Box::new(move |p| [num[0](p), num[1](p), num[2](p)]);
            Diagonal {
                name,
                symbolic,
                numeric,
            }
        })
        .collect()
}

pub fn s2xr() -> Diagonal {
    Diagonal {
        name: "s2xr".into(),
        symbolic: ChartMetric::preset("s2xr").unwrap(),
        numeric: Box::new(|p| [1.0, -1.0, -p[1].sin().powi(2)]),
    }
}

/// Fourth-order central difference.
pub fn d4(f: &dyn Fn(f64) -> f64, h: f64) -> f64 {
    (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h)
}

pub fn shifted(p: [f64; 3], k: usize, s: f64) -> [f64; 3] {
    let mut q = p;
    q[k] += s;
    q
}

/// Γ^i_jk of a diagonal metric at `p` from differences of `g`.
pub fn gamma_fd(g: &Metric, p: [f64; 3]) -> [[[f64; 3]; 3]; 3] {
    let h = 1e-3;
    let gp = g(p);
    let mut dg = [[0.0; 3]; 3];
    for (k, row) in dg.iter_mut().enumerate() {
        for (i, v) in row.iter_mut().enumerate() {
            *v = d4(&|s| g(shifted(p, k, s))[i], h);
        }
    }
    let mut out = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                // Γ^i_jk = ½ g^ii (∂_j g_ik + ∂_k g_ij − ∂_i g_jk) for diagonal g
                let gik_j = if i == k { dg[j][i] } else { 0.0 };
                let gij_k = if i == j { dg[k][i] } else { 0.0 };
                let gjk_i = if j == k { dg[i][j] } else { 0.0 };
                out[i][j][k] = 0.5 / gp[i] * (gik_j + gij_k - gjk_i);
            }
        }
    }
    out
}

/// Scalar curvature with R^i_jks = ∂_k Γ^i_sj − ∂_s Γ^i_kj + Γ^i_kp Γ^p_sj − Γ^i_sp Γ^p_kj
/// and R_js = R^i_jis.
pub fn scalar_fd(g: &Metric, p: [f64; 3]) -> f64 {
    let h = 1e-2;
    let gam = gamma_fd(g, p);
    let mut dgam = [[[[0.0; 3]; 3]; 3]; 3];
    for (k, slot) in dgam.iter_mut().enumerate() {
        let samples: Vec<_> = [2.0, 1.0, -1.0, -2.0]
            .iter()
            .map(|&s| gamma_fd(g, shifted(p, k, s * h)))
            .collect();
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    slot[i][j][l] = (-samples[0][i][j][l] + 8.0 * samples[1][i][j][l]
                        - 8.0 * samples[2][i][j][l]
                        + samples[3][i][j][l])
                        / (12.0 * h);
                }
            }
        }
    }
    let gp = g(p);
    let mut r = 0.0;
    for j in 0..3 {
        let mut ric = 0.0;
        for i in 0..3 {
            let (k, s) = (i, j);
            ric += dgam[k][i][s][j] - dgam[s][i][k][j];
            for q in 0..3 {
                ric += gam[i][k][q] * gam[q][s][j] - gam[i][s][q] * gam[q][k][j];
            }
        }
        r += ric / gp[j];
    }
    r
}

pub fn point(p: [f64; 3]) -> Point {
    Point::new()
        .coord(Coord::T, p[0])
        .coord(Coord::X, p[1])
        .coord(Coord::Y, p[2])
}
