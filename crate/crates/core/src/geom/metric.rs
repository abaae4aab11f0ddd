use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Deserialize;

use super::GeomError;
use crate::symcore::{parse, Atom, Coord, Expr, Rational};

/// Symbolic metric on a chart whose coordinates are drawn from (t, x, y).
#[derive(Clone, Debug)]
pub struct ChartMetric {
    name: String,
    coords: Vec<Coord>,
    g: Vec<Vec<Expr>>,
    inverse: Vec<Vec<Expr>>,
    det: Expr,
    sqrt_det: Option<Expr>,
}

impl ChartMetric {
    pub fn new(
        name: &str,
        coords: Vec<Coord>,
        g: Vec<Vec<Expr>>,
    ) -> Result<ChartMetric, GeomError> {
        let n = coords.len();
        if n == 0 || n > 3 {
            return Err(GeomError::Dimension(n));
        }
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].contains(c) {
                return Err(GeomError::DuplicateCoordinate(c.name().to_string()));
            }
        }
        if g.len() != n || g.iter().any(|row| row.len() != n) {
            return Err(GeomError::Dimension(n));
        }
        for i in 0..n {
            for j in 0..i {
                if g[i][j] != g[j][i] {
                    return Err(GeomError::Asymmetric(i, j));
                }
            }
        }
        for row in &g {
            for e in row {
                if let Some(c) = e.free_coords().into_iter().find(|c| !coords.contains(c)) {
                    return Err(GeomError::ForeignCoordinate(c.name().to_string()));
                }
            }
        }
        let det = determinant(&g);
        let inv_det = det.try_recip().ok_or(GeomError::Singular)?;
        let inverse = (0..n)
            .map(|i| (0..n).map(|j| cofactor(&g, j, i) * &inv_det).collect())
            .collect();
        let sqrt_det = sqrt_abs(&det);
        Ok(ChartMetric {
            name: name.to_string(),
            coords,
            g,
            inverse,
            det,
            sqrt_det,
        })
    }

    /// Diagonal metric.
    pub fn diagonal(
        name: &str,
        coords: Vec<Coord>,
        diag: Vec<Expr>,
    ) -> Result<ChartMetric, GeomError> {
        let n = diag.len();
        let g = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            diag[i].clone()
                        } else {
                            Expr::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        ChartMetric::new(name, coords, g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn g(&self, i: usize, j: usize) -> &Expr {
        &self.g[i][j]
    }

    pub fn inv(&self, i: usize, j: usize) -> &Expr {
        &self.inverse[i][j]
    }

    pub fn det(&self) -> &Expr {
        &self.det
    }

    /// `√|det g|` when the determinant is a single term whose absolute value
    /// is a perfect square; sign fixed so that `√|g| = sin x` for
    /// `det = ±sin(x)^2`.
    pub fn sqrt_abs_det(&self) -> Option<&Expr> {
        self.sqrt_det.as_ref()
    }

    /// Index of a coordinate within the chart.
    pub fn index_of(&self, c: Coord) -> Option<usize> {
        self.coords.iter().position(|&d| d == c)
    }

    /// Load a TOML metric definition.
    pub fn from_toml_str(text: &str) -> Result<ChartMetric, GeomError> {
        let file: MetricFile = toml::from_str(text).map_err(|e| GeomError::File(e.to_string()))?;
        let coords = file
            .coordinates
            .iter()
            .map(|s| {
                let mut chars = s.chars();
                match (chars.next().and_then(Coord::from_char), chars.next()) {
                    (Some(c), None) => Ok(c),
                    _ => Err(GeomError::UnknownCoordinate(s.clone())),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let n = coords.len();
        let mut g = vec![vec![Expr::zero(); n]; n];
        let mut seen = vec![vec![false; n]; n];
        for (key, text) in &file.metric {
            let (a, b) = key
                .split_once(',')
                .ok_or_else(|| GeomError::BadEntryKey(key.clone()))?;
            let idx = |s: &str| {
                let s = s.trim();
                file.coordinates
                    .iter()
                    .position(|c| c == s)
                    .ok_or_else(|| GeomError::BadEntryKey(key.clone()))
            };
            let (i, j) = (idx(a)?, idx(b)?);
            let e = parse(text).map_err(|source| GeomError::Entry {
                key: key.clone(),
                source,
            })?;
            if seen[i][j] && g[i][j] != e {
                return Err(GeomError::Asymmetric(i.max(j), i.min(j)));
            }
            g[i][j] = e.clone();
            g[j][i] = e;
            seen[i][j] = true;
            seen[j][i] = true;
        }
        let name = file.name.unwrap_or_else(|| "custom".to_string());
        ChartMetric::new(&name, coords, g)
    }

    pub fn from_file(path: &Path) -> Result<ChartMetric, GeomError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GeomError::File(format!("{}: {e}", path.display())))?;
        ChartMetric::from_toml_str(&text)
    }

    /// Bundled metrics: `s2xr`, `sphere`, `euclidean2`, `euclidean3`, `minkowski`.
    pub fn preset(name: &str) -> Result<ChartMetric, GeomError> {
        let x = Expr::x();
        let sin2 = Expr::sin(&x).pow(2);
        let one = Expr::one;
        match name {
            "s2xr" => ChartMetric::diagonal(
                name,
                vec![Coord::T, Coord::X, Coord::Y],
                vec![one(), -one(), -sin2],
            ),
            "sphere" => ChartMetric::diagonal(name, vec![Coord::X, Coord::Y], vec![one(), sin2]),
            "euclidean2" => {
                ChartMetric::diagonal(name, vec![Coord::X, Coord::Y], vec![one(), one()])
            }
            "euclidean3" => ChartMetric::diagonal(
                name,
                vec![Coord::T, Coord::X, Coord::Y],
                vec![one(), one(), one()],
            ),
            "minkowski" => ChartMetric::diagonal(
                name,
                vec![Coord::T, Coord::X, Coord::Y],
                vec![one(), -one(), -one()],
            ),
            other => Err(GeomError::UnknownPreset(other.to_string())),
        }
    }

    pub const PRESETS: [&'static str; 5] =
        ["s2xr", "sphere", "euclidean2", "euclidean3", "minkowski"];

    /// Metric scaled by a constant factor.
    pub fn scaled(&self, k: &Expr) -> Result<ChartMetric, GeomError> {
        let g = self
            .g
            .iter()
            .map(|row| row.iter().map(|e| k * e).collect())
            .collect();
        ChartMetric::new(&self.name, self.coords.clone(), g)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricFile {
    name: Option<String>,
    coordinates: Vec<String>,
    #[serde(default)]
    metric: BTreeMap<String, String>,
}

fn minor(g: &[Vec<Expr>], row: usize, col: usize) -> Vec<Vec<Expr>> {
    g.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

fn determinant(g: &[Vec<Expr>]) -> Expr {
    match g.len() {
        0 => Expr::one(),
        1 => g[0][0].clone(),
        _ => (0..g.len())
            .filter(|&j| !g[0][j].is_zero())
            .map(|j| &g[0][j] * &cofactor(g, 0, j))
            .sum(),
    }
}

fn cofactor(g: &[Vec<Expr>], row: usize, col: usize) -> Expr {
    let m = determinant(&minor(g, row, col));
    if (row + col).is_multiple_of(2) {
        m
    } else {
        -m
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(Rational::new(root(q.numer())?, root(q.denom())?))
}

fn sqrt_abs(det: &Expr) -> Option<Expr> {
    let (m, c) = det.as_single_term()?;
    let mut out = Expr::rational(rational_sqrt(&c.abs())?);
    for (a, k) in m.factors() {
        if k % 2 != 0 {
            return None;
        }
        let half = if matches!(a, Atom::Recip(_)) {
            -(k / 2)
        } else {
            k / 2
        };
        out = out * Expr::atom(a.clone()).pow(half);
    }
    Some(out)
}
