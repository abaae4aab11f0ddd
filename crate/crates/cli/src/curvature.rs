use kgsphere::geom::{curvature, sectional_curvature, ChartMetric, CurvatureBundle};
use kgsphere::symcore::{Coord, Point};
use serde::Serialize;

use crate::report::{Check, RunReport};

#[derive(Serialize)]
struct Sample {
    plane: String,
    value: f64,
}

/// Sample point for sectional curvatures.
fn sample_point() -> Point {
    Point::new()
        .coord(Coord::T, 0.4)
        .coord(Coord::X, 1.1)
        .coord(Coord::Y, 0.7)
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect()
}

fn listing(r: &mut RunReport, m: &ChartMetric, b: &CurvatureBundle) {
    let names: Vec<&str> = m.coords().iter().map(|c| c.name()).collect();
    let n = m.dim();
    let mut gamma = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in j..n {
                let e = &b.christoffel[i][j][k];
                if !e.is_zero() {
                    gamma.push(format!("Gamma^{}_{}{} = {e}", names[i], names[j], names[k]));
                }
            }
        }
    }
    let mut ricci = Vec::new();
    for i in 0..n {
        for j in i..n {
            if !b.ricci[i][j].is_zero() {
                ricci.push(format!("R_{}{} = {}", names[i], names[j], b.ricci[i][j]));
            }
        }
    }
    r.line(format!("metric {} on ({})", m.name(), names.join(", ")));
    r.line(format!("convention: {}", b.convention));
    for l in gamma.iter().chain(&ricci) {
        r.line(format!("  {l}"));
    }
    r.line(format!("  R = {}", b.scalar));
    r.data("christoffel", gamma);
    r.data("ricci", ricci);
    r.data("scalar", b.scalar.to_string());
    r.data("scalar_latex", b.scalar.to_latex());
    r.data("convention", b.convention);
}

pub fn run(r: &mut RunReport, m: &ChartMetric, is_s2xr: bool) -> anyhow::Result<()> {
    let b = curvature(m);
    listing(r, m, &b);
    r.check(Check::holds("scalar curvature is constant", b.scalar_is_constant()).info());
    r.check(Check::holds(
        "first Bianchi identity",
        b.bianchi_defects().is_empty(),
    ));
    r.check(Check::holds(
        "contracted second Bianchi identity",
        b.contracted_bianchi_defects(m).is_empty(),
    ));
    let n = m.dim();
    let names: Vec<&str> = m.coords().iter().map(|c| c.name()).collect();
    let mut samples = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = sectional_curvature(m, &b, &sample_point(), &unit(n, i), &unit(n, j))?;
            let plane = format!("{}-{}", names[i], names[j]);
            r.line(format!("  K({plane}) = {v:.12}"));
            samples.push(Sample { plane, value: v });
        }
    }
    if is_s2xr {
        let value = |p: &str| {
            samples
                .iter()
                .find(|s| s.plane == p)
                .map(|s| s.value)
                .expect("plane sampled")
        };
        r.check(Check::near(
            "sectional curvature of the t-x plane",
            value("t-x"),
            0.0,
            1e-9,
        ));
        r.check(Check::near(
            "sectional curvature of the x-y plane",
            value("x-y"),
            -1.0,
            1e-9,
        ));
        r.check(Check::holds(
            "scalar curvature of s2xr is a nonzero constant",
            b.scalar_is_constant() && !b.scalar.is_zero(),
        ));
        r.line("  reference value R = -1 equals the x-y sectional curvature, half of R in this convention");
        r.data("reference_scalar", "-1");
    }
    r.data("sectional", samples);
    r.mark("curvature");
    Ok(())
}
