//! Curvature identities, checked symbolically and against a
//! finite-difference oracle.

#![allow(clippy::needless_range_loop)]

mod common;

use common::curvature::{point, random_metrics, s2xr, scalar_fd};
use kgsphere::geom::{
    christoffel, curvature, killing_check, sectional_curvature, ChartMetric, CurvatureBundle,
};
use kgsphere::liesym::{isometries, lie_bracket};
use kgsphere::symcore::{eval_numeric, rat, seeded_rng, Expr, DEFAULT_SEED};

const SAMPLES: [[f64; 3]; 3] = [[0.3, 0.9, 0.4], [-0.7, 1.4, 2.2], [1.1, 2.1, 5.0]];

#[test]
fn finite_difference_oracle_matches_symbolic_scalar() {
    let mut metrics = random_metrics(3);
    assert!(metrics
        .iter()
        .all(|m| !curvature(&m.symbolic).scalar.is_constant()));
    metrics.push(s2xr());
    for m in &metrics {
        let b = curvature(&m.symbolic);
        for p in SAMPLES {
            let want = scalar_fd(&m.numeric, p);
            let got = eval_numeric(&b.scalar, &point(p)).unwrap();
            assert!(
                (got - want).abs() < 1e-6 * want.abs().max(1.0),
                "{}: {got} vs {want} at {p:?}",
                m.name
            );
        }
    }
}

#[test]
fn s2xr_scalar_is_minus_two() {
    let m = s2xr();
    for p in SAMPLES {
        assert!((scalar_fd(&m.numeric, p) + 2.0).abs() < 1e-6);
    }
    let b = curvature(&m.symbolic);
    assert_eq!(b.scalar, Expr::int(-2));
    assert!(b.scalar.free_coords().is_empty());
}

#[test]
fn bianchi_identities() {
    let mut metrics = random_metrics(3);
    metrics.push(s2xr());
    for m in &metrics {
        let b = curvature(&m.symbolic);
        assert!(b.bianchi_defects().is_empty(), "{}", m.name);
        assert!(
            b.contracted_bianchi_defects(&m.symbolic).is_empty(),
            "{}",
            m.name
        );
    }
}

fn trace(m: &ChartMetric, b: &CurvatureBundle) -> Expr {
    let n = m.dim();
    let mut s = Expr::zero();
    for i in 0..n {
        for j in 0..n {
            s = s + m.inv(i, j) * &b.ricci[i][j];
        }
    }
    s
}

#[test]
fn contracted_ricci_is_the_scalar() {
    let mut metrics = random_metrics(3);
    metrics.push(s2xr());
    for m in &metrics {
        let b = curvature(&m.symbolic);
        assert_eq!(trace(&m.symbolic, &b), b.scalar, "{}", m.name);
    }
}

#[test]
fn christoffel_symbols_ignore_constant_rescaling() {
    for m in random_metrics(3).iter().chain([s2xr()].iter()) {
        let base = christoffel(&m.symbolic);
        for c in [-1, 2] {
            let scaled = m.symbolic.scaled(&Expr::rational(rat(c, 1))).unwrap();
            assert_eq!(christoffel(&scaled), base, "{} scaled by {c}", m.name);
        }
    }
}

#[test]
fn christoffel_symbols_are_symmetric() {
    for m in random_metrics(3) {
        let g = christoffel(&m.symbolic);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(g[i][j][k], g[i][k][j]);
                }
            }
        }
    }
}

#[test]
fn sectional_curvature_of_s2xr() {
    let m = ChartMetric::preset("s2xr").unwrap();
    let b = curvature(&m);
    let e = |i: usize| {
        (0..3)
            .map(|k| if k == i { 1.0 } else { 0.0 })
            .collect::<Vec<_>>()
    };
    for p in SAMPLES {
        let tx = sectional_curvature(&m, &b, &point(p), &e(0), &e(1)).unwrap();
        let xy = sectional_curvature(&m, &b, &point(p), &e(1), &e(2)).unwrap();
        assert!(tx.abs() < 1e-9);
        assert!((xy + 1.0).abs() < 1e-9);
    }
    let p = point([0.0, std::f64::consts::FRAC_PI_3, 0.0]);
    assert!((sectional_curvature(&m, &b, &p, &e(1), &e(2)).unwrap() + 1.0).abs() < 1e-9);
}

#[test]
fn brackets_of_killing_fields_are_killing() {
    let m = ChartMetric::preset("s2xr").unwrap();
    let mut rng = seeded_rng(DEFAULT_SEED);
    let iso = isometries();
    for a in &iso {
        for b in &iso {
            let k = killing_check(&m, &lie_bracket(a, b), &mut rng).unwrap();
            assert!(k.is_killing(), "[{}, {}]", a.label(), b.label());
        }
    }
}
