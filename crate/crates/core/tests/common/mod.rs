//! Generators and oracles shared by the integration suites.
#![allow(dead_code, clippy::needless_range_loop)]

pub mod curvature;
pub mod trees;

use kgsphere::equation::FSpec;
use kgsphere::liesym::{combination, isometries, s4, VectorField};
use kgsphere::numerics::{step, Boundary, Grid, GridField, Params, Problem};
use kgsphere::symcore::{rat, Expr};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

/// Seeds of the property runners, one per suite.
pub const SYMCORE_SEED: [u8; 32] = *b"kgsphere-symcore-property-seed!!";
pub const SYMMETRY_SEED: [u8; 32] = *b"kgsphere-symmetry-property-seed!";
pub const NUMERICS_SEED: [u8; 32] = *b"kgsphere-numerics-property-seed!";

pub fn runner(seed: [u8; 32], cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &seed))
}

pub fn coefficients(n: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-5i64..=5, 1i64..=4), n)
}

/// `Σ k_i X_i` over the isometries, plus `S4` when five coefficients are given.
pub fn combo(ks: &[(i64, i64)]) -> VectorField {
    let mut basis = isometries();
    basis.push(s4());
    let terms: Vec<_> = ks
        .iter()
        .zip(basis)
        .map(|(&(p, q), f)| (Expr::rational(rat(p, q)), f))
        .collect();
    combination(&terms)
}

pub fn same(a: &VectorField, b: &VectorField) -> bool {
    a.xi == b.xi && a.eta == b.eta
}

pub fn smooth(a: [f64; 4]) -> impl Fn(f64, f64) -> f64 {
    move |x, y| {
        a[0] * x.cos()
            + a[1] * x.sin().powi(2) * (2.0 * y).cos()
            + a[2] * x.sin() * (y + a[3]).sin()
    }
}

pub fn free_problem(n: usize) -> Problem {
    let grid = Grid::standard(n, n, Boundary::Neumann).unwrap();
    Problem::new(grid, &FSpec::zero(), None, None, &Params::new()).unwrap()
}

pub fn march(mut s: GridField, p: &Problem, n: usize) -> GridField {
    for _ in 0..n {
        s = step(s, p).unwrap();
    }
    s
}

/// Largest gap after `n` steps forward and `n` back, relative to the data.
pub fn reversal_gap(p: &Problem, a: [f64; 4], b: [f64; 4], n: usize) -> f64 {
    let u0 = p.grid.sample(smooth(a));
    let v0 = p.grid.sample(smooth(b));
    let start = GridField::from_data(p, u0, &v0, 0.0);
    let mut s = march(start.clone(), p, n);
    s.reverse(p.grid.dt);
    let back = march(s, p, n);
    // Backwards the roles of the two levels are swapped.
    let scale = start.curr.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let gap = |x: &[f64], y: &[f64]| {
        x.iter()
            .zip(y)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    };
    gap(&back.prev, &start.curr).max(gap(&back.curr, &start.prev)) / scale
}
