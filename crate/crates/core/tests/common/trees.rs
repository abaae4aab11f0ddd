//! Random expression trees with a plain f64 evaluator.

use kgsphere::symcore::{Atom, Coord, Expr, Jet, Point};
use proptest::prelude::*;

#[derive(Clone, Debug)]
pub enum Tree {
    Leaf(usize),
    Int(i64),
    Add(Box<Tree>, Box<Tree>),
    Sub(Box<Tree>, Box<Tree>),
    Mul(Box<Tree>, Box<Tree>),
    Pow(Box<Tree>, i32),
    Sin(Box<Tree>),
    Cos(Box<Tree>),
    Linear(i64, usize, i64, usize),
    OverSin(Box<Tree>),
    OverShifted(Box<Tree>),
}

pub const LEAVES: [&str; 7] = ["t", "x", "y", "u", "u_t", "u_x", "u_y"];

pub fn leaf(i: usize) -> Expr {
    match i {
        0 => Expr::t(),
        1 => Expr::x(),
        2 => Expr::y(),
        3 => Expr::field("u"),
        _ => Expr::jet_of("u", &LEAVES[i][2..]),
    }
}

pub fn tree() -> impl Strategy<Value = Tree> {
    let base = prop_oneof![
        (0..LEAVES.len()).prop_map(Tree::Leaf),
        (-3i64..=3).prop_map(Tree::Int)
    ];
    // Trig arguments stay small: an integer combination of two leaves.
    let arg = (-2i64..=2, 0..LEAVES.len(), -2i64..=2, 0..LEAVES.len())
        .prop_map(|(a, i, b, j)| Tree::Linear(a, i, b, j));
    base.prop_recursive(4, 16, 2, move |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Add(a.into(), b.into())),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Sub(a.into(), b.into())),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Mul(a.into(), b.into())),
            (inner.clone(), 0i32..=2).prop_map(|(a, n)| Tree::Pow(a.into(), n)),
            arg.clone().prop_map(|a| Tree::Sin(a.into())),
            arg.clone().prop_map(|a| Tree::Cos(a.into())),
            inner.clone().prop_map(|a| Tree::OverSin(a.into())),
            inner.prop_map(|a| Tree::OverShifted(a.into())),
        ]
    })
}

impl Tree {
    pub fn build(&self) -> Expr {
        match self {
            Tree::Leaf(i) => leaf(*i),
            Tree::Int(n) => Expr::int(*n),
            Tree::Add(a, b) => a.build() + b.build(),
            Tree::Sub(a, b) => a.build() - b.build(),
            Tree::Mul(a, b) => a.build() * b.build(),
            Tree::Pow(a, n) => a.build().pow(*n),
            Tree::Linear(a, i, b, j) => Expr::int(*a) * leaf(*i) + Expr::int(*b) * leaf(*j),
            Tree::Sin(a) => Expr::sin(&a.build()),
            Tree::Cos(a) => Expr::cos(&a.build()),
            Tree::OverSin(a) => a.build() * Expr::sin(&Expr::x()).recip(),
            Tree::OverShifted(a) => a.build() * (Expr::int(3) + Expr::cos(&Expr::y())).recip(),
        }
    }

    pub fn value(&self, v: &[f64; 7]) -> f64 {
        match self {
            Tree::Leaf(i) => v[*i],
            Tree::Int(n) => *n as f64,
            Tree::Add(a, b) => a.value(v) + b.value(v),
            Tree::Sub(a, b) => a.value(v) - b.value(v),
            Tree::Mul(a, b) => a.value(v) * b.value(v),
            Tree::Pow(a, n) => a.value(v).powi(*n),
            Tree::Linear(a, i, b, j) => *a as f64 * v[*i] + *b as f64 * v[*j],
            Tree::Sin(a) => a.value(v).sin(),
            Tree::Cos(a) => a.value(v).cos(),
            Tree::OverSin(a) => a.value(v) / v[1].sin(),
            Tree::OverShifted(a) => a.value(v) / (3.0 + v[2].cos()),
        }
    }
}

pub fn values() -> impl Strategy<Value = [f64; 7]> {
    (
        -2.0..2.0f64,
        0.2..(std::f64::consts::PI - 0.2),
        0.0..std::f64::consts::TAU,
        prop::array::uniform4(-2.0..2.0f64),
    )
        .prop_map(|(t, x, y, j)| [t, x, y, j[0], j[1], j[2], j[3]])
}

pub fn point(v: &[f64; 7]) -> Point {
    let mut p = Point::new()
        .coord(Coord::T, v[0])
        .coord(Coord::X, v[1])
        .coord(Coord::Y, v[2]);
    for (i, name) in LEAVES.iter().enumerate().skip(3) {
        let suffix = name.get(2..).unwrap_or("");
        p.set(Atom::Jet(Jet::from_suffix("u", suffix).unwrap()), v[i]);
    }
    p
}
