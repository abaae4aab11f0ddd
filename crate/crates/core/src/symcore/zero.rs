//! Three-valued zero testing.
//!
//! A symbolic proof is the canonical form (after clearing denominators)
//! being literally zero. Numeric probing can only ever report a nonzero
//! witness; it never upgrades a verdict to proven.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use super::atom::{Atom, Coord};
use super::eval::{eval_with_scale, Point};
use super::expr::{Expr, Rational, TermSink};

/// Seed used by every probe unless the caller supplies another.
pub const DEFAULT_SEED: u64 = 0x5EED_2009;

/// Random sample points per probe.
pub const PROBE_POINTS: usize = 32;

/// Resamples allowed per point when evaluation hits a singularity.
pub const PROBE_RETRIES: usize = 16;

/// Relative cancellation tolerance for the numeric probe.
pub const PROBE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ZeroTest {
    ProvenZero,
    LikelyNonzero {
        witness: Vec<(String, f64)>,
        value: f64,
    },
    Undecided,
}

impl ZeroTest {
    pub fn is_proven(&self) -> bool {
        matches!(self, ZeroTest::ProvenZero)
    }

    pub fn label(&self) -> &'static str {
        match self {
            ZeroTest::ProvenZero => "PROVEN_ZERO",
            ZeroTest::LikelyNonzero { .. } => "LIKELY_NONZERO",
            ZeroTest::Undecided => "UNDECIDED",
        }
    }
}

/// Multiply out every reciprocal of a sum and every negative power of a
/// cosine. The result vanishes identically iff `e` does (on the generic
/// locus where the cleared factors are nonzero), and it lives in a ring
/// where the canonical form is unique.
pub fn clear_denominators(e: &Expr) -> Expr {
    let mut cur = e.clone();
    loop {
        let target = cur
            .terms()
            .flat_map(|(m, _)| m.factors().iter())
            .find_map(|(a, k)| match a {
                Atom::Recip(_) => Some(a.clone()),
                Atom::Cos(_) if *k < 0 => Some(a.clone()),
                _ => None,
            });
        let Some(target) = target else { return cur };
        let max = cur
            .terms()
            .map(|(m, _)| m.exponent(&target))
            .filter(|k| match target {
                Atom::Recip(_) => *k > 0,
                _ => *k < 0,
            })
            .map(|k| k.abs())
            .max()
            .unwrap_or(0);
        let mut sink = TermSink::default();
        for (m, c) in cur.terms() {
            let idx = m.factors().iter().position(|(a, _)| *a == target);
            match &target {
                Atom::Recip(p) => {
                    let k = idx.map(|i| m.factors()[i].1).unwrap_or(0);
                    let rest = match idx {
                        Some(i) => m.without(i),
                        None => m.clone(),
                    };
                    let term = Expr::from_monomial(rest, c.clone()) * p.pow(max - k);
                    sink.add_expr(&term, &Rational::from_integer(1.into()));
                }
                _ => {
                    let k = idx.map(|i| m.factors()[i].1).unwrap_or(0);
                    let shifted = match idx {
                        Some(i) => m.with_exponent(i, k + max),
                        None => m.clone(),
                    };
                    let extra = if idx.is_none() { max } else { 0 };
                    let term = Expr::from_monomial_reduced(shifted, c.clone())
                        * Expr::atom(target.clone()).pow(extra);
                    sink.add_expr(&term, &Rational::from_integer(1.into()));
                }
            }
        }
        cur = sink.finish();
    }
}

/// Draw a random value for a leaf atom from the documented ranges:
/// x in (0.2, pi - 0.2), y in (0, 2 pi), everything else in (-2, 2).
fn sample_atom<R: Rng>(a: &Atom, rng: &mut R) -> f64 {
    match a {
        Atom::Coord(Coord::X) => rng.gen_range(0.2..PI - 0.2),
        Atom::Coord(Coord::Y) => rng.gen_range(0.0..2.0 * PI),
        _ => rng.gen_range(-2.0..2.0),
    }
}

/// Random point for every leaf atom of `e`.
pub fn random_point<R: Rng>(leaves: &BTreeSet<Atom>, rng: &mut R) -> Point {
    let mut p = Point::new();
    for a in leaves {
        p.set(a.clone(), sample_atom(a, rng));
    }
    p
}

/// Three-valued zero test: proven by canonical form, otherwise triaged by
/// probing at [`PROBE_POINTS`] random points.
pub fn is_zero<R: Rng>(e: &Expr, rng: &mut R) -> ZeroTest {
    if e.is_zero() || clear_denominators(e).is_zero() {
        return ZeroTest::ProvenZero;
    }
    probe(e, rng)
}

/// Numeric probe only.
pub fn probe<R: Rng>(e: &Expr, rng: &mut R) -> ZeroTest {
    let leaves = e.leaf_atoms();
    for _ in 0..PROBE_POINTS {
        for _ in 0..PROBE_RETRIES {
            let p = random_point(&leaves, rng);
            let Ok((v, scale)) = eval_with_scale(e, &p) else {
                continue;
            };
            if v.abs() > PROBE_TOLERANCE * scale.max(1e-3) {
                let witness = p
                    .iter()
                    .map(|(a, v)| (Expr::atom(a.clone()).to_string(), *v))
                    .collect();
                return ZeroTest::LikelyNonzero { witness, value: v };
            }
            break;
        }
    }
    ZeroTest::Undecided
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(DEFAULT_SEED)
    }

    #[test]
    fn pythagorean_identity_is_proven() {
        let x = Expr::x();
        let e = Expr::sin(&x).pow(2) + Expr::cos(&x).pow(2) - Expr::one();
        assert_eq!(is_zero(&e, &mut rng()), ZeroTest::ProvenZero);
    }

    #[test]
    fn sine_minus_cosine_has_witness() {
        let x = Expr::x();
        let e = Expr::sin(&x) - Expr::cos(&x);
        assert!(matches!(
            is_zero(&e, &mut rng()),
            ZeroTest::LikelyNonzero { .. }
        ));
    }

    #[test]
    fn secant_identity_needs_clearing() {
        // 1/cos - sin^2/cos - cos = 0, not literal in the canonical basis.
        let x = Expr::x();
        let (s, c) = (Expr::sin(&x), Expr::cos(&x));
        let e = c.recip() - s.pow(2) * c.recip() - &c;
        assert!(!e.is_zero());
        assert_eq!(is_zero(&e, &mut rng()), ZeroTest::ProvenZero);
    }

    #[test]
    fn rational_function_identity_is_proven() {
        let x = Expr::x();
        let p = Expr::one() + x.pow(2);
        let e = p.recip() * &x * &p - &x;
        assert_eq!(is_zero(&e, &mut rng()), ZeroTest::ProvenZero);
        let q = (Expr::one() + &x).recip() - (Expr::one() - &x) * (Expr::one() - x.pow(2)).recip();
        assert_eq!(is_zero(&q, &mut rng()), ZeroTest::ProvenZero);
    }

    #[test]
    fn singular_points_are_resampled() {
        // 1/(x - 1) - 1/(x - 1) with one more term; near x = 1 evaluation blows up.
        let x = Expr::x();
        let e = (&x - Expr::one()).recip() + Expr::one();
        assert!(matches!(
            is_zero(&e, &mut rng()),
            ZeroTest::LikelyNonzero { .. }
        ));
    }
}
