//! Floating-point evaluation. Floats never enter the expression tree; they
//! only appear here.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use super::atom::{Atom, Coord, Jet, Name};
use super::error::EvalError;
use super::expr::{Expr, Rational};

/// Numeric values for leaf atoms.
#[derive(Clone, Debug, Default)]
pub struct Point {
    values: BTreeMap<Atom, f64>,
}

impl Point {
    pub fn new() -> Point {
        Point::default()
    }

    pub fn with(mut self, atom: Atom, v: f64) -> Point {
        self.values.insert(atom, v);
        self
    }

    pub fn set(&mut self, atom: Atom, v: f64) {
        self.values.insert(atom, v);
    }

    pub fn coord(self, c: Coord, v: f64) -> Point {
        self.with(Atom::Coord(c), v)
    }

    pub fn jet(self, j: Jet, v: f64) -> Point {
        self.with(Atom::Jet(j), v)
    }

    pub fn param(self, name: &str, v: f64) -> Point {
        self.with(Atom::Param(Name::from(name)), v)
    }

    pub fn get(&self, atom: &Atom) -> Option<f64> {
        self.values.get(atom).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &f64)> {
        self.values.iter()
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Evaluate `e` in IEEE double precision.
pub fn eval_numeric(e: &Expr, point: &Point) -> Result<f64, EvalError> {
    eval_terms(e, point).map(|(v, _)| v)
}

/// Value together with the sum of absolute term magnitudes, used as the
/// cancellation scale when probing for zero.
pub fn eval_with_scale(e: &Expr, point: &Point) -> Result<(f64, f64), EvalError> {
    eval_terms(e, point)
}

fn eval_terms(e: &Expr, point: &Point) -> Result<(f64, f64), EvalError> {
    let mut sum = 0.0;
    let mut scale = 0.0;
    for (m, c) in e.terms() {
        let mut v = rational_to_f64(c);
        for (a, k) in m.factors() {
            let base = eval_atom(a, point)?;
            if *k < 0 && base == 0.0 {
                return Err(EvalError::Singular(format!(
                    "division by zero in factor {a:?}"
                )));
            }
            v *= base.powi(*k);
        }
        sum += v;
        scale += v.abs();
    }
    if !sum.is_finite() {
        return Err(EvalError::Singular("non-finite result".into()));
    }
    Ok((sum, scale))
}

fn eval_atom(a: &Atom, point: &Point) -> Result<f64, EvalError> {
    if let Some(v) = point.get(a) {
        return Ok(v);
    }
    match a {
        Atom::Sin(arg) => Ok(eval_numeric(arg, point)?.sin()),
        Atom::Cos(arg) => Ok(eval_numeric(arg, point)?.cos()),
        Atom::Ln(arg) => {
            let v = eval_numeric(arg, point)?;
            if v <= 0.0 {
                Err(EvalError::Singular(format!("ln of non-positive value {v}")))
            } else {
                Ok(v.ln())
            }
        }
        Atom::Recip(arg) => {
            let v = eval_numeric(arg, point)?;
            if v == 0.0 {
                Err(EvalError::Singular("reciprocal of zero".into()))
            } else {
                Ok(1.0 / v)
            }
        }
        other => Err(EvalError::Unbound(atom_label(other))),
    }
}

fn atom_label(a: &Atom) -> String {
    Expr::atom(a.clone()).to_string()
}

#[derive(Clone, Debug)]
enum Derived {
    Sin,
    Cos,
    Ln,
    Recip,
}

#[derive(Clone, Debug)]
struct CompiledSum {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledSum {
    fn eval(&self, slots: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, fs)| fs.iter().fold(*c, |acc, &(s, k)| acc * slots[s].powi(k)))
            .sum()
    }
}

/// An expression lowered to a flat evaluation program over a fixed list of
/// input atoms. Used in the inner loops of the finite-difference solver.
#[derive(Clone, Debug)]
pub struct CompiledExpr {
    n_inputs: usize,
    derived: Vec<(Derived, CompiledSum)>,
    body: CompiledSum,
}

struct SlotTable<'a> {
    inputs: &'a [Atom],
    derived_atoms: Vec<Atom>,
    derived: Vec<(Derived, CompiledSum)>,
}

impl SlotTable<'_> {
    fn slot(&mut self, a: &Atom) -> Result<usize, EvalError> {
        if let Some(i) = self.inputs.iter().position(|x| x == a) {
            return Ok(i);
        }
        if let Some(i) = self.derived_atoms.iter().position(|x| x == a) {
            return Ok(self.inputs.len() + i);
        }
        let (kind, arg) = match a {
            Atom::Sin(arg) => (Derived::Sin, arg),
            Atom::Cos(arg) => (Derived::Cos, arg),
            Atom::Ln(arg) => (Derived::Ln, arg),
            Atom::Recip(arg) => (Derived::Recip, arg),
            other => return Err(EvalError::Unbound(atom_label(other))),
        };
        let sum = self.lower(arg)?;
        self.derived_atoms.push(a.clone());
        self.derived.push((kind, sum));
        Ok(self.inputs.len() + self.derived.len() - 1)
    }

    fn lower(&mut self, e: &Expr) -> Result<CompiledSum, EvalError> {
        let mut terms = Vec::with_capacity(e.num_terms());
        for (m, c) in e.terms() {
            let mut fs = Vec::with_capacity(m.factors().len());
            for (a, k) in m.factors() {
                fs.push((self.slot(a)?, *k));
            }
            terms.push((rational_to_f64(c), fs));
        }
        Ok(CompiledSum { terms })
    }
}

impl CompiledExpr {
    /// Lower `e` so that `inputs[i]` is read from the i-th argument slot.
    /// Every leaf atom of `e` must appear in `inputs`.
    pub fn new(e: &Expr, inputs: &[Atom]) -> Result<CompiledExpr, EvalError> {
        let mut table = SlotTable {
            inputs,
            derived_atoms: Vec::new(),
            derived: Vec::new(),
        };
        let body = table.lower(e)?;
        Ok(CompiledExpr {
            n_inputs: inputs.len(),
            derived: table.derived,
            body,
        })
    }

    /// Evaluate with `scratch` reused across calls to avoid allocation.
    pub fn eval_into(&self, inputs: &[f64], scratch: &mut Vec<f64>) -> f64 {
        debug_assert_eq!(inputs.len(), self.n_inputs);
        scratch.clear();
        scratch.extend_from_slice(inputs);
        for (kind, sum) in &self.derived {
            let v = sum.eval(scratch);
            scratch.push(match kind {
                Derived::Sin => v.sin(),
                Derived::Cos => v.cos(),
                Derived::Ln => v.ln(),
                Derived::Recip => 1.0 / v,
            });
        }
        self.body.eval(scratch)
    }

    pub fn eval(&self, inputs: &[f64]) -> f64 {
        let mut scratch = Vec::with_capacity(inputs.len() + self.derived.len());
        self.eval_into(inputs, &mut scratch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn sine_at_half_pi() {
        let p = Point::new().coord(Coord::X, FRAC_PI_2);
        assert_eq!(eval_numeric(&Expr::sin(&Expr::x()), &p).unwrap(), 1.0);
    }

    #[test]
    fn cotangent_at_quarter_pi() {
        let p = Point::new().coord(Coord::X, FRAC_PI_4);
        let v = eval_numeric(&Expr::cot(&Expr::x()), &p).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unbound_and_singular_errors() {
        let p = Point::new();
        assert!(matches!(
            eval_numeric(&Expr::x(), &p),
            Err(EvalError::Unbound(_))
        ));
        let p = Point::new().coord(Coord::X, 0.0);
        assert!(matches!(
            eval_numeric(&Expr::x().recip(), &p),
            Err(EvalError::Singular(_))
        ));
    }

    #[test]
    fn compiled_matches_interpreted() {
        let x = Expr::x();
        let ux = Expr::jet_of("u", "x");
        let e = Expr::cot(&x) * &ux
            + (Expr::one() + x.pow(2)).recip() * Expr::sin(&(Expr::frac(1, 2) * &x));
        let inputs = [Atom::Coord(Coord::X), Atom::Jet(Jet::new("u", [0, 1, 0]))];
        let c = CompiledExpr::new(&e, &inputs).unwrap();
        let p = Point::new()
            .coord(Coord::X, 0.7)
            .jet(Jet::new("u", [0, 1, 0]), -1.3);
        let a = eval_numeric(&e, &p).unwrap();
        let b = c.eval(&[0.7, -1.3]);
        assert!((a - b).abs() < 1e-14);
    }
}
