use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use crate::symcore::{partial, Coord, Expr, Var};

/// Point generator `ξ^t ∂_t + ξ^x ∂_x + ξ^y ∂_y + η ∂_u` with coefficients
/// over (t, x, y, u).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    pub name: Option<String>,
    pub xi: [Expr; 3],
    pub eta: Expr,
}

/// Infix rendering of a field's four coefficients.
#[derive(Clone, Debug, Serialize)]
pub struct FieldComponents {
    pub name: String,
    pub xi: [String; 3],
    pub eta: String,
}

impl VectorField {
    pub fn new(xi: [Expr; 3], eta: Expr) -> VectorField {
        VectorField {
            name: None,
            xi,
            eta,
        }
    }

    pub fn named(mut self, name: &str) -> VectorField {
        self.name = Some(name.to_string());
        self
    }

    pub fn zero() -> VectorField {
        VectorField::new([Expr::zero(), Expr::zero(), Expr::zero()], Expr::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.xi.iter().all(Expr::is_zero) && self.eta.is_zero()
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.to_string())
    }

    /// Coefficient along the i-th variable of (t, x, y, u).
    pub fn coefficient(&self, i: usize) -> &Expr {
        if i < 3 {
            &self.xi[i]
        } else {
            &self.eta
        }
    }

    pub fn scale(&self, k: &Expr) -> VectorField {
        VectorField::new(
            [k * &self.xi[0], k * &self.xi[1], k * &self.xi[2]],
            k * &self.eta,
        )
    }

    /// Action as a derivation on functions of (t, x, y, u).
    pub fn apply(&self, e: &Expr) -> Expr {
        let mut out = &self.eta * &partial(e, &Var::u());
        for c in Coord::ALL {
            let xi = &self.xi[c.index()];
            if !xi.is_zero() {
                out = out + xi * &partial(e, &Var::Coord(c));
            }
        }
        out
    }

    pub fn components(&self) -> FieldComponents {
        FieldComponents {
            name: self.label(),
            xi: [
                self.xi[0].to_string(),
                self.xi[1].to_string(),
                self.xi[2].to_string(),
            ],
            eta: self.eta.to_string(),
        }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = ["d_t", "d_x", "d_y", "d_u"]
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.coefficient(*i).is_zero())
            .map(|(i, d)| format!("({})*{d}", self.coefficient(i)))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, o: &VectorField) -> VectorField {
        VectorField::new(
            [
                &self.xi[0] + &o.xi[0],
                &self.xi[1] + &o.xi[1],
                &self.xi[2] + &o.xi[2],
            ],
            &self.eta + &o.eta,
        )
    }
}

impl Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, o: &VectorField) -> VectorField {
        self + &(-o)
    }
}

impl Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        self.scale(&Expr::int(-1))
    }
}

/// `S0 = ∂_t`.
pub fn s0() -> VectorField {
    VectorField::new([Expr::one(), Expr::zero(), Expr::zero()], Expr::zero()).named("S0")
}

/// `S1 = ∂_y`.
pub fn s1() -> VectorField {
    VectorField::new([Expr::zero(), Expr::zero(), Expr::one()], Expr::zero()).named("S1")
}

/// `S2 = sin y ∂_x + cot x cos y ∂_y`.
pub fn s2() -> VectorField {
    let (x, y) = (Expr::x(), Expr::y());
    VectorField::new(
        [Expr::zero(), Expr::sin(&y), Expr::cot(&x) * Expr::cos(&y)],
        Expr::zero(),
    )
    .named("S2")
}

/// `S3 = cos y ∂_x − cot x sin y ∂_y`.
pub fn s3() -> VectorField {
    let (x, y) = (Expr::x(), Expr::y());
    VectorField::new(
        [
            Expr::zero(),
            Expr::cos(&y),
            -(Expr::cot(&x) * Expr::sin(&y)),
        ],
        Expr::zero(),
    )
    .named("S3")
}

/// `S4 = u ∂_u`.
pub fn s4() -> VectorField {
    VectorField::new([Expr::zero(), Expr::zero(), Expr::zero()], Expr::field("u")).named("S4")
}

/// `b ∂_u` for a given function `b(t, x, y)`.
pub fn gauge(b: &str) -> VectorField {
    VectorField::new([Expr::zero(), Expr::zero(), Expr::zero()], Expr::field(b)).named("Sinf")
}

/// The isometry generators S0..S3.
pub fn isometries() -> Vec<VectorField> {
    vec![s0(), s1(), s2(), s3()]
}

/// Bundled generator by name: `S0`..`S4`, `Sinf`.
pub fn preset(name: &str) -> Option<VectorField> {
    Some(match name {
        "S0" => s0(),
        "S1" => s1(),
        "S2" => s2(),
        "S3" => s3(),
        "S4" => s4(),
        "Sinf" => gauge("b"),
        _ => return None,
    })
}
