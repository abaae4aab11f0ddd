use std::fmt;
use std::sync::Arc;

use super::expr::Expr;

/// Interned-ish name for parameters, fields and opaque functions.
pub type Name = Arc<str>;

/// Dependent variables of the jet space. Jets of any other field (the gauge
/// function `b`, for instance) are treated as given functions of the base
/// coordinates.
pub const DEPENDENT_FIELDS: [&str; 2] = ["u", "v"];

/// Base coordinates, in the fixed project-wide order (t, x, y) = (0, 1, 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    T,
    X,
    Y,
}

impl Coord {
    pub const ALL: [Coord; 3] = [Coord::T, Coord::X, Coord::Y];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Coord> {
        Coord::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Coord::T => "t",
            Coord::X => "x",
            Coord::Y => "y",
        }
    }

    pub fn from_char(c: char) -> Option<Coord> {
        match c {
            't' => Some(Coord::T),
            'x' => Some(Coord::X),
            'y' => Some(Coord::Y),
            _ => None,
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A field derivative symbol such as `u_tx`. Mixed partials commute, so the
/// multi-index is stored as derivative counts per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Jet {
    pub field: Name,
    pub orders: [u8; 3],
}

impl Jet {
    pub fn new(field: &str, orders: [u8; 3]) -> Jet {
        Jet {
            field: Name::from(field),
            orders,
        }
    }

    /// Jet from a derivative suffix like `"tx"`; `None` on any other letter.
    pub fn from_suffix(field: &str, suffix: &str) -> Option<Jet> {
        let mut orders = [0u8; 3];
        for ch in suffix.chars() {
            orders[Coord::from_char(ch)?.index()] += 1;
        }
        Some(Jet::new(field, orders))
    }

    pub fn order(&self) -> u32 {
        self.orders.iter().map(|&o| o as u32).sum()
    }

    pub fn bump(&self, c: Coord) -> Jet {
        let mut orders = self.orders;
        orders[c.index()] += 1;
        Jet {
            field: self.field.clone(),
            orders,
        }
    }

    pub fn is_dependent(&self) -> bool {
        DEPENDENT_FIELDS.contains(&&*self.field)
    }

    /// Derivative letters in (t, x, y) order, e.g. `"ttx"`.
    pub fn suffix(&self) -> String {
        let mut s = String::new();
        for c in Coord::ALL {
            for _ in 0..self.orders[c.index()] {
                s.push_str(c.name());
            }
        }
        s
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order() == 0 {
            write!(f, "{}", self.field)
        } else {
            write!(f, "{}_{}", self.field, self.suffix())
        }
    }
}

/// Index of `u` within an ansatz derivative multi-index over (t, x, y, u).
pub const ANSATZ_U: usize = 3;

/// Indivisible factor of a monomial.
///
/// The derived ordering is the fixed total order used for canonical
/// products: coordinates, parameters, jets, ansatz functions, opaque
/// functions, then the transcendental atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Coord(Coord),
    Param(Name),
    Jet(Jet),
    /// Unknown function of (t, x, y, u) with partial derivative counts; used
    /// for generic symmetry ansatz coefficients.
    Ansatz {
        name: Name,
        orders: [u8; 4],
    },
    /// `order`-th derivative of an opaque unary function, applied to `arg`.
    Fun {
        name: Name,
        order: u32,
        arg: Expr,
    },
    /// Argument is always a single rational-weighted monomial `m/d`.
    Sin(Expr),
    Cos(Expr),
    Ln(Expr),
    /// Inverse of a multi-term expression whose leading coefficient is one.
    Recip(Expr),
}

impl Atom {
    /// Atoms that carry no sub-expression.
    pub fn is_leaf(&self) -> bool {
        matches!(
            self,
            Atom::Coord(_) | Atom::Param(_) | Atom::Jet(_) | Atom::Ansatz { .. } | Atom::Fun { .. }
        )
    }

    pub fn ansatz_suffix(orders: &[u8; 4]) -> String {
        let letters = ["t", "x", "y", "u"];
        let mut s = String::new();
        for (i, l) in letters.iter().enumerate() {
            for _ in 0..orders[i] {
                s.push_str(l);
            }
        }
        s
    }
}
