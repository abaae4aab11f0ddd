//! Total and partial derivatives on the jet space.

use super::atom::{Atom, Coord, Jet, ANSATZ_U};
use super::expr::{Expr, Rational, TermSink};

/// Independent variable of the jet space for partial differentiation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Var {
    Coord(Coord),
    Jet(Jet),
}

impl Var {
    pub fn u() -> Var {
        Var::Jet(Jet::new("u", [0, 0, 0]))
    }
}

/// Chain rule over a whole expression, given the derivative of each leaf.
fn derive(e: &Expr, leaf: &dyn Fn(&Atom) -> Expr) -> Expr {
    let mut sink = TermSink::default();
    for (m, c) in e.terms() {
        for (i, (a, k)) in m.factors().iter().enumerate() {
            let da = derive_atom(a, leaf);
            if da.is_zero() {
                continue;
            }
            let rest = Expr::from_monomial(
                m.with_exponent(i, k - 1),
                c * Rational::from_integer((*k).into()),
            );
            sink.add_expr(&(rest * da), &Rational::from_integer(1.into()));
        }
    }
    sink.finish()
}

fn derive_atom(a: &Atom, leaf: &dyn Fn(&Atom) -> Expr) -> Expr {
    match a {
        Atom::Fun { name, order, arg } => {
            let darg = derive(arg, leaf);
            if darg.is_zero() {
                Expr::zero()
            } else {
                Expr::fun(name, order + 1, arg) * darg
            }
        }
        Atom::Sin(arg) => {
            let darg = derive(arg, leaf);
            if darg.is_zero() {
                Expr::zero()
            } else {
                Expr::cos(arg) * darg
            }
        }
        Atom::Cos(arg) => {
            let darg = derive(arg, leaf);
            if darg.is_zero() {
                Expr::zero()
            } else {
                -(Expr::sin(arg) * darg)
            }
        }
        Atom::Ln(arg) => {
            let darg = derive(arg, leaf);
            if darg.is_zero() {
                Expr::zero()
            } else {
                darg * arg.recip()
            }
        }
        Atom::Recip(arg) => {
            let darg = derive(arg, leaf);
            if darg.is_zero() {
                Expr::zero()
            } else {
                -(Expr::atom(a.clone()).pow(2) * darg)
            }
        }
        _ => leaf(a),
    }
}

fn bump_ansatz(a: &Atom, slot: usize) -> Expr {
    match a {
        Atom::Ansatz { name, orders } => {
            let mut o = *orders;
            o[slot] += 1;
            Expr::ansatz(name, o)
        }
        _ => unreachable!("bump_ansatz on non-ansatz atom"),
    }
}

/// Total derivative `D_c`: jets chain (`D_x u_t = u_tx`), ansatz functions of
/// (t, x, y, u) pick up `u_c ∂_u`, coordinate functions differentiate
/// analytically.
pub fn diff(e: &Expr, c: Coord) -> Expr {
    derive(e, &|a| match a {
        Atom::Coord(k) if *k == c => Expr::one(),
        Atom::Jet(j) => Expr::jet(j.bump(c)),
        Atom::Ansatz { .. } => {
            bump_ansatz(a, c.index())
                + Expr::jet(Jet::new("u", [0, 0, 0]).bump(c)) * bump_ansatz(a, ANSATZ_U)
        }
        _ => Expr::zero(),
    })
}

/// Repeated total derivative along a multi-index of counts (t, x, y).
pub fn diff_multi(e: &Expr, orders: [u8; 3]) -> Expr {
    let mut out = e.clone();
    for c in Coord::ALL {
        for _ in 0..orders[c.index()] {
            out = diff(&out, c);
        }
    }
    out
}

/// Partial derivative treating coordinates and dependent-field jets as
/// independent variables. Jets of non-dependent fields (given functions of
/// the coordinates) differentiate along coordinates.
pub fn partial(e: &Expr, v: &Var) -> Expr {
    derive(e, &|a| match (a, v) {
        (Atom::Coord(k), Var::Coord(c)) if k == c => Expr::one(),
        (Atom::Jet(j), Var::Jet(w)) if j == w => Expr::one(),
        (Atom::Jet(j), Var::Coord(c)) if !j.is_dependent() => Expr::jet(j.bump(*c)),
        (Atom::Ansatz { .. }, Var::Coord(c)) => bump_ansatz(a, c.index()),
        (Atom::Ansatz { .. }, Var::Jet(w)) if w.order() == 0 && &*w.field == "u" => {
            bump_ansatz(a, ANSATZ_U)
        }
        _ => Expr::zero(),
    })
}
