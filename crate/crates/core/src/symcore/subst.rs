use std::collections::BTreeMap;

use super::atom::{Atom, Coord, Jet, Name};
use super::diff::{partial, Var};
use super::error::SymError;
use super::expr::{Expr, Rational, TermSink};
use num_traits::One;

/// Replacement rule for an opaque unary function.
#[derive(Clone, Debug)]
pub enum FunBinding {
    /// `F(a) := body[u := a]`; derivatives are taken with respect to `u`
    /// before the argument is plugged in.
    Lambda(Expr),
    /// `F^(k)(a) := G^(k + shift)(a)` whenever `k + shift >= 0`; lower orders
    /// are left alone. `F' = f` is `Rename { to: "f", shift: -1 }`.
    Rename { to: Name, shift: i32 },
}

/// Simultaneous substitution map.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    atoms: BTreeMap<Atom, Expr>,
    functions: BTreeMap<Name, FunBinding>,
    ansatz: BTreeMap<Name, Expr>,
}

impl Bindings {
    pub fn new() -> Bindings {
        Bindings::default()
    }

    pub fn bind(mut self, atom: Atom, value: Expr) -> Bindings {
        self.atoms.insert(atom, value);
        self
    }

    pub fn bind_coord(self, c: Coord, value: Expr) -> Bindings {
        self.bind(Atom::Coord(c), value)
    }

    pub fn bind_jet(self, j: Jet, value: Expr) -> Bindings {
        self.bind(Atom::Jet(j), value)
    }

    pub fn bind_param(self, name: &str, value: Expr) -> Bindings {
        self.bind(Atom::Param(Name::from(name)), value)
    }

    pub fn bind_function(mut self, name: &str, rule: FunBinding) -> Bindings {
        self.functions.insert(Name::from(name), rule);
        self
    }

    /// Bind an ansatz function of (t, x, y, u); its derivative atoms map to
    /// the corresponding partials of `value`.
    pub fn bind_ansatz(mut self, name: &str, value: Expr) -> Bindings {
        self.ansatz.insert(Name::from(name), value);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.functions.is_empty() && self.ansatz.is_empty()
    }

    fn lookup(&self, a: &Atom, rebuilt: &Atom) -> Option<Expr> {
        if let Some(v) = self.atoms.get(a) {
            return Some(v.clone());
        }
        match rebuilt {
            Atom::Fun { name, order, arg } => match self.functions.get(name)? {
                FunBinding::Lambda(body) => {
                    let u = Var::u();
                    let mut d = body.clone();
                    for _ in 0..*order {
                        d = partial(&d, &u);
                    }
                    let at = Bindings::new().bind_jet(Jet::new("u", [0, 0, 0]), arg.clone());
                    Some(substitute(&d, &at).expect("lambda substitution is a polynomial map"))
                }
                FunBinding::Rename { to, shift } => {
                    let k = *order as i64 + *shift as i64;
                    (k >= 0).then(|| Expr::fun(to, k as u32, arg))
                }
            },
            Atom::Ansatz { name, orders } => {
                let mut d = self.ansatz.get(name)?.clone();
                for c in Coord::ALL {
                    for _ in 0..orders[c.index()] {
                        d = partial(&d, &Var::Coord(c));
                    }
                }
                for _ in 0..orders[3] {
                    d = partial(&d, &Var::u());
                }
                Some(d)
            }
            _ => None,
        }
    }
}

/// Simultaneous substitution driven by a callback on atoms. Composite atoms
/// the callback declines are rebuilt from their substituted arguments and
/// re-canonicalized. Fails only on a symbolic division by zero.
pub fn substitute_with(
    e: &Expr,
    f: &mut dyn FnMut(&Atom, &Atom) -> Option<Expr>,
) -> Result<Expr, SymError> {
    let mut memo: BTreeMap<Atom, Expr> = BTreeMap::new();
    subst_inner(e, f, &mut memo)
}

fn subst_inner(
    e: &Expr,
    f: &mut dyn FnMut(&Atom, &Atom) -> Option<Expr>,
    memo: &mut BTreeMap<Atom, Expr>,
) -> Result<Expr, SymError> {
    let mut sink = TermSink::default();
    for (m, c) in e.terms() {
        let mut term = Expr::rational(c.clone());
        for (a, k) in m.factors() {
            let value = match memo.get(a) {
                Some(v) => v.clone(),
                None => {
                    let v = subst_atom(a, f, memo)?;
                    memo.insert(a.clone(), v.clone());
                    v
                }
            };
            if *k < 0 && value.is_zero() {
                return Err(SymError::DivisionByZero);
            }
            term = term * value.pow(*k);
            if term.is_zero() {
                break;
            }
        }
        sink.add_expr(&term, &Rational::one());
    }
    Ok(sink.finish())
}

fn subst_atom(
    a: &Atom,
    f: &mut dyn FnMut(&Atom, &Atom) -> Option<Expr>,
    memo: &mut BTreeMap<Atom, Expr>,
) -> Result<Expr, SymError> {
    let rebuilt = match a {
        Atom::Fun { name, order, arg } => Atom::Fun {
            name: name.clone(),
            order: *order,
            arg: subst_inner(arg, f, memo)?,
        },
        _ => a.clone(),
    };
    if let Some(v) = f(a, &rebuilt) {
        return Ok(v);
    }
    Ok(match a {
        Atom::Fun { .. } => Expr::atom(rebuilt),
        Atom::Sin(arg) => Expr::sin(&subst_inner(arg, f, memo)?),
        Atom::Cos(arg) => Expr::cos(&subst_inner(arg, f, memo)?),
        Atom::Ln(arg) => Expr::ln(&subst_inner(arg, f, memo)?),
        Atom::Recip(arg) => subst_inner(arg, f, memo)?
            .try_recip()
            .ok_or(SymError::DivisionByZero)?,
        _ => Expr::atom(a.clone()),
    })
}

/// Simultaneous replacement followed by canonicalization.
pub fn substitute(e: &Expr, b: &Bindings) -> Result<Expr, SymError> {
    if b.is_empty() {
        return Ok(e.clone());
    }
    substitute_with(e, &mut |a, rebuilt| b.lookup(a, rebuilt))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_is_simultaneous() {
        let e = Expr::x() + Expr::y();
        let b = Bindings::new()
            .bind_coord(Coord::X, Expr::y())
            .bind_coord(Coord::Y, Expr::x());
        assert_eq!(substitute(&e, &b).unwrap(), e);
        let swap = Expr::x() - Expr::y();
        assert_eq!(substitute(&swap, &b).unwrap(), -swap);
    }

    #[test]
    fn potential_wiring_renames_derivatives() {
        let u = Expr::field("u");
        let e = Expr::fun("F", 1, &u) + Expr::fun("F", 2, &u) + Expr::fun("F", 0, &u);
        let b = Bindings::new().bind_function(
            "F",
            FunBinding::Rename {
                to: "f".into(),
                shift: -1,
            },
        );
        let out = substitute(&e, &b).unwrap();
        assert_eq!(
            out,
            Expr::fun("f", 0, &u) + Expr::fun("f", 1, &u) + Expr::fun("F", 0, &u)
        );
    }

    #[test]
    fn lambda_binding_differentiates_body() {
        let u = Expr::field("u");
        let c = Expr::param("c");
        let body = &c * u.pow(2) * Expr::frac(1, 2);
        let b = Bindings::new().bind_function("F", FunBinding::Lambda(body));
        let e = Expr::fun("F", 1, &u) + Expr::fun("F", 0, &u);
        let out = substitute(&e, &b).unwrap();
        assert_eq!(out, &c * &u + &c * u.pow(2) * Expr::frac(1, 2));
    }

    #[test]
    fn ansatz_binding_maps_derivatives() {
        let e = Expr::ansatz("xi1", [0, 0, 1, 0]);
        let b = Bindings::new().bind_ansatz("xi1", Expr::sin(&Expr::y()));
        assert_eq!(substitute(&e, &b).unwrap(), Expr::cos(&Expr::y()));
    }

    #[test]
    fn division_by_zero_is_reported() {
        let e = Expr::x().recip();
        let b = Bindings::new().bind_coord(Coord::X, Expr::zero());
        assert!(matches!(substitute(&e, &b), Err(SymError::DivisionByZero)));
    }
}
