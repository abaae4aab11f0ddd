//! The semilinear wave equation on the sphere-times-line and its
//! restriction to the solution manifold.
//!
//! `u_tt = u_xx + cot(x) u_x + u_yy / sin(x)^2 + f(u)`

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use thiserror::Error;

use crate::symcore::{
    diff_multi, parse, substitute, substitute_with, Atom, Bindings, Expr, FunBinding, Jet,
    Monomial, Name, Rational, SymError,
};

/// Name of the nonlinearity as an opaque function.
pub const SOURCE_FN: &str = "f";
/// Name of the potential, wired so that `F' = f`.
pub const POTENTIAL_FN: &str = "F";

#[derive(Debug, Error)]
pub enum FSpecError {
    #[error("invalid source specification `{0}`: {1}")]
    Invalid(String, SymError),
    #[error("source `{0}` depends on something other than u and constants")]
    NotAFunctionOfU(String),
    #[error("no closed-form potential for `{0}`; only polynomials in u are integrated")]
    NoPotential(String),
}

/// Choice of the nonlinearity `f(u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FSpec {
    /// Opaque `f(u)` with potential `F(u)`.
    Arbitrary,
    /// `f = c u`.
    Linear(Expr),
    /// `f = k`.
    Constant(Expr),
    /// Any expression in `u`.
    Explicit(Expr),
}

fn u() -> Expr {
    Expr::field("u")
}

impl FSpec {
    pub fn linear_symbolic() -> FSpec {
        FSpec::Linear(Expr::param("c"))
    }

    pub fn zero() -> FSpec {
        FSpec::Constant(Expr::zero())
    }

    /// `f` applied to `arg`.
    pub fn source_at(&self, arg: &Expr) -> Expr {
        match self {
            FSpec::Arbitrary => Expr::fun(SOURCE_FN, 0, arg),
            FSpec::Linear(c) => c * arg,
            FSpec::Constant(k) => k.clone(),
            FSpec::Explicit(e) => substitute(
                e,
                &Bindings::new().bind_jet(Jet::new("u", [0, 0, 0]), arg.clone()),
            )
            .expect("polynomial substitution"),
        }
    }

    pub fn source(&self) -> Expr {
        self.source_at(&u())
    }

    /// A potential `F` with `F' = f`, as an expression in `u`.
    pub fn potential(&self) -> Result<Expr, FSpecError> {
        match self {
            FSpec::Arbitrary => Ok(Expr::fun(POTENTIAL_FN, 0, &u())),
            FSpec::Linear(c) => Ok(c * &u().pow(2) * Expr::frac(1, 2)),
            FSpec::Constant(k) => Ok(k * &u()),
            FSpec::Explicit(e) => {
                antiderivative_in_u(e).ok_or_else(|| FSpecError::NoPotential(e.to_string()))
            }
        }
    }

    /// Replace every derivative of the opaque potential by the matching
    /// derivative of the source.
    pub fn wire_potential(&self, e: &Expr) -> Expr {
        let b = Bindings::new().bind_function(
            POTENTIAL_FN,
            FunBinding::Rename {
                to: Name::from(SOURCE_FN),
                shift: -1,
            },
        );
        substitute(e, &b).expect("renaming cannot divide by zero")
    }

    /// Coefficient `c` when the source is linear in `u`.
    pub fn linear_coefficient(&self) -> Option<Expr> {
        match self {
            FSpec::Linear(c) => Some(c.clone()),
            FSpec::Constant(k) if k.is_zero() => Some(Expr::zero()),
            FSpec::Explicit(e) => {
                let c = crate::symcore::partial(e, &crate::symcore::Var::u());
                let rest = e - &(&c * &u());
                (c.is_constant()
                    && !c.contains_atom(&|a| matches!(a, Atom::Jet(_)))
                    && rest.is_zero())
                .then_some(c)
            }
            _ => None,
        }
    }
}

/// Termwise antiderivative of a polynomial in `u` whose coefficients are
/// free of `u`.
pub fn antiderivative_in_u(e: &Expr) -> Option<Expr> {
    let u_atom = Atom::Jet(Jet::new("u", [0, 0, 0]));
    let mut out = Expr::zero();
    for (m, c) in e.terms() {
        let k = m.exponent(&u_atom);
        if k < 0 {
            return None;
        }
        let rest =
            Monomial::from_factors(m.factors().iter().filter(|(b, _)| *b != u_atom).cloned());
        let rest = Expr::from_monomial(rest, Rational::one());
        if rest.leaf_atoms().iter().any(mentions_u) {
            return None;
        }
        let q = c / Rational::from_integer((k + 1).into());
        out = out + rest.scale(&q) * u().pow(k + 1);
    }
    Some(out)
}

fn mentions_u(a: &Atom) -> bool {
    match a {
        Atom::Jet(j) => j.is_dependent(),
        Atom::Ansatz { .. } => true,
        _ => false,
    }
}

impl fmt::Display for FSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FSpec::Arbitrary => f.write_str("arbitrary"),
            FSpec::Linear(c) => write!(f, "linear:{c}"),
            FSpec::Constant(k) => write!(f, "constant:{k}"),
            FSpec::Explicit(e) => write!(f, "{e}"),
        }
    }
}

/// `arbitrary`, `linear[:C]`, `constant[:K]`, `zero`, or an expression in `u`.
impl FromStr for FSpec {
    type Err = FSpecError;

    fn from_str(s: &str) -> Result<FSpec, FSpecError> {
        let s = s.trim();
        let expr = |t: &str| parse(t).map_err(|e| FSpecError::Invalid(s.to_string(), e));
        let constant = |e: Expr| {
            if e.leaf_atoms().iter().any(mentions_u) {
                Err(FSpecError::NotAFunctionOfU(s.to_string()))
            } else {
                Ok(e)
            }
        };
        let (head, tail) = match s.split_once(':') {
            Some((h, t)) => (h.trim(), Some(t.trim())),
            None => (s, None),
        };
        match (head, tail) {
            ("arbitrary", None) | ("f", None) => Ok(FSpec::Arbitrary),
            ("zero", None) => Ok(FSpec::zero()),
            ("linear", None) => Ok(FSpec::linear_symbolic()),
            ("linear", Some(t)) => Ok(FSpec::Linear(constant(expr(t)?)?)),
            ("constant", None) => Ok(FSpec::Constant(Expr::param("k"))),
            ("constant", Some(t)) => Ok(FSpec::Constant(constant(expr(t)?)?)),
            _ => {
                let e = expr(s)?;
                let bad = e.all_atoms().into_iter().any(|a| match a {
                    Atom::Jet(j) => !(j.order() == 0 && &*j.field == "u"),
                    Atom::Coord(_) | Atom::Ansatz { .. } | Atom::Fun { .. } => true,
                    _ => false,
                });
                if bad {
                    Err(FSpecError::NotAFunctionOfU(s.to_string()))
                } else {
                    Ok(FSpec::Explicit(e))
                }
            }
        }
    }
}

/// `φ_tt − φ_xx − cot(x) φ_x − φ_yy / sin(x)^2` for the named field.
pub fn wave_operator(field: &str) -> Expr {
    let x = Expr::x();
    Expr::jet_of(field, "tt")
        - Expr::jet_of(field, "xx")
        - Expr::cot(&x) * Expr::jet_of(field, "x")
        - Expr::sin(&x).pow(-2) * Expr::jet_of(field, "yy")
}

/// The equation residual; it vanishes exactly on solutions.
pub fn residual(spec: &FSpec) -> Expr {
    wave_operator("u") - spec.source()
}

/// Value of `u_tt` on the solution manifold.
pub fn time_rhs(spec: &FSpec) -> Expr {
    Expr::jet_of("u", "tt") - residual(spec)
}

/// Restriction to the solution manifold by eliminating second and higher
/// time derivatives, for `u` and optionally for a gauge function obeying the
/// linearized equation.
#[derive(Clone, Debug)]
pub struct OnShell {
    rules: Vec<(Name, Expr)>,
}

impl OnShell {
    pub fn new(spec: &FSpec) -> OnShell {
        OnShell {
            rules: vec![(Name::from("u"), time_rhs(spec))],
        }
    }

    /// No reduction at all.
    pub fn off_shell() -> OnShell {
        OnShell { rules: Vec::new() }
    }

    /// Also eliminate `φ_tt` for a field satisfying `φ_tt = wave part + c φ`.
    pub fn with_linear_field(mut self, field: &str, c: &Expr) -> OnShell {
        let rhs = Expr::jet_of(field, "tt") - wave_operator(field) + c * &Expr::field(field);
        self.rules.push((Name::from(field), rhs));
        self
    }

    pub fn reduce(&self, e: &Expr) -> Expr {
        if self.rules.is_empty() {
            return e.clone();
        }
        substitute_with(e, &mut |a, _| match a {
            Atom::Jet(j) if j.orders[0] >= 2 => {
                let (_, rhs) = self.rules.iter().find(|(f, _)| *f == j.field)?;
                let rest = [j.orders[0] - 2, j.orders[1], j.orders[2]];
                Some(self.reduce(&diff_multi(rhs, rest)))
            }
            _ => None,
        })
        .expect("eliminating time derivatives introduces no division")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{diff, Coord};

    #[test]
    fn parses_source_specs() {
        assert_eq!("arbitrary".parse::<FSpec>().unwrap(), FSpec::Arbitrary);
        assert_eq!(
            "linear".parse::<FSpec>().unwrap(),
            FSpec::Linear(Expr::param("c"))
        );
        assert_eq!(
            "linear:3/2".parse::<FSpec>().unwrap(),
            FSpec::Linear(Expr::frac(3, 2))
        );
        assert_eq!(
            "constant".parse::<FSpec>().unwrap(),
            FSpec::Constant(Expr::param("k"))
        );
        assert_eq!(
            "u^2".parse::<FSpec>().unwrap(),
            FSpec::Explicit(Expr::field("u").pow(2))
        );
        assert!(matches!(
            "x*u".parse::<FSpec>(),
            Err(FSpecError::NotAFunctionOfU(_))
        ));
        assert!(matches!(
            "linear:u".parse::<FSpec>(),
            Err(FSpecError::NotAFunctionOfU(_))
        ));
        assert!(matches!(
            "u +".parse::<FSpec>(),
            Err(FSpecError::Invalid(..))
        ));
    }

    #[test]
    fn potentials_differentiate_back_to_source() {
        for spec in ["linear", "constant", "u^3 - 2*u", "zero", "linear:0"] {
            let spec: FSpec = spec.parse().unwrap();
            let big_f = spec.potential().unwrap();
            let d = crate::symcore::partial(&big_f, &crate::symcore::Var::u());
            assert_eq!(d, spec.source(), "{spec}");
        }
        assert!(FSpec::Explicit(Expr::sin(&Expr::field("u")))
            .potential()
            .is_err());
    }

    #[test]
    fn opaque_potential_is_wired() {
        let spec = FSpec::Arbitrary;
        let d = diff(&spec.potential().unwrap(), Coord::X);
        assert_eq!(
            spec.wire_potential(&d),
            Expr::fun("f", 0, &Expr::field("u")) * Expr::jet_of("u", "x")
        );
    }

    #[test]
    fn linear_coefficient_detection() {
        assert_eq!(
            "2*u".parse::<FSpec>().unwrap().linear_coefficient(),
            Some(Expr::int(2))
        );
        assert_eq!("u^2".parse::<FSpec>().unwrap().linear_coefficient(), None);
        assert_eq!(FSpec::Arbitrary.linear_coefficient(), None);
    }

    #[test]
    fn elimination_of_time_derivatives() {
        let spec = FSpec::Arbitrary;
        let on = OnShell::new(&spec);
        let r = on.reduce(&residual(&spec));
        assert!(r.is_zero());
        let uttt = on.reduce(&Expr::jet_of("u", "ttt"));
        let expected = diff(&time_rhs(&spec), Coord::T);
        assert_eq!(uttt, expected);
        let utttt = on.reduce(&Expr::jet_of("u", "tttt"));
        assert!(!utttt.contains_atom(&|a| matches!(a, Atom::Jet(j) if j.orders[0] >= 2)));
    }

    #[test]
    fn gauge_field_elimination() {
        let c = Expr::param("c");
        let on = OnShell::new(&FSpec::Linear(c.clone())).with_linear_field("b", &c);
        let r = on.reduce(&(wave_operator("b") - &c * &Expr::field("b")));
        assert!(r.is_zero());
    }
}
