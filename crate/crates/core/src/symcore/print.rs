//! Plain infix and LaTeX renderings. The infix form re-parses to the same
//! canonical expression.

use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::atom::Atom;
use super::expr::{Expr, Monomial, Rational};

fn write_atom(f: &mut dyn Write, a: &Atom) -> fmt::Result {
    match a {
        Atom::Coord(c) => write!(f, "{c}"),
        Atom::Param(p) => write!(f, "{p}"),
        Atom::Jet(j) => write!(f, "{j}"),
        Atom::Ansatz { name, orders } => {
            let s = Atom::ansatz_suffix(orders);
            if s.is_empty() {
                write!(f, "{name}(t,x,y,u)")
            } else {
                write!(f, "{name}_{s}(t,x,y,u)")
            }
        }
        Atom::Fun { name, order, arg } => write!(f, "{name}{}({arg})", "'".repeat(*order as usize)),
        Atom::Sin(arg) => write!(f, "sin({arg})"),
        Atom::Cos(arg) => write!(f, "cos({arg})"),
        Atom::Ln(arg) => write!(f, "ln({arg})"),
        Atom::Recip(arg) => write!(f, "({arg})"),
    }
}

fn write_factor(f: &mut dyn Write, a: &Atom, k: i32) -> fmt::Result {
    write_atom(f, a)?;
    let k = if matches!(a, Atom::Recip(_)) { -k } else { k };
    if k != 1 {
        write!(f, "^{k}")?;
    }
    Ok(())
}

fn write_monomial(f: &mut dyn Write, m: &Monomial) -> fmt::Result {
    for (i, (a, k)) in m.factors().iter().enumerate() {
        if i > 0 {
            f.write_char('*')?;
        }
        write_factor(f, a, *k)?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if m.is_one() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

/// Serialized as its infix rendering.
impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

fn latex_atom(a: &Atom) -> String {
    match a {
        Atom::Coord(c) => c.name().to_string(),
        Atom::Param(p) => match &**p {
            "alpha" | "beta" | "omega" => format!("\\{p}"),
            other => other.to_string(),
        },
        Atom::Jet(j) => {
            if j.order() == 0 {
                j.field.to_string()
            } else {
                format!("{}_{{{}}}", j.field, j.suffix())
            }
        }
        Atom::Ansatz { name, orders } => {
            let s = Atom::ansatz_suffix(orders);
            let base = match &**name {
                "xi0" => "\\xi^{0}".to_string(),
                "xi1" => "\\xi^{1}".to_string(),
                "xi2" => "\\xi^{2}".to_string(),
                "eta" => "\\eta".to_string(),
                other => other.to_string(),
            };
            if s.is_empty() {
                base
            } else {
                format!("{base}_{{{s}}}")
            }
        }
        Atom::Fun { name, order, arg } => format!(
            "{name}{}\\left({}\\right)",
            "'".repeat(*order as usize),
            arg.to_latex()
        ),
        Atom::Sin(arg) => format!("\\sin\\left({}\\right)", arg.to_latex()),
        Atom::Cos(arg) => format!("\\cos\\left({}\\right)", arg.to_latex()),
        Atom::Ln(arg) => format!("\\ln\\left({}\\right)", arg.to_latex()),
        Atom::Recip(arg) => format!("\\left({}\\right)", arg.to_latex()),
    }
}

fn latex_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", q.numer(), q.denom())
    }
}

impl Expr {
    /// LaTeX rendering; trigonometric powers are written `\sin(x)^{-1}`.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            out.push_str(match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            let mag = c.abs();
            if m.is_one() {
                out.push_str(&latex_rational(&mag));
                continue;
            }
            if !mag.is_one() {
                out.push_str(&latex_rational(&mag));
                out.push_str(" \\, ");
            }
            let parts: Vec<String> = m
                .factors()
                .iter()
                .map(|(a, k)| {
                    let k = if matches!(a, Atom::Recip(_)) { -k } else { *k };
                    let base = latex_atom(a);
                    if k == 1 {
                        base
                    } else {
                        format!("{base}^{{{k}}}")
                    }
                })
                .collect();
            out.push_str(&parts.join(" \\, "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse;

    #[test]
    fn prints_and_reparses() {
        for src in [
            "u_tt - u_xx - cot(x)*u_x - u_yy/sin(x)^2",
            "3/2*x^2 - y/(1 + x^2)",
            "sin(x/2) + f''(u + 1/2*k*t^2)",
            "-alpha*xi1_tu(t,x,y,u)",
            "ln(x)*cos(2*y)",
        ] {
            let e = parse(src).unwrap();
            let back = parse(&e.to_string()).unwrap();
            assert_eq!(back, e, "{src} -> {e}");
        }
    }

    #[test]
    fn latex_rendering() {
        let e = parse("-cot(x)*u_x").unwrap();
        assert_eq!(
            e.to_latex(),
            "-u_{x} \\, \\sin\\left(x\\right)^{-1} \\, \\cos\\left(x\\right)"
        );
        assert_eq!(parse("3/2*t").unwrap().to_latex(), "\\frac{3}{2} \\, t");
    }
}
