//! Infix expression grammar.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := ('-' | '+') unary | power
//! power    := primary ('^' exponent)?
//! exponent := ('-' | '+')? (number | '(' expr ')')      integer-valued
//! primary  := number | ident | ident '(' args ')' | '(' expr ')'
//! ```
//!
//! Identifiers: `t`, `x`, `y` are coordinates; a declared field with an
//! optional derivative suffix (`u`, `u_tx`, `b_t`) is a jet symbol; declared
//! parameters are constants; `sin cos tan cot sec csc ln log` are built in;
//! declared opaque functions take one argument and primes for derivatives
//! (`f(u)`, `F''(u)`); declared ansatz functions are written with the full
//! argument list and an optional suffix over t, x, y, u (`xi1_tu(t,x,y,u)`).
//! Numbers are exact: `0.25` is the rational 1/4.

use num_bigint::BigInt;

use super::atom::{Atom, Coord, Jet, Name};
use super::error::SymError;
use super::expr::{Expr, Rational};

/// Identifier environment for the parser.
#[derive(Clone, Debug)]
pub struct ParseContext {
    pub fields: Vec<String>,
    pub params: Vec<String>,
    pub functions: Vec<String>,
    pub ansatz: Vec<String>,
}

impl Default for ParseContext {
    fn default() -> Self {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect();
        ParseContext {
            fields: s(&["u", "v", "b"]),
            params: s(&["a", "c", "k", "w", "alpha", "beta", "omega"]),
            functions: s(&["f", "F"]),
            ansatz: s(&["xi0", "xi1", "xi2", "eta"]),
        }
    }
}

impl ParseContext {
    pub fn with_param(mut self, name: &str) -> Self {
        if !self.params.iter().any(|p| p == name) {
            self.params.push(name.to_string());
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, SymError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        if ch.is_ascii_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit()
            || (ch == '.' && bytes.get(i + 1).is_some_and(|b| b.is_ascii_digit()))
        {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            let text = &src[start..i];
            out.push((Tok::Num(parse_decimal(text, start)?), start));
        } else if ch.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            while i < bytes.len() && bytes[i] == b'\'' {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*/^(),".contains(ch) {
            out.push((Tok::Op(ch), i));
            i += 1;
        } else {
            return Err(SymError::Syntax {
                offset: i,
                message: format!("unexpected character `{ch}`"),
            });
        }
    }
    Ok(out)
}

fn parse_decimal(text: &str, offset: usize) -> Result<Rational, SymError> {
    let bad = || SymError::Syntax {
        offset,
        message: format!("malformed number `{text}`"),
    };
    let (int, frac) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if frac.contains('.') {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = if digits.is_empty() {
        return Err(bad());
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let d = BigInt::from(10u32).pow(frac.len() as u32);
    Ok(Rational::new(n, d))
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    ctx: &'a ParseContext,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SymError> {
        Err(SymError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<(), SymError> {
        if self.eat(op) {
            Ok(())
        } else {
            self.err(format!("expected `{op}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr, SymError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SymError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.peek() == Some(&Tok::Op('/')) {
                let at = self.offset();
                self.pos += 1;
                let rhs = self.unary()?;
                let inv = rhs.try_recip().ok_or(SymError::Syntax {
                    offset: at,
                    message: "division by zero".into(),
                })?;
                acc = acc * inv;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SymError> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, SymError> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.offset();
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let exp = match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                q
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                match e.as_rational() {
                    Some(q) => q,
                    None => {
                        return Err(SymError::Syntax {
                            offset: at,
                            message: "exponent must be constant".into(),
                        })
                    }
                }
            }
            _ => return self.err("expected exponent"),
        };
        if !exp.is_integer() {
            return Err(SymError::Syntax {
                offset: at,
                message: "exponent must be an integer".into(),
            });
        }
        let n: i32 = exp.to_integer().try_into().map_err(|_| SymError::Syntax {
            offset: at,
            message: "exponent out of range".into(),
        })?;
        let n = if negative { -n } else { n };
        if n < 0 && base.is_zero() {
            return Err(SymError::Syntax {
                offset: at,
                message: "division by zero".into(),
            });
        }
        Ok(base.pow(n))
    }

    fn primary(&mut self) -> Result<Expr, SymError> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(Expr::rational(q))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let mut args = vec![self.expr()?];
                    while self.eat(',') {
                        args.push(self.expr()?);
                    }
                    self.expect(')')?;
                    self.call(&name, args, offset)
                } else {
                    self.symbol(&name, offset)
                }
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }

    fn symbol(&self, name: &str, offset: usize) -> Result<Expr, SymError> {
        if let Some(c) = match name {
            "t" => Some(Coord::T),
            "x" => Some(Coord::X),
            "y" => Some(Coord::Y),
            _ => None,
        } {
            return Ok(Expr::coord(c));
        }
        if self.ctx.params.iter().any(|p| p == name) {
            return Ok(Expr::param(name));
        }
        let (base, suffix) = name.split_once('_').unwrap_or((name, ""));
        if self.ctx.fields.iter().any(|f| f == base) {
            if let Some(j) = Jet::from_suffix(base, suffix) {
                return Ok(Expr::jet(j));
            }
        }
        Err(SymError::UnknownIdentifier {
            name: name.to_string(),
            offset,
        })
    }

    fn call(&self, name: &str, mut args: Vec<Expr>, offset: usize) -> Result<Expr, SymError> {
        let unary = |args: &mut Vec<Expr>| -> Result<Expr, SymError> {
            if args.len() != 1 {
                return Err(SymError::Syntax {
                    offset,
                    message: format!("`{name}` takes one argument"),
                });
            }
            Ok(args.pop().unwrap())
        };
        match name {
            "sin" => return Ok(Expr::sin(&unary(&mut args)?)),
            "cos" => return Ok(Expr::cos(&unary(&mut args)?)),
            "tan" | "cot" | "sec" | "csc" => {
                let a = unary(&mut args)?;
                let (s, c) = (Expr::sin(&a), Expr::cos(&a));
                let (num, den) = match name {
                    "tan" => (s, c),
                    "cot" => (c, s),
                    "sec" => (Expr::one(), c),
                    _ => (Expr::one(), s),
                };
                let inv = den.try_recip().ok_or(SymError::Syntax {
                    offset,
                    message: format!("`{name}` is singular here"),
                })?;
                return Ok(num * inv);
            }
            "ln" | "log" => {
                let a = unary(&mut args)?;
                if a.is_zero() {
                    return Err(SymError::Syntax {
                        offset,
                        message: "ln(0)".into(),
                    });
                }
                return Ok(Expr::ln(&a));
            }
            _ => {}
        }
        let base = name.trim_end_matches('\'');
        let order = (name.len() - base.len()) as u32;
        if self.ctx.functions.iter().any(|f| f == base) {
            return Ok(Expr::fun(base, order, &unary(&mut args)?));
        }
        let (abase, suffix) = base.split_once('_').unwrap_or((base, ""));
        if order == 0 && self.ctx.ansatz.iter().any(|f| f == abase) {
            let expected = [Expr::t(), Expr::x(), Expr::y(), Expr::field("u")];
            if args.len() != 4 || args.iter().zip(expected.iter()).any(|(a, b)| a != b) {
                return Err(SymError::Syntax {
                    offset,
                    message: format!("`{abase}` must be applied to (t,x,y,u)"),
                });
            }
            let mut orders = [0u8; 4];
            for ch in suffix.chars() {
                let slot = match ch {
                    't' => 0,
                    'x' => 1,
                    'y' => 2,
                    'u' => 3,
                    _ => {
                        return Err(SymError::UnknownIdentifier {
                            name: name.to_string(),
                            offset,
                        })
                    }
                };
                orders[slot] += 1;
            }
            return Ok(Expr::atom(Atom::Ansatz {
                name: Name::from(abase),
                orders,
            }));
        }
        Err(SymError::UnknownIdentifier {
            name: name.to_string(),
            offset,
        })
    }
}

/// Parse with the default identifier environment.
pub fn parse(text: &str) -> Result<Expr, SymError> {
    parse_with(text, &ParseContext::default())
}

pub fn parse_with(text: &str, ctx: &ParseContext) -> Result<Expr, SymError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        ctx,
    };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

impl std::str::FromStr for Expr {
    type Err = SymError;
    fn from_str(s: &str) -> Result<Expr, SymError> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cot_is_rewritten() {
        let e = parse("cot(x)").unwrap();
        assert_eq!(e, Expr::cos(&Expr::x()) * Expr::sin(&Expr::x()).pow(-1));
        assert_eq!(e.to_string(), "sin(x)^-1*cos(x)");
    }

    #[test]
    fn homogeneous_wave_operator_has_four_terms() {
        let e = parse("u_tt - u_xx - cot(x)*u_x - u_yy/sin(x)^2").unwrap();
        assert_eq!(e.num_terms(), 4);
    }

    #[test]
    fn exact_rationals() {
        assert_eq!(parse("2/4").unwrap(), Expr::frac(1, 2));
        assert_eq!(parse("0.25").unwrap(), Expr::frac(1, 4));
    }

    #[test]
    fn syntax_error_has_offset() {
        match parse("x + * y") {
            Err(SymError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier() {
        match parse("x + zeta") {
            Err(SymError::UnknownIdentifier { name, offset }) => {
                assert_eq!(name, "zeta");
                assert_eq!(offset, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse("q(x)"),
            Err(SymError::UnknownIdentifier { .. })
        ));
    }

    #[test]
    fn primes_and_ansatz() {
        let e = parse("F''(u) + xi1_tu(t,x,y,u)").unwrap();
        assert_eq!(
            e,
            Expr::fun("F", 2, &Expr::field("u")) + Expr::ansatz("xi1", [1, 0, 0, 1])
        );
    }

    #[test]
    fn non_integer_exponent_rejected() {
        assert!(parse("x^(1/2)").is_err());
    }
}
