//! Canonical symbolic expressions.
//!
//! An [`Expr`] is stored directly in canonical form: a finite sum of
//! monomials with exact rational coefficients. Monomials are sorted products
//! of [`Atom`]s raised to nonzero integer powers. Two reductions are applied
//! on every product so that the representation stays canonical:
//!
//! * `cos(a)^n` with `n >= 2` is rewritten through `cos(a)^2 = 1 - sin(a)^2`,
//!   so trigonometric polynomials live in the basis `sin(a)^k cos(a)^{0,1}`.
//! * a negative power of a [`Atom::Recip`] is expanded back into a positive
//!   power of the underlying expression.
//!
//! Trigonometric arguments are split by the addition and multiple-angle
//! formulas down to atoms `sin(m/d)`, `cos(m/d)` of a single monomial `m`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::atom::{Atom, Coord, Jet, Name};

pub type Rational = BigRational;

/// Build an exact rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Sorted product of atoms with nonzero integer exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Atom, i32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, i32)] {
        &self.0
    }

    pub fn exponent(&self, atom: &Atom) -> i32 {
        self.0
            .binary_search_by(|(a, _)| a.cmp(atom))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    /// Build from arbitrary (possibly repeated, unsorted) factors.
    pub fn from_factors(factors: impl IntoIterator<Item = (Atom, i32)>) -> Monomial {
        let mut map: BTreeMap<Atom, i32> = BTreeMap::new();
        for (a, e) in factors {
            *map.entry(a).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|(_, e)| *e != 0).collect())
    }

    fn mul_raw(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// The same monomial with the exponent of factor `idx` replaced.
    pub(crate) fn with_exponent(&self, idx: usize, e: i32) -> Monomial {
        let mut v = self.0.clone();
        if e == 0 {
            v.remove(idx);
        } else {
            v[idx].1 = e;
        }
        Monomial(v)
    }

    pub(crate) fn without(&self, idx: usize) -> Monomial {
        self.with_exponent(idx, 0)
    }

    fn needs_reduction(&self) -> bool {
        self.0.iter().any(|(a, e)| match a {
            Atom::Cos(_) => *e >= 2,
            Atom::Recip(_) => *e < 0,
            _ => false,
        })
    }

    /// Apply the canonical reductions; returns `None` when already canonical.
    fn reduce(&self) -> Option<Expr> {
        if !self.needs_reduction() {
            return None;
        }
        let mut plain = Vec::new();
        let mut factor = Expr::one();
        for (a, e) in &self.0 {
            match a {
                Atom::Cos(arg) if *e >= 2 => {
                    let s2 = Expr::atom(Atom::Sin(arg.clone())).pow(2);
                    let pyth = Expr::one() - s2;
                    factor = factor * pyth.pow(e / 2);
                    if e % 2 == 1 {
                        plain.push((a.clone(), 1));
                    }
                }
                Atom::Recip(p) if *e < 0 => {
                    factor = factor * p.pow(-e);
                }
                _ => plain.push((a.clone(), *e)),
            }
        }
        Some(Expr::from_monomial(Monomial(plain), Rational::one()) * factor)
    }
}

/// Immutable canonical expression; cheap to clone and safe to share.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr(Arc<BTreeMap<Monomial, Rational>>);

/// Accumulator for building a sum of already-canonical monomials.
#[derive(Default)]
pub(crate) struct TermSink(BTreeMap<Monomial, Rational>);

impl TermSink {
    pub(crate) fn push(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Push a raw monomial, reducing it first if needed.
    pub(crate) fn push_raw(&mut self, m: Monomial, c: Rational) {
        match m.reduce() {
            None => self.push(m, c),
            Some(e) => {
                for (mm, cc) in e.terms() {
                    self.push(mm.clone(), cc * &c);
                }
            }
        }
    }

    pub(crate) fn add_expr(&mut self, e: &Expr, scale: &Rational) {
        for (m, c) in e.terms() {
            self.push(m.clone(), c * scale);
        }
    }

    pub(crate) fn finish(self) -> Expr {
        Expr(Arc::new(self.0))
    }
}

impl Expr {
    pub fn zero() -> Expr {
        Expr(Arc::new(BTreeMap::new()))
    }

    pub fn one() -> Expr {
        Expr::rational(Rational::one())
    }

    pub fn rational(q: Rational) -> Expr {
        Expr::from_monomial(Monomial::one(), q)
    }

    pub fn int(n: i64) -> Expr {
        Expr::rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::rational(rat(n, d))
    }

    pub fn coord(c: Coord) -> Expr {
        Expr::atom(Atom::Coord(c))
    }

    pub fn t() -> Expr {
        Expr::coord(Coord::T)
    }

    pub fn x() -> Expr {
        Expr::coord(Coord::X)
    }

    pub fn y() -> Expr {
        Expr::coord(Coord::Y)
    }

    pub fn param(name: &str) -> Expr {
        Expr::atom(Atom::Param(Name::from(name)))
    }

    /// Undifferentiated field, e.g. `u`.
    pub fn field(name: &str) -> Expr {
        Expr::jet(Jet::new(name, [0, 0, 0]))
    }

    pub fn jet(j: Jet) -> Expr {
        Expr::atom(Atom::Jet(j))
    }

    /// Jet from a suffix, e.g. `Expr::jet_of("u", "tx")`; panics on a bad
    /// suffix since callers pass literals.
    pub fn jet_of(field: &str, suffix: &str) -> Expr {
        Expr::jet(Jet::from_suffix(field, suffix).expect("derivative suffix uses t, x, y"))
    }

    pub fn ansatz(name: &str, orders: [u8; 4]) -> Expr {
        Expr::atom(Atom::Ansatz {
            name: Name::from(name),
            orders,
        })
    }

    pub fn fun(name: &str, order: u32, arg: &Expr) -> Expr {
        Expr::atom(Atom::Fun {
            name: Name::from(name),
            order,
            arg: arg.clone(),
        })
    }

    /// Wrap a single atom. Composite atoms must already be normalized; use
    /// [`Expr::sin`] and friends to construct those.
    pub fn atom(a: Atom) -> Expr {
        Expr::from_monomial(Monomial(vec![(a, 1)]), Rational::one())
    }

    pub(crate) fn from_monomial(m: Monomial, c: Rational) -> Expr {
        let mut map = BTreeMap::new();
        if !c.is_zero() {
            map.insert(m, c);
        }
        Expr(Arc::new(map))
    }

    /// Like `from_monomial` but accepts a monomial that may need reduction.
    pub(crate) fn from_monomial_reduced(m: Monomial, c: Rational) -> Expr {
        let mut sink = TermSink::default();
        sink.push_raw(m, c);
        sink.finish()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.0.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// Value if the expression is a rational constant.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.0.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.0.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// The single atom if the expression is exactly `atom^1`.
    pub fn as_atom(&self) -> Option<&Atom> {
        if self.0.len() != 1 {
            return None;
        }
        let (m, c) = self.0.iter().next().unwrap();
        match m.factors() {
            [(a, 1)] if c.is_one() => Some(a),
            _ => None,
        }
    }

    pub fn as_single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.0.len() == 1 {
            self.0.iter().next()
        } else {
            None
        }
    }

    pub fn scale(&self, q: &Rational) -> Expr {
        if q.is_zero() {
            return Expr::zero();
        }
        Expr(Arc::new(
            self.0.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        ))
    }

    pub fn pow(&self, n: i32) -> Expr {
        if n < 0 {
            return self.recip().pow(-n);
        }
        let mut result = Expr::one();
        let mut base = self.clone();
        let mut k = n as u32;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn try_recip(&self) -> Option<Expr> {
        match self.0.len() {
            0 => None,
            1 => {
                let (m, c) = self.0.iter().next().unwrap();
                let inv = Monomial(m.0.iter().map(|(a, e)| (a.clone(), -e)).collect());
                let mut sink = TermSink::default();
                sink.push_raw(inv, c.recip());
                Some(sink.finish())
            }
            _ => {
                let lead = self.0.values().next().unwrap().clone();
                let normalized = self.scale(&lead.recip());
                Some(Expr::atom(Atom::Recip(normalized)).scale(&lead.recip()))
            }
        }
    }

    /// Multiplicative inverse. Panics on zero; use [`Expr::try_recip`] when
    /// the operand is not known to be nonzero.
    pub fn recip(&self) -> Expr {
        self.try_recip().expect("reciprocal of zero expression")
    }

    pub fn sin(arg: &Expr) -> Expr {
        sin_cos(arg).0
    }

    pub fn cos(arg: &Expr) -> Expr {
        sin_cos(arg).1
    }

    pub fn tan(arg: &Expr) -> Expr {
        let (s, c) = sin_cos(arg);
        s * c.recip()
    }

    pub fn cot(arg: &Expr) -> Expr {
        let (s, c) = sin_cos(arg);
        c * s.recip()
    }

    pub fn sec(arg: &Expr) -> Expr {
        sin_cos(arg).1.recip()
    }

    pub fn csc(arg: &Expr) -> Expr {
        sin_cos(arg).0.recip()
    }

    pub fn ln(arg: &Expr) -> Expr {
        if arg.is_one() {
            Expr::zero()
        } else {
            Expr::atom(Atom::Ln(arg.clone()))
        }
    }

    /// Every atom occurring anywhere, including inside composite atoms.
    pub fn all_atoms(&self) -> std::collections::BTreeSet<Atom> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut std::collections::BTreeSet<Atom>) {
        for (m, _) in self.terms() {
            for (a, _) in m.factors() {
                if out.insert(a.clone()) {
                    match a {
                        Atom::Fun { arg, .. }
                        | Atom::Sin(arg)
                        | Atom::Cos(arg)
                        | Atom::Ln(arg)
                        | Atom::Recip(arg) => arg.collect_atoms(out),
                        _ => {}
                    }
                }
            }
        }
    }

    /// Leaf atoms (those needing a value for numeric evaluation).
    pub fn leaf_atoms(&self) -> std::collections::BTreeSet<Atom> {
        self.all_atoms().into_iter().filter(Atom::is_leaf).collect()
    }

    /// Base coordinates the expression depends on. Empty means constant in
    /// (t, x, y); parameters and fields are reported separately.
    pub fn free_coords(&self) -> std::collections::BTreeSet<Coord> {
        self.all_atoms()
            .into_iter()
            .filter_map(|a| match a {
                Atom::Coord(c) => Some(c),
                _ => None,
            })
            .collect()
    }

    /// True when no coordinate, field, ansatz or opaque-function atom occurs.
    /// Parameters are allowed.
    pub fn is_constant(&self) -> bool {
        self.all_atoms().iter().all(|a| {
            matches!(
                a,
                Atom::Param(_) | Atom::Sin(_) | Atom::Cos(_) | Atom::Ln(_) | Atom::Recip(_)
            )
        })
    }

    pub fn contains_atom(&self, pred: &dyn Fn(&Atom) -> bool) -> bool {
        self.all_atoms().iter().any(pred)
    }
}

/// `(sin(arg), cos(arg))` in canonical form.
fn sin_cos(arg: &Expr) -> (Expr, Expr) {
    if arg.is_zero() {
        return (Expr::zero(), Expr::one());
    }
    if arg.num_terms() > 1 {
        let mut it = arg.terms();
        let (m0, c0) = it.next().unwrap();
        let first = Expr::from_monomial(m0.clone(), c0.clone());
        let mut sink = TermSink::default();
        for (m, c) in it {
            sink.push(m.clone(), c.clone());
        }
        let rest = sink.finish();
        let (sa, ca) = sin_cos(&first);
        let (sb, cb) = sin_cos(&rest);
        let s = &sa * &cb + &ca * &sb;
        let c = &ca * &cb - &sa * &sb;
        return (s, c);
    }
    let (m, q) = arg.as_single_term().unwrap();
    if q.is_negative() {
        let (s, c) = sin_cos(&arg.scale(&-Rational::one()));
        return (-s, c);
    }
    let p = q.numer().clone();
    let d = q.denom().clone();
    let base = Expr::from_monomial(m.clone(), Rational::new(BigInt::one(), d));
    let s1 = Expr::atom(Atom::Sin(base.clone()));
    let c1 = Expr::atom(Atom::Cos(base));
    if p.is_one() {
        return (s1, c1);
    }
    multiple_angle(&s1, &c1, &p)
}

/// sin(nθ), cos(nθ) from (c + i s)^n.
fn multiple_angle(s: &Expr, c: &Expr, n: &BigInt) -> (Expr, Expr) {
    let n: u32 = n.try_into().expect("multiple-angle factor fits in u32");
    let mut sin_sum = Expr::zero();
    let mut cos_sum = Expr::zero();
    let mut binom = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            binom = binom * BigInt::from(n - k + 1) / BigInt::from(k);
        }
        let term = c.pow((n - k) as i32) * s.pow(k as i32);
        let sign = if (k / 2).is_even() { 1 } else { -1 };
        let coef = Rational::from_integer(&binom * BigInt::from(sign));
        let term = term.scale(&coef);
        if k % 2 == 0 {
            cos_sum = cos_sum + term;
        } else {
            sin_sum = sin_sum + term;
        }
    }
    (sin_sum, cos_sum)
}

impl<'a> Add<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn add(self, rhs: &'a Expr) -> Expr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let mut sink = TermSink(self.0.as_ref().clone());
        sink.add_expr(rhs, &Rational::one());
        sink.finish()
    }
}

impl<'a> Mul<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn mul(self, rhs: &'a Expr) -> Expr {
        if self.is_zero() || rhs.is_zero() {
            return Expr::zero();
        }
        if let Some(q) = self.as_rational() {
            return rhs.scale(&q);
        }
        if let Some(q) = rhs.as_rational() {
            return self.scale(&q);
        }
        let mut sink = TermSink::default();
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                sink.push_raw(ma.mul_raw(mb), ca * cb);
            }
        }
        sink.finish()
    }
}

impl<'a> Sub<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn sub(self, rhs: &'a Expr) -> Expr {
        let mut sink = TermSink(self.0.as_ref().clone());
        sink.add_expr(rhs, &-Rational::one());
        sink.finish()
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale(&-Rational::one())
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &'a Expr) -> Expr {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Expr> for &'a Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                self.$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        let mut sink = TermSink::default();
        for e in iter {
            sink.add_expr(&e, &Rational::one());
        }
        sink.finish()
    }
}
