//! Expression engine: canonical construction, differentiation,
//! substitution, numeric evaluation and zero testing over the coordinates
//! (t, x, y), the field u and its jets.

mod atom;
mod diff;
mod error;
mod eval;
mod expr;
mod parse;
mod print;
mod subst;
mod zero;

pub use atom::{Atom, Coord, Jet, Name, ANSATZ_U, DEPENDENT_FIELDS};
pub use diff::{diff, diff_multi, partial, Var};
pub use error::{EvalError, SymError};
pub use eval::{eval_numeric, eval_with_scale, rational_to_f64, CompiledExpr, Point};
pub use expr::{rat, Expr, Monomial, Rational};
pub use parse::{parse, parse_with, ParseContext};
pub use subst::{substitute, substitute_with, Bindings, FunBinding};
pub use zero::{
    clear_denominators, is_zero, probe, random_point, ZeroTest, DEFAULT_SEED, PROBE_POINTS,
    PROBE_TOLERANCE,
};

/// Re-canonicalize. Expressions are canonical on construction, so this
/// rebuilds every composite atom from its parts and is idempotent.
pub fn simplify(e: &Expr) -> Expr {
    substitute_with(e, &mut |_, _| None)
        .expect("rebuilding a canonical expression cannot divide by zero")
}

/// Seeded generator used for every randomized probe.
pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
