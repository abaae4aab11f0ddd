//! Point symmetries on the jet space: prolongation, invariance of the
//! equation, brackets and the algebras they generate.

mod algebra;
mod field;
mod file;
mod prolong;
mod subalgebra;
mod symmetry;

pub use algebra::{
    commutator_table, lie_bracket, negative_definite, AlgebraTable, AlgebraTag, BracketEntry,
};
pub use field::{gauge, isometries, preset, s0, s1, s2, s3, s4, FieldComponents, VectorField};
pub use file::{generators_from_toml, generators_to_toml, GeneratorFileError};
pub use prolong::{prolong, ProlongedGenerator};
pub use subalgebra::{
    combination, listed_subalgebras, subalgebra_check, Subalgebra, SubalgebraReport,
};
pub use symmetry::{
    determining_system, evaluate_determining, generic_generator, shift_reduction_check,
    symmetry_check, symmetry_residual, DeterminingEquation, ShiftReport, SymmetryReport,
};
