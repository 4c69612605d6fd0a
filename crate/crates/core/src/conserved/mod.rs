//! Conserved differential forms: the printed catalog, verification against
//! the generator set, and re-derivation by a sampled nullspace solve.

mod basis;
mod catalog;
mod compare;
mod invariants;
pub mod linalg;
mod sampling;
mod solver;
mod verify;

pub use basis::{monomial, monomial_label, AnsatzBasis};
pub use catalog::{
    catalog_entry, catalog_form, coefficient, euler_number, speed, speed_squared, CatalogEntry, CatalogTerm,
    CATALOG_DEGREES,
};
pub use compare::{compare_with_catalog, CatalogComparison, CompareOptions, FlaggedTuple};
pub use invariants::{invariant_arguments, ExpectedInvariant, InvariantMonomial, InvariantReport, EXPECTED_INVARIANTS};
pub use sampling::{sample_point, Sampler};
pub use solver::{
    masks_of_degree, solve_forms, BlockSummary, FormTerm, NullspaceResult, NumericEntry, SolveOptions, SolvedForm,
};
pub use verify::{
    tuple_label, verify_conserved, ConservedReport, GeneratorCheck, TermFailure, VerifyMode, VerifyOptions,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConservedError {
    #[error("no conserved {0}-form is reported")]
    NoneReported(usize),
    #[error("degree {0} is outside 0..=8")]
    BadDegree(usize),
    #[error("the generator set is empty")]
    NoGenerators,
    #[error("the ansatz basis is empty")]
    EmptyBasis,
}
