//! Consequence relations determined by finite logical matrices.
//!
//! The crate decides entailment over finite matrices, classes of matrices
//! and atlases (one algebra with several filters), computes truth-set
//! families over bounded formula fragments, builds product and Lindenbaum
//! atlases, and searches bounded spaces for counterexamples to uniformity
//! and couniformity. Formulas are written as prefix s-expressions, e.g.
//! `(imp p (neg q))`.

pub mod atlas;
pub mod catalog;
pub mod conformity;
pub mod error;
pub mod extension;
pub mod language;
pub mod limits;
pub mod matrix;
pub mod search;

pub use atlas::{
    atlas_entails, lindenbaum_sigma_sets, lindenbaum_theories, make_atlas, product_atlas, Atlas,
    TheoryFamily,
};
pub use catalog::{load_matrix_file, Catalog, Entry};
pub use conformity::{
    check_couniform_class, check_couniform_syntactic, check_uniform_bundle,
    check_uniform_syntactic, single_matrix_report, Outcome, SingleMatrixReport, Verdict, Witness,
};
pub use error::{Error, ParseErrorKind, Result};
pub use extension::{
    conservativity_check, lifted_entails, shared_atlas_check, wojcicki_entails, LiftedConsequence,
    PatternWitness, WojcickiResult,
};
pub use language::{
    apply_substitution, enumerate_fragment, extend_language, is_primitive_extension, parse_formula,
    parse_formula_list, print_formula, print_set, variables_of, Formula, FormulaSet, Fragment,
    FragmentListing, Language, Signature, Substitution, Var,
};
pub use limits::Limits;
pub use matrix::{
    cn_restricted, entails_class, entails_matrix, entails_via_sigma, evaluate, is_inconsistent,
    is_model, sigma_family, Element, FiniteAlgebra, FiniteMatrix, MatrixClass, SigmaFamily,
    Valuation,
};
pub use search::{SearchBudget, SearchStats};
