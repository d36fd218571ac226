//! Workloads shared by the benchmarks.

use std::sync::Arc;

use matcon::catalog::builtin;
use matcon::{
    enumerate_fragment, FiniteMatrix, Formula, FormulaSet, Fragment, Language, MatrixClass, Var,
};

/// The built-in signature with the given named variables.
pub fn language(vars: &[&str]) -> Language {
    Language::new(builtin::signature(), vars.iter().map(Var::new)).expect("valid language")
}

/// B2 on `imp`/`neg` with filters {1} and ∅.
pub fn nu_class() -> MatrixClass {
    let b2 = Arc::new(builtin::b2().restrict(&["imp", "neg"]).expect("restrict"));
    MatrixClass::new(vec![
        FiniteMatrix::new(b2.clone(), [1]).expect("filter"),
        FiniteMatrix::new(b2, []).expect("filter"),
    ])
    .expect("class")
}

/// Every (X, α) over the fragment with |X| ≤ 1.
pub fn small_inferences(frag: &Fragment, lang: &Language) -> Vec<(FormulaSet, Formula)> {
    let listing = enumerate_fragment(frag, lang).expect("fragment");
    let fs = listing.formulas();
    let mut out = Vec::new();
    for a in fs {
        out.push((FormulaSet::new(), a.clone()));
        for x in fs {
            out.push(([x.clone()].into(), a.clone()));
        }
    }
    out
}
