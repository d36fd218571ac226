//! Finite logical matrices and classes of them: evaluation, entailment, the
//! restricted consequence operator, inconsistency, model checks and
//! truth-set families.

mod algebra;
mod entail;
mod sigma;

use std::fmt;
use std::sync::Arc;

pub use algebra::{Element, FiniteAlgebra};
pub use entail::{
    cn_restricted, entails_class, entails_matrix, evaluate, is_inconsistent, is_model, ModelCheck,
    Valuation,
};
pub use sigma::{entails_via_sigma, sigma_family, sigma_family_on, SigmaFamily, TruthSet};

use crate::error::{Error, Result};
use crate::language::{enumerate_fragment, Fragment, FragmentListing, Language, Signature};

/// A designated subset of a carrier. May be empty or the whole carrier.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Filter {
    members: Vec<bool>,
}

impl Filter {
    pub fn new(carrier: usize, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        let mut members = vec![false; carrier];
        for e in elements {
            if e >= carrier {
                return Err(Error::FilterOutOfRange {
                    element: e,
                    carrier,
                });
            }
            members[e] = true;
        }
        Ok(Filter { members })
    }

    pub fn contains(&self, e: Element) -> bool {
        self.members[e]
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_full(&self) -> bool {
        self.members.iter().all(|&b| b)
    }

    pub fn carrier(&self) -> usize {
        self.members.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.elements().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

impl fmt::Debug for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// ⟨A, D⟩.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMatrix {
    algebra: Arc<FiniteAlgebra>,
    filter: Filter,
}

impl FiniteMatrix {
    pub fn new(
        algebra: Arc<FiniteAlgebra>,
        filter: impl IntoIterator<Item = Element>,
    ) -> Result<Self> {
        let filter = Filter::new(algebra.carrier(), filter)?;
        Ok(FiniteMatrix { algebra, filter })
    }

    pub fn with_filter(algebra: Arc<FiniteAlgebra>, filter: Filter) -> Result<Self> {
        if filter.carrier() != algebra.carrier() {
            return Err(Error::InvalidAlgebra(format!(
                "filter over {} elements for a carrier of {}",
                filter.carrier(),
                algebra.carrier()
            )));
        }
        Ok(FiniteMatrix { algebra, filter })
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn filter(&self) -> &Filter {
        &self.filter
    }

    pub fn signature(&self) -> &Arc<Signature> {
        self.algebra.signature()
    }

    pub fn carrier(&self) -> usize {
        self.algebra.carrier()
    }

    pub fn is_designated(&self, e: Element) -> bool {
        self.filter.contains(e)
    }

    /// The reduct to the named connectives, same filter.
    pub fn restrict(&self, names: &[&str]) -> Result<FiniteMatrix> {
        Ok(FiniteMatrix {
            algebra: Arc::new(self.algebra.restrict(names)?),
            filter: self.filter.clone(),
        })
    }
}

/// A nonempty finite class of matrices over one signature. The algebras may
/// differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixClass {
    members: Vec<FiniteMatrix>,
}

impl MatrixClass {
    pub fn new(members: Vec<FiniteMatrix>) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptyClass)?;
        if let Some(other) = members.iter().find(|m| m.signature() != first.signature()) {
            return Err(Error::SignatureMismatch(format!(
                "class mixes signatures `{}` and `{}`",
                first.signature(),
                other.signature()
            )));
        }
        Ok(MatrixClass { members })
    }

    pub fn single(m: FiniteMatrix) -> Self {
        MatrixClass { members: vec![m] }
    }

    pub fn members(&self) -> &[FiniteMatrix] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn signature(&self) -> &Arc<Signature> {
        self.members[0].signature()
    }

    /// The reduct of every member to the named connectives.
    pub fn restrict(&self, names: &[&str]) -> Result<MatrixClass> {
        MatrixClass::new(
            self.members
                .iter()
                .map(|m| m.restrict(names))
                .collect::<Result<_>>()?,
        )
    }

    /// Whether every member is built on one and the same algebra.
    pub fn shares_algebra(&self) -> bool {
        let first = self.members[0].algebra();
        self.members
            .iter()
            .all(|m| Arc::ptr_eq(m.algebra(), first) || m.algebra() == first)
    }

    /// The language of this class's signature with the fragment's variables
    /// named, then the fragment enumerated in it.
    pub fn listing(&self, frag: &Fragment) -> Result<FragmentListing> {
        let lang = Language::new(self.signature().clone(), frag.vars.iter().cloned())?;
        enumerate_fragment(frag, &lang)
    }
}

impl From<FiniteMatrix> for MatrixClass {
    fn from(m: FiniteMatrix) -> Self {
        MatrixClass::single(m)
    }
}
