//! Signatures, formulas, the prefix text syntax, fragments, substitutions and
//! primitive language extensions.

mod formula;
mod fragment;
mod parse;
mod signature;
mod substitution;

use std::collections::BTreeSet;
use std::sync::Arc;

pub use formula::{print_formula, print_set, variables_of, Formula, FormulaSet, Var};
pub(crate) use fragment::odometer_step;
pub use fragment::{enumerate_fragment, Fragment, FragmentListing, Node};
pub use parse::{parse_formula, parse_formula_list};
pub use signature::{is_identifier, Connective, Signature};
pub use substitution::{apply_substitution, Substitution};

use crate::error::{Error, Result};

/// A propositional language: a signature plus a pool of variables.
///
/// With `pool_unbounded` set the language has inexhaustibly many variables:
/// every identifier that is not a connective name is admissible, and
/// [`Language::fresh_vars`] hands out `v0, v1, …` skipping the named ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Language {
    signature: Arc<Signature>,
    named_vars: Vec<Var>,
    pool_unbounded: bool,
}

impl Language {
    /// A language with an unbounded variable pool.
    pub fn new(
        signature: Arc<Signature>,
        named_vars: impl IntoIterator<Item = Var>,
    ) -> Result<Self> {
        Self::build(signature, named_vars, true)
    }

    /// A language whose only variables are the named ones.
    pub fn bounded(
        signature: Arc<Signature>,
        named_vars: impl IntoIterator<Item = Var>,
    ) -> Result<Self> {
        Self::build(signature, named_vars, false)
    }

    fn build(
        signature: Arc<Signature>,
        named_vars: impl IntoIterator<Item = Var>,
        pool_unbounded: bool,
    ) -> Result<Self> {
        let mut lang = Language {
            signature,
            named_vars: Vec::new(),
            pool_unbounded,
        };
        lang.push_vars(named_vars)?;
        Ok(lang)
    }

    fn push_vars(&mut self, vars: impl IntoIterator<Item = Var>) -> Result<()> {
        for v in vars {
            if !is_identifier(v.name()) {
                return Err(Error::InvalidSignature(format!(
                    "`{v}` is not a valid variable name"
                )));
            }
            if self.signature.contains(v.name()) || self.named_vars.contains(&v) {
                return Err(Error::NameClash(v.to_string()));
            }
            self.named_vars.push(v);
        }
        Ok(())
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn named_vars(&self) -> &[Var] {
        &self.named_vars
    }

    pub fn pool_unbounded(&self) -> bool {
        self.pool_unbounded
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        if self.named_vars.contains(v) {
            return true;
        }
        self.pool_unbounded && is_identifier(v.name()) && !self.signature.contains(v.name())
    }

    /// `n` variables not among the named ones: `v0, v1, …`.
    ///
    /// Panics when the pool is bounded; callers check [`Language::pool_unbounded`].
    pub fn fresh_vars(&self, n: usize) -> Vec<Var> {
        assert!(
            self.pool_unbounded,
            "bounded variable pool has no fresh variables"
        );
        self.fresh_avoiding(n, &BTreeSet::new())
    }

    /// Fresh variables that also avoid `taken`.
    pub fn fresh_avoiding(&self, n: usize, taken: &BTreeSet<Var>) -> Vec<Var> {
        (0..)
            .map(|i| Var::new(format!("v{i}")))
            .filter(|v| {
                !self.named_vars.contains(v)
                    && !taken.contains(v)
                    && !self.signature.contains(v.name())
            })
            .take(n)
            .collect()
    }

    /// The first `n` variables of the language: the named ones in declaration
    /// order, then fresh ones.
    pub fn first_vars(&self, n: usize) -> Result<Vec<Var>> {
        let mut out: Vec<Var> = self.named_vars.iter().take(n).cloned().collect();
        if out.len() < n {
            if !self.pool_unbounded {
                return Err(Error::FragmentTooSmall(format!(
                    "the language has only {} variables, {n} requested",
                    self.named_vars.len()
                )));
            }
            out.extend(self.fresh_vars(n - out.len()));
        }
        Ok(out)
    }

    /// Same signature, variable pool enlarged by `new_vars`.
    pub fn extend(&self, new_vars: impl IntoIterator<Item = Var>) -> Result<Language> {
        let mut out = self.clone();
        out.push_vars(new_vars)?;
        Ok(out)
    }

    /// Same connectives and constants as `base`, and a variable pool
    /// containing the one of `base`.
    pub fn is_primitive_extension_of(&self, base: &Language) -> bool {
        is_primitive_extension(base, self)
    }
}

/// Enlarges the variable pool of `lang`; the signature is untouched.
pub fn extend_language(
    lang: &Language,
    new_vars: impl IntoIterator<Item = Var>,
) -> Result<Language> {
    lang.extend(new_vars)
}

/// True iff the signatures coincide and every variable of `lang` is a
/// variable of `lang2`.
pub fn is_primitive_extension(lang: &Language, lang2: &Language) -> bool {
    if lang.signature != lang2.signature {
        return false;
    }
    if lang.pool_unbounded && !lang2.pool_unbounded {
        return false;
    }
    lang.named_vars.iter().all(|v| lang2.contains_var(v))
}
