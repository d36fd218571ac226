use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::language::{Formula, FormulaSet, Fragment, FragmentListing, Node};

use super::entail::for_each_valuation;
use super::{Element, FiniteMatrix};

/// One restricted truth set {α ∈ fragment : v(α) ∈ D}, with the first
/// valuation (in enumeration order) that realizes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthSet {
    pub members: FixedBitSet,
    pub valuation: Vec<Element>,
}

/// 𝔖(m) restricted to a fragment.
///
/// Every set counts as the trace of a proper full truth set exactly when the
/// filter is not the whole carrier: a fresh variable sent outside the filter
/// keeps the full truth set proper.
#[derive(Debug, Clone)]
pub struct SigmaFamily {
    listing: Arc<FragmentListing>,
    properly_extendable: bool,
    sets: Vec<TruthSet>,
}

impl SigmaFamily {
    pub fn listing(&self) -> &Arc<FragmentListing> {
        &self.listing
    }

    pub fn properly_extendable(&self) -> bool {
        self.properly_extendable
    }

    pub fn sets(&self) -> &[TruthSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Members of truth set `i` as formulas, in fragment order.
    pub fn formulas(&self, i: usize) -> Vec<Formula> {
        self.sets[i]
            .members
            .ones()
            .map(|j| self.listing.formula(j).clone())
            .collect()
    }

    pub fn contains_set(&self, set: &FixedBitSet) -> bool {
        self.sets.iter().any(|t| &t.members == set)
    }

    /// Bitset of `fs` over this family's fragment.
    pub fn bits<'a>(&self, fs: impl IntoIterator<Item = &'a Formula>) -> Result<FixedBitSet> {
        let mut bits = FixedBitSet::with_capacity(self.listing.len());
        for i in self.listing.positions(fs)? {
            bits.insert(i);
        }
        Ok(bits)
    }
}

/// Restricted 𝔖(m) over the fragment, computed by running through all
/// `n^|vars|` valuations.
pub fn sigma_family(m: &FiniteMatrix, frag: &Fragment) -> Result<SigmaFamily> {
    let listing = crate::matrix::MatrixClass::single(m.clone()).listing(frag)?;
    sigma_family_on(m, &Arc::new(listing), frag)
}

/// As [`sigma_family`], over an already enumerated listing of `frag`.
pub fn sigma_family_on(
    m: &FiniteMatrix,
    listing: &Arc<FragmentListing>,
    frag: &Fragment,
) -> Result<SigmaFamily> {
    let alg = m.algebra();
    let ops: Vec<usize> = listing
        .signature()
        .connectives()
        .iter()
        .map(|c| alg.op_index(c.name(), c.arity()))
        .collect::<Result<_>>()?;

    let n = listing.len();
    let mut values = vec![0; n];
    let mut args = Vec::new();
    let mut seen: HashMap<FixedBitSet, usize> = HashMap::new();
    let mut sets = Vec::new();
    let _ = for_each_valuation(alg.carrier(), listing.vars().len(), &frag.limits, |vals| {
        let mut bits = FixedBitSet::with_capacity(n);
        for (i, node) in listing.nodes().iter().enumerate() {
            let value = match node {
                Node::Var(j) => vals[*j],
                Node::App(c, children) => {
                    args.clear();
                    args.extend(children.iter().map(|&ch| values[ch]));
                    alg.apply(ops[*c], &args)
                }
            };
            values[i] = value;
            if m.is_designated(value) {
                bits.insert(i);
            }
        }
        if !seen.contains_key(&bits) {
            seen.insert(bits.clone(), sets.len());
            sets.push(TruthSet {
                members: bits,
                valuation: vals.to_vec(),
            });
        }
        ControlFlow::Continue(())
    })?;
    Ok(SigmaFamily {
        listing: listing.clone(),
        properly_extendable: !m.filter().is_full(),
        sets,
    })
}

/// X ⊢ α decided through truth sets: for every family and every member T,
/// X ⊆ T implies α ∈ T.
pub fn entails_via_sigma(
    families: &[SigmaFamily],
    premises: &FormulaSet,
    conclusion: &Formula,
) -> Result<bool> {
    for family in families {
        let xs = family.bits(premises)?;
        let a = family.listing.position(conclusion).ok_or_else(|| {
            Error::FragmentTooSmall(format!("{conclusion} lies outside the fragment"))
        })?;
        if family
            .sets
            .iter()
            .any(|t| xs.is_subset(&t.members) && !t.members.contains(a))
        {
            return Ok(false);
        }
    }
    Ok(true)
}
