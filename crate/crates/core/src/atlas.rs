//! Atlases (one algebra, several filters), the product atlas of a class, and
//! Lindenbaum theories over fragments.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::language::{odometer_step, Formula, FormulaSet, Fragment, FragmentListing, Node};
use crate::limits::Limits;
use crate::matrix::{
    entails_class, sigma_family_on, Element, Filter, FiniteAlgebra, FiniteMatrix, MatrixClass,
};

/// ⟨A, {D_i}⟩. Its consequence is that of the bundle {⟨A, D_i⟩}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atlas {
    algebra: Arc<FiniteAlgebra>,
    filters: Vec<Filter>,
}

/// Builds an atlas; every filter element must lie in the carrier.
pub fn make_atlas(
    algebra: Arc<FiniteAlgebra>,
    filters: impl IntoIterator<Item = Vec<Element>>,
) -> Result<Atlas> {
    let filters = filters
        .into_iter()
        .map(|f| Filter::new(algebra.carrier(), f))
        .collect::<Result<Vec<_>>>()?;
    Atlas::new(algebra, filters)
}

impl Atlas {
    pub fn new(algebra: Arc<FiniteAlgebra>, filters: Vec<Filter>) -> Result<Self> {
        if filters.is_empty() {
            return Err(Error::NoFilters);
        }
        if filters.iter().any(|f| f.carrier() != algebra.carrier()) {
            return Err(Error::InvalidAlgebra(
                "filter built for a different carrier".into(),
            ));
        }
        Ok(Atlas { algebra, filters })
    }

    /// The atlas of a class whose members all share one algebra.
    pub fn from_class(class: &MatrixClass) -> Option<Atlas> {
        if !class.shares_algebra() {
            return None;
        }
        let algebra = class.members()[0].algebra().clone();
        let filters = class.members().iter().map(|m| m.filter().clone()).collect();
        Some(Atlas { algebra, filters })
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn filters(&self) -> &[Filter] {
        &self.filters
    }

    /// Whether some chart has an empty filter.
    pub fn has_empty_filter(&self) -> bool {
        self.filters.iter().any(Filter::is_empty)
    }

    pub fn chart(&self, i: usize) -> FiniteMatrix {
        FiniteMatrix::with_filter(self.algebra.clone(), self.filters[i].clone())
            .expect("filters match the carrier")
    }

    /// The induced class {⟨A, D_i⟩}.
    pub fn to_class(&self) -> MatrixClass {
        MatrixClass::new((0..self.filters.len()).map(|i| self.chart(i)).collect())
            .expect("charts share the signature")
    }
}

/// Atlas consequence: consequence of the induced class.
pub fn atlas_entails(atlas: &Atlas, premises: &FormulaSet, conclusion: &Formula) -> Result<bool> {
    entails_class(&atlas.to_class(), premises, conclusion)
}

/// The product atlas M*: the direct product of the member algebras, and for
/// each member `i` the filter of tuples whose `i`-th coordinate is designated
/// in member `i`.
pub fn product_atlas(class: &MatrixClass) -> Result<Atlas> {
    product_atlas_with_limits(class, &Limits::default())
}

pub fn product_atlas_with_limits(class: &MatrixClass, limits: &Limits) -> Result<Atlas> {
    let sizes: Vec<usize> = class.members().iter().map(FiniteMatrix::carrier).collect();
    let carrier = sizes
        .iter()
        .try_fold(1u128, |acc, &n| acc.checked_mul(n as u128))
        .unwrap_or(u128::MAX);
    let signature = class.signature().clone();
    let mut entries: u128 = 0;
    for conn in signature.connectives() {
        let len = carrier
            .checked_pow(conn.arity() as u32)
            .unwrap_or(u128::MAX);
        entries = entries.saturating_add(len);
    }
    if entries > limits.max_table_entries {
        return Err(Error::cap(
            "product table entries",
            entries,
            limits.max_table_entries,
        ));
    }
    let carrier = carrier as usize;
    let coding = ProductCoding::new(sizes);

    let mut tables = Vec::with_capacity(signature.len());
    for conn in signature.connectives() {
        let ops: Vec<usize> = class
            .members()
            .iter()
            .map(|m| m.algebra().op_index(conn.name(), conn.arity()))
            .collect::<Result<_>>()?;
        let k = conn.arity();
        let len = carrier.pow(k as u32);
        let mut table = Vec::with_capacity(len);
        let mut args = vec![0; k];
        let mut coord_args = vec![0; k];
        for _ in 0..len {
            let mut result = 0;
            for (i, m) in class.members().iter().enumerate() {
                for (slot, &a) in coord_args.iter_mut().zip(&args) {
                    *slot = coding.coordinate(a, i);
                }
                result += m.algebra().apply(ops[i], &coord_args) * coding.strides[i];
            }
            table.push(result);
            odometer_step(&mut args, carrier);
        }
        tables.push(table);
    }
    let algebra = Arc::new(FiniteAlgebra::new(signature, carrier, tables)?);

    let filters = class
        .members()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            Filter::new(
                carrier,
                (0..carrier).filter(|&e| m.is_designated(coding.coordinate(e, i))),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Atlas::new(algebra, filters)
}

/// Mixed-radix coding of product tuples, first coordinate most significant.
#[derive(Debug, Clone)]
pub struct ProductCoding {
    sizes: Vec<usize>,
    strides: Vec<usize>,
}

impl ProductCoding {
    pub fn new(sizes: Vec<usize>) -> Self {
        let mut strides = vec![1; sizes.len()];
        for i in (0..sizes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * sizes[i + 1];
        }
        ProductCoding { sizes, strides }
    }

    pub fn coordinate(&self, e: Element, i: usize) -> Element {
        (e / self.strides[i]) % self.sizes[i]
    }

    pub fn encode(&self, coords: &[Element]) -> Element {
        coords.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }
}

/// Fragment-closed sets of a consequence: T with Cn(T) ∩ fragment = T.
#[derive(Debug, Clone)]
pub struct TheoryFamily {
    listing: Arc<FragmentListing>,
    theories: Vec<FixedBitSet>,
}

impl TheoryFamily {
    pub fn listing(&self) -> &Arc<FragmentListing> {
        &self.listing
    }

    pub fn len(&self) -> usize {
        self.theories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theories.is_empty()
    }

    pub fn bits(&self) -> &[FixedBitSet] {
        &self.theories
    }

    pub fn theory(&self, i: usize) -> FormulaSet {
        self.theories[i]
            .ones()
            .map(|j| self.listing.formula(j).clone())
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = FormulaSet> + '_ {
        (0..self.len()).map(|i| self.theory(i))
    }

    pub fn contains(&self, set: &FormulaSet) -> bool {
        match self.listing.positions(set) {
            Ok(pos) => {
                let mut bits = FixedBitSet::with_capacity(self.listing.len());
                pos.into_iter().for_each(|i| bits.insert(i));
                self.theories.contains(&bits)
            }
            Err(_) => false,
        }
    }
}

/// All theories of the class's consequence inside the fragment.
///
/// Restricted consequence is the intersection of the restricted truth sets
/// containing the premises, so the theories are exactly the intersections of
/// subfamilies of truth sets (the empty intersection being the whole
/// fragment). They are generated that way, largest first, then listed by
/// size and fragment order.
pub fn lindenbaum_theories(class: &MatrixClass, frag: &Fragment) -> Result<TheoryFamily> {
    let listing = Arc::new(class.listing(frag)?);
    let n = listing.len();
    let mut full = FixedBitSet::with_capacity(n);
    full.insert_range(..);

    let mut generators = Vec::new();
    for m in class.members() {
        let family = sigma_family_on(m, &listing, frag)?;
        generators.extend(family.sets().iter().map(|t| t.members.clone()));
    }

    let mut seen: HashSet<FixedBitSet> = HashSet::from([full.clone()]);
    let mut theories = vec![full];
    for g in &generators {
        let before = theories.len();
        for t in 0..before {
            let mut meet = theories[t].clone();
            meet.intersect_with(g);
            if seen.insert(meet.clone()) {
                theories.push(meet);
                if theories.len() > frag.limits.max_theories {
                    return Err(Error::cap(
                        "theories",
                        theories.len() as u128,
                        frag.limits.max_theories as u128,
                    ));
                }
            }
        }
    }
    theories.sort_by_cached_key(|t| (t.count_ones(..), t.ones().collect::<Vec<_>>()));
    Ok(TheoryFamily { listing, theories })
}

/// {α ∈ fragment : σ(α) ∈ T}, where σ sends the fragment variables to the
/// listed formulas `images` (by position). Images leaving the fragment are
/// never in T.
pub fn preimage_in_fragment(
    listing: &FragmentListing,
    images: &[usize],
    theory: &FixedBitSet,
) -> FixedBitSet {
    let lookup = node_lookup(listing);
    preimage_with(listing, &lookup, images, theory)
}

fn node_lookup(listing: &FragmentListing) -> HashMap<(usize, Vec<usize>), usize> {
    listing
        .nodes()
        .iter()
        .enumerate()
        .filter_map(|(i, node)| match node {
            Node::App(c, children) => Some(((*c, children.clone()), i)),
            Node::Var(_) => None,
        })
        .collect()
}

fn substitution_image(
    listing: &FragmentListing,
    lookup: &HashMap<(usize, Vec<usize>), usize>,
    images: &[usize],
) -> Vec<Option<usize>> {
    let mut img: Vec<Option<usize>> = Vec::with_capacity(listing.len());
    for node in listing.nodes() {
        let here = match node {
            Node::Var(j) => Some(images[*j]),
            Node::App(c, children) => children
                .iter()
                .map(|&ch| img[ch])
                .collect::<Option<Vec<_>>>()
                .and_then(|key| lookup.get(&(*c, key)).copied()),
        };
        img.push(here);
    }
    img
}

fn preimage_with(
    listing: &FragmentListing,
    lookup: &HashMap<(usize, Vec<usize>), usize>,
    images: &[usize],
    theory: &FixedBitSet,
) -> FixedBitSet {
    let img = substitution_image(listing, lookup, images);
    let mut out = FixedBitSet::with_capacity(listing.len());
    for (i, target) in img.into_iter().enumerate() {
        if target.is_some_and(|t| theory.contains(t)) {
            out.insert(i);
        }
    }
    out
}

/// Truth sets of the Lindenbaum matrices ⟨Fm, T⟩ seen through the fragment:
/// for each theory T and each substitution σ sending the fragment variables
/// to fragment formulas of depth at most `sub_depth`, the set
/// {α ∈ fragment : σ(α) ∈ T}.
///
/// This under-approximates the 𝔖-sets of the Lindenbaum atlas: only
/// substitutions into the fragment are tried.
pub fn lindenbaum_sigma_sets(
    class: &MatrixClass,
    frag: &Fragment,
    sub_depth: usize,
) -> Result<BTreeSet<FormulaSet>> {
    let theories = lindenbaum_theories(class, frag)?;
    let listing = theories.listing().clone();
    let targets: Vec<usize> = (0..listing.len())
        .filter(|&i| listing.depth_of(i) <= sub_depth)
        .collect();
    let k = listing.vars().len();
    let count = (targets.len() as u128)
        .checked_pow(k as u32)
        .unwrap_or(u128::MAX);
    let work = count.saturating_mul(theories.len() as u128);
    if work > frag.limits.max_valuations {
        return Err(Error::cap(
            "substitution/theory pairs",
            work,
            frag.limits.max_valuations,
        ));
    }
    let lookup = node_lookup(&listing);
    let mut found: BTreeSet<FixedBitSet> = BTreeSet::new();
    let mut choice = vec![0usize; k];
    loop {
        let images: Vec<usize> = choice.iter().map(|&c| targets[c]).collect();
        let img = substitution_image(&listing, &lookup, &images);
        for t in theories.bits() {
            let mut out = FixedBitSet::with_capacity(listing.len());
            for (i, target) in img.iter().enumerate() {
                if target.is_some_and(|x| t.contains(x)) {
                    out.insert(i);
                }
            }
            found.insert(out);
        }
        if targets.is_empty() || !odometer_step(&mut choice, targets.len()) {
            break;
        }
    }
    Ok(found
        .into_iter()
        .map(|bits| bits.ones().map(|j| listing.formula(j).clone()).collect())
        .collect())
}
