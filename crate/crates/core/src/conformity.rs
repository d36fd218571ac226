//! Bounded searches for counterexamples to uniformity and couniformity,
//! syntactic (through the consequence relation) and semantic (through
//! truth-set families), and the single-matrix report that combines them.
//!
//! Syntactic notions used here:
//!
//! * uniform: if X ∪ Y ⊢ α, 𝒱(Y) ∩ 𝒱(X ∪ {α}) = ∅ and Y is consistent,
//!   then X ⊢ α;
//! * couniform: pairwise variable-disjoint consistent sets whose variables
//!   leave some variable unused have a consistent union. With an unbounded
//!   variable pool the side condition always holds.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::atlas::{product_atlas_with_limits, Atlas};
use crate::error::{Error, Result};
use crate::language::{
    variables_of, Formula, FormulaSet, Fragment, FragmentListing, Language, Var,
};
use crate::matrix::{
    entails_class, is_inconsistent, sigma_family, sigma_family_on, MatrixClass, SigmaFamily,
};
use crate::search::{for_each_combination, random_subset, run_search, SearchBudget, SearchStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Counterexample,
    NoCounterexample,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Counterexample => "counterexample",
            Outcome::NoCounterexample => "no-counterexample",
        })
    }
}

/// A replayable counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// X ∪ Y ⊢ α, X ⊬ α, Y consistent and variable-disjoint from X ∪ {α}.
    Uniform {
        x: FormulaSet,
        y: FormulaSet,
        alpha: Formula,
    },
    /// Pairwise variable-disjoint consistent sets with an inconsistent union.
    Couniform { family: Vec<FormulaSet> },
    /// Charts `i`, `j` with truth sets `z_i ⊇ x`, `z_j ⊇ y` (the latter
    /// proper) that no chart can merge. Truth sets are fragment-restricted.
    UniformBundle {
        x: FormulaSet,
        y: FormulaSet,
        chart_i: usize,
        chart_j: usize,
        z_i: FormulaSet,
        z_j: FormulaSet,
    },
    /// Pairwise variable-disjoint sets, each inside a proper truth set of
    /// some member, whose union lies in no proper truth set of any member.
    CouniformClass { family: Vec<FormulaSet> },
    /// Base and lifted entailment disagree on (X, α).
    Disagreement {
        x: FormulaSet,
        alpha: Formula,
        base: bool,
        lifted: bool,
    },
    /// X ⊢ α in the lifted consequence, but no (Y, β, σ) was found.
    MissingPattern { x: FormulaSet, alpha: Formula },
    /// A witness produced by one of the sub-checks of a combined check.
    Nested {
        check: String,
        witness: Box<Witness>,
    },
}

/// Outcome of a bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    pub stats: SearchStats,
    pub notes: Vec<String>,
}

pub(crate) const BOUNDED_NOTE: &str =
    "no counterexample in the searched space; this is a bounded check, not a proof";
pub(crate) const POOL_NOTE: &str =
    "the variable pool is unbounded, so no family exhausts the variables";

impl Verdict {
    pub(crate) fn from_search(witness: Option<Witness>, stats: SearchStats) -> Self {
        let outcome = if witness.is_some() {
            Outcome::Counterexample
        } else {
            Outcome::NoCounterexample
        };
        let mut notes = Vec::new();
        if witness.is_none() {
            notes.push(BOUNDED_NOTE.to_string());
        }
        Verdict {
            outcome,
            witness,
            stats,
            notes,
        }
    }

    pub fn is_counterexample(&self) -> bool {
        self.outcome == Outcome::Counterexample
    }

    fn note_empty_filters(mut self, class: &MatrixClass) -> Self {
        let empty: Vec<String> = class
            .members()
            .iter()
            .enumerate()
            .filter(|(_, m)| m.filter().is_empty())
            .map(|(i, _)| i.to_string())
            .collect();
        if !empty.is_empty() {
            self.notes
                .push(format!("empty filter in member(s) {}", empty.join(",")));
        }
        self
    }
}

fn to_set(listing: &FragmentListing, positions: &[usize]) -> FormulaSet {
    positions
        .iter()
        .map(|&i| listing.formula(i).clone())
        .collect()
}

fn mask_of(listing: &FragmentListing, positions: &[usize]) -> u64 {
    positions.iter().fold(0, |m, &i| m | listing.var_mask(i))
}

/// The fragment a syntactic check searches: the first `max_vars` variables
/// of `lang`, nesting depth `max_depth`.
pub fn syntactic_fragment(lang: &Language, budget: &SearchBudget) -> Result<Fragment> {
    Ok(Fragment::new(
        lang.first_vars(budget.max_vars)?,
        budget.max_depth,
    ))
}

fn class_listing(
    class: &MatrixClass,
    lang: &Language,
    frag: &Fragment,
) -> Result<Arc<FragmentListing>> {
    if lang.signature() != class.signature() {
        return Err(Error::SignatureMismatch(
            "the language and the class have different signatures".into(),
        ));
    }
    Ok(Arc::new(class.listing(frag)?))
}

/// Positions whose variables lie inside `allowed`, cached per mask.
struct Pools<'a> {
    listing: &'a FragmentListing,
    cache: HashMap<u64, Arc<Vec<usize>>>,
}

impl<'a> Pools<'a> {
    fn new(listing: &'a FragmentListing) -> Self {
        Pools {
            listing,
            cache: HashMap::new(),
        }
    }

    fn within(&mut self, allowed: u64) -> Arc<Vec<usize>> {
        let listing = self.listing;
        self.cache
            .entry(allowed)
            .or_insert_with(|| {
                Arc::new(
                    (0..listing.len())
                        .filter(|&i| listing.var_mask(i) & !allowed == 0)
                        .collect(),
                )
            })
            .clone()
    }
}

fn random_mask(rng: &mut ChaCha8Rng, vars: usize) -> u64 {
    (0..vars).fold(0, |m, v| if rng.random_bool(0.5) { m | 1 << v } else { m })
}

type Triple = (Vec<usize>, Vec<usize>, usize);

fn triple_key(c: &Triple) -> (usize, usize, Vec<usize>, usize, Vec<usize>) {
    (
        c.0.len() + c.1.len(),
        c.0.len(),
        c.0.clone(),
        c.2,
        c.1.clone(),
    )
}

/// Searches (X, Y, α) against syntactic uniformity. Candidates are ordered
/// by |X| + |Y|, then |X|, X, α and Y in fragment order; Y is nonempty.
pub fn check_uniform_syntactic(
    class: &MatrixClass,
    lang: &Language,
    budget: &SearchBudget,
) -> Result<Verdict> {
    budget.validate()?;
    let frag = syntactic_fragment(lang, budget)?;
    let listing = class_listing(class, lang, &frag)?;
    uniform_syntactic_on(class, &listing, budget)
}

pub(crate) fn uniform_syntactic_on(
    class: &MatrixClass,
    listing: &FragmentListing,
    budget: &SearchBudget,
) -> Result<Verdict> {
    let n = listing.len();
    let s = budget.max_set_size;
    let nvars = listing.vars().len();
    let all = listing.all_vars_mask();
    let mut pools = Pools::new(listing);

    let enumerate = |sink: &mut dyn FnMut(Triple) -> ControlFlow<()>| {
        let mut pools = Pools::new(listing);
        for total in 1..=2 * s {
            for kx in 0..=s.min(total - 1) {
                let ky = total - kx;
                if ky > s {
                    continue;
                }
                let flow = for_each_combination(n, kx, &mut |xs| {
                    let mx = mask_of(listing, xs);
                    for a in 0..n {
                        let pool = pools.within(all & !(mx | listing.var_mask(a)));
                        for_each_combination(pool.len(), ky, &mut |yi| {
                            let ys = yi.iter().map(|&i| pool[i]).collect();
                            sink((xs.to_vec(), ys, a))
                        })?;
                    }
                    ControlFlow::Continue(())
                });
                if flow.is_break() {
                    return;
                }
            }
        }
    };
    let sample = |rng: &mut ChaCha8Rng| {
        let b = random_mask(rng, nvars);
        let kx = rng.random_range(0..=s);
        let ky = rng.random_range(1..=s);
        let outside = pools.within(all & !b);
        let inside = pools.within(b);
        if outside.is_empty() {
            return None;
        }
        let xs = random_subset(rng, &outside, kx)?;
        let ys = random_subset(rng, &inside, ky)?;
        let a = outside[rng.random_range(0..outside.len())];
        Some((xs, ys, a))
    };
    let (hit, stats) = run_search(budget, enumerate, sample, triple_key, |(xs, ys, a)| {
        let x = to_set(listing, xs);
        let mut xy = x.clone();
        xy.extend(to_set(listing, ys));
        let alpha = listing.formula(*a);
        Ok(entails_class(class, &xy, alpha)?
            && !entails_class(class, &x, alpha)?
            && !is_inconsistent(class, &to_set(listing, ys))?)
    })?;
    let witness = hit.map(|(xs, ys, a)| Witness::Uniform {
        x: to_set(listing, &xs),
        y: to_set(listing, &ys),
        alpha: listing.formula(a).clone(),
    });
    Ok(Verdict::from_search(witness, stats).note_empty_filters(class))
}

type Family = Vec<Vec<usize>>;

fn family_key(f: &Family) -> (usize, usize, Family) {
    (f.iter().map(Vec::len).sum(), f.len(), f.clone())
}

fn block_order(a: &[usize], b: &[usize]) -> std::cmp::Ordering {
    (a.len(), a).cmp(&(b.len(), b))
}

/// Nondecreasing size sequences of length `m` in 1..=s summing to `total`,
/// in lexicographic order.
fn compositions(total: usize, m: usize, s: usize) -> Vec<Vec<usize>> {
    fn go(
        left: usize,
        parts: usize,
        min: usize,
        s: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for size in min..=s.min(left) {
            cur.push(size);
            go(left - size, parts - 1, size, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, m, 1, s, &mut Vec::new(), &mut out);
    out
}

/// Families of 2..=max_family_size nonempty pairwise variable-disjoint
/// blocks of at most max_set_size formulas. Blocks are sorted by (size,
/// positions); families are ordered by total size, block count, then
/// blockwise.
struct FamilySpace<'a> {
    listing: &'a FragmentListing,
    set_size: usize,
    family_size: usize,
}

impl FamilySpace<'_> {
    fn enumerate(&self, sink: &mut dyn FnMut(Family) -> ControlFlow<()>) {
        let mut pools = Pools::new(self.listing);
        let all = self.listing.all_vars_mask();
        for total in 2..=self.family_size * self.set_size {
            for m in 2..=self.family_size.min(total) {
                for sizes in compositions(total, m, self.set_size) {
                    let mut chosen = Vec::new();
                    if self
                        .fill(&sizes, all, &mut pools, &mut chosen, sink)
                        .is_break()
                    {
                        return;
                    }
                }
            }
        }
    }

    fn fill(
        &self,
        sizes: &[usize],
        free: u64,
        pools: &mut Pools<'_>,
        chosen: &mut Family,
        sink: &mut dyn FnMut(Family) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let i = chosen.len();
        if i == sizes.len() {
            return sink(chosen.clone());
        }
        let pool = pools.within(free);
        for_each_combination(pool.len(), sizes[i], &mut |idx| {
            let block: Vec<usize> = idx.iter().map(|&k| pool[k]).collect();
            if let Some(prev) = chosen.last() {
                if block_order(prev, &block).is_ge() {
                    return ControlFlow::Continue(());
                }
            }
            let used = mask_of(self.listing, &block);
            chosen.push(block);
            let flow = self.fill(sizes, free & !used, pools, chosen, sink);
            chosen.pop();
            flow
        })
    }

    fn sample(&self, rng: &mut ChaCha8Rng, pools: &mut Pools<'_>) -> Option<Family> {
        if self.family_size < 2 {
            return None;
        }
        let m = rng.random_range(2..=self.family_size);
        let nvars = self.listing.vars().len();
        let labels: Vec<usize> = (0..nvars).map(|_| rng.random_range(0..=m)).collect();
        let mut family = Vec::with_capacity(m);
        for b in 0..m {
            let allowed = labels
                .iter()
                .enumerate()
                .filter(|&(_, &l)| l == b)
                .fold(0u64, |acc, (v, _)| acc | 1 << v);
            let size = rng.random_range(1..=self.set_size);
            family.push(random_subset(rng, &pools.within(allowed), size)?);
        }
        family.sort_by(|a, b| block_order(a, b));
        family.dedup();
        (family.len() == m).then_some(family)
    }
}

/// Searches families against syntactic couniformity. A family of one set
/// can never be a counterexample, so families have at least two sets.
pub fn check_couniform_syntactic(
    class: &MatrixClass,
    lang: &Language,
    budget: &SearchBudget,
) -> Result<Verdict> {
    budget.validate()?;
    let frag = syntactic_fragment(lang, budget)?;
    let listing = class_listing(class, lang, &frag)?;
    couniform_syntactic_on(class, &listing, budget)
}

pub(crate) fn couniform_syntactic_on(
    class: &MatrixClass,
    listing: &FragmentListing,
    budget: &SearchBudget,
) -> Result<Verdict> {
    let consistent =
        |block: &[usize]| -> Result<bool> { Ok(!is_inconsistent(class, &to_set(listing, block))?) };
    let verdict = family_search(
        listing,
        budget,
        |family| {
            let union: Vec<usize> = family.iter().flatten().copied().collect();
            if !is_inconsistent(class, &to_set(listing, &union))? {
                return Ok(false);
            }
            for block in family {
                if !consistent(block)? {
                    return Ok(false);
                }
            }
            Ok(true)
        },
        |family| Witness::Couniform { family },
    )?;
    Ok(verdict.note_empty_filters(class))
}

fn family_search(
    listing: &FragmentListing,
    budget: &SearchBudget,
    is_counterexample: impl Fn(&Family) -> Result<bool> + Sync,
    wrap: impl FnOnce(Vec<FormulaSet>) -> Witness,
) -> Result<Verdict> {
    let space = FamilySpace {
        listing,
        set_size: budget.max_set_size,
        family_size: budget.max_family_size,
    };
    let mut pools = Pools::new(listing);
    let (hit, stats) = run_search(
        budget,
        |sink| space.enumerate(sink),
        |rng| space.sample(rng, &mut pools),
        family_key,
        is_counterexample,
    )?;
    let witness = hit.map(|f| wrap(f.iter().map(|b| to_set(listing, b)).collect()));
    let mut verdict = Verdict::from_search(witness, stats);
    verdict.notes.push(POOL_NOTE.to_string());
    Ok(verdict)
}

/// Per-member truth-set families over one shared listing.
fn families_on(
    class: &MatrixClass,
    frag: &Fragment,
) -> Result<(Arc<FragmentListing>, Vec<SigmaFamily>)> {
    let listing = Arc::new(class.listing(frag)?);
    let families = class
        .members()
        .iter()
        .map(|m| sigma_family_on(m, &listing, frag))
        .collect::<Result<Vec<_>>>()?;
    Ok((listing, families))
}

/// Positions of the listing whose variables all lie in `allowed`.
fn formulas_within(listing: &FragmentListing, allowed: u64) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(listing.len());
    for i in 0..listing.len() {
        if listing.var_mask(i) & !allowed == 0 {
            bits.insert(i);
        }
    }
    bits
}

fn bits_to_set(listing: &FragmentListing, bits: &FixedBitSet) -> FormulaSet {
    bits.ones().map(|i| listing.formula(i).clone()).collect()
}

/// A subset of `z` with exactly the variables `b` and at most `max` members,
/// if there is one. Picks the first formula of each variable pattern used.
fn cover(listing: &FragmentListing, z: &FixedBitSet, b: u64, max: usize) -> Option<Vec<usize>> {
    if b == 0 {
        return Some(Vec::new());
    }
    let mut firsts: Vec<(u64, usize)> = Vec::new();
    for i in z.ones() {
        let m = listing.var_mask(i);
        if m != 0 && m & !b == 0 && !firsts.iter().any(|&(seen, _)| seen == m) {
            firsts.push((m, i));
        }
    }
    for k in 1..=max.min(firsts.len()) {
        let mut found = None;
        let _ = for_each_combination(firsts.len(), k, &mut |idx| {
            if idx.iter().fold(0, |acc, &i| acc | firsts[i].0) == b {
                found = Some(idx.iter().map(|&i| firsts[i].1).collect());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

type BundleCandidate = (usize, usize, usize, usize, usize);

/// Searches for a violation of the bundle uniformity condition over the
/// fragment, reading the existentials as scoping over the consequent only:
/// for a variable set B (the variables of Y), charts i, j and truth sets
/// Z_i, Z_j with Z_j proper and holding some Y with 𝒱(Y) = B, there must be
/// a chart k and Z_k with Z_k ∩ Fm[C] = Z_i ∩ Fm[C] (C the other fragment
/// variables) and Z_j ∩ Fm[B] ⊆ Z_k. X = ∅ is the weakest choice and is what
/// witnesses report.
///
/// Candidates are ordered by |B|, B, i, j, Z_i, Z_j.
pub fn check_uniform_bundle(
    atlas: &Atlas,
    frag: &Fragment,
    budget: &SearchBudget,
) -> Result<Verdict> {
    uniform_bundle_on_class(&atlas.to_class(), frag, budget)
}

/// The same condition for an arbitrary class of charts.
pub fn uniform_bundle_on_class(
    class: &MatrixClass,
    frag: &Fragment,
    budget: &SearchBudget,
) -> Result<Verdict> {
    budget.validate()?;
    let (listing, families) = families_on(class, frag)?;
    let nvars = listing.vars().len();
    if nvars > 20 {
        return Err(Error::cap(
            "variable subsets",
            1u128 << nvars.min(127),
            1 << 20,
        ));
    }
    let all = listing.all_vars_mask();
    let mut subsets: Vec<u64> = (0..1u64 << nvars).collect();
    subsets.sort_by_key(|&b| {
        (
            b.count_ones(),
            (0..nvars).filter(|v| b >> v & 1 == 1).collect::<Vec<_>>(),
        )
    });
    let parts: Vec<(FixedBitSet, FixedBitSet)> = subsets
        .iter()
        .map(|&b| {
            (
                formulas_within(&listing, b),
                formulas_within(&listing, all & !b),
            )
        })
        .collect();
    let s = budget.max_set_size;
    let charts = families.len();
    let admissible = |c: &BundleCandidate| {
        let (bi, _, j, _, zj) = *c;
        families[j].properly_extendable()
            && cover(&listing, &families[j].sets()[zj].members, subsets[bi], s).is_some()
    };

    let enumerate = |sink: &mut dyn FnMut(BundleCandidate) -> ControlFlow<()>| {
        for bi in 0..subsets.len() {
            for i in 0..charts {
                for j in 0..charts {
                    for zi in 0..families[i].len() {
                        for zj in 0..families[j].len() {
                            let c = (bi, i, j, zi, zj);
                            if admissible(&c) && sink(c).is_break() {
                                return;
                            }
                        }
                    }
                }
            }
        }
    };
    let sample = |rng: &mut ChaCha8Rng| {
        let bi = rng.random_range(0..subsets.len());
        let i = rng.random_range(0..charts);
        let j = rng.random_range(0..charts);
        let c = (
            bi,
            i,
            j,
            rng.random_range(0..families[i].len()),
            rng.random_range(0..families[j].len()),
        );
        admissible(&c).then_some(c)
    };
    let (hit, stats) = run_search(
        budget,
        enumerate,
        sample,
        |c| *c,
        |&(bi, i, j, zi, zj)| {
            let (fb, fc) = &parts[bi];
            let mut want_c = families[i].sets()[zi].members.clone();
            want_c.intersect_with(fc);
            let mut want_b = families[j].sets()[zj].members.clone();
            want_b.intersect_with(fb);
            let merged = families.iter().any(|fam| {
                fam.sets().iter().any(|zk| {
                    let mut on_c = zk.members.clone();
                    on_c.intersect_with(fc);
                    on_c == want_c && want_b.is_subset(&zk.members)
                })
            });
            Ok(!merged)
        },
    )?;
    let witness = hit.map(|(bi, i, j, zi, zj)| {
        let z_j = &families[j].sets()[zj].members;
        let y = cover(&listing, z_j, subsets[bi], s).expect("admissible candidate");
        Witness::UniformBundle {
            x: FormulaSet::new(),
            y: to_set(&listing, &y),
            chart_i: i,
            chart_j: j,
            z_i: bits_to_set(&listing, &families[i].sets()[zi].members),
            z_j: bits_to_set(&listing, z_j),
        }
    });
    Ok(Verdict::from_search(witness, stats).note_empty_filters(class))
}

/// Searches families against the couniformity condition on truth sets: each
/// set lies in a proper truth set of some member, the union in none.
pub fn check_couniform_class(
    class: &MatrixClass,
    frag: &Fragment,
    budget: &SearchBudget,
) -> Result<Verdict> {
    budget.validate()?;
    let (listing, families) = families_on(class, frag)?;
    let proper: Vec<&FixedBitSet> = families
        .iter()
        .filter(|f| f.properly_extendable())
        .flat_map(|f| f.sets().iter().map(|t| &t.members))
        .collect();
    let inside_proper = |positions: &[usize]| {
        proper
            .iter()
            .any(|t| positions.iter().all(|&i| t.contains(i)))
    };
    let verdict = family_search(
        &listing,
        budget,
        |family| {
            let union: Vec<usize> = family.iter().flatten().copied().collect();
            Ok(!inside_proper(&union) && family.iter().all(|b| inside_proper(b)))
        },
        |family| Witness::CouniformClass { family },
    )?;
    Ok(verdict.note_empty_filters(class))
}

fn disjoint_vars(sets: &[&FormulaSet]) -> bool {
    let vars: Vec<BTreeSet<Var>> = sets.iter().map(|s| variables_of(*s)).collect();
    vars.iter()
        .enumerate()
        .all(|(i, a)| vars[i + 1..].iter().all(|b| a.is_disjoint(b)))
}

/// Full truth-set families of the members as formula sets, recomputed from
/// scratch.
fn truth_sets(class: &MatrixClass, frag: &Fragment) -> Result<Vec<(bool, Vec<FormulaSet>)>> {
    class
        .members()
        .iter()
        .map(|m| {
            let fam = sigma_family(m, frag)?;
            let sets = (0..fam.len())
                .map(|i| fam.formulas(i).into_iter().collect())
                .collect();
            Ok((fam.properly_extendable(), sets))
        })
        .collect()
}

/// Re-checks a counterexample of this module from first principles. The
/// fragment is the one the search ran over (needed for truth-set witnesses).
pub fn replay(class: &MatrixClass, frag: &Fragment, witness: &Witness) -> Result<bool> {
    match witness {
        Witness::Uniform { x, y, alpha } => {
            let xy: FormulaSet = x.union(y).cloned().collect();
            let xa: FormulaSet = x.iter().chain([alpha]).cloned().collect();
            Ok(!y.is_empty()
                && disjoint_vars(&[y, &xa])
                && !is_inconsistent(class, y)?
                && entails_class(class, &xy, alpha)?
                && !entails_class(class, x, alpha)?)
        }
        Witness::Couniform { family } => {
            let refs: Vec<&FormulaSet> = family.iter().collect();
            let union: FormulaSet = family.iter().flatten().cloned().collect();
            if family.len() < 2 || !disjoint_vars(&refs) || !is_inconsistent(class, &union)? {
                return Ok(false);
            }
            for set in family {
                if is_inconsistent(class, set)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Witness::UniformBundle {
            x,
            y,
            chart_i,
            chart_j,
            z_i,
            z_j,
        } => {
            let families = truth_sets(class, frag)?;
            let (Some((_, sets_i)), Some((proper_j, sets_j))) =
                (families.get(*chart_i), families.get(*chart_j))
            else {
                return Ok(false);
            };
            let b = variables_of(y);
            let on = |z: &FormulaSet, keep: &dyn Fn(&Formula) -> bool| -> FormulaSet {
                z.iter().filter(|f| keep(f)).cloned().collect()
            };
            let in_c = |f: &Formula| f.variables().is_disjoint(&b);
            let in_b = |f: &Formula| f.variables().is_subset(&b);
            let valid = sets_i.contains(z_i)
                && sets_j.contains(z_j)
                && *proper_j
                && x.is_subset(z_i)
                && y.is_subset(z_j)
                && x.iter().all(in_c);
            if !valid {
                return Ok(false);
            }
            let want_c = on(z_i, &in_c);
            let want_b = on(z_j, &in_b);
            let merged = families.iter().any(|(_, sets)| {
                sets.iter()
                    .any(|zk| on(zk, &in_c) == want_c && want_b.is_subset(zk))
            });
            Ok(!merged)
        }
        Witness::CouniformClass { family } => {
            let families = truth_sets(class, frag)?;
            let proper: Vec<&FormulaSet> = families
                .iter()
                .filter(|(p, _)| *p)
                .flat_map(|(_, sets)| sets)
                .collect();
            let refs: Vec<&FormulaSet> = family.iter().collect();
            let union: FormulaSet = family.iter().flatten().cloned().collect();
            Ok(family.len() >= 2
                && disjoint_vars(&refs)
                && family.iter().all(|x| proper.iter().any(|z| x.is_subset(z)))
                && !proper.iter().any(|z| union.is_subset(z)))
        }
        Witness::Nested { witness, .. } => replay(class, frag, witness),
        Witness::Disagreement { .. } | Witness::MissingPattern { .. } => Ok(false),
    }
}

/// Which bundle the semantic uniformity check of a report ran on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BundleSource {
    /// The members already share one algebra.
    SharedAlgebra,
    /// The members' product atlas.
    ProductAtlas,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSummary {
    pub carrier: usize,
    pub filter_sizes: Vec<usize>,
}

/// The four conformity verdicts for a class, the product atlas summary and
/// the resulting classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleMatrixReport {
    pub uniform_syntactic: Verdict,
    pub couniform_syntactic: Verdict,
    pub uniform_bundle: Verdict,
    pub bundle_source: BundleSource,
    pub couniform_class: Verdict,
    pub product: ProductSummary,
}

impl SingleMatrixReport {
    /// No counterexample of any kind was found.
    pub fn consistent_with_single_matrix(&self) -> bool {
        self.verdicts().iter().all(|(_, v)| !v.is_counterexample())
    }

    pub fn verdicts(&self) -> [(&'static str, &Verdict); 4] {
        [
            ("uniform-syntactic", &self.uniform_syntactic),
            ("couniform-syntactic", &self.couniform_syntactic),
            ("uniform-bundle", &self.uniform_bundle),
            ("couniform-class", &self.couniform_class),
        ]
    }
}

/// Runs all four checks over `frag` (the syntactic ones on the same
/// fragment). The bundle check runs on the class itself when its members
/// share an algebra, and on the product atlas otherwise.
pub fn single_matrix_report(
    class: &MatrixClass,
    frag: &Fragment,
    budget: &SearchBudget,
) -> Result<SingleMatrixReport> {
    budget.validate()?;
    let listing = class.listing(frag)?;
    let uniform_syntactic = uniform_syntactic_on(class, &listing, budget)?;
    let couniform_syntactic = couniform_syntactic_on(class, &listing, budget)?;
    let product = product_atlas_with_limits(class, &frag.limits)?;
    let (uniform_bundle, bundle_source) = match Atlas::from_class(class) {
        Some(atlas) => (
            check_uniform_bundle(&atlas, frag, budget)?,
            BundleSource::SharedAlgebra,
        ),
        None => (
            check_uniform_bundle(&product, frag, budget)?,
            BundleSource::ProductAtlas,
        ),
    };
    let couniform_class = check_couniform_class(class, frag, budget)?;
    Ok(SingleMatrixReport {
        uniform_syntactic,
        couniform_syntactic,
        uniform_bundle,
        bundle_source,
        couniform_class,
        product: ProductSummary {
            carrier: product.algebra().carrier(),
            filter_sizes: product.filters().iter().map(|f| f.len()).collect(),
        },
    })
}
