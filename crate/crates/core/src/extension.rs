//! Primitive extensions of a language: the same matrices over a larger
//! variable pool, the consequence generated from base inferences by
//! substitution, and checks comparing them.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;

use crate::conformity::{couniform_syntactic_on, uniform_syntactic_on, Verdict, Witness};
use crate::error::{Error, Result};
use crate::language::{variables_of, Formula, FormulaSet, Fragment, Language, Substitution, Var};
use crate::matrix::{entails_class, MatrixClass};
use crate::search::{for_each_combination, run_search, PairSpace, SearchBudget, SearchStats};

/// The consequence of a class read in a primitive extension of its language.
#[derive(Debug, Clone)]
pub struct LiftedConsequence {
    base_class: MatrixClass,
    base_lang: Language,
    extended_lang: Language,
    lifted_class: MatrixClass,
}

impl LiftedConsequence {
    pub fn new(
        base_class: MatrixClass,
        base_lang: Language,
        extended_lang: Language,
    ) -> Result<Self> {
        if base_lang.signature() != base_class.signature() {
            return Err(Error::SignatureMismatch(
                "the base language and the class have different signatures".into(),
            ));
        }
        if !extended_lang.is_primitive_extension_of(&base_lang) {
            return Err(Error::SignatureMismatch(
                "the extended language is not a primitive extension of the base".into(),
            ));
        }
        Ok(LiftedConsequence {
            lifted_class: base_class.clone(),
            base_class,
            base_lang,
            extended_lang,
        })
    }

    /// Lifts `class` from `base_lang` to `base_lang` plus `new_vars`.
    pub fn lift(
        class: MatrixClass,
        base_lang: Language,
        new_vars: impl IntoIterator<Item = Var>,
    ) -> Result<Self> {
        let extended = base_lang.extend(new_vars)?;
        LiftedConsequence::new(class, base_lang, extended)
    }

    /// Replaces the class used for lifted entailment. Only for exercising
    /// the checks against a corrupted lift.
    #[doc(hidden)]
    pub fn with_lifted_class(mut self, class: MatrixClass) -> Self {
        self.lifted_class = class;
        self
    }

    pub fn base_class(&self) -> &MatrixClass {
        &self.base_class
    }

    pub fn base_lang(&self) -> &Language {
        &self.base_lang
    }

    pub fn extended_lang(&self) -> &Language {
        &self.extended_lang
    }

    /// `v` is a base-language variable. The variables named by the extension
    /// but not by the base are outside it even when the base pool is unbounded.
    pub fn in_base(&self, v: &Var) -> bool {
        self.base_lang.contains_var(v)
            && (self.base_lang.named_vars().contains(v)
                || !self.extended_lang.named_vars().contains(v))
    }
}

fn check_vars<'a>(lang: &Language, fs: impl IntoIterator<Item = &'a Formula>) -> Result<()> {
    match variables_of(fs).into_iter().find(|v| !lang.contains_var(v)) {
        Some(v) => Err(Error::NotInLanguage(v)),
        None => Ok(()),
    }
}

/// X ⊢_(M)+ α: the base matrices, with valuations on the occurring
/// variables of the extended language.
pub fn lifted_entails(
    lc: &LiftedConsequence,
    premises: &FormulaSet,
    conclusion: &Formula,
) -> Result<bool> {
    check_vars(&lc.extended_lang, premises.iter().chain([conclusion]))?;
    entails_class(&lc.lifted_class, premises, conclusion)
}

/// (Y, β, σ) with Y ∪ {β} in the base language, σ(Y) ⊆ X, σ(β) = α and
/// Y ⊢ β in the base consequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternWitness {
    pub y: FormulaSet,
    pub beta: Formula,
    pub sigma: Substitution,
}

impl fmt::Display for PatternWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Y = {}, beta = {}, sigma = {}",
            crate::language::print_set(&self.y),
            self.beta,
            self.sigma
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WojcickiResult {
    /// A witness was found. `false` only means none was found within budget.
    pub entails: bool,
    pub witness: Option<PatternWitness>,
    pub stats: SearchStats,
}

/// Replaces, with shared pattern variables, every variable and every
/// subterm at depth `cut` of the formulas it is applied to.
struct Generalizer<'a> {
    names: &'a [Var],
    seen: Vec<(Formula, Var)>,
}

impl Generalizer<'_> {
    fn var_for(&mut self, f: &Formula) -> Option<Var> {
        if let Some((_, v)) = self.seen.iter().find(|(g, _)| g == f) {
            return Some(v.clone());
        }
        let v = self.names.get(self.seen.len())?.clone();
        self.seen.push((f.clone(), v.clone()));
        Some(v)
    }

    fn apply(&mut self, f: &Formula, depth: usize, cut: usize) -> Option<Formula> {
        match f {
            Formula::App(c, args) if depth < cut => Some(Formula::App(
                c.clone(),
                args.iter()
                    .map(|a| self.apply(a, depth + 1, cut))
                    .collect::<Option<_>>()?,
            )),
            _ => Some(Formula::Var(self.var_for(f)?)),
        }
    }

    fn sigma(&self) -> Substitution {
        self.seen
            .iter()
            .map(|(f, v)| (v.clone(), f.clone()))
            .collect()
    }
}

/// Searches for a (Y, β, σ) witness of X ⊢_(S)+ α.
///
/// Candidates are generalizations of X' ∪ {α} for subsets X' ⊆ X with
/// |X'| ≤ `max_set_size`, tried by |X'|, then X' in order, then by cut depth
/// from 0 upwards: every subterm at the cut depth and every variable is
/// replaced by a base-language variable, identical subterms by the same one.
/// Pattern variables are the base language's named variables, then fresh
/// ones. At most `samples` candidates are tried.
pub fn wojcicki_entails(
    lc: &LiftedConsequence,
    premises: &FormulaSet,
    conclusion: &Formula,
    budget: &SearchBudget,
) -> Result<WojcickiResult> {
    budget.validate()?;
    check_vars(&lc.extended_lang, premises.iter().chain([conclusion]))?;
    let xs: Vec<&Formula> = premises.iter().collect();
    let nodes: usize = xs.iter().map(|f| f.size()).sum::<usize>() + conclusion.size();
    let mut names: Vec<Var> = lc.base_lang.named_vars().to_vec();
    if lc.base_lang.pool_unbounded() {
        let taken: BTreeSet<Var> = names
            .iter()
            .chain(lc.extended_lang.named_vars())
            .cloned()
            .collect();
        names.extend(lc.base_lang.fresh_avoiding(nodes, &taken));
    }

    let mut examined = 0u64;
    let mut space = 0u128;
    let mut found = None;
    let mut truncated = false;
    let mut error = None;
    for k in 0..=xs.len().min(budget.max_set_size) {
        let flow = for_each_combination(xs.len(), k, &mut |idx| {
            let chosen: Vec<&Formula> = idx.iter().map(|&i| xs[i]).collect();
            let top = chosen
                .iter()
                .map(|f| f.depth())
                .chain([conclusion.depth()])
                .max()
                .unwrap_or(0);
            for cut in 0..=top {
                space += 1;
                if examined as usize >= budget.samples {
                    truncated = true;
                    continue;
                }
                examined += 1;
                let mut g = Generalizer {
                    names: &names,
                    seen: Vec::new(),
                };
                let Some(y) = chosen
                    .iter()
                    .map(|f| g.apply(f, 0, cut))
                    .collect::<Option<FormulaSet>>()
                else {
                    continue;
                };
                let Some(beta) = g.apply(conclusion, 0, cut) else {
                    continue;
                };
                match entails_class(&lc.base_class, &y, &beta) {
                    Ok(true) => {
                        found = Some(PatternWitness {
                            y,
                            beta,
                            sigma: g.sigma(),
                        });
                        return ControlFlow::Break(());
                    }
                    Ok(false) => {}
                    Err(e) => {
                        error = Some(e);
                        return ControlFlow::Break(());
                    }
                }
            }
            ControlFlow::Continue(())
        });
        if flow.is_break() {
            break;
        }
    }
    if let Some(e) = error {
        return Err(e);
    }
    if let Some(w) = &found {
        if !replay_pattern(lc, premises, conclusion, w)? {
            return Err(Error::InvalidAlgebra(format!(
                "pattern witness failed to replay: {w}"
            )));
        }
    }
    Ok(WojcickiResult {
        entails: found.is_some(),
        witness: found,
        stats: SearchStats {
            candidates_examined: examined,
            space_size: space,
            exhaustive: !truncated && xs.len() <= budget.max_set_size,
        },
    })
}

/// Checks a pattern witness from scratch.
pub fn replay_pattern(
    lc: &LiftedConsequence,
    premises: &FormulaSet,
    conclusion: &Formula,
    w: &PatternWitness,
) -> Result<bool> {
    let in_base = variables_of(w.y.iter().chain([&w.beta]))
        .iter()
        .all(|v| lc.in_base(v));
    Ok(in_base
        && w.y.iter().all(|f| premises.contains(&w.sigma.apply(f)))
        && w.sigma.apply(&w.beta) == *conclusion
        && entails_class(&lc.base_class, &w.y, &w.beta)?)
}

fn pair_search(
    listing: &crate::language::FragmentListing,
    budget: &SearchBudget,
    is_counterexample: impl Fn(&FormulaSet, &Formula) -> Result<Option<Witness>> + Sync,
) -> Result<Verdict> {
    let space = PairSpace {
        n: listing.len(),
        max_set: budget.max_set_size,
    };
    let to_pair = |(xs, a): &(Vec<usize>, usize)| -> (FormulaSet, Formula) {
        (
            xs.iter().map(|&i| listing.formula(i).clone()).collect(),
            listing.formula(*a).clone(),
        )
    };
    let (hit, stats) = run_search(
        budget,
        |sink| space.enumerate(sink),
        |rng| space.sample(rng),
        PairSpace::key,
        |pair| {
            let (x, a) = to_pair(pair);
            Ok(is_counterexample(&x, &a)?.is_some())
        },
    )?;
    let witness = match hit {
        Some(pair) => {
            let (x, a) = to_pair(&pair);
            is_counterexample(&x, &a)?
        }
        None => None,
    };
    Ok(Verdict::from_search(witness, stats))
}

/// Searches the fragment (over base variables) for (X, α) on which base and
/// lifted entailment disagree.
pub fn conservativity_check(
    lc: &LiftedConsequence,
    frag: &Fragment,
    budget: &SearchBudget,
) -> Result<Verdict> {
    budget.validate()?;
    if let Some(v) = frag.vars.iter().find(|v| !lc.in_base(v)) {
        return Err(Error::NotInLanguage(v.clone()));
    }
    let listing = lc.base_class.listing(frag)?;
    pair_search(&listing, budget, |x, a| {
        let base = entails_class(&lc.base_class, x, a)?;
        let lifted = lifted_entails(lc, x, a)?;
        Ok((base != lifted).then(|| Witness::Disagreement {
            x: x.clone(),
            alpha: a.clone(),
            base,
            lifted,
        }))
    })
}

/// Re-checks a disagreement witness of [`conservativity_check`].
pub fn replay_disagreement(lc: &LiftedConsequence, witness: &Witness) -> Result<bool> {
    match witness {
        Witness::Disagreement {
            x,
            alpha,
            base,
            lifted,
        } => Ok(base != lifted
            && entails_class(&lc.base_class, x, alpha)? == *base
            && lifted_entails(lc, x, alpha)? == *lifted),
        _ => Ok(false),
    }
}

/// The sub-verdicts of [`shared_atlas_check`] and their aggregate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedAtlasReport {
    pub checks: Vec<(String, Verdict)>,
    pub overall: Verdict,
}

/// Behavioral check that the base and Wójcicki consequences are determined
/// by one uniform and couniform atlas:
///
/// * soundness: every pattern witness found on the extended fragment is
///   backed by lifted entailment;
/// * completeness: lifted entailments on the extended fragment have pattern
///   witnesses within budget;
/// * conformity: syntactic uniformity and couniformity searches find nothing,
///   for the base class on `frag_base` and for the lifted class on
///   `frag_ext`.
///
/// The overall verdict carries the first counterexample in that order.
pub fn shared_atlas_check(
    lc: &LiftedConsequence,
    frag_base: &Fragment,
    frag_ext: &Fragment,
    budget: &SearchBudget,
) -> Result<SharedAtlasReport> {
    budget.validate()?;
    if let Some(v) = frag_ext
        .vars
        .iter()
        .find(|v| !lc.extended_lang.contains_var(v))
    {
        return Err(Error::NotInLanguage(v.clone()));
    }
    let ext_listing = lc.lifted_class.listing(frag_ext)?;
    let soundness = pair_search(&ext_listing, budget, |x, a| {
        let w = wojcicki_entails(lc, x, a, budget)?;
        Ok(
            (w.entails && !lifted_entails(lc, x, a)?).then(|| Witness::Disagreement {
                x: x.clone(),
                alpha: a.clone(),
                base: true,
                lifted: false,
            }),
        )
    })?;
    let completeness = pair_search(&ext_listing, budget, |x, a| {
        Ok(
            (lifted_entails(lc, x, a)? && !wojcicki_entails(lc, x, a, budget)?.entails).then(
                || Witness::MissingPattern {
                    x: x.clone(),
                    alpha: a.clone(),
                },
            ),
        )
    })?;
    let base_listing = lc.base_class.listing(frag_base)?;
    let checks = vec![
        ("wojcicki-soundness".to_string(), soundness),
        ("wojcicki-completeness".to_string(), completeness),
        (
            "base-uniform".to_string(),
            uniform_syntactic_on(&lc.base_class, &base_listing, budget)?,
        ),
        (
            "base-couniform".to_string(),
            couniform_syntactic_on(&lc.base_class, &base_listing, budget)?,
        ),
        (
            "lifted-uniform".to_string(),
            uniform_syntactic_on(&lc.lifted_class, &ext_listing, budget)?,
        ),
        (
            "lifted-couniform".to_string(),
            couniform_syntactic_on(&lc.lifted_class, &ext_listing, budget)?,
        ),
    ];
    let mut stats = SearchStats::empty();
    let mut witness = None;
    for (name, v) in &checks {
        stats.absorb(&v.stats);
        if witness.is_none() {
            if let Some(w) = &v.witness {
                witness = Some(Witness::Nested {
                    check: name.clone(),
                    witness: Box::new(w.clone()),
                });
            }
        }
    }
    let overall = Verdict::from_search(witness, stats);
    Ok(SharedAtlasReport { checks, overall })
}
