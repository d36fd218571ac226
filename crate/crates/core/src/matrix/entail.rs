use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::language::{odometer_step, variables_of, Formula, FormulaSet, Fragment, Var};
use crate::limits::Limits;
use crate::search::{run_search, PairSpace, SearchBudget, SearchStats};

use super::{Element, FiniteAlgebra, FiniteMatrix, MatrixClass};

/// An assignment of carrier elements to finitely many variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Valuation {
    values: BTreeMap<Var, Element>,
}

impl Valuation {
    pub fn new(pairs: impl IntoIterator<Item = (Var, Element)>) -> Self {
        Valuation {
            values: pairs.into_iter().collect(),
        }
    }

    pub fn get(&self, v: &Var) -> Option<Element> {
        self.values.get(v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, Element)> {
        self.values.iter().map(|(v, &e)| (v, e))
    }
}

impl FromIterator<(Var, Element)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (Var, Element)>>(iter: I) -> Self {
        Valuation::new(iter)
    }
}

/// The value of `f` under `v`, by structural recursion through the tables.
pub fn evaluate(m: &FiniteMatrix, v: &Valuation, f: &Formula) -> Result<Element> {
    eval_in(m.algebra(), v, f)
}

fn eval_in(alg: &FiniteAlgebra, v: &Valuation, f: &Formula) -> Result<Element> {
    match f {
        Formula::Var(x) => {
            let e = v.get(x).ok_or_else(|| Error::UnboundVariable(x.clone()))?;
            if e >= alg.carrier() {
                return Err(Error::ValueOutOfRange {
                    value: e,
                    carrier: alg.carrier(),
                });
            }
            Ok(e)
        }
        Formula::App(name, args) => {
            let op = alg.op_index(name, args.len())?;
            let vals = args
                .iter()
                .map(|a| eval_in(alg, v, a))
                .collect::<Result<Vec<_>>>()?;
            Ok(alg.apply(op, &vals))
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Instr {
    Var(usize),
    Op(usize, usize),
}

/// Formulas compiled to postfix code over a fixed variable order, for
/// evaluation under many valuations.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    code: Vec<Vec<Instr>>,
}

impl Compiled {
    pub fn new<'a>(
        alg: &FiniteAlgebra,
        vars: &[Var],
        formulas: impl IntoIterator<Item = &'a Formula>,
    ) -> Result<Self> {
        let code = formulas
            .into_iter()
            .map(|f| {
                let mut out = Vec::new();
                compile_into(alg, vars, f, &mut out)?;
                Ok(out)
            })
            .collect::<Result<_>>()?;
        Ok(Compiled { code })
    }

    pub fn value(
        &self,
        i: usize,
        alg: &FiniteAlgebra,
        vals: &[Element],
        stack: &mut Vec<Element>,
    ) -> Element {
        stack.clear();
        for ins in &self.code[i] {
            match *ins {
                Instr::Var(j) => stack.push(vals[j]),
                Instr::Op(op, k) => {
                    let base = stack.len() - k;
                    let r = alg.apply(op, &stack[base..]);
                    stack.truncate(base);
                    stack.push(r);
                }
            }
        }
        stack[0]
    }

    pub fn len(&self) -> usize {
        self.code.len()
    }
}

fn compile_into(
    alg: &FiniteAlgebra,
    vars: &[Var],
    f: &Formula,
    out: &mut Vec<Instr>,
) -> Result<()> {
    match f {
        Formula::Var(x) => {
            let j = vars
                .iter()
                .position(|v| v == x)
                .ok_or_else(|| Error::UnboundVariable(x.clone()))?;
            out.push(Instr::Var(j));
        }
        Formula::App(name, args) => {
            let op = alg.op_index(name, args.len())?;
            for a in args {
                compile_into(alg, vars, a, out)?;
            }
            out.push(Instr::Op(op, args.len()));
        }
    }
    Ok(())
}

pub(crate) fn valuation_count(carrier: usize, vars: usize, limits: &Limits) -> Result<u128> {
    let count = (carrier as u128)
        .checked_pow(vars as u32)
        .unwrap_or(u128::MAX);
    if count > limits.max_valuations {
        return Err(Error::cap("valuations", count, limits.max_valuations));
    }
    Ok(count)
}

/// Visits every valuation of `vars` variables in `carrier`, first variable
/// slowest, until `f` breaks.
pub(crate) fn for_each_valuation(
    carrier: usize,
    vars: usize,
    limits: &Limits,
    mut f: impl FnMut(&[Element]) -> ControlFlow<()>,
) -> Result<ControlFlow<()>> {
    valuation_count(carrier, vars, limits)?;
    let mut vals = vec![0; vars];
    loop {
        if f(&vals).is_break() {
            return Ok(ControlFlow::Break(()));
        }
        if !odometer_step(&mut vals, carrier) {
            return Ok(ControlFlow::Continue(()));
        }
    }
}

/// Does some valuation designate every formula of `xs` (and, when `target`
/// is given, fail to designate it)? Formulas are compiled over `vars`.
fn find_valuation(
    m: &FiniteMatrix,
    vars: &[Var],
    xs: &Compiled,
    target: Option<usize>,
) -> Result<bool> {
    let alg = m.algebra();
    let mut stack = Vec::new();
    let flow = for_each_valuation(alg.carrier(), vars.len(), &Limits::default(), |vals| {
        let premises = target.map_or(xs.len(), |_| xs.len() - 1);
        let all = (0..premises).all(|i| m.is_designated(xs.value(i, alg, vals, &mut stack)));
        let hit =
            all && target.is_none_or(|t| !m.is_designated(xs.value(t, alg, vals, &mut stack)));
        if hit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(flow.is_break())
}

/// X ⊨_m α: every valuation of the variables occurring in X ∪ {α} that
/// designates all of X designates α.
pub fn entails_matrix<'a>(
    m: &FiniteMatrix,
    premises: impl IntoIterator<Item = &'a Formula>,
    conclusion: &Formula,
) -> Result<bool> {
    let mut all: Vec<&Formula> = premises.into_iter().collect();
    all.push(conclusion);
    let vars: Vec<Var> = variables_of(all.iter().copied()).into_iter().collect();
    let code = Compiled::new(m.algebra(), &vars, all.iter().copied())?;
    let target = code.len() - 1;
    Ok(!find_valuation(m, &vars, &code, Some(target))?)
}

/// X ⊢_M α: entailment in every member of the class.
pub fn entails_class(
    class: &MatrixClass,
    premises: &FormulaSet,
    conclusion: &Formula,
) -> Result<bool> {
    for m in class.members() {
        if !entails_matrix(m, premises, conclusion)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Some valuation of 𝒱(X) in `m` designates all of X.
pub(crate) fn designates_all<'a>(
    m: &FiniteMatrix,
    xs: impl IntoIterator<Item = &'a Formula>,
) -> Result<bool> {
    let xs: Vec<&Formula> = xs.into_iter().collect();
    let vars: Vec<Var> = variables_of(xs.iter().copied()).into_iter().collect();
    let code = Compiled::new(m.algebra(), &vars, xs)?;
    find_valuation(m, &vars, &code, None)
}

/// Cn_M(X) is the whole formula set. Decided exactly: in every member either
/// the filter is the whole carrier or no valuation designates all of X.
pub fn is_inconsistent(class: &MatrixClass, xs: &FormulaSet) -> Result<bool> {
    for m in class.members() {
        if !m.filter().is_full() && designates_all(m, xs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cn_M(X) restricted to the fragment, in fragment order.
pub fn cn_restricted(
    class: &MatrixClass,
    xs: &FormulaSet,
    frag: &Fragment,
) -> Result<Vec<Formula>> {
    let listing = class.listing(frag)?;
    let outside: Vec<_> = variables_of(xs)
        .into_iter()
        .filter(|v| !frag.vars.contains(v))
        .collect();
    if let Some(v) = outside.first() {
        return Err(Error::FragmentTooSmall(format!(
            "premise variable `{v}` is not a fragment variable"
        )));
    }
    let mut out = Vec::new();
    for f in listing.formulas() {
        if entails_class(class, xs, f)? {
            out.push(f.clone());
        }
    }
    Ok(out)
}

/// Outcome of a bounded model check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelCheck {
    pub is_model: bool,
    /// `(X, α)` with X ⊢_M α but not X ⊨_m α.
    pub witness: Option<(FormulaSet, Formula)>,
    pub stats: SearchStats,
}

/// Is `m` a model of the M-consequence, as far as the premise/conclusion
/// pairs of the fragment (with at most `max_set_size` premises) show?
pub fn is_model(
    m: &FiniteMatrix,
    class: &MatrixClass,
    frag: &Fragment,
    budget: &SearchBudget,
) -> Result<ModelCheck> {
    budget.validate()?;
    if m.signature() != class.signature() {
        return Err(Error::SignatureMismatch(
            "the candidate model and the class have different signatures".into(),
        ));
    }
    let listing = class.listing(frag)?;
    let space = PairSpace {
        n: listing.len(),
        max_set: budget.max_set_size,
    };
    let (hit, stats) = run_search(
        budget,
        |sink| space.enumerate(sink),
        |rng| space.sample(rng),
        PairSpace::key,
        |(xs, a)| {
            let xs: FormulaSet = xs.iter().map(|&i| listing.formula(i).clone()).collect();
            let a = listing.formula(*a);
            Ok(entails_class(class, &xs, a)? && !entails_matrix(m, &xs, a)?)
        },
    )?;
    let witness = hit.map(|(xs, a)| {
        (
            xs.iter().map(|&i| listing.formula(i).clone()).collect(),
            listing.formula(a).clone(),
        )
    });
    Ok(ModelCheck {
        is_model: witness.is_none(),
        witness,
        stats,
    })
}
