use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A propositional variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: impl AsRef<str>) -> Self {
        Var(Arc::from(name.as_ref()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

/// A formula: a finite term tree over a signature. Leaves are variables or
/// nullary connectives.
///
/// Formulas carry connective names rather than signature indices, so they can
/// be printed and compared without a signature at hand.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(Var),
    App(Arc<str>, Vec<Formula>),
}

/// Finite sets of formulas, ordered for deterministic iteration.
pub type FormulaSet = BTreeSet<Formula>;

impl Formula {
    pub fn var(name: impl AsRef<str>) -> Self {
        Formula::Var(Var::new(name))
    }

    pub fn app(connective: impl AsRef<str>, args: Vec<Formula>) -> Self {
        Formula::App(Arc::from(connective.as_ref()), args)
    }

    pub fn constant(connective: impl AsRef<str>) -> Self {
        Formula::app(connective, Vec::new())
    }

    /// Variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::App(_, args) => 1 + args.iter().map(Formula::size).sum::<usize>(),
        }
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    pub(crate) fn collect_variables(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::App(_, args) => args.iter().for_each(|a| a.collect_variables(out)),
        }
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Formula::Var(v) => Some(v),
            Formula::App(..) => None,
        }
    }
}

/// Canonical prefix text: `p`, `bot`, `(imp p (neg q))`.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => f.write_str(v.name()),
            Formula::App(name, args) if args.is_empty() => f.write_str(name),
            Formula::App(name, args) => {
                write!(f, "({name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// 𝒱 of a set of formulas: the union of the variables of its members.
pub fn variables_of<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    for f in fs {
        f.collect_variables(&mut out);
    }
    out
}

/// `{a, b}` with members in set order; `{}` for the empty set.
pub fn print_set<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> String {
    let items: Vec<String> = fs.into_iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(", "))
}
