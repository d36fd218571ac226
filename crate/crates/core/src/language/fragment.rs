use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::Limits;

use super::{Formula, Language, Signature, Var};

/// A finite slice of Fm[vars]: the formulas over `vars` of depth at most
/// `depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub vars: Vec<Var>,
    pub depth: usize,
    pub limits: Limits,
}

impl Fragment {
    pub fn new(vars: impl IntoIterator<Item = Var>, depth: usize) -> Self {
        Fragment {
            vars: vars.into_iter().collect(),
            depth,
            limits: Limits::default(),
        }
    }

    /// Shorthand for tests and examples: `Fragment::of(&["p", "q"], 1)`.
    pub fn of(vars: &[&str], depth: usize) -> Self {
        Fragment::new(vars.iter().map(Var::new), depth)
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }
}

/// One entry of a listing: a variable (index into the fragment's variables)
/// or a connective (index into the signature) applied to earlier entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Var(usize),
    App(usize, Vec<usize>),
}

/// The enumerated fragment. Children always precede their parents, so a
/// single forward pass evaluates every member.
#[derive(Debug, Clone)]
pub struct FragmentListing {
    signature: Arc<Signature>,
    vars: Vec<Var>,
    formulas: Vec<Formula>,
    nodes: Vec<Node>,
    depths: Vec<usize>,
    var_masks: Vec<u64>,
    index: HashMap<Formula, usize>,
}

impl FragmentListing {
    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.formulas[i]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn depth_of(&self, i: usize) -> usize {
        self.depths[i]
    }

    /// Bit `j` set iff `vars()[j]` occurs in formula `i`.
    pub fn var_mask(&self, i: usize) -> u64 {
        self.var_masks[i]
    }

    /// Mask with every fragment variable set.
    pub fn all_vars_mask(&self) -> u64 {
        if self.vars.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.vars.len()) - 1
        }
    }

    pub fn position(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// Positions of `fs` in the listing; errors when one lies outside.
    pub fn positions<'a>(&self, fs: impl IntoIterator<Item = &'a Formula>) -> Result<Vec<usize>> {
        fs.into_iter()
            .map(|f| {
                self.position(f).ok_or_else(|| {
                    Error::FragmentTooSmall(format!("{f} lies outside the fragment"))
                })
            })
            .collect()
    }

    pub fn mask_of_vars<'a>(&self, vars: impl IntoIterator<Item = &'a Var>) -> u64 {
        vars.into_iter()
            .filter_map(|v| self.vars.iter().position(|w| w == v))
            .fold(0, |m, j| m | (1 << j))
    }
}

/// Lists the fragment deterministically: variables in declaration order, then
/// nullary connectives, then by depth; within a depth by connective
/// declaration order and lexicographically by child positions.
pub fn enumerate_fragment(frag: &Fragment, lang: &Language) -> Result<FragmentListing> {
    if frag.vars.len() > 64 {
        return Err(Error::cap(
            "fragment variables",
            frag.vars.len() as u128,
            64,
        ));
    }
    for (i, v) in frag.vars.iter().enumerate() {
        if !lang.contains_var(v) {
            return Err(Error::FragmentTooSmall(format!(
                "`{v}` is not a variable of the language"
            )));
        }
        if frag.vars[..i].contains(v) {
            return Err(Error::NameClash(v.to_string()));
        }
    }
    let signature = lang.signature().clone();
    let cap = frag.limits.max_fragment;
    let mut out = FragmentListing {
        signature: signature.clone(),
        vars: frag.vars.clone(),
        formulas: Vec::new(),
        nodes: Vec::new(),
        depths: Vec::new(),
        var_masks: Vec::new(),
        index: HashMap::new(),
    };

    let constants = signature
        .connectives()
        .iter()
        .filter(|c| c.arity() == 0)
        .count();
    let base = frag.vars.len() + constants;
    if base > cap {
        return Err(Error::cap("fragment formulas", base as u128, cap as u128));
    }
    for (j, v) in frag.vars.iter().enumerate() {
        out.push(Formula::Var(v.clone()), Node::Var(j), 0, 1 << j);
    }
    for (c, conn) in signature.connectives().iter().enumerate() {
        if conn.arity() == 0 {
            out.push(
                Formula::constant(conn.name()),
                Node::App(c, Vec::new()),
                0,
                0,
            );
        }
    }

    let mut below = 0usize;
    for d in 1..=frag.depth {
        let upto = out.len();
        let mut incoming: u128 = 0;
        for conn in signature.connectives() {
            let k = conn.arity() as u32;
            if k == 0 {
                continue;
            }
            let all = (upto as u128).checked_pow(k);
            let old = (below as u128).checked_pow(k).unwrap_or(0);
            incoming = match all {
                Some(all) => incoming.saturating_add(all - old),
                None => u128::MAX,
            };
        }
        let total = (upto as u128).saturating_add(incoming);
        if total > cap as u128 {
            return Err(Error::cap("fragment formulas", total, cap as u128));
        }
        for (c, conn) in signature.connectives().iter().enumerate() {
            let k = conn.arity();
            if k == 0 {
                continue;
            }
            let mut tuple = vec![0usize; k];
            loop {
                if tuple.iter().any(|&i| i >= below) {
                    let formula = Formula::App(
                        conn.name_arc().clone(),
                        tuple.iter().map(|&i| out.formulas[i].clone()).collect(),
                    );
                    let mask = tuple.iter().fold(0, |m, &i| m | out.var_masks[i]);
                    out.push(formula, Node::App(c, tuple.clone()), d, mask);
                }
                if !odometer_step(&mut tuple, upto) {
                    break;
                }
            }
        }
        below = upto;
    }
    Ok(out)
}

/// Odometer step over `0..radix` digits, last digit fastest.
pub(crate) fn odometer_step(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

impl FragmentListing {
    fn push(&mut self, formula: Formula, node: Node, depth: usize, mask: u64) {
        self.index.insert(formula.clone(), self.formulas.len());
        self.formulas.push(formula);
        self.nodes.push(node);
        self.depths.push(depth);
        self.var_masks.push(mask);
    }
}
