#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use matcon::catalog::builtin;
use matcon::matrix::{FiniteAlgebra, FiniteMatrix, MatrixClass};
use matcon::{parse_formula, Formula, FormulaSet, Language, Signature, Var};

pub const FULL: &str = "neg/1 and/2 or/2 imp/2";

pub fn lang(sig: &str, vars: &[&str]) -> Language {
    Language::new(
        Arc::new(Signature::parse(sig).unwrap()),
        vars.iter().map(Var::new),
    )
    .unwrap()
}

pub fn full_lang() -> Language {
    lang(FULL, &["p", "q", "r"])
}

pub fn f(text: &str, l: &Language) -> Formula {
    parse_formula(text, l).unwrap()
}

pub fn set(texts: &[&str], l: &Language) -> FormulaSet {
    texts.iter().map(|t| f(t, l)).collect()
}

/// Logics computed arithmetically, without tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Logic {
    Cl2,
    L3,
    K3,
    EmptyB2,
}

impl Logic {
    pub fn carrier(self) -> usize {
        match self {
            Logic::Cl2 | Logic::EmptyB2 => 2,
            Logic::L3 | Logic::K3 => 3,
        }
    }

    pub fn designated(self, v: usize) -> bool {
        match self {
            Logic::Cl2 => v == 1,
            Logic::L3 | Logic::K3 => v == 2,
            Logic::EmptyB2 => false,
        }
    }

    pub fn op(self, name: &str, a: &[usize]) -> usize {
        let top = self.carrier() - 1;
        match (name, self) {
            ("neg", _) => top - a[0],
            ("and", _) => a[0].min(a[1]),
            ("or", _) => a[0].max(a[1]),
            ("imp", Logic::L3) => top.min(top - a[0] + a[1]),
            ("imp", _) => (top - a[0]).max(a[1]),
            _ => panic!("no operation {name}"),
        }
    }

    pub fn matrix(self) -> FiniteMatrix {
        match self {
            Logic::Cl2 => builtin::cl2(),
            Logic::L3 => builtin::l3(),
            Logic::K3 => builtin::k3(),
            Logic::EmptyB2 => builtin::empty_b2(),
        }
    }

    pub fn value(self, f: &Formula, v: &BTreeMap<Var, usize>) -> usize {
        match f {
            Formula::Var(x) => v[x],
            Formula::App(c, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.value(a, v)).collect();
                self.op(c, &vals)
            }
        }
    }

    /// Straight enumeration of every assignment to the occurring variables.
    pub fn entails(self, xs: &FormulaSet, a: &Formula) -> bool {
        let mut vars = std::collections::BTreeSet::new();
        for g in xs.iter().chain([a]) {
            vars.extend(g.variables());
        }
        let vars: Vec<Var> = vars.into_iter().collect();
        self.all_assignments(&vars, 0, &mut BTreeMap::new(), &|v| {
            !xs.iter().all(|x| self.designated(self.value(x, v)))
                || self.designated(self.value(a, v))
        })
    }

    fn all_assignments(
        self,
        vars: &[Var],
        i: usize,
        cur: &mut BTreeMap<Var, usize>,
        ok: &dyn Fn(&BTreeMap<Var, usize>) -> bool,
    ) -> bool {
        if i == vars.len() {
            return ok(cur);
        }
        for e in 0..self.carrier() {
            cur.insert(vars[i].clone(), e);
            if !self.all_assignments(vars, i + 1, cur, ok) {
                return false;
            }
        }
        true
    }

    /// Some assignment designates all of `xs`.
    pub fn satisfiable(self, xs: &FormulaSet) -> bool {
        let vars: Vec<Var> = matcon::variables_of(xs).into_iter().collect();
        !self.all_assignments(&vars, 0, &mut BTreeMap::new(), &|v| {
            !xs.iter().all(|x| self.designated(self.value(x, v)))
        })
    }
}

/// B2 reduced to `imp`/`neg`, as an atlas-class with filters {1} and ∅.
pub fn nu_class() -> MatrixClass {
    let b2 = Arc::new(builtin::b2().restrict(&["imp", "neg"]).unwrap());
    MatrixClass::new(vec![
        FiniteMatrix::new(b2.clone(), [1]).unwrap(),
        FiniteMatrix::new(b2, []).unwrap(),
    ])
    .unwrap()
}

pub fn nu_lang() -> Language {
    Language::new(
        nu_class().signature().clone(),
        [Var::new("p"), Var::new("q")],
    )
    .unwrap()
}

/// Two matrices over `f/1 g/1`, each satisfying only one of f and g.
pub fn fg_class() -> MatrixClass {
    let sig = Arc::new(Signature::parse("f/1 g/1").unwrap());
    let a1 =
        FiniteAlgebra::from_fn(sig.clone(), 2, |op, a| if op == "f" { a[0] } else { 0 }).unwrap();
    let a2 = FiniteAlgebra::from_fn(sig, 2, |op, a| if op == "g" { a[0] } else { 0 }).unwrap();
    MatrixClass::new(vec![
        FiniteMatrix::new(Arc::new(a1), [1]).unwrap(),
        FiniteMatrix::new(Arc::new(a2), [1]).unwrap(),
    ])
    .unwrap()
}

pub fn fg_lang() -> Language {
    Language::new(
        fg_class().signature().clone(),
        [Var::new("p"), Var::new("q")],
    )
    .unwrap()
}
