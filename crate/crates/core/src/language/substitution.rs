use std::collections::BTreeMap;
use std::fmt;

use super::{Formula, Var};

/// A finite-support substitution, identity outside its support. Application
/// is simultaneous.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution {
    map: BTreeMap<Var, Formula>,
}

impl Substitution {
    pub fn identity() -> Self {
        Substitution::default()
    }

    pub fn insert(&mut self, v: Var, f: Formula) {
        if f.as_var() == Some(&v) {
            self.map.remove(&v);
        } else {
            self.map.insert(v, f);
        }
    }

    pub fn get(&self, v: &Var) -> Option<&Formula> {
        self.map.get(v)
    }

    pub fn support(&self) -> impl Iterator<Item = &Var> {
        self.map.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Formula)> {
        self.map.iter()
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, f: &Formula) -> Formula {
        match f {
            Formula::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| f.clone()),
            Formula::App(name, args) => {
                Formula::App(name.clone(), args.iter().map(|a| self.apply(a)).collect())
            }
        }
    }
}

impl FromIterator<(Var, Formula)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Formula)>>(iter: I) -> Self {
        let mut s = Substitution::identity();
        for (v, f) in iter {
            s.insert(v, f);
        }
        s
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} -> {t}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn apply_substitution(sigma: &Substitution, f: &Formula) -> Formula {
    sigma.apply(f)
}
