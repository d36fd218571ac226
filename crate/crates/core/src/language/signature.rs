use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A connective symbol together with its arity. Arity 0 is a propositional
/// constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Connective {
    name: Arc<str>,
    arity: usize,
}

impl Connective {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub(crate) fn name_arc(&self) -> &Arc<str> {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// Identifiers start with a letter or `_` and continue with letters, digits,
/// `_` or `'`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if is_ident_start(c) => chars.all(is_ident_continue),
        _ => false,
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// An ordered list of connectives. Declaration order is significant: it fixes
/// fragment enumeration order.
#[derive(Clone)]
pub struct Signature {
    connectives: Vec<Connective>,
    index: HashMap<Arc<str>, usize>,
}

impl Signature {
    pub fn new<S: AsRef<str>>(connectives: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        let mut index = HashMap::new();
        for (name, arity) in connectives {
            let name = name.as_ref();
            if !is_identifier(name) {
                return Err(Error::InvalidSignature(format!(
                    "`{name}` is not a valid identifier"
                )));
            }
            let name: Arc<str> = Arc::from(name);
            if index.insert(name.clone(), list.len()).is_some() {
                return Err(Error::InvalidSignature(format!(
                    "connective `{name}` declared twice"
                )));
            }
            list.push(Connective { name, arity });
        }
        Ok(Signature {
            connectives: list,
            index,
        })
    }

    /// Parses `name/arity` items, e.g. `"neg/1 and/2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut items = Vec::new();
        for item in text.split(|c: char| c.is_whitespace() || c == ',') {
            if item.is_empty() {
                continue;
            }
            let (name, arity) = item.split_once('/').ok_or_else(|| {
                Error::InvalidSignature(format!("expected `name/arity`, found `{item}`"))
            })?;
            let arity = arity
                .parse::<usize>()
                .map_err(|_| Error::InvalidSignature(format!("bad arity in `{item}`")))?;
            items.push((name.to_string(), arity));
        }
        Signature::new(items)
    }

    pub fn connectives(&self) -> &[Connective] {
        &self.connectives
    }

    pub fn len(&self) -> usize {
        self.connectives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.connectives.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn get(&self, name: &str) -> Option<&Connective> {
        self.position(name).map(|i| &self.connectives[i])
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.get(name).map(Connective::arity)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// The sub-signature keeping only the named connectives, in this
    /// signature's order.
    pub fn restrict(&self, names: &[&str]) -> Result<Signature> {
        for name in names {
            if !self.contains(name) {
                return Err(Error::SignatureMismatch(format!(
                    "connective `{name}` is not in the signature"
                )));
            }
        }
        Signature::new(
            self.connectives
                .iter()
                .filter(|c| names.contains(&c.name()))
                .map(|c| (c.name().to_string(), c.arity)),
        )
    }
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.connectives == other.connectives
    }
}

impl Eq for Signature {}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Signature({self})")
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.connectives.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_name_arity_list() {
        let sig = Signature::parse("neg/1 and/2, bot/0").unwrap();
        assert_eq!(sig.len(), 3);
        assert_eq!(sig.arity("bot"), Some(0));
        assert_eq!(sig.position("and"), Some(1));
        assert_eq!(sig.to_string(), "neg/1 and/2 bot/0");
    }

    #[test]
    fn rejects_duplicates_and_bad_names() {
        assert!(Signature::parse("neg/1 neg/2").is_err());
        assert!(Signature::parse("1x/1").is_err());
        assert!(Signature::parse("neg").is_err());
        assert!(Signature::parse("neg/x").is_err());
    }

    #[test]
    fn restriction_keeps_order() {
        let sig = Signature::parse("neg/1 and/2 or/2 imp/2").unwrap();
        let sub = sig.restrict(&["imp", "neg"]).unwrap();
        assert_eq!(sub.to_string(), "neg/1 imp/2");
        assert!(sig.restrict(&["xor"]).is_err());
    }
}
