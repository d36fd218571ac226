use std::sync::Arc;

use crate::error::{Error, Result};
use crate::language::Signature;

/// Carrier elements are `0..n`.
pub type Element = usize;

/// A finite algebra given by total operation tables.
///
/// The table of a `k`-ary connective has `n^k` entries; the argument tuple
/// `(a1, …, ak)` sits at index `a1·n^(k-1) + … + ak`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    signature: Arc<Signature>,
    carrier: usize,
    tables: Vec<Vec<Element>>,
}

pub(crate) fn table_len(carrier: usize, arity: usize) -> Option<usize> {
    carrier.checked_pow(u32::try_from(arity).ok()?)
}

impl FiniteAlgebra {
    pub fn new(
        signature: Arc<Signature>,
        carrier: usize,
        tables: Vec<Vec<Element>>,
    ) -> Result<Self> {
        if carrier == 0 {
            return Err(Error::InvalidAlgebra("the carrier must be nonempty".into()));
        }
        if tables.len() != signature.len() {
            return Err(Error::InvalidAlgebra(format!(
                "{} tables for {} connectives",
                tables.len(),
                signature.len()
            )));
        }
        for (conn, table) in signature.connectives().iter().zip(&tables) {
            let want = table_len(carrier, conn.arity()).ok_or_else(|| {
                Error::InvalidAlgebra(format!("table of `{}` is too large", conn.name()))
            })?;
            if table.len() != want {
                return Err(Error::InvalidAlgebra(format!(
                    "table of `{}` has {} entries, expected {want}",
                    conn.name(),
                    table.len()
                )));
            }
            if let Some(bad) = table.iter().find(|&&e| e >= carrier) {
                return Err(Error::InvalidAlgebra(format!(
                    "table of `{}` contains {bad}, outside 0..{carrier}",
                    conn.name()
                )));
            }
        }
        Ok(FiniteAlgebra {
            signature,
            carrier,
            tables,
        })
    }

    /// Tabulates `op(name, args)` for every connective and argument tuple.
    pub fn from_fn(
        signature: Arc<Signature>,
        carrier: usize,
        op: impl Fn(&str, &[Element]) -> Element,
    ) -> Result<Self> {
        let mut tables = Vec::with_capacity(signature.len());
        for conn in signature.connectives() {
            let len = table_len(carrier, conn.arity()).ok_or_else(|| {
                Error::InvalidAlgebra(format!("table of `{}` is too large", conn.name()))
            })?;
            let mut args = vec![0; conn.arity()];
            let mut table = Vec::with_capacity(len);
            for _ in 0..len {
                table.push(op(conn.name(), &args));
                crate::language::odometer_step(&mut args, carrier);
            }
            tables.push(table);
        }
        FiniteAlgebra::new(signature, carrier, tables)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn table(&self, op: usize) -> &[Element] {
        &self.tables[op]
    }

    /// Applies the connective at signature position `op`.
    pub fn apply(&self, op: usize, args: &[Element]) -> Element {
        let idx = args.iter().fold(0, |acc, &a| acc * self.carrier + a);
        self.tables[op][idx]
    }

    /// Position of `name` in the signature, checking the arity it is used at.
    pub fn op_index(&self, name: &str, arity: usize) -> Result<usize> {
        match self.signature.position(name) {
            Some(i) if self.signature.connectives()[i].arity() == arity => Ok(i),
            Some(i) => Err(Error::SignatureMismatch(format!(
                "`{name}` has arity {} in the algebra, used with {arity}",
                self.signature.connectives()[i].arity()
            ))),
            None => Err(Error::SignatureMismatch(format!(
                "the algebra does not interpret `{name}`"
            ))),
        }
    }

    /// The reduct to the named connectives.
    pub fn restrict(&self, names: &[&str]) -> Result<FiniteAlgebra> {
        let signature = Arc::new(self.signature.restrict(names)?);
        let tables = signature
            .connectives()
            .iter()
            .map(|c| self.tables[self.signature.position(c.name()).expect("restricted")].clone())
            .collect();
        FiniteAlgebra::new(signature, self.carrier, tables)
    }
}
