//! Named matrices and atlases: the built-ins `CL2`, `L3`, `K3`, and the
//! line-oriented matrix file format.
//!
//! ```text
//! # comments run to the end of the line
//! signature imp/2 neg/1
//! algebra B2 carrier 2
//! op B2 neg 0:1 1:0
//! op B2 imp 0,0:1 0,1:1 1,0:0 1,1:1
//! matrix T algebra B2 filter 1
//! matrix E algebra B2 filter -
//! atlas NU algebra B2 filters {1};{}
//! ```
//!
//! Tuples list the arguments, comma separated (a run of single digits such
//! as `01` is also accepted); nullary connectives are written `op A c :v`.
//! A table may be spread over several `op` lines.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::atlas::Atlas;
use crate::error::{Error, Result};
use crate::language::{is_identifier, odometer_step, Signature};
use crate::matrix::{Element, Filter, FiniteAlgebra, FiniteMatrix, MatrixClass};

/// The built-in matrices, over the signature `neg/1 and/2 or/2 imp/2`.
pub mod builtin {
    use super::*;

    pub const NAMES: [&str; 3] = ["CL2", "L3", "K3"];

    pub fn signature() -> Arc<Signature> {
        Arc::new(
            Signature::new([("neg", 1), ("and", 2), ("or", 2), ("imp", 2)])
                .expect("valid signature"),
        )
    }

    /// The two-element Boolean algebra.
    pub fn b2() -> Arc<FiniteAlgebra> {
        Arc::new(
            FiniteAlgebra::from_fn(signature(), 2, |op, a| match op {
                "neg" => 1 - a[0],
                "and" => a[0].min(a[1]),
                "or" => a[0].max(a[1]),
                _ => (1 - a[0]).max(a[1]),
            })
            .expect("valid tables"),
        )
    }

    /// Łukasiewicz operations on {0, 1, 2}.
    pub fn lukasiewicz3() -> Arc<FiniteAlgebra> {
        Arc::new(
            FiniteAlgebra::from_fn(signature(), 3, |op, a| match op {
                "neg" => 2 - a[0],
                "and" => a[0].min(a[1]),
                "or" => a[0].max(a[1]),
                _ => 2usize.min(2 - a[0] + a[1]),
            })
            .expect("valid tables"),
        )
    }

    /// Strong Kleene operations on {0, 1, 2}; x → y is max(2 − x, y).
    pub fn kleene3() -> Arc<FiniteAlgebra> {
        Arc::new(
            FiniteAlgebra::from_fn(signature(), 3, |op, a| match op {
                "neg" => 2 - a[0],
                "and" => a[0].min(a[1]),
                "or" => a[0].max(a[1]),
                _ => (2 - a[0]).max(a[1]),
            })
            .expect("valid tables"),
        )
    }

    /// Classical logic: B2 with D = {1}.
    pub fn cl2() -> FiniteMatrix {
        FiniteMatrix::new(b2(), [1]).expect("valid filter")
    }

    /// Łukasiewicz three-valued logic, D = {2}.
    pub fn l3() -> FiniteMatrix {
        FiniteMatrix::new(lukasiewicz3(), [2]).expect("valid filter")
    }

    /// Strong Kleene logic, D = {2}.
    pub fn k3() -> FiniteMatrix {
        FiniteMatrix::new(kleene3(), [2]).expect("valid filter")
    }

    /// ⟨B2, ∅⟩.
    pub fn empty_b2() -> FiniteMatrix {
        FiniteMatrix::new(b2(), []).expect("valid filter")
    }

    pub fn get(name: &str) -> Option<FiniteMatrix> {
        match name {
            "CL2" => Some(cl2()),
            "L3" => Some(l3()),
            "K3" => Some(k3()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Matrix(FiniteMatrix),
    Atlas(Atlas),
}

impl Entry {
    /// A matrix as a one-member class; an atlas as its induced class.
    pub fn to_class(&self) -> MatrixClass {
        match self {
            Entry::Matrix(m) => MatrixClass::single(m.clone()),
            Entry::Atlas(a) => a.to_class(),
        }
    }
}

/// Named matrices and atlases. Built-ins are always present.
#[derive(Debug, Clone)]
pub struct Catalog {
    signature: Option<Arc<Signature>>,
    algebras: Vec<(String, Arc<FiniteAlgebra>)>,
    entries: Vec<(String, Entry, Option<String>)>,
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog::builtins()
    }
}

impl Catalog {
    pub fn builtins() -> Self {
        let entries = builtin::NAMES
            .iter()
            .map(|&n| {
                let m = builtin::get(n).expect("built-in");
                (n.to_string(), Entry::Matrix(m), None)
            })
            .collect();
        Catalog {
            signature: None,
            algebras: Vec::new(),
            entries,
        }
    }

    /// Parses a matrix file; its definitions are added to the built-ins.
    pub fn parse(text: &str) -> Result<Self> {
        Parser::default().run(text)
    }

    /// The signature declared by the file, if any.
    pub fn signature(&self) -> Option<&Arc<Signature>> {
        self.signature.as_ref()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _, _)| n.as_str())
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries
            .iter()
            .find(|(n, _, _)| n == name)
            .map(|(_, e, _)| e)
    }

    pub fn algebra(&self, name: &str) -> Option<&Arc<FiniteAlgebra>> {
        self.algebras
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| a)
    }

    /// The class made of all members of the named entries, in order.
    pub fn resolve<S: AsRef<str>>(&self, names: &[S]) -> Result<MatrixClass> {
        let mut members = Vec::new();
        for name in names {
            let name = name.as_ref();
            let entry = self
                .get(name)
                .ok_or_else(|| Error::UnknownName(name.to_string()))?;
            members.extend(entry.to_class().members().iter().cloned());
        }
        MatrixClass::new(members)
    }

    /// The file definitions in matrix file syntax. Built-ins are omitted;
    /// parsing the output gives back the same catalog.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(sig) = &self.signature {
            let _ = writeln!(out, "signature {sig}");
        }
        for (name, alg) in &self.algebras {
            let _ = writeln!(out, "algebra {name} carrier {}", alg.carrier());
            for (op, conn) in alg.signature().connectives().iter().enumerate() {
                let mut line = format!("op {name} {}", conn.name());
                let mut args = vec![0; conn.arity()];
                for &value in alg.table(op) {
                    let tuple: Vec<String> = args.iter().map(|a: &usize| a.to_string()).collect();
                    let _ = write!(line, " {}:{value}", tuple.join(","));
                    odometer_step(&mut args, alg.carrier());
                }
                out.push_str(&line);
                out.push('\n');
            }
        }
        for (name, entry, alg) in &self.entries {
            let Some(alg) = alg else { continue };
            match entry {
                Entry::Matrix(m) => {
                    let _ = writeln!(
                        out,
                        "matrix {name} algebra {alg} filter {}",
                        filter_text(m.filter())
                    );
                }
                Entry::Atlas(a) => {
                    let filters: Vec<String> = a.filters().iter().map(|f| f.to_string()).collect();
                    let _ = writeln!(
                        out,
                        "atlas {name} algebra {alg} filters {}",
                        filters.join(";")
                    );
                }
            }
        }
        out
    }
}

fn filter_text(f: &Filter) -> String {
    if f.is_empty() {
        "-".to_string()
    } else {
        f.elements()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Reads and parses a matrix file.
pub fn load_matrix_file(path: impl AsRef<Path>) -> Result<Catalog> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Catalog::parse(&text)
}

struct PendingAlgebra {
    name: String,
    line: usize,
    carrier: usize,
    tables: Vec<BTreeMap<Vec<Element>, (Element, usize)>>,
}

enum PendingEntry {
    Matrix { filter: Vec<Element> },
    Atlas { filters: Vec<Vec<Element>> },
}

#[derive(Default)]
struct Parser {
    signature: Option<Arc<Signature>>,
    algebras: Vec<PendingAlgebra>,
    entries: Vec<(String, usize, String, PendingEntry)>,
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::MatrixFile {
        line,
        message: message.into(),
    }
}

fn number(line: usize, s: &str, what: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| err(line, format!("expected {what}, found `{s}`")))
}

fn element_list(line: usize, s: &str) -> Result<Vec<Element>> {
    let s = s.trim();
    if s.is_empty() || s == "-" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|e| number(line, e, "an element"))
        .collect()
}

impl Parser {
    fn run(mut self, text: &str) -> Result<Catalog> {
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let words: Vec<&str> = content.split_whitespace().collect();
            match words[0] {
                "signature" => self.signature_line(line, &content["signature".len()..])?,
                "algebra" => self.algebra_line(line, &words)?,
                "op" => self.op_line(line, &words)?,
                "matrix" => self.matrix_line(line, &words)?,
                "atlas" => self.atlas_line(line, &words)?,
                other => return Err(err(line, format!("unknown directive `{other}`"))),
            }
        }
        self.finish()
    }

    fn signature_line(&mut self, line: usize, rest: &str) -> Result<()> {
        if self.signature.is_some() {
            return Err(err(line, "second `signature` line"));
        }
        if !self.algebras.is_empty() {
            return Err(err(line, "`signature` must precede the algebras"));
        }
        let sig = Signature::parse(rest).map_err(|e| err(line, e.to_string()))?;
        self.signature = Some(Arc::new(sig));
        Ok(())
    }

    fn algebra_line(&mut self, line: usize, words: &[&str]) -> Result<()> {
        let [_, name, "carrier", n] = words else {
            return Err(err(line, "expected `algebra NAME carrier N`"));
        };
        let sig = self
            .signature
            .as_ref()
            .ok_or_else(|| err(line, "`algebra` before `signature`"))?;
        check_name(line, name)?;
        if self.algebras.iter().any(|a| a.name == *name) {
            return Err(err(line, format!("duplicate algebra name `{name}`")));
        }
        let carrier = number(line, n, "a carrier size")?;
        if carrier == 0 {
            return Err(err(line, "the carrier must be nonempty"));
        }
        self.algebras.push(PendingAlgebra {
            name: name.to_string(),
            line,
            carrier,
            tables: vec![BTreeMap::new(); sig.len()],
        });
        Ok(())
    }

    fn op_line(&mut self, line: usize, words: &[&str]) -> Result<()> {
        if words.len() < 3 {
            return Err(err(
                line,
                "expected `op ALGEBRA CONNECTIVE tuple:value ...`",
            ));
        }
        let sig = self
            .signature
            .clone()
            .ok_or_else(|| err(line, "`op` before `signature`"))?;
        let alg = self
            .algebras
            .iter_mut()
            .find(|a| a.name == words[1])
            .ok_or_else(|| err(line, format!("unknown algebra `{}`", words[1])))?;
        let conn = words[2];
        let op = sig
            .position(conn)
            .ok_or_else(|| err(line, format!("`{conn}` is not in the signature")))?;
        let arity = sig.connectives()[op].arity();
        for item in &words[3..] {
            let (tuple, value) = item
                .split_once(':')
                .ok_or_else(|| err(line, format!("expected `tuple:value`, found `{item}`")))?;
            let args: Vec<Element> = if arity == 0 {
                if !tuple.is_empty() {
                    return Err(err(line, format!("`{conn}` is nullary; write `:{value}`")));
                }
                Vec::new()
            } else if tuple.contains(',') || arity == 1 {
                element_list(line, tuple)?
            } else if tuple.len() == arity && tuple.bytes().all(|b| b.is_ascii_digit()) {
                tuple.bytes().map(|b| (b - b'0') as usize).collect()
            } else {
                return Err(err(
                    line,
                    format!("cannot read tuple `{tuple}` for `{conn}`"),
                ));
            };
            if args.len() != arity {
                return Err(err(
                    line,
                    format!(
                        "`{conn}` has arity {arity}, tuple `{tuple}` has {}",
                        args.len()
                    ),
                ));
            }
            let value = number(line, value, "a value")?;
            if let Some(&bad) = args.iter().chain([&value]).find(|&&e| e >= alg.carrier) {
                return Err(err(
                    line,
                    format!("element {bad} is outside the carrier of `{}`", alg.name),
                ));
            }
            if let Some((old, _)) = alg.tables[op].insert(args.clone(), (value, line)) {
                if old != value {
                    return Err(err(
                        line,
                        format!("`{conn}` at ({}) given two values", join(&args)),
                    ));
                }
            }
        }
        Ok(())
    }

    fn matrix_line(&mut self, line: usize, words: &[&str]) -> Result<()> {
        let (name, alg, rest) = match words {
            [_, name, "algebra", alg, "filter", rest @ ..] if rest.len() <= 1 => (name, alg, rest),
            _ => {
                return Err(err(
                    line,
                    "expected `matrix NAME algebra ALGEBRA filter e1,e2,...`",
                ))
            }
        };
        let filter = element_list(line, rest.first().copied().unwrap_or("-"))?;
        self.add_entry(line, name, alg, PendingEntry::Matrix { filter })
    }

    fn atlas_line(&mut self, line: usize, words: &[&str]) -> Result<()> {
        let (name, alg, rest) = match words {
            [_, name, "algebra", alg, "filters", rest @ ..] if !rest.is_empty() => {
                (name, alg, rest)
            }
            _ => {
                return Err(err(
                    line,
                    "expected `atlas NAME algebra ALGEBRA filters {..};{..}`",
                ))
            }
        };
        let spec = rest.concat();
        let filters = spec
            .split(';')
            .map(|part| {
                let inner = part
                    .trim()
                    .strip_prefix('{')
                    .and_then(|p| p.strip_suffix('}'))
                    .ok_or_else(|| err(line, format!("expected `{{...}}`, found `{part}`")))?;
                element_list(line, inner)
            })
            .collect::<Result<Vec<_>>>()?;
        self.add_entry(line, name, alg, PendingEntry::Atlas { filters })
    }

    fn add_entry(&mut self, line: usize, name: &str, alg: &str, entry: PendingEntry) -> Result<()> {
        check_name(line, name)?;
        if builtin::NAMES.contains(&name) || self.entries.iter().any(|(n, _, _, _)| n == name) {
            return Err(err(line, format!("duplicate name `{name}`")));
        }
        if !self.algebras.iter().any(|a| a.name == alg) {
            return Err(err(line, format!("unknown algebra `{alg}`")));
        }
        self.entries
            .push((name.to_string(), line, alg.to_string(), entry));
        Ok(())
    }

    fn finish(self) -> Result<Catalog> {
        let mut catalog = Catalog::builtins();
        catalog.signature = self.signature.clone();
        let mut built: HashMap<String, Arc<FiniteAlgebra>> = HashMap::new();
        for pending in &self.algebras {
            let sig = self
                .signature
                .clone()
                .expect("algebras follow the signature");
            let mut tables = Vec::with_capacity(sig.len());
            for (conn, entries) in sig.connectives().iter().zip(&pending.tables) {
                let mut args = vec![0; conn.arity()];
                let mut table = Vec::new();
                loop {
                    match entries.get(&args) {
                        Some(&(v, _)) => table.push(v),
                        None => {
                            return Err(err(
                                pending.line,
                                format!(
                                    "algebra `{}`: table of `{}` has no entry for ({})",
                                    pending.name,
                                    conn.name(),
                                    join(&args)
                                ),
                            ))
                        }
                    }
                    if !odometer_step(&mut args, pending.carrier) {
                        break;
                    }
                }
                tables.push(table);
            }
            let alg = FiniteAlgebra::new(sig, pending.carrier, tables)
                .map_err(|e| err(pending.line, e.to_string()))?;
            let alg = Arc::new(alg);
            built.insert(pending.name.clone(), alg.clone());
            catalog.algebras.push((pending.name.clone(), alg));
        }
        for (name, line, alg_name, entry) in self.entries {
            let alg = built[&alg_name].clone();
            let entry = match entry {
                PendingEntry::Matrix { filter } => Entry::Matrix(
                    FiniteMatrix::new(alg, filter).map_err(|e| err(line, e.to_string()))?,
                ),
                PendingEntry::Atlas { filters } => Entry::Atlas(
                    crate::atlas::make_atlas(alg, filters).map_err(|e| err(line, e.to_string()))?,
                ),
            };
            catalog.entries.push((name, entry, Some(alg_name)));
        }
        Ok(catalog)
    }
}

fn check_name(line: usize, name: &str) -> Result<()> {
    if is_identifier(name) {
        Ok(())
    } else {
        Err(err(line, format!("`{name}` is not a valid name")))
    }
}

fn join(args: &[Element]) -> String {
    args.iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
