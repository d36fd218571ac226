//! Line-oriented reports: an ordered list of `key`/`value` records rendered
//! either as aligned text or as `key<TAB>value` lines.

use std::fmt::Write as _;

use clap::ValueEnum;
use matcon::{print_set, FormulaSet, SearchStats, Verdict, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Tsv,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    records: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.records.push((key.into(), value.to_string()));
    }

    pub fn records(&self) -> &[(String, String)] {
        &self.records
    }

    /// The first value recorded under `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.records
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn stats(&mut self, prefix: &str, stats: &SearchStats) {
        self.push(
            format!("{prefix}candidates_examined"),
            stats.candidates_examined,
        );
        self.push(format!("{prefix}space_size"), stats.space_size);
        self.push(format!("{prefix}exhaustive"), stats.exhaustive);
    }

    pub fn verdict(&mut self, prefix: &str, v: &Verdict) {
        self.push(format!("{prefix}outcome"), v.outcome);
        if let Some(w) = &v.witness {
            self.witness(&format!("{prefix}witness."), w);
        }
        self.stats(prefix, &v.stats);
        for note in &v.notes {
            self.push(format!("{prefix}note"), note);
        }
    }

    pub fn witness(&mut self, prefix: &str, w: &Witness) {
        let key = |k: &str| format!("{prefix}{k}");
        match w {
            Witness::Uniform { x, y, alpha } => {
                self.push(key("x"), print_set(x));
                self.push(key("y"), print_set(y));
                self.push(key("alpha"), alpha);
            }
            Witness::Couniform { family } | Witness::CouniformClass { family } => {
                self.family(prefix, family);
            }
            Witness::UniformBundle {
                x,
                y,
                chart_i,
                chart_j,
                z_i,
                z_j,
            } => {
                self.push(key("x"), print_set(x));
                self.push(key("y"), print_set(y));
                self.push(key("chart_i"), chart_i);
                self.push(key("chart_j"), chart_j);
                self.push(key("z_i"), print_set(z_i));
                self.push(key("z_j"), print_set(z_j));
            }
            Witness::Disagreement {
                x,
                alpha,
                base,
                lifted,
            } => {
                self.push(key("x"), print_set(x));
                self.push(key("alpha"), alpha);
                self.push(key("base"), base);
                self.push(key("lifted"), lifted);
            }
            Witness::MissingPattern { x, alpha } => {
                self.push(key("x"), print_set(x));
                self.push(key("alpha"), alpha);
            }
            Witness::Nested { check, witness } => {
                self.push(key("check"), check);
                self.witness(prefix, witness);
            }
        }
    }

    fn family(&mut self, prefix: &str, family: &[FormulaSet]) {
        self.push(format!("{prefix}sets"), family.len());
        for (i, x) in family.iter().enumerate() {
            self.push(format!("{prefix}x{}", i + 1), print_set(x));
        }
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Tsv => {
                for (k, v) in &self.records {
                    let _ = writeln!(out, "{k}\t{v}");
                }
            }
            Format::Text => {
                let width = self.records.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.records {
                    let _ = writeln!(out, "{k:<width$}  {v}");
                }
            }
        }
        out
    }
}
