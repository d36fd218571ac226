/// Ceilings on the size of exhaustive computations. Exceeding one is an
/// explicit [`Error::ResourceCap`](crate::Error::ResourceCap), never a silent
/// truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Formulas in one enumerated fragment.
    pub max_fragment: usize,
    /// Valuations enumerated for one entailment or truth-set family.
    pub max_valuations: u128,
    /// Entries across all operation tables of a constructed product algebra.
    pub max_table_entries: u128,
    /// Candidate sets examined while computing theories.
    pub max_theories: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_fragment: 5_000,
            max_valuations: 10_000_000,
            max_table_entries: 10_000_000,
            max_theories: 1 << 20,
        }
    }
}
