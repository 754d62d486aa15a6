//! JSON interchange formats. All indices are 1-based.

use serde::{Deserialize, Serialize};

use crate::exact::Rational;

/// Sparse vector as `[[k, "p/q"], ...]`.
pub type SparseEntries = Vec<(usize, Rational)>;

/// `{dim, names[], brackets: [[i, j, [[k, "p/q"], ...]], ...]}` with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    pub names: Vec<String>,
    pub brackets: Vec<(usize, usize, SparseEntries)>,
}

/// An algebra referenced by catalog name or given inline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Name(String),
    Inline(AlgebraFile),
}

/// `{"algebra": ..., "products": [[i, j, [[k, "p/q"], ...]], ...]}` with `i ≤ j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraRef>,
    pub products: Vec<(usize, usize, SparseEntries)>,
}
