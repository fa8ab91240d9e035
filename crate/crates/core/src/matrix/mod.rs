//! Sparse matrices: Matrix Market parsing, the SuiteSparse fetch client and
//! the bundled desk-scale set.

mod collection;
pub mod desk;
mod market;

pub use collection::{
    default_cache_dir, fetch_collection, refresh_index, CollectionIndex, Download, FetchOptions, FetchOutcome,
    HttpTransport, IndexRecord, Manifest, ManifestEntry, Transport, CACHE_ENV, DEFAULT_BASE_URL, INDEX_FILE,
    STATS_URL,
};
pub use market::{parse_matrix_market, read_matrix_market};

use crate::exact::ExtendedReal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    General,
    Symmetric,
    Skew,
}

impl Symmetry {
    pub fn as_str(&self) -> &'static str {
        match self {
            Symmetry::General => "general",
            Symmetry::Symmetric => "symmetric",
            Symmetry::Skew => "skew-symmetric",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Integer,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    /// Zero-based.
    pub row: usize,
    pub col: usize,
    pub value: ExtendedReal,
}

/// Stored entries of a matrix. Symmetric and skew-symmetric matrices keep
/// only the stored triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    /// `group/name`.
    pub id: String,
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    pub symmetry: Symmetry,
    pub entries: Vec<Entry>,
}

impl SparseMatrix {
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn values(&self) -> Vec<ExtendedReal> {
        self.entries.iter().map(|e| e.value.clone()).collect()
    }

    /// Largest stored magnitude, `Zero` for an empty or all-zero matrix.
    pub fn max_abs(&self) -> ExtendedReal {
        let mut best = ExtendedReal::Zero;
        for e in &self.entries {
            let a = e.value.abs();
            if a.partial_cmp_real(&best) == Some(std::cmp::Ordering::Greater) {
                best = a;
            }
        }
        best
    }
}
