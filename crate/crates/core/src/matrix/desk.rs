//! Twenty small synthetic matrices shipped with the crate, covering the
//! magnitude regimes that separate the formats: tiny rate constants, large
//! stiffness and economic values, entries beyond every 8-bit range and
//! ordinary well-scaled test matrices.

use super::{parse_matrix_market, CollectionIndex, SparseMatrix};
use crate::Result;

pub const INDEX_CSV: &str = include_str!("../../data/desk/index.csv");

const FILES: [(&str, &str); 20] = [
    ("cauchy8", include_str!("../../data/desk/cauchy8.mtx")),
    ("chemistry12", include_str!("../../data/desk/chemistry12.mtx")),
    ("circuit20", include_str!("../../data/desk/circuit20.mtx")),
    ("densesym6", include_str!("../../data/desk/densesym6.mtx")),
    ("economic9", include_str!("../../data/desk/economic9.mtx")),
    ("extreme10", include_str!("../../data/desk/extreme10.mtx")),
    ("frank10", include_str!("../../data/desk/frank10.mtx")),
    ("hilbert8", include_str!("../../data/desk/hilbert8.mtx")),
    ("intband15", include_str!("../../data/desk/intband15.mtx")),
    ("kahan12", include_str!("../../data/desk/kahan12.mtx")),
    ("laplacian12", include_str!("../../data/desk/laplacian12.mtx")),
    ("lehmer10", include_str!("../../data/desk/lehmer10.mtx")),
    ("markov10", include_str!("../../data/desk/markov10.mtx")),
    ("pascal6", include_str!("../../data/desk/pascal6.mtx")),
    ("poisson1d30", include_str!("../../data/desk/poisson1d30.mtx")),
    ("poisson2d5", include_str!("../../data/desk/poisson2d5.mtx")),
    ("skew8", include_str!("../../data/desk/skew8.mtx")),
    ("stiffness16", include_str!("../../data/desk/stiffness16.mtx")),
    ("vandermonde8", include_str!("../../data/desk/vandermonde8.mtx")),
    ("wilkinson21", include_str!("../../data/desk/wilkinson21.mtx")),
];

pub fn index() -> CollectionIndex {
    CollectionIndex::from_csv(INDEX_CSV).expect("bundled index is valid")
}

/// Raw Matrix Market text of a bundled matrix.
pub fn source(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// All bundled matrices, sorted by id.
pub fn load() -> Result<Vec<SparseMatrix>> {
    FILES
        .iter()
        .map(|(name, text)| parse_matrix_market(text.as_bytes(), &format!("desk/{name}")))
        .collect()
}
