//! A number-format laboratory.
//!
//! * [`takum`], [`posit`] and [`minifloat`] are bit-exact codecs that decode
//!   into the exact value domain of [`exact`].
//! * [`format`] ties them together behind a single [`FormatId`].
//! * [`matrix`] reads Matrix Market files and fetches the SuiteSparse
//!   Matrix Collection.
//! * [`bench`] measures conversion errors, cumulative distributions and
//!   dynamic ranges.
//! * [`isa`] classifies AVX10.2 mnemonics and rewrites them into a
//!   takum-based nomenclature.

pub mod bench;
mod error;
pub mod exact;
pub mod format;
pub mod isa;
pub mod matrix;
pub mod minifloat;
pub mod posit;
pub mod svg;
pub mod takum;

pub use error::{Error, Result};
pub use exact::{ExtendedReal, RelError};
pub use format::FormatId;
pub use minifloat::{MiniFloatBits, MiniFloatSpec};
pub use posit::PositBits;
pub use takum::TakumBits;
