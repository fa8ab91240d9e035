//! The chapters of the guide in `book/`, included here so that `cargo test`
//! compiles and runs their code blocks.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/takums.md")]
pub mod takums {}
#[doc = include_str!("../../../book/src/posits-and-minifloats.md")]
pub mod posits_and_minifloats {}
#[doc = include_str!("../../../book/src/exact-values.md")]
pub mod exact_values {}
#[doc = include_str!("../../../book/src/matrices.md")]
pub mod matrices {}
#[doc = include_str!("../../../book/src/benchmark.md")]
pub mod benchmark {}
#[doc = include_str!("../../../book/src/isa.md")]
pub mod isa {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
