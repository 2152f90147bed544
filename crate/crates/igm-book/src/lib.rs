//! Compiles the guide's code samples as doc-tests. Each module pulls in
//! one chapter from `book/src`, so `cargo test` fails when a sample and
//! the library drift apart.

#![doc = include_str!("../../../book/src/introduction.md")]

#[doc = include_str!("../../../book/src/generating.md")]
pub mod generating {}

#[doc = include_str!("../../../book/src/counting.md")]
pub mod counting {}

#[doc = include_str!("../../../book/src/implicit.md")]
pub mod implicit {}

#[doc = include_str!("../../../book/src/parameters.md")]
pub mod parameters {}

#[doc = include_str!("../../../book/src/spectra.md")]
pub mod spectra {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
