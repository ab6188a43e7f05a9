//! The guide in `book/` is rendered with mdbook, which cannot run code
//! fences as tests. This crate includes each chapter as rustdoc so that
//! `cargo test --doc` compiles and executes every Rust snippet; one module
//! per chapter keeps failures attributable to their source file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/rings.md")]
pub mod rings {}

#[doc = include_str!("../../../book/src/algebras.md")]
pub mod algebras {}

#[doc = include_str!("../../../book/src/forms.md")]
pub mod forms {}

#[doc = include_str!("../../../book/src/connections.md")]
pub mod connections {}

#[doc = include_str!("../../../book/src/differential.md")]
pub mod differential {}

#[doc = include_str!("../../../book/src/chern.md")]
pub mod chern {}

#[doc = include_str!("../../../book/src/cohomology.md")]
pub mod cohomology {}

#[doc = include_str!("../../../book/src/homotopy.md")]
pub mod homotopy {}

#[doc = include_str!("../../../book/src/k_theory.md")]
pub mod k_theory {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
