//! Exact computer algebra for Lie-Rinehart algebras over the rationals:
//! connections, curvature, Chern characters, Lie-Rinehart cohomology, and a
//! small K-theory layer, all in exact arithmetic.
//!
//! Models can be built from JSON manifests (the CLI's format) or assembled
//! directly from the typed API; the guide in `book/` walks through both.
//!
//! ```
//! use lierine::chern::chern_character;
//! use lierine::manifest::parse_manifest_str;
//!
//! let model = parse_manifest_str(
//!     r#"{
//!       "ring": { "variables": ["x", "y"] },
//!       "algebra": { "rank": 2, "anchor": [["1", "0"], ["0", "1"]], "brackets": [] },
//!       "modules": [{ "name": "line", "rank": 1, "christoffel": [[["0"]], [["x"]]] }]
//!     }"#,
//! )?
//! .build()?;
//!
//! // ch(line) = 1 + tr(R): the rank in degree 0, the twist in degree 2.
//! let line = model.connection("line")?;
//! let ch = chern_character(line)?;
//! assert_eq!(ch.components().len(), 2);
//! # Ok::<(), lierine::Error>(())
//! ```

pub mod error;
pub(crate) mod combinatorics;
pub mod poly;
pub mod matrix;
pub mod lie_rinehart;
pub mod forms;
pub mod connection;
pub mod chern;
pub mod linalg;
pub mod cohomology;
pub mod homotopy;
pub mod cli;
pub mod k0;
pub mod manifest;
pub mod report;
pub mod sample;

pub use error::{Error, Result};
