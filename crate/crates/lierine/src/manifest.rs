//! JSON manifests: the declarative input format naming a base ring, a
//! Lie-Rinehart algebra by anchor and structure constants, and a family of
//! labeled connections by Christoffel matrices.
//!
//! Parsing is permissive only about optional sections; `build` validates
//! everything and reports the offending field by name. Polynomial entries
//! are strings in the library's grammar, so manifests are bit-exact and
//! human-writable. Serialization is canonical: `serialize(parse(m))` is
//! idempotent.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::lie_rinehart::{Derivation, LieRinehartData};
use crate::matrix::PolyMatrix;
use crate::poly::{Polynomial, RingSpec};

/// The whole manifest file. Required sections are optional at the serde
/// layer so that missing pieces yield named diagnostics instead of opaque
/// deserialization failures.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modules: Vec<ModuleSection>,
}

/// Base ring: variable names plus optional per-variable truncation bounds
/// (`{"x": 4}` imposes x⁴ = 0).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<BTreeMap<String, u32>>,
}

/// The algebra: basis rank m, one anchor row per basis element (one
/// polynomial per ring variable), and the nonzero brackets with 1-based
/// indices i < j.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub brackets: Vec<BracketEntry>,
}

/// [gᵢ, gⱼ] = Σₖ coeffs[k]·gₖ with 1-based i < j.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<String>,
}

/// One connection: a module name (its registry label), the module rank, and
/// one rank×rank Christoffel matrix (rows of polynomial strings) per basis
/// element.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub christoffel: Option<Vec<Vec<Vec<String>>>>,
}

/// The validated model a manifest denotes.
#[derive(Debug)]
pub struct BuiltModel {
    pub ring: Arc<RingSpec>,
    pub algebra: Arc<LieRinehartData>,
    pub connections: Vec<Arc<Connection>>,
}

impl BuiltModel {
    pub fn connection(&self, name: &str) -> Result<&Arc<Connection>> {
        self.connections
            .iter()
            .find(|c| c.label() == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }
}

/// Read and deserialize a manifest file. Schema-level problems (bad JSON,
/// unknown fields) surface here; field validation happens in
/// [`Manifest::build`].
pub fn parse_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let text = std::fs::read_to_string(path)?;
    parse_manifest_str(&text)
}

/// Deserialize a manifest from a JSON string.
pub fn parse_manifest_str(text: &str) -> Result<Manifest> {
    Ok(serde_json::from_str(text)?)
}

impl Manifest {
    /// Canonical serialization: pretty JSON with a trailing newline, keys in
    /// struct order, optional sections omitted when absent.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("manifests serialize");
        out.push('\n');
        out
    }

    /// SHA-256 of the canonical serialization, as lowercase hex. Whitespace
    /// and key order in the source file do not affect the digest.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_json().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Validate every field and build the ring, algebra, and connections.
    pub fn build(&self) -> Result<BuiltModel> {
        let ring_section = self
            .ring
            .as_ref()
            .ok_or_else(|| Error::Manifest("ring required".into()))?;
        let variables = ring_section
            .variables
            .as_ref()
            .ok_or_else(|| Error::Manifest("ring.variables required".into()))?;
        let mut bounds: Vec<Option<u32>> = vec![None; variables.len()];
        if let Some(truncation) = &ring_section.truncation {
            for (var, &bound) in truncation {
                let Some(idx) = variables.iter().position(|v| v == var) else {
                    return Err(Error::Manifest(format!(
                        "ring.truncation names unknown variable '{var}'"
                    )));
                };
                if bound == 0 {
                    return Err(Error::Manifest(format!(
                        "ring.truncation['{var}'] must be at least 1"
                    )));
                }
                bounds[idx] = Some(bound);
            }
        }
        let ring = RingSpec::with_bounds(variables.clone(), bounds)
            .map_err(|e| Error::Manifest(format!("ring.variables: {e}")))?;

        let algebra_section = self
            .algebra
            .as_ref()
            .ok_or_else(|| Error::Manifest("algebra required".into()))?;
        let rank = algebra_section
            .rank
            .ok_or_else(|| Error::Manifest("algebra.rank required".into()))?;
        let anchor_rows = algebra_section
            .anchor
            .as_ref()
            .ok_or_else(|| Error::Manifest("algebra.anchor required".into()))?;
        if anchor_rows.len() != rank {
            return Err(Error::Manifest(format!(
                "algebra.anchor needs one row per basis element: rank is {rank}, got {} rows",
                anchor_rows.len()
            )));
        }
        let parse_poly = |field: &str, input: &str| -> Result<Polynomial> {
            Polynomial::parse(&ring, input)
                .map_err(|e| Error::Manifest(format!("{field}: {e}")))
        };
        let mut anchor = Vec::with_capacity(rank);
        for (b, row) in anchor_rows.iter().enumerate() {
            if row.len() != ring.nvars() {
                return Err(Error::Manifest(format!(
                    "algebra.anchor[{b}] needs one polynomial per ring variable ({}), got {}",
                    ring.nvars(),
                    row.len()
                )));
            }
            let coeffs = row
                .iter()
                .enumerate()
                .map(|(v, s)| parse_poly(&format!("algebra.anchor[{b}][{v}]"), s))
                .collect::<Result<Vec<_>>>()?;
            anchor.push(Derivation::new(&ring, coeffs).expect("anchor coefficients share the ring"));
        }

        let mut structure = BTreeMap::new();
        for (idx, entry) in algebra_section.brackets.iter().enumerate() {
            if entry.i == 0 || entry.i >= entry.j {
                return Err(Error::Manifest(format!(
                    "brackets must have i<j with 1-based indices; entry {idx} has i={}, j={}",
                    entry.i, entry.j
                )));
            }
            if entry.j > rank {
                return Err(Error::Manifest(format!(
                    "brackets[{idx}] references g{} beyond rank {rank}",
                    entry.j
                )));
            }
            if entry.coeffs.len() != rank {
                return Err(Error::Manifest(format!(
                    "brackets[{idx}].coeffs needs {rank} entries, got {}",
                    entry.coeffs.len()
                )));
            }
            let key = (entry.i - 1, entry.j - 1);
            if structure.contains_key(&key) {
                return Err(Error::Manifest(format!(
                    "brackets[{idx}] repeats the pair ({}, {})",
                    entry.i, entry.j
                )));
            }
            let coeffs = entry
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, s)| parse_poly(&format!("brackets[{idx}].coeffs[{k}]"), s))
                .collect::<Result<Vec<_>>>()?;
            structure.insert(key, coeffs);
        }
        let algebra = LieRinehartData::new(&ring, rank, structure, anchor)?;

        let mut connections: Vec<Arc<Connection>> = Vec::new();
        for (idx, module) in self.modules.iter().enumerate() {
            let name = module
                .name
                .as_ref()
                .ok_or_else(|| Error::Manifest(format!("modules[{idx}].name required")))?;
            if name.is_empty() {
                return Err(Error::Manifest(format!(
                    "modules[{idx}].name must be nonempty"
                )));
            }
            if connections.iter().any(|c| c.label() == name) {
                return Err(Error::Manifest(format!(
                    "modules[{idx}].name '{name}' is already used"
                )));
            }
            let module_rank = module
                .rank
                .ok_or_else(|| Error::Manifest(format!("modules[{idx}].rank required")))?;
            if module_rank == 0 {
                return Err(Error::Manifest(format!(
                    "modules[{idx}].rank must be at least 1"
                )));
            }
            let matrices = module.christoffel.as_ref().ok_or_else(|| {
                Error::Manifest(format!("modules[{idx}].christoffel required"))
            })?;
            if matrices.len() != rank {
                return Err(Error::Manifest(format!(
                    "modules[{idx}].christoffel needs one matrix per basis element ({rank}), got {}",
                    matrices.len()
                )));
            }
            let mut christoffels = Vec::with_capacity(rank);
            for (j, matrix) in matrices.iter().enumerate() {
                if matrix.len() != module_rank
                    || matrix.iter().any(|row| row.len() != module_rank)
                {
                    return Err(Error::Manifest(format!(
                        "modules[{idx}].christoffel[{j}] must be a {module_rank}×{module_rank} matrix"
                    )));
                }
                let rows = matrix
                    .iter()
                    .enumerate()
                    .map(|(r, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(c, s)| {
                                parse_poly(
                                    &format!("modules[{idx}].christoffel[{j}][{r}][{c}]"),
                                    s,
                                )
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                christoffels.push(
                    PolyMatrix::from_rows(&ring, rows).expect("validated matrix shape"),
                );
            }
            connections.push(Connection::new(&algebra, module_rank, christoffels, name)?);
        }

        Ok(BuiltModel {
            ring,
            algebra,
            connections,
        })
    }
}
