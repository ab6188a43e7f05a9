//! The `lierine` command line: manifest-driven dispatch into the library.
//!
//! Exit-code contract: 0 exactly when every verdict in the report passed;
//! 1 when a verdict failed; 2 for diagnostics (unreadable manifest, unknown
//! label, invalid regime, malformed expression). Diagnostics go to stderr
//! and never panic. Reports are deterministic for identical manifests.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, to_value, Value};

use crate::chern::{chern_character, verify_closed};
use crate::cohomology::{
    betti_numbers, cochain_dimensions, find_primitive, CohomologyReport, PrimitiveResult, Regime,
};
use crate::error::{Error, Result};
use crate::forms::FormConnection;
use crate::homotopy::verify_evaluation_identities;
use crate::k0::{chern_on_k0, evaluate_expression, ConnectionRegistry};
use crate::manifest::{parse_manifest, BuiltModel, Manifest};
use crate::report::{chern_json, form_json, Report};

/// Exact Chern characters, curvature, and cohomology for Lie-Rinehart
/// algebras described by JSON manifests.
#[derive(Parser, Debug)]
#[command(name = "lierine", version, about)]
pub struct Cli {
    /// Path to the JSON manifest (ring, algebra, modules).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    /// Print the report as canonical JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify the Lie-Rinehart axioms and report per-module flatness.
    Check,
    /// Print the curvature form of one module.
    Curvature {
        /// Module name from the manifest.
        module: String,
    },
    /// Print the Chern character of one module and verify closedness.
    Chern {
        /// Module name from the manifest.
        module: String,
    },
    /// Cochain dimensions, plus Betti numbers in the finite regime.
    Cohomology {
        /// `finite` (all variables truncated) or `degree:D` (free ring,
        /// coefficient degree window D).
        #[arg(long)]
        regime: String,
        /// Compute for this module's action instead of the scalar action
        /// (the module's connection must be flat).
        #[arg(long)]
        module: Option<String>,
    },
    /// Run the interpolation identity suite for two modules and search for
    /// primitives of their Chern character difference.
    Compare {
        /// First module name.
        a: String,
        /// Second module name.
        b: String,
        /// Regime for the primitive search; defaults to `finite` on a fully
        /// truncated ring and `degree:3` otherwise.
        #[arg(long)]
        regime: Option<String>,
    },
    /// Evaluate a K₀ expression over the manifest's module labels, e.g.
    /// "(line + line2) * line5" or "2*line - line2".
    K0 {
        /// The expression; labels are module names, `+`, `-`, `*`, and
        /// integer scalars are allowed.
        expression: String,
    },
}

/// The default cap on the algebra's basis rank; override (downward) with
/// the LIERINE_MAX_RANK environment variable.
const DEFAULT_MAX_RANK: usize = 12;

fn max_rank() -> Result<usize> {
    match std::env::var("LIERINE_MAX_RANK") {
        Ok(raw) => raw.parse::<usize>().map_err(|_| {
            Error::Manifest(format!(
                "LIERINE_MAX_RANK must be a positive integer, got '{raw}'"
            ))
        }),
        Err(_) => Ok(DEFAULT_MAX_RANK),
    }
}

fn parse_regime(input: &str) -> Result<Regime> {
    if input == "finite" {
        return Ok(Regime::Finite);
    }
    if let Some(rest) = input.strip_prefix("degree:") {
        let bound = rest.parse::<u32>().map_err(|_| {
            Error::Parse(format!("regime 'degree:D' needs an integer bound, got '{rest}'"))
        })?;
        return Ok(Regime::DegreeBounded(bound));
    }
    Err(Error::Parse(format!(
        "unknown regime '{input}': expected 'finite' or 'degree:D'"
    )))
}

/// Parse argv, run, and print the report; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own usage/version/help output; true errors go
            // to stderr, help/version to stdout.
            let is_error = e.use_stderr();
            let _ = e.print();
            return if is_error { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            print!("{}", if cli.json { report.to_json() } else { report.to_text() });
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Load the manifest and dispatch. Errors here are diagnostics (exit 2);
/// failed verdicts are encoded in the returned report instead.
pub fn execute(cli: &Cli) -> Result<Report> {
    let path = cli.manifest.as_ref().ok_or_else(|| {
        Error::Manifest("a manifest is required: pass --manifest <path>".into())
    })?;
    let manifest = parse_manifest(path)?;
    if let Some(algebra) = &manifest.algebra {
        if let Some(rank) = algebra.rank {
            let cap = max_rank()?;
            if rank > cap {
                return Err(Error::RankTooLarge { rank, max: cap });
            }
        }
    }
    let model = manifest.build()?;
    let digest = manifest.digest();
    match &cli.command {
        Command::Check => Ok(run_check(&manifest, &model, &digest)),
        Command::Curvature { module } => run_curvature(&model, &digest, module),
        Command::Chern { module } => run_chern(&model, &digest, module),
        Command::Cohomology { regime, module } => {
            run_cohomology(&model, &digest, regime, module.as_deref())
        }
        Command::Compare { a, b, regime } => {
            run_compare(&model, &digest, a, b, regime.as_deref())
        }
        Command::K0 { expression } => run_k0(&model, &digest, expression),
    }
}

/// Axioms are verdicts; flatness is reported per module as information,
/// since non-flat connections are legitimate inputs for Chern theory.
fn run_check(manifest: &Manifest, model: &BuiltModel, digest: &str) -> Report {
    let axioms = model.algebra.verify_axioms();
    let modules: Vec<Value> = model
        .connections
        .iter()
        .map(|c| {
            json!({
                "name": c.label(),
                "rank": c.rank(),
                "flat": c.is_flat(),
            })
        })
        .collect();
    let pass = axioms.passed();
    let results = json!({
        "ring": {
            "variables": model.ring.variables(),
            "finite_dimensional": model.ring.is_finite_dimensional(),
        },
        "algebra": { "rank": model.algebra.rank(), "axioms_pass": pass },
        "axiom_failures": to_value(&axioms).expect("axiom reports serialize"),
        "modules": modules,
        "module_count": manifest.modules.len(),
    });
    Report::new("check", digest, pass, results)
}

fn run_curvature(model: &BuiltModel, digest: &str, module: &str) -> Result<Report> {
    let conn = model.connection(module)?;
    let curvature = conn.curvature();
    let results = json!({
        "module": module,
        "rank": conn.rank(),
        "flat": curvature.is_zero(),
        "curvature": form_json(&curvature),
    });
    Ok(Report::new("curvature", digest, true, results))
}

fn run_chern(model: &BuiltModel, digest: &str, module: &str) -> Result<Report> {
    let conn = model.connection(module)?;
    let character = chern_character(conn)?;
    let closedness = verify_closed(conn)?;
    let pass = closedness.passed();
    let results = json!({
        "module": module,
        "components": chern_json(&character),
        "closedness": to_value(&closedness).expect("closedness reports serialize"),
    });
    Ok(Report::new("chern", digest, pass, results))
}

fn run_cohomology(
    model: &BuiltModel,
    digest: &str,
    regime: &str,
    module: Option<&str>,
) -> Result<Report> {
    let regime = parse_regime(regime)?;
    let action = match module {
        Some(name) => model.connection(name)?.module_action(),
        None => FormConnection::Canonical,
    };
    let report = match regime {
        Regime::Finite => betti_numbers(&model.algebra, &action, regime)?,
        Regime::DegreeBounded(_) => CohomologyReport {
            regime: regime.describe(),
            dims: cochain_dimensions(&model.algebra, &action, regime)?,
            betti: None,
        },
    };
    let mut results = json!({
        "action": module.unwrap_or("scalar"),
        "report": to_value(&report).expect("cohomology reports serialize"),
    });
    if let Some(betti) = &report.betti {
        results["betti"] = json!(betti);
    }
    Ok(Report::new("cohomology", digest, true, results))
}

fn run_compare(
    model: &BuiltModel,
    digest: &str,
    a: &str,
    b: &str,
    regime: Option<&str>,
) -> Result<Report> {
    let ca = model.connection(a)?;
    let cb = model.connection(b)?;
    let regime = match regime {
        Some(input) => parse_regime(input)?,
        None if model.ring.is_finite_dimensional() => Regime::Finite,
        None => Regime::DegreeBounded(3),
    };
    let identities = verify_evaluation_identities(ca, cb)?;
    let difference = chern_character(ca)?.add(&chern_character(cb)?.scale_int(-1))?;
    let mut differences = Vec::new();
    let mut all_exact = true;
    for (n, form) in difference.components() {
        if form.is_zero() {
            differences.push(json!({ "component": n, "status": "zero" }));
            continue;
        }
        if *n == 0 {
            // A nonzero constant has no primitive: the ranks differ, so the
            // classes genuinely differ.
            all_exact = false;
            differences.push(json!({ "component": 0, "status": "not_exact" }));
            continue;
        }
        match find_primitive(form, &FormConnection::Canonical, regime)? {
            PrimitiveResult::Found(witness) => differences.push(json!({
                "component": n,
                "status": "primitive_found",
                "witness": form_json(&witness),
            })),
            PrimitiveResult::NotFoundWithinBound(bound) => {
                all_exact = false;
                differences.push(json!({
                    "component": n,
                    "status": "not_found_within_bound",
                    "bound": bound,
                }));
            }
            PrimitiveResult::NotExact => {
                all_exact = false;
                differences.push(json!({ "component": n, "status": "not_exact" }));
            }
        }
    }
    let pass = identities.passed() && all_exact;
    let results = json!({
        "a": a,
        "b": b,
        "regime": regime.describe(),
        "identities": to_value(&identities).expect("identity reports serialize"),
        "differences": differences,
    });
    Ok(Report::new("compare", digest, pass, results))
}

fn run_k0(model: &BuiltModel, digest: &str, expression: &str) -> Result<Report> {
    let mut registry = ConnectionRegistry::new(&model.algebra);
    for conn in &model.connections {
        registry.register(conn)?;
    }
    let element = evaluate_expression(&mut registry, expression)?;
    let character = chern_on_k0(&registry, &element)?;
    let results = json!({
        "expression": expression,
        "element": to_value(&element).expect("K0 elements serialize"),
        "chern": chern_json(&character),
    });
    Ok(Report::new("k0", digest, true, results))
}
