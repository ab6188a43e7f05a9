//! Machine- and human-readable reports: one `Report` per subcommand run,
//! with a canonical JSON rendering (sorted keys, so byte-identical across
//! runs on identical manifests) and a text rendering that agrees with it on
//! every verdict.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::chern::ChernForm;
use crate::forms::{Form, FormValue};
use crate::matrix::PolyMatrix;
use crate::poly::Polynomial;

/// Outcome of one subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub subcommand: String,
    pub manifest_digest: String,
    pub pass: bool,
    pub results: Value,
}

impl Report {
    pub fn new(subcommand: &str, manifest_digest: &str, pass: bool, results: Value) -> Report {
        Report {
            subcommand: subcommand.to_string(),
            manifest_digest: manifest_digest.to_string(),
            pass,
            results,
        }
    }

    /// 0 exactly when every verdict passed.
    pub fn exit_code(&self) -> i32 {
        i32::from(!self.pass)
    }

    /// Canonical JSON: pretty-printed, keys sorted, trailing newline.
    pub fn to_json(&self) -> String {
        let mut out =
            serde_json::to_string_pretty(self).expect("reports serialize");
        out.push('\n');
        out
    }

    /// Plain-text rendering; the verdict line mirrors `pass` exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("subcommand: {}\n", self.subcommand));
        out.push_str(&format!("manifest: sha256:{}\n", self.manifest_digest));
        render_value(&mut out, &self.results, 0);
        out.push_str(&format!(
            "verdict: {}\n",
            if self.pass { "PASS" } else { "FAIL" }
        ));
        out
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn is_leaf(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| !i.is_object() && !i.is_array()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn leaf_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(leaf_text).collect();
            format!("[{}]", inner.join(", "))
        }
        other => other.to_string(),
    }
}

fn render_value(out: &mut String, v: &Value, depth: usize) {
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                indent(out, depth);
                if is_leaf(item) {
                    out.push_str(&format!("{k}: {}\n", leaf_text(item)));
                } else {
                    out.push_str(&format!("{k}:\n"));
                    render_value(out, item, depth + 1);
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if is_leaf(item) {
                    indent(out, depth);
                    out.push_str(&format!("- {}\n", leaf_text(item)));
                } else {
                    indent(out, depth);
                    out.push_str("-\n");
                    render_value(out, item, depth + 1);
                }
            }
        }
        other => {
            indent(out, depth);
            out.push_str(&leaf_text(other));
            out.push('\n');
        }
    }
}

/// A polynomial as JSON: an integer constant becomes a JSON number, anything
/// else the grammar string.
pub fn poly_json(p: &Polynomial) -> Value {
    if let Some(c) = p.constant_value() {
        if c.is_integer() {
            if let Ok(n) = i64::try_from(c.to_integer()) {
                return json!(n);
            }
        }
    }
    Value::String(p.to_string())
}

fn poly_string(p: &Polynomial) -> Value {
    Value::String(p.to_string())
}

fn matrix_json(m: &PolyMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| poly_string(m.get(r, c))).collect()))
            .collect(),
    )
}

fn form_value_json(v: &FormValue) -> Value {
    match v {
        FormValue::Scalar(p) => poly_string(p),
        FormValue::Module(w) => Value::Array(w.iter().map(poly_string).collect()),
        FormValue::Endo(m) => matrix_json(m),
    }
}

/// A form as JSON. Degree 0 renders its single value directly (an integer
/// constant scalar as a JSON number); positive degree renders the nonzero
/// values as `{indices, value}` entries with 1-based basis indices and
/// grammar-string values, in lexicographic subset order.
pub fn form_json(form: &Form) -> Value {
    if form.degree() == 0 {
        return match &form.values()[0] {
            FormValue::Scalar(p) => poly_json(p),
            other => form_value_json(other),
        };
    }
    let entries: Vec<Value> = form
        .basis_subsets()
        .into_iter()
        .zip(form.values())
        .filter(|(_, v)| !v.is_zero())
        .map(|(subset, v)| {
            let indices: Vec<usize> = subset.iter().map(|i| i + 1).collect();
            json!({ "indices": indices, "value": form_value_json(v) })
        })
        .collect();
    Value::Array(entries)
}

/// A Chern character as JSON: `{n: form}` for each computed component.
pub fn chern_json(ch: &ChernForm) -> Value {
    let mut map = Map::new();
    for (n, form) in ch.components() {
        map.insert(n.to_string(), form_json(form));
    }
    Value::Object(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::chern_character;
    use crate::connection::Connection;
    use crate::lie_rinehart::{Derivation, LieRinehartData};
    use crate::poly::{rat, RingSpec};
    use std::collections::BTreeMap;
    use std::sync::Arc;

    fn line_bundle() -> Arc<Connection> {
        let ring = RingSpec::new(vec!["x", "y"]).unwrap();
        let one = Polynomial::one(&ring);
        let zero = Polynomial::zero(&ring);
        let anchor = vec![
            Derivation::new(&ring, vec![one.clone(), zero.clone()]).unwrap(),
            Derivation::new(&ring, vec![zero.clone(), one]).unwrap(),
        ];
        let algebra = LieRinehartData::new(&ring, 2, BTreeMap::new(), anchor).unwrap();
        let x = Polynomial::variable(&ring, 0).unwrap();
        let gamma2 = PolyMatrix::from_fn(&ring, 1, 1, |_, _| x.clone());
        Connection::new(&algebra, 1, vec![PolyMatrix::zero(&ring, 1, 1), gamma2], "line").unwrap()
    }

    #[test]
    fn chern_of_the_line_bundle_renders_the_expected_shape() {
        let ch = chern_character(&line_bundle()).unwrap();
        let rendered = chern_json(&ch);
        assert_eq!(rendered["0"], json!(1));
        assert_eq!(rendered["1"], json!([{ "indices": [1, 2], "value": "1" }]));
    }

    #[test]
    fn polynomials_render_as_numbers_only_when_integer_constants() {
        let ring = RingSpec::new(vec!["x"]).unwrap();
        assert_eq!(poly_json(&Polynomial::constant(&ring, rat(3, 1))), json!(3));
        assert_eq!(
            poly_json(&Polynomial::constant(&ring, rat(1, 2))),
            json!("1/2")
        );
        let x = Polynomial::variable(&ring, 0).unwrap();
        assert_eq!(poly_json(&x), json!("x"));
    }

    #[test]
    fn renderings_agree_on_the_verdict_and_are_deterministic() {
        let report = Report::new(
            "check",
            "abc123",
            false,
            json!({ "axioms": { "jacobi_failures": [{ "i": 1, "j": 2, "k": 3 }] } }),
        );
        let text = report.to_text();
        let jsoned = report.to_json();
        assert!(text.contains("verdict: FAIL"));
        assert!(jsoned.contains("\"pass\": false"));
        assert_eq!(report.exit_code(), 1);
        assert_eq!(jsoned, report.to_json());

        let passing = Report::new("check", "abc123", true, json!({}));
        assert!(passing.to_text().contains("verdict: PASS"));
        assert!(passing.to_json().contains("\"pass\": true"));
        assert_eq!(passing.exit_code(), 0);
    }

    #[test]
    fn text_rendering_indents_nested_results() {
        let report = Report::new(
            "cohomology",
            "d",
            true,
            json!({
                "betti": [1, 0, 0, 1],
                "entries": [{ "indices": [1, 2], "value": "x" }],
                "regime": "finite"
            }),
        );
        let text = report.to_text();
        assert!(text.contains("betti: [1, 0, 0, 1]\n"));
        assert!(text.contains("regime: finite\n"));
        assert!(text.contains("indices: [1, 2]\n"));
    }
}
