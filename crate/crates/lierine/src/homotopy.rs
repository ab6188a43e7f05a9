//! Scalar extension to A[t] and the homotopy argument for connection
//! independence: interpolate ∇_t = t·∇₁ + (1−t)·∇₀ over A[t], evaluate at
//! t = 0, 1, and verify that evaluation commutes with the differential, the
//! wedge, the trace, and curvature powers — so both Chern characters are
//! evaluations of one closed form over A[t].

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chern::{chern_character, curvature_power};
use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::forms::{Form, FormConnection, FormKind, FormValue};
use crate::lie_rinehart::{Derivation, LieRinehartData};
use crate::matrix::PolyMatrix;
use crate::poly::{rat_int, Monomial, Polynomial, RingSpec};

/// A Lie-Rinehart algebra together with its extension over A[t]: the same
/// structure constants and anchor reinterpreted over the base ring with one
/// fresh, never-truncated variable t appended.
pub struct ScalarExtension {
    base: Arc<LieRinehartData>,
    extended: Arc<LieRinehartData>,
    t_index: usize,
}

impl ScalarExtension {
    pub fn new(base: &Arc<LieRinehartData>) -> ScalarExtension {
        let base_ring = base.ring();
        let mut t_name = "t".to_string();
        let mut k = 0;
        while base_ring.var_index(&t_name).is_some() {
            k += 1;
            t_name = format!("t{k}");
        }
        let mut variables: Vec<String> = base_ring.variables().to_vec();
        variables.push(t_name);
        let mut bounds: Vec<Option<u32>> = base_ring.bounds().to_vec();
        bounds.push(None);
        let ring = RingSpec::with_bounds(variables, bounds)
            .expect("a fresh variable keeps the ring valid");
        let t_index = base_ring.nvars();

        let include = |p: &Polynomial| include_into(&ring, t_index, p);
        let mut structure = BTreeMap::new();
        for i in 0..base.rank() {
            for j in (i + 1)..base.rank() {
                let coeffs = base.bracket_basis(i, j);
                if coeffs.iter().all(Polynomial::is_zero) {
                    continue;
                }
                structure.insert((i, j), coeffs.iter().map(include).collect());
            }
        }
        // Derivations of A extend to A[t] with ∂/∂t-coefficient zero, so t
        // never appears in the extended anchor.
        let anchor = (0..base.rank())
            .map(|j| {
                let mut coeffs: Vec<Polynomial> = base
                    .anchor_derivation(j)
                    .coefficients()
                    .iter()
                    .map(include)
                    .collect();
                coeffs.push(Polynomial::zero(&ring));
                Derivation::new(&ring, coeffs).expect("extended anchor shares the ring")
            })
            .collect();
        let extended = LieRinehartData::new(&ring, base.rank(), structure, anchor)
            .expect("extension preserves validity");
        ScalarExtension {
            base: base.clone(),
            extended,
            t_index,
        }
    }

    pub fn base(&self) -> &Arc<LieRinehartData> {
        &self.base
    }

    pub fn extended(&self) -> &Arc<LieRinehartData> {
        &self.extended
    }

    pub fn t_index(&self) -> usize {
        self.t_index
    }

    /// The polynomial t in A[t].
    pub fn t_polynomial(&self) -> Polynomial {
        Polynomial::variable(self.extended.ring(), self.t_index)
            .expect("t is a variable of the extended ring")
    }

    /// The inclusion A → A[t] on one polynomial.
    pub fn include_poly(&self, p: &Polynomial) -> Polynomial {
        assert_eq!(p.ring(), self.base.ring(), "including a foreign polynomial");
        include_into(self.extended.ring(), self.t_index, p)
    }

    /// A t-free polynomial, restricted back to A.
    fn restrict_poly(&self, p: &Polynomial) -> Polynomial {
        Polynomial::from_terms(
            self.base.ring(),
            p.terms().map(|(mono, c)| {
                let exps = mono.exponents();
                assert_eq!(exps[self.t_index], 0, "t must be substituted away first");
                (Monomial::new(exps[..self.t_index].to_vec()), c.clone())
            }),
        )
        .expect("restricted monomials match the base ring")
    }

    /// The same connection with Christoffel data over A[t].
    pub fn include_connection(&self, c: &Arc<Connection>) -> Result<Arc<Connection>> {
        if !Arc::ptr_eq(c.algebra(), &self.base) {
            return Err(Error::KindMismatch(
                "connection lives over a different algebra than this extension's base".into(),
            ));
        }
        let christoffel = (0..self.base.rank())
            .map(|j| self.include_matrix(c.christoffel(j)))
            .collect();
        Connection::new(&self.extended, c.rank(), christoffel, c.label())
    }

    fn include_matrix(&self, m: &PolyMatrix) -> PolyMatrix {
        PolyMatrix::from_fn(self.extended.ring(), m.rows(), m.cols(), |i, j| {
            self.include_poly(m.get(i, j))
        })
    }

    /// The same form with coefficients over A[t].
    pub fn include_form(&self, f: &Form) -> Result<Form> {
        if !Arc::ptr_eq(f.algebra(), &self.base) {
            return Err(Error::KindMismatch(
                "form lives over a different algebra than this extension's base".into(),
            ));
        }
        let values = f
            .values()
            .iter()
            .map(|v| match v {
                FormValue::Scalar(p) => FormValue::Scalar(self.include_poly(p)),
                FormValue::Module(w) => {
                    FormValue::Module(w.iter().map(|p| self.include_poly(p)).collect())
                }
                FormValue::Endo(m) => FormValue::Endo(self.include_matrix(m)),
            })
            .collect();
        Form::from_values(&self.extended, f.degree(), f.kind(), values)
    }

    /// The interpolated connection ∇_t = t·∇₁ + (1−t)·∇₀ over A[t]:
    /// Γⱼ(t) = t·Γⱼ⁽¹⁾ + (1−t)·Γⱼ⁽⁰⁾. The anchor part keeps total
    /// coefficient t + (1−t) = 1, so this is again a connection.
    pub fn interpolate(
        &self,
        c0: &Arc<Connection>,
        c1: &Arc<Connection>,
    ) -> Result<Arc<Connection>> {
        if !Arc::ptr_eq(c0.algebra(), &self.base) || !Arc::ptr_eq(c1.algebra(), &self.base) {
            return Err(Error::KindMismatch(
                "interpolation needs connections over this extension's base algebra".into(),
            ));
        }
        if c0.rank() != c1.rank() {
            return Err(Error::DimensionMismatch(format!(
                "interpolation needs equal ranks; got {} and {}",
                c0.rank(),
                c1.rank()
            )));
        }
        let t = self.t_polynomial();
        let one_minus_t = Polynomial::one(self.extended.ring()).sub(&t);
        let christoffel = (0..self.base.rank())
            .map(|j| {
                let g0 = self.include_matrix(c0.christoffel(j)).scale_poly(&one_minus_t);
                let g1 = self.include_matrix(c1.christoffel(j)).scale_poly(&t);
                g0.add(&g1)
            })
            .collect();
        Connection::new(
            &self.extended,
            c0.rank(),
            christoffel,
            format!("({}~{})", c0.label(), c1.label()),
        )
    }

    /// The evaluation map p^i: substitute t = i (i ∈ {0, 1}) in every
    /// coefficient and read the result over the base ring; basis subsets map
    /// identically.
    pub fn evaluate_form(&self, f: &Form, i: u8) -> Result<Form> {
        if i > 1 {
            return Err(Error::Manifest(format!(
                "evaluation is defined at t = 0 and t = 1, not {i}"
            )));
        }
        if !Arc::ptr_eq(f.algebra(), &self.extended) {
            return Err(Error::KindMismatch(
                "evaluation applies to forms over the extended algebra".into(),
            ));
        }
        let value = rat_int(i as i64);
        let eval = |p: &Polynomial| -> Result<Polynomial> {
            Ok(self.restrict_poly(&p.substitute(self.t_index, &value)?))
        };
        let values = f
            .values()
            .iter()
            .map(|v| {
                Ok(match v {
                    FormValue::Scalar(p) => FormValue::Scalar(eval(p)?),
                    FormValue::Module(w) => {
                        FormValue::Module(w.iter().map(&eval).collect::<Result<_>>()?)
                    }
                    FormValue::Endo(m) => {
                        let mut entries = Vec::new();
                        for r in 0..m.rows() {
                            let mut row = Vec::new();
                            for c in 0..m.cols() {
                                row.push(eval(m.get(r, c))?);
                            }
                            entries.push(row);
                        }
                        FormValue::Endo(PolyMatrix::from_rows(self.base.ring(), entries)?)
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Form::from_values(&self.base, f.degree(), f.kind(), values)
    }
}

fn include_into(ring: &Arc<RingSpec>, t_index: usize, p: &Polynomial) -> Polynomial {
    Polynomial::from_terms(
        ring,
        p.terms().map(|(mono, c)| {
            let mut exps = mono.exponents().to_vec();
            exps.insert(t_index, 0);
            (Monomial::new(exps), c.clone())
        }),
    )
    .expect("included monomials match the extended ring")
}

/// Outcome of the evaluation-identity suite: each list holds descriptions of
/// exact form equalities that failed; all empty means every identity held.
#[derive(Clone, Debug, Default, Serialize)]
pub struct EvalReport {
    pub checks_run: usize,
    pub chain_map_failures: Vec<String>,
    pub wedge_failures: Vec<String>,
    pub trace_failures: Vec<String>,
    pub power_failures: Vec<String>,
    pub interpolation_failures: Vec<String>,
}

impl EvalReport {
    pub fn passed(&self) -> bool {
        self.chain_map_failures.is_empty()
            && self.wedge_failures.is_empty()
            && self.trace_failures.is_empty()
            && self.power_failures.is_empty()
            && self.interpolation_failures.is_empty()
    }
}

/// Random forms for the identity suite, with coefficient degree ≤ 2.
fn random_form(
    rng: &mut ChaCha8Rng,
    algebra: &Arc<LieRinehartData>,
    degree: usize,
    kind: FormKind,
) -> Form {
    crate::sample::random_form(rng, algebra, degree, kind, 2)
}

/// Run the §-style evaluation-identity suite for a pair of connections over
/// one algebra: build ∇_t, then check on deterministic random forms over
/// A[t], for i = 0, 1, that evaluation commutes with the differential
/// (canonical and ad-actions), the wedge, and the trace; that evaluated
/// curvature powers equal powers of the evaluated curvature; that the
/// interpolation evaluates to each endpoint (curvature and Christoffel
/// level); and that the Chern character of ∇_t evaluates componentwise to
/// the endpoint Chern characters. The randomness is seeded, so the report
/// is reproducible.
pub fn verify_evaluation_identities(
    c0: &Arc<Connection>,
    c1: &Arc<Connection>,
) -> Result<EvalReport> {
    let ext = ScalarExtension::new(c0.algebra());
    let interp = ext.interpolate(c0, c1)?;
    let algebra_t = ext.extended().clone();
    let m = algebra_t.rank();
    let rank = c0.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(0x4C69_6552);
    let mut report = EvalReport::default();
    let max_form_degree = m.min(3);

    let curvature_t = interp.curvature();
    let ch_t = chern_character(&interp)?;

    for i in [0u8, 1] {
        let endpoint = if i == 0 { c0 } else { c1 };

        // p^i ∘ d = d ∘ p^i with the canonical action on scalars.
        for _ in 0..6 {
            report.checks_run += 1;
            let deg = rng.gen_range(0..=max_form_degree);
            let phi = random_form(&mut rng, &algebra_t, deg, FormKind::Scalar);
            let lhs = ext.evaluate_form(&phi.differential(&FormConnection::Canonical)?, i)?;
            let rhs = ext
                .evaluate_form(&phi, i)?
                .differential(&FormConnection::Canonical)?;
            if lhs != rhs {
                report.chain_map_failures.push(format!(
                    "canonical chain map failed at t={i} on a degree-{deg} scalar form"
                ));
            }
        }

        // p^i ∘ d = d ∘ p^i with the ad-action: ∇_t upstairs, ∇_i downstairs.
        for _ in 0..6 {
            report.checks_run += 1;
            let deg = rng.gen_range(0..=max_form_degree);
            let phi = random_form(&mut rng, &algebra_t, deg, FormKind::Endo(rank));
            let lhs = ext.evaluate_form(&phi.differential(&interp.ad())?, i)?;
            let rhs = ext.evaluate_form(&phi, i)?.differential(&endpoint.ad())?;
            if lhs != rhs {
                report.chain_map_failures.push(format!(
                    "ad chain map failed at t={i} on a degree-{deg} endomorphism form"
                ));
            }
        }

        // p^i(φ ∧ ψ) = p^i(φ) ∧ p^i(ψ), scalar·scalar and endo·endo.
        for kind in [FormKind::Scalar, FormKind::Endo(rank)] {
            for _ in 0..4 {
                report.checks_run += 1;
                let d1 = rng.gen_range(0..=max_form_degree);
                let d2 = rng.gen_range(0..=max_form_degree);
                let phi = random_form(&mut rng, &algebra_t, d1, kind);
                let psi = random_form(&mut rng, &algebra_t, d2, kind);
                let lhs = ext.evaluate_form(&phi.wedge(&psi)?, i)?;
                let rhs = ext
                    .evaluate_form(&phi, i)?
                    .wedge(&ext.evaluate_form(&psi, i)?)?;
                if lhs != rhs {
                    report.wedge_failures.push(format!(
                        "wedge compatibility failed at t={i} on degrees {d1}∧{d2} ({kind:?})"
                    ));
                }
            }
        }

        // p^i ∘ tr = tr ∘ p^i.
        for _ in 0..6 {
            report.checks_run += 1;
            let deg = rng.gen_range(0..=max_form_degree);
            let phi = random_form(&mut rng, &algebra_t, deg, FormKind::Endo(rank));
            let lhs = ext.evaluate_form(&phi.trace_form()?, i)?;
            let rhs = ext.evaluate_form(&phi, i)?.trace_form()?;
            if lhs != rhs {
                report.trace_failures.push(format!(
                    "trace compatibility failed at t={i} on a degree-{deg} form"
                ));
            }
        }

        // p^i(R_t) = R_{∇_i} and p^i(R_t^k) = (p^i R_t)^k for k ≤ ⌊m/2⌋.
        report.checks_run += 1;
        let evaluated_curvature = ext.evaluate_form(&curvature_t, i)?;
        if evaluated_curvature != endpoint.curvature() {
            report
                .interpolation_failures
                .push(format!("evaluating R_t at t={i} missed the endpoint curvature"));
        }
        for k in 0..=m / 2 {
            report.checks_run += 1;
            let lhs = ext.evaluate_form(&curvature_power(&curvature_t, k)?, i)?;
            let rhs = curvature_power(&evaluated_curvature, k)?;
            if lhs != rhs {
                report
                    .power_failures
                    .push(format!("curvature power k={k} failed at t={i}"));
            }
        }

        // The Chern character of ∇_t evaluates componentwise to ch(∇_i).
        let ch_i = chern_character(endpoint)?;
        for (n, component) in ch_t.components() {
            report.checks_run += 1;
            let lhs = ext.evaluate_form(component, i)?;
            match ch_i.component(*n) {
                Some(rhs) if lhs == *rhs => {}
                _ => report.interpolation_failures.push(format!(
                    "Chern component n={n} of the interpolation failed to evaluate at t={i}"
                )),
            }
        }
    }
    Ok(report)
}
