//! Lie-Rinehart cohomology by exact linear algebra.
//!
//! The cochain complex C•(𝔤, V) is flattened over a finite rational basis —
//! one coordinate per (basis p-subset, coefficient monomial, value
//! coordinate) — in one of two regimes. In the **finite** regime the whole
//! coefficient ring is a finite-dimensional ℚ-vector space, so ranks and
//! kernels are exact and genuine Betti numbers exist. In the
//! **degree-bounded** regime the ring is a free polynomial ring and searches
//! are restricted to coefficients of total degree ≤ D: a primitive that is
//! found is definitive (it is re-verified symbolically), while a miss only
//! says no witness exists inside the window.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::forms::{Form, FormConnection, FormKind, FormValue};
use crate::lie_rinehart::LieRinehartData;
use crate::linalg::QMatrix;
use crate::matrix::PolyMatrix;
use crate::poly::{Monomial, Polynomial, Rational, RingSpec};

/// Where the flattened complex lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// Finite-dimensional coefficient ring (constants, or every variable
    /// truncated): full complexes, exact Betti numbers.
    Finite,
    /// Free polynomial coefficients windowed to total degree ≤ D.
    DegreeBounded(u32),
}

impl Regime {
    pub fn validate(&self, ring: &RingSpec) -> Result<()> {
        match self {
            Regime::Finite => {
                if ring.is_finite_dimensional() {
                    Ok(())
                } else {
                    Err(Error::RegimeInvalid(
                        "the finite regime needs a finite-dimensional coefficient ring; \
                         use a degree bound for free polynomial rings"
                            .into(),
                    ))
                }
            }
            Regime::DegreeBounded(_) => {
                if ring.is_untruncated() {
                    Ok(())
                } else {
                    Err(Error::RegimeInvalid(
                        "the degree-bounded regime applies to free polynomial rings; \
                         truncated rings are already finite"
                            .into(),
                    ))
                }
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Regime::Finite => "finite".to_string(),
            Regime::DegreeBounded(d) => format!("degree:{d}"),
        }
    }
}

/// Every monomial of the finite-dimensional ring, ascending grlex.
fn bounded_monomials(ring: &RingSpec) -> Vec<Monomial> {
    let n = ring.nvars();
    if n == 0 {
        return vec![Monomial::constant(0)];
    }
    let bounds: Vec<u32> = ring
        .bounds()
        .iter()
        .map(|b| b.expect("finite regime was validated"))
        .collect();
    let mut out = Vec::new();
    let mut e = vec![0u32; n];
    'odometer: loop {
        out.push(Monomial::new(e.clone()));
        for i in 0..n {
            e[i] += 1;
            if e[i] < bounds[i] {
                continue 'odometer;
            }
            e[i] = 0;
        }
        break;
    }
    out.sort();
    out
}

/// Every monomial of total degree ≤ `max_degree`, ascending grlex.
fn degree_monomials(nvars: usize, max_degree: u32) -> Vec<Monomial> {
    fn rec(out: &mut Vec<Monomial>, e: &mut Vec<u32>, i: usize, remaining: u32) {
        if i == e.len() {
            out.push(Monomial::new(e.clone()));
            return;
        }
        for v in 0..=remaining {
            e[i] = v;
            rec(out, e, i + 1, remaining - v);
        }
        e[i] = 0;
    }
    let mut out = Vec::new();
    let mut e = vec![0u32; nvars];
    rec(&mut out, &mut e, 0, max_degree);
    out.sort();
    out
}

/// Monomial window of a regime, widened by `slack` extra degrees (used for
/// codomains in the degree-bounded regime; ignored in the finite regime,
/// where the window is already the whole ring).
fn monomials_for(ring: &RingSpec, regime: Regime, slack: u32) -> Vec<Monomial> {
    match regime {
        Regime::Finite => bounded_monomials(ring),
        Regime::DegreeBounded(d) => degree_monomials(ring.nvars(), d + slack),
    }
}

fn coords_in(kind: FormKind) -> usize {
    match kind {
        FormKind::Scalar => 1,
        FormKind::Module(r) => r,
        FormKind::Endo(r) => r * r,
    }
}

/// The coordinate polynomials of a value, in flat order (row-major for
/// endomorphisms).
fn value_polys(value: &FormValue) -> Vec<&Polynomial> {
    match value {
        FormValue::Scalar(p) => vec![p],
        FormValue::Module(v) => v.iter().collect(),
        FormValue::Endo(m) => {
            let mut out = Vec::with_capacity(m.rows() * m.cols());
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    out.push(m.get(i, j));
                }
            }
            out
        }
    }
}

/// Deterministic flat basis of Cᵖ(𝔤, V): coordinates are ordered by basis
/// subset rank, then value coordinate, then coefficient monomial (ascending
/// grlex). This order also fixes the solver's pivoting, so witnesses are
/// reproducible.
pub struct FlatBasis {
    algebra: Arc<LieRinehartData>,
    degree: usize,
    kind: FormKind,
    monomials: Vec<Monomial>,
    index_of: BTreeMap<Monomial, usize>,
    nsubsets: usize,
    ncoords: usize,
}

impl FlatBasis {
    /// The basis of degree-`degree` cochains in the regime's own window.
    pub fn new(
        algebra: &Arc<LieRinehartData>,
        degree: usize,
        kind: FormKind,
        regime: Regime,
    ) -> Result<FlatBasis> {
        regime.validate(algebra.ring())?;
        Ok(Self::with_monomials(
            algebra,
            degree,
            kind,
            monomials_for(algebra.ring(), regime, 0),
        ))
    }

    fn with_monomials(
        algebra: &Arc<LieRinehartData>,
        degree: usize,
        kind: FormKind,
        monomials: Vec<Monomial>,
    ) -> FlatBasis {
        let m = algebra.rank();
        let nsubsets = if degree > m { 0 } else { binomial(m, degree) };
        let index_of = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, mono)| (mono, i))
            .collect();
        FlatBasis {
            algebra: algebra.clone(),
            degree,
            kind,
            monomials,
            index_of,
            nsubsets,
            ncoords: coords_in(kind),
        }
    }

    pub fn dim(&self) -> usize {
        self.nsubsets * self.ncoords * self.monomials.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    fn flat_index(&self, subset: usize, coord: usize, mono: usize) -> usize {
        (subset * self.ncoords + coord) * self.monomials.len() + mono
    }

    /// The basis cochain at a flat index: one monomial in one coordinate of
    /// one subset value, everything else zero.
    pub fn basis_form(&self, index: usize) -> Form {
        let nm = self.monomials.len();
        let mono = index % nm;
        let coord = (index / nm) % self.ncoords;
        let subset = index / (nm * self.ncoords);
        let ring = self.algebra.ring();
        let poly = Polynomial::from_terms(ring, [(self.monomials[mono].clone(), Rational::one())])
            .expect("basis monomial fits the ring");
        let mut values = vec![FormValue::zero(ring, self.kind); self.nsubsets];
        values[subset] = self.unit_value(coord, poly);
        Form::from_values(&self.algebra, self.degree, self.kind, values)
            .expect("basis value shapes agree with the kind")
    }

    fn unit_value(&self, coord: usize, poly: Polynomial) -> FormValue {
        let ring = self.algebra.ring();
        match self.kind {
            FormKind::Scalar => FormValue::Scalar(poly),
            FormKind::Module(r) => {
                let mut v = vec![Polynomial::zero(ring); r];
                v[coord] = poly;
                FormValue::Module(v)
            }
            FormKind::Endo(r) => FormValue::Endo(PolyMatrix::from_fn(ring, r, r, |i, j| {
                if i * r + j == coord {
                    poly.clone()
                } else {
                    Polynomial::zero(ring)
                }
            })),
        }
    }

    /// Flatten a form into coordinates; `None` when some coefficient
    /// monomial falls outside this basis's window.
    pub fn form_to_coords(&self, form: &Form) -> Option<Vec<Rational>> {
        assert_eq!(form.degree(), self.degree, "flattening a mismatched degree");
        assert_eq!(form.kind(), self.kind, "flattening a mismatched kind");
        let mut coords = vec![Rational::zero(); self.dim()];
        for (subset, value) in form.values().iter().enumerate() {
            for (coord, poly) in value_polys(value).into_iter().enumerate() {
                for (mono, coeff) in poly.terms() {
                    let &mo = self.index_of.get(mono)?;
                    coords[self.flat_index(subset, coord, mo)] = coeff.clone();
                }
            }
        }
        Some(coords)
    }

    /// Reassemble the form with the given flat coordinates.
    pub fn coords_to_form(&self, coords: &[Rational]) -> Form {
        assert_eq!(coords.len(), self.dim(), "coordinate vector length");
        let ring = self.algebra.ring();
        let values: Vec<FormValue> = (0..self.nsubsets)
            .map(|subset| {
                let polys: Vec<Polynomial> = (0..self.ncoords)
                    .map(|coord| {
                        Polynomial::from_terms(
                            ring,
                            self.monomials.iter().enumerate().map(|(mo, mono)| {
                                (mono.clone(), coords[self.flat_index(subset, coord, mo)].clone())
                            }),
                        )
                        .expect("basis monomials fit the ring")
                    })
                    .collect();
                match self.kind {
                    FormKind::Scalar => FormValue::Scalar(polys.into_iter().next().unwrap()),
                    FormKind::Module(_) => FormValue::Module(polys),
                    FormKind::Endo(r) => {
                        FormValue::Endo(PolyMatrix::from_fn(ring, r, r, |i, j| {
                            polys[i * r + j].clone()
                        }))
                    }
                }
            })
            .collect();
        Form::from_values(&self.algebra, self.degree, self.kind, values)
            .expect("reassembled values agree with the kind")
    }
}

/// Worst-case total-degree shift of one application of the differential:
/// anchor terms differentiate (degree −1) and multiply by the anchor
/// coefficients, bracket terms multiply by structure coefficients, and
/// connection terms multiply by Christoffel entries.
pub fn degree_shift(algebra: &Arc<LieRinehartData>, action: &FormConnection) -> u32 {
    let mut delta: i64 = 0;
    for j in 0..algebra.rank() {
        for c in algebra.anchor_derivation(j).coefficients() {
            if !c.is_zero() {
                delta = delta.max(c.max_total_degree() as i64 - 1);
            }
        }
    }
    for i in 0..algebra.rank() {
        for j in (i + 1)..algebra.rank() {
            for c in &algebra.bracket_basis(i, j) {
                if !c.is_zero() {
                    delta = delta.max(c.max_total_degree() as i64);
                }
            }
        }
    }
    let conn = match action {
        FormConnection::Canonical => None,
        FormConnection::Module(c) | FormConnection::Endo(c) => Some(c),
    };
    if let Some(c) = conn {
        for j in 0..algebra.rank() {
            let gamma = c.christoffel(j);
            for a in 0..gamma.rows() {
                for b in 0..gamma.cols() {
                    let e = gamma.get(a, b);
                    if !e.is_zero() {
                        delta = delta.max(e.max_total_degree() as i64);
                    }
                }
            }
        }
    }
    delta.max(0) as u32
}

/// Domain (degree p) and codomain (degree p+1) bases for dᵖ. In the
/// degree-bounded regime the codomain window is widened by the degree
/// shift, so every image of a domain element fits — this is checked when
/// the matrix is assembled.
fn complex_bases(
    algebra: &Arc<LieRinehartData>,
    action: &FormConnection,
    degree: usize,
    regime: Regime,
) -> Result<(FlatBasis, FlatBasis)> {
    regime.validate(algebra.ring())?;
    action.matches(algebra, action.kind())?;
    let kind = action.kind();
    let domain_monos = monomials_for(algebra.ring(), regime, 0);
    let codomain_monos = match regime {
        Regime::Finite => domain_monos.clone(),
        Regime::DegreeBounded(_) => {
            monomials_for(algebra.ring(), regime, degree_shift(algebra, action))
        }
    };
    Ok((
        FlatBasis::with_monomials(algebra, degree, kind, domain_monos),
        FlatBasis::with_monomials(algebra, degree + 1, kind, codomain_monos),
    ))
}

fn assemble_differential(
    domain: &FlatBasis,
    codomain: &FlatBasis,
    action: &FormConnection,
) -> Result<QMatrix> {
    let mut mat = QMatrix::zero(codomain.dim(), domain.dim());
    for col in 0..domain.dim() {
        let image = domain.basis_form(col).differential(action)?;
        let coords = codomain.form_to_coords(&image).ok_or_else(|| {
            Error::DegreeGuard(
                "a differential image escapes the widened degree window; \
                 the computed shift bound is violated"
                    .into(),
            )
        })?;
        for (row, v) in coords.into_iter().enumerate() {
            if !v.is_zero() {
                mat.set(row, col, v);
            }
        }
    }
    Ok(mat)
}

/// The matrix of dᵖ: Cᵖ → Cᵖ⁺¹ over the flat bases (rows index the
/// codomain). Exposed so ranks can be recomputed independently.
pub fn differential_matrix(
    algebra: &Arc<LieRinehartData>,
    action: &FormConnection,
    degree: usize,
    regime: Regime,
) -> Result<QMatrix> {
    let (domain, codomain) = complex_bases(algebra, action, degree, regime)?;
    assemble_differential(&domain, &codomain, action)
}

/// Flattened dimensions of C⁰..Cᵐ in the regime's window.
pub fn cochain_dimensions(
    algebra: &Arc<LieRinehartData>,
    action: &FormConnection,
    regime: Regime,
) -> Result<Vec<usize>> {
    regime.validate(algebra.ring())?;
    action.matches(algebra, action.kind())?;
    let nm = monomials_for(algebra.ring(), regime, 0).len();
    let ncoords = coords_in(action.kind());
    let m = algebra.rank();
    Ok((0..=m).map(|p| binomial(m, p) * ncoords * nm).collect())
}

/// Cochain dimensions plus, in the finite regime, Betti numbers b₀..bₘ.
#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub regime: String,
    pub dims: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<usize>>,
}

/// `true` when the matrix is a scalar multiple of the identity, i.e. central
/// in End W.
fn is_central(mat: &PolyMatrix) -> bool {
    let n = mat.rows();
    for i in 0..n {
        for j in 0..n {
            if i != j && !mat.get(i, j).is_zero() {
                return false;
            }
        }
    }
    (1..n).all(|i| mat.get(i, i) == mat.get(0, 0))
}

/// The complex is only a complex (d² = 0) when the algebra axioms hold and
/// the action is flat; this rejects anything else, citing the first
/// curvature obstruction found.
fn require_flat_action(algebra: &Arc<LieRinehartData>, action: &FormConnection) -> Result<()> {
    if !algebra.verify_axioms().passed() {
        return Err(Error::NotFlat {
            label: "structure".into(),
            detail: "the Lie-Rinehart axioms fail, so the differential need not square to zero"
                .into(),
        });
    }
    let (conn, ad_action) = match action {
        FormConnection::Canonical => return Ok(()),
        FormConnection::Module(c) => (c, false),
        FormConnection::Endo(c) => (c, true),
    };
    let curvature = conn.curvature();
    let pairs = curvature.basis_subsets();
    for (idx, value) in curvature.values().iter().enumerate() {
        let mat = value.as_endo().expect("curvature values are endomorphisms");
        let obstructed = if ad_action {
            !is_central(mat)
        } else {
            !mat.is_zero()
        };
        if obstructed {
            let s = &pairs[idx];
            let what = if ad_action {
                "is not central, so the induced ad-action is not flat"
            } else {
                "is nonzero"
            };
            return Err(Error::NotFlat {
                label: conn.label().to_string(),
                detail: format!("curvature R(g{} ∧ g{}) {}: {}", s[0] + 1, s[1] + 1, what, mat),
            });
        }
    }
    Ok(())
}

/// Betti numbers of the flat complex: bₚ = dim ker dᵖ − rank dᵖ⁻¹, finite
/// regime only.
///
/// Preconditions, checked in order: the regime fits the ring, the algebra
/// axioms hold, and the action is flat (otherwise d² ≠ 0 and there is no
/// complex); the error cites the curvature obstruction. Kernel dimensions
/// come from rank-nullity on the exact ranks; that im dᵖ⁻¹ ⊆ ker dᵖ is
/// re-checked per degree by the subtraction staying nonnegative.
pub fn betti_numbers(
    algebra: &Arc<LieRinehartData>,
    action: &FormConnection,
    regime: Regime,
) -> Result<CohomologyReport> {
    if let Regime::DegreeBounded(_) = regime {
        return Err(Error::RegimeInvalid(
            "Betti numbers need the finite regime; degree-bounded runs report cochain \
             dimensions only"
                .into(),
        ));
    }
    regime.validate(algebra.ring())?;
    action.matches(algebra, action.kind())?;
    require_flat_action(algebra, action)?;
    let m = algebra.rank();
    let dims = cochain_dimensions(algebra, action, regime)?;
    let ranks: Vec<usize> = (0..=m)
        .map(|p| differential_matrix(algebra, action, p, regime).map(|mat| mat.rank()))
        .collect::<Result<_>>()?;
    let betti: Vec<usize> = (0..=m)
        .map(|p| {
            let kernel = dims[p] - ranks[p];
            let image_below = if p == 0 { 0 } else { ranks[p - 1] };
            kernel
                .checked_sub(image_below)
                .expect("im d ⊆ ker d for a verified flat action")
        })
        .collect();
    Ok(CohomologyReport {
        regime: regime.describe(),
        dims,
        betti: Some(betti),
    })
}

/// Outcome of a primitive search for d m = target.
#[derive(Clone, Debug)]
pub enum PrimitiveResult {
    /// A witness with d(witness) = target, re-verified symbolically.
    Found(Form),
    /// No witness with coefficients inside the degree window; carries no
    /// claim about larger degrees.
    NotFoundWithinBound(u32),
    /// Definitive: the closed form is not exact (finite regime).
    NotExact,
}

/// Search for a primitive of a closed form: a degree-(p−1) form m with
/// d m = target.
///
/// The target must be closed — this is checked first, since a non-closed
/// form is never exact and the query is ill-posed — and of positive degree
/// (the complex has nothing below degree 0). A witness found by the linear
/// solve is re-verified symbolically before being returned; the solver's
/// deterministic pivoting and zero free variables make the witness
/// reproducible.
pub fn find_primitive(
    target: &Form,
    action: &FormConnection,
    regime: Regime,
) -> Result<PrimitiveResult> {
    let algebra = target.algebra().clone();
    action.matches(&algebra, target.kind())?;
    regime.validate(algebra.ring())?;
    if !target.differential(action)?.is_zero() {
        return Err(Error::NotClosed(
            "the target has a nonzero differential, so it cannot be exact".into(),
        ));
    }
    if target.degree() == 0 {
        return Err(Error::DimensionMismatch(
            "a 0-form has no primitive: the complex has no degree below zero".into(),
        ));
    }
    let (domain, codomain) = complex_bases(&algebra, action, target.degree() - 1, regime)?;
    let Some(rhs) = codomain.form_to_coords(target) else {
        // Every image of a windowed witness stays inside the widened
        // codomain window, so a target outside it is unreachable from the
        // window — but may still be exact with a larger witness.
        return match regime {
            Regime::DegreeBounded(d) => Ok(PrimitiveResult::NotFoundWithinBound(d)),
            Regime::Finite => Err(Error::DegreeGuard(
                "a finite-regime form fell outside the full monomial basis".into(),
            )),
        };
    };
    let mat = assemble_differential(&domain, &codomain, action)?;
    let Some(solution) = mat.solve(&rhs) else {
        return Ok(match regime {
            Regime::Finite => PrimitiveResult::NotExact,
            Regime::DegreeBounded(d) => PrimitiveResult::NotFoundWithinBound(d),
        });
    };
    let witness = domain.coords_to_form(&solution);
    if witness.differential(action)?.sub(target)?.is_zero() {
        Ok(PrimitiveResult::Found(witness))
    } else {
        Err(Error::CertificationFailed(
            "the linear solve returned coordinates whose differential differs from the target"
                .into(),
        ))
    }
}

/// Verdict of a cohomology-class comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassVerdict {
    Equal,
    Unequal,
    Unknown,
}

/// Whether two closed forms represent the same cohomology class.
///
/// Degree 0 has no coboundaries, so equality there is literal equality of
/// values. Otherwise the difference goes to the primitive search: a found
/// primitive means Equal, a definitive miss (finite regime) means Unequal,
/// and a bounded miss means Unknown.
pub fn classes_equal(
    z1: &Form,
    z2: &Form,
    action: &FormConnection,
    regime: Regime,
) -> Result<ClassVerdict> {
    if !Arc::ptr_eq(z1.algebra(), z2.algebra()) {
        return Err(Error::KindMismatch(
            "class comparison needs forms over one algebra instance".into(),
        ));
    }
    if z1.degree() != z2.degree() || z1.kind() != z2.kind() {
        return Err(Error::KindMismatch(format!(
            "class comparison needs matching degree and kind; got degree {} vs {}",
            z1.degree(),
            z2.degree()
        )));
    }
    action.matches(z1.algebra(), z1.kind())?;
    for z in [z1, z2] {
        if !z.differential(action)?.is_zero() {
            return Err(Error::NotClosed(
                "both forms must be closed to compare their classes".into(),
            ));
        }
    }
    let diff = z1.sub(z2)?;
    if diff.is_zero() {
        return Ok(ClassVerdict::Equal);
    }
    if z1.degree() == 0 {
        return Ok(ClassVerdict::Unequal);
    }
    Ok(match find_primitive(&diff, action, regime)? {
        PrimitiveResult::Found(_) => ClassVerdict::Equal,
        PrimitiveResult::NotExact => ClassVerdict::Unequal,
        PrimitiveResult::NotFoundWithinBound(_) => ClassVerdict::Unknown,
    })
}
