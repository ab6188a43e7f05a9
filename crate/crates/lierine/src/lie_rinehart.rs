//! Lie-Rinehart algebras: a free A-module with antisymmetric bracket
//! structure constants and an anchor into derivations of A, plus the bracket
//! on general elements and verification of the defining axioms.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, RingSpec};

/// Hard cap on the rank of the algebra: forms are stored densely over the
/// C(m,p) subsets, so m stays desk-scale.
pub const MAX_RANK: usize = 12;

/// A k-derivation of the base ring, stored as coefficients of Σ cⱼ ∂/∂xⱼ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    ring: Arc<RingSpec>,
    coefficients: Vec<Polynomial>,
}

impl Derivation {
    /// Structural construction: one coefficient per ring variable, all in the
    /// given ring. Compatibility with a truncation ideal is a separate,
    /// reportable property — see [`Derivation::ideal_violations`] and
    /// [`Derivation::new_checked`].
    pub fn new(ring: &Arc<RingSpec>, coefficients: Vec<Polynomial>) -> Result<Derivation> {
        if coefficients.len() != ring.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "derivation has {} coefficients, ring has {} variables",
                coefficients.len(),
                ring.nvars()
            )));
        }
        for c in &coefficients {
            if c.ring() != ring {
                return Err(Error::RingMismatch(
                    "derivation coefficient lives in a different ring".into(),
                ));
            }
        }
        Ok(Derivation {
            ring: ring.clone(),
            coefficients,
        })
    }

    /// Construction that additionally requires the derivation to preserve the
    /// truncation ideal, so it is well defined on the quotient ring.
    pub fn new_checked(ring: &Arc<RingSpec>, coefficients: Vec<Polynomial>) -> Result<Derivation> {
        let d = Self::new(ring, coefficients)?;
        if let Some(v) = d.ideal_violations().into_iter().next() {
            return Err(Error::Manifest(format!(
                "derivation does not preserve the truncation ideal: applying it to {}^{} leaves {}",
                ring.variables()[v.variable_index],
                ring.bound(v.variable_index).unwrap(),
                v.image
            )));
        }
        Ok(d)
    }

    pub fn zero(ring: &Arc<RingSpec>) -> Derivation {
        Derivation {
            ring: ring.clone(),
            coefficients: vec![Polynomial::zero(ring); ring.nvars()],
        }
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn coefficients(&self) -> &[Polynomial] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Polynomial::is_zero)
    }

    /// Apply to a ring element: Σ cⱼ · ∂p/∂xⱼ, reduced.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if *p.ring() != self.ring {
            return Err(Error::RingMismatch(
                "derivation applied to an element of a different ring".into(),
            ));
        }
        let mut acc = Polynomial::zero(&self.ring);
        for (j, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&c.mul(&p.derivative(j)?));
        }
        Ok(acc)
    }

    /// The commutator δ∘η − η∘δ, again a derivation; its j-th coefficient is
    /// δ(ηⱼ) − η(δⱼ).
    pub fn commutator(&self, other: &Derivation) -> Result<Derivation> {
        let coeffs = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(dj, ej)| Ok(self.apply(ej)?.sub(&other.apply(dj)?)))
            .collect::<Result<Vec<_>>>()?;
        Derivation::new(&self.ring, coeffs)
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        Derivation {
            ring: self.ring.clone(),
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Derivation) -> Derivation {
        Derivation {
            ring: self.ring.clone(),
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    /// Left multiplication by a ring element (the A-module structure of
    /// Der_k(A)).
    pub fn scale_poly(&self, a: &Polynomial) -> Derivation {
        Derivation {
            ring: self.ring.clone(),
            coefficients: self.coefficients.iter().map(|c| c.mul(a)).collect(),
        }
    }

    /// On a truncated ring, the generators x_i^{d_i} the derivation fails to
    /// map into the ideal; empty means the derivation descends to the
    /// quotient. Always empty for untruncated rings.
    pub fn ideal_violations(&self) -> Vec<IdealViolation> {
        let mut out = Vec::new();
        for (i, bound) in self.ring.bounds().iter().enumerate() {
            let Some(d) = *bound else {
                continue;
            };
            // δ(x_i^d) = d·x_i^{d-1}·c_i; reduction deletes exactly the part
            // inside the ideal, so a nonzero reduced image is a violation.
            let xi_pow = Polynomial::from_terms(
                &self.ring,
                [(
                    crate::poly::Monomial::new(
                        (0..self.ring.nvars())
                            .map(|v| if v == i { d - 1 } else { 0 })
                            .collect(),
                    ),
                    crate::poly::rat_int(d as i64),
                )],
            )
            .expect("generator monomial matches the ring arity");
            let image = xi_pow.mul(&self.coefficients[i]);
            if !image.is_zero() {
                out.push(IdealViolation {
                    variable_index: i,
                    image: image.to_string(),
                });
            }
        }
        out
    }
}

/// Evidence that a derivation does not preserve the truncation ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealViolation {
    /// Index of the ideal generator x_i^{d_i} (0-based into the variables).
    pub variable_index: usize,
    /// Reduced image of the generator, which should have been 0.
    pub image: String,
}

/// An element Σ aᵢ gᵢ of the algebra, as coefficients over the free basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GElement {
    coefficients: Vec<Polynomial>,
}

impl GElement {
    pub fn new(coefficients: Vec<Polynomial>) -> GElement {
        GElement { coefficients }
    }

    pub fn coefficients(&self) -> &[Polynomial] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Polynomial::is_zero)
    }

    pub fn scale_poly(&self, a: &Polynomial) -> GElement {
        GElement {
            coefficients: self.coefficients.iter().map(|c| c.mul(a)).collect(),
        }
    }

    pub fn add(&self, other: &GElement) -> GElement {
        GElement {
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> GElement {
        GElement {
            coefficients: self.coefficients.iter().map(Polynomial::neg).collect(),
        }
    }
}

/// A (k,A)-Lie-Rinehart algebra on a free A-module of rank m: bracket
/// structure constants for basis pairs i<j and an anchor derivation per basis
/// element. Antisymmetry and vanishing diagonal are structural; the Jacobi
/// identity and anchor compatibility are checked by [`verify_axioms`], not
/// assumed.
///
/// [`verify_axioms`]: LieRinehartData::verify_axioms
#[derive(Debug)]
pub struct LieRinehartData {
    ring: Arc<RingSpec>,
    rank: usize,
    /// (i, j) with i < j (0-based) mapped to the m coefficients of [gᵢ, gⱼ].
    structure: BTreeMap<(usize, usize), Vec<Polynomial>>,
    anchor: Vec<Derivation>,
}

impl LieRinehartData {
    pub fn new(
        ring: &Arc<RingSpec>,
        rank: usize,
        structure: BTreeMap<(usize, usize), Vec<Polynomial>>,
        anchor: Vec<Derivation>,
    ) -> Result<Arc<LieRinehartData>> {
        if rank == 0 {
            return Err(Error::Manifest("algebra rank must be positive".into()));
        }
        if rank > MAX_RANK {
            return Err(Error::RankTooLarge {
                rank,
                max: MAX_RANK,
            });
        }
        for (&(i, j), coeffs) in &structure {
            if i >= j || j >= rank {
                return Err(Error::Manifest(format!(
                    "bracket indices must satisfy i < j <= rank; got ({}, {}) with rank {}",
                    i + 1,
                    j + 1,
                    rank
                )));
            }
            if coeffs.len() != rank {
                return Err(Error::DimensionMismatch(format!(
                    "bracket [g{}, g{}] has {} coefficients, expected {}",
                    i + 1,
                    j + 1,
                    coeffs.len(),
                    rank
                )));
            }
            for c in coeffs {
                if c.ring() != ring {
                    return Err(Error::RingMismatch(
                        "bracket coefficient lives in a different ring".into(),
                    ));
                }
            }
        }
        if anchor.len() != rank {
            return Err(Error::DimensionMismatch(format!(
                "anchor has {} derivations, expected rank {}",
                anchor.len(),
                rank
            )));
        }
        for d in &anchor {
            if d.ring() != ring {
                return Err(Error::RingMismatch(
                    "anchor derivation lives over a different ring".into(),
                ));
            }
        }
        Ok(Arc::new(LieRinehartData {
            ring: ring.clone(),
            rank,
            structure,
            anchor,
        }))
    }

    /// The abelian algebra with zero anchor (every bracket and derivation 0).
    pub fn abelian(ring: &Arc<RingSpec>, rank: usize) -> Result<Arc<LieRinehartData>> {
        let anchor = vec![Derivation::zero(ring); rank];
        Self::new(ring, rank, BTreeMap::new(), anchor)
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn anchor_derivation(&self, i: usize) -> &Derivation {
        &self.anchor[i]
    }

    pub fn zero_element(&self) -> GElement {
        GElement::new(vec![Polynomial::zero(&self.ring); self.rank])
    }

    pub fn basis_element(&self, i: usize) -> GElement {
        let mut coeffs = vec![Polynomial::zero(&self.ring); self.rank];
        coeffs[i] = Polynomial::one(&self.ring);
        GElement::new(coeffs)
    }

    fn require_element(&self, d: &GElement) -> Result<()> {
        if d.coefficients().len() != self.rank {
            return Err(Error::DimensionMismatch(format!(
                "element has {} coefficients, algebra rank is {}",
                d.coefficients().len(),
                self.rank
            )));
        }
        for c in d.coefficients() {
            if *c.ring() != self.ring {
                return Err(Error::RingMismatch(
                    "element coefficient lives in a different ring".into(),
                ));
            }
        }
        Ok(())
    }

    /// Coefficients of [gᵢ, gⱼ] for any pair, using antisymmetry for i ≥ j.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Polynomial> {
        assert!(i < self.rank && j < self.rank, "basis index out of range");
        let zero = || vec![Polynomial::zero(&self.ring); self.rank];
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => zero(),
            std::cmp::Ordering::Less => self.structure.get(&(i, j)).cloned().unwrap_or_else(zero),
            std::cmp::Ordering::Greater => self
                .structure
                .get(&(j, i))
                .map(|c| c.iter().map(Polynomial::neg).collect())
                .unwrap_or_else(zero),
        }
    }

    /// The anchor of a general element: α(Σ aᵢgᵢ) = Σ aᵢ·α(gᵢ), using axiom
    /// (1) as the definition of the A-linear extension.
    pub fn anchor_of(&self, d: &GElement) -> Result<Derivation> {
        self.require_element(d)?;
        let mut acc = Derivation::zero(&self.ring);
        for (i, a) in d.coefficients().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            acc = acc.add(&self.anchor[i].scale_poly(a));
        }
        Ok(acc)
    }

    /// α(d) applied to a ring element.
    pub fn anchor_apply(&self, d: &GElement, a: &Polynomial) -> Result<Polynomial> {
        self.anchor_of(d)?.apply(a)
    }

    /// The bracket of general elements, expanded through the structure
    /// constants and axiom (3):
    /// [Σ aᵢgᵢ, Σ bⱼgⱼ] = Σᵢⱼ aᵢbⱼ[gᵢ,gⱼ] + Σⱼ α(d)(bⱼ)gⱼ − Σᵢ α(e)(aᵢ)gᵢ.
    pub fn bracket_general(&self, d: &GElement, e: &GElement) -> Result<GElement> {
        self.require_element(d)?;
        self.require_element(e)?;
        let mut out = vec![Polynomial::zero(&self.ring); self.rank];
        for (i, a) in d.coefficients().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in e.coefficients().iter().enumerate() {
                if b.is_zero() || i == j {
                    continue;
                }
                let ab = a.mul(b);
                for (k, c) in self.bracket_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].add(&ab.mul(c));
                    }
                }
            }
        }
        let alpha_d = self.anchor_of(d)?;
        let alpha_e = self.anchor_of(e)?;
        for (j, b) in e.coefficients().iter().enumerate() {
            out[j] = out[j].add(&alpha_d.apply(b)?);
        }
        for (i, a) in d.coefficients().iter().enumerate() {
            out[i] = out[i].sub(&alpha_e.apply(a)?);
        }
        Ok(GElement::new(out))
    }

    /// Check the axioms that are properties of the data rather than of the
    /// representation: anchor compatibility α([gᵢ,gⱼ]) = [α(gᵢ), α(gⱼ)] on
    /// every basis pair (acting on each ring variable), the Jacobi identity
    /// on every basis triple, and well-definedness of each anchor derivation
    /// on the quotient ring. Violations are report content, not errors.
    pub fn verify_axioms(&self) -> AxiomReport {
        let mut report = AxiomReport {
            anchor_failures: Vec::new(),
            jacobi_failures: Vec::new(),
            truncation_failures: Vec::new(),
        };
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                let lhs = self
                    .anchor_of(&GElement::new(self.bracket_basis(i, j)))
                    .expect("bracket coefficients share the ring");
                let rhs = self.anchor[i]
                    .commutator(&self.anchor[j])
                    .expect("anchor derivations share the ring");
                for (v, (l, r)) in lhs
                    .coefficients()
                    .iter()
                    .zip(rhs.coefficients())
                    .enumerate()
                {
                    if l != r {
                        report.anchor_failures.push(AnchorFailure {
                            i: i + 1,
                            j: j + 1,
                            variable: self.ring.variables()[v].clone(),
                            bracket_anchor: l.to_string(),
                            commutator: r.to_string(),
                        });
                    }
                }
            }
        }
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                for k in j + 1..self.rank {
                    let (gi, gj, gk) = (
                        self.basis_element(i),
                        self.basis_element(j),
                        self.basis_element(k),
                    );
                    let cyc = |a: &GElement, b: &GElement, c: &GElement| {
                        self.bracket_general(a, &self.bracket_general(b, c).unwrap())
                            .unwrap()
                    };
                    let total = cyc(&gi, &gj, &gk)
                        .add(&cyc(&gj, &gk, &gi))
                        .add(&cyc(&gk, &gi, &gj));
                    if !total.is_zero() {
                        report.jacobi_failures.push(JacobiFailure {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                            remainder: total
                                .coefficients()
                                .iter()
                                .map(|p| p.to_string())
                                .collect(),
                        });
                    }
                }
            }
        }
        for (idx, d) in self.anchor.iter().enumerate() {
            for v in d.ideal_violations() {
                report.truncation_failures.push(TruncationFailure {
                    anchor_index: idx + 1,
                    variable: self.ring.variables()[v.variable_index].clone(),
                    image: v.image,
                });
            }
        }
        report
    }
}

/// Anchor-compatibility violation: α([gᵢ,gⱼ]) and [α(gᵢ),α(gⱼ)] act
/// differently on a ring variable. Indices are 1-based for reporting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnchorFailure {
    pub i: usize,
    pub j: usize,
    pub variable: String,
    pub bracket_anchor: String,
    pub commutator: String,
}

/// Jacobi violation on a basis triple; `remainder` holds the coefficients of
/// the nonzero cyclic sum. Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiFailure {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub remainder: Vec<String>,
}

/// An anchor derivation that is not well defined on the quotient ring.
/// `anchor_index` is 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncationFailure {
    pub anchor_index: usize,
    pub variable: String,
    pub image: String,
}

/// Outcome of [`LieRinehartData::verify_axioms`]: empty lists mean the data
/// is a genuine Lie-Rinehart algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub anchor_failures: Vec<AnchorFailure>,
    pub jacobi_failures: Vec<JacobiFailure>,
    pub truncation_failures: Vec<TruncationFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.anchor_failures.is_empty()
            && self.jacobi_failures.is_empty()
            && self.truncation_failures.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qxy() -> Arc<RingSpec> {
        RingSpec::new(vec!["x", "y"]).unwrap()
    }

    fn p(ring: &Arc<RingSpec>, s: &str) -> Polynomial {
        Polynomial::parse(ring, s).unwrap()
    }

    /// 𝔤 = ⟨∂x, ∂y⟩ over ℚ[x,y] with zero brackets.
    fn coordinate_fields() -> Arc<LieRinehartData> {
        let r = qxy();
        let anchor = vec![
            Derivation::new(&r, vec![p(&r, "1"), p(&r, "0")]).unwrap(),
            Derivation::new(&r, vec![p(&r, "0"), p(&r, "1")]).unwrap(),
        ];
        LieRinehartData::new(&r, 2, BTreeMap::new(), anchor).unwrap()
    }

    /// sl₂ over ℚ with basis e, h, f: [e,h] = −2e, [e,f] = h, [h,f] = −2f.
    pub(crate) fn sl2() -> Arc<LieRinehartData> {
        let r = RingSpec::new(Vec::<String>::new()).unwrap();
        let c = |s: &str| p(&r, s);
        let mut structure = BTreeMap::new();
        structure.insert((0, 1), vec![c("-2"), c("0"), c("0")]);
        structure.insert((0, 2), vec![c("0"), c("1"), c("0")]);
        structure.insert((1, 2), vec![c("0"), c("0"), c("-2")]);
        LieRinehartData::new(&r, 3, structure, vec![Derivation::zero(&r); 3]).unwrap()
    }

    #[test]
    fn anchor_apply_is_a_derivative() {
        let g = coordinate_fields();
        let r = g.ring().clone();
        let d = g.basis_element(0);
        assert_eq!(g.anchor_apply(&d, &p(&r, "x^2*y")).unwrap(), p(&r, "2*x*y"));
        let xd1 = d.scale_poly(&p(&r, "x"));
        assert!(g.anchor_apply(&xd1, &p(&r, "y")).unwrap().is_zero());
    }

    #[test]
    fn anchor_apply_on_truncated_ring() {
        let r = RingSpec::truncated(vec!["x"], vec![4]).unwrap();
        let anchor = vec![Derivation::new(&r, vec![p(&r, "x")]).unwrap()];
        let g = LieRinehartData::new(&r, 1, BTreeMap::new(), anchor).unwrap();
        assert_eq!(
            g.anchor_apply(&g.basis_element(0), &p(&r, "x^2")).unwrap(),
            p(&r, "2*x^2")
        );
    }

    #[test]
    fn bracket_general_expands_axiom_three() {
        let g = coordinate_fields();
        let r = g.ring().clone();
        // [g1, x·g2] = x·[g1,g2] + ∂x(x)·g2 = g2.
        let result = g
            .bracket_general(
                &g.basis_element(0),
                &g.basis_element(1).scale_poly(&p(&r, "x")),
            )
            .unwrap();
        assert_eq!(result, g.basis_element(1));
        // Abelian bracket on basis elements is zero.
        assert!(g
            .bracket_general(&g.basis_element(0), &g.basis_element(1))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn sl2_bracket_lookup() {
        let g = sl2();
        let result = g
            .bracket_general(&g.basis_element(0), &g.basis_element(2))
            .unwrap();
        assert_eq!(result, g.basis_element(1)); // [e,f] = h
        let back = g
            .bracket_general(&g.basis_element(2), &g.basis_element(0))
            .unwrap();
        assert_eq!(back, g.basis_element(1).neg());
    }

    #[test]
    fn sl2_passes_axioms() {
        assert!(sl2().verify_axioms().passed());
    }

    #[test]
    fn coordinate_fields_pass_axioms() {
        assert!(coordinate_fields().verify_axioms().passed());
    }

    #[test]
    fn broken_jacobi_is_reported() {
        // [g1,g2] = g3, [g2,g3] = g1, [g1,g3] = g1: the cyclic sum on
        // (1,2,3) leaves g3.
        let r = RingSpec::new(Vec::<String>::new()).unwrap();
        let mut structure = BTreeMap::new();
        let basis = |k: usize| {
            let mut v = vec![Polynomial::zero(&r); 3];
            v[k] = Polynomial::one(&r);
            v
        };
        structure.insert((0, 1), basis(2));
        structure.insert((1, 2), basis(0));
        structure.insert((0, 2), basis(0));
        let g = LieRinehartData::new(&r, 3, structure, vec![Derivation::zero(&r); 3]).unwrap();
        let report = g.verify_axioms();
        assert!(!report.passed());
        assert_eq!(report.jacobi_failures.len(), 1);
        let f = &report.jacobi_failures[0];
        assert_eq!((f.i, f.j, f.k), (1, 2, 3));
        assert!(report.anchor_failures.is_empty());
    }

    #[test]
    fn truncation_violation_is_reported() {
        // ∂x on ℚ[x]/(x⁴) maps x⁴ to 4x³, which survives reduction.
        let r = RingSpec::truncated(vec!["x"], vec![4]).unwrap();
        let anchor = vec![Derivation::new(&r, vec![p(&r, "1")]).unwrap()];
        let g = LieRinehartData::new(&r, 1, BTreeMap::new(), anchor).unwrap();
        let report = g.verify_axioms();
        assert_eq!(report.truncation_failures.len(), 1);
        assert_eq!(report.truncation_failures[0].image, "4*x^3");
        assert!(Derivation::new_checked(&r, vec![p(&r, "1")]).is_err());
        assert!(Derivation::new_checked(&r, vec![p(&r, "x")]).is_ok());
    }

    #[test]
    fn anchor_incompatibility_is_reported() {
        // Abelian bracket but non-commuting anchors: α(g1)=∂x, α(g2)=x∂x.
        let r = RingSpec::new(vec!["x"]).unwrap();
        let anchor = vec![
            Derivation::new(&r, vec![p(&r, "1")]).unwrap(),
            Derivation::new(&r, vec![p(&r, "x")]).unwrap(),
        ];
        let g = LieRinehartData::new(&r, 2, BTreeMap::new(), anchor).unwrap();
        let report = g.verify_axioms();
        assert_eq!(report.anchor_failures.len(), 1);
        assert_eq!(report.anchor_failures[0].commutator, "1");
        assert_eq!(report.anchor_failures[0].bracket_anchor, "0");
    }

    #[test]
    fn rank_cap_is_enforced() {
        let r = qxy();
        let result = LieRinehartData::new(
            &r,
            13,
            BTreeMap::new(),
            vec![Derivation::zero(&r); 13],
        );
        assert!(matches!(result, Err(Error::RankTooLarge { rank: 13, max: 12 })));
    }

    #[test]
    fn derivation_commutator_matches_application() {
        let r = qxy();
        let d = Derivation::new(&r, vec![p(&r, "x*y"), p(&r, "1")]).unwrap();
        let e = Derivation::new(&r, vec![p(&r, "y"), p(&r, "x^2")]).unwrap();
        let a = p(&r, "x^2*y - 3*x + 1/2*y^2");
        let lhs = d.commutator(&e).unwrap().apply(&a).unwrap();
        let rhs = d
            .apply(&e.apply(&a).unwrap())
            .unwrap()
            .sub(&e.apply(&d.apply(&a).unwrap()).unwrap());
        assert_eq!(lhs, rhs);
    }
}
