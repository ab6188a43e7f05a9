//! Curvature powers under the shuffle wedge, Chern components
//! chₙ = tr(Rⁿ)/n!, the full Chern character tr(exp R), and closedness
//! verification. The exponential is a finite sum: components vanish above
//! degree m, so n stops at floor(m/2).

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::combinatorics::factorial;
use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::forms::{Form, FormConnection, FormKind};
use crate::poly::Rational;

/// The Chern character of a connection: scalar components n ↦ chₙ of degree
/// 2n, for 0 ≤ n ≤ floor(m/2). Component 0 is the constant rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernForm {
    components: BTreeMap<usize, Form>,
}

impl ChernForm {
    /// The character with no components: the image of 0 ∈ K₀.
    pub fn zero() -> ChernForm {
        ChernForm {
            components: BTreeMap::new(),
        }
    }

    pub fn components(&self) -> &BTreeMap<usize, Form> {
        &self.components
    }

    pub fn component(&self, n: usize) -> Option<&Form> {
        self.components.get(&n)
    }

    /// Componentwise sum (matching degrees merge, missing components pass
    /// through).
    pub fn add(&self, other: &ChernForm) -> Result<ChernForm> {
        let mut components = self.components.clone();
        for (n, f) in &other.components {
            match components.remove(n) {
                None => {
                    components.insert(*n, f.clone());
                }
                Some(existing) => {
                    components.insert(*n, existing.add(f)?);
                }
            }
        }
        Ok(ChernForm { components })
    }

    /// Scale every component by an integer (K-theory classes carry integer
    /// multiplicities, possibly negative).
    pub fn scale_int(&self, k: i64) -> ChernForm {
        let c = crate::poly::rat_int(k);
        ChernForm {
            components: self
                .components
                .iter()
                .map(|(n, f)| (*n, f.scale(&c)))
                .collect(),
        }
    }

    /// Product under the shuffle wedge, collected by total degree:
    /// (ch·ch')ₙ = Σ_{a+b=n} ch_a ∧ ch'_b, truncated at floor(m/2).
    pub fn wedge(&self, other: &ChernForm) -> Result<ChernForm> {
        let mut components: BTreeMap<usize, Form> = BTreeMap::new();
        for (a, fa) in &self.components {
            for (b, fb) in &other.components {
                let n = a + b;
                let m = fa.algebra().rank();
                if 2 * n > m {
                    continue;
                }
                let term = fa.wedge(fb)?;
                match components.remove(&n) {
                    None => {
                        components.insert(n, term);
                    }
                    Some(existing) => {
                        components.insert(n, existing.add(&term)?);
                    }
                }
            }
        }
        Ok(ChernForm { components })
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(Form::is_zero)
    }
}

/// n-fold shuffle wedge of a degree-2 Endo form with itself; n = 0 yields
/// the degree-0 identity form.
pub fn curvature_power(r: &Form, n: usize) -> Result<Form> {
    let FormKind::Endo(rank) = r.kind() else {
        return Err(Error::KindMismatch(
            "curvature power takes an Endo-valued form".into(),
        ));
    };
    if r.degree() != 2 {
        return Err(Error::KindMismatch(format!(
            "curvature power takes a degree-2 form, got degree {}",
            r.degree()
        )));
    }
    let mut acc = Form::endo_identity(r.algebra(), rank);
    for _ in 0..n {
        acc = acc.wedge(r)?;
    }
    Ok(acc)
}

/// chₙ(W,∇) = tr(R∇ⁿ)/n! as a scalar form of degree 2n.
pub fn chern_component(c: &Connection, n: usize) -> Result<Form> {
    let power = curvature_power(&c.curvature(), n)?;
    let inv_fact = Rational::new(BigRational::one().numer().clone(), factorial(n as u32));
    Ok(power.trace_form()?.scale(&inv_fact))
}

/// The full Chern character tr(exp R∇) = Σₙ chₙ, a finite sum because
/// Λ^{>m}𝔤 = 0.
pub fn chern_character(c: &Connection) -> Result<ChernForm> {
    let m = c.algebra().rank();
    let mut components = BTreeMap::new();
    for n in 0..=m / 2 {
        components.insert(n, chern_component(c, n)?);
    }
    Ok(ChernForm { components })
}

/// One closedness verdict: whether d of the tagged scalar form vanished.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosednessEntry {
    pub n: usize,
    pub degree: usize,
    pub closed: bool,
}

/// Outcome of closedness verification for a family of scalar forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosednessReport {
    pub entries: Vec<ClosednessEntry>,
}

impl ClosednessReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.closed)
    }
}

/// Check d = 0 (with the canonical action on A) for each tagged scalar form.
pub fn closedness_of(forms: &[(usize, &Form)]) -> Result<ClosednessReport> {
    let mut entries = Vec::with_capacity(forms.len());
    for (n, f) in forms {
        if f.kind() != FormKind::Scalar {
            return Err(Error::KindMismatch(
                "closedness verification takes scalar forms".into(),
            ));
        }
        let closed = f.differential(&FormConnection::Canonical)?.is_zero();
        entries.push(ClosednessEntry {
            n: *n,
            degree: f.degree(),
            closed,
        });
    }
    Ok(ClosednessReport { entries })
}

/// Verify that every component of the Chern character is a closed form.
pub fn verify_closed(c: &Connection) -> Result<ClosednessReport> {
    let ch = chern_character(c)?;
    let tagged: Vec<(usize, &Form)> = ch.components().iter().map(|(n, f)| (*n, f)).collect();
    closedness_of(&tagged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::FormValue;
    use crate::lie_rinehart::{Derivation, LieRinehartData};
    use crate::matrix::PolyMatrix;
    use crate::poly::{rat, rat_int, Polynomial, RingSpec};
    use std::sync::Arc;

    fn p(ring: &Arc<RingSpec>, s: &str) -> Polynomial {
        Polynomial::parse(ring, s).unwrap()
    }

    /// 𝔤 = ⟨∂x,...⟩ over ℚ[vars...], abelian with coordinate anchors.
    fn coordinate_fields(vars: Vec<&str>) -> Arc<LieRinehartData> {
        let n = vars.len();
        let r = RingSpec::new(vars).unwrap();
        let anchor = (0..n)
            .map(|i| {
                let coeffs = (0..n)
                    .map(|j| {
                        if i == j {
                            Polynomial::one(&r)
                        } else {
                            Polynomial::zero(&r)
                        }
                    })
                    .collect();
                Derivation::new(&r, coeffs).unwrap()
            })
            .collect();
        LieRinehartData::new(&r, n, std::collections::BTreeMap::new(), anchor).unwrap()
    }

    fn rank1(g: &Arc<LieRinehartData>, gammas: Vec<&str>, label: &str) -> Arc<Connection> {
        let r = g.ring();
        let christoffel = gammas
            .into_iter()
            .map(|s| PolyMatrix::from_rows(r, vec![vec![p(r, s)]]).unwrap())
            .collect();
        Connection::new(g, 1, christoffel, label).unwrap()
    }

    #[test]
    fn flat_connection_character_is_the_rank() {
        let g = coordinate_fields(vec!["x", "y"]);
        let c = Connection::trivial(&g, 3, "w").unwrap();
        let ch = chern_character(&c).unwrap();
        assert_eq!(
            ch.component(0).unwrap().values()[0],
            FormValue::Scalar(p(g.ring(), "3"))
        );
        assert!(ch.component(1).unwrap().is_zero());
        assert_eq!(ch.components().len(), 2);
    }

    #[test]
    fn line_bundle_character() {
        let g = coordinate_fields(vec!["x", "y"]);
        let c = rank1(&g, vec!["0", "x"], "line");
        let ch = chern_character(&c).unwrap();
        assert_eq!(
            ch.component(0).unwrap().values()[0],
            FormValue::Scalar(p(g.ring(), "1"))
        );
        assert_eq!(
            ch.component(1).unwrap().eval_basis(&[0, 1]),
            FormValue::Scalar(p(g.ring(), "1"))
        );
    }

    #[test]
    fn curvature_power_basics() {
        let g = coordinate_fields(vec!["x", "y"]);
        let c = rank1(&g, vec!["0", "x"], "line");
        let r = c.curvature();
        assert_eq!(curvature_power(&r, 1).unwrap(), r);
        let r2 = curvature_power(&r, 2).unwrap();
        assert_eq!(r2.degree(), 4);
        assert!(r2.is_zero());
        let r0 = curvature_power(&r, 0).unwrap();
        assert_eq!(r0, Form::endo_identity(&g, 1));
        // Non-curvature inputs are rejected.
        assert!(curvature_power(&r0, 1).is_err());
        assert!(curvature_power(&Form::zero(&g, 1, FormKind::Scalar), 1).is_err());
    }

    /// Two line bundles over rank-4 coordinate fields with curvature on both
    /// basis pairs (g1,g2) and (g3,g4), so that squares are nonzero.
    fn rank4_pair() -> (Arc<LieRinehartData>, Arc<Connection>, Arc<Connection>) {
        let g = coordinate_fields(vec!["x", "y", "u", "v"]);
        let a = rank1(&g, vec!["0", "x", "0", "u"], "a");
        let b = rank1(&g, vec!["0", "2*x", "0", "3*u"], "b");
        (g, a, b)
    }

    #[test]
    fn curvature_power_of_direct_sum_is_block_sum_of_powers() {
        let (_, a, b) = rank4_pair();
        let s = Connection::direct_sum(&a, &b).unwrap();
        for n in 0..=2 {
            let lhs = curvature_power(&s.curvature(), n).unwrap();
            let rhs = crate::forms::endo_block_sum(
                &curvature_power(&a.curvature(), n).unwrap(),
                &curvature_power(&b.curvature(), n).unwrap(),
            )
            .unwrap();
            assert_eq!(lhs, rhs);
        }
        // The degree-4 squares are genuinely nonzero here.
        assert!(!curvature_power(&a.curvature(), 2).unwrap().is_zero());
    }

    #[test]
    fn character_is_additive_on_direct_sums() {
        let (_, a, b) = rank4_pair();
        let s = Connection::direct_sum(&a, &b).unwrap();
        let lhs = chern_character(&s).unwrap();
        let rhs = chern_character(&a)
            .unwrap()
            .add(&chern_character(&b).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn character_is_multiplicative_on_tensor_products() {
        let (_, a, b) = rank4_pair();
        let t = Connection::tensor(&a, &b).unwrap();
        let lhs = chern_character(&t).unwrap();
        let rhs = chern_character(&a)
            .unwrap()
            .wedge(&chern_character(&b).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        // The degree-4 component is nonzero, so this exercises the cross
        // terms of the product, not just rank bookkeeping.
        assert!(!lhs.component(2).unwrap().is_zero());
    }

    #[test]
    fn tensor_of_plane_line_bundles() {
        let g = coordinate_fields(vec!["x", "y"]);
        let a = rank1(&g, vec!["0", "x"], "a");
        let b = rank1(&g, vec!["0", "2*x"], "b");
        let t = Connection::tensor(&a, &b).unwrap();
        let ch = chern_character(&t).unwrap();
        assert_eq!(
            ch.component(1).unwrap().eval_basis(&[0, 1]),
            FormValue::Scalar(p(g.ring(), "3"))
        );
        // m = 2 kills the degree-4 cross term, so the product of characters
        // agrees.
        let prod = chern_character(&a)
            .unwrap()
            .wedge(&chern_character(&b).unwrap())
            .unwrap();
        assert_eq!(ch, prod);
    }

    #[test]
    fn chern_components_use_inverse_factorials() {
        let (_, a, _) = rank4_pair();
        let ch2 = chern_component(&a, 2).unwrap();
        let tr_r2 = curvature_power(&a.curvature(), 2)
            .unwrap()
            .trace_form()
            .unwrap();
        assert_eq!(ch2, tr_r2.scale(&rat(1, 2)));
        // Components above floor(m/2) are zero forms.
        assert!(chern_component(&a, 3).unwrap().is_zero());
    }

    #[test]
    fn characters_are_closed() {
        let (_, a, b) = rank4_pair();
        for c in [&a, &b, &Connection::tensor(&a, &b).unwrap()] {
            let report = verify_closed(c).unwrap();
            assert!(report.passed());
            assert_eq!(report.entries.len(), 3);
        }
    }

    #[test]
    fn corrupted_form_fails_closedness() {
        let g = coordinate_fields(vec!["x", "y"]);
        // φ(g1) = y, φ(g2) = 0: dφ(g1∧g2) = ∂x(0) − ∂y(y) = −1 ≠ 0.
        let phi = Form::from_values(
            &g,
            1,
            FormKind::Scalar,
            vec![
                FormValue::Scalar(p(g.ring(), "y")),
                FormValue::Scalar(Polynomial::zero(g.ring())),
            ],
        )
        .unwrap();
        let closed = Form::scalar_constant(&g, rat_int(2));
        let report = closedness_of(&[(0, &closed), (1, &phi)]).unwrap();
        assert!(!report.passed());
        assert_eq!(report.entries[1].degree, 1);
        assert!(!report.entries[1].closed);
        assert!(report.entries[0].closed);
    }
}
