//! 𝔤-connections on free A-modules, represented by Christoffel matrices:
//! ∇_{gⱼ}(w) = α(gⱼ)(w) entrywise + Γⱼ·w. Curvature, flatness, the induced
//! ad-connection, direct sums, tensor products, and the torsor structure
//! over Endo-valued 1-forms.

use std::sync::Arc;

use crate::combinatorics::subsets;
use crate::error::{Error, Result};
use crate::forms::{Form, FormConnection, FormKind, FormValue};
use crate::lie_rinehart::{GElement, LieRinehartData};
use crate::matrix::PolyMatrix;
use crate::poly::Polynomial;

/// How a connection was constructed; direct sums and tensor products retain
/// their operand labels so the K-theory layer can reduce syntactically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Atom,
    Sum { left: String, right: String },
    Tensor { left: String, right: String },
}

/// A 𝔤-connection on a free module of rank r, with a label for registries
/// and reports.
#[derive(Debug)]
pub struct Connection {
    algebra: Arc<LieRinehartData>,
    rank: usize,
    christoffel: Vec<PolyMatrix>,
    label: String,
    provenance: Provenance,
}

impl PartialEq for Connection {
    /// Mathematical equality: same algebra instance and the same Christoffel
    /// data. Labels and provenance are bookkeeping and do not participate.
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra)
            && self.rank == other.rank
            && self.christoffel == other.christoffel
    }
}

impl Connection {
    pub fn new(
        algebra: &Arc<LieRinehartData>,
        rank: usize,
        christoffel: Vec<PolyMatrix>,
        label: impl Into<String>,
    ) -> Result<Arc<Connection>> {
        Self::with_provenance(algebra, rank, christoffel, label.into(), Provenance::Atom)
    }

    fn with_provenance(
        algebra: &Arc<LieRinehartData>,
        rank: usize,
        christoffel: Vec<PolyMatrix>,
        label: String,
        provenance: Provenance,
    ) -> Result<Arc<Connection>> {
        if rank == 0 {
            return Err(Error::Manifest("module rank must be positive".into()));
        }
        if label.is_empty() {
            return Err(Error::Manifest("connection label must be nonempty".into()));
        }
        if christoffel.len() != algebra.rank() {
            return Err(Error::DimensionMismatch(format!(
                "connection '{label}' has {} Christoffel matrices, algebra rank is {}",
                christoffel.len(),
                algebra.rank()
            )));
        }
        for (j, g) in christoffel.iter().enumerate() {
            if g.rows() != rank || g.cols() != rank {
                return Err(Error::DimensionMismatch(format!(
                    "connection '{label}': Christoffel matrix {} is {}x{}, expected {rank}x{rank}",
                    j + 1,
                    g.rows(),
                    g.cols()
                )));
            }
            if g.ring() != algebra.ring() {
                return Err(Error::RingMismatch(format!(
                    "connection '{label}': Christoffel matrix {} lives over a different ring",
                    j + 1
                )));
            }
        }
        Ok(Arc::new(Connection {
            algebra: algebra.clone(),
            rank,
            christoffel,
            label,
            provenance,
        }))
    }

    /// The trivial connection (all Christoffel matrices zero).
    pub fn trivial(
        algebra: &Arc<LieRinehartData>,
        rank: usize,
        label: impl Into<String>,
    ) -> Result<Arc<Connection>> {
        let zero = PolyMatrix::zero(algebra.ring(), rank, rank);
        Self::new(algebra, rank, vec![zero; algebra.rank()], label)
    }

    pub fn algebra(&self) -> &Arc<LieRinehartData> {
        &self.algebra
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn christoffel(&self, j: usize) -> &PolyMatrix {
        &self.christoffel[j]
    }

    /// A relabeled copy sharing the same data.
    pub fn relabel(&self, label: impl Into<String>) -> Arc<Connection> {
        Arc::new(Connection {
            algebra: self.algebra.clone(),
            rank: self.rank,
            christoffel: self.christoffel.clone(),
            label: label.into(),
            provenance: self.provenance.clone(),
        })
    }

    /// ∇_{gⱼ}(w): entrywise anchor derivative plus the Christoffel action.
    pub fn apply_basis(&self, j: usize, w: &[Polynomial]) -> Vec<Polynomial> {
        assert_eq!(w.len(), self.rank, "module element length");
        let alpha = self.algebra.anchor_derivation(j);
        let derived: Vec<Polynomial> = w
            .iter()
            .map(|p| alpha.apply(p).expect("element shares the algebra ring"))
            .collect();
        let gamma_w = self.christoffel[j].mul_vec(w);
        derived
            .iter()
            .zip(&gamma_w)
            .map(|(a, b)| a.add(b))
            .collect()
    }

    /// ∇_d(w) for a general element d, by A-linearity of ∇ in d.
    pub fn apply(&self, d: &GElement, w: &[Polynomial]) -> Result<Vec<Polynomial>> {
        if d.coefficients().len() != self.algebra.rank() {
            return Err(Error::DimensionMismatch(
                "argument does not match the algebra rank".into(),
            ));
        }
        if w.len() != self.rank {
            return Err(Error::DimensionMismatch(format!(
                "module element has {} entries, connection rank is {}",
                w.len(),
                self.rank
            )));
        }
        for p in d.coefficients().iter().chain(w) {
            if *p.ring() != self.algebra.ring().clone() {
                return Err(Error::RingMismatch(
                    "input lives over a different ring".into(),
                ));
            }
        }
        let mut acc = vec![Polynomial::zero(self.algebra.ring()); self.rank];
        for (j, dj) in d.coefficients().iter().enumerate() {
            if dj.is_zero() {
                continue;
            }
            for (slot, v) in acc.iter_mut().zip(self.apply_basis(j, w)) {
                *slot = slot.add(&v.mul(dj));
            }
        }
        Ok(acc)
    }

    /// Curvature as a degree-2 Endo form, via the Christoffel formula
    ///
    /// R(gᵢ∧gⱼ) = α(gᵢ)(Γⱼ) − α(gⱼ)(Γᵢ) + ΓᵢΓⱼ − ΓⱼΓᵢ − Σₖ cᵏᵢⱼ Γₖ.
    pub fn curvature(&self) -> Form {
        let m = self.algebra.rank();
        let mut values = Vec::new();
        for s in subsets(m, 2) {
            values.push(FormValue::Endo(self.curvature_value(s[0], s[1])));
        }
        Form::from_values(&self.algebra, 2, FormKind::Endo(self.rank), values)
            .expect("curvature values are shaped by construction")
    }

    fn curvature_value(&self, i: usize, j: usize) -> PolyMatrix {
        let ai = self.algebra.anchor_derivation(i);
        let aj = self.algebra.anchor_derivation(j);
        let derive = |d: &crate::lie_rinehart::Derivation, m: &PolyMatrix| {
            m.map(|p| d.apply(p).expect("christoffel shares the algebra ring"))
        };
        let mut val = derive(ai, &self.christoffel[j])
            .sub(&derive(aj, &self.christoffel[i]))
            .add(&self.christoffel[i].commutator(&self.christoffel[j]));
        for (k, ck) in self.algebra.bracket_basis(i, j).iter().enumerate() {
            if !ck.is_zero() {
                val = val.sub(&self.christoffel[k].scale_poly(ck));
            }
        }
        val
    }

    /// Curvature value computed literally as [∇_{gᵢ},∇_{gⱼ}] − ∇_{[gᵢ,gⱼ]}
    /// column by column with [`Connection::apply`]; cross-checks the
    /// Christoffel formula.
    pub fn curvature_by_application(&self, i: usize, j: usize) -> PolyMatrix {
        let ring = self.algebra.ring();
        let gi = self.algebra.basis_element(i);
        let gj = self.algebra.basis_element(j);
        let bracket = GElement::new(self.algebra.bracket_basis(i, j));
        let mut columns = Vec::with_capacity(self.rank);
        for k in 0..self.rank {
            let mut e = vec![Polynomial::zero(ring); self.rank];
            e[k] = Polynomial::one(ring);
            let fwd = self.apply(&gi, &self.apply(&gj, &e).unwrap()).unwrap();
            let back = self.apply(&gj, &self.apply(&gi, &e).unwrap()).unwrap();
            let br = self.apply(&bracket, &e).unwrap();
            columns.push(
                fwd.iter()
                    .zip(&back)
                    .zip(&br)
                    .map(|((a, b), c)| a.sub(b).sub(c))
                    .collect::<Vec<_>>(),
            );
        }
        PolyMatrix::from_fn(ring, self.rank, self.rank, |row, col| {
            columns[col][row].clone()
        })
    }

    pub fn is_flat(&self) -> bool {
        self.curvature().is_zero()
    }

    /// Block-diagonal direct sum; the label records the summands.
    pub fn direct_sum(a: &Arc<Connection>, b: &Arc<Connection>) -> Result<Arc<Connection>> {
        if !Arc::ptr_eq(&a.algebra, &b.algebra) {
            return Err(Error::KindMismatch(
                "direct sum of connections over different algebra instances".into(),
            ));
        }
        let christoffel = a
            .christoffel
            .iter()
            .zip(&b.christoffel)
            .map(|(x, y)| x.block_diag(y))
            .collect();
        Self::with_provenance(
            &a.algebra,
            a.rank + b.rank,
            christoffel,
            format!("({}⊕{})", a.label, b.label),
            Provenance::Sum {
                left: a.label.clone(),
                right: b.label.clone(),
            },
        )
    }

    /// Tensor product connection ∇⊗1 + 1⊗∇' on the Kronecker basis
    /// (i,j) ↦ (i−1)·r₂ + j: Γⱼ^⊗ = Γⱼ⊗Id + Id⊗Γⱼ'.
    pub fn tensor(a: &Arc<Connection>, b: &Arc<Connection>) -> Result<Arc<Connection>> {
        if !Arc::ptr_eq(&a.algebra, &b.algebra) {
            return Err(Error::KindMismatch(
                "tensor of connections over different algebra instances".into(),
            ));
        }
        let ring = a.algebra.ring();
        let id_a = PolyMatrix::identity(ring, a.rank);
        let id_b = PolyMatrix::identity(ring, b.rank);
        let christoffel = a
            .christoffel
            .iter()
            .zip(&b.christoffel)
            .map(|(x, y)| x.kron(&id_b).add(&id_a.kron(y)))
            .collect();
        Self::with_provenance(
            &a.algebra,
            a.rank * b.rank,
            christoffel,
            format!("({}⊗{})", a.label, b.label),
            Provenance::Tensor {
                left: a.label.clone(),
                right: b.label.clone(),
            },
        )
    }

    /// Shift by an Endo-valued 1-form: Γⱼ ← Γⱼ + φ(gⱼ). Inverse of
    /// [`Connection::difference`].
    pub fn add_one_form(&self, phi: &Form) -> Result<Arc<Connection>> {
        if !Arc::ptr_eq(phi.algebra(), &self.algebra) {
            return Err(Error::KindMismatch(
                "one-form lives over a different algebra instance".into(),
            ));
        }
        if phi.degree() != 1 || phi.kind() != FormKind::Endo(self.rank) {
            return Err(Error::KindMismatch(format!(
                "connection shift needs an Endo degree-1 form of rank {}, got degree {} kind {:?}",
                self.rank,
                phi.degree(),
                phi.kind()
            )));
        }
        let christoffel = self
            .christoffel
            .iter()
            .zip(phi.values())
            .map(|(g, v)| g.add(v.as_endo().unwrap()))
            .collect();
        Self::with_provenance(
            &self.algebra,
            self.rank,
            christoffel,
            format!("({}+phi)", self.label),
            Provenance::Atom,
        )
    }

    /// The unique Endo 1-form with a = b + φ: gⱼ ↦ Γⱼ⁽ᵃ⁾ − Γⱼ⁽ᵇ⁾.
    pub fn difference(a: &Arc<Connection>, b: &Arc<Connection>) -> Result<Form> {
        if !Arc::ptr_eq(&a.algebra, &b.algebra) {
            return Err(Error::KindMismatch(
                "difference of connections over different algebra instances".into(),
            ));
        }
        if a.rank != b.rank {
            return Err(Error::DimensionMismatch(format!(
                "difference of connections of ranks {} and {}",
                a.rank, b.rank
            )));
        }
        let values = a
            .christoffel
            .iter()
            .zip(&b.christoffel)
            .map(|(x, y)| FormValue::Endo(x.sub(y)))
            .collect();
        Form::from_values(&a.algebra, 1, FormKind::Endo(a.rank), values)
    }

    /// The induced connection ad∇ on End W, ad∇_δ(φ) = [∇_δ, φ], as the
    /// action that differentiates Endo-valued forms.
    pub fn ad(self: &Arc<Self>) -> FormConnection {
        FormConnection::Endo(self.clone())
    }

    /// This connection as the covariant action on Module-valued forms.
    pub fn module_action(self: &Arc<Self>) -> FormConnection {
        FormConnection::Module(self.clone())
    }
}
