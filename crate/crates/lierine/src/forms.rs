//! The Lie-Rinehart cochain groups Cᵖ(𝔤,V) for V ∈ {A, W, End W}: alternating
//! A-multilinear forms on the free basis, the differential of the standard
//! complex, the shuffle wedge product, and the trace map.
//!
//! A degree-p form is stored by its values on the C(m,p) strictly increasing
//! basis subsets in lexicographic order; its value everywhere else is the
//! alternating A-multilinear extension.

use std::sync::Arc;

use crate::combinatorics::{shuffle_sign, sort_with_sign, subset_rank, subsets};
use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::lie_rinehart::{GElement, LieRinehartData};
use crate::matrix::PolyMatrix;
use crate::poly::{Polynomial, Rational};

/// The coefficient module of a form: the base ring A, a free module W of a
/// given rank, or its endomorphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    Scalar,
    Module(usize),
    Endo(usize),
}

impl FormKind {
    /// The kind of a wedge-product value; `None` when the kinds do not
    /// compose. Supported compositions: Scalar·Scalar, Scalar·Module,
    /// Scalar·Endo, and Endo·Endo (matrix composition).
    fn compose(self, other: FormKind) -> Option<FormKind> {
        match (self, other) {
            (FormKind::Scalar, k) => Some(k),
            (FormKind::Endo(r), FormKind::Endo(s)) if r == s => Some(FormKind::Endo(r)),
            _ => None,
        }
    }
}

/// One value of a form: an element of A, of W, or of End W.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormValue {
    Scalar(Polynomial),
    Module(Vec<Polynomial>),
    Endo(PolyMatrix),
}

impl FormValue {
    pub fn zero(ring: &Arc<crate::poly::RingSpec>, kind: FormKind) -> FormValue {
        match kind {
            FormKind::Scalar => FormValue::Scalar(Polynomial::zero(ring)),
            FormKind::Module(r) => FormValue::Module(vec![Polynomial::zero(ring); r]),
            FormKind::Endo(r) => FormValue::Endo(PolyMatrix::zero(ring, r, r)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FormValue::Scalar(p) => p.is_zero(),
            FormValue::Module(v) => v.iter().all(Polynomial::is_zero),
            FormValue::Endo(m) => m.is_zero(),
        }
    }

    pub fn add(&self, other: &FormValue) -> FormValue {
        match (self, other) {
            (FormValue::Scalar(a), FormValue::Scalar(b)) => FormValue::Scalar(a.add(b)),
            (FormValue::Module(a), FormValue::Module(b)) => {
                FormValue::Module(a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
            }
            (FormValue::Endo(a), FormValue::Endo(b)) => FormValue::Endo(a.add(b)),
            _ => panic!("form value kind mismatch (enforced at construction)"),
        }
    }

    pub fn sub(&self, other: &FormValue) -> FormValue {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FormValue {
        match self {
            FormValue::Scalar(p) => FormValue::Scalar(p.neg()),
            FormValue::Module(v) => FormValue::Module(v.iter().map(Polynomial::neg).collect()),
            FormValue::Endo(m) => FormValue::Endo(m.neg()),
        }
    }

    pub fn scale(&self, c: &Rational) -> FormValue {
        match self {
            FormValue::Scalar(p) => FormValue::Scalar(p.scale(c)),
            FormValue::Module(v) => FormValue::Module(v.iter().map(|x| x.scale(c)).collect()),
            FormValue::Endo(m) => FormValue::Endo(m.scale(c)),
        }
    }

    pub fn scale_int(&self, n: i64) -> FormValue {
        self.scale(&crate::poly::rat_int(n))
    }

    /// Multiplication by a ring element (the A-module structure of V).
    pub fn scale_poly(&self, a: &Polynomial) -> FormValue {
        match self {
            FormValue::Scalar(p) => FormValue::Scalar(p.mul(a)),
            FormValue::Module(v) => FormValue::Module(v.iter().map(|x| x.mul(a)).collect()),
            FormValue::Endo(m) => FormValue::Endo(m.scale_poly(a)),
        }
    }

    /// The value product used by the wedge: module action for scalars,
    /// composition (matrix product, first∘second) for endomorphisms.
    fn product(&self, other: &FormValue) -> FormValue {
        match (self, other) {
            (FormValue::Scalar(a), _) => other.scale_poly(a),
            (FormValue::Endo(a), FormValue::Endo(b)) => FormValue::Endo(a.mul(b)),
            _ => panic!("form value product kind mismatch (checked by wedge)"),
        }
    }

    pub fn as_scalar(&self) -> Option<&Polynomial> {
        match self {
            FormValue::Scalar(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_module(&self) -> Option<&[Polynomial]> {
        match self {
            FormValue::Module(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_endo(&self) -> Option<&PolyMatrix> {
        match self {
            FormValue::Endo(m) => Some(m),
            _ => None,
        }
    }
}

/// The covariant action a differential differentiates with: the canonical
/// flat action on A, a connection on W, or the induced ad-connection on
/// End W (ad∇_δ = [∇_δ, −]).
#[derive(Clone)]
pub enum FormConnection {
    Canonical,
    Module(Arc<Connection>),
    Endo(Arc<Connection>),
}

impl FormConnection {
    /// ∇_{gⱼ} applied to one value.
    pub fn apply_basis(
        &self,
        algebra: &Arc<LieRinehartData>,
        j: usize,
        value: &FormValue,
    ) -> FormValue {
        let alpha = algebra.anchor_derivation(j);
        let derive = |p: &Polynomial| alpha.apply(p).expect("value shares the algebra ring");
        match (self, value) {
            (FormConnection::Canonical, FormValue::Scalar(a)) => FormValue::Scalar(derive(a)),
            (FormConnection::Module(c), FormValue::Module(w)) => {
                FormValue::Module(c.apply_basis(j, w))
            }
            (FormConnection::Endo(c), FormValue::Endo(phi)) => {
                let gamma = c.christoffel(j);
                FormValue::Endo(phi.map(derive).add(&gamma.commutator(phi)))
            }
            _ => panic!("form connection kind mismatch (checked before assembly)"),
        }
    }

    /// ∇_d for a general element, by A-linearity in d.
    pub fn apply_general(
        &self,
        algebra: &Arc<LieRinehartData>,
        d: &GElement,
        value: &FormValue,
    ) -> FormValue {
        let mut acc = FormValue::zero(algebra.ring(), value_kind(value));
        for (j, dj) in d.coefficients().iter().enumerate() {
            if dj.is_zero() {
                continue;
            }
            acc = acc.add(&self.apply_basis(algebra, j, value).scale_poly(dj));
        }
        acc
    }

    /// The form kind this action differentiates.
    pub fn kind(&self) -> FormKind {
        match self {
            FormConnection::Canonical => FormKind::Scalar,
            FormConnection::Module(c) => FormKind::Module(c.rank()),
            FormConnection::Endo(c) => FormKind::Endo(c.rank()),
        }
    }

    pub(crate) fn matches(&self, algebra: &Arc<LieRinehartData>, kind: FormKind) -> Result<()> {
        let check_conn = |c: &Arc<Connection>, r: usize| {
            if !Arc::ptr_eq(c.algebra(), algebra) {
                return Err(Error::KindMismatch(
                    "connection is defined over a different algebra instance".into(),
                ));
            }
            if c.rank() != r {
                return Err(Error::KindMismatch(format!(
                    "connection has rank {}, form values have rank {}",
                    c.rank(),
                    r
                )));
            }
            Ok(())
        };
        match (self, kind) {
            (FormConnection::Canonical, FormKind::Scalar) => Ok(()),
            (FormConnection::Module(c), FormKind::Module(r)) => check_conn(c, r),
            (FormConnection::Endo(c), FormKind::Endo(r)) => check_conn(c, r),
            _ => Err(Error::KindMismatch(
                "connection does not act on this form's coefficient module".into(),
            )),
        }
    }
}

fn value_kind(v: &FormValue) -> FormKind {
    match v {
        FormValue::Scalar(_) => FormKind::Scalar,
        FormValue::Module(w) => FormKind::Module(w.len()),
        FormValue::Endo(m) => FormKind::Endo(m.rows()),
    }
}

/// An element of Cᵖ(𝔤,V), stored densely over the basis p-subsets.
#[derive(Clone, Debug)]
pub struct Form {
    algebra: Arc<LieRinehartData>,
    degree: usize,
    kind: FormKind,
    /// Indexed by lexicographic subset rank; empty when degree > m (the form
    /// is then identically zero); a single entry when degree = 0.
    values: Vec<FormValue>,
}

impl PartialEq for Form {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra)
            && self.degree == other.degree
            && self.kind == other.kind
            && self.values == other.values
    }
}

impl Eq for Form {}

impl Form {
    pub fn zero(algebra: &Arc<LieRinehartData>, degree: usize, kind: FormKind) -> Form {
        let m = algebra.rank();
        let count = if degree > m {
            0
        } else {
            crate::combinatorics::binomial(m, degree)
        };
        Form {
            algebra: algebra.clone(),
            degree,
            kind,
            values: vec![FormValue::zero(algebra.ring(), kind); count],
        }
    }

    /// Build from values listed over the lexicographic basis subsets.
    pub fn from_values(
        algebra: &Arc<LieRinehartData>,
        degree: usize,
        kind: FormKind,
        values: Vec<FormValue>,
    ) -> Result<Form> {
        let m = algebra.rank();
        let expected = if degree > m {
            0
        } else {
            crate::combinatorics::binomial(m, degree)
        };
        if values.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "degree-{degree} form over rank {m} needs {expected} values, got {}",
                values.len()
            )));
        }
        for v in &values {
            if value_kind(v) != kind {
                return Err(Error::KindMismatch(format!(
                    "form value has kind {:?}, expected {:?}",
                    value_kind(v),
                    kind
                )));
            }
            let ok = match v {
                FormValue::Scalar(p) => *p.ring() == *algebra.ring(),
                FormValue::Module(w) => w.iter().all(|p| *p.ring() == *algebra.ring()),
                FormValue::Endo(mat) => mat.ring() == algebra.ring() && mat.is_square(),
            };
            if !ok {
                return Err(Error::RingMismatch(
                    "form value lives over a different ring".into(),
                ));
            }
        }
        Ok(Form {
            algebra: algebra.clone(),
            degree,
            kind,
            values,
        })
    }

    /// The degree-0 scalar form with a constant value.
    pub fn scalar_constant(algebra: &Arc<LieRinehartData>, value: Rational) -> Form {
        Form {
            algebra: algebra.clone(),
            degree: 0,
            kind: FormKind::Scalar,
            values: vec![FormValue::Scalar(Polynomial::constant(algebra.ring(), value))],
        }
    }

    /// The degree-0 Endo form whose single value is the identity of End W.
    pub fn endo_identity(algebra: &Arc<LieRinehartData>, rank: usize) -> Form {
        Form {
            algebra: algebra.clone(),
            degree: 0,
            kind: FormKind::Endo(rank),
            values: vec![FormValue::Endo(PolyMatrix::identity(algebra.ring(), rank))],
        }
    }

    pub fn algebra(&self) -> &Arc<LieRinehartData> {
        &self.algebra
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn values(&self) -> &[FormValue] {
        &self.values
    }

    /// The basis subsets indexing [`Form::values`], in storage order.
    pub fn basis_subsets(&self) -> Vec<Vec<usize>> {
        if self.degree > self.algebra.rank() {
            Vec::new()
        } else {
            subsets(self.algebra.rank(), self.degree)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(FormValue::is_zero)
    }

    fn require_compatible(&self, other: &Form, op: &str) -> Result<()> {
        if !Arc::ptr_eq(&self.algebra, &other.algebra) {
            return Err(Error::KindMismatch(format!(
                "form {op}: operands live over different algebra instances"
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.require_compatible(other, "add")?;
        if self.degree != other.degree || self.kind != other.kind {
            return Err(Error::KindMismatch(format!(
                "form add: degree/kind mismatch ({}/{:?} vs {}/{:?})",
                self.degree, self.kind, other.degree, other.kind
            )));
        }
        Ok(Form {
            algebra: self.algebra.clone(),
            degree: self.degree,
            kind: self.kind,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        Form {
            algebra: self.algebra.clone(),
            degree: self.degree,
            kind: self.kind,
            values: self.values.iter().map(FormValue::neg).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Form {
        Form {
            algebra: self.algebra.clone(),
            degree: self.degree,
            kind: self.kind,
            values: self.values.iter().map(|v| v.scale(c)).collect(),
        }
    }

    /// Value on an arbitrary basis index list: zero on repeated indices,
    /// otherwise the stored value times the sign of the sorting permutation.
    pub fn eval_basis(&self, indices: &[usize]) -> FormValue {
        assert_eq!(indices.len(), self.degree, "eval_basis arity");
        let zero = FormValue::zero(self.algebra.ring(), self.kind);
        if self.degree > self.algebra.rank() {
            return zero;
        }
        match sort_with_sign(indices) {
            None => zero,
            Some((sorted, sign)) => {
                let v = &self.values[subset_rank(self.algebra.rank(), &sorted)];
                if sign == 1 {
                    v.clone()
                } else {
                    v.neg()
                }
            }
        }
    }

    /// Value on general elements via the alternating A-multilinear extension.
    pub fn eval_general(&self, args: &[GElement]) -> Result<FormValue> {
        if args.len() != self.degree {
            return Err(Error::DimensionMismatch(format!(
                "degree-{} form evaluated on {} arguments",
                self.degree,
                args.len()
            )));
        }
        let m = self.algebra.rank();
        for a in args {
            if a.coefficients().len() != m {
                return Err(Error::DimensionMismatch(
                    "argument does not match the algebra rank".into(),
                ));
            }
        }
        let mut acc = FormValue::zero(self.algebra.ring(), self.kind);
        if self.degree == 0 {
            return Ok(self.values[0].clone());
        }
        // Odometer over basis index tuples; coefficients multiply out front.
        let mut idx = vec![0usize; self.degree];
        loop {
            let mut coeff = Polynomial::one(self.algebra.ring());
            let mut vanishes = false;
            for (t, &i) in idx.iter().enumerate() {
                let c = &args[t].coefficients()[i];
                if c.is_zero() {
                    vanishes = true;
                    break;
                }
                coeff = coeff.mul(c);
            }
            if !vanishes && !coeff.is_zero() {
                let v = self.eval_basis(&idx);
                if !v.is_zero() {
                    acc = acc.add(&v.scale_poly(&coeff));
                }
            }
            // Advance the odometer.
            let mut t = self.degree;
            loop {
                if t == 0 {
                    return Ok(acc);
                }
                t -= 1;
                idx[t] += 1;
                if idx[t] < m {
                    break;
                }
                idx[t] = 0;
            }
        }
    }

    /// Shuffle wedge product: (φ∧ψ)(δ_S) = Σ over (p,q)-shuffles σ of
    /// sgn(σ)·φ(chosen p)·ψ(remaining q), with no factorial normalization.
    pub fn wedge(&self, other: &Form) -> Result<Form> {
        self.require_compatible(other, "wedge")?;
        let kind = self.kind.compose(other.kind).ok_or_else(|| {
            Error::KindMismatch(format!(
                "wedge of kinds {:?} and {:?} is not defined",
                self.kind, other.kind
            ))
        })?;
        let (p, q) = (self.degree, other.degree);
        let degree = p + q;
        let m = self.algebra.rank();
        if degree > m {
            return Ok(Form::zero(&self.algebra, degree, kind));
        }
        let mut values = Vec::with_capacity(crate::combinatorics::binomial(m, degree));
        for s in subsets(m, degree) {
            let mut acc = FormValue::zero(self.algebra.ring(), kind);
            for chosen in subsets(degree, p) {
                let mut in_chosen = vec![false; degree];
                for &pos in &chosen {
                    in_chosen[pos] = true;
                }
                let first: Vec<usize> = chosen.iter().map(|&pos| s[pos]).collect();
                let second: Vec<usize> = (0..degree)
                    .filter(|&pos| !in_chosen[pos])
                    .map(|pos| s[pos])
                    .collect();
                let sign = shuffle_sign(&chosen);
                let a = &self.values[subset_rank(m, &first)];
                let b = &other.values[subset_rank(m, &second)];
                let term = a.product(b);
                acc = acc.add(&if sign == 1 { term } else { term.neg() });
            }
            values.push(acc);
        }
        Form::from_values(&self.algebra, degree, kind, values)
    }

    /// The differential of the standard complex:
    ///
    /// (dψ)(δ₁∧…∧δ_{p+1}) = Σᵢ (−1)^{i+1} ∇_{δᵢ} ψ(…δ̂ᵢ…)
    ///                    + Σ_{i<j} (−1)^{i+j} ψ([δᵢ,δⱼ]∧…δ̂ᵢ…δ̂ⱼ…)
    ///
    /// assembled on basis subsets; bracket values expand A-linearly and the
    /// resulting index lists are normalized by [`Form::eval_basis`].
    pub fn differential(&self, conn: &FormConnection) -> Result<Form> {
        conn.matches(&self.algebra, self.kind)?;
        let m = self.algebra.rank();
        let p = self.degree;
        if p + 1 > m {
            return Ok(Form::zero(&self.algebra, p + 1, self.kind));
        }
        let mut values = Vec::with_capacity(crate::combinatorics::binomial(m, p + 1));
        for s in subsets(m, p + 1) {
            let mut acc = FormValue::zero(self.algebra.ring(), self.kind);
            for idx in 0..=p {
                let rest: Vec<usize> = s
                    .iter()
                    .copied()
                    .enumerate()
                    .filter(|&(t, _)| t != idx)
                    .map(|(_, g)| g)
                    .collect();
                let v = &self.values[subset_rank(m, &rest)];
                if v.is_zero() {
                    continue;
                }
                let nabla = conn.apply_basis(&self.algebra, s[idx], v);
                acc = acc.add(&if idx % 2 == 0 { nabla } else { nabla.neg() });
            }
            for idx1 in 0..=p {
                for idx2 in idx1 + 1..=p {
                    let rest: Vec<usize> = s
                        .iter()
                        .copied()
                        .enumerate()
                        .filter(|&(t, _)| t != idx1 && t != idx2)
                        .map(|(_, g)| g)
                        .collect();
                    let bracket = self.algebra.bracket_basis(s[idx1], s[idx2]);
                    for (k, ck) in bracket.iter().enumerate() {
                        if ck.is_zero() {
                            continue;
                        }
                        let mut list = Vec::with_capacity(p);
                        list.push(k);
                        list.extend_from_slice(&rest);
                        let v = self.eval_basis(&list);
                        if v.is_zero() {
                            continue;
                        }
                        let term = v.scale_poly(ck);
                        acc = acc.add(&if (idx1 + idx2) % 2 == 0 {
                            term
                        } else {
                            term.neg()
                        });
                    }
                }
            }
            values.push(acc);
        }
        Form::from_values(&self.algebra, p + 1, self.kind, values)
    }

    /// The same Chevalley-type sum evaluated literally on general arguments
    /// with [`LieRinehartData::bracket_general`]; cross-checks the basis
    /// assembly of [`Form::differential`].
    pub fn differential_eval_raw(
        &self,
        conn: &FormConnection,
        args: &[GElement],
    ) -> Result<FormValue> {
        conn.matches(&self.algebra, self.kind)?;
        if args.len() != self.degree + 1 {
            return Err(Error::DimensionMismatch(format!(
                "raw differential of a degree-{} form takes {} arguments, got {}",
                self.degree,
                self.degree + 1,
                args.len()
            )));
        }
        let mut acc = FormValue::zero(self.algebra.ring(), self.kind);
        let without = |skip: &[usize]| -> Vec<GElement> {
            args.iter()
                .enumerate()
                .filter(|(t, _)| !skip.contains(t))
                .map(|(_, a)| a.clone())
                .collect()
        };
        for idx in 0..args.len() {
            let v = self.eval_general(&without(&[idx]))?;
            if v.is_zero() {
                continue;
            }
            let nabla = conn.apply_general(&self.algebra, &args[idx], &v);
            acc = acc.add(&if idx % 2 == 0 { nabla } else { nabla.neg() });
        }
        for idx1 in 0..args.len() {
            for idx2 in idx1 + 1..args.len() {
                let bracket = self.algebra.bracket_general(&args[idx1], &args[idx2])?;
                let mut list = vec![bracket];
                list.extend(without(&[idx1, idx2]));
                let v = self.eval_general(&list)?;
                acc = acc.add(&if (idx1 + idx2) % 2 == 0 { v } else { v.neg() });
            }
        }
        Ok(acc)
    }

    /// Entrywise matrix trace: Cᵖ(𝔤, End W) → Cᵖ(𝔤, A).
    pub fn trace_form(&self) -> Result<Form> {
        if !matches!(self.kind, FormKind::Endo(_)) {
            return Err(Error::KindMismatch(
                "trace_form takes an Endo-valued form".into(),
            ));
        }
        let values = self
            .values
            .iter()
            .map(|v| FormValue::Scalar(v.as_endo().unwrap().trace()))
            .collect();
        Form::from_values(&self.algebra, self.degree, FormKind::Scalar, values)
    }
}

/// φ ↦ φ⊗Id_k on values: End W → End(W⊗U) for a rank-k factor U.
pub fn endo_kron_right(phi: &Form, k: usize) -> Result<Form> {
    let FormKind::Endo(r) = phi.kind() else {
        return Err(Error::KindMismatch("kron takes an Endo-valued form".into()));
    };
    let id = PolyMatrix::identity(phi.algebra().ring(), k);
    let values = phi
        .values()
        .iter()
        .map(|v| FormValue::Endo(v.as_endo().unwrap().kron(&id)))
        .collect();
    Form::from_values(phi.algebra(), phi.degree(), FormKind::Endo(r * k), values)
}

/// φ ↦ Id_k⊗φ on values: End W → End(U⊗W) for a rank-k factor U.
pub fn endo_kron_left(k: usize, phi: &Form) -> Result<Form> {
    let FormKind::Endo(r) = phi.kind() else {
        return Err(Error::KindMismatch("kron takes an Endo-valued form".into()));
    };
    let id = PolyMatrix::identity(phi.algebra().ring(), k);
    let values = phi
        .values()
        .iter()
        .map(|v| FormValue::Endo(id.kron(v.as_endo().unwrap())))
        .collect();
    Form::from_values(phi.algebra(), phi.degree(), FormKind::Endo(k * r), values)
}

/// Block-diagonal sum of Endo-valued forms of equal degree:
/// End W ⊕ End W' → End(W⊕W').
pub fn endo_block_sum(phi: &Form, psi: &Form) -> Result<Form> {
    let (FormKind::Endo(r), FormKind::Endo(s)) = (phi.kind(), psi.kind()) else {
        return Err(Error::KindMismatch(
            "block sum takes Endo-valued forms".into(),
        ));
    };
    if !Arc::ptr_eq(phi.algebra(), psi.algebra()) || phi.degree() != psi.degree() {
        return Err(Error::KindMismatch(
            "block sum needs equal degrees over one algebra".into(),
        ));
    }
    let values = phi
        .values()
        .iter()
        .zip(psi.values())
        .map(|(a, b)| FormValue::Endo(a.as_endo().unwrap().block_diag(b.as_endo().unwrap())))
        .collect();
    Form::from_values(phi.algebra(), phi.degree(), FormKind::Endo(r + s), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_rinehart::Derivation;
    use crate::poly::{rat_int, RingSpec};
    use std::collections::BTreeMap;

    fn p(ring: &Arc<RingSpec>, s: &str) -> Polynomial {
        Polynomial::parse(ring, s).unwrap()
    }

    fn coordinate_fields() -> Arc<LieRinehartData> {
        let r = RingSpec::new(vec!["x", "y"]).unwrap();
        let anchor = vec![
            Derivation::new(&r, vec![p(&r, "1"), p(&r, "0")]).unwrap(),
            Derivation::new(&r, vec![p(&r, "0"), p(&r, "1")]).unwrap(),
        ];
        LieRinehartData::new(&r, 2, BTreeMap::new(), anchor).unwrap()
    }

    fn sl2() -> Arc<LieRinehartData> {
        let r = RingSpec::new(Vec::<String>::new()).unwrap();
        let c = |s: &str| p(&r, s);
        let mut structure = BTreeMap::new();
        structure.insert((0, 1), vec![c("-2"), c("0"), c("0")]);
        structure.insert((0, 2), vec![c("0"), c("1"), c("0")]);
        structure.insert((1, 2), vec![c("0"), c("0"), c("-2")]);
        LieRinehartData::new(&r, 3, structure, vec![Derivation::zero(&r); 3]).unwrap()
    }

    /// The scalar 1-form dual to basis vector i.
    fn dual_one_form(g: &Arc<LieRinehartData>, i: usize) -> Form {
        let mut values = vec![FormValue::Scalar(Polynomial::zero(g.ring())); g.rank()];
        values[i] = FormValue::Scalar(Polynomial::one(g.ring()));
        Form::from_values(g, 1, FormKind::Scalar, values).unwrap()
    }

    #[test]
    fn wedge_of_dual_one_forms() {
        let g = coordinate_fields();
        let w = dual_one_form(&g, 0).wedge(&dual_one_form(&g, 1)).unwrap();
        assert_eq!(w.degree(), 2);
        assert_eq!(
            w.eval_basis(&[0, 1]),
            FormValue::Scalar(Polynomial::one(g.ring()))
        );
        assert_eq!(
            w.eval_basis(&[1, 0]),
            FormValue::Scalar(p(g.ring(), "-1"))
        );
    }

    #[test]
    fn wedge_with_unit_scalar_is_identity() {
        let g = coordinate_fields();
        let one = Form::scalar_constant(&g, rat_int(1));
        let phi = dual_one_form(&g, 1);
        assert_eq!(one.wedge(&phi).unwrap(), phi);
    }

    #[test]
    fn wedge_past_top_degree_is_zero() {
        let g = coordinate_fields();
        let two_form = dual_one_form(&g, 0).wedge(&dual_one_form(&g, 1)).unwrap();
        let four = two_form.wedge(&two_form).unwrap();
        assert_eq!(four.degree(), 4);
        assert!(four.is_zero());
        assert!(four.values().is_empty());
    }

    #[test]
    fn wedge_kind_rules() {
        let g = coordinate_fields();
        let phi = dual_one_form(&g, 0);
        // Module·Scalar is not among the supported compositions.
        let module_form = Form::from_values(
            &g,
            0,
            FormKind::Module(1),
            vec![FormValue::Module(vec![Polynomial::one(g.ring())])],
        )
        .unwrap();
        assert!(module_form.wedge(&phi).is_err());
        assert!(phi.wedge(&module_form).is_ok());
    }

    #[test]
    fn scalar_wedge_is_graded_commutative() {
        let g = sl2();
        let phi = dual_one_form(&g, 0);
        let psi = dual_one_form(&g, 1);
        // p = q = 1: φ∧ψ = −ψ∧φ.
        assert_eq!(phi.wedge(&psi).unwrap(), psi.wedge(&phi).unwrap().neg());
        // p = 2, q = 1: sign (−1)^{2·1} = +1.
        let two = phi.wedge(&psi).unwrap();
        let chi = dual_one_form(&g, 2);
        assert_eq!(two.wedge(&chi).unwrap(), chi.wedge(&two).unwrap());
    }

    #[test]
    fn differential_of_degree_zero_scalar() {
        let g = coordinate_fields();
        let a = Form::from_values(
            &g,
            0,
            FormKind::Scalar,
            vec![FormValue::Scalar(p(g.ring(), "x^2"))],
        )
        .unwrap();
        let da = a.differential(&FormConnection::Canonical).unwrap();
        assert_eq!(da.eval_basis(&[0]), FormValue::Scalar(p(g.ring(), "2*x")));
        assert_eq!(da.eval_basis(&[1]), FormValue::Scalar(p(g.ring(), "0")));
    }

    #[test]
    fn sl2_dual_form_differential() {
        let g = sl2();
        let phi = dual_one_form(&g, 0); // e* with basis order (e, h, f)
        let d = phi.differential(&FormConnection::Canonical).unwrap();
        // dφ(e∧h) = −φ([e,h]) = −φ(−2e) = 2; the other pairs give 0.
        assert_eq!(d.eval_basis(&[0, 1]), FormValue::Scalar(p(g.ring(), "2")));
        assert!(d.eval_basis(&[0, 2]).is_zero());
        assert!(d.eval_basis(&[1, 2]).is_zero());
    }

    #[test]
    fn differential_of_zero_is_zero() {
        let g = sl2();
        for degree in 0..=3 {
            let z = Form::zero(&g, degree, FormKind::Scalar);
            assert!(z.differential(&FormConnection::Canonical).unwrap().is_zero());
        }
    }

    #[test]
    fn raw_differential_is_a_linear_and_alternating() {
        let g = coordinate_fields();
        let r = g.ring().clone();
        let phi = {
            let values = vec![
                FormValue::Scalar(p(&r, "x*y")),
                FormValue::Scalar(p(&r, "y^2 - x")),
            ];
            Form::from_values(&g, 1, FormKind::Scalar, values).unwrap()
        };
        let conn = FormConnection::Canonical;
        let g1 = g.basis_element(0);
        let g2 = g.basis_element(1);
        let x = p(&r, "x");
        // dφ(x·g1, g2) = x·dφ(g1, g2).
        let lhs = phi
            .differential_eval_raw(&conn, &[g1.scale_poly(&x), g2.clone()])
            .unwrap();
        let rhs = phi
            .differential_eval_raw(&conn, &[g1.clone(), g2.clone()])
            .unwrap()
            .scale_poly(&x);
        assert_eq!(lhs, rhs);
        // Repeated arguments vanish.
        let dup = phi
            .differential_eval_raw(&conn, &[g1.clone(), g1.clone()])
            .unwrap();
        assert!(dup.is_zero());
        // Raw evaluation on basis arguments agrees with the assembled form.
        let assembled = phi.differential(&conn).unwrap();
        assert_eq!(
            phi.differential_eval_raw(&conn, &[g1, g2]).unwrap(),
            assembled.eval_basis(&[0, 1])
        );
    }

    #[test]
    fn d_squared_vanishes_for_scalar_canonical_action() {
        // Both for the abelian coordinate fields and for sl2.
        for g in [coordinate_fields(), sl2()] {
            let r = g.ring().clone();
            let a = if r.nvars() > 0 {
                p(&r, "x^2*y + 3*x")
            } else {
                p(&r, "5")
            };
            let f =
                Form::from_values(&g, 0, FormKind::Scalar, vec![FormValue::Scalar(a)]).unwrap();
            let dd = f
                .differential(&FormConnection::Canonical)
                .unwrap()
                .differential(&FormConnection::Canonical)
                .unwrap();
            assert!(dd.is_zero());
            let phi = dual_one_form(&g, 0);
            let ddphi = phi
                .differential(&FormConnection::Canonical)
                .unwrap()
                .differential(&FormConnection::Canonical)
                .unwrap();
            assert!(ddphi.is_zero());
        }
    }

    #[test]
    fn de_rham_comparison_in_two_variables() {
        // 𝔤 = ⟨∂x,∂y⟩ over ℚ[x,y]: d⁰ and d¹ are the textbook de Rham
        // formulas, checked on all monomials of total degree ≤ 3.
        let g = coordinate_fields();
        let r = g.ring().clone();
        let monomials: Vec<Polynomial> = (0..=3u32)
            .flat_map(|d| (0..=d).map(move |i| (i, d - i)))
            .map(|(i, j)| {
                Polynomial::from_terms(
                    &r,
                    [(crate::poly::Monomial::new(vec![i, j]), rat_int(1))],
                )
                .unwrap()
            })
            .collect();
        for f in &monomials {
            let form =
                Form::from_values(&g, 0, FormKind::Scalar, vec![FormValue::Scalar(f.clone())])
                    .unwrap();
            let df = form.differential(&FormConnection::Canonical).unwrap();
            assert_eq!(
                df.eval_basis(&[0]),
                FormValue::Scalar(f.derivative(0).unwrap())
            );
            assert_eq!(
                df.eval_basis(&[1]),
                FormValue::Scalar(f.derivative(1).unwrap())
            );
        }
        for w1 in &monomials {
            for w2 in &monomials {
                let omega = Form::from_values(
                    &g,
                    1,
                    FormKind::Scalar,
                    vec![
                        FormValue::Scalar(w1.clone()),
                        FormValue::Scalar(w2.clone()),
                    ],
                )
                .unwrap();
                let d = omega.differential(&FormConnection::Canonical).unwrap();
                // d(w1 dx + w2 dy)(∂x,∂y) = ∂x w2 − ∂y w1.
                assert_eq!(
                    d.eval_basis(&[0, 1]),
                    FormValue::Scalar(w2.derivative(0).unwrap().sub(&w1.derivative(1).unwrap()))
                );
            }
        }
    }

    #[test]
    fn trace_of_identity_form() {
        let g = coordinate_fields();
        let id = Form::endo_identity(&g, 3);
        let tr = id.trace_form().unwrap();
        assert_eq!(
            tr.values()[0],
            FormValue::Scalar(p(g.ring(), "3"))
        );
        // Non-Endo input is rejected.
        assert!(tr.trace_form().is_err());
    }

    #[test]
    fn kron_and_block_helpers() {
        let g = coordinate_fields();
        let r = g.ring().clone();
        let mat = PolyMatrix::from_rows(
            &r,
            vec![
                vec![p(&r, "x"), p(&r, "1")],
                vec![p(&r, "0"), p(&r, "y")],
            ],
        )
        .unwrap();
        let phi = Form::from_values(
            &g,
            0,
            FormKind::Endo(2),
            vec![FormValue::Endo(mat.clone())],
        )
        .unwrap();
        let right = endo_kron_right(&phi, 3).unwrap();
        assert_eq!(right.kind(), FormKind::Endo(6));
        assert_eq!(
            right.values()[0].as_endo().unwrap().trace(),
            mat.trace().scale(&rat_int(3))
        );
        let left = endo_kron_left(3, &phi).unwrap();
        assert_eq!(
            left.values()[0].as_endo().unwrap().trace(),
            mat.trace().scale(&rat_int(3))
        );
        let both = endo_block_sum(&phi, &phi).unwrap();
        assert_eq!(both.kind(), FormKind::Endo(4));
        assert_eq!(
            both.values()[0].as_endo().unwrap().trace(),
            mat.trace().scale(&rat_int(2))
        );
    }
}
