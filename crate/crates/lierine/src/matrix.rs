//! Dense matrices over a polynomial ring: the representation for connection
//! Christoffel symbols, curvature values, and module endomorphisms.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Rational, RingSpec};

/// Row-major matrix of [`Polynomial`] entries sharing one ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    ring: Arc<RingSpec>,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zero(ring: &Arc<RingSpec>, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![Polynomial::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: &Arc<RingSpec>, n: usize) -> PolyMatrix {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = Polynomial::one(ring);
        }
        m
    }

    pub fn from_fn<F>(ring: &Arc<RingSpec>, rows: usize, cols: usize, mut f: F) -> PolyMatrix
    where
        F: FnMut(usize, usize) -> Polynomial,
    {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries,
        }
    }

    /// Build from explicit rows, checking shape and ring agreement.
    pub fn from_rows(ring: &Arc<RingSpec>, rows: Vec<Vec<Polynomial>>) -> Result<PolyMatrix> {
        let nrows = rows.len();
        let ncols = rows.first().map(Vec::len).unwrap_or(0);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            for p in row {
                if p.ring() != ring {
                    return Err(Error::RingMismatch(
                        "matrix entry lives in a different ring".into(),
                    ));
                }
                entries.push(p);
            }
        }
        Ok(PolyMatrix {
            ring: ring.clone(),
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.entries[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn assert_same_shape(&self, other: &PolyMatrix, op: &str) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "matrix {op}: shapes {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        self.assert_same_shape(other, "add");
        PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        self.assert_same_shape(other, "sub");
        PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> PolyMatrix {
        self.map(|p| p.neg())
    }

    pub fn scale(&self, c: &Rational) -> PolyMatrix {
        self.map(|p| p.scale(c))
    }

    /// Entrywise multiplication by a ring element (module structure over A).
    pub fn scale_poly(&self, a: &Polynomial) -> PolyMatrix {
        self.map(|p| p.mul(a))
    }

    pub fn map<F>(&self, f: F) -> PolyMatrix
    where
        F: Fn(&Polynomial) -> Polynomial,
    {
        PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert!(
            self.cols == other.rows,
            "matrix mul: {}x{} by {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
        PolyMatrix::from_fn(&self.ring, self.rows, other.cols, |i, j| {
            let mut acc = Polynomial::zero(&self.ring);
            for k in 0..self.cols {
                acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
            }
            acc
        })
    }

    pub fn commutator(&self, other: &PolyMatrix) -> PolyMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn mul_vec(&self, v: &[Polynomial]) -> Vec<Polynomial> {
        assert!(
            self.cols == v.len(),
            "matrix-vector mul: {}x{} by length {}",
            self.rows,
            self.cols,
            v.len()
        );
        (0..self.rows)
            .map(|i| {
                let mut acc = Polynomial::zero(&self.ring);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(&v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> Polynomial {
        assert!(self.is_square(), "trace of a non-square matrix");
        let mut acc = Polynomial::zero(&self.ring);
        for i in 0..self.rows {
            acc = acc.add(self.get(i, i));
        }
        acc
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(&self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Kronecker product: entry at (i1*r2+i2, j1*c2+j2) is a[i1,j1]*b[i2,j2].
    /// Realizes the induced map on a tensor product of free modules with the
    /// basis ordered (first factor outer, second factor inner).
    pub fn kron(&self, other: &PolyMatrix) -> PolyMatrix {
        PolyMatrix::from_fn(
            &self.ring,
            self.rows * other.rows,
            self.cols * other.cols,
            |i, j| {
                let (i1, i2) = (i / other.rows, i % other.rows);
                let (j1, j2) = (j / other.cols, j % other.cols);
                self.get(i1, j1).mul(other.get(i2, j2))
            },
        )
    }

    /// Block-diagonal sum, the matrix of a direct sum of endomorphisms.
    pub fn block_diag(&self, other: &PolyMatrix) -> PolyMatrix {
        PolyMatrix::from_fn(
            &self.ring,
            self.rows + other.rows,
            self.cols + other.cols,
            |i, j| {
                if i < self.rows && j < self.cols {
                    self.get(i, j).clone()
                } else if i >= self.rows && j >= self.cols {
                    other.get(i - self.rows, j - self.cols).clone()
                } else {
                    Polynomial::zero(&self.ring)
                }
            },
        )
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}
