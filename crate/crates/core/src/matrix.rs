//! Dense complex matrices.
//!
//! Storage is row-major. Bipartite indices follow the Kronecker convention:
//! the basis state `|i⟩⊗|j⟩` of a `dim_a ⊗ dim_b` space lives at index
//! `i * dim_b + j`.

use std::fmt;
use std::ops::Index;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Which factor of a bipartite space to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// A dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimension {
                dim: rows.min(cols),
                reason: "matrix dimensions must be positive",
            });
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Format("rows have unequal lengths".into()));
        }
        Self::new(n_rows, n_cols, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, dim, |i, j| if i == j { ONE } else { ZERO })
    }

    /// Diagonal matrix with real entries.
    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { C64::new(diag[i], 0.0) } else { ZERO })
    }

    /// The outer product `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                found: format!("{}x{}", self.rows, self.cols),
            })
        }
    }

    fn require_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            })
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", other.rows),
            });
        }
        let mut out = vec![ZERO; self.rows * other.cols];
        for i in 0..self.rows {
            let out_row = &mut out[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data: out,
        })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: format!("vector of length {}", self.cols),
                found: format!("length {}", v.len()),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.dagger())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(self.zip_map(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(self.zip_map(other, |a, b| a - b))
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, scale: C64, other: &Self) -> Result<()> {
        self.require_same_shape(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += scale * b;
        }
        Ok(())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    fn zip_map(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn trace(&self) -> Result<C64> {
        let n = self.require_square()?;
        Ok((0..n).map(|i| self[(i, i)]).sum())
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> Result<C64> {
        if self.cols != other.rows || self.rows != other.cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{}", self.cols, self.rows),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        let mut acc = ZERO;
        for i in 0..self.rows {
            for (k, &a) in self.row(i).iter().enumerate() {
                acc += a * other[(k, i)];
            }
        }
        Ok(acc)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.require_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest entrywise modulus of `self − self†`.
    pub fn hermiticity_deviation(&self) -> Result<f64> {
        let n = self.require_square()?;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        Ok(dev)
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Result<Self> {
        let n = self.require_square()?;
        Ok(Self::from_fn(n, n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5))
    }

    /// Largest entrywise modulus of `U†U − I`.
    pub fn unitarity_deviation(&self) -> Result<f64> {
        let n = self.require_square()?;
        self.dagger().matmul(self)?.max_abs_diff(&Self::identity(n))
    }

    /// Validates Hermiticity within `tol.herm` and returns the eigenvalues
    /// (ascending) and the eigenvectors as the columns of a unitary matrix.
    /// The matrix is symmetrized before decomposition.
    pub fn eigh_with(&self, tol: &Tolerances) -> Result<(Vec<f64>, ComplexMatrix)> {
        let deviation = self.hermiticity_deviation()?;
        if deviation > tol.herm {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(self.hermitian_part()?.eigh_unchecked())
    }

    pub fn eigh(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        self.eigh_with(&Tolerances::default())
    }

    pub(crate) fn eigh_unchecked(&self) -> (Vec<f64>, ComplexMatrix) {
        let n = self.rows;
        let m = DMatrix::<C64>::from_fn(n, n, |i, j| self[(i, j)]);
        let eig = m.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = Self::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        (values, vectors)
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn eigenvalues_hermitian(&self) -> Result<Vec<f64>> {
        Ok(self.eigh()?.0)
    }

    /// Eigenvalues of a general square matrix from its complex Schur form.
    pub fn eigenvalues_general(&self) -> Result<Vec<C64>> {
        self.require_square()?;
        let schur = nalgebra::Schur::new(self.to_nalgebra());
        let (_, t) = schur.unpack();
        Ok((0..self.rows).map(|i| t[(i, i)]).collect())
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)])
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    ComplexMatrix::from_fn(rows, cols, |i, j| {
        a[(i / b.rows, j / b.cols)] * b[(i % b.rows, j % b.cols)]
    })
}

/// Kronecker product of two vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

pub fn dagger(m: &ComplexMatrix) -> ComplexMatrix {
    m.dagger()
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

pub fn trace(m: &ComplexMatrix) -> Result<C64> {
    m.trace()
}

/// Traces out one factor of a `dim_a ⊗ dim_b` operator.
pub fn partial_trace(
    m: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    keep: Keep,
) -> Result<ComplexMatrix> {
    let n = dim_a * dim_b;
    if dim_a == 0 || dim_b == 0 || m.rows != n || m.cols != n {
        return Err(Error::BadBipartition {
            rows: m.rows,
            cols: m.cols,
            dim_a,
            dim_b,
        });
    }
    Ok(match keep {
        Keep::A => ComplexMatrix::from_fn(dim_a, dim_a, |i, j| {
            (0..dim_b).map(|k| m[(i * dim_b + k, j * dim_b + k)]).sum()
        }),
        Keep::B => ComplexMatrix::from_fn(dim_b, dim_b, |i, j| {
            (0..dim_a).map(|k| m[(k * dim_b + i, k * dim_b + j)]).sum()
        }),
    })
}

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues in `[-tol.psd, 0)` are clamped to zero; anything more negative
/// is rejected.
pub fn hermitian_sqrt_with(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let (values, vectors) = m.eigh_with(tol)?;
    let min = values.first().copied().unwrap_or(0.0);
    if min < -tol.psd {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let roots: Vec<f64> = values.iter().map(|&v| v.max(0.0).sqrt()).collect();
    let n = m.rows;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| vectors[(i, k)] * roots[k] * vectors[(j, k)].conj())
            .sum()
    }))
}

pub fn hermitian_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    hermitian_sqrt_with(m, &Tolerances::default())
}

/// The exchange operator on `d ⊗ d`: `|i⟩|j⟩ ↦ |j⟩|i⟩`.
pub fn swap_operator(d: usize) -> Result<ComplexMatrix> {
    if d < 1 {
        return Err(Error::InvalidDimension {
            dim: d,
            reason: "swap operator needs d >= 1",
        });
    }
    let n = d * d;
    Ok(ComplexMatrix::from_fn(n, n, |row, col| {
        let (i, j) = (col / d, col % d);
        if row == j * d + i {
            ONE
        } else {
            ZERO
        }
    }))
}

/// `½ Σ |λᵢ(a − b)|` for Hermitian `a`, `b`.
pub fn trace_norm_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let diff = a.sub(b)?;
    let values = diff.eigenvalues_hermitian()?;
    Ok(0.5 * values.iter().map(|v| v.abs()).sum::<f64>())
}
