//! Validated quantum states.

use crate::error::{Error, Result};
use crate::matrix::{trace_norm_distance, ComplexMatrix, C64, ONE, ZERO};
use crate::tolerance::Tolerances;

/// A unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Accepts amplitudes whose Euclidean norm is within `TOL_TRACE` of 1.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        Self::new_with(amplitudes, &Tolerances::default())
    }

    pub fn new_with(amplitudes: Vec<C64>, tol: &Tolerances) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension {
                dim: 0,
                reason: "state must have at least one amplitude",
            });
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > tol.trace {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a non-zero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NotNormalized { norm: n });
        }
        for a in &mut amplitudes {
            *a /= n;
        }
        Self::new(amplitudes)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidDimension {
                dim,
                reason: "basis index out of range",
            });
        }
        let mut v = vec![ZERO; dim];
        v[index] = ONE;
        Ok(Self { amplitudes: v })
    }

    pub(crate) fn from_trusted(amplitudes: Vec<C64>) -> Self {
        debug_assert!((norm(&amplitudes) - 1.0).abs() < 1e-9);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// `⟨ψ|M|ψ⟩`.
    pub fn expectation(&self, m: &ComplexMatrix) -> Result<C64> {
        let mv = m.apply(&self.amplitudes)?;
        inner(&self.amplitudes, &mv)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(self.projector())
    }
}

pub(crate) fn norm(v: &[C64]) -> f64 {
    v.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
}

pub(crate) fn inner(a: &[C64], b: &[C64]) -> Result<C64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("vector of length {}", a.len()),
            found: format!("length {}", b.len()),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x.conj() * y).sum())
}

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::new_with(matrix, &Tolerances::default())
    }

    /// Validates the density-matrix invariants. The stored matrix is the
    /// Hermitian part of the input.
    pub fn new_with(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidDensity(format!(
                "matrix is {}x{}, not square",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let deviation = matrix.hermiticity_deviation()?;
        if deviation > tol.herm {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (max |M - M†| = {deviation:.3e})"
            )));
        }
        let matrix = matrix.hermitian_part()?;
        let tr = matrix.trace()?.re;
        if (tr - 1.0).abs() > tol.trace {
            return Err(Error::InvalidDensity(format!("trace is {tr}, expected 1")));
        }
        let min = matrix.eigh_unchecked().0[0];
        if min < -tol.psd {
            return Err(Error::InvalidDensity(format!(
                "not PSD (minimum eigenvalue {min:.3e})"
            )));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix that is a density matrix by construction (for example
    /// the output of a CPTP map applied to a valid state).
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix }
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix.eigh_unchecked().0
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_of_product(&self.matrix).map_or(0.0, |z| z.re)
    }

    /// Convex combination `w·self + (1 − w)·other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<DensityMatrix> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::OutOfRange { name: "weight", value: w });
        }
        let mut m = self.matrix.scale(C64::new(w, 0.0));
        m.add_scaled(C64::new(1.0 - w, 0.0), &other.matrix)?;
        Ok(Self::from_trusted(m))
    }
}

/// Trace distance `½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    trace_norm_distance(&rho.matrix, &sigma.matrix)
}
