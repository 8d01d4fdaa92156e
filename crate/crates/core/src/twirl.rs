//! Numerical checks of the U⊗U twirl behind the average entanglement
//! fidelity: the `μ_nm` operators, their traces, the identity/swap
//! coefficients and a Monte Carlo estimate of `∫dφ λ_nm(φ)`.
//!
//! The exchange operator for `μ_nm` swaps two `d²`-dimensional factors, i.e.
//! the pair `(1,2)` with the pair `(3,4)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fidelity::lambda_nm;
use crate::matrix::{kron, swap_operator, ComplexMatrix, C64};
use crate::sampling::{ginibre, haar_pure, McEstimate, MonteCarlo, RngState};
use crate::weyl::{weyl_matrix, WeylIndex};

/// Largest `d` for which the `d⁴ × d⁴` operator `μ_nm` is built.
pub const MAX_MU_DIM: usize = 4;

/// Identity and swap coefficients of the twirled `μ_nm`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwirlCoefficients {
    pub d: usize,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl TwirlCoefficients {
    /// `α + β = ∫dφ λ_nm(φ)`.
    pub fn sum(&self) -> f64 {
        self.alpha + self.beta
    }
}

/// `μ_nm = I ⊗ U^{n,−m} ⊗ I ⊗ U^{n,−m†}`.
pub fn mu_nm(d: usize, n: i64, m: i64) -> Result<ComplexMatrix> {
    let idx = WeylIndex::new(d, n, m)?;
    if d > MAX_MU_DIM {
        return Err(Error::DimensionTooLarge(d));
    }
    let u = weyl_matrix(idx.channel_partner());
    let id = ComplexMatrix::identity(d);
    Ok(kron(&kron(&id, &u), &kron(&id, &u.dagger())))
}

/// `(Tr μ_nm, Tr(μ_nm Ϝ))` from the explicit matrices.
pub fn mu_traces(d: usize, n: i64, m: i64) -> Result<(C64, C64)> {
    let mu = mu_nm(d, n, m)?;
    let swap = swap_operator(d * d)?;
    Ok((mu.trace()?, mu.trace_of_product(&swap)?))
}

/// Schur-lemma coefficients from the two traces of `μ_nm`.
pub fn alpha_beta_from_traces(d: usize, tr_mu: f64, tr_mu_swap: f64) -> (f64, f64) {
    let d2 = (d * d) as f64;
    let denom = d2 * d2 - 1.0;
    let alpha = tr_mu / denom - tr_mu_swap / (d2 * denom);
    let beta = tr_mu_swap / denom - tr_mu / (d2 * denom);
    (alpha, beta)
}

/// Closed-form coefficients using `Tr μ_nm = d⁴ δ_n0 δ_m0` and
/// `Tr(μ_nm Ϝ) = d²`.
pub fn alpha_beta(d: usize, n: i64, m: i64) -> Result<TwirlCoefficients> {
    let idx = WeylIndex::new(d, n, m)?;
    let d2 = (d * d) as f64;
    let d4 = d2 * d2;
    let delta = if idx.is_identity() { 1.0 } else { 0.0 };
    Ok(TwirlCoefficients {
        d,
        n: idx.n(),
        m: idx.m(),
        alpha: (d4 * delta - 1.0) / (d4 - 1.0),
        beta: (d2 - d2 * delta) / (d4 - 1.0),
    })
}

/// Coefficients computed from the explicit `μ_nm` and exchange matrices.
pub fn alpha_beta_explicit(d: usize, n: i64, m: i64) -> Result<TwirlCoefficients> {
    let idx = WeylIndex::new(d, n, m)?;
    let (tr_mu, tr_mu_swap) = mu_traces(d, n, m)?;
    let (alpha, beta) = alpha_beta_from_traces(d, tr_mu.re, tr_mu_swap.re);
    Ok(TwirlCoefficients {
        d,
        n: idx.n(),
        m: idx.m(),
        alpha,
        beta,
    })
}

/// `Σ p_nm (α_nm + β_nm)` for a row-major `(n, m)` probability grid.
pub fn assemble_avg_ent_fidelity(d: usize, probs: &[f64]) -> Result<f64> {
    if probs.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: format!("{} probabilities", d * d),
            found: format!("{}", probs.len()),
        });
    }
    WeylIndex::all(d)?
        .map(|idx| {
            alpha_beta(d, idx.n() as i64, idx.m() as i64).map(|c| probs[idx.flat()] * c.sum())
        })
        .sum()
}

/// Monte Carlo estimate of `∫dφ λ_nm(φ)` over Haar states on `d ⊗ d`.
pub fn twirl_integral_mc(
    d: usize,
    n: i64,
    m: i64,
    n_samples: usize,
    rng: RngState,
    mc: &MonteCarlo,
) -> Result<McEstimate> {
    let idx = WeylIndex::new(d, n, m)?;
    mc.estimate(
        n_samples,
        rng,
        |r| haar_pure(d * d, r),
        |phi| lambda_nm(phi, idx),
    )
}

/// Deviations of the two trace identities used by the twirl argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceIdentityReport {
    pub d: usize,
    /// `max |Tr U^{n,m} − d δ_n0 δ_m0|` over all `(n, m)`.
    pub weyl_trace_max_dev: f64,
    /// `max |Tr((A⊗B)Ϝ) − Tr(AB)|` over the random pairs.
    pub swap_identity_max_dev: f64,
    pub random_pairs: usize,
    pub tolerance: f64,
    pub pass: bool,
}

pub const TRACE_IDENTITY_TOL: f64 = 1e-10;

pub fn verify_trace_identities(d: usize, rng: RngState) -> Result<TraceIdentityReport> {
    let mut weyl_dev: f64 = 0.0;
    for idx in WeylIndex::all(d)? {
        let want = if idx.is_identity() { d as f64 } else { 0.0 };
        let tr = weyl_matrix(idx).trace()?;
        weyl_dev = weyl_dev.max((tr - C64::new(want, 0.0)).norm());
    }

    let pairs = 10;
    let swap = swap_operator(d)?;
    let mut r = rng.rng();
    let mut swap_dev: f64 = 0.0;
    for _ in 0..pairs {
        let a = ginibre(d, d, &mut r);
        let b = ginibre(d, d, &mut r);
        let lhs = kron(&a, &b).trace_of_product(&swap)?;
        let rhs = a.trace_of_product(&b)?;
        swap_dev = swap_dev.max((lhs - rhs).norm());
    }
    Ok(TraceIdentityReport {
        d,
        weyl_trace_max_dev: weyl_dev,
        swap_identity_max_dev: swap_dev,
        random_pairs: pairs,
        tolerance: TRACE_IDENTITY_TOL,
        pass: weyl_dev <= TRACE_IDENTITY_TOL && swap_dev <= TRACE_IDENTITY_TOL,
    })
}

/// Deviations of `Tr μ_nm = d⁴ δ δ` and `Tr(μ_nm Ϝ) = d²` over all `(n, m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuTraceReport {
    pub d: usize,
    pub trace_max_dev: f64,
    pub swap_trace_max_dev: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn verify_mu_traces(d: usize) -> Result<MuTraceReport> {
    let d2 = (d * d) as f64;
    let mut trace_dev: f64 = 0.0;
    let mut swap_dev: f64 = 0.0;
    for idx in WeylIndex::all(d)? {
        let (tr, tr_swap) = mu_traces(d, idx.n() as i64, idx.m() as i64)?;
        let want = if idx.is_identity() { d2 * d2 } else { 0.0 };
        trace_dev = trace_dev.max((tr - C64::new(want, 0.0)).norm());
        swap_dev = swap_dev.max((tr_swap - C64::new(d2, 0.0)).norm());
    }
    Ok(MuTraceReport {
        d,
        trace_max_dev: trace_dev,
        swap_trace_max_dev: swap_dev,
        tolerance: TRACE_IDENTITY_TOL,
        pass: trace_dev <= TRACE_IDENTITY_TOL && swap_dev <= TRACE_IDENTITY_TOL,
    })
}
