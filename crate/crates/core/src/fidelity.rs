//! Fidelity measures for the teleportation channel.
//!
//! Bipartite states used for entanglement fidelity are ordered
//! `ancilla ⊗ system`; the channel always acts on the second factor.

use serde::{Deserialize, Serialize};

use crate::channel::TeleportChannel;
use crate::error::{Error, Result};
use crate::matrix::{hermitian_sqrt, ComplexMatrix, C64, ZERO};
use crate::sampling::{haar_pure, McEstimate, MonteCarlo, RngState};
use crate::state::{inner, DensityMatrix, PureState};
use crate::weyl::{weyl_apply, WeylIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityKind {
    Uhlmann,
    Pure,
    Entanglement,
    AvgClosed,
    AvgEntClosed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityValue {
    pub value: f64,
    pub kind: FidelityKind,
}

impl FidelityValue {
    fn new(value: f64, kind: FidelityKind) -> Self {
        // round-off can push a fidelity a few ulps outside [0, 1]
        Self {
            value: value.clamp(0.0, 1.0),
            kind,
        }
    }
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: format!("dimension {a}"),
            found: format!("dimension {b}"),
        })
    }
}

/// Square root of a density matrix with eigenvalues below the solver's
/// resolution (`n·ε·λ_max`) set to zero.
fn density_sqrt(rho: &DensityMatrix) -> ComplexMatrix {
    let (values, vectors) = rho.matrix().eigh_unchecked();
    let n = rho.dim();
    let cutoff = n as f64 * f64::EPSILON * values.last().copied().unwrap_or(0.0).max(0.0);
    let roots: Vec<f64> = values
        .iter()
        .map(|&v| if v > cutoff { v.sqrt() } else { 0.0 })
        .collect();
    ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| vectors[(i, k)] * roots[k] * vectors[(j, k)].conj())
            .sum()
    })
}

/// `(Tr √(√ρ σ √ρ))²`.
///
/// Evaluated as the squared trace norm of `√ρ √σ`, whose singular values are
/// the square roots of the eigenvalues of `√ρ σ √ρ`. Working with singular
/// values keeps round-off in rank-deficient inputs linear instead of
/// square-rooted.
pub fn uhlmann_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<FidelityValue> {
    same_dim(rho.dim(), sigma.dim())?;
    let product = density_sqrt(rho).matmul(&density_sqrt(sigma))?;
    let trace_norm: f64 = product
        .to_nalgebra()
        .singular_values()
        .iter()
        .sum();
    Ok(FidelityValue::new(trace_norm * trace_norm, FidelityKind::Uhlmann))
}

/// `(Tr √(√ρ σ √ρ))²` evaluated literally with [`hermitian_sqrt`]; kept as a
/// cross-check for [`uhlmann_fidelity`] on full-rank inputs.
pub fn uhlmann_fidelity_direct(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho.dim(), sigma.dim())?;
    let root = hermitian_sqrt(rho.matrix())?;
    let inner = root.matmul(sigma.matrix())?.matmul(&root)?.hermitian_part()?;
    let tr = hermitian_sqrt(&inner)?.trace()?.re;
    Ok(tr * tr)
}

/// `⟨ψ|σ|ψ⟩`.
pub fn pure_fidelity(psi: &PureState, sigma: &DensityMatrix) -> Result<FidelityValue> {
    same_dim(psi.dim(), sigma.dim())?;
    Ok(FidelityValue::new(
        psi.expectation(sigma.matrix())?.re,
        FidelityKind::Pure,
    ))
}

/// Canonical purification `Σᵢ √λᵢ |i⟩ ⊗ |eᵢ⟩` on `ancilla ⊗ system`, with
/// eigenvalues in descending order and zero-weight branches kept.
pub fn purify(rho: &DensityMatrix) -> PureState {
    let d = rho.dim();
    let (values, vectors) = rho.matrix().eigh_unchecked();
    let mut amps = vec![ZERO; d * d];
    for (slot, k) in (0..d).rev().enumerate() {
        let w = values[k].max(0.0).sqrt();
        for s in 0..d {
            amps[slot * d + s] = vectors[(s, k)] * w;
        }
    }
    // eigenvalues sum to 1 up to round-off
    PureState::normalized(amps).expect("purification of a unit-trace state is non-zero")
}

fn channel_dims(phi: &PureState, ch: &TeleportChannel) -> Result<usize> {
    let d = ch.d();
    if !phi.dim().is_multiple_of(d) {
        return Err(Error::BadBipartition {
            rows: phi.dim(),
            cols: 1,
            dim_a: phi.dim() / d,
            dim_b: d,
        });
    }
    Ok(phi.dim() / d)
}

/// `⟨φ|(I ⊗ ε)(|φ⟩⟨φ|)|φ⟩` evaluated by applying the channel to the full
/// bipartite operator.
pub fn entanglement_fidelity_of_purification(
    phi: &PureState,
    ch: &TeleportChannel,
) -> Result<FidelityValue> {
    channel_dims(phi, ch)?;
    let out = ch.apply_to_second(&phi.projector())?;
    Ok(FidelityValue::new(
        phi.expectation(&out)?.re,
        FidelityKind::Entanglement,
    ))
}

/// Entanglement fidelity of `ρ` through `ch`, using the canonical
/// purification.
pub fn entanglement_fidelity(rho: &DensityMatrix, ch: &TeleportChannel) -> Result<FidelityValue> {
    same_dim(ch.d(), rho.dim())?;
    entanglement_fidelity_of_purification(&purify(rho), ch)
}

/// `(I ⊗ U) φ` for `φ` on `ancilla ⊗ d`.
fn apply_on_system(idx: WeylIndex, phi: &[C64], d: usize) -> Vec<C64> {
    phi.chunks(d).flat_map(|block| weyl_apply(idx, block)).collect()
}

/// `λ_nm(φ) = |⟨φ|(I ⊗ U^{n,−m})|φ⟩|²` for the channel term `(n, m)`.
pub fn lambda_nm(phi: &PureState, idx: WeylIndex) -> Result<f64> {
    let d = idx.d();
    if !phi.dim().is_multiple_of(d) {
        return Err(Error::BadBipartition {
            rows: phi.dim(),
            cols: 1,
            dim_a: phi.dim() / d,
            dim_b: d,
        });
    }
    if idx.is_identity() {
        // |⟨φ|φ⟩|² for a normalized state
        return Ok(1.0);
    }
    let moved = apply_on_system(idx.channel_partner(), phi.amplitudes(), d);
    Ok(inner(phi.amplitudes(), &moved)?.norm_sqr())
}

/// `F_e = Σ p_nm λ_nm(φ)` for a `d ⊗ d` state `φ`.
pub fn ent_fidelity_lambda(phi: &PureState, ch: &TeleportChannel) -> Result<FidelityValue> {
    let d = ch.d();
    if phi.dim() != d * d {
        return Err(Error::DimensionMismatch {
            expected: format!("state of dimension {}", d * d),
            found: format!("dimension {}", phi.dim()),
        });
    }
    let mut total = 0.0;
    for (idx, p) in ch.terms() {
        total += p * lambda_nm(phi, idx)?;
    }
    Ok(FidelityValue::new(total, FidelityKind::Entanglement))
}

fn check_closed_form_args(f: f64, d: usize) -> Result<()> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::OutOfRange { name: "singlet fraction", value: f });
    }
    if d < 2 {
        return Err(Error::InvalidDimension {
            dim: d,
            reason: "qudit dimension must be at least 2",
        });
    }
    Ok(())
}

/// Average fidelity over pure inputs: `d·f/(d+1) + 1/(d+1)`.
pub fn avg_fidelity_closed(f: f64, d: usize) -> Result<FidelityValue> {
    check_closed_form_args(f, d)?;
    let d = d as f64;
    Ok(FidelityValue::new(
        d / (d + 1.0) * f + 1.0 / (d + 1.0),
        FidelityKind::AvgClosed,
    ))
}

/// Average entanglement fidelity: `d²·f/(d²+1) + 1/(d²+1)`.
pub fn avg_ent_fidelity_closed(f: f64, d: usize) -> Result<FidelityValue> {
    check_closed_form_args(f, d)?;
    let d2 = (d * d) as f64;
    Ok(FidelityValue::new(
        d2 / (d2 + 1.0) * f + 1.0 / (d2 + 1.0),
        FidelityKind::AvgEntClosed,
    ))
}

/// Monte Carlo estimate of the average of `⟨ψ|ε(|ψ⟩⟨ψ|)|ψ⟩` over Haar
/// input states.
pub fn avg_fidelity_mc(
    ch: &TeleportChannel,
    n_samples: usize,
    rng: RngState,
    mc: &MonteCarlo,
) -> Result<McEstimate> {
    let d = ch.d();
    mc.estimate(
        n_samples,
        rng,
        |r| haar_pure(d, r),
        |psi| {
            let out = ch.apply(&psi.to_density())?;
            Ok(pure_fidelity(psi, &out)?.value)
        },
    )
}

/// Monte Carlo estimate of the average entanglement fidelity over Haar
/// states on `d ⊗ d`.
pub fn avg_ent_fidelity_mc(
    ch: &TeleportChannel,
    n_samples: usize,
    rng: RngState,
    mc: &MonteCarlo,
) -> Result<McEstimate> {
    let d = ch.d();
    mc.estimate(
        n_samples,
        rng,
        |r| haar_pure(d * d, r),
        |phi| Ok(ent_fidelity_lambda(phi, ch)?.value),
    )
}
