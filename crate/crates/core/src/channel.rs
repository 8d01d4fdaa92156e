//! The standard teleportation channel and a step-by-step protocol simulator.
//!
//! Subsystem order for the protocol is `1 ⊗ 3 ⊗ 4`: the input particle, the
//! sender's half of the resource and the receiver's half. Bell states on
//! `1 ⊗ 3` carry the Weyl unitary on the first factor.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::{kron, partial_trace, ComplexMatrix, Keep, C64, ZERO};
use crate::state::DensityMatrix;
use crate::weyl::{bell_state_at, check_dim, weyl_matrix, WeylIndex};

/// Probabilities in `[-PROB_CLAMP, 0)` are treated as round-off and clamped.
const PROB_CLAMP: f64 = 1e-12;
const PROB_SUM_TOL: f64 = 1e-10;
const COMPLETENESS_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-10;

/// Dimension `d` of the qudit teleported through a `d²`-dimensional resource.
pub fn resource_qudit_dim(chi: &DensityMatrix) -> Result<usize> {
    let n = chi.dim();
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n || d < 2 {
        return Err(Error::InvalidResource(format!(
            "dimension {n} is not d² for a qudit dimension d >= 2"
        )));
    }
    Ok(d)
}

/// `p_nm = ⟨Ω^{n,m}|χ|Ω^{n,m}⟩`, flattened in row-major `(n, m)` order.
pub fn outcome_probs(chi: &DensityMatrix) -> Result<Vec<f64>> {
    let d = resource_qudit_dim(chi)?;
    let probs = WeylIndex::all(d)?
        .map(|idx| {
            bell_state_at(idx)
                .expectation(chi.matrix())
                .map(|z| z.re)
        })
        .collect::<Result<Vec<_>>>()?;
    check_probs(probs).map_err(|e| Error::InvalidResource(e.to_string()))
}

/// Generalized singlet fraction `f = ⟨Ω^{0,0}|χ|Ω^{0,0}⟩`.
pub fn singlet_fraction(chi: &DensityMatrix) -> Result<f64> {
    let d = resource_qudit_dim(chi)?;
    let f = bell_state_at(WeylIndex::new(d, 0, 0)?)
        .expectation(chi.matrix())?
        .re;
    Ok(f.clamp(0.0, 1.0))
}

fn check_probs(mut probs: Vec<f64>) -> Result<Vec<f64>> {
    for p in &mut probs {
        if !p.is_finite() || *p < -PROB_CLAMP || *p > 1.0 + PROB_CLAMP {
            return Err(Error::OutOfRange { name: "p_nm", value: *p });
        }
        *p = p.clamp(0.0, 1.0);
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > PROB_SUM_TOL {
        return Err(Error::OutOfRange { name: "sum of p_nm", value: total });
    }
    Ok(probs)
}

/// `ε(ρ) = Σ p_nm U^{n,−m} ρ U^{n,−m†}`.
///
/// Only the probability grid is stored; the channel depends on the resource
/// through nothing else.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportChannel {
    d: usize,
    probs: Vec<f64>,
    fingerprint: String,
}

impl TeleportChannel {
    pub fn from_resource(chi: &DensityMatrix) -> Result<Self> {
        let d = resource_qudit_dim(chi)?;
        let probs = outcome_probs(chi)?;
        Ok(Self {
            d,
            probs,
            fingerprint: fingerprint_matrix(chi.matrix()),
        })
    }

    /// Builds a channel directly from a `d × d` grid in row-major `(n, m)` order.
    pub fn from_probs(d: usize, probs: Vec<f64>) -> Result<Self> {
        check_dim(d)?;
        if probs.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: format!("{} probabilities", d * d),
                found: format!("{}", probs.len()),
            });
        }
        let probs = check_probs(probs)?;
        let mut hasher = Sha256::new();
        hasher.update((d as u64).to_le_bytes());
        for p in &probs {
            hasher.update(p.to_le_bytes());
        }
        let fingerprint = hex::encode(&hasher.finalize()[..16]);
        Ok(Self { d, probs, fingerprint })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Row-major `(n, m)` probability grid.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, idx: WeylIndex) -> f64 {
        self.probs[idx.flat()]
    }

    /// The grid as `d` rows of `d` entries.
    pub fn prob_grid(&self) -> Vec<Vec<f64>> {
        self.probs.chunks(self.d).map(<[f64]>::to_vec).collect()
    }

    /// `p_00`, the singlet fraction of the source resource.
    pub fn singlet_fraction(&self) -> f64 {
        self.probs[0]
    }

    /// Hex digest identifying the resource (or grid) the channel came from.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// Indices with non-zero weight, paired with `p_nm`.
    pub fn terms(&self) -> impl Iterator<Item = (WeylIndex, f64)> + '_ {
        WeylIndex::all(self.d)
            .expect("channel dimension was validated")
            .map(|idx| (idx, self.prob(idx)))
            .filter(|&(_, p)| p > 0.0)
    }

    fn check_input(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: format!("state of dimension {}", self.d),
                found: format!("dimension {}", rho.dim()),
            });
        }
        Ok(())
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_input(rho)?;
        let mut out = ComplexMatrix::zeros(self.d, self.d);
        for (idx, p) in self.terms() {
            let u = weyl_matrix(idx.channel_partner());
            out.add_scaled(C64::new(p, 0.0), &rho.matrix().conjugate_by(&u)?)?;
        }
        Ok(DensityMatrix::from_trusted(out))
    }

    /// `(I ⊗ ε)(M)` for an operator `M` on `ancilla ⊗ d`.
    pub fn apply_to_second(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = m.rows();
        if !m.is_square() || !n.is_multiple_of(self.d) {
            return Err(Error::BadBipartition {
                rows: m.rows(),
                cols: m.cols(),
                dim_a: n / self.d,
                dim_b: self.d,
            });
        }
        let ancilla = ComplexMatrix::identity(n / self.d);
        let mut out = ComplexMatrix::zeros(n, n);
        for (idx, p) in self.terms() {
            let u = kron(&ancilla, &weyl_matrix(idx.channel_partner()));
            out.add_scaled(C64::new(p, 0.0), &m.conjugate_by(&u)?)?;
        }
        Ok(out)
    }

    /// Kraus operators `√p_nm · U^{n,−m}` for every `(n, m)`, zero-weight
    /// terms included.
    pub fn kraus(&self) -> Vec<ComplexMatrix> {
        WeylIndex::all(self.d)
            .expect("channel dimension was validated")
            .map(|idx| {
                weyl_matrix(idx.channel_partner()).scale(C64::new(self.prob(idx).sqrt(), 0.0))
            })
            .collect()
    }
}

pub fn channel_kraus(ch: &TeleportChannel) -> Vec<ComplexMatrix> {
    ch.kraus()
}

pub fn apply_channel(ch: &TeleportChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ch.apply(rho)
}

/// `Σ A ρ A†`.
pub fn apply_kraus(kraus: &[ComplexMatrix], rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::zeros(rho.rows(), rho.cols());
    for a in kraus {
        out.add_scaled(C64::new(1.0, 0.0), &rho.conjugate_by(a)?)?;
    }
    Ok(out)
}

/// `Σ A†A`.
pub fn kraus_completeness(kraus: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let first = kraus.first().ok_or(Error::Format("empty Kraus list".into()))?;
    let mut out = ComplexMatrix::zeros(first.cols(), first.cols());
    for a in kraus {
        out.add_scaled(C64::new(1.0, 0.0), &a.dagger().matmul(a)?)?;
    }
    Ok(out)
}

pub(crate) fn fingerprint_matrix(m: &ComplexMatrix) -> String {
    let mut hasher = Sha256::new();
    hasher.update((m.rows() as u64).to_le_bytes());
    for z in m.as_slice() {
        hasher.update(z.re.to_le_bytes());
        hasher.update(z.im.to_le_bytes());
    }
    hex::encode(&hasher.finalize()[..16])
}

/// A sender measurement on particles `1 ⊗ 3` with one receiver correction
/// unitary per outcome.
#[derive(Debug, Clone)]
pub struct GeneralProtocol {
    d: usize,
    measurement_ops: Vec<ComplexMatrix>,
    corrections: Vec<ComplexMatrix>,
}

impl GeneralProtocol {
    pub fn new(
        d: usize,
        measurement_ops: Vec<ComplexMatrix>,
        corrections: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        check_dim(d)?;
        if measurement_ops.is_empty() || measurement_ops.len() != corrections.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} corrections", measurement_ops.len()),
                found: format!("{}", corrections.len()),
            });
        }
        let pair = d * d;
        for m in &measurement_ops {
            if m.rows() != pair || m.cols() != pair {
                return Err(Error::DimensionMismatch {
                    expected: format!("{pair}x{pair} measurement operator"),
                    found: format!("{}x{}", m.rows(), m.cols()),
                });
            }
        }
        let deviation = kraus_completeness(&measurement_ops)?
            .max_abs_diff(&ComplexMatrix::identity(pair))?;
        if deviation > COMPLETENESS_TOL {
            return Err(Error::NotAMeasurement { deviation });
        }
        for (index, c) in corrections.iter().enumerate() {
            if c.rows() != d || c.cols() != d {
                return Err(Error::DimensionMismatch {
                    expected: format!("{d}x{d} correction"),
                    found: format!("{}x{}", c.rows(), c.cols()),
                });
            }
            let deviation = c.unitarity_deviation()?;
            if deviation > UNITARY_TOL {
                return Err(Error::NotUnitary { index, deviation });
            }
        }
        Ok(Self {
            d,
            measurement_ops,
            corrections,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn measurement_ops(&self) -> &[ComplexMatrix] {
        &self.measurement_ops
    }

    pub fn corrections(&self) -> &[ComplexMatrix] {
        &self.corrections
    }

    pub fn outcomes(&self) -> usize {
        self.measurement_ops.len()
    }
}

/// Bell projectors `|Ω^{n,m}⟩⟨Ω^{n,m}|` with correction `U^{n,m}` for outcome
/// `(n, m)`: the receiver holds `U^{n,m†}|ψ⟩` after that outcome when the
/// resource is `|Ω^{0,0}⟩`.
pub fn standard_protocol(d: usize) -> Result<GeneralProtocol> {
    let (ops, corrections) = WeylIndex::all(d)?
        .map(|idx| (bell_state_at(idx).projector(), weyl_matrix(idx)))
        .unzip();
    GeneralProtocol::new(d, ops, corrections)
}

fn check_protocol_inputs(
    chi: &DensityMatrix,
    rho: &DensityMatrix,
    proto: &GeneralProtocol,
) -> Result<()> {
    let d = proto.d;
    if rho.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: format!("input state of dimension {d}"),
            found: format!("dimension {}", rho.dim()),
        });
    }
    if chi.dim() != d * d {
        return Err(Error::DimensionMismatch {
            expected: format!("resource of dimension {}", d * d),
            found: format!("dimension {}", chi.dim()),
        });
    }
    Ok(())
}

/// Receiver's unnormalized state `Tr₁₃[(M ⊗ I)(ρ ⊗ χ)(M† ⊗ I)]` for every
/// outcome. Its trace is the outcome probability.
pub fn protocol_branches(
    chi: &DensityMatrix,
    rho: &DensityMatrix,
    proto: &GeneralProtocol,
) -> Result<Vec<ComplexMatrix>> {
    check_protocol_inputs(chi, rho, proto)?;
    let d = proto.d;
    let joint = kron(rho.matrix(), chi.matrix());
    let id_receiver = ComplexMatrix::identity(d);
    proto
        .measurement_ops
        .iter()
        .map(|m| {
            let op = kron(m, &id_receiver);
            let post = joint.conjugate_by(&op)?;
            partial_trace(&post, d * d, d, Keep::B)
        })
        .collect()
}

/// Outcome probabilities `p_i` of the sender's measurement.
pub fn protocol_outcome_probs(
    chi: &DensityMatrix,
    rho: &DensityMatrix,
    proto: &GeneralProtocol,
) -> Result<Vec<f64>> {
    protocol_branches(chi, rho, proto)?
        .iter()
        .map(|b| b.trace().map(|t| t.re))
        .collect()
}

/// `γ = Σᵢ pᵢ εⁱ(ρᵢ)` with `εⁱ` conjugation by the `i`-th correction.
///
/// Each branch is accumulated unnormalized, so `pᵢ ρᵢ` is never divided and
/// re-multiplied and zero-probability outcomes contribute nothing.
pub fn simulate_protocol(
    chi: &DensityMatrix,
    rho: &DensityMatrix,
    proto: &GeneralProtocol,
) -> Result<DensityMatrix> {
    let branches = protocol_branches(chi, rho, proto)?;
    let d = proto.d;
    let mut out = ComplexMatrix::from_fn(d, d, |_, _| ZERO);
    for (branch, c) in branches.iter().zip(&proto.corrections) {
        out.add_scaled(C64::new(1.0, 0.0), &branch.conjugate_by(c)?)?;
    }
    Ok(DensityMatrix::from_trusted(out.hermitian_part()?))
}
