use serde::{Deserialize, Serialize};

/// Maximum entrywise |M − M†| accepted as Hermitian.
pub const TOL_HERM: f64 = 1e-10;
/// Most negative eigenvalue accepted as positive semidefinite.
pub const TOL_PSD: f64 = 1e-10;
/// Allowed deviation of a density matrix trace (or a state norm) from 1.
pub const TOL_TRACE: f64 = 1e-10;
/// Reconstruction tolerance for `R·R = M` after a Hermitian square root.
pub const TOL_RECON: f64 = 1e-8;

/// Numerical tolerances used when validating states and operators.
///
/// The defaults are the library constants above; the CLI can override them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub herm: f64,
    pub psd: f64,
    pub trace: f64,
    pub recon: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: TOL_HERM,
            psd: TOL_PSD,
            trace: TOL_TRACE,
            recon: TOL_RECON,
        }
    }
}
