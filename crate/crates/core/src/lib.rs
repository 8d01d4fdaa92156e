//! Simulation of the standard qudit teleportation channel built from an
//! arbitrary bipartite resource state, together with fidelity measures and
//! Monte Carlo checks of their Haar averages.
//!
//! Conventions used throughout:
//! * `kron(a, b)` places `a` on the first (slow) index.
//! * `U^{n,m} = Σ_j e^{2πi nj/d} |j⟩⟨j+m mod d|`, and Bell states are
//!   `(U^{n,m} ⊗ I)|Ω^{0,0}⟩`.
//! * Purifications and other bipartite states are `ancilla ⊗ system`; the
//!   channel acts on the system.

pub mod channel;
pub mod error;
pub mod fidelity;
pub mod matrix;
pub mod matrix_io;
pub mod resource;
pub mod sampling;
pub mod state;
pub mod tolerance;
pub mod twirl;
pub mod weyl;

pub use channel::{
    apply_channel, channel_kraus, outcome_probs, simulate_protocol, singlet_fraction,
    standard_protocol, GeneralProtocol, TeleportChannel,
};
pub use error::{Error, Result};
pub use fidelity::{
    avg_ent_fidelity_closed, avg_fidelity_closed, ent_fidelity_lambda, entanglement_fidelity,
    pure_fidelity, purify, uhlmann_fidelity, FidelityKind, FidelityValue,
};
pub use matrix::{
    hermitian_sqrt, kron, partial_trace, swap_operator, ComplexMatrix, Keep, C64,
};
pub use sampling::{haar_pure, haar_unitary, hs_mixed, mc_estimate, McEstimate, MonteCarlo, RngState};
pub use state::{trace_distance, DensityMatrix, PureState};
pub use tolerance::Tolerances;
pub use twirl::{alpha_beta, mu_nm, twirl_integral_mc, verify_trace_identities, TwirlCoefficients};
pub use weyl::{bell_basis, bell_state, weyl_unitary, BellBasis, WeylIndex};

/// Library version recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
