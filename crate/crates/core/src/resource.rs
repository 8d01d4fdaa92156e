//! Canonical resource states on `d ⊗ d`.

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::sampling::{hs_mixed, RngState};
use crate::state::DensityMatrix;
use crate::weyl::{check_dim, maximally_entangled};

/// `|Ω^{0,0}⟩⟨Ω^{0,0}|`.
pub fn bell_resource(d: usize) -> Result<DensityMatrix> {
    Ok(maximally_entangled(d)?.to_density())
}

/// `I/d²`.
pub fn maximally_mixed_resource(d: usize) -> Result<DensityMatrix> {
    check_dim(d)?;
    Ok(DensityMatrix::maximally_mixed(d * d))
}

/// `p·|Ω^{0,0}⟩⟨Ω^{0,0}| + (1 − p)·I/d²`.
pub fn isotropic(d: usize, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange { name: "isotropic weight", value: p });
    }
    let omega = maximally_entangled(d)?.projector();
    let n = d * d;
    let mut m = ComplexMatrix::identity(n).scale(C64::new((1.0 - p) / n as f64, 0.0));
    m.add_scaled(C64::new(p, 0.0), &omega)?;
    DensityMatrix::new(m)
}

/// A Hilbert–Schmidt random state on `d ⊗ d`, fixed by `seed`.
pub fn random_density(d: usize, seed: u64) -> Result<DensityMatrix> {
    check_dim(d)?;
    let mut rng = RngState::new(seed, 0).rng();
    hs_mixed(d * d, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        for d in 2..=4 {
            for chi in [
                bell_resource(d).unwrap(),
                maximally_mixed_resource(d).unwrap(),
                isotropic(d, 0.3).unwrap(),
                random_density(d, 7).unwrap(),
            ] {
                assert_eq!(chi.dim(), d * d);
                assert!(DensityMatrix::new(chi.into_matrix()).is_ok());
            }
        }
    }

    #[test]
    fn isotropic_endpoints() {
        let a = isotropic(2, 1.0).unwrap();
        assert!(a.matrix().max_abs_diff(bell_resource(2).unwrap().matrix()).unwrap() < 1e-15);
        let b = isotropic(2, 0.0).unwrap();
        let mm = maximally_mixed_resource(2).unwrap();
        assert!(b.matrix().max_abs_diff(mm.matrix()).unwrap() < 1e-15);
        assert!(isotropic(2, 1.5).is_err());
        assert!(bell_resource(1).is_err());
    }

    #[test]
    fn random_density_is_seeded() {
        assert_eq!(random_density(2, 3).unwrap(), random_density(2, 3).unwrap());
        assert_ne!(random_density(2, 3).unwrap(), random_density(2, 4).unwrap());
    }
}
