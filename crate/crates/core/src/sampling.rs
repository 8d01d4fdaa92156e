//! Haar and Hilbert–Schmidt sampling plus a reproducible Monte Carlo driver.
//!
//! Randomness comes from ChaCha8. A `(seed, stream)` pair selects the key and
//! each fixed-size batch of a Monte Carlo run uses its own ChaCha stream, so
//! results do not depend on how many worker threads execute the batches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{partial_trace, ComplexMatrix, Keep, C64};
use crate::state::{DensityMatrix, PureState};

/// Seed plus sub-stream identifier. Equal values reproduce identical samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngState {
    pub seed: u64,
    pub stream: u64,
}

impl RngState {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    fn key(&self) -> [u8; 32] {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.stream.to_le_bytes());
        key
    }

    /// Generator for this `(seed, stream)`.
    pub fn rng(&self) -> ChaCha8Rng {
        self.batch_rng(0)
    }

    /// Generator for batch `batch` of a Monte Carlo run.
    pub fn batch_rng(&self, batch: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key());
        rng.set_stream(batch);
        rng
    }

    /// A derived sub-stream, e.g. one per check in a multi-part report.
    pub fn substream(&self, index: u64) -> Self {
        Self {
            seed: self.seed,
            stream: self
                .stream
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(index.wrapping_add(1)),
        }
    }
}

/// Standard complex Gaussian: real and imaginary parts i.i.d. N(0, ½).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix of independent standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed `d × d` unitary.
///
/// QR-factorizes a Ginibre matrix and multiplies `Q` by the phases of the
/// diagonal of `R`, which removes the bias of the factorization's sign choice.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if d < 1 {
        return Err(Error::InvalidDimension {
            dim: d,
            reason: "unitary dimension must be at least 1",
        });
    }
    let z = ginibre(d, d, rng).to_nalgebra();
    let qr = z.qr();
    let q = qr.q();
    let r = qr.r();
    let mut out = q.clone();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            out[(i, j)] = q[(i, j)] * phase;
        }
    }
    Ok(ComplexMatrix::from_nalgebra(&out))
}

/// Haar-distributed pure state in dimension `dim` (a normalized complex
/// Gaussian vector).
pub fn haar_pure<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<PureState> {
    if dim < 1 {
        return Err(Error::InvalidDimension {
            dim,
            reason: "state dimension must be at least 1",
        });
    }
    loop {
        let v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        if v.iter().any(|z| z.norm_sqr() > 0.0) {
            return PureState::normalized(v);
        }
    }
}

/// Hilbert–Schmidt random state together with the Haar pure state on
/// `ancilla ⊗ system` it was reduced from.
pub fn hs_mixed_with_purification<R: Rng + ?Sized>(
    d: usize,
    rng: &mut R,
) -> Result<(PureState, DensityMatrix)> {
    let phi = haar_pure(d * d, rng)?;
    let rho = partial_trace(&phi.projector(), d, d, Keep::B)?.hermitian_part()?;
    Ok((phi, DensityMatrix::from_trusted(rho)))
}

/// Hilbert–Schmidt random density matrix of dimension `d`.
pub fn hs_mixed<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<DensityMatrix> {
    Ok(hs_mixed_with_purification(d, rng)?.1)
}

/// Result of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation (divisor `N − 1`) over `√N`.
    pub stderr: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub stream: u64,
}

impl McEstimate {
    /// `|mean − target| / stderr`; zero when both numerator and stderr vanish.
    pub fn z_score(&self, target: f64) -> f64 {
        let dev = (self.mean - target).abs();
        if dev == 0.0 {
            0.0
        } else {
            dev / self.stderr
        }
    }

    /// Whether `target` lies within `k` standard errors of the mean, with an
    /// absolute floor `abs_floor` for estimates whose spread is pure round-off.
    pub fn agrees_with(&self, target: f64, k: f64, abs_floor: f64) -> bool {
        (self.mean - target).abs() <= k * self.stderr + abs_floor
    }
}

/// Streaming mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Combines two partial accumulations.
    pub fn merge(&self, other: &RunningStats) -> RunningStats {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / count as f64;
        RunningStats {
            count,
            mean: self.mean + delta * w,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * w,
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    pub fn stderr(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }
}

pub const DEFAULT_BATCH_SIZE: usize = 2048;

/// Monte Carlo driver.
///
/// Samples are split into batches of `batch_size`; batch `b` draws from
/// ChaCha stream `b` of the run's key and batch statistics are merged in
/// batch order. The estimate is therefore bit-identical for any `threads`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarlo {
    pub batch_size: usize,
    /// Worker cap; `None` uses rayon's global pool.
    pub threads: Option<usize>,
}

impl Default for MonteCarlo {
    fn default() -> Self {
        Self {
            batch_size: DEFAULT_BATCH_SIZE,
            threads: None,
        }
    }
}

impl MonteCarlo {
    pub fn with_threads(threads: Option<usize>) -> Self {
        Self {
            threads,
            ..Self::default()
        }
    }

    pub fn estimate<S, F, G>(
        &self,
        n: usize,
        rng: RngState,
        sampler: F,
        statistic: G,
    ) -> Result<McEstimate>
    where
        F: Fn(&mut ChaCha8Rng) -> Result<S> + Sync,
        G: Fn(&S) -> Result<f64> + Sync,
    {
        if n < 2 {
            return Err(Error::TooFewSamples(n));
        }
        let batch = self.batch_size.max(1);
        let batches = n.div_ceil(batch);
        let run_batch = |b: usize| -> Result<RunningStats> {
            let mut r = rng.batch_rng(b as u64);
            let mut stats = RunningStats::default();
            let len = batch.min(n - b * batch);
            for _ in 0..len {
                let sample = sampler(&mut r)?;
                stats.push(statistic(&sample)?);
            }
            Ok(stats)
        };
        let run = || -> Result<Vec<RunningStats>> {
            (0..batches).into_par_iter().map(run_batch).collect()
        };
        let parts = match self.threads {
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::Format(format!("thread pool: {e}")))?
                .install(run)?,
            None => run()?,
        };
        let total = parts
            .iter()
            .fold(RunningStats::default(), |acc, s| acc.merge(s));
        Ok(McEstimate {
            mean: total.mean(),
            stderr: total.stderr(),
            n_samples: n,
            seed: rng.seed,
            stream: rng.stream,
        })
    }
}

/// Mean and standard error of `statistic(sampler(rng))` over `n` samples.
pub fn mc_estimate<S, F, G>(sampler: F, statistic: G, n: usize, rng: RngState) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Result<S> + Sync,
    G: Fn(&S) -> Result<f64> + Sync,
{
    MonteCarlo::default().estimate(n, rng, sampler, statistic)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_state_same_stream() {
        let a: Vec<u64> = {
            let mut r = RngState::new(9, 2).rng();
            (0..5).map(|_| r.random()).collect()
        };
        let b: Vec<u64> = {
            let mut r = RngState::new(9, 2).rng();
            (0..5).map(|_| r.random()).collect()
        };
        let c: Vec<u64> = {
            let mut r = RngState::new(9, 3).rng();
            (0..5).map(|_| r.random()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(RngState::new(1, 0).substream(0), RngState::new(1, 0).substream(1));
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut r = RngState::new(1, 0).rng();
        for d in 1..=8 {
            let u = haar_unitary(d, &mut r).unwrap();
            assert!(u.unitarity_deviation().unwrap() < 1e-12);
        }
        assert!(haar_unitary(0, &mut r).is_err());
    }

    #[test]
    fn haar_pure_is_normalized() {
        let mut r = RngState::new(2, 0).rng();
        for dim in 1..=16 {
            let s = haar_pure(dim, &mut r).unwrap();
            let n: f64 = s.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-12);
            let e = s.expectation(&ComplexMatrix::identity(dim)).unwrap();
            assert!((e.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hs_mixed_is_reduced_purification() {
        let mut r = RngState::new(3, 0).rng();
        for d in 1..=4 {
            let (phi, rho) = hs_mixed_with_purification(d, &mut r).unwrap();
            assert!((rho.matrix().trace().unwrap().re - 1.0).abs() < 1e-12);
            assert!(rho.eigenvalues()[0] >= -1e-12);
            let reduced = partial_trace(&phi.projector(), d, d, Keep::B)
                .unwrap()
                .hermitian_part()
                .unwrap();
            assert_eq!(&reduced, rho.matrix());
        }
        let mut a = RngState::new(4, 1).rng();
        let mut b = RngState::new(4, 1).rng();
        let (phi, _) = hs_mixed_with_purification(3, &mut a).unwrap();
        let rho = hs_mixed(3, &mut b).unwrap();
        let reduced = partial_trace(&phi.projector(), 3, 3, Keep::B).unwrap();
        assert_eq!(&reduced.hermitian_part().unwrap(), rho.matrix());
    }

    #[test]
    fn running_stats_merge_matches_sequential() {
        let xs: Vec<f64> = (0..100).map(|k| ((k * 37) % 11) as f64 * 0.3).collect();
        let mut all = RunningStats::default();
        xs.iter().for_each(|&x| all.push(x));
        let mut left = RunningStats::default();
        let mut right = RunningStats::default();
        xs[..37].iter().for_each(|&x| left.push(x));
        xs[37..].iter().for_each(|&x| right.push(x));
        let merged = left.merge(&right);
        assert!((merged.mean() - all.mean()).abs() < 1e-12);
        assert!((merged.variance() - all.variance()).abs() < 1e-12);

        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!((all.variance() - var).abs() < 1e-12);
    }

    #[test]
    fn constant_statistic_has_zero_stderr() {
        let est = mc_estimate(|_| Ok(()), |_| Ok(0.75), 1000, RngState::new(5, 0)).unwrap();
        assert_eq!(est.mean, 0.75);
        assert_eq!(est.stderr, 0.0);
        assert_eq!(est.n_samples, 1000);
        assert_eq!(est.seed, 5);
    }

    #[test]
    fn too_few_samples() {
        let err = mc_estimate(|_| Ok(()), |_| Ok(1.0), 1, RngState::new(0, 0)).unwrap_err();
        assert_eq!(err, Error::TooFewSamples(1));
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let run = |threads| {
            MonteCarlo { batch_size: 64, threads }
                .estimate(
                    1000,
                    RngState::new(6, 1),
                    |r| haar_pure(3, r),
                    |s| Ok(s.amplitudes()[0].norm_sqr()),
                )
                .unwrap()
        };
        let one = run(Some(1));
        assert_eq!(one, run(Some(4)));
        assert_eq!(one, run(None));
    }

    #[test]
    fn agreement_rules() {
        let est = McEstimate {
            mean: 1.0,
            stderr: 0.0,
            n_samples: 10,
            seed: 0,
            stream: 0,
        };
        assert_eq!(est.z_score(1.0), 0.0);
        assert!(est.agrees_with(1.0, 4.0, 0.0));
        assert!(!est.agrees_with(0.9, 4.0, 1e-12));
    }
}
