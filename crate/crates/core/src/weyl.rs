//! Weyl (shift-and-clock) unitaries and the generalized Bell basis.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ZERO};
use crate::state::PureState;

/// A pair `(n, m)` of Weyl indices reduced modulo `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeylIndex {
    d: usize,
    n: usize,
    m: usize,
}

impl WeylIndex {
    /// Reduces `n` and `m` modulo `d`; negative indices wrap, so `-m` becomes
    /// `(d - m) mod d`.
    pub fn new(d: usize, n: i64, m: i64) -> Result<Self> {
        check_dim(d)?;
        let di = d as i64;
        Ok(Self {
            d,
            n: n.rem_euclid(di) as usize,
            m: m.rem_euclid(di) as usize,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The index `(n, −m)` used by the teleportation channel's Kraus operators.
    pub fn channel_partner(&self) -> Self {
        Self {
            d: self.d,
            n: self.n,
            m: (self.d - self.m) % self.d,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.n == 0 && self.m == 0
    }

    /// All `d²` indices in row-major `(n, m)` order.
    pub fn all(d: usize) -> Result<impl Iterator<Item = WeylIndex>> {
        check_dim(d)?;
        Ok((0..d).flat_map(move |n| (0..d).map(move |m| WeylIndex { d, n, m })))
    }

    /// Position in the row-major `(n, m)` ordering.
    pub fn flat(&self) -> usize {
        self.n * self.d + self.m
    }
}

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension {
            dim: d,
            reason: "qudit dimension must be at least 2",
        })
    } else {
        Ok(())
    }
}

/// `e^{2πi k/d}` with `k` reduced mod `d` first.
fn root_of_unity(k: usize, d: usize) -> C64 {
    C64::from_polar(1.0, TAU * (k % d) as f64 / d as f64)
}

/// `U^{n,m} = Σ_j e^{2πi nj/d} |j⟩⟨j ⊕ m|`.
pub fn weyl_unitary(d: usize, n: i64, m: i64) -> Result<ComplexMatrix> {
    Ok(weyl_matrix(WeylIndex::new(d, n, m)?))
}

pub fn weyl_matrix(idx: WeylIndex) -> ComplexMatrix {
    let WeylIndex { d, n, m } = idx;
    ComplexMatrix::from_fn(d, d, |row, col| {
        if col == (row + m) % d {
            root_of_unity(n * row, d)
        } else {
            ZERO
        }
    })
}

/// Applies `U^{n,m}` to a vector without building the matrix.
pub(crate) fn weyl_apply(idx: WeylIndex, v: &[C64]) -> Vec<C64> {
    let WeylIndex { d, n, m } = idx;
    (0..d).map(|j| root_of_unity(n * j, d) * v[(j + m) % d]).collect()
}

/// `|Ω^{0,0}⟩ = (1/√d) Σ_i |i⟩⊗|i⟩`.
pub fn maximally_entangled(d: usize) -> Result<PureState> {
    check_dim(d)?;
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = vec![ZERO; d * d];
    for i in 0..d {
        v[i * d + i] = amp;
    }
    Ok(PureState::from_trusted(v))
}

/// `|Ω^{n,m}⟩ = (U^{n,m} ⊗ I)|Ω^{0,0}⟩`.
pub fn bell_state(d: usize, n: i64, m: i64) -> Result<PureState> {
    Ok(bell_state_at(WeylIndex::new(d, n, m)?))
}

pub fn bell_state_at(idx: WeylIndex) -> PureState {
    let d = idx.d;
    let amp = 1.0 / (d as f64).sqrt();
    // (U ⊗ I) Σ_i |i⟩|i⟩ = Σ_i (U|i⟩) ⊗ |i⟩ and U|i⟩ = e^{2πi n(i−m)/d}|i − m⟩
    let mut v = vec![ZERO; d * d];
    for i in 0..d {
        let row = (i + d - idx.m) % d;
        v[row * d + i] = root_of_unity(idx.n * row, d) * amp;
    }
    PureState::from_trusted(v)
}

/// The `d²` generalized Bell states, indexed by `(n, m)`.
#[derive(Debug, Clone)]
pub struct BellBasis {
    d: usize,
    states: Vec<PureState>,
}

impl BellBasis {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn get(&self, n: i64, m: i64) -> Result<&PureState> {
        Ok(&self.states[WeylIndex::new(self.d, n, m)?.flat()])
    }

    pub fn iter(&self) -> impl Iterator<Item = (WeylIndex, &PureState)> {
        let d = self.d;
        self.states
            .iter()
            .enumerate()
            .map(move |(k, s)| (WeylIndex { d, n: k / d, m: k % d }, s))
    }

    /// Gram matrix `G[a][b] = ⟨Ω_a|Ω_b⟩`.
    pub fn gram(&self) -> ComplexMatrix {
        let n = self.states.len();
        ComplexMatrix::from_fn(n, n, |a, b| {
            self.states[a]
                .inner(&self.states[b])
                .expect("bell states share a dimension")
        })
    }

    /// `Σ |Ω^{n,m}⟩⟨Ω^{n,m}|`.
    pub fn completeness_sum(&self) -> ComplexMatrix {
        let dim = self.d * self.d;
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for s in &self.states {
            acc.add_scaled(C64::new(1.0, 0.0), &s.projector())
                .expect("projectors share a dimension");
        }
        acc
    }
}

pub fn bell_basis(d: usize) -> Result<BellBasis> {
    let states = WeylIndex::all(d)?.map(bell_state_at).collect();
    Ok(BellBasis { d, states })
}

/// `(A ⊗ I)|v⟩` for `v` on `d ⊗ d`.
#[cfg(test)]
pub(crate) fn apply_first(a: &ComplexMatrix, v: &[C64]) -> Vec<C64> {
    let d = a.rows();
    let mut out = vec![ZERO; v.len()];
    for i in 0..d {
        for k in 0..d {
            let aik = a[(i, k)];
            if aik == ZERO {
                continue;
            }
            for j in 0..d {
                out[i * d + j] += aik * v[k * d + j];
            }
        }
    }
    out
}
