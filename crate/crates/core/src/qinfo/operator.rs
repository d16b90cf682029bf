use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::{Error, Result};

/// Local Pauli axis of one emitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            _ => Err(Error::InvalidParameter {
                name: "axis",
                reason: "expected one of x, y, z",
            }),
        }
    }
}

/// Hermitian operator on the symmetric subspace, in the Dicke ordering of
/// [`crate::DickeDistribution`] (row `k` is `M = J − k`).
///
/// Storage is dense; sums skip everything outside the nonzero band.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricOperator {
    two_j: u32,
    dim: usize,
    entries: Vec<Complex64>,
    bandwidth: usize,
}

const HERMITIAN_TOLERANCE: f64 = 1e-14;

impl SymmetricOperator {
    /// Row-major entries; rejects non-Hermitian input.
    pub fn from_entries(two_j: u32, entries: Vec<Complex64>) -> Result<Self> {
        let dim = two_j as usize + 1;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        for a in 0..dim {
            for b in a..dim {
                if (entries[a * dim + b] - entries[b * dim + a].conj()).norm() > HERMITIAN_TOLERANCE
                {
                    return Err(Error::InvalidParameter {
                        name: "entries",
                        reason: "operator is not Hermitian",
                    });
                }
            }
        }
        let mut bandwidth = 0;
        for a in 0..dim {
            for b in 0..dim {
                if entries[a * dim + b] != Complex64::new(0.0, 0.0) {
                    bandwidth = bandwidth.max(a.abs_diff(b));
                }
            }
        }
        Ok(Self {
            two_j,
            dim,
            entries,
            bandwidth,
        })
    }

    /// Real symmetric tridiagonal operator; `off[k]` couples levels `k` and `k + 1`.
    pub fn real_tridiagonal(two_j: u32, diag: &[f64], off: &[f64]) -> Result<Self> {
        let dim = two_j as usize + 1;
        if diag.len() != dim || off.len() + 1 != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: diag.len(),
            });
        }
        let mut e = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (k, &d) in diag.iter().enumerate() {
            e[k * dim + k] = d.into();
        }
        for (k, &o) in off.iter().enumerate() {
            e[k * dim + k + 1] = o.into();
            e[(k + 1) * dim + k] = o.into();
        }
        Self::from_entries(two_j, e)
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Column range of row `a` that can hold nonzero entries.
    pub(crate) fn band(&self, a: usize) -> core::ops::Range<usize> {
        a.saturating_sub(self.bandwidth)..(a + self.bandwidth + 1).min(self.dim)
    }

    /// Diagonal of `K²`.
    pub fn square_diagonal(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|a| self.band(a).map(|b| self.get(a, b).norm_sqr()).sum())
            .collect()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            entries: self.entries.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }

    fn ladder(two_j: u32, coupling_scale: f64, axis: Axis, diag_scale: f64) -> Self {
        let dim = two_j as usize + 1;
        let mut e = vec![Complex64::new(0.0, 0.0); dim * dim];
        match axis {
            Axis::Z => {
                for k in 0..dim {
                    let m = (f64::from(two_j) - 2.0 * k as f64) / 2.0;
                    e[k * dim + k] = (m * diag_scale).into();
                }
            }
            Axis::X | Axis::Y => {
                for k in 0..dim - 1 {
                    // ⟨M|J₊|M−1⟩ = √((J+M)(J−M+1)) with M = J − k
                    let mu = ((two_j as usize - k) * (k + 1)) as f64;
                    let s = coupling_scale * libm::sqrt(mu);
                    // σx = σ₊ + σ₋, σy = −i(σ₊ − σ₋)
                    let (upper, lower) = match axis {
                        Axis::X => (Complex64::new(s, 0.0), Complex64::new(s, 0.0)),
                        _ => (Complex64::new(0.0, -s), Complex64::new(0.0, s)),
                    };
                    e[k * dim + k + 1] = upper;
                    e[(k + 1) * dim + k] = lower;
                }
            }
        }
        Self {
            two_j,
            dim,
            entries: e,
            bandwidth: usize::from(axis != Axis::Z),
        }
    }
}

/// Symmetric-subspace block of `σ_axis ⊗ 1` for one emitter.
///
/// Each emitter carries `1/N` of the collective matrix element: diagonal
/// `M/J` for `z`, off-diagonal `(1/N)√(J(J+1) − M(M−1))` for `x` and `y`.
pub fn local_sigma_matrix_elements(two_j: u32, axis: Axis) -> Result<SymmetricOperator> {
    if two_j == 0 {
        return Err(Error::InvalidParameter {
            name: "two_j",
            reason: "need at least one emitter",
        });
    }
    let n = f64::from(two_j);
    Ok(SymmetricOperator::ladder(two_j, 1.0 / n, axis, 2.0 / n))
}

/// `Jx = (J₊ + J₋)/2`.
pub fn build_jx(two_j: u32) -> SymmetricOperator {
    SymmetricOperator::ladder(two_j, 0.5, Axis::X, 1.0)
}

/// `Jy = (J₊ − J₋)/(2i)`.
pub fn build_jy(two_j: u32) -> SymmetricOperator {
    SymmetricOperator::ladder(two_j, 0.5, Axis::Y, 1.0)
}

/// `Jz = diag(M)`.
pub fn build_jz(two_j: u32) -> SymmetricOperator {
    SymmetricOperator::ladder(two_j, 0.5, Axis::Z, 1.0)
}

/// The three local Pauli blocks, built once per `2J`.
#[derive(Debug, Clone)]
pub struct LocalPaulis {
    ops: [SymmetricOperator; 3],
}

impl LocalPaulis {
    pub fn new(two_j: u32) -> Result<Self> {
        Ok(Self {
            ops: [
                local_sigma_matrix_elements(two_j, Axis::X)?,
                local_sigma_matrix_elements(two_j, Axis::Y)?,
                local_sigma_matrix_elements(two_j, Axis::Z)?,
            ],
        })
    }

    pub fn get(&self, axis: Axis) -> &SymmetricOperator {
        &self.ops[axis.index()]
    }

    pub fn two_j(&self) -> u32 {
        self.ops[0].two_j
    }
}
