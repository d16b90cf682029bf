use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Values in `[-CLIP_TOLERANCE, 0)` are rounding noise and get clipped to 0.
pub const CLIP_TOLERANCE: f64 = 1e-12;

/// Allowed deviation of `Σ p` from 1.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Populations `p_{J,M}` of the `2J + 1` Dicke states at one instant.
///
/// Index `k` holds `M = J − k`; `k = 0` is `|J, J⟩`, the last entry is
/// `|J, −J⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeDistribution {
    two_j: u32,
    populations: Vec<f64>,
}

impl DickeDistribution {
    /// Validates, clips near-zero negatives and renormalizes.
    pub fn new(two_j: u32, populations: Vec<f64>) -> Result<Self> {
        let expected = two_j as usize + 1;
        if populations.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: populations.len(),
            });
        }
        let mut populations = populations;
        clip_and_normalize(&mut populations)?;
        Ok(Self { two_j, populations })
    }

    pub fn fully_excited(two_j: u32) -> Self {
        Self::spike(two_j, 0)
    }

    pub fn ground(two_j: u32) -> Self {
        Self::spike(two_j, two_j as usize)
    }

    /// All weight on level `k`.
    ///
    /// Panics if `k > 2J`.
    pub fn spike(two_j: u32, k: usize) -> Self {
        let mut populations = vec![0.0; two_j as usize + 1];
        populations[k] = 1.0;
        Self { two_j, populations }
    }

    /// `p = 1/(2J + 1)` on every level, i.e. `1_sym / (N + 1)`.
    pub fn uniform(two_j: u32) -> Self {
        let n = two_j as usize + 1;
        Self {
            two_j,
            populations: vec![1.0 / n as f64; n],
        }
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn j(&self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    pub fn len(&self) -> usize {
        self.populations.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn populations(&self) -> &[f64] {
        &self.populations
    }

    /// Magnetic quantum number of level `k`.
    pub fn m(&self, k: usize) -> f64 {
        m_of(self.two_j, k)
    }

    /// `(M, p_M)` pairs from `M = J` down to `M = −J`.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.populations
            .iter()
            .enumerate()
            .map(move |(k, &p)| (self.m(k), p))
    }

    pub fn excited_population(&self) -> f64 {
        self.populations[0]
    }

    pub fn ground_population(&self) -> f64 {
        self.populations[self.populations.len() - 1]
    }

    /// Convex combination `Σ w_i ρ_i`; the weights must sum to 1.
    pub fn mix(parts: &[(f64, &DickeDistribution)]) -> Result<Self> {
        let first = parts.first().ok_or(Error::InvalidParameter {
            name: "parts",
            reason: "mixture needs at least one component",
        })?;
        let two_j = first.1.two_j;
        let mut populations = vec![0.0; two_j as usize + 1];
        for &(w, d) in parts {
            if d.two_j != two_j {
                return Err(Error::DimensionMismatch {
                    expected: populations.len(),
                    actual: d.len(),
                });
            }
            for (acc, p) in populations.iter_mut().zip(&d.populations) {
                *acc += w * p;
            }
        }
        Self::new(two_j, populations)
    }

    pub(crate) fn check_dim(&self, two_j: u32) -> Result<()> {
        if self.two_j != two_j {
            return Err(Error::DimensionMismatch {
                expected: two_j as usize + 1,
                actual: self.len(),
            });
        }
        Ok(())
    }
}

pub(crate) fn m_of(two_j: u32, k: usize) -> f64 {
    (f64::from(two_j) - 2.0 * k as f64) / 2.0
}

pub(crate) fn clip_and_normalize(p: &mut [f64]) -> Result<()> {
    let mut sum = 0.0;
    for (index, v) in p.iter_mut().enumerate() {
        if !v.is_finite() || *v < -CLIP_TOLERANCE {
            return Err(Error::NegativePopulation { index, value: *v });
        }
        if *v < 0.0 {
            *v = 0.0;
        }
        sum += *v;
    }
    if sum.is_nan() || (sum - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { sum });
    }
    for v in p.iter_mut() {
        *v /= sum;
    }
    Ok(())
}
