//! Collective moments and the split of the radiated power into the
//! independent and correlated (dipole–dipole) parts.

use crate::{DickeDistribution, Result, SystemParams};

/// `(⟨Jz⟩, ⟨Jz²⟩)`.
pub fn jz_moments(dist: &DickeDistribution) -> (f64, f64) {
    dist.iter()
        .fold((0.0, 0.0), |(m1, m2), (m, p)| (m1 + p * m, m2 + p * m * m))
}

/// `⟨J₊J₋⟩ = Σ p_M [J(J+1) − M(M−1)]`.
pub fn ladder_expectation(dist: &DickeDistribution) -> f64 {
    let j = dist.j();
    dist.iter()
        .map(|(m, p)| p * (j * (j + 1.0) - m * (m - 1.0)))
        .sum()
}

/// Radiated power and its two contributions, in the caller's units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerBreakdown {
    pub p_total: f64,
    pub p_ind: f64,
    pub p_corr: f64,
}

impl PowerBreakdown {
    /// Divides every component by `γω`.
    pub fn in_units_of_gamma_omega(&self, params: &SystemParams) -> Self {
        let s = params.gamma() * params.omega();
        Self::from_parts(self.p_ind / s, self.p_corr / s)
    }

    fn from_parts(p_ind: f64, p_corr: f64) -> Self {
        Self {
            p_total: p_ind + p_corr,
            p_ind,
            p_corr,
        }
    }
}

/// `P_ind = 2γω Σ p_M (J + M)`, `P_corr = 2γω Σ p_M (J² − M²)` and `P = P_ind + P_corr`,
/// which equals `2γω⟨J₊J₋⟩` on the symmetric ladder.
pub fn power_breakdown(params: &SystemParams, dist: &DickeDistribution) -> Result<PowerBreakdown> {
    dist.check_dim(params.two_j())?;
    let scale = 2.0 * params.gamma() * params.omega();
    let j = params.j();
    let (ind, corr) = dist.iter().fold((0.0, 0.0), |(a, b), (m, p)| {
        (a + p * (j + m), b + p * (j * j - m * m))
    });
    Ok(PowerBreakdown::from_parts(scale * ind, scale * corr))
}
