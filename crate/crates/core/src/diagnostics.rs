//! Per-sample bundle of every quantity written out for a trajectory.

use crate::observables::{jz_moments, power_breakdown, PowerBreakdown};
use crate::qinfo::{
    build_jx, wysi_sigma_z_local, wysi_symmetric, Axis, LocalPaulis, SymmetricOperator, WMatrix,
};
use crate::{DickeDistribution, Result, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticRow {
    pub gamma_t: f64,
    pub jz_mean: f64,
    pub jz2_mean: f64,
    /// In units of `γω`.
    pub power: PowerBreakdown,
    pub wysi_sigma_z: f64,
    pub wysi_jx: f64,
    pub w: WMatrix,
    pub lqu: f64,
    pub lqu_minimizer: Axis,
}

/// Operators shared by every sample of one `N`.
#[derive(Debug, Clone)]
pub struct Diagnostics {
    params: SystemParams,
    jx: SymmetricOperator,
    paulis: LocalPaulis,
}

impl Diagnostics {
    pub fn new(params: &SystemParams) -> Result<Self> {
        Ok(Self {
            params: *params,
            jx: build_jx(params.two_j()),
            paulis: LocalPaulis::new(params.two_j())?,
        })
    }

    pub fn jx(&self) -> &SymmetricOperator {
        &self.jx
    }

    pub fn paulis(&self) -> &LocalPaulis {
        &self.paulis
    }

    pub fn w_matrix(&self, dist: &DickeDistribution) -> Result<WMatrix> {
        WMatrix::compute(dist, &self.paulis)
    }

    pub fn evaluate(&self, gamma_t: f64, dist: &DickeDistribution) -> Result<DiagnosticRow> {
        let (jz_mean, jz2_mean) = jz_moments(dist);
        let power = power_breakdown(&self.params, dist)?.in_units_of_gamma_omega(&self.params);
        let w = self.w_matrix(dist)?;
        Ok(DiagnosticRow {
            gamma_t,
            jz_mean,
            jz2_mean,
            power,
            wysi_sigma_z: wysi_sigma_z_local(dist),
            wysi_jx: wysi_symmetric(dist, &self.jx)?,
            w,
            lqu: w.lqu(),
            lqu_minimizer: w.minimizer(),
        })
    }

    pub fn evaluate_trajectory(
        &self,
        traj: &crate::Trajectory,
    ) -> Result<alloc::vec::Vec<DiagnosticRow>> {
        traj.iter().map(|(t, d)| self.evaluate(t, d)).collect()
    }
}
