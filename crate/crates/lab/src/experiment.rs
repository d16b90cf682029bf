//! Trajectory runs, per-N scaling records and the log-log fits over a sweep.

use dicke_core::{
    detect_double_sudden_change, evolve, initial_all_excited, locate_extrema, pulse_end_time,
    DiagnosticRow, Diagnostics, ExtremaReport, SuddenChangeReport, SystemParams, Tolerances,
    Trajectory,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("N = {n}: {source}")]
    AtN {
        n: u32,
        #[source]
        source: dicke_core::Error,
    },
    #[error("log-log fit needs at least two positive points, got {0}")]
    Fit(usize),
}

/// A trajectory from the fully excited state plus its per-sample diagnostics.
pub struct Run {
    pub trajectory: Trajectory,
    pub rows: Vec<DiagnosticRow>,
}

/// Uses [`pulse_end_time`] when `t_end` is `None`.
pub fn run_from_excited(
    params: &SystemParams,
    t_end: Option<f64>,
    samples: usize,
    tolerances: Tolerances,
) -> Result<Run, dicke_core::Error> {
    let t_end = match t_end {
        Some(t) => t,
        None => pulse_end_time(params, tolerances)?,
    };
    let trajectory = evolve(
        params,
        &initial_all_excited(params),
        t_end,
        samples,
        tolerances,
    )?;
    let rows = Diagnostics::new(params)?.evaluate_trajectory(&trajectory)?;
    Ok(Run { trajectory, rows })
}

impl Run {
    pub fn sudden_change(&self) -> Result<SuddenChangeReport, dicke_core::Error> {
        detect_double_sudden_change(&self.trajectory)
    }

    pub fn extrema(&self) -> Result<ExtremaReport, dicke_core::Error> {
        locate_extrema(&self.trajectory)
    }

    /// `max_t P / (γω N²)`.
    pub fn peak_power_over_n2(&self) -> f64 {
        let n = f64::from(self.trajectory.params().n_emitters());
        self.rows
            .iter()
            .map(|r| r.power.p_total)
            .fold(0.0, f64::max)
            / (n * n)
    }
}

/// One row of `scaling.csv`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRecord {
    pub n: u32,
    pub t_max: f64,
    pub t_min: f64,
    pub gap: f64,
    pub t_i: f64,
    pub t_f: f64,
    pub width_dsc: f64,
    pub p_max_over_n2: f64,
}

pub fn scaling_record(
    n: u32,
    gamma: f64,
    omega: f64,
    samples: usize,
    tolerances: Tolerances,
) -> Result<ScalingRecord, ExperimentError> {
    let at = |source| ExperimentError::AtN { n, source };
    let params = SystemParams::new(n, gamma, omega).map_err(at)?;
    let run = run_from_excited(&params, None, samples, tolerances).map_err(at)?;
    let ext = run.extrema().map_err(at)?;
    let dsc = run.sudden_change().map_err(at)?;
    Ok(ScalingRecord {
        n,
        t_max: ext.t_max_power,
        t_min: ext.t_min_wysi_jx,
        gap: ext.gap,
        t_i: dsc.t_initial,
        t_f: dsc.t_final,
        width_dsc: dsc.width,
        p_max_over_n2: run.peak_power_over_n2(),
    })
}

/// Scaling records for every `N`, computed in parallel and returned in
/// input order. The first failing `N` aborts the sweep.
pub fn sweep(
    n_list: &[u32],
    gamma: f64,
    omega: f64,
    samples: usize,
    tolerances: Tolerances,
) -> Result<Vec<ScalingRecord>, ExperimentError> {
    n_list
        .par_iter()
        .map(|&n| scaling_record(n, gamma, omega, samples, tolerances))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Sum of squared residuals in log space.
    pub residual: f64,
}

pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<LogLogFit, ExperimentError> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 || pts.len() != xs.len() {
        return Err(ExperimentError::Fit(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(ExperimentError::Fit(1));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok(LogLogFit {
        slope,
        intercept,
        residual,
    })
}

/// Contents of the JSON sidecar written next to `scaling.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope_width_dsc: f64,
    pub slope_gap: f64,
    pub residual_width: f64,
    pub n_list: Vec<u32>,
}

pub fn fit_scaling(records: &[ScalingRecord]) -> Result<ScalingFit, ExperimentError> {
    let ns: Vec<f64> = records.iter().map(|r| f64::from(r.n)).collect();
    let width = fit_loglog(
        &ns,
        &records.iter().map(|r| r.width_dsc).collect::<Vec<_>>(),
    )?;
    let gap = fit_loglog(&ns, &records.iter().map(|r| r.gap).collect::<Vec<_>>())?;
    Ok(ScalingFit {
        slope_width_dsc: width.slope,
        slope_gap: gap.slope,
        residual_width: width.residual,
        n_list: records.iter().map(|r| r.n).collect(),
    })
}
