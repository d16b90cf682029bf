//! Sudden-change and extremum detection along a trajectory.

use alloc::vec::Vec;

use crate::diagnostics::Diagnostics;
use crate::qinfo::{wysi_symmetric, Axis};
use crate::{power_breakdown, Error, Result, Trajectory};

/// `|W_xx − W_zz|` at or below this counts as a tie (reported as `z`).
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Bracket width, in `γt`, at which crossing bisection stops.
pub const ROOT_TOLERANCE: f64 = 1e-6;

/// Where the LQU minimizer switches from `σz` to `σx` and back.
#[derive(Debug, Clone, PartialEq)]
pub struct SuddenChangeReport {
    pub t_initial: f64,
    pub t_final: f64,
    pub width: f64,
    /// Minimizer label of each run of consecutive samples.
    pub minimizer_sequence: Vec<Axis>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremaReport {
    pub t_max_power: f64,
    pub t_min_wysi_jx: f64,
    pub gap: f64,
}

/// Locates the two sign changes of `D(t) = W_xx(t) − W_zz(t)`.
///
/// Crossings are bracketed on the sample grid and each root is refined by
/// bisection on states re-integrated from the left bracket sample.
pub fn detect_double_sudden_change(traj: &Trajectory) -> Result<SuddenChangeReport> {
    let diag = Diagnostics::new(traj.params())?;
    let mut sides = Vec::with_capacity(traj.len());
    let mut minimizer_sequence: Vec<Axis> = Vec::new();
    for (_, state) in traj.iter() {
        let w = diag.w_matrix(state)?;
        sides.push(w.xx() - w.zz() > TIE_TOLERANCE);
        let label = w.minimizer();
        if minimizer_sequence.last() != Some(&label) {
            minimizer_sequence.push(label);
        }
    }
    if sides.last() == Some(&true) {
        return Err(Error::PulseNotContained);
    }
    let crossings: Vec<usize> = (0..sides.len().saturating_sub(1))
        .filter(|&k| sides[k] != sides[k + 1])
        .collect();
    if crossings.len() != 2 {
        return Err(Error::CrossingCount {
            count: crossings.len(),
        });
    }

    let refine = |k: usize| -> Result<f64> {
        let times = traj.times();
        let (mut lo, mut hi) = (times[k], times[k + 1]);
        let left_side = sides[k];
        while hi - lo > ROOT_TOLERANCE {
            let mid = 0.5 * (lo + hi);
            let w = diag.w_matrix(&traj.state_at(k, mid)?)?;
            if (w.xx() - w.zz() > TIE_TOLERANCE) == left_side {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    };
    let t_initial = refine(crossings[0])?;
    let t_final = refine(crossings[1])?;
    Ok(SuddenChangeReport {
        t_initial,
        t_final,
        width: t_final - t_initial,
        minimizer_sequence,
    })
}

/// Time of peak radiated power and of minimal `I(ρ, Jx)`, each refined by
/// a parabola through the extremal sample and its neighbours.
pub fn locate_extrema(traj: &Trajectory) -> Result<ExtremaReport> {
    let params = traj.params();
    let jx = crate::build_jx(params.two_j());
    let mut power = Vec::with_capacity(traj.len());
    let mut wysi = Vec::with_capacity(traj.len());
    for (_, state) in traj.iter() {
        power.push(power_breakdown(params, state)?.p_total);
        wysi.push(wysi_symmetric(state, &jx)?);
    }
    let k_max = arg_best(&power, |a, b| a > b);
    let k_min = arg_best(&wysi, |a, b| a < b);
    let t_max_power = refine_vertex(traj.times(), &power, k_max, "power")?;
    let t_min_wysi_jx = refine_vertex(traj.times(), &wysi, k_min, "wysi_jx")?;
    Ok(ExtremaReport {
        t_max_power,
        t_min_wysi_jx,
        gap: (t_max_power - t_min_wysi_jx).abs(),
    })
}

fn arg_best(values: &[f64], better: impl Fn(f64, f64) -> bool) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate() {
        if better(v, values[best]) {
            best = k;
        }
    }
    best
}

fn refine_vertex(times: &[f64], values: &[f64], k: usize, quantity: &'static str) -> Result<f64> {
    if k == 0 || k + 1 >= values.len() {
        return Err(Error::ExtremumOnBoundary { quantity });
    }
    let (f0, f1, f2) = (values[k - 1], values[k], values[k + 1]);
    let curvature = f0 - 2.0 * f1 + f2;
    if curvature == 0.0 {
        return Ok(times[k]);
    }
    // uniform grid
    let h = times[k + 1] - times[k];
    let offset = 0.5 * h * (f0 - f2) / curvature;
    Ok(times[k] + offset.clamp(-h, h))
}
