//! Explicit Dormand–Prince 5(4) with embedded error control.
//!
//! The integrator works on plain `f64` slices so the symmetric-subspace
//! populations and the flattened full density matrix of the oracle share one
//! implementation.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum IntegrationError {
    #[error(
        "step size underflow at t = {t} (h = {h:e}); the problem is too stiff for the tolerances"
    )]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("non-finite value encountered at t = {t}")]
    NonFinite { t: f64 },
    #[error("tolerance not achievable within {steps} steps (stopped at t = {t})")]
    TooManySteps { t: f64, steps: usize },
    #[error("tolerances must be finite and positive")]
    InvalidTolerance,
}

/// Relative and absolute local error tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerances {
    pub fn new(rel: f64, abs: f64) -> Result<Self, IntegrationError> {
        let t = Self { rel, abs };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), IntegrationError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(self.rel) && ok(self.abs) {
            Ok(())
        } else {
            Err(IntegrationError::InvalidTolerance)
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel: 1e-10,
            abs: 1e-12,
        }
    }
}

const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [&[f64]; 6] = [
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
    ],
    &[
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
    ],
    &[
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

/// Adaptive integrator for `dy/dt = f(t, y)`.
///
/// The step-size proposal survives across calls, so integrating sample by
/// sample does not reset the controller. Steps shortened to land on a target
/// time do not shrink the proposal.
pub struct Integrator<F> {
    rhs: F,
    tol: Tolerances,
    h: Option<f64>,
    max_steps: usize,
    lower_bound: Option<f64>,
    steps: usize,
    stages: [Vec<f64>; 7],
    scratch: Vec<f64>,
    y_new: Vec<f64>,
}

impl<F> Integrator<F>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    pub fn new(rhs: F, dim: usize, tol: Tolerances) -> Result<Self, IntegrationError> {
        tol.validate()?;
        Ok(Self {
            rhs,
            tol,
            h: None,
            max_steps: DEFAULT_MAX_STEPS,
            lower_bound: None,
            steps: 0,
            stages: core::array::from_fn(|_| vec![0.0; dim]),
            scratch: vec![0.0; dim],
            y_new: vec![0.0; dim],
        })
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    /// Rejects (and shrinks) any step whose result has a component below
    /// `bound`.
    pub fn with_lower_bound(mut self, bound: f64) -> Self {
        self.lower_bound = Some(bound);
        self
    }

    /// Accepted steps so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Integrates from `*t` to exactly `t_target`.
    pub fn advance(
        &mut self,
        t: &mut f64,
        y: &mut [f64],
        t_target: f64,
    ) -> Result<(), IntegrationError> {
        while *t < t_target {
            self.step(t, y, t_target)?;
        }
        Ok(())
    }

    /// Takes one accepted step, never past `t_limit`.
    pub fn step(
        &mut self,
        t: &mut f64,
        y: &mut [f64],
        t_limit: f64,
    ) -> Result<(), IntegrationError> {
        if *t >= t_limit {
            return Ok(());
        }
        if self.steps >= self.max_steps {
            return Err(IntegrationError::TooManySteps {
                t: *t,
                steps: self.steps,
            });
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(IntegrationError::NonFinite { t: *t });
        }
        let mut non_finite_retries = 0;
        let mut h = match self.h {
            Some(h) => h,
            None => self.initial_step(*t, y, t_limit),
        };
        loop {
            let remaining = t_limit - *t;
            let clipped = h >= remaining;
            let h_try = if clipped { remaining } else { h };
            if h_try <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
                return Err(IntegrationError::StepSizeUnderflow { t: *t, h: h_try });
            }
            let err = self.attempt(*t, y, h_try);
            if !err.is_finite() {
                non_finite_retries += 1;
                if non_finite_retries > 50 {
                    return Err(IntegrationError::NonFinite { t: *t });
                }
                h = h_try * MIN_FACTOR;
                continue;
            }
            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * libm::pow(err, -0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            let in_domain = match self.lower_bound {
                Some(lb) => self.y_new.iter().all(|&v| v >= lb),
                None => true,
            };
            if err <= 1.0 && !in_domain {
                h = h_try * 0.5;
                continue;
            }
            if err <= 1.0 {
                *t = if clipped { t_limit } else { *t + h_try };
                y.copy_from_slice(&self.y_new);
                self.steps += 1;
                // a clipped step says nothing new about the natural step size
                let next = h_try * factor;
                self.h = Some(if clipped { h.max(next) } else { next });
                return Ok(());
            }
            h = h_try * factor;
        }
    }

    /// One trial step; leaves the fifth-order solution in `y_new` and
    /// returns the scaled RMS error estimate.
    fn attempt(&mut self, t: f64, y: &[f64], h: f64) -> f64 {
        (self.rhs)(t, y, &mut self.stages[0]);
        for s in 0..6 {
            let row = A[s];
            let target = if s == 5 {
                &mut self.y_new
            } else {
                &mut self.scratch
            };
            for i in 0..y.len() {
                let mut acc = 0.0;
                for (j, a) in row.iter().enumerate() {
                    acc += a * self.stages[j][i];
                }
                target[i] = y[i] + h * acc;
            }
            let input = if s == 5 { &self.y_new } else { &self.scratch };
            (self.rhs)(t + C[s] * h, input, &mut self.stages[s + 1]);
        }
        let mut sum = 0.0;
        for i in 0..y.len() {
            let mut e = 0.0;
            for (j, w) in E.iter().enumerate() {
                e += w * self.stages[j][i];
            }
            let scale = self.tol.abs + self.tol.rel * y[i].abs().max(self.y_new[i].abs());
            let r = h * e / scale;
            sum += r * r;
        }
        libm::sqrt(sum / y.len().max(1) as f64)
    }

    fn initial_step(&mut self, t: f64, y: &[f64], t_limit: f64) -> f64 {
        (self.rhs)(t, y, &mut self.stages[0]);
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..y.len() {
            let sc = self.tol.abs + self.tol.rel * y[i].abs();
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (self.stages[0][i] / sc) * (self.stages[0][i] / sc);
        }
        let n = y.len().max(1) as f64;
        let (d0, d1) = (libm::sqrt(d0 / n), libm::sqrt(d1 / n));
        let h = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        h.min(t_limit - t).max(1e-12 * (t_limit - t))
    }
}
