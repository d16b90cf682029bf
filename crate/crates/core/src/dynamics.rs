//! Collective-decay cascade `|J, M⟩ → |J, M − 1⟩` in the Dicke basis.
//!
//! With jump operator `J₋` the populations obey
//! `dp_M/dt = 2γ[μ(M+1) p_{M+1} − μ(M) p_M]`, `μ(M) = (J+M)(J−M+1)`,
//! which is `⟨J,M|J₊J₋|J,M⟩`. The generator is bidiagonal and its
//! eigenvalues are degenerate (`μ(M) = μ(1−M)`), so it is integrated
//! numerically instead of diagonalized.

use alloc::vec::Vec;

use crate::distribution::{clip_and_normalize, DickeDistribution};
use crate::integrator::{Integrator, Tolerances};
use crate::{Error, Result, SystemParams};

/// `p_{J,−J}` above which the pulse counts as finished.
pub const PULSE_END_THRESHOLD: f64 = 0.999;

// accepted steps stay well inside the clip window of `DickeDistribution`
const STEP_LOWER_BOUND: f64 = -1e-13;

/// Transition rates out of each Dicke level, in inverse physical time.
#[derive(Debug, Clone, PartialEq)]
pub struct RateGenerator {
    two_j: u32,
    gamma: f64,
    rates: Vec<f64>,
}

impl RateGenerator {
    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    /// `rate(k) = 2γ μ(M_k)`; zero at the ground level.
    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn rate(&self, k: usize) -> f64 {
        self.rates[k]
    }

    /// Multiplies one level's rate by `factor`. Used to build negative
    /// controls for the oracle comparison.
    pub fn perturbed(mut self, k: usize, factor: f64) -> Self {
        self.rates[k] *= factor;
        self
    }

    /// `dp/dτ` with `τ = γt`.
    fn apply(&self, p: &[f64], dp: &mut [f64]) {
        let inv_gamma = 1.0 / self.gamma;
        let mut inflow = 0.0;
        for k in 0..p.len() {
            let out = self.rates[k] * p[k];
            dp[k] = (inflow - out) * inv_gamma;
            inflow = out;
        }
    }
}

pub fn build_generator(params: &SystemParams) -> RateGenerator {
    let two_j = params.two_j();
    let rates = (0..=two_j as usize)
        .map(|k| {
            // J + M = 2J − k, J − M + 1 = k + 1
            let mu = ((two_j as usize - k) * (k + 1)) as f64;
            2.0 * params.gamma() * mu
        })
        .collect();
    RateGenerator {
        two_j,
        gamma: params.gamma(),
        rates,
    }
}

pub fn initial_all_excited(params: &SystemParams) -> DickeDistribution {
    DickeDistribution::fully_excited(params.two_j())
}

/// Closed-form single-emitter populations at physical time `t`:
/// `[e^{−2γt}, 1 − e^{−2γt}]`.
pub fn analytic_two_level(params: &SystemParams, t: f64) -> Result<DickeDistribution> {
    if params.n_emitters() != 1 {
        return Err(Error::NotSingleEmitter {
            n: params.n_emitters(),
        });
    }
    let excited = libm::exp(-2.0 * params.gamma() * t);
    DickeDistribution::new(1, alloc::vec![excited, 1.0 - excited])
}

/// Sampled solution of the cascade.
#[derive(Debug, Clone)]
pub struct Trajectory {
    params: SystemParams,
    generator: RateGenerator,
    tolerances: Tolerances,
    times: Vec<f64>,
    states: Vec<DickeDistribution>,
}

impl Trajectory {
    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn generator(&self) -> &RateGenerator {
        &self.generator
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances
    }

    /// Sample times in units of `γt`.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DickeDistribution] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DickeDistribution)> {
        self.times.iter().copied().zip(&self.states)
    }

    /// Re-integrates from sample `from` to the probe time `gamma_t`.
    pub fn state_at(&self, from: usize, gamma_t: f64) -> Result<DickeDistribution> {
        let dt = gamma_t - self.times[from];
        propagate(&self.generator, &self.states[from], dt, self.tolerances)
    }
}

/// Evolves `initial` on a uniform grid of `n_samples` points over
/// `[0, t_end]` (`t_end` in units of `γt`).
pub fn evolve(
    params: &SystemParams,
    initial: &DickeDistribution,
    t_end: f64,
    n_samples: usize,
    tolerances: Tolerances,
) -> Result<Trajectory> {
    evolve_with(
        params,
        build_generator(params),
        initial,
        t_end,
        n_samples,
        tolerances,
    )
}

/// [`evolve`] with an explicit generator.
pub fn evolve_with(
    params: &SystemParams,
    generator: RateGenerator,
    initial: &DickeDistribution,
    t_end: f64,
    n_samples: usize,
    tolerances: Tolerances,
) -> Result<Trajectory> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            reason: "must be finite and positive",
        });
    }
    if n_samples < 2 {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            reason: "need at least 2 samples",
        });
    }
    tolerances.validate()?;
    initial.check_dim(params.two_j())?;
    generator_matches(&generator, params)?;

    let mut times = Vec::with_capacity(n_samples);
    let mut states = Vec::with_capacity(n_samples);
    times.push(0.0);
    states.push(initial.clone());

    let mut y = initial.populations().to_vec();
    let mut t = 0.0;
    let gen = &generator;
    let mut integ = Integrator::new(
        |_, p: &[f64], dp: &mut [f64]| gen.apply(p, dp),
        y.len(),
        tolerances,
    )?
    .with_lower_bound(STEP_LOWER_BOUND);
    let last = (n_samples - 1) as f64;
    for i in 1..n_samples {
        let target = if i == n_samples - 1 {
            t_end
        } else {
            t_end * i as f64 / last
        };
        integ.advance(&mut t, &mut y, target)?;
        let mut p = y.clone();
        clip_and_normalize(&mut p)?;
        times.push(target);
        states.push(DickeDistribution::new(params.two_j(), p)?);
    }
    drop(integ);
    Ok(Trajectory {
        params: *params,
        generator,
        tolerances,
        times,
        states,
    })
}

/// Single state after `dt` (units of `γt`). `dt = 0` returns `initial`.
pub fn propagate(
    generator: &RateGenerator,
    initial: &DickeDistribution,
    dt: f64,
    tolerances: Tolerances,
) -> Result<DickeDistribution> {
    if !(dt.is_finite() && dt >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: "must be finite and non-negative",
        });
    }
    initial.check_dim(generator.two_j)?;
    if dt == 0.0 {
        return Ok(initial.clone());
    }
    let mut y = initial.populations().to_vec();
    let mut t = 0.0;
    let mut integ = Integrator::new(
        |_, p: &[f64], dp: &mut [f64]| generator.apply(p, dp),
        y.len(),
        tolerances,
    )?
    .with_lower_bound(STEP_LOWER_BOUND);
    integ.advance(&mut t, &mut y, dt)?;
    clip_and_normalize(&mut y)?;
    DickeDistribution::new(generator.two_j, y)
}

/// First `γt` at which `p_{J,−J}` exceeds [`PULSE_END_THRESHOLD`] when
/// starting fully excited.
///
/// The crossing is bracketed by free-running adaptive steps and then refined
/// by bisection on re-integrated states.
pub fn pulse_end_time(params: &SystemParams, tolerances: Tolerances) -> Result<f64> {
    tolerances.validate()?;
    let generator = build_generator(params);
    let gen = &generator;
    let mut y = initial_all_excited(params).populations().to_vec();
    let ground = y.len() - 1;
    let mut integ = Integrator::new(
        |_, p: &[f64], dp: &mut [f64]| gen.apply(p, dp),
        y.len(),
        tolerances,
    )?
    .with_lower_bound(STEP_LOWER_BOUND);
    let mut t = 0.0;
    let mut y_prev = y.clone();
    let mut t_prev = 0.0;
    // no pulse lasts anywhere near this long in γt units
    let horizon = 1e4;
    while y[ground] <= PULSE_END_THRESHOLD {
        if t >= horizon {
            return Err(Error::PulseNotContained);
        }
        y_prev.copy_from_slice(&y);
        t_prev = t;
        integ.step(&mut t, &mut y, horizon)?;
    }
    drop(integ);

    let start = DickeDistribution::new(params.two_j(), y_prev)?;
    let (mut lo, mut hi) = (0.0, t - t_prev);
    while hi - lo > 1e-12 * t.max(1.0) {
        let mid = 0.5 * (lo + hi);
        let p = propagate(&generator, &start, mid, tolerances)?;
        if p.ground_population() > PULSE_END_THRESHOLD {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(t_prev + hi)
}

fn generator_matches(generator: &RateGenerator, params: &SystemParams) -> Result<()> {
    if generator.two_j != params.two_j() {
        return Err(Error::DimensionMismatch {
            expected: params.levels(),
            actual: generator.rates.len(),
        });
    }
    Ok(())
}
