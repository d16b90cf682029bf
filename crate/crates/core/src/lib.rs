//! Dicke superradiance in the permutation-symmetric subspace.
//!
//! `N` identical two-level emitters that start fully excited stay diagonal in
//! the Dicke basis `|J, M⟩` (`J = N/2`) while they decay collectively. The
//! state is therefore a population vector over `N + 1` levels, and every
//! diagnostic here (collective moments, the radiated-power split, the
//! Wigner–Yanase skew information of local and global observables, and the
//! local quantum uncertainty of one emitter) reduces to sums over that vector.
//!
//! The crate is `no_std` and only needs `alloc`. IO, the brute-force
//! full-Hilbert-space oracle and the command-line front end live in
//! `dicke-lab`.
//!
//! Conventions: `σ± = (σx ± iσy)/2`, `J± = Σ σ±`, `Jz = ½ Σ σz`, `ħ = 1`.
//! Populations are indexed by `k = 0..=N` with `M = J − k`, so `k = 0` is the
//! fully excited state. Times handed to [`dynamics::evolve`] are the
//! dimensionless `γt`.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod diagnostics;
pub mod distribution;
pub mod dynamics;
mod error;
pub mod integrator;
pub mod observables;
pub mod params;
pub mod qinfo;

pub use diagnostics::{DiagnosticRow, Diagnostics};
pub use distribution::DickeDistribution;
pub use dynamics::{
    analytic_two_level, build_generator, evolve, evolve_with, initial_all_excited, pulse_end_time,
    RateGenerator, Trajectory,
};
pub use error::Error;
pub use integrator::{IntegrationError, Tolerances};
pub use observables::{jz_moments, power_breakdown, PowerBreakdown};
pub use params::SystemParams;
pub use qinfo::{
    build_jx, build_jy, build_jz, detect_double_sudden_change, local_sigma_matrix_elements,
    locate_extrema, lqu, w_matrix, wysi_sigma_z_local, wysi_symmetric, Axis, ExtremaReport,
    SuddenChangeReport, SymmetricOperator, WMatrix,
};

pub type Result<T, E = Error> = core::result::Result<T, E>;
