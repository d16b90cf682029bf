use crate::{Error, Result};

/// Emitter count, single-emitter decay rate `γ` and transition frequency `ω`.
///
/// `J = N/2` is kept as the integer `2J` so half-integer spins stay exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    n_emitters: u32,
    gamma: f64,
    omega: f64,
}

impl SystemParams {
    pub fn new(n_emitters: u32, gamma: f64, omega: f64) -> Result<Self> {
        if n_emitters == 0 {
            return Err(Error::InvalidParameter {
                name: "n_emitters",
                reason: "must be at least 1",
            });
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: "must be finite and positive",
            });
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega",
                reason: "must be finite and positive",
            });
        }
        Ok(Self {
            n_emitters,
            gamma,
            omega,
        })
    }

    /// `γ = ω = 1`.
    pub fn unit(n_emitters: u32) -> Result<Self> {
        Self::new(n_emitters, 1.0, 1.0)
    }

    pub fn n_emitters(&self) -> u32 {
        self.n_emitters
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn two_j(&self) -> u32 {
        self.n_emitters
    }

    pub fn j(&self) -> f64 {
        f64::from(self.n_emitters) / 2.0
    }

    /// Number of Dicke levels, `2J + 1`.
    pub fn levels(&self) -> usize {
        self.n_emitters as usize + 1
    }
}
