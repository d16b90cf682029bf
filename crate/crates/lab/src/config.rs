//! Validated run configuration shared by every subcommand.

use std::path::PathBuf;

use dicke_core::Tolerances;
use thiserror::Error;

use crate::oracle::{RatePerturbation, MAX_EMITTERS};

#[derive(Debug, Error, PartialEq)]
#[error("invalid configuration: {0}")]
pub struct ConfigError(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Populations = 1,
    PowerVsSkew = 2,
    Scaling = 3,
}

impl TryFrom<u8> for Figure {
    type Error = ConfigError;

    fn try_from(v: u8) -> Result<Self, ConfigError> {
        match v {
            1 => Ok(Figure::Populations),
            2 => Ok(Figure::PowerVsSkew),
            3 => Ok(Figure::Scaling),
            _ => Err(ConfigError(format!("figure must be 1, 2 or 3, got {v}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Simulate {
        populations: bool,
    },
    Fig(Figure),
    Sweep,
    Verify {
        max_n: u32,
        tol: f64,
        draws: usize,
        perturbation: Option<RatePerturbation>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n_emitters: u32,
    pub n_list: Option<Vec<u32>>,
    pub gamma: f64,
    pub omega: f64,
    pub t_end: Option<f64>,
    pub samples: usize,
    pub tolerances: Tolerances,
    pub out: PathBuf,
    pub seed: u64,
}

/// Figure datasets never use coarser grids than this.
pub const MIN_FIGURE_SAMPLES: usize = 2000;

fn positive(name: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ConfigError(format!(
            "--{name} must be finite and positive, got {v}"
        )))
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        positive("gamma", self.gamma)?;
        positive("omega", self.omega)?;
        positive("rel-tol", self.tolerances.rel)?;
        positive("abs-tol", self.tolerances.abs)?;
        if let Some(t) = self.t_end {
            positive("t-end", t)?;
        }
        if self.samples < 2 {
            return Err(ConfigError(format!(
                "--samples must be at least 2, got {}",
                self.samples
            )));
        }
        if self.n_emitters == 0 {
            return Err(ConfigError("--n must be at least 1".into()));
        }
        match &self.command {
            Command::Simulate { .. } => {}
            Command::Fig(fig) => {
                if self.samples < MIN_FIGURE_SAMPLES {
                    return Err(ConfigError(format!(
                        "figure datasets need --samples >= {MIN_FIGURE_SAMPLES}, got {}",
                        self.samples
                    )));
                }
                if *fig == Figure::Scaling {
                    self.check_n_list()?;
                }
            }
            Command::Sweep => self.check_n_list()?,
            Command::Verify {
                max_n, tol, draws, ..
            } => {
                if !(2..=MAX_EMITTERS).contains(max_n) {
                    return Err(ConfigError(format!(
                        "--max-n must be in 2..={MAX_EMITTERS}, got {max_n}"
                    )));
                }
                positive("tol", *tol)?;
                if *draws == 0 {
                    return Err(ConfigError("--draws must be at least 1".into()));
                }
            }
        }
        Ok(())
    }

    fn check_n_list(&self) -> Result<(), ConfigError> {
        let list = self
            .n_list
            .as_ref()
            .ok_or_else(|| ConfigError("this subcommand requires --n-list".into()))?;
        if list.len() < 4 {
            return Err(ConfigError(format!(
                "--n-list needs at least 4 values, got {}",
                list.len()
            )));
        }
        if let Some(n) = list.iter().find(|&&n| n < 8) {
            return Err(ConfigError(format!(
                "--n-list values must be >= 8, got {n}"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(command: Command) -> RunConfig {
        RunConfig {
            command,
            n_emitters: 50,
            n_list: None,
            gamma: 1.0,
            omega: 1.0,
            t_end: None,
            samples: 2000,
            tolerances: Tolerances::default(),
            out: PathBuf::from("."),
            seed: 1,
        }
    }

    #[test]
    fn defaults_are_valid() {
        assert!(base(Command::Simulate { populations: false })
            .validate()
            .is_ok());
        assert!(base(Command::Fig(Figure::Populations)).validate().is_ok());
    }

    #[test]
    fn sweep_needs_list() {
        let mut c = base(Command::Sweep);
        assert!(c.validate().is_err());
        c.n_list = Some(vec![8, 16, 32]);
        assert!(c.validate().is_err());
        c.n_list = Some(vec![4, 16, 32, 64]);
        assert!(c.validate().is_err());
        c.n_list = Some(vec![8, 16, 32, 64]);
        assert!(c.validate().is_ok());
        assert!(base(Command::Fig(Figure::Scaling)).validate().is_err());
    }

    #[test]
    fn rejects_bad_numbers() {
        let mut c = base(Command::Simulate { populations: true });
        c.gamma = 0.0;
        assert!(c.validate().is_err());
        let mut c = base(Command::Simulate { populations: true });
        c.t_end = Some(-1.0);
        assert!(c.validate().is_err());
        let mut c = base(Command::Fig(Figure::PowerVsSkew));
        c.samples = 100;
        assert!(c.validate().is_err());
        let c = base(Command::Verify {
            max_n: 6,
            tol: 1e-6,
            draws: 10,
            perturbation: None,
        });
        assert!(c.validate().is_err());
        assert!(Figure::try_from(4).is_err());
    }
}
