//! Argument parsing and subcommand execution for the `dicke` binary.

use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use dicke_core::{SystemParams, Tolerances};

use crate::config::{Command, ConfigError, Figure, RunConfig};
use crate::experiment::{fit_scaling, run_from_excited, sweep, Run};
use crate::oracle::{compare, RatePerturbation};
use crate::output::{self, out_path, ExtremaJson, SuddenChangeJson};
use crate::properties::run_wysi_suite;

/// Dicke superradiance cascade: trajectories, figure datasets, scaling
/// sweeps and brute-force verification.
#[derive(Debug, Parser)]
#[command(name = "dicke", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Evolve one trajectory and write trajectory.csv.
    Simulate {
        /// Also write populations.csv (long form).
        #[arg(long)]
        populations: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Write the dataset behind figure 1, 2 or 3.
    Fig {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Scaling records over --n-list, with log-log fits.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compare against the full-space oracle and run the seeded WYSI checks.
    Verify {
        /// Oracle runs cover N = 2..=max-n.
        #[arg(long, default_value_t = 4)]
        max_n: u32,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Random distributions per N in the property checks.
        #[arg(long, default_value_t = 1000)]
        draws: usize,
        /// Scale one Dicke level's decay rate (LEVEL:FACTOR) in the
        /// symmetric pipeline; a negative control that must fail.
        #[arg(long, hide = true, value_parser = parse_perturbation)]
        perturb_rate: Option<RatePerturbation>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Number of emitters.
    #[arg(long, default_value_t = 50)]
    pub n: u32,
    /// Comma-separated emitter counts for sweeps.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<u32>>,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Window length in γt; defaults to the end of the pulse.
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

fn parse_perturbation(s: &str) -> Result<RatePerturbation, String> {
    let (level, factor) = s.split_once(':').ok_or("expected LEVEL:FACTOR")?;
    Ok(RatePerturbation {
        level: level.parse().map_err(|e| format!("level: {e}"))?,
        factor: factor.parse().map_err(|e| format!("factor: {e}"))?,
    })
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, ConfigError> {
        let (command, common) = match self.command {
            CliCommand::Simulate {
                populations,
                common,
            } => (Command::Simulate { populations }, common),
            CliCommand::Fig { which, common } => (Command::Fig(Figure::try_from(which)?), common),
            CliCommand::Sweep { common } => (Command::Sweep, common),
            CliCommand::Verify {
                max_n,
                tol,
                draws,
                perturb_rate,
                common,
            } => (
                Command::Verify {
                    max_n,
                    tol,
                    draws,
                    perturbation: perturb_rate,
                },
                common,
            ),
        };
        let config = RunConfig {
            command,
            n_emitters: common.n,
            n_list: common.n_list,
            gamma: common.gamma,
            omega: common.omega,
            t_end: common.t_end,
            samples: common.samples,
            tolerances: Tolerances {
                rel: common.rel_tol,
                abs: common.abs_tol,
            },
            out: common.out,
            seed: common.seed,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Whether a completed run met its checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Failure,
}

pub fn execute(config: &RunConfig) -> anyhow::Result<Outcome> {
    match &config.command {
        Command::Simulate { populations } => simulate(config, *populations),
        Command::Fig(Figure::Populations) => fig1(config),
        Command::Fig(Figure::PowerVsSkew) => fig2(config),
        Command::Fig(Figure::Scaling) | Command::Sweep => scaling(config),
        Command::Verify {
            max_n,
            tol,
            draws,
            perturbation,
        } => verify(config, *max_n, *tol, *draws, *perturbation),
    }
}

fn params(config: &RunConfig, n: u32) -> anyhow::Result<SystemParams> {
    Ok(SystemParams::new(n, config.gamma, config.omega)?)
}

fn single_run(config: &RunConfig) -> anyhow::Result<(SystemParams, Run)> {
    let p = params(config, config.n_emitters)?;
    let run = run_from_excited(&p, config.t_end, config.samples, config.tolerances)
        .with_context(|| format!("evolving N = {}", config.n_emitters))?;
    Ok((p, run))
}

fn simulate(config: &RunConfig, populations: bool) -> anyhow::Result<Outcome> {
    let (p, run) = single_run(config)?;
    let path = out_path(&config.out, output::TRAJECTORY_FILE);
    output::write_trajectory(&path, &run.rows)
        .with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    if populations {
        let path = out_path(&config.out, output::POPULATIONS_FILE);
        output::write_populations(&path, &run.trajectory)
            .with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    if p.gamma() * p.omega() != 1.0 {
        let path = out_path(&config.out, output::POWER_RAW_FILE);
        output::write_power_raw(&path, &p, &run.rows)
            .with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(Outcome::Success)
}

fn fig1(config: &RunConfig) -> anyhow::Result<Outcome> {
    let (_, run) = single_run(config)?;
    let pops = out_path(&config.out, output::POPULATIONS_FILE);
    output::write_populations(&pops, &run.trajectory)
        .with_context(|| format!("writing {}", pops.display()))?;
    let fig = out_path(&config.out, output::FIG1_FILE);
    output::write_fig1(&fig, &run.rows).with_context(|| format!("writing {}", fig.display()))?;
    println!("wrote {}\nwrote {}", pops.display(), fig.display());
    match run.sudden_change() {
        Ok(report) => {
            let path = out_path(&config.out, output::FIG1_EVENTS_FILE);
            output::write_json(&path, &SuddenChangeJson::from(&report))?;
            println!("wrote {}", path.display());
            println!(
                "double sudden change: t_I = {:.6}, t_F = {:.6}, width = {:.6}",
                report.t_initial, report.t_final, report.width
            );
            Ok(Outcome::Success)
        }
        Err(e) => {
            eprintln!(
                "sudden-change detection failed for N = {}: {e}",
                config.n_emitters
            );
            Ok(Outcome::Failure)
        }
    }
}

fn fig2(config: &RunConfig) -> anyhow::Result<Outcome> {
    let (_, run) = single_run(config)?;
    let fig = out_path(&config.out, output::FIG2_FILE);
    output::write_fig2(&fig, config.n_emitters, &run.rows)
        .with_context(|| format!("writing {}", fig.display()))?;
    println!("wrote {}", fig.display());
    match run.extrema() {
        Ok(r) => {
            let path = out_path(&config.out, output::FIG2_EXTREMA_FILE);
            output::write_json(
                &path,
                &ExtremaJson {
                    t_max: r.t_max_power,
                    t_min: r.t_min_wysi_jx,
                    gap: r.gap,
                },
            )?;
            println!("wrote {}", path.display());
            println!(
                "t_max = {:.6}, t_min = {:.6}, gap = {:.3e}",
                r.t_max_power, r.t_min_wysi_jx, r.gap
            );
            Ok(Outcome::Success)
        }
        Err(e) => {
            eprintln!(
                "extremum detection failed for N = {}: {e}",
                config.n_emitters
            );
            Ok(Outcome::Failure)
        }
    }
}

fn scaling(config: &RunConfig) -> anyhow::Result<Outcome> {
    let n_list = config.n_list.as_deref().unwrap_or_default();
    let records = match sweep(
        n_list,
        config.gamma,
        config.omega,
        config.samples,
        config.tolerances,
    ) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("sweep aborted: {e}");
            return Ok(Outcome::Failure);
        }
    };
    let path = out_path(&config.out, output::SCALING_FILE);
    output::write_scaling(&path, &records)
        .with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    let fit = fit_scaling(&records)?;
    let path = out_path(&config.out, output::SCALING_FIT_FILE);
    output::write_scaling_fit(&path, &fit)?;
    println!("wrote {}", path.display());
    println!(
        "slope(width_dsc) = {:.4}, slope(gap) = {:.4}",
        fit.slope_width_dsc, fit.slope_gap
    );
    Ok(Outcome::Success)
}

fn verify(
    config: &RunConfig,
    max_n: u32,
    tol: f64,
    draws: usize,
    perturbation: Option<RatePerturbation>,
) -> anyhow::Result<Outcome> {
    let mut ok = true;
    for n in 2..=max_n {
        let p = params(config, n)?;
        let t_end = match config.t_end {
            Some(t) => t,
            None => dicke_core::pulse_end_time(&p, config.tolerances)?,
        };
        let report = compare(
            &p,
            t_end,
            config.samples,
            tol,
            config.tolerances,
            perturbation,
        )
        .with_context(|| format!("oracle comparison for N = {n}"))?;
        println!("{report}");
        if !report.passed() {
            let names: Vec<&str> = report.failing().iter().map(|q| q.name()).collect();
            println!("  FAIL: {}", names.join(", "));
            ok = false;
        }
    }
    for n in [2, 5, 10] {
        let r = run_wysi_suite(config.seed, n, draws);
        println!(
            "WYSI checks N = {n} ({draws} draws, seed {}): bound {:.1e}, convexity {:.1e}, Jz {:.1e}, uniform {:.1e}, pure {:.1e}  {}",
            config.seed,
            r.bound_violation,
            r.convexity_violation,
            r.jz_max,
            r.uniform_max,
            r.pure_deviation,
            if r.passed() { "ok" } else { "FAIL" }
        );
        ok &= r.passed();
    }
    println!(
        "{}",
        if ok {
            "verification passed"
        } else {
            "verification FAILED"
        }
    );
    Ok(if ok {
        Outcome::Success
    } else {
        Outcome::Failure
    })
}
