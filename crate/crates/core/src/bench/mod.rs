//! Simulation study harness: sample scenarios, run estimator arms end to
//! end and score them against the generating kernel.

mod paper;
mod report;

use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::baselines::{nbs, usvt, NbsOptions, UsvtOptions};
use crate::collection::{estimate_density, GraphCollection};
use crate::distance::{distance_matrix, DistanceOptions};
use crate::embedding::{embed_1d, EmbedOptions};
use crate::error::{Error, Result};
use crate::model::{sample, truth_tensor, LatentDraw, MultiGraphonSpec, SampleParams, SamplingMode};
use crate::rng;
use crate::smoother::{
    fit_multigraphon, fit_per_edge, fit_per_network, fit_replicated, oracle_positions_by_rank, SmootherConfig,
};
use crate::stats;

pub use paper::paper_context;
pub use report::{emit_heatmaps, emit_report, parse_key_value, parse_table, write_pgm, ReportFormat};

/// Layers with true network position below this are "low z".
pub const SPLIT_Z: f64 = 0.8;

/// Reported MSE values are multiplied by this factor.
pub const MSE_SCALE: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arm {
    Proposed,
    /// Oracle node positions and true network positions.
    Oracle1,
    /// Oracle node positions and noisy covariates.
    Oracle2,
    /// Oracle node positions with the replicated (layer-averaged) fit.
    OracleRep,
    Usvt,
    Nbs,
    PerEdge,
    PerNetwork,
}

impl Arm {
    pub const ALL: [Arm; 8] = [
        Arm::Proposed,
        Arm::Oracle1,
        Arm::Oracle2,
        Arm::OracleRep,
        Arm::Usvt,
        Arm::Nbs,
        Arm::PerEdge,
        Arm::PerNetwork,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Arm::Proposed => "proposed",
            Arm::Oracle1 => "oracle1",
            Arm::Oracle2 => "oracle2",
            Arm::OracleRep => "oracle_rep",
            Arm::Usvt => "usvt",
            Arm::Nbs => "nbs",
            Arm::PerEdge => "per_edge",
            Arm::PerNetwork => "per_network",
        }
    }
}

impl std::str::FromStr for Arm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Arm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown arm '{s}'")))
    }
}

/// One simulation configuration.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub id: String,
    pub spec: MultiGraphonSpec,
    pub n: usize,
    pub m: usize,
    /// `None` uses `1 / sup f`.
    pub rho: Option<f64>,
    pub mode: SamplingMode,
    pub sigma_cov: f64,
    pub arms: Vec<Arm>,
    pub replications: usize,
    pub seed: u64,
    pub smoother: SmootherConfig,
    pub embed: EmbedOptions,
    /// Keep the estimated intensity tensors of the first replication.
    pub keep_fits: bool,
}

impl Scenario {
    pub fn new(id: impl Into<String>, spec: MultiGraphonSpec, n: usize, m: usize, mode: SamplingMode) -> Self {
        Scenario {
            id: id.into(),
            spec,
            n,
            m,
            rho: None,
            mode,
            sigma_cov: 0.0,
            arms: vec![Arm::Proposed],
            replications: 5,
            seed: 0,
            smoother: SmootherConfig::default(),
            embed: EmbedOptions::default(),
            keep_fits: false,
        }
    }

    pub fn with_arms(mut self, arms: &[Arm]) -> Self {
        self.arms = arms.to_vec();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_replications(mut self, reps: usize) -> Self {
        self.replications = reps;
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma_cov = sigma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.arms.is_empty() {
            return Err(Error::InvalidInput("scenario has no arms".into()));
        }
        if self.replications == 0 {
            return Err(Error::InvalidInput("scenario needs at least one replication".into()));
        }
        if self.arms.contains(&Arm::Oracle2) && self.mode != SamplingMode::CrossSection {
            return Err(Error::ScenarioConflict(format!(
                "oracle2 needs cross_section covariates, scenario mode is {}",
                self.mode.name()
            )));
        }
        if self.mode == SamplingMode::Replicated {
            for arm in [Arm::PerEdge, Arm::PerNetwork] {
                if self.arms.contains(&arm) {
                    return Err(Error::ScenarioConflict(format!("{} needs network positions, scenario is replicated", arm.name())));
                }
            }
        }
        if self.n < 3 {
            return Err(Error::InvalidInput(format!("scenario needs n >= 3, got {}", self.n)));
        }
        Ok(())
    }

    pub fn rho(&self) -> f64 {
        self.rho.unwrap_or_else(|| self.spec.default_rho())
    }
}

/// Aggregated scores of one arm over all replications.
#[derive(Debug, Clone, PartialEq)]
pub struct MseRecord {
    pub scenario: String,
    pub arm: String,
    /// Scaled by [`MSE_SCALE`]; NaN when no layer falls in the split.
    pub mse_low_z: f64,
    pub mse_high_z: f64,
    pub mse_overall: f64,
    /// Standard deviation of the overall MSE across replications, scaled.
    pub std_dev: f64,
    /// Mean seconds per replication, when recorded.
    pub runtime: Option<f64>,
    /// `computed`, or `paper` for quoted reference values.
    pub source: String,
}

/// Output of [`run_scenario`].
#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub records: Vec<MseRecord>,
    /// Per-arm estimated intensity tensors of replication 0, if kept.
    pub fits: Vec<(Arm, Vec<DMatrix<f64>>)>,
    /// Truth tensor of replication 0, if kept.
    pub truth: Vec<DMatrix<f64>>,
}

/// Mean over `i != j` and all layers of `(f_hat - f)^2`, unscaled.
pub fn mse(f_hat: &[DMatrix<f64>], truth: &[DMatrix<f64>]) -> Result<f64> {
    let (sum, count) = squared_error(f_hat, truth, |_| true)?;
    Ok(sum / count as f64)
}

/// `(low, high, overall)` MSE with layers split at `z < threshold`; a side
/// without layers is NaN.
pub fn mse_split(f_hat: &[DMatrix<f64>], truth: &[DMatrix<f64>], z: &[f64], threshold: f64) -> Result<(f64, f64, f64)> {
    if z.len() != truth.len() {
        return Err(Error::ShapeMismatch(format!("{} network positions for {} layers", z.len(), truth.len())));
    }
    let ratio = |(s, c): (f64, usize)| if c == 0 { f64::NAN } else { s / c as f64 };
    let low = ratio(squared_error(f_hat, truth, |l| z[l] < threshold)?);
    let high = ratio(squared_error(f_hat, truth, |l| z[l] >= threshold)?);
    Ok((low, high, mse(f_hat, truth)?))
}

fn squared_error(f_hat: &[DMatrix<f64>], truth: &[DMatrix<f64>], keep: impl Fn(usize) -> bool) -> Result<(f64, usize)> {
    if f_hat.len() != truth.len() {
        return Err(Error::ShapeMismatch(format!("{} estimated layers vs {} true layers", f_hat.len(), truth.len())));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for (l, (a, b)) in f_hat.iter().zip(truth).enumerate() {
        if a.shape() != b.shape() || a.nrows() != a.ncols() {
            return Err(Error::ShapeMismatch(format!("layer {l} shapes {:?} vs {:?}", a.shape(), b.shape())));
        }
        if !keep(l) {
            continue;
        }
        let n = a.nrows();
        for j in 0..n {
            for i in 0..n {
                if i != j {
                    sum += (a[(i, j)] - b[(i, j)]).powi(2);
                    count += 1;
                }
            }
        }
    }
    Ok((sum, count))
}

struct ArmScore {
    low: f64,
    high: f64,
    overall: f64,
    seconds: f64,
}

/// Single-matrix estimate from the layer average, replicated over layers.
fn baseline_tensor(g: &GraphCollection, arm: Arm) -> Result<Vec<DMatrix<f64>>> {
    let m = g.m();
    let abar = g.aggregate();
    let p = match arm {
        Arm::Usvt => usvt(&abar, &UsvtOptions::averaged(m))?,
        Arm::Nbs => nbs(&abar, &NbsOptions::default())?,
        _ => unreachable!("not a single-matrix baseline"),
    };
    let rho = estimate_density(g)?;
    let f = if rho > 0.0 { p / rho } else { DMatrix::zeros(g.n(), g.n()) };
    Ok(vec![f; m])
}

/// Estimated intensity tensor `f_hat` of one arm on one sample.
pub fn run_arm(s: &Scenario, arm: Arm, g: &GraphCollection, latent: &LatentDraw) -> Result<Vec<DMatrix<f64>>> {
    let cfg = &s.smoother;
    let fit = match arm {
        Arm::Proposed => {
            let d = distance_matrix(g, DistanceOptions::default())?;
            let positions = embed_1d(&d, &s.embed)?.positions;
            match s.mode {
                SamplingMode::Replicated => fit_replicated(g, &positions, cfg)?,
                _ => fit_multigraphon(g, &positions, latent.observed_netpos(), cfg)?,
            }
        }
        Arm::Oracle1 => {
            let positions = oracle_positions_by_rank(&latent.x);
            match s.mode {
                SamplingMode::Replicated => fit_replicated(g, &positions, cfg)?,
                _ => fit_multigraphon(g, &positions, &latent.z, cfg)?,
            }
        }
        Arm::Oracle2 => fit_multigraphon(g, &oracle_positions_by_rank(&latent.x), &latent.z_check, cfg)?,
        Arm::OracleRep => fit_replicated(g, &oracle_positions_by_rank(&latent.x), cfg)?,
        Arm::PerEdge => fit_per_edge(g, latent.observed_netpos(), cfg)?,
        Arm::PerNetwork => fit_per_network(g, latent.observed_netpos(), cfg)?,
        Arm::Usvt | Arm::Nbs => return baseline_tensor(g, arm),
    };
    Ok(fit.f_hat)
}

struct Replication {
    scores: Vec<ArmScore>,
    fits: Vec<(Arm, Vec<DMatrix<f64>>)>,
    truth: Vec<DMatrix<f64>>,
}

fn run_replication(s: &Scenario, r: usize) -> Result<Replication> {
    let seed = rng::derive_seed(s.seed, "replication", r as u64);
    let params = SampleParams {
        n: s.n,
        m: s.m,
        rho: s.rho(),
        sigma_cov: s.sigma_cov,
        mode: s.mode,
        seed,
    };
    let (g, latent) = sample(&s.spec, &params)?;
    let truth = truth_tensor(&s.spec, &latent.x, &latent.z);
    let keep = s.keep_fits && r == 0;
    let mut scores = Vec::with_capacity(s.arms.len());
    let mut fits = Vec::new();
    for &arm in &s.arms {
        let start = Instant::now();
        let f_hat = run_arm(s, arm, &g, &latent)?;
        let seconds = start.elapsed().as_secs_f64();
        let (low, high, overall) = if s.mode == SamplingMode::Replicated {
            let v = mse(&f_hat, &truth)?;
            (v, v, v)
        } else {
            mse_split(&f_hat, &truth, &latent.z, SPLIT_Z)?
        };
        scores.push(ArmScore { low, high, overall, seconds });
        if keep {
            fits.push((arm, f_hat));
        }
    }
    Ok(Replication {
        scores,
        fits,
        truth: if keep { truth } else { Vec::new() },
    })
}

fn nan_mean(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        f64::NAN
    } else {
        stats::mean(&v)
    }
}

/// Runs every replication and arm; records are in arm order. Results do
/// not depend on the number of worker threads.
pub fn run_scenario(s: &Scenario) -> Result<ScenarioOutput> {
    s.validate()?;
    let reps = (0..s.replications)
        .into_par_iter()
        .map(|r| run_replication(s, r))
        .collect::<Result<Vec<_>>>()?;
    let records = s
        .arms
        .iter()
        .enumerate()
        .map(|(k, &arm)| {
            let overall: Vec<f64> = reps.iter().map(|r| r.scores[k].overall * MSE_SCALE).collect();
            MseRecord {
                scenario: s.id.clone(),
                arm: arm.name().to_string(),
                mse_low_z: nan_mean(reps.iter().map(|r| r.scores[k].low * MSE_SCALE)),
                mse_high_z: nan_mean(reps.iter().map(|r| r.scores[k].high * MSE_SCALE)),
                mse_overall: stats::mean(&overall),
                std_dev: if overall.len() > 1 { stats::std_dev(&overall) } else { 0.0 },
                runtime: Some(stats::mean(&reps.iter().map(|r| r.scores[k].seconds).collect::<Vec<_>>())),
                source: "computed".to_string(),
            }
        })
        .collect();
    let mut first = reps.into_iter().next().expect("at least one replication");
    Ok(ScenarioOutput {
        records,
        fits: std::mem::take(&mut first.fits),
        truth: first.truth,
    })
}
