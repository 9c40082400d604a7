//! Nonparametric regression of edges on embedded node positions and network
//! positions, plus the per-edge and per-network fallbacks and subsampling
//! bootstrap bands.

mod bootstrap;
pub(crate) mod engine;
mod regime;

use nalgebra::DMatrix;

use crate::baselines::{nbs, NbsOptions};
use crate::collection::{estimate_density, GraphCollection};
use crate::error::{Error, Result};
use crate::stats;

pub use bootstrap::{bootstrap_ci, BootstrapBand, BootstrapOptions};
pub use regime::{select_regime, Regime};

use engine::{Design, NodeQuery, Smoothing};

/// Responses are clamped to `[EPS, 1 - EPS]` before a logit transform.
pub const LOGIT_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    NadarayaWatson,
    LocalLinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Uniform,
    Epanechnikov,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    Identity,
    Logit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    /// `sd(design) * N^(-1/(d+4))`.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmootherConfig {
    pub method: Method,
    pub kernel: KernelKind,
    pub bandwidth_x: Bandwidth,
    pub bandwidth_z: Bandwidth,
    pub link: Link,
    /// 5-fold cross-validation over layers of a `{0.5, 1, 2}` multiplier
    /// applied to both bandwidths.
    pub cross_validate: bool,
}

impl Default for SmootherConfig {
    fn default() -> Self {
        SmootherConfig {
            method: Method::NadarayaWatson,
            kernel: KernelKind::Epanechnikov,
            bandwidth_x: Bandwidth::Auto,
            bandwidth_z: Bandwidth::Auto,
            link: Link::Identity,
            cross_validate: false,
        }
    }
}

impl SmootherConfig {
    pub fn with_bandwidths(mut self, hx: f64, hz: f64) -> Self {
        self.bandwidth_x = Bandwidth::Fixed(hx);
        self.bandwidth_z = Bandwidth::Fixed(hz);
        self
    }

    pub fn with_kernel(mut self, kernel: KernelKind) -> Self {
        self.kernel = kernel;
        self
    }
}

macro_rules! parse_enum {
    ($ty:ty, $what:literal, { $($name:literal => $val:expr),+ $(,)? }) => {
        impl std::str::FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($val),)+
                    other => Err(Error::InvalidInput(format!(concat!("unknown ", $what, " '{}'"), other))),
                }
            }
        }
    };
}

parse_enum!(Method, "method", { "nadaraya_watson" => Method::NadarayaWatson, "nw" => Method::NadarayaWatson, "local_linear" => Method::LocalLinear, "ll" => Method::LocalLinear });
parse_enum!(KernelKind, "kernel", { "uniform" => KernelKind::Uniform, "epanechnikov" => KernelKind::Epanechnikov, "gaussian" => KernelKind::Gaussian });
parse_enum!(Link, "link", { "identity" => Link::Identity, "logit" => Link::Logit });

impl std::str::FromStr for Bandwidth {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(Bandwidth::Auto);
        }
        match s.parse::<f64>() {
            Ok(h) if h > 0.0 && h.is_finite() => Ok(Bandwidth::Fixed(h)),
            _ => Err(Error::InvalidInput(format!("bandwidth must be 'auto' or a positive number, got '{s}'"))),
        }
    }
}

impl Link {
    fn forward(self, y: f64) -> f64 {
        match self {
            Link::Identity => y,
            Link::Logit => {
                let p = y.clamp(LOGIT_EPS, 1.0 - LOGIT_EPS);
                (p / (1.0 - p)).ln()
            }
        }
    }

    fn inverse(self, eta: f64) -> f64 {
        match self {
            Link::Identity => eta,
            Link::Logit => 1.0 / (1.0 + (-eta).exp()),
        }
    }
}

/// Which regression produced a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitKind {
    /// Regression on `(x_i, x_j, z_l)`.
    MultiLayer,
    /// Regression of the layer-averaged adjacency on `(x_i, x_j)`.
    Replicated,
    /// One regression on `z` per node pair.
    PerEdge,
    /// Per-layer neighborhood smoothing followed by per-pair regression on `z`.
    PerNetwork,
}

/// Estimated probabilities and intensities for every `(i, j, l)`.
#[derive(Debug, Clone)]
pub struct FitResult {
    /// Per-layer `n x n` probability estimates in `[0, 1]`.
    pub p_hat: Vec<DMatrix<f64>>,
    /// `p_hat / rho_hat`.
    pub f_hat: Vec<DMatrix<f64>>,
    pub rho_hat: f64,
    pub positions: Vec<f64>,
    /// Network positions or covariates per layer (empty for replicated fits).
    pub netpos: Vec<f64>,
    /// Configuration with bandwidths resolved to fixed values.
    pub config: SmootherConfig,
    pub kind: FitKind,
    /// Number of evaluation points whose kernel neighborhood had to be
    /// widened by bandwidth doubling.
    pub widened_points: usize,
    pub(crate) design: Design,
    pub(crate) layers_out: usize,
}

impl FitResult {
    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn m(&self) -> usize {
        self.layers_out
    }

    pub fn bandwidths(&self) -> (f64, f64) {
        (fixed(self.config.bandwidth_x), fixed(self.config.bandwidth_z))
    }

    fn smoothing(&self) -> Smoothing {
        let (hx, hz) = self.bandwidths();
        Smoothing {
            kernel: self.config.kernel,
            method: self.config.method,
            hx,
            hz,
        }
    }

    /// Probability matrix over all node pairs at network position `z`.
    pub fn probabilities_at(&self, z: f64) -> Result<DMatrix<f64>> {
        let mut s = self.smoothing();
        let n = self.n();
        if !self.design.smooth_nodes {
            // all pairs share the network axis, so only it can be empty
            if let Some(netpos) = &self.design.netpos {
                while netpos.iter().all(|&zl| engine::kernel_value(s.kernel, (zl - z) / s.hz) == 0.0) {
                    s.hz *= 2.0;
                }
            }
            let raw = engine::evaluate(&self.design, NodeQuery::DesignNodes, &[z], s);
            let mut out = finish(&raw[0].value, self.config.link);
            for i in 0..n {
                out[(i, i)] = 0.0;
            }
            return Ok(symmetrize(&out));
        }
        let raw = engine::evaluate(&self.design, NodeQuery::Points(&self.positions, &self.positions), &[z], s);
        let mut out = finish(&raw[0].value, self.config.link);
        for i in 0..n {
            for j in 0..n {
                if raw[0].weight[(i, j)] <= 0.0 {
                    out[(i, j)] = self.point_estimate(self.positions[i], self.positions[j], z).0;
                }
            }
        }
        Ok(symmetrize(&out))
    }

    /// Single-point estimate with bandwidth doubling on empty neighborhoods;
    /// returns the estimate and the number of doublings. The network axis is
    /// widened first, the node axes only when the pair itself has no
    /// support.
    fn point_estimate(&self, x: f64, y: f64, z: f64) -> (f64, u32) {
        let mut s = self.smoothing();
        let pts = [x, y];
        let mut doublings = 0u32;
        if let Some(netpos) = &self.design.netpos {
            while doublings < 64 && netpos.iter().all(|&zl| engine::kernel_value(s.kernel, (zl - z) / s.hz) == 0.0) {
                s.hz *= 2.0;
                doublings += 1;
            }
        }
        while doublings < 128 {
            let raw = engine::evaluate(&self.design, NodeQuery::Points(&pts, &pts), &[z], s);
            let (w01, w10) = (raw[0].weight[(0, 1)], raw[0].weight[(1, 0)]);
            if w01 > 0.0 && w10 > 0.0 {
                let v = (raw[0].value[(0, 1)] + raw[0].value[(1, 0)]) / 2.0;
                return (self.config.link.inverse(v).clamp(0.0, 1.0), doublings);
            }
            s.hx *= 2.0;
            doublings += 1;
        }
        (f64::NAN, doublings)
    }

    /// Kernel estimate at an arbitrary `(x, y, z)`, symmetric in `(x, y)` and
    /// clamped to `[0, 1]`. `z` is ignored by replicated fits.
    pub fn predict(&self, x: f64, y: f64, z: f64) -> Result<f64> {
        if !self.design.smooth_nodes {
            return Err(Error::InvalidInput(
                "per-edge fits have no node smoothing; use probabilities_at for design nodes".into(),
            ));
        }
        Ok(self.point_estimate(x, y, z).0)
    }
}

fn fixed(b: Bandwidth) -> f64 {
    match b {
        Bandwidth::Fixed(h) => h,
        Bandwidth::Auto => f64::NAN,
    }
}

fn finish(values: &DMatrix<f64>, link: Link) -> DMatrix<f64> {
    values.map(|v| link.inverse(v).clamp(0.0, 1.0))
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    DMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)]) / 2.0)
}

/// Rule-of-thumb bandwidth `c * sd * N^(-1/(d+4))` with `c = 1`; falls
/// back to 1 when the design has no spread.
pub fn rule_of_thumb(values: &[f64], n_responses: usize, dim: usize) -> f64 {
    let sd = stats::std_dev(values);
    if !(sd > 0.0 && sd.is_finite()) || n_responses == 0 {
        return 1.0;
    }
    sd * (n_responses as f64).powf(-1.0 / (dim as f64 + 4.0))
}

fn check_lengths(g: &GraphCollection, positions: &[f64], netpos: Option<&[f64]>) -> Result<()> {
    if positions.len() != g.n() {
        return Err(Error::ShapeMismatch(format!("{} positions for {} nodes", positions.len(), g.n())));
    }
    if let Some(z) = netpos {
        if z.len() != g.m() {
            return Err(Error::ShapeMismatch(format!("{} network positions for {} layers", z.len(), g.m())));
        }
    }
    if g.n() < 2 {
        return Err(Error::InvalidInput("fitting needs n >= 2".into()));
    }
    if positions.iter().chain(netpos.unwrap_or(&[])).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("positions must be finite".into()));
    }
    Ok(())
}

fn transformed(layer: &DMatrix<f64>, link: Link) -> DMatrix<f64> {
    let n = layer.nrows();
    DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { link.forward(layer[(i, j)]) })
}

fn resolve(b: Bandwidth, auto: f64) -> Result<f64> {
    match b {
        Bandwidth::Auto => Ok(auto),
        Bandwidth::Fixed(h) if h > 0.0 && h.is_finite() => Ok(h),
        Bandwidth::Fixed(h) => Err(Error::InvalidInput(format!("bandwidth must be positive, got {h}"))),
    }
}

/// Per-kind regression setup shared by fitting and cross-validation.
struct Problem {
    kind: FitKind,
    /// Raw responses per layer on the probability scale.
    raw: Vec<DMatrix<f64>>,
    positions: Vec<f64>,
    netpos: Option<Vec<f64>>,
}

impl Problem {
    fn design(&self, layers: &[usize], link: Link) -> Design {
        match self.kind {
            FitKind::Replicated => {
                let n = self.positions.len();
                let mut mean = DMatrix::<f64>::zeros(n, n);
                for &l in layers {
                    mean += &self.raw[l];
                }
                mean /= layers.len() as f64;
                Design {
                    layers: vec![transformed(&mean, link)],
                    positions: self.positions.clone(),
                    netpos: None,
                    smooth_nodes: true,
                }
            }
            _ => Design {
                layers: layers.iter().map(|&l| transformed(&self.raw[l], link)).collect(),
                positions: self.positions.clone(),
                netpos: self.netpos.as_ref().map(|z| layers.iter().map(|&l| z[l]).collect()),
                smooth_nodes: self.kind == FitKind::MultiLayer,
            },
        }
    }

    fn auto_bandwidths(&self) -> (f64, f64) {
        let n = self.positions.len();
        let m = self.raw.len();
        match self.kind {
            FitKind::MultiLayer => {
                let big_n = n * (n - 1) * m;
                (
                    rule_of_thumb(&self.positions, big_n, 3),
                    rule_of_thumb(self.netpos.as_deref().unwrap_or(&[]), big_n, 3),
                )
            }
            FitKind::Replicated => (rule_of_thumb(&self.positions, n * (n - 1), 2), 1.0),
            FitKind::PerEdge | FitKind::PerNetwork => (1.0, rule_of_thumb(self.netpos.as_deref().unwrap_or(&[]), m, 1)),
        }
    }

    /// Mean squared prediction error of held-out layers, 5 folds.
    fn cv_error(&self, s: Smoothing, link: Link) -> f64 {
        let m = self.raw.len();
        let folds = 5;
        let mut total = 0.0;
        let mut count = 0usize;
        for fold in 0..folds {
            let train: Vec<usize> = (0..m).filter(|l| l % folds != fold).collect();
            let test: Vec<usize> = (0..m).filter(|l| l % folds == fold).collect();
            if train.is_empty() || test.is_empty() {
                continue;
            }
            let design = self.design(&train, link);
            let nodes = if design.smooth_nodes {
                NodeQuery::Points(&self.positions, &self.positions)
            } else {
                NodeQuery::DesignNodes
            };
            let targets: Vec<(DMatrix<f64>, f64)> = match self.kind {
                FitKind::Replicated => {
                    let n = self.positions.len();
                    let mut mean = DMatrix::<f64>::zeros(n, n);
                    for &l in &test {
                        mean += &self.raw[l];
                    }
                    vec![(mean / test.len() as f64, 0.0)]
                }
                _ => {
                    let z = self.netpos.as_ref().expect("network axis");
                    test.iter().map(|&l| (self.raw[l].clone(), z[l])).collect()
                }
            };
            let qz: Vec<f64> = targets.iter().map(|t| t.1).collect();
            let raw = engine::evaluate(&design, nodes, &qz, s);
            for (est, (target, _)) in raw.iter().zip(&targets) {
                let n = target.nrows();
                for i in 0..n {
                    for j in 0..n {
                        if i != j && est.weight[(i, j)] > 0.0 {
                            let p = link.inverse(est.value[(i, j)]).clamp(0.0, 1.0);
                            total += (p - target[(i, j)]).powi(2);
                            count += 1;
                        }
                    }
                }
            }
        }
        if count == 0 {
            f64::INFINITY
        } else {
            total / count as f64
        }
    }

    fn fit(self, config: &SmootherConfig, rho_hat: f64) -> Result<FitResult> {
        let (auto_x, auto_z) = self.auto_bandwidths();
        let mut hx = resolve(config.bandwidth_x, auto_x)?;
        let mut hz = resolve(config.bandwidth_z, auto_z)?;
        let m = self.raw.len();
        if config.cross_validate && m >= 5 {
            let mut best = (f64::INFINITY, 1.0);
            for mult in [0.5, 1.0, 2.0] {
                let s = Smoothing {
                    kernel: config.kernel,
                    method: config.method,
                    hx: hx * mult,
                    hz: hz * mult,
                };
                let err = self.cv_error(s, config.link);
                if err < best.0 {
                    best = (err, mult);
                }
            }
            hx *= best.1;
            hz *= best.1;
        }
        let all: Vec<usize> = (0..m).collect();
        let design = self.design(&all, config.link);
        let s = Smoothing {
            kernel: config.kernel,
            method: config.method,
            hx,
            hz,
        };
        let n = self.positions.len();
        let (raw, layers_out) = match self.kind {
            FitKind::Replicated => {
                let r = engine::evaluate(&design, NodeQuery::Points(&self.positions, &self.positions), &[0.0], s);
                (r, m)
            }
            FitKind::MultiLayer => {
                let z = design.netpos.clone().expect("network axis");
                (engine::evaluate(&design, NodeQuery::Points(&self.positions, &self.positions), &z, s), m)
            }
            FitKind::PerEdge | FitKind::PerNetwork => {
                let z = design.netpos.clone().expect("network axis");
                (engine::evaluate(&design, NodeQuery::DesignNodes, &z, s), m)
            }
        };

        let mut resolved = *config;
        resolved.bandwidth_x = Bandwidth::Fixed(hx);
        resolved.bandwidth_z = Bandwidth::Fixed(hz);
        let mut fit = FitResult {
            p_hat: Vec::new(),
            f_hat: Vec::new(),
            rho_hat,
            positions: self.positions.clone(),
            netpos: self.netpos.clone().unwrap_or_default(),
            config: resolved,
            kind: self.kind,
            widened_points: 0,
            design,
            layers_out,
        };

        let mut p_hat = Vec::with_capacity(layers_out);
        let mut widened = 0usize;
        for l in 0..layers_out {
            let est = if raw.len() == 1 { &raw[0] } else { &raw[l] };
            let mut p = finish(&est.value, config.link);
            let zl = fit.netpos.get(l).copied().unwrap_or(0.0);
            for i in 0..n {
                for j in 0..n {
                    if est.weight[(i, j)] <= 0.0 {
                        if !fit.design.smooth_nodes {
                            p[(i, j)] = 0.0;
                        } else {
                            let (v, doublings) = fit.point_estimate(fit.positions[i], fit.positions[j], zl);
                            if doublings > 0 {
                                widened += 1;
                            }
                            p[(i, j)] = v;
                        }
                    }
                }
            }
            p_hat.push(symmetrize(&p));
        }
        fit.widened_points = widened;
        fit.f_hat = p_hat
            .iter()
            .map(|p| if rho_hat > 0.0 { p / rho_hat } else { DMatrix::zeros(n, n) })
            .collect();
        fit.p_hat = p_hat;
        Ok(fit)
    }
}

fn raw_layers(g: &GraphCollection) -> Vec<DMatrix<f64>> {
    (0..g.m()).map(|l| g.layer(l)).collect()
}

/// Regression of `A[i][j][l]` on `(positions_i, positions_j, netpos_l)`.
pub fn fit_multigraphon(g: &GraphCollection, positions: &[f64], netpos: &[f64], config: &SmootherConfig) -> Result<FitResult> {
    check_lengths(g, positions, Some(netpos))?;
    let rho = estimate_density(g)?;
    Problem {
        kind: FitKind::MultiLayer,
        raw: raw_layers(g),
        positions: positions.to_vec(),
        netpos: Some(netpos.to_vec()),
    }
    .fit(config, rho)
}

/// Regression of the layer-averaged adjacency on `(positions_i, positions_j)`.
/// The result is constant across layers.
pub fn fit_replicated(g: &GraphCollection, positions: &[f64], config: &SmootherConfig) -> Result<FitResult> {
    check_lengths(g, positions, None)?;
    let rho = estimate_density(g)?;
    Problem {
        kind: FitKind::Replicated,
        raw: raw_layers(g),
        positions: positions.to_vec(),
        netpos: None,
    }
    .fit(config, rho)
}

/// One regression on the network positions per node pair.
pub fn fit_per_edge(g: &GraphCollection, netpos: &[f64], config: &SmootherConfig) -> Result<FitResult> {
    let positions = crate::embedding::index_positions(g.n());
    check_lengths(g, &positions, Some(netpos))?;
    if g.m() < 2 {
        return Err(Error::InvalidInput("per-edge regression needs m >= 2".into()));
    }
    let rho = estimate_density(g)?;
    Problem {
        kind: FitKind::PerEdge,
        raw: raw_layers(g),
        positions,
        netpos: Some(netpos.to_vec()),
    }
    .fit(config, rho)
}

/// Neighborhood smoothing of every layer, then per-pair regression of the
/// smoothed probabilities on the network positions.
pub fn fit_per_network(g: &GraphCollection, netpos: &[f64], config: &SmootherConfig) -> Result<FitResult> {
    let positions = crate::embedding::index_positions(g.n());
    check_lengths(g, &positions, Some(netpos))?;
    if g.n() < 10 {
        return Err(Error::InvalidInput(format!("per-network fits need n >= 10, got {}", g.n())));
    }
    if !g.is_binary() {
        return Err(Error::InvalidInput("per-network fits need binary layers".into()));
    }
    let rho = estimate_density(g)?;
    let smoothed = (0..g.m())
        .map(|l| nbs(&g.layer(l), &NbsOptions::default()))
        .collect::<Result<Vec<_>>>()?;
    Problem {
        kind: FitKind::PerNetwork,
        raw: smoothed,
        positions,
        netpos: Some(netpos.to_vec()),
    }
    .fit(config, rho)
}

/// Positions `i / (n + 1)`, `i = 1..=n`: the expected order statistics of
/// `n` uniform draws.
pub fn oracle_positions(n: usize) -> Vec<f64> {
    crate::embedding::index_positions(n)
}

/// Oracle positions assigned to nodes by the rank of their true position.
pub fn oracle_positions_by_rank(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(a.cmp(&b)));
    let grid = oracle_positions(n);
    let mut out = vec![0.0; n];
    for (rank, &node) in order.iter().enumerate() {
        out[node] = grid[rank];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_position_examples() {
        assert_eq!(oracle_positions(1), vec![0.5]);
        assert_eq!(oracle_positions(3), vec![0.25, 0.5, 0.75]);
        let nine = oracle_positions(9);
        assert_eq!(nine.len(), 9);
        for (k, w) in nine.windows(2).enumerate() {
            assert!((w[1] - w[0] - 0.1).abs() < 1e-12, "step {k}");
        }
        assert_eq!(oracle_positions_by_rank(&[0.9, 0.1, 0.5]), vec![0.75, 0.25, 0.5]);
    }

    #[test]
    fn rule_of_thumb_shrinks_with_n() {
        let x: Vec<f64> = (0..100).map(|i| i as f64 / 99.0).collect();
        let a = rule_of_thumb(&x, 1000, 3);
        let b = rule_of_thumb(&x, 100_000, 3);
        assert!(b < a);
        assert_eq!(rule_of_thumb(&[0.5, 0.5], 10, 1), 1.0);
    }

    #[test]
    fn singleton_neighborhood_returns_observation() {
        let mut g = GraphCollection::zeros(2, 1);
        g.set(0, 1, 0, 1);
        let cfg = SmootherConfig::default().with_kernel(KernelKind::Uniform).with_bandwidths(0.01, 0.01);
        let fit = fit_multigraphon(&g, &[0.2, 0.8], &[0.5], &cfg).unwrap();
        assert_eq!(fit.p_hat[0][(0, 1)], 1.0);
        assert_eq!(fit.p_hat[0][(1, 0)], 1.0);
    }

    #[test]
    fn tiny_bandwidth_widens_off_design() {
        let g = GraphCollection::from_fn(4, 2, |i, j, _| u32::from((i + j) % 2 == 1));
        let pos = [0.1, 0.4, 0.6, 0.9];
        let cfg = SmootherConfig::default().with_kernel(KernelKind::Uniform).with_bandwidths(0.01, 0.01);
        let fit = fit_multigraphon(&g, &pos, &[0.2, 0.7], &cfg).unwrap();
        // diagonal points have no (i != j) pair inside a tiny window
        assert!(fit.widened_points > 0);
        let v = fit.predict(0.25, 0.75, 0.45).unwrap();
        assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn parse_config_values() {
        assert_eq!("local_linear".parse::<Method>().unwrap(), Method::LocalLinear);
        assert_eq!("gaussian".parse::<KernelKind>().unwrap(), KernelKind::Gaussian);
        assert_eq!("logit".parse::<Link>().unwrap(), Link::Logit);
        assert_eq!("auto".parse::<Bandwidth>().unwrap(), Bandwidth::Auto);
        assert_eq!("0.2".parse::<Bandwidth>().unwrap(), Bandwidth::Fixed(0.2));
        assert!("-1".parse::<Bandwidth>().is_err());
        assert!("box".parse::<KernelKind>().is_err());
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let g = GraphCollection::from_fn(4, 2, |_, _, _| 1);
        let err = fit_multigraphon(&g, &[0.1, 0.2], &[0.1, 0.2], &SmootherConfig::default());
        assert!(matches!(err, Err(Error::ShapeMismatch(_))));
    }
}
