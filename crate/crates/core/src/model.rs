//! Multi-graphon kernels, the latent-position sampler and quadrature-based
//! ground truth.
//!
//! A multi-graphon `f(x, y; z)` is symmetric in the node positions `x, y`
//! and indexed by a network position `z`. Edges of layer `l` between nodes
//! `i < j` are independent Bernoulli draws with probability
//! `rho * f(x_i, x_j; z_l)`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::collection::GraphCollection;
use crate::error::{Error, Result};
use crate::rng;

/// Default number of quadrature nodes per axis.
pub const DEFAULT_QUAD_POINTS: usize = 501;

/// Resolution per axis of the grid search used to bound `sup f`.
pub const SUP_GRID: usize = 101;

/// Regular lattice over `[0,1]^3` with trilinear interpolation.
///
/// Only entries with `ix <= iy` are stored, so the kernel is symmetric by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GridKernel {
    nxy: usize,
    nz: usize,
    // packed upper triangle per z-slice
    values: Vec<f64>,
}

impl GridKernel {
    /// Builds a lattice from a full `nxy x nxy x nz` array indexed
    /// `[iz][iy][ix]`. Entries below the diagonal are ignored.
    pub fn from_full(nxy: usize, nz: usize, full: &[f64]) -> Result<Self> {
        if nxy == 0 || nz == 0 {
            return Err(Error::InvalidSpec("grid lattice is empty".into()));
        }
        if full.len() != nxy * nxy * nz {
            return Err(Error::InvalidSpec(format!(
                "grid expects {} values, got {}",
                nxy * nxy * nz,
                full.len()
            )));
        }
        let tri = nxy * (nxy + 1) / 2;
        let mut values = vec![0.0; tri * nz];
        for iz in 0..nz {
            for iy in 0..nxy {
                for ix in 0..=iy {
                    let v = full[(iz * nxy + iy) * nxy + ix];
                    if !(v.is_finite() && v >= 0.0) {
                        return Err(Error::InvalidSpec(format!(
                            "grid value at ({ix}, {iy}, {iz}) is {v}; values must be finite and nonnegative"
                        )));
                    }
                    values[iz * tri + Self::tri_index(ix, iy)] = v;
                }
            }
        }
        Ok(GridKernel { nxy, nz, values })
    }

    /// Tabulates a symmetric function on the lattice.
    pub fn tabulate(nxy: usize, nz: usize, f: impl Fn(f64, f64, f64) -> f64) -> Result<Self> {
        let coord = |i: usize, k: usize| if k == 1 { 0.0 } else { i as f64 / (k - 1) as f64 };
        let mut full = vec![0.0; nxy * nxy * nz];
        for iz in 0..nz {
            for iy in 0..nxy {
                for ix in 0..nxy {
                    full[(iz * nxy + iy) * nxy + ix] = f(coord(ix, nxy), coord(iy, nxy), coord(iz, nz));
                }
            }
        }
        Self::from_full(nxy, nz, &full)
    }

    fn tri_index(lo: usize, hi: usize) -> usize {
        hi * (hi + 1) / 2 + lo
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nxy, self.nz)
    }

    /// Lattice value with symmetric lookup.
    pub fn value(&self, ix: usize, iy: usize, iz: usize) -> f64 {
        let (lo, hi) = if ix <= iy { (ix, iy) } else { (iy, ix) };
        self.values[iz * self.nxy * (self.nxy + 1) / 2 + Self::tri_index(lo, hi)]
    }

    fn locate(t: f64, k: usize) -> (usize, usize, f64) {
        if k == 1 {
            return (0, 0, 0.0);
        }
        let s = t.clamp(0.0, 1.0) * (k - 1) as f64;
        let i0 = (s.floor() as usize).min(k - 2);
        (i0, i0 + 1, s - i0 as f64)
    }

    fn evaluate(&self, x: f64, y: f64, z: f64) -> f64 {
        // Evaluate with ordered arguments so swapping x and y is bitwise exact.
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        let (x0, x1, tx) = Self::locate(x, self.nxy);
        let (y0, y1, ty) = Self::locate(y, self.nxy);
        let (z0, z1, tz) = Self::locate(z, self.nz);
        let mut acc = 0.0;
        for (zi, wz) in [(z0, 1.0 - tz), (z1, tz)] {
            for (yi, wy) in [(y0, 1.0 - ty), (y1, ty)] {
                for (xi, wx) in [(x0, 1.0 - tx), (x1, tx)] {
                    let w = wx * wy * wz;
                    if w != 0.0 {
                        acc += w * self.value(xi, yi, zi);
                    }
                }
            }
        }
        acc
    }
}

/// A multi-graphon: one of the three built-in test kernels or a lattice.
#[derive(Debug, Clone, PartialEq)]
pub enum MultiGraphonSpec {
    /// `(xy + b z^2) / (0.25 + b z^2)`: smooth product kernel.
    F1 { beta: f64 },
    /// `(exp(-|x-y|/2) + b z) / (0.8522 + b z)`: Robinsonian, peaked on the diagonal.
    F2 { beta: f64 },
    /// Two-block model with within-block rate `0.7 - 0.0938 b z` and
    /// across-block rate `0.3 + b x y z`.
    F3 { beta: f64 },
    Grid(GridKernel),
}

impl MultiGraphonSpec {
    pub fn f1(beta: f64) -> Self {
        MultiGraphonSpec::F1 { beta }
    }

    pub fn f2(beta: f64) -> Self {
        MultiGraphonSpec::F2 { beta }
    }

    pub fn f3(beta: f64) -> Self {
        MultiGraphonSpec::F3 { beta }
    }

    /// Constant kernel `f = c`, as a degenerate lattice.
    pub fn constant(c: f64) -> Result<Self> {
        Ok(MultiGraphonSpec::Grid(GridKernel::from_full(1, 1, &[c])?))
    }

    /// Heterogeneity coefficient; zero for lattices.
    pub fn beta(&self) -> f64 {
        match self {
            MultiGraphonSpec::F1 { beta } | MultiGraphonSpec::F2 { beta } | MultiGraphonSpec::F3 { beta } => *beta,
            MultiGraphonSpec::Grid(_) => 0.0,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            MultiGraphonSpec::F1 { .. } => "f1",
            MultiGraphonSpec::F2 { .. } => "f2",
            MultiGraphonSpec::F3 { .. } => "f3",
            MultiGraphonSpec::Grid(_) => "grid",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let beta = self.beta();
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::InvalidSpec(format!("beta must be finite and nonnegative, got {beta}")));
        }
        if let MultiGraphonSpec::F3 { beta } = self {
            // within-block rate 0.7 - 0.0938 b z must stay nonnegative on z in [0,1]
            if 0.7 - 0.0938 * beta < 0.0 {
                return Err(Error::InvalidSpec(format!("f3 within-block rate is negative for beta={beta}")));
            }
        }
        Ok(())
    }

    /// `f(x, y; z)`.
    pub fn evaluate(&self, x: f64, y: f64, z: f64) -> f64 {
        match self {
            MultiGraphonSpec::F1 { beta } => {
                let bz = beta * z * z;
                (x * y + bz) / (0.25 + bz)
            }
            MultiGraphonSpec::F2 { beta } => {
                let bz = beta * z;
                ((-(x - y).abs() / 2.0).exp() + bz) / (0.8522 + bz)
            }
            MultiGraphonSpec::F3 { beta } => {
                if f3_block(x) == f3_block(y) {
                    0.7 - 0.0938 * beta * z
                } else {
                    0.3 + beta * (x * y) * z
                }
            }
            MultiGraphonSpec::Grid(g) => g.evaluate(x, y, z),
        }
    }

    /// Grid-search estimate of `sup f` over `[0,1]^3` at `SUP_GRID` points per axis.
    pub fn sup(&self) -> f64 {
        let k = SUP_GRID;
        let step = 1.0 / (k - 1) as f64;
        (0..k)
            .map(|iz| {
                let z = iz as f64 * step;
                let mut best = f64::MIN;
                for iy in 0..k {
                    let y = iy as f64 * step;
                    for ix in 0..=iy {
                        best = best.max(self.evaluate(ix as f64 * step, y, z));
                    }
                }
                best
            })
            .fold(f64::MIN, f64::max)
    }

    /// Default sparsity `1 / sup f`, so edge probabilities span `(0, 1]`.
    pub fn default_rho(&self) -> f64 {
        (1.0 / self.sup()).min(1.0)
    }
}

/// Block index `ceil(2x)` with the boundary `x = 0` mapped to block 1.
fn f3_block(x: f64) -> u8 {
    ((2.0 * x).ceil() as u8).max(1)
}

/// Composite three-point Gauss–Legendre rule on `[0, 1]`.
///
/// The node count is rounded up to a multiple of three. Nodes are strictly
/// interior and the rule is exact for polynomials of degree five on every
/// panel.
#[derive(Debug, Clone)]
pub struct Quadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Quadrature {
    pub fn new(points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::InvalidInput(format!("quadrature needs at least 2 points, got {points}")));
        }
        let panels = points.div_ceil(3);
        let h = 1.0 / panels as f64;
        let off = (0.6f64).sqrt() * h / 2.0;
        let mut nodes = Vec::with_capacity(3 * panels);
        let mut weights = Vec::with_capacity(3 * panels);
        for p in 0..panels {
            let c = (p as f64 + 0.5) * h;
            nodes.extend([c - off, c, c + off]);
            weights.extend([5.0 * h / 18.0, 8.0 * h / 18.0, 5.0 * h / 18.0]);
        }
        Ok(Quadrature { nodes, weights })
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).sum()
    }
}

/// `f̄(u, v) = ∫ f(u, v; z) dz`, integrated on demand with a fixed rule.
#[derive(Debug, Clone)]
pub struct FlattenedKernel {
    spec: MultiGraphonSpec,
    rule: Quadrature,
}

impl FlattenedKernel {
    pub fn evaluate(&self, u: f64, v: f64) -> f64 {
        self.rule.integrate(|z| self.spec.evaluate(u, v, z))
    }

    /// Row `v -> f̄(u, v)` tabulated on the given nodes.
    fn row(&self, u: f64, nodes: &[f64]) -> Vec<f64> {
        nodes.iter().map(|&v| self.evaluate(u, v)).collect()
    }
}

pub fn flatten(spec: &MultiGraphonSpec, quad_points: usize) -> Result<FlattenedKernel> {
    spec.validate()?;
    Ok(FlattenedKernel {
        spec: spec.clone(),
        rule: Quadrature::new(quad_points)?,
    })
}

/// `∫ (f̄(xi, v) - f̄(xj, v))^2 dv` by quadrature in both `v` and `z`.
pub fn true_distance(spec: &MultiGraphonSpec, xi: f64, xj: f64, quad_points: usize) -> Result<f64> {
    let flat = flatten(spec, quad_points)?;
    let rule = Quadrature::new(quad_points)?;
    let a = flat.row(xi, &rule.nodes);
    let b = flat.row(xj, &rule.nodes);
    Ok(a.iter()
        .zip(&b)
        .zip(&rule.weights)
        .map(|((p, q), w)| w * (p - q) * (p - q))
        .sum())
}

/// All pairwise true distances for the given node positions.
pub fn true_distance_matrix(spec: &MultiGraphonSpec, x: &[f64], quad_points: usize) -> Result<DMatrix<f64>> {
    let flat = flatten(spec, quad_points)?;
    let rule = Quadrature::new(quad_points)?;
    let rows: Vec<Vec<f64>> = x.par_iter().map(|&xi| flat.row(xi, &rule.nodes)).collect();
    let n = x.len();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v: f64 = rows[i]
                .iter()
                .zip(&rows[j])
                .zip(&rule.weights)
                .map(|((p, q), w)| w * (p - q) * (p - q))
                .sum();
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    Ok(d)
}

/// `∫∫∫ f(u, v; z) du dv dz`, the mean edge intensity under uniform latents.
pub fn mean_intensity(spec: &MultiGraphonSpec, quad_points: usize) -> Result<f64> {
    let flat = flatten(spec, quad_points)?;
    let rule = Quadrature::new(quad_points)?;
    Ok(rule.integrate(|u| rule.integrate(|v| flat.evaluate(u, v))))
}

/// How network positions are generated and observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SamplingMode {
    /// Exchangeable layers; covariates unused.
    Replicated,
    /// Equispaced time points `z_l = l / m`.
    Dynamic,
    /// Uniform `z_l` observed through noisy covariates `z_l + N(0, sigma^2)`.
    CrossSection,
}

impl SamplingMode {
    pub fn name(self) -> &'static str {
        match self {
            SamplingMode::Replicated => "replicated",
            SamplingMode::Dynamic => "dynamic",
            SamplingMode::CrossSection => "cross_section",
        }
    }
}

impl std::str::FromStr for SamplingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "replicated" => Ok(SamplingMode::Replicated),
            "dynamic" => Ok(SamplingMode::Dynamic),
            "cross_section" | "cross-section" | "crosssection" => Ok(SamplingMode::CrossSection),
            other => Err(Error::InvalidInput(format!("unknown sampling mode '{other}'"))),
        }
    }
}

/// Latent node and network positions behind a sampled collection.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentDraw {
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    /// Noisy covariates; empty unless the mode is cross-sectional.
    pub z_check: Vec<f64>,
    pub mode: SamplingMode,
}

impl LatentDraw {
    /// Network positions as observed by an estimator: covariates for
    /// cross-sectional data, `z` otherwise.
    pub fn observed_netpos(&self) -> &[f64] {
        match self.mode {
            SamplingMode::CrossSection => &self.z_check,
            _ => &self.z,
        }
    }
}

/// Parameters for [`sample`].
#[derive(Debug, Clone)]
pub struct SampleParams {
    pub n: usize,
    pub m: usize,
    pub rho: f64,
    pub sigma_cov: f64,
    pub mode: SamplingMode,
    pub seed: u64,
}

/// Draws a graph collection `G(n, m, rho f)` with uniform latent positions.
pub fn sample(spec: &MultiGraphonSpec, params: &SampleParams) -> Result<(GraphCollection, LatentDraw)> {
    spec.validate()?;
    let SampleParams { n, m, rho, sigma_cov, mode, seed } = *params;
    if n < 2 {
        return Err(Error::InvalidInput(format!("sampling needs n >= 2, got {n}")));
    }
    if m < 1 {
        return Err(Error::InvalidInput("sampling needs m >= 1".into()));
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::InvalidInput(format!("rho must lie in (0, 1], got {rho}")));
    }
    if !(sigma_cov.is_finite() && sigma_cov >= 0.0) {
        return Err(Error::InvalidInput(format!("covariate noise must be nonnegative, got {sigma_cov}")));
    }
    let peak = rho * spec.sup();
    if peak > 1.0 + 1e-12 {
        return Err(Error::ProbabilityOverflow { value: peak });
    }

    let mut node_rng = rng::stream(seed, "latent-x", 0);
    let x: Vec<f64> = (0..n).map(|_| node_rng.random::<f64>()).collect();
    let z: Vec<f64> = match mode {
        SamplingMode::Dynamic => (1..=m).map(|l| l as f64 / m as f64).collect(),
        _ => {
            let mut z_rng = rng::stream(seed, "latent-z", 0);
            (0..m).map(|_| z_rng.random::<f64>()).collect()
        }
    };
    let z_check = match mode {
        SamplingMode::CrossSection => {
            let mut c_rng = rng::stream(seed, "covariate", 0);
            if sigma_cov == 0.0 {
                z.clone()
            } else {
                let noise = Normal::new(0.0, sigma_cov).expect("positive sigma");
                z.iter().map(|&zl| zl + noise.sample(&mut c_rng)).collect()
            }
        }
        _ => Vec::new(),
    };

    let layers: Vec<Vec<u32>> = (0..m)
        .into_par_iter()
        .map(|l| {
            let mut edge_rng = rng::stream(seed, "edges", l as u64);
            let mut layer = vec![0u32; n * n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let p = (rho * spec.evaluate(x[i], x[j], z[l])).clamp(0.0, 1.0);
                    if edge_rng.random::<f64>() < p {
                        layer[i * n + j] = 1;
                        layer[j * n + i] = 1;
                    }
                }
            }
            layer
        })
        .collect();
    let data = layers.concat();
    let g = GraphCollection::from_raw(n, m, data, Some(rho));
    Ok((g, LatentDraw { x, z, z_check, mode }))
}

/// Truth tensor `f(x_i, x_j; z_l)` laid out per layer.
pub fn truth_tensor(spec: &MultiGraphonSpec, x: &[f64], z: &[f64]) -> Vec<DMatrix<f64>> {
    z.iter()
        .map(|&zl| DMatrix::from_fn(x.len(), x.len(), |i, j| spec.evaluate(x[i], x[j], zl)))
        .collect()
}
