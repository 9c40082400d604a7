use rand::seq::index;
use rayon::prelude::*;

use super::{fit_multigraphon, SmootherConfig};
use crate::collection::GraphCollection;
use crate::error::{Error, Result};
use crate::rng;
use crate::stats;

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapOptions {
    pub replicates: usize,
    pub level: f64,
    pub seed: u64,
}

impl Default for BootstrapOptions {
    fn default() -> Self {
        BootstrapOptions { replicates: 200, level: 0.95, seed: 0 }
    }
}

/// Fitted curve for one node pair over a grid of network positions, with
/// pointwise percentile bands.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapBand {
    pub zgrid: Vec<f64>,
    pub curve: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub median: Vec<f64>,
    pub replicates: usize,
}

/// Subsampling bootstrap: each replicate refits on `ceil(m/2)` layers drawn
/// without replacement, with positions and the full-data bandwidths held
/// fixed, and evaluates the pair's curve on `zgrid`.
pub fn bootstrap_ci(
    g: &GraphCollection,
    positions: &[f64],
    netpos: &[f64],
    config: &SmootherConfig,
    pair: (usize, usize),
    zgrid: &[f64],
    opts: &BootstrapOptions,
) -> Result<BootstrapBand> {
    let m = g.m();
    if m < 4 {
        return Err(Error::InvalidInput(format!("bootstrap needs m >= 4, got {m}")));
    }
    if opts.replicates < 10 {
        return Err(Error::InvalidInput(format!("bootstrap needs at least 10 replicates, got {}", opts.replicates)));
    }
    if !(0.0..=1.0).contains(&opts.level) {
        return Err(Error::InvalidInput(format!("level must lie in [0, 1], got {}", opts.level)));
    }
    let (i, j) = pair;
    if i >= g.n() || j >= g.n() {
        return Err(Error::InvalidInput(format!("pair ({i}, {j}) out of range for n = {}", g.n())));
    }

    let full = fit_multigraphon(g, positions, netpos, config)?;
    let fixed = full.config;
    let (xi, xj) = (positions[i], positions[j]);
    let curve = zgrid.iter().map(|&z| full.predict(xi, xj, z)).collect::<Result<Vec<_>>>()?;

    let size = m.div_ceil(2);
    let draws = (0..opts.replicates)
        .into_par_iter()
        .map(|b| {
            let mut rng = rng::stream(opts.seed, "bootstrap", b as u64);
            let mut layers = index::sample(&mut rng, m, size).into_vec();
            layers.sort_unstable();
            let sub = g.select_layers(&layers);
            let z: Vec<f64> = layers.iter().map(|&l| netpos[l]).collect();
            let fit = fit_multigraphon(&sub, positions, &z, &fixed)?;
            zgrid.iter().map(|&q| fit.predict(xi, xj, q)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut lower = Vec::with_capacity(zgrid.len());
    let mut upper = Vec::with_capacity(zgrid.len());
    let mut median = Vec::with_capacity(zgrid.len());
    for k in 0..zgrid.len() {
        let column: Vec<f64> = draws.iter().map(|d| d[k]).collect();
        let (lo, hi) = stats::percentile_band(&column, opts.level);
        lower.push(lo);
        upper.push(hi);
        median.push(stats::quantile(&column, 0.5));
    }
    Ok(BootstrapBand {
        zgrid: zgrid.to_vec(),
        curve,
        lower,
        upper,
        median,
        replicates: opts.replicates,
    })
}
