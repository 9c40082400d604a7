//! One-dimensional ordinal embedding of a distance matrix.
//!
//! Only the ordering of estimated distances is used: each constraint
//! `(i, j, p, q)` asserts `D[i][j] < D[p][q]`, and positions are found by
//! minimizing the squared hinge stress
//!
//! ```text
//! sum max(0, delta + |x_i - x_j| - |x_p - x_q|)^2
//! ```
//!
//! with normalized gradient steps on a geometrically decaying schedule,
//! restarted from uniform random positions. After every step positions are
//! min-max rescaled to `[0, 1]`, which removes the scale freedom that would
//! otherwise let the stress shrink by inflating the configuration.

use rand::Rng;
use rayon::prelude::*;

use crate::distance::DistanceMatrix;
use crate::error::Result;
use crate::rng;
use crate::stats;

/// `D[i][j] < D[p][q]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrdinalConstraint {
    pub i: usize,
    pub j: usize,
    pub p: usize,
    pub q: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintScheme {
    /// Consecutive strictly increasing distances within each row.
    WithinRow,
    /// Uniformly sampled pairs of node pairs with distinct distances.
    SampledQuadruples { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrdinalConstraintSet {
    pub constraints: Vec<OrdinalConstraint>,
    pub scheme: ConstraintScheme,
}

impl OrdinalConstraintSet {
    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }
}

pub fn build_constraints(d: &DistanceMatrix, scheme: ConstraintScheme) -> OrdinalConstraintSet {
    let n = d.n();
    let mut constraints = Vec::new();
    match scheme {
        ConstraintScheme::WithinRow => {
            for i in 0..n {
                let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                others.sort_by(|&a, &b| d.get(i, a).total_cmp(&d.get(i, b)).then(a.cmp(&b)));
                for w in others.windows(2) {
                    if d.get(i, w[0]) < d.get(i, w[1]) {
                        constraints.push(OrdinalConstraint { i, j: w[0], p: i, q: w[1] });
                    }
                }
            }
        }
        ConstraintScheme::SampledQuadruples { count, seed } => {
            if n >= 3 {
                let mut rng = rng::stream(seed, "quadruples", 0);
                let max_attempts = count.saturating_mul(20).max(100);
                let mut attempts = 0;
                while constraints.len() < count && attempts < max_attempts {
                    attempts += 1;
                    let (a, b) = random_pair(&mut rng, n);
                    let (c, e) = random_pair(&mut rng, n);
                    if (a, b) == (c, e) {
                        continue;
                    }
                    let (u, v) = (d.get(a, b), d.get(c, e));
                    if u < v {
                        constraints.push(OrdinalConstraint { i: a, j: b, p: c, q: e });
                    } else if v < u {
                        constraints.push(OrdinalConstraint { i: c, j: e, p: a, q: b });
                    }
                }
            }
        }
    }
    OrdinalConstraintSet { constraints, scheme }
}

fn random_pair(rng: &mut impl Rng, n: usize) -> (usize, usize) {
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a.min(b), a.max(b))
}

/// Squared hinge stress of `positions` against `constraints`.
pub fn stress(constraints: &[OrdinalConstraint], positions: &[f64], margin: f64) -> f64 {
    constraints
        .iter()
        .map(|c| {
            let v = margin + (positions[c.i] - positions[c.j]).abs() - (positions[c.p] - positions[c.q]).abs();
            if v > 0.0 {
                v * v
            } else {
                0.0
            }
        })
        .sum()
}

/// Fraction of constraints not strictly satisfied by `positions`.
pub fn violated_fraction(constraints: &[OrdinalConstraint], positions: &[f64]) -> f64 {
    if constraints.is_empty() {
        return 0.0;
    }
    let bad = constraints
        .iter()
        .filter(|c| (positions[c.i] - positions[c.j]).abs() >= (positions[c.p] - positions[c.q]).abs())
        .count();
    bad as f64 / constraints.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbedOptions {
    pub restarts: usize,
    pub max_iter: usize,
    /// Hinge margin on the unit-range scale; `None` picks the 10th
    /// percentile of positive constraint gaps divided by the largest distance.
    pub margin: Option<f64>,
    pub step_start: f64,
    pub step_end: f64,
    pub scheme: ConstraintScheme,
    pub seed: u64,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        EmbedOptions {
            restarts: 10,
            max_iter: 2000,
            margin: None,
            step_start: 0.05,
            step_end: 1e-4,
            scheme: ConstraintScheme::WithinRow,
            seed: 0,
        }
    }
}

/// Embedded node positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    /// Positions in `[1/(n+1), n/(n+1)]`.
    pub positions: Vec<f64>,
    /// Stress of the winning restart on the unit-range scale.
    pub stress: f64,
    pub restarts_used: usize,
    pub violated_fraction: f64,
    pub margin: f64,
    pub constraints: usize,
}

/// Evenly spaced `i / (n + 1)` for `i = 1..=n`.
pub fn index_positions(n: usize) -> Vec<f64> {
    (1..=n).map(|i| i as f64 / (n + 1) as f64).collect()
}

fn auto_margin(d: &DistanceMatrix, set: &OrdinalConstraintSet) -> f64 {
    let scale = d.values.iter().cloned().fold(0.0, f64::max);
    if scale <= 0.0 {
        return 0.0;
    }
    let gaps: Vec<f64> = set
        .constraints
        .iter()
        .map(|c| d.get(c.p, c.q) - d.get(c.i, c.j))
        .filter(|&g| g > 0.0)
        .collect();
    if gaps.is_empty() {
        return 0.0;
    }
    stats::quantile(&gaps, 0.1) / scale
}

fn rescale_unit(x: &mut [f64]) -> bool {
    let lo = x.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    if !(span > 0.0 && span.is_finite()) {
        return false;
    }
    for v in x.iter_mut() {
        *v = (*v - lo) / span;
    }
    true
}

fn run_restart(n: usize, constraints: &[OrdinalConstraint], margin: f64, opts: &EmbedOptions, restart: usize) -> (Vec<f64>, f64) {
    let mut rng = rng::stream(opts.seed, "embed-restart", restart as u64);
    let mut x: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    rescale_unit(&mut x);
    let mut grad = vec![0.0; n];
    let iters = opts.max_iter.max(1);
    let decay = (opts.step_end / opts.step_start).powf(1.0 / iters as f64);
    let mut step = opts.step_start;
    for _ in 0..iters {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut active = false;
        for c in constraints {
            let a = x[c.i] - x[c.j];
            let b = x[c.p] - x[c.q];
            let v = margin + a.abs() - b.abs();
            if v > 0.0 {
                active = true;
                let ga = 2.0 * v * a.signum();
                let gb = 2.0 * v * b.signum();
                grad[c.i] += ga;
                grad[c.j] -= ga;
                grad[c.p] -= gb;
                grad[c.q] += gb;
            }
        }
        if !active {
            break;
        }
        let gmax = grad.iter().fold(0.0f64, |acc, g| acc.max(g.abs()));
        if gmax == 0.0 {
            break;
        }
        for (xi, g) in x.iter_mut().zip(&grad) {
            *xi -= step * g / gmax;
        }
        if !rescale_unit(&mut x) {
            break;
        }
        step *= decay;
    }
    let s = stress(constraints, &x, margin);
    (x, s)
}

/// Embeds nodes on a line from the ordering of `d`.
///
/// Degenerate inputs (no strict orderings) fall back to index order.
pub fn embed_1d(d: &DistanceMatrix, opts: &EmbedOptions) -> Result<Embedding> {
    let n = d.n();
    let set = build_constraints(d, opts.scheme);
    if set.is_empty() || n < 2 {
        return Ok(Embedding {
            positions: index_positions(n),
            stress: 0.0,
            restarts_used: 0,
            violated_fraction: 0.0,
            margin: 0.0,
            constraints: set.len(),
        });
    }
    let margin = opts.margin.unwrap_or_else(|| auto_margin(d, &set));
    let restarts = opts.restarts.max(1);
    let runs: Vec<(Vec<f64>, f64)> = (0..restarts)
        .into_par_iter()
        .map(|r| run_restart(n, &set.constraints, margin, opts, r))
        .collect();
    // lowest stress wins, ties to the lowest restart index
    let (best, best_stress) = runs
        .into_iter()
        .reduce(|a, b| if b.1 < a.1 { b } else { a })
        .expect("at least one restart");

    let mut positions = best;
    if !rescale_unit(&mut positions) {
        positions = index_positions(n);
    } else {
        let lo = 1.0 / (n + 1) as f64;
        let span = (n - 1) as f64 / (n + 1) as f64;
        for v in positions.iter_mut() {
            *v = lo + *v * span;
        }
    }
    let violated = violated_fraction(&set.constraints, &positions);
    Ok(Embedding {
        positions,
        stress: best_stress,
        restarts_used: restarts,
        violated_fraction: violated,
        margin,
        constraints: set.len(),
    })
}

/// Largest residual after the best affine fit `truth ~ a + b * est`
/// (a negative `b` accounts for reflection).
pub fn aligned_max_error(est: &[f64], truth: &[f64]) -> f64 {
    let me = stats::mean(est);
    let mt = stats::mean(truth);
    let sxy: f64 = est.iter().zip(truth).map(|(e, t)| (e - me) * (t - mt)).sum();
    let sxx: f64 = est.iter().map(|e| (e - me).powi(2)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = mt - b * me;
    est.iter()
        .zip(truth)
        .map(|(e, t)| (a + b * e - t).abs())
        .fold(0.0, f64::max)
}
