//! Pairwise node distances from path counts across split halves of the
//! layers.
//!
//! Layers are split into a set `S` of `floor(m/2)` layers and its
//! complement. With `s` and `s'` the mean adjacencies of the two halves,
//!
//! ```text
//! r_ij = mean_{k not in {i,j}} s_ik * s'_kj
//! D_ij = (r_ii + r_jj - r_ij - r_ji)_+ / rho^2
//! ```
//!
//! which is unbiased for the squared L2 distance between the rows of the
//! flattened graphon at the two nodes. All sums are carried out on integer
//! counts, so the result is bitwise equivariant under node relabeling.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;

use crate::collection::{estimate_density, GraphCollection};
use crate::error::{Error, Result};
use crate::rng;

/// Which layers form the first half `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerSplit {
    FirstHalf,
    SeededRandom(u64),
}

impl LayerSplit {
    /// Sorted indices of the `floor(m/2)` layers in `S`.
    pub fn layers(&self, m: usize) -> Vec<usize> {
        let half = m / 2;
        match *self {
            LayerSplit::FirstHalf => (0..half).collect(),
            LayerSplit::SeededRandom(seed) => {
                let mut all: Vec<usize> = (0..m).collect();
                all.shuffle(&mut rng::stream(seed, "layer-split", 0));
                let mut s = all[..half].to_vec();
                s.sort_unstable();
                s
            }
        }
    }
}

/// Estimated pairwise distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub values: DMatrix<f64>,
    /// Half path length used (`e = 1` counts paths of length two).
    pub e: u32,
    pub split: LayerSplit,
    /// Layers in `S`.
    pub first_half: Vec<usize>,
}

impl DistanceMatrix {
    /// Wraps a precomputed symmetric matrix, e.g. exact distances of known
    /// positions.
    pub fn from_matrix(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() != values.ncols() {
            return Err(Error::ShapeMismatch("distance matrix must be square".into()));
        }
        let n = values.nrows();
        for i in 0..n {
            if values[(i, i)] != 0.0 {
                return Err(Error::InvalidInput(format!("distance diagonal is nonzero at {i}")));
            }
            for j in 0..n {
                let v = values[(i, j)];
                if !(v.is_finite() && v >= 0.0) || v != values[(j, i)] {
                    return Err(Error::InvalidInput(format!("distance entry ({i}, {j}) invalid or asymmetric")));
                }
            }
        }
        Ok(DistanceMatrix {
            values,
            e: 1,
            split: LayerSplit::FirstHalf,
            first_half: Vec::new(),
        })
    }

    /// Squared differences of 1-D positions.
    pub fn from_positions(x: &[f64]) -> Self {
        let n = x.len();
        let values = DMatrix::from_fn(n, n, |i, j| (x[i] - x[j]).powi(2));
        DistanceMatrix {
            values,
            e: 1,
            split: LayerSplit::FirstHalf,
            first_half: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }
}

/// Options for [`distance_matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistanceOptions {
    pub split: LayerSplit,
    /// Half path length; `e > 1` replaces each layer by its `e`-th power.
    pub e: u32,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        DistanceOptions { split: LayerSplit::FirstHalf, e: 1 }
    }
}

fn half_counts(g: &GraphCollection, layers: &[usize], e: u32) -> DMatrix<f64> {
    if e == 1 {
        return g.layer_sum(layers);
    }
    let n = g.n();
    let mut acc = DMatrix::<f64>::zeros(n, n);
    for &l in layers {
        let a = g.layer(l);
        let mut p = a.clone();
        for _ in 1..e {
            p = &p * &a;
        }
        acc += p;
    }
    acc
}

/// Distance estimate from a layered collection.
///
/// For `e > 1` each layer is replaced by its `e`-th matrix power scaled by
/// `(n rho)^(1-e)` before averaging, and the result estimates the distance
/// between rows of the `e`-fold composed flattened kernel.
pub fn distance_matrix(g: &GraphCollection, opts: DistanceOptions) -> Result<DistanceMatrix> {
    let n = g.n();
    let m = g.m();
    if m < 2 {
        return Err(Error::NeedsMultipleLayers(m));
    }
    if n < 3 {
        return Err(Error::InvalidInput(format!("distance estimation needs n >= 3, got {n}")));
    }
    if opts.e == 0 {
        return Err(Error::InvalidInput("path parameter e must be positive".into()));
    }
    let rho = estimate_density(g)?;
    if rho == 0.0 {
        return Err(Error::EmptyCollection);
    }

    let first = opts.split.layers(m);
    let second: Vec<usize> = (0..m).filter(|l| first.binary_search(l).is_err()).collect();
    let s = half_counts(g, &first, opts.e);
    let t = half_counts(g, &second, opts.e);

    // Integer-valued cross products; the excluded k in {i, j} terms are
    // removed exactly.
    let full = &s * &t;
    let mut r = DMatrix::<f64>::zeros(n, n);
    let scale = (first.len() * second.len()) as f64;
    for i in 0..n {
        for j in 0..n {
            let (sum, count) = if i == j {
                (full[(i, i)] - s[(i, i)] * t[(i, i)], n - 1)
            } else {
                (full[(i, j)] - s[(i, i)] * t[(i, j)] - s[(i, j)] * t[(j, j)], n - 2)
            };
            r[(i, j)] = sum / (scale * count as f64);
        }
    }

    let walk_norm = (n as f64 * rho).powi(2 * (opts.e as i32 - 1));
    let denom = rho * rho * walk_norm;
    let mut d = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = ((r[(i, i)] + r[(j, j)]) - (r[(i, j)] + r[(j, i)])).max(0.0) / denom;
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    Ok(DistanceMatrix {
        values: d,
        e: opts.e,
        split: opts.split,
        first_half: first,
    })
}
