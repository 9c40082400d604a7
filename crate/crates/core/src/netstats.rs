//! Small-world summary statistics and resampling of networks from fitted
//! edge probabilities.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng;
use crate::smoother::FitResult;
use crate::stats;

/// Undirected graph without self-loops, stored as bitset rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        SimpleGraph { n, words, rows: vec![0; n * words] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = SimpleGraph::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = SimpleGraph::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n || i == j {
                return Err(Error::InvalidInput(format!("bad edge ({i}, {j}) for n = {n}")));
            }
            g.add_edge(i, j);
        }
        Ok(g)
    }

    /// Nonzero off-diagonal entries become edges; the matrix must be
    /// symmetric.
    pub fn from_adjacency(a: &DMatrix<f64>) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::ShapeMismatch("adjacency must be square".into()));
        }
        let n = a.nrows();
        let mut g = SimpleGraph::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if (a[(i, j)] != 0.0) != (a[(j, i)] != 0.0) {
                    return Err(Error::InvalidInput(format!("adjacency not symmetric at ({i}, {j})")));
                }
                if a[(i, j)] != 0.0 {
                    g.add_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.rows[i * self.words + j / 64] |= 1 << (j % 64);
        self.rows[j * self.words + i / 64] |= 1 << (i % 64);
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(w, &bits)| {
            let mut b = bits;
            std::iter::from_fn(move || {
                if b == 0 {
                    return None;
                }
                let t = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(w * 64 + t)
            })
        })
    }

    /// Graph with node `i` relabeled to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> SimpleGraph {
        let mut g = SimpleGraph::empty(self.n);
        for i in 0..self.n {
            for j in self.neighbors(i) {
                g.add_edge(perm[i], perm[j]);
            }
        }
        g
    }
}

pub fn density(g: &SimpleGraph) -> f64 {
    let n = g.n();
    if n < 2 {
        return 0.0;
    }
    2.0 * g.edge_count() as f64 / (n * (n - 1)) as f64
}

pub fn triangles(g: &SimpleGraph) -> u64 {
    let mut count = 0u64;
    for i in 0..g.n() {
        for j in g.neighbors(i).filter(|&j| j > i) {
            // common neighbors k > j
            let (ri, rj) = (g.row(i), g.row(j));
            for w in (j / 64)..g.words {
                let mut common = ri[w] & rj[w];
                if w == j / 64 {
                    let shift = j % 64 + 1;
                    common = if shift == 64 { 0 } else { common & (!0u64 << shift) };
                }
                count += u64::from(common.count_ones());
            }
        }
    }
    count
}

fn two_paths(g: &SimpleGraph) -> u64 {
    (0..g.n())
        .map(|i| {
            let d = g.degree(i) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum()
}

/// `3 * triangles / paths of length two`, or 0 without such paths.
pub fn transitivity(g: &SimpleGraph) -> f64 {
    let paths = two_paths(g);
    if paths == 0 {
        0.0
    } else {
        3.0 * triangles(g) as f64 / paths as f64
    }
}

fn components(g: &SimpleGraph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut head = 0;
        while head < comp.len() {
            let v = comp[head];
            head += 1;
            for w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Mean shortest-path length over node pairs of the largest connected
/// component (the lowest-labeled one on ties).
pub fn avg_path_length(g: &SimpleGraph) -> Result<f64> {
    let comps = components(g);
    let largest = comps
        .iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])))
        .ok_or_else(|| Error::UndefinedStatistic("average path length of an empty graph".into()))?;
    if largest.len() < 2 {
        return Err(Error::UndefinedStatistic("average path length needs at least one edge".into()));
    }
    let mut total = 0u64;
    let mut dist = vec![u32::MAX; g.n()];
    let mut queue = Vec::with_capacity(largest.len());
    for &s in largest {
        for &v in largest {
            dist[v] = u32::MAX;
        }
        dist[s] = 0;
        queue.clear();
        queue.push(s);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for w in g.neighbors(v) {
                if dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    total += u64::from(dist[w]);
                    queue.push(w);
                }
            }
        }
    }
    let k = largest.len() as u64;
    Ok(total as f64 / (k * (k - 1)) as f64)
}

/// Source of edge probabilities for resampling.
pub trait EdgeProbability: Sync {
    fn node_count(&self) -> usize;
    /// Symmetric matrix of edge probabilities at network position `z`.
    fn edge_probabilities(&self, z: f64) -> Result<DMatrix<f64>>;
}

impl EdgeProbability for FitResult {
    fn node_count(&self) -> usize {
        self.n()
    }

    fn edge_probabilities(&self, z: f64) -> Result<DMatrix<f64>> {
        self.probabilities_at(z)
    }
}

/// Erdős–Rényi predictor: every pair has probability `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantPredictor {
    pub n: usize,
    pub p: f64,
}

impl EdgeProbability for ConstantPredictor {
    fn node_count(&self) -> usize {
        self.n
    }

    fn edge_probabilities(&self, _z: f64) -> Result<DMatrix<f64>> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidInput(format!("probability {} outside [0, 1]", self.p)));
        }
        Ok(DMatrix::from_element(self.n, self.n, self.p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    Density,
    Triangles,
    Transitivity,
    AvgPathLength,
}

impl Statistic {
    pub const ALL: [Statistic; 4] = [Statistic::Density, Statistic::Triangles, Statistic::Transitivity, Statistic::AvgPathLength];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::Density => "density",
            Statistic::Triangles => "triangles",
            Statistic::Transitivity => "transitivity",
            Statistic::AvgPathLength => "avg_path_length",
        }
    }
}

impl std::str::FromStr for Statistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Statistic::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown statistic '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatSummary {
    pub statistic: Statistic,
    /// NaN when every draw was skipped.
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
    /// Draws for which the statistic was undefined.
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResampleSummary {
    pub zvalue: f64,
    pub draws: usize,
    pub stats: Vec<StatSummary>,
}

impl ResampleSummary {
    pub fn get(&self, s: Statistic) -> &StatSummary {
        self.stats.iter().find(|t| t.statistic == s).expect("all statistics are summarized")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResampleOptions {
    pub draws: usize,
    pub level: f64,
    pub seed: u64,
}

impl Default for ResampleOptions {
    fn default() -> Self {
        ResampleOptions { draws: 10_000, level: 0.95, seed: 0 }
    }
}

/// Independent Bernoulli draw of every pair.
pub fn draw_graph<R: Rng>(p: &DMatrix<f64>, rng: &mut R) -> SimpleGraph {
    let n = p.nrows();
    let mut g = SimpleGraph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p[(i, j)] {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Draws `draws` networks at network position `z` and summarizes the four
/// statistics with means and percentile bands.
pub fn resample_stats(model: &dyn EdgeProbability, z: f64, opts: &ResampleOptions) -> Result<ResampleSummary> {
    if opts.draws < 10 {
        return Err(Error::InvalidInput(format!("resampling needs at least 10 draws, got {}", opts.draws)));
    }
    if !(0.0..=1.0).contains(&opts.level) {
        return Err(Error::InvalidInput(format!("level must lie in [0, 1], got {}", opts.level)));
    }
    let p = model.edge_probabilities(z)?;
    if p.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::InvalidInput("edge probabilities must lie in [0, 1]".into()));
    }
    let per_draw: Vec<[Option<f64>; 4]> = (0..opts.draws)
        .into_par_iter()
        .map(|b| {
            let g = draw_graph(&p, &mut rng::stream(opts.seed, "resample", b as u64));
            [
                Some(density(&g)),
                Some(triangles(&g) as f64),
                Some(transitivity(&g)),
                avg_path_length(&g).ok(),
            ]
        })
        .collect();
    let stats = Statistic::ALL
        .iter()
        .enumerate()
        .map(|(k, &statistic)| {
            let values: Vec<f64> = per_draw.iter().filter_map(|d| d[k]).collect();
            let skipped = opts.draws - values.len();
            let (mean, lo, hi) = if values.is_empty() {
                (f64::NAN, f64::NAN, f64::NAN)
            } else {
                let (lo, hi) = stats::percentile_band(&values, opts.level);
                (stats::mean(&values), lo, hi)
            };
            StatSummary { statistic, mean, lo, hi, skipped }
        })
        .collect();
    Ok(ResampleSummary { zvalue: z, draws: opts.draws, stats })
}
