//! Single-matrix reference estimators: universal singular value
//! thresholding (USVT) and neighborhood smoothing (NBS).

use nalgebra::DMatrix;
use nalgebra::linalg::SymmetricEigen;

use crate::error::{Error, Result};

fn check_square_symmetric(m: &DMatrix<f64>, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::ShapeMismatch(format!("{what} input must be square, got {}x{}", m.nrows(), m.ncols())));
    }
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (m[(i, j)], m[(j, i)]);
            if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                return Err(Error::InvalidInput(format!("{what} input is not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(n)
}

fn symmetrize_clamp(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    DMatrix::from_fn(n, n, |i, j| ((m[(i, j)] + m[(j, i)]) / 2.0).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UsvtOptions {
    /// Threshold multiplier.
    pub eta: f64,
    /// Number of layers averaged into the input; scales the noise variance.
    pub m_eff: f64,
    /// Explicit eigenvalue threshold, overriding the rule.
    pub threshold: Option<f64>,
}

impl Default for UsvtOptions {
    fn default() -> Self {
        UsvtOptions { eta: 1.0, m_eff: 1.0, threshold: None }
    }
}

impl UsvtOptions {
    pub fn averaged(m_eff: usize) -> Self {
        UsvtOptions { m_eff: m_eff.max(1) as f64, ..Default::default() }
    }
}

/// Eigenvalue threshold `eta * sqrt(n * v / m_eff)` with `v = p(1 - p)` at
/// the mean entry `p`.
pub fn usvt_threshold(m: &DMatrix<f64>, opts: &UsvtOptions) -> f64 {
    if let Some(t) = opts.threshold {
        return t;
    }
    let n = m.nrows() as f64;
    let p = m.mean();
    let v = p * (1.0 - p);
    opts.eta * (n * v.max(0.0) / opts.m_eff).sqrt()
}

/// Keeps the eigencomponents of `m` whose magnitude reaches the threshold,
/// then symmetrizes and clamps to `[0, 1]`.
pub fn usvt(m: &DMatrix<f64>, opts: &UsvtOptions) -> Result<DMatrix<f64>> {
    let n = check_square_symmetric(m, "usvt")?;
    if n < 2 {
        return Err(Error::InvalidInput("usvt needs n >= 2".into()));
    }
    Ok(symmetrize_clamp(&usvt_unclamped(m, opts)))
}

/// An all-zero diagonal (no self-loops) is missing data rather than
/// signal; it is filled with the off-diagonal row means.
fn fill_empty_diagonal(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let mut out = m.clone();
    if n > 1 && (0..n).all(|i| m[(i, i)] == 0.0) {
        for i in 0..n {
            out[(i, i)] = m.row(i).sum() / (n - 1) as f64;
        }
    }
    out
}

/// Thresholded reconstruction before symmetrizing and clamping.
pub fn usvt_unclamped(m: &DMatrix<f64>, opts: &UsvtOptions) -> DMatrix<f64> {
    let tau = usvt_threshold(m, opts);
    let eig = SymmetricEigen::new(fill_empty_diagonal(m));
    let n = m.nrows();
    let mut out = DMatrix::<f64>::zeros(n, n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() >= tau {
            let u = eig.eigenvectors.column(k);
            out += lambda * (&u * u.transpose());
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NbsOptions {
    /// Neighborhood quantile level; `None` uses `sqrt(ln n / n)`.
    pub quantile: Option<f64>,
}

/// `d(i, j)^2 = max_{k != i, j} |<M_i - M_j, M_k>| / n`.
pub fn nbs_distances(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let gram = m * m.transpose();
    let mut d = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let mut best = 0.0f64;
            for k in 0..n {
                if k != i && k != j {
                    best = best.max((gram[(i, k)] - gram[(j, k)]).abs());
                }
            }
            let v = best / n as f64;
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    d
}

/// Neighborhood of each node: the other nodes whose distance is at most the
/// row's order statistic of rank `max(1, floor(h (n - 1)))`. Never empty.
pub fn nbs_neighborhoods(d: &DMatrix<f64>, h: f64) -> Vec<Vec<usize>> {
    let n = d.nrows();
    let rank = ((h * (n - 1) as f64).floor() as usize).clamp(1, n - 1);
    (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| d[(i, j)]).collect();
            row.sort_by(|a, b| a.total_cmp(b));
            let q = row[rank - 1];
            (0..n).filter(|&j| j != i && d[(i, j)] <= q).collect()
        })
        .collect()
}

/// Neighborhood smoothing: each entry is averaged over the neighborhood of
/// its column node, then the result is symmetrized and clamped.
pub fn nbs(m: &DMatrix<f64>, opts: &NbsOptions) -> Result<DMatrix<f64>> {
    let n = check_square_symmetric(m, "nbs")?;
    if n < 3 {
        return Err(Error::InvalidInput(format!("nbs needs n >= 3, got {n}")));
    }
    let h = opts.quantile.unwrap_or_else(|| ((n as f64).ln() / n as f64).sqrt());
    let hoods = nbs_neighborhoods(&nbs_distances(m), h);
    let mut p = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let hood = &hoods[j];
        for i in 0..n {
            let s: f64 = hood.iter().map(|&k| m[(i, k)]).sum();
            p[(i, j)] = s / hood.len() as f64;
        }
    }
    Ok(symmetrize_clamp(&p))
}
