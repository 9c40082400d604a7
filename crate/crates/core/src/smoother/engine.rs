//! Separable product-kernel regression over the `(x_i, x_j, z_l)` design.
//!
//! The design is a Cartesian product of node positions (twice) and network
//! positions, so every kernel-weighted moment factorizes into per-axis
//! weight matrices. For a query `(a, b, c)`:
//!
//! ```text
//! sum_{i != j, l} K(x_i - a) K(x_j - b) K(z_l - c) y_ijl
//!     = sum_l Kz[c, l] (Wa Y_l Wb^T)[a, b]
//! ```
//!
//! which turns each evaluation sweep into a handful of dense matrix
//! products per query layer.

use nalgebra::{Const, DMatrix, DimMin, Matrix3, Matrix4, SMatrix, SVector, Vector3, Vector4};
use rayon::prelude::*;

use super::{KernelKind, Method};

pub(crate) fn kernel_value(kind: KernelKind, u: f64) -> f64 {
    match kind {
        KernelKind::Uniform => {
            if u.abs() <= 1.0 {
                0.5
            } else {
                0.0
            }
        }
        KernelKind::Epanechnikov => {
            let t = 1.0 - u * u;
            if t > 0.0 {
                0.75 * t
            } else {
                0.0
            }
        }
        KernelKind::Gaussian => (-0.5 * u * u).exp() * 0.398_942_280_401_432_7,
    }
}

/// `w[k][(p, i)] = K((design_i - query_p) / h) * (design_i - query_p)^k`.
pub(crate) fn axis_moments(query: &[f64], design: &[f64], kind: KernelKind, h: f64, order: usize) -> Vec<DMatrix<f64>> {
    let base = DMatrix::from_fn(query.len(), design.len(), |p, i| kernel_value(kind, (design[i] - query[p]) / h));
    let mut out = vec![base];
    for k in 1..=order {
        let prev = &out[k - 1];
        let next = DMatrix::from_fn(query.len(), design.len(), |p, i| prev[(p, i)] * (design[i] - query[p]));
        out.push(next);
    }
    out
}

/// `sum_{i != j} A[p, i] B[q, j]`.
fn pair_sum(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let ra = a.column_sum();
    let rb = b.column_sum();
    let mut out = &ra * rb.transpose();
    out -= a * b.transpose();
    out
}

/// Regression inputs with link-transformed responses.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Design {
    /// Per-layer responses; diagonals are zero and never used.
    pub layers: Vec<DMatrix<f64>>,
    pub positions: Vec<f64>,
    /// `None` for a single aggregated layer without a network axis.
    pub netpos: Option<Vec<f64>>,
    /// `false` regresses each node pair on its own (per-edge fits).
    pub smooth_nodes: bool,
}

impl Design {
    pub fn n(&self) -> usize {
        self.positions.len()
    }
}

/// Node-axis query: explicit points, or the design nodes themselves when
/// nodes are not smoothed.
#[derive(Debug, Clone, Copy)]
pub(crate) enum NodeQuery<'a> {
    Points(&'a [f64], &'a [f64]),
    DesignNodes,
}

/// Kernel estimate and total weight per query point for one query layer.
pub(crate) struct RawEstimate {
    pub value: DMatrix<f64>,
    pub weight: DMatrix<f64>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Smoothing {
    pub kernel: KernelKind,
    pub method: Method,
    pub hx: f64,
    pub hz: f64,
}

/// Evaluates the smoother at every combination of node query pairs and
/// network query positions (`qz` is ignored without a network axis).
pub(crate) fn evaluate(design: &Design, nodes: NodeQuery<'_>, qz: &[f64], s: Smoothing) -> Vec<RawEstimate> {
    let local_linear = s.method == Method::LocalLinear;
    let has_z = design.netpos.is_some();
    let sq_order = if local_linear { 2 } else { 0 };
    let n = design.n();

    // node axis
    let node_terms = match nodes {
        NodeQuery::Points(qa, qb) if design.smooth_nodes => {
            let wa = axis_moments(qa, &design.positions, s.kernel, s.hx, sq_order);
            let wb = axis_moments(qb, &design.positions, s.kernel, s.hx, sq_order);
            Some((wa, wb))
        }
        _ => None,
    };
    let (rows, cols) = match &node_terms {
        Some((wa, wb)) => (wa[0].nrows(), wb[0].nrows()),
        None => (n, n),
    };

    // pair moment sums P[(ka, kb)]
    let pair = |ka: usize, kb: usize| -> DMatrix<f64> {
        match &node_terms {
            Some((wa, wb)) => pair_sum(&wa[ka], &wb[kb]),
            None => {
                if ka == 0 && kb == 0 {
                    DMatrix::from_fn(n, n, |p, q| if p == q { 0.0 } else { 1.0 })
                } else {
                    DMatrix::zeros(n, n)
                }
            }
        }
    };
    let p00 = pair(0, 0);
    let node_ll = local_linear && node_terms.is_some();
    let (p10, p01, p20, p11, p02) = if node_ll {
        (pair(1, 0), pair(0, 1), pair(2, 0), pair(1, 1), pair(0, 2))
    } else {
        let z = DMatrix::zeros(0, 0);
        (z.clone(), z.clone(), z.clone(), z.clone(), z)
    };

    // network axis
    let (zw, queries): (Vec<DMatrix<f64>>, usize) = match &design.netpos {
        Some(z) => (axis_moments(qz, z, s.kernel, s.hz, sq_order), qz.len()),
        None => (vec![DMatrix::from_element(1, 1, 1.0)], 1),
    };
    let z_ll = local_linear && has_z;

    (0..queries)
        .into_par_iter()
        .map(|r| {
            let zsum = |k: usize| -> f64 { zw[k].row(r).sum() };
            let mix = |k: usize| -> DMatrix<f64> {
                let mut acc = DMatrix::<f64>::zeros(n, n);
                for (l, layer) in design.layers.iter().enumerate() {
                    let w = zw[k][(r, l)];
                    if w != 0.0 {
                        acc.zip_apply(layer, |a, b| *a += w * b);
                    }
                }
                acc
            };
            let y0 = mix(0);
            let y1 = if z_ll { Some(mix(1)) } else { None };

            let (t0, t1, t2, t3) = match &node_terms {
                Some((wa, wb)) => {
                    let l0 = &y0 * wb[0].transpose();
                    let t0 = &wa[0] * &l0;
                    let (t1, t2) = if node_ll {
                        let l1 = &y0 * wb[1].transpose();
                        (Some(&wa[1] * &l0), Some(&wa[0] * l1))
                    } else {
                        (None, None)
                    };
                    let t3 = y1.map(|y1| &wa[0] * (y1 * wb[0].transpose()));
                    (t0, t1, t2, t3)
                }
                None => (y0, None, None, y1),
            };

            let z0 = zsum(0);
            let mut value = DMatrix::<f64>::zeros(rows, cols);
            let mut weight = DMatrix::<f64>::zeros(rows, cols);
            for q in 0..cols {
                for p in 0..rows {
                    let s00 = p00[(p, q)] * z0;
                    weight[(p, q)] = s00;
                    if s00 <= 0.0 {
                        value[(p, q)] = f64::NAN;
                        continue;
                    }
                    let nw = t0[(p, q)] / s00;
                    value[(p, q)] = match (node_ll, z_ll) {
                        (false, false) => nw,
                        (true, true) => {
                            let (z1, z2) = (zsum(1), zsum(2));
                            let m = Matrix4::new(
                                s00,
                                p10[(p, q)] * z0,
                                p01[(p, q)] * z0,
                                p00[(p, q)] * z1,
                                p10[(p, q)] * z0,
                                p20[(p, q)] * z0,
                                p11[(p, q)] * z0,
                                p10[(p, q)] * z1,
                                p01[(p, q)] * z0,
                                p11[(p, q)] * z0,
                                p02[(p, q)] * z0,
                                p01[(p, q)] * z1,
                                p00[(p, q)] * z1,
                                p10[(p, q)] * z1,
                                p01[(p, q)] * z1,
                                p00[(p, q)] * z2,
                            );
                            let rhs = Vector4::new(
                                t0[(p, q)],
                                t1.as_ref().unwrap()[(p, q)],
                                t2.as_ref().unwrap()[(p, q)],
                                t3.as_ref().unwrap()[(p, q)],
                            );
                            intercept_or(m, rhs, nw)
                        }
                        (true, false) => {
                            let m = Matrix3::new(
                                s00,
                                p10[(p, q)] * z0,
                                p01[(p, q)] * z0,
                                p10[(p, q)] * z0,
                                p20[(p, q)] * z0,
                                p11[(p, q)] * z0,
                                p01[(p, q)] * z0,
                                p11[(p, q)] * z0,
                                p02[(p, q)] * z0,
                            );
                            let rhs = Vector3::new(t0[(p, q)], t1.as_ref().unwrap()[(p, q)], t2.as_ref().unwrap()[(p, q)]);
                            intercept_or(m, rhs, nw)
                        }
                        (false, true) => {
                            let (z1, z2) = (zsum(1), zsum(2));
                            let s01 = p00[(p, q)] * z1;
                            let s11 = p00[(p, q)] * z2;
                            let det = s00 * s11 - s01 * s01;
                            if det.abs() <= 1e-12 * s00 * s11.abs().max(f64::MIN_POSITIVE) {
                                nw
                            } else {
                                let t3v = t3.as_ref().unwrap()[(p, q)];
                                (s11 * t0[(p, q)] - s01 * t3v) / det
                            }
                        }
                    };
                }
            }
            RawEstimate { value, weight }
        })
        .collect()
}

/// Pivots below this, after scaling the moment matrix to a unit diagonal,
/// mark a rank-deficient local design.
const PIVOT_TOL: f64 = 1e-9;

/// Intercept of the local linear fit, or `fallback` when the local design
/// is numerically rank deficient.
fn intercept_or<const D: usize>(m: SMatrix<f64, D, D>, rhs: SVector<f64, D>, fallback: f64) -> f64
where
    Const<D>: DimMin<Const<D>, Output = Const<D>>,
{
    let scale = SVector::<f64, D>::from_fn(|k, _| m[(k, k)]);
    if scale.iter().any(|&d| !(d > 0.0)) {
        return fallback;
    }
    let scale = scale.map(|d| 1.0 / d.sqrt());
    let a = SMatrix::<f64, D, D>::from_fn(|i, j| m[(i, j)] * scale[i] * scale[j]);
    let lu = a.lu();
    if lu.u().diagonal().iter().any(|u| u.abs() < PIVOT_TOL) {
        return fallback;
    }
    match lu.solve(&rhs.component_mul(&scale)) {
        Some(y) if (y[0] * scale[0]).is_finite() => y[0] * scale[0],
        _ => fallback,
    }
}
