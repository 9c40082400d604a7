//! Stacked symmetric adjacency tensors.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// `m` symmetric adjacency matrices on a shared set of `n` nodes.
///
/// Entries are nonnegative integers stored layer-major; the diagonal is
/// always zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphCollection {
    n: usize,
    m: usize,
    data: Vec<u32>,
    binary: bool,
    rho: Option<f64>,
}

impl GraphCollection {
    /// Empty collection with all entries zero.
    pub fn zeros(n: usize, m: usize) -> Self {
        GraphCollection {
            n,
            m,
            data: vec![0; n * n * m],
            binary: true,
            rho: None,
        }
    }

    /// Builds a collection from per-layer matrices, validating symmetry and
    /// a zero diagonal.
    pub fn from_layers(layers: &[DMatrix<u32>]) -> Result<Self> {
        let m = layers.len();
        if m == 0 {
            return Err(Error::InvalidInput("collection needs at least one layer".into()));
        }
        let n = layers[0].nrows();
        let mut g = GraphCollection::zeros(n, m);
        for (l, layer) in layers.iter().enumerate() {
            if layer.nrows() != n || layer.ncols() != n {
                return Err(Error::ShapeMismatch(format!(
                    "layer {l} is {}x{}, expected {n}x{n}",
                    layer.nrows(),
                    layer.ncols()
                )));
            }
            for i in 0..n {
                if layer[(i, i)] != 0 {
                    return Err(Error::InvalidInput(format!("self-loop at node {i} in layer {l}")));
                }
                for j in (i + 1)..n {
                    if layer[(i, j)] != layer[(j, i)] {
                        return Err(Error::InvalidInput(format!(
                            "layer {l} is not symmetric at ({i}, {j})"
                        )));
                    }
                    g.set(i, j, l, layer[(i, j)]);
                }
            }
        }
        Ok(g)
    }

    /// Builds a collection from a 0/1 pattern given as closures per layer.
    pub fn from_fn(n: usize, m: usize, mut edge: impl FnMut(usize, usize, usize) -> u32) -> Self {
        let mut g = GraphCollection::zeros(n, m);
        for l in 0..m {
            for i in 0..n {
                for j in (i + 1)..n {
                    g.set(i, j, l, edge(i, j, l));
                }
            }
        }
        g
    }

    pub(crate) fn from_raw(n: usize, m: usize, data: Vec<u32>, rho: Option<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n * m);
        let binary = data.iter().all(|&v| v <= 1);
        GraphCollection { n, m, data, binary, rho }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_binary(&self) -> bool {
        self.binary
    }

    /// Sparsity used at sampling time, when synthetic.
    pub fn rho(&self) -> Option<f64> {
        self.rho
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, l: usize) -> usize {
        (l * self.n + i) * self.n + j
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, l: usize) -> u32 {
        self.data[self.offset(i, j, l)]
    }

    /// Sets the undirected entry `{i, j}` in layer `l`. Diagonal writes are ignored.
    pub fn set(&mut self, i: usize, j: usize, l: usize, value: u32) {
        if i == j {
            return;
        }
        let a = self.offset(i, j, l);
        let b = self.offset(j, i, l);
        self.data[a] = value;
        self.data[b] = value;
        if value > 1 {
            self.binary = false;
        }
    }

    /// Raw row-major slice of layer `l`.
    pub fn layer_slice(&self, l: usize) -> &[u32] {
        let s = self.n * self.n;
        &self.data[l * s..(l + 1) * s]
    }

    pub fn layer(&self, l: usize) -> DMatrix<f64> {
        let n = self.n;
        let s = self.layer_slice(l);
        DMatrix::from_fn(n, n, |i, j| f64::from(s[i * n + j]))
    }

    /// Entrywise sum over the given layers.
    pub fn layer_sum(&self, layers: &[usize]) -> DMatrix<f64> {
        let n = self.n;
        let mut acc = vec![0u64; n * n];
        for &l in layers {
            for (a, &v) in acc.iter_mut().zip(self.layer_slice(l)) {
                *a += u64::from(v);
            }
        }
        DMatrix::from_fn(n, n, |i, j| acc[i * n + j] as f64)
    }

    /// Mean adjacency over all layers.
    pub fn aggregate(&self) -> DMatrix<f64> {
        let all: Vec<usize> = (0..self.m).collect();
        self.layer_sum(&all) / self.m as f64
    }

    /// Sub-collection keeping only the listed layers, in the given order.
    pub fn select_layers(&self, layers: &[usize]) -> GraphCollection {
        let mut data = Vec::with_capacity(self.n * self.n * layers.len());
        for &l in layers {
            data.extend_from_slice(self.layer_slice(l));
        }
        GraphCollection::from_raw(self.n, layers.len(), data, self.rho)
    }

    /// Relabels nodes: node `i` of the result is node `perm[i]` of `self`.
    pub fn permute_nodes(&self, perm: &[usize]) -> GraphCollection {
        let n = self.n;
        let mut out = GraphCollection::zeros(n, self.m);
        out.rho = self.rho;
        for l in 0..self.m {
            for i in 0..n {
                for j in (i + 1)..n {
                    out.set(i, j, l, self.get(perm[i], perm[j], l));
                }
            }
        }
        out
    }

    /// Number of nonzero undirected entries summed with weights.
    pub fn total_weight(&self) -> u64 {
        let mut total = 0u64;
        for l in 0..self.m {
            let s = self.layer_slice(l);
            for i in 0..self.n {
                for j in (i + 1)..self.n {
                    total += u64::from(s[i * self.n + j]);
                }
            }
        }
        total
    }
}

/// Global edge density: mean entry over all node pairs and layers. For
/// count data this is the mean edge weight.
pub fn estimate_density(g: &GraphCollection) -> Result<f64> {
    if g.n() < 2 {
        return Err(Error::InvalidInput(format!("density needs n >= 2, got {}", g.n())));
    }
    if g.m() == 0 {
        return Err(Error::InvalidInput("density needs at least one layer".into()));
    }
    let pairs = (g.n() * (g.n() - 1) / 2) as f64;
    Ok(g.total_weight() as f64 / (g.m() as f64 * pairs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_of_complete_and_empty() {
        let full = GraphCollection::from_fn(4, 3, |_, _, _| 1);
        assert_eq!(estimate_density(&full).unwrap(), 1.0);
        let empty = GraphCollection::zeros(4, 3);
        assert_eq!(estimate_density(&empty).unwrap(), 0.0);
    }

    #[test]
    fn density_hand_count() {
        // n=3, m=2: layer 0 has {1,2}; layer 1 has {1,2},{2,3} (1-indexed).
        let mut g = GraphCollection::zeros(3, 2);
        g.set(0, 1, 0, 1);
        g.set(0, 1, 1, 1);
        g.set(1, 2, 1, 1);
        assert_eq!(estimate_density(&g).unwrap(), 0.5);
    }

    #[test]
    fn density_rejects_single_node() {
        assert!(matches!(
            estimate_density(&GraphCollection::zeros(1, 2)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn from_layers_rejects_asymmetry_and_loops() {
        let mut a = DMatrix::<u32>::zeros(3, 3);
        a[(0, 1)] = 1;
        assert!(GraphCollection::from_layers(&[a.clone()]).is_err());
        a[(1, 0)] = 1;
        assert!(GraphCollection::from_layers(&[a.clone()]).is_ok());
        a[(2, 2)] = 1;
        assert!(GraphCollection::from_layers(&[a]).is_err());
    }

    #[test]
    fn counts_clear_binary_flag() {
        let mut g = GraphCollection::zeros(3, 1);
        assert!(g.is_binary());
        g.set(0, 2, 0, 4);
        assert!(!g.is_binary());
        assert_eq!(g.get(2, 0, 0), 4);
        assert_eq!(estimate_density(&g).unwrap(), 4.0 / 3.0);
    }
}
