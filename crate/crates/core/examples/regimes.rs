//! Regime selection and the two alternative fits: one regression per node
//! pair when layers are plentiful, per-network smoothing when they are few.

use multigraphon::collection::GraphCollection;
use multigraphon::rng;
use multigraphon::smoother::{fit_per_edge, fit_per_network, select_regime, SmootherConfig};
use rand::Rng;

fn main() -> multigraphon::error::Result<()> {
    for (n, m, rho) in [(10, 200, 0.5), (1000, 3, 0.002), (150, 150, 0.25)] {
        println!("n={n} m={m} rho={rho}: {}", select_regime(n, m, rho).name());
    }

    // 4 nodes, 300 layers, every pair's probability rises linearly in z
    let m = 300;
    let z: Vec<f64> = (1..=m).map(|l| l as f64 / m as f64).collect();
    let mut r = rng::stream(5, "example", 0);
    let g = GraphCollection::from_fn(4, m, |_, _, l| u32::from(r.random::<f64>() < z[l]));
    let fit = fit_per_edge(&g, &z, &SmootherConfig::default().with_bandwidths(1.0, 0.15))?;
    for zq in [0.2, 0.5, 0.8] {
        println!("per-edge P[1][2] at z={zq}: {:.3}", fit.probabilities_at(zq)?[(0, 1)]);
    }

    // two blocks whose cross-block density grows with z
    let z: Vec<f64> = (1..=8).map(|l| l as f64 / 8.0).collect();
    let g = GraphCollection::from_fn(30, 8, |i, j, l| {
        let p = if (i < 15) == (j < 15) { 0.8 } else { 0.1 + 0.6 * z[l] };
        u32::from(r.random::<f64>() < p)
    });
    let fit = fit_per_network(&g, &z, &SmootherConfig::default().with_bandwidths(1.0, 0.3))?;
    for zq in [0.2, 0.5, 0.8] {
        let p = fit.probabilities_at(zq)?;
        println!("per-network z={zq}: within {:.3}  across {:.3}", p[(0, 1)], p[(0, 20)]);
    }
    Ok(())
}
