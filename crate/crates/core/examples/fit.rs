//! Full pipeline on cross-sectional data: distances, embedding, kernel
//! smoothing on (x_i, x_j, covariate), then point predictions.

use multigraphon::collection::estimate_density;
use multigraphon::distance::{distance_matrix, DistanceOptions};
use multigraphon::embedding::{embed_1d, EmbedOptions};
use multigraphon::model::{sample, MultiGraphonSpec, SampleParams, SamplingMode};
use multigraphon::smoother::{fit_multigraphon, select_regime, Method, SmootherConfig};

fn main() -> multigraphon::error::Result<()> {
    let spec = MultiGraphonSpec::f1(0.35);
    let params = SampleParams {
        n: 80,
        m: 60,
        rho: spec.default_rho(),
        sigma_cov: 0.1,
        mode: SamplingMode::CrossSection,
        seed: 3,
    };
    let (g, latent) = sample(&spec, &params)?;
    println!("regime: {}", select_regime(g.n(), g.m(), estimate_density(&g)?).name());

    let d = distance_matrix(&g, DistanceOptions::default())?;
    let x = embed_1d(&d, &EmbedOptions { restarts: 4, ..Default::default() })?.positions;
    for method in [Method::NadarayaWatson, Method::LocalLinear] {
        let cfg = SmootherConfig { method, ..Default::default() };
        let fit = fit_multigraphon(&g, &x, latent.observed_netpos(), &cfg)?;
        let (hx, hz) = fit.bandwidths();
        println!("{method:?}: hx = {hx:.4}  hz = {hz:.4}  rho_hat = {:.4}", fit.rho_hat);
        for z in [0.1, 0.5, 0.9] {
            println!("  P(0.8, 0.8; {z}) = {:.4}", fit.predict(0.8, 0.8, z)?);
        }
    }
    Ok(())
}
