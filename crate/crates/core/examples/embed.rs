//! Recover node order from estimated distances with the 1-D ordinal
//! embedding.

use multigraphon::distance::{distance_matrix, DistanceOptions};
use multigraphon::embedding::{aligned_max_error, embed_1d, EmbedOptions};
use multigraphon::model::{sample, MultiGraphonSpec, SampleParams, SamplingMode};
use multigraphon::stats::spearman;

fn main() -> multigraphon::error::Result<()> {
    let spec = MultiGraphonSpec::f2(0.0);
    let params = SampleParams {
        n: 80,
        m: 80,
        rho: spec.default_rho(),
        sigma_cov: 0.0,
        mode: SamplingMode::Replicated,
        seed: 2,
    };
    let (g, latent) = sample(&spec, &params)?;
    let d = distance_matrix(&g, DistanceOptions::default())?;
    let e = embed_1d(&d, &EmbedOptions { restarts: 4, ..Default::default() })?;
    println!("constraints {}  stress {:.3e}  violated {:.4}", e.constraints, e.stress, e.violated_fraction);
    println!("|spearman| = {:.4}", spearman(&e.positions, &latent.x)?.abs());
    println!("aligned max error = {:.4}", aligned_max_error(&e.positions, &latent.x));
    Ok(())
}
