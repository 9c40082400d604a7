//! Split-half distance estimates: the two-block hand example and agreement
//! with the exact kernel distance on a sampled collection.

use multigraphon::collection::GraphCollection;
use multigraphon::distance::{distance_matrix, DistanceOptions};
use multigraphon::model::{sample, true_distance_matrix, MultiGraphonSpec, SampleParams, SamplingMode, DEFAULT_QUAD_POINTS};

fn main() -> multigraphon::error::Result<()> {
    // blocks {1,2,3} and {4,5}, within-block edges only
    let g = GraphCollection::from_fn(5, 2, |i, j, _| u32::from((i < 3) == (j < 3)));
    let d = distance_matrix(&g, DistanceOptions::default())?;
    println!("two-block: D[1][2] = {:.5}  D[1][4] = {:.5}", d.get(0, 1), d.get(0, 3));

    let spec = MultiGraphonSpec::f2(0.0);
    let params = SampleParams {
        n: 100,
        m: 100,
        rho: spec.default_rho(),
        sigma_cov: 0.0,
        mode: SamplingMode::Replicated,
        seed: 1,
    };
    let (g, latent) = sample(&spec, &params)?;
    let est = distance_matrix(&g, DistanceOptions::default())?;
    let truth = true_distance_matrix(&spec, &latent.x, DEFAULT_QUAD_POINTS)?;
    let mut total = 0.0;
    for i in 0..100 {
        for j in (i + 1)..100 {
            total += (est.get(i, j) - truth[(i, j)]).abs();
        }
    }
    println!("f2: mean |D - d| over pairs = {:.4}", total / (100.0 * 99.0 / 2.0));
    Ok(())
}
