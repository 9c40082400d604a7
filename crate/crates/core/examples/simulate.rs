//! Sample a dynamic collection from a built-in kernel and print a few
//! summaries plus the head of its edge list.

use multigraphon::collection::estimate_density;
use multigraphon::io::format_edge_list;
use multigraphon::model::{sample, MultiGraphonSpec, SampleParams, SamplingMode};

fn main() -> multigraphon::error::Result<()> {
    let spec = MultiGraphonSpec::f2(0.5);
    let params = SampleParams {
        n: 60,
        m: 20,
        rho: spec.default_rho(),
        sigma_cov: 0.0,
        mode: SamplingMode::Dynamic,
        seed: 7,
    };
    let (g, latent) = sample(&spec, &params)?;
    println!("kernel {} beta {}  sup f = {:.4}  rho = {:.4}", spec.kind_name(), spec.beta(), spec.sup(), params.rho);
    println!("n = {}  m = {}  density = {:.4}", g.n(), g.m(), estimate_density(&g)?);
    println!("first z: {:?}", &latent.z[..3]);
    for line in format_edge_list(&g).lines().take(6) {
        println!("{line}");
    }
    Ok(())
}
