//! USVT and neighborhood smoothing on the layer-averaged adjacency.

use multigraphon::baselines::{nbs, usvt, NbsOptions, UsvtOptions};
use multigraphon::model::{sample, MultiGraphonSpec, SampleParams, SamplingMode};
use nalgebra::DMatrix;

fn mse(p: &DMatrix<f64>, truth: &DMatrix<f64>) -> f64 {
    let n = p.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += (p[(i, j)] - truth[(i, j)]).powi(2);
            }
        }
    }
    s / (n * (n - 1)) as f64
}

fn main() -> multigraphon::error::Result<()> {
    let spec = MultiGraphonSpec::f3(0.0);
    let params = SampleParams {
        n: 120,
        m: 50,
        rho: 1.0,
        sigma_cov: 0.0,
        mode: SamplingMode::Replicated,
        seed: 4,
    };
    let (g, latent) = sample(&spec, &params)?;
    let truth = DMatrix::from_fn(120, 120, |i, j| spec.evaluate(latent.x[i], latent.x[j], 0.0));
    let avg = g.aggregate();
    for eta in [1.0, 2.01] {
        let p = usvt(&avg, &UsvtOptions { eta, ..UsvtOptions::averaged(50) })?;
        println!("usvt eta={eta}: mse {:.3e}", mse(&p, &truth));
    }
    println!("nbs: mse {:.3e}", mse(&nbs(&avg, &NbsOptions::default())?, &truth));
    Ok(())
}
