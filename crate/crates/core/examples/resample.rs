//! Small-world statistics of networks redrawn from an Erdős–Rényi
//! predictor and from a fitted model.

use multigraphon::model::{sample, MultiGraphonSpec, SampleParams, SamplingMode};
use multigraphon::netstats::{resample_stats, ConstantPredictor, ResampleOptions, Statistic};
use multigraphon::smoother::{fit_multigraphon, oracle_positions_by_rank, SmootherConfig};

fn main() -> multigraphon::error::Result<()> {
    let opts = ResampleOptions { draws: 2000, ..Default::default() };
    let er = resample_stats(&ConstantPredictor { n: 116, p: 0.3 }, 0.5, &opts)?;
    for s in &er.stats {
        println!("ER {:16} mean {:10.4}  [{:.4}, {:.4}]", s.statistic.name(), s.mean, s.lo, s.hi);
    }

    let spec = MultiGraphonSpec::f2(0.5);
    let params = SampleParams {
        n: 50,
        m: 30,
        rho: spec.default_rho(),
        sigma_cov: 0.0,
        mode: SamplingMode::Dynamic,
        seed: 6,
    };
    let (g, latent) = sample(&spec, &params)?;
    let fit = fit_multigraphon(&g, &oracle_positions_by_rank(&latent.x), &latent.z, &SmootherConfig::default())?;
    for z in [0.2, 0.9] {
        let t = resample_stats(&fit, z, &opts)?;
        println!(
            "fit z={z}: density {:.4}  transitivity {:.4}  path length {:.4}",
            t.get(Statistic::Density).mean,
            t.get(Statistic::Transitivity).mean,
            t.get(Statistic::AvgPathLength).mean
        );
    }
    Ok(())
}
