use multigraphon::bench::{emit_report, paper_context, parse_table, run_scenario, Arm, ReportFormat, Scenario};
use multigraphon::error::Error;
use multigraphon::model::{sample, MultiGraphonSpec, SampleParams, SamplingMode};
use multigraphon::stats;

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn heterogeneous_records_have_split_fields() {
    let s = Scenario::new("f3_dyn", MultiGraphonSpec::f3(0.6), 150, 150, SamplingMode::Dynamic).with_arms(&[Arm::Proposed, Arm::Nbs]);
    let out = run_scenario(&s).unwrap();
    assert_eq!(out.records.len(), 2);
    for r in &out.records {
        assert_eq!(r.scenario, "f3_dyn");
        assert!(r.mse_low_z.is_finite() && r.mse_high_z.is_finite() && r.mse_overall.is_finite());
        assert!(r.mse_low_z != r.mse_high_z);
        let (lo, hi) = (r.mse_low_z.min(r.mse_high_z), r.mse_low_z.max(r.mse_high_z));
        assert!(lo <= r.mse_overall && r.mse_overall <= hi);
    }
}

#[test]
fn replicated_records_do_not_split() {
    let s = Scenario::new("f1_rep", MultiGraphonSpec::f1(0.0), 60, 60, SamplingMode::Replicated)
        .with_arms(&[Arm::OracleRep])
        .with_replications(2);
    let r = &run_scenario(&s).unwrap().records[0];
    assert_eq!(r.mse_low_z, r.mse_overall);
    assert_eq!(r.mse_high_z, r.mse_overall);
}

#[test]
fn f1_pipeline_mse_band() {
    let s = Scenario::new("f1_rep", MultiGraphonSpec::f1(0.0), 150, 150, SamplingMode::Replicated)
        .with_arms(&[Arm::Proposed])
        .with_replications(3);
    let mse = run_scenario(&s).unwrap().records[0].mse_overall;
    assert!((0.3 * 14.30..=3.0 * 14.30).contains(&mse), "{mse}e-3");
}

#[test]
fn oracle_positions_beat_embedded_positions() {
    let s = Scenario::new("f2_rep", MultiGraphonSpec::f2(0.0), 150, 150, SamplingMode::Replicated).with_arms(&[Arm::Oracle1, Arm::Proposed]);
    let out = run_scenario(&s).unwrap();
    let (oracle, proposed) = (out.records[0].mse_overall, out.records[1].mse_overall);
    assert!(oracle <= proposed, "oracle {oracle} vs proposed {proposed}");
}

#[test]
fn reports_do_not_depend_on_threads() {
    let s = Scenario::new("f2_small", MultiGraphonSpec::f2(0.5), 30, 12, SamplingMode::CrossSection)
        .with_sigma(0.28)
        .with_arms(&[Arm::Proposed, Arm::Oracle1, Arm::Oracle2, Arm::Usvt, Arm::Nbs, Arm::PerEdge, Arm::PerNetwork])
        .with_replications(3)
        .with_seed(9);
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for threads in [1, 4] {
        let out = with_threads(threads, || run_scenario(&s)).unwrap();
        let sub = dir.path().join(threads.to_string());
        let path = emit_report(&out.records, ReportFormat::DelimitedTable, &sub, false).unwrap();
        texts.push(std::fs::read_to_string(path).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    let parsed = parse_table(&texts[0]).unwrap();
    assert_eq!(parsed.len(), 7);
    assert!(parsed.iter().all(|r| r.runtime.is_none()));
}

#[test]
fn arm_conflicts_are_rejected() {
    let s = Scenario::new("bad", MultiGraphonSpec::f2(0.5), 20, 10, SamplingMode::Dynamic).with_arms(&[Arm::Oracle2]);
    assert!(matches!(run_scenario(&s), Err(Error::ScenarioConflict(_))));
    let s = Scenario::new("bad", MultiGraphonSpec::f2(0.0), 20, 10, SamplingMode::Replicated).with_arms(&[Arm::PerEdge]);
    assert!(matches!(run_scenario(&s), Err(Error::ScenarioConflict(_))));
}

#[test]
fn paper_context_is_labeled() {
    let recs = paper_context("f2_rep", "f2", false, 150, 150);
    assert_eq!(recs.len(), 2);
    assert!(recs.iter().all(|r| r.source == "paper"));
    assert_eq!(recs[0].mse_overall, 6.00);
    assert!(paper_context("x", "f2", false, 75, 75).is_empty());
}

/// Jarque-Bera statistic of a sample.
fn jarque_bera(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mu = stats::mean(xs);
    let m2 = xs.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / n;
    let m3 = xs.iter().map(|x| (x - mu).powi(3)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - mu).powi(4)).sum::<f64>() / n;
    let skew = m3 / m2.powf(1.5);
    let kurt = m4 / (m2 * m2);
    n / 6.0 * (skew * skew + (kurt - 3.0).powi(2) / 4.0)
}

#[test]
fn averaged_edge_functional_is_normal() {
    let spec = MultiGraphonSpec::f2(0.5);
    let rho = spec.default_rho();
    let values: Vec<f64> = (0..200u64)
        .map(|seed| {
            let params = SampleParams {
                n: 80,
                m: 80,
                rho,
                sigma_cov: 0.0,
                mode: SamplingMode::Dynamic,
                seed,
            };
            let (g, latent) = sample(&spec, &params).unwrap();
            let (mut edges, mut f, mut count) = (0.0, 0.0, 0.0);
            for (l, &z) in latent.z.iter().enumerate() {
                for i in 0..80 {
                    for j in (i + 1)..80 {
                        edges += f64::from(g.get(i, j, l));
                        f += spec.evaluate(latent.x[i], latent.x[j], z);
                        count += 1.0;
                    }
                }
            }
            (edges - rho * f) / count
        })
        .collect();
    let sd = stats::std_dev(&values);
    let mu = stats::mean(&values);
    let standardized: Vec<f64> = values.iter().map(|v| (v - mu) / sd).collect();
    let jb = jarque_bera(&standardized);
    // chi-square with 2 degrees of freedom, 1% level
    assert!(jb < 9.21, "Jarque-Bera {jb}");
}
