use std::collections::HashMap;

use multigraphon::collection::GraphCollection;
use multigraphon::distance::{distance_matrix, DistanceOptions};
use multigraphon::model::{true_distance, MultiGraphonSpec, DEFAULT_QUAD_POINTS};
use multigraphon::smoother::{fit_multigraphon, select_regime, Method, Regime, SmootherConfig};
use nalgebra::DMatrix;

fn values() -> HashMap<String, f64> {
    include_str!("golden/values.txt")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let (k, v) = l.split_once('=').expect("key=value");
            (k.to_string(), v.parse().expect("number"))
        })
        .collect()
}

/// `(method, layer) -> matrix` blocks of the smoother golden file.
fn smoother_blocks() -> HashMap<(String, usize), DMatrix<f64>> {
    let mut out = HashMap::new();
    let mut lines = include_str!("golden/smoother_small.txt").lines();
    while let Some(header) = lines.next() {
        let parts: Vec<&str> = header.split_whitespace().collect();
        let rows: Vec<f64> = (0..5)
            .flat_map(|_| lines.next().unwrap().split_whitespace().map(|v| v.parse::<f64>().unwrap()).collect::<Vec<_>>())
            .collect();
        out.insert((parts[0].to_string(), parts[2].parse().unwrap()), DMatrix::from_row_slice(5, 5, &rows));
    }
    out
}

#[test]
fn true_distance_matches_independent_integration() {
    let v = values();
    let f2 = true_distance(&MultiGraphonSpec::f2(0.0), 0.0, 1.0, DEFAULT_QUAD_POINTS).unwrap();
    assert!((f2 - v["f2_beta0_distance_0_1_analytic"]).abs() < 1e-9, "{f2}");
    assert!((f2 - v["f2_beta0_distance_0_1_midpoint2000"]).abs() < 1e-7, "{f2}");
    let f1 = true_distance(&MultiGraphonSpec::f1(0.0), 0.1, 0.9, DEFAULT_QUAD_POINTS).unwrap();
    assert!((f1 - v["f1_beta0_distance_01_09"]).abs() < 1e-9, "{f1}");
}

#[test]
fn two_block_distances() {
    let v = values();
    let g = GraphCollection::from_fn(5, 2, |i, j, _| u32::from((i < 3) == (j < 3)));
    let d = distance_matrix(&g, DistanceOptions::default()).unwrap();
    assert!((d.get(0, 1) - v["two_block_d_0_1"]).abs() < 1e-9);
    assert!((d.get(0, 3) - v["two_block_d_0_3"]).abs() < 1e-9);
    assert!((d.get(3, 4) - v["two_block_d_3_4"]).abs() < 1e-9);
}

#[test]
fn regime_thresholds() {
    let v = values();
    let t = v["regime_threshold_n1000_rho0002"];
    assert_eq!(select_regime(1000, t.floor() as usize, 0.002), Regime::PerNetwork);
    assert_eq!(select_regime(1000, t.ceil() as usize, 0.002), Regime::Standard);
    let t = v["regime_threshold_n150_rho025"];
    assert!(t < 1.0);
    assert_eq!(select_regime(150, 1, 0.25), Regime::Standard);
}

#[test]
fn small_fit_matches_reference_regression() {
    let blocks = smoother_blocks();
    let g = GraphCollection::from_fn(5, 4, |i, j, l| u32::from(((i + 1) * (j + 1) + l) % 3 == 0));
    let pos = [0.1, 0.35, 0.5, 0.72, 0.9];
    let z = [0.2, 0.4, 0.6, 0.8];
    for (name, method) in [("nw", Method::NadarayaWatson), ("ll", Method::LocalLinear)] {
        let mut cfg = SmootherConfig::default().with_bandwidths(0.6, 0.7);
        cfg.method = method;
        let fit = fit_multigraphon(&g, &pos, &z, &cfg).unwrap();
        for l in 0..4 {
            let expected = &blocks[&(name.to_string(), l)];
            for i in 0..5 {
                for j in 0..5 {
                    if i != j {
                        let got = fit.p_hat[l][(i, j)];
                        assert!((got - expected[(i, j)]).abs() < 1e-9, "{name} layer {l} ({i},{j}): {got} vs {}", expected[(i, j)]);
                    }
                }
            }
        }
    }
}
