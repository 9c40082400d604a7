mod common;

use common::*;
use multigraphon::collection::GraphCollection;
use multigraphon::distance::{distance_matrix, DistanceOptions};
use multigraphon::netstats::{density, triangles, SimpleGraph};
use multigraphon::stats::spearman;
use proptest::prelude::*;

fn each_config(mut check: impl FnMut(&GraphCollection, &[usize], u64) -> Check) {
    for n in 3..=12 {
        for m in 2..=6 {
            for seed in 0..2u64 {
                let g = random_collection(n, m, seed);
                let perm = random_perm(n, seed);
                if let Err(e) = check(&g, &perm, seed) {
                    panic!("n={n} m={m} seed={seed}: {e}");
                }
            }
        }
    }
}

#[test]
fn sampling_is_deterministic_and_symmetric() {
    each_config(|g, _, seed| check_model(g.n(), g.m(), seed));
}

#[test]
fn distance_matches_direct_evaluation() {
    each_config(|g, perm, _| check_distance(g, perm));
}

#[test]
fn embedding_is_deterministic_and_bounded() {
    each_config(|g, _, seed| check_embedding(g, seed));
}

#[test]
fn smoother_matches_direct_sums() {
    each_config(check_smoother);
}

#[test]
fn baselines_are_equivariant() {
    each_config(|g, perm, _| check_baselines(g, perm));
}

#[test]
fn network_statistics_match_brute_force() {
    each_config(|g, perm, _| check_netstats(g, perm));
}

#[test]
fn resampling_ignores_thread_count() {
    for n in [3, 7, 12] {
        check_resample_threads(n, 5).unwrap();
    }
}

fn small_graph() -> impl Strategy<Value = (usize, Vec<bool>)> {
    (2usize..=12).prop_flat_map(|n| (Just(n), prop::collection::vec(any::<bool>(), n * (n - 1) / 2)))
}

fn build(n: usize, bits: &[bool]) -> SimpleGraph {
    let mut g = SimpleGraph::empty(n);
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if bits[k] {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    g
}

proptest! {
    #[test]
    fn triangle_count_matches((n, bits) in small_graph()) {
        let g = build(n, &bits);
        prop_assert_eq!(triangles(&g), reference_triangles(&g));
        let d = density(&g);
        prop_assert!((0.0..=1.0).contains(&d));
    }

    #[test]
    fn avg_path_matches((n, bits) in small_graph()) {
        let g = build(n, &bits);
        let a = multigraphon::netstats::avg_path_length(&g).ok();
        let b = reference_avg_path(&g);
        prop_assert_eq!(a.is_some(), b.is_some());
        if let (Some(a), Some(b)) = (a, b) {
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!(a >= 1.0);
        }
    }

    #[test]
    fn distance_is_a_nonnegative_symmetric_matrix(n in 3usize..=12, m in 2usize..=6, seed in 0u64..1000) {
        let g = random_collection(n, m, seed);
        let d = distance_matrix(&g, DistanceOptions::default()).unwrap();
        for i in 0..n {
            prop_assert_eq!(d.get(i, i), 0.0);
            for j in 0..n {
                prop_assert!(d.get(i, j) >= 0.0);
                prop_assert_eq!(d.get(i, j), d.get(j, i));
            }
        }
    }

    #[test]
    fn spearman_is_bounded(xs in prop::collection::vec(-10.0f64..10.0, 3..30)) {
        let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
        if let Ok(r) = spearman(&xs, &ys) {
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&r));
        }
        let r = spearman(&xs, &xs);
        if let Ok(r) = r {
            prop_assert!((r - 1.0).abs() < 1e-12);
        }
    }
}
