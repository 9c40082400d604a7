#![allow(dead_code)]

use multigraphon::baselines::{nbs, usvt, NbsOptions, UsvtOptions};
use multigraphon::collection::{estimate_density, GraphCollection};
use multigraphon::distance::{distance_matrix, DistanceOptions};
use multigraphon::embedding::{embed_1d, EmbedOptions};
use multigraphon::model::{sample, MultiGraphonSpec, SampleParams, SamplingMode};
use multigraphon::netstats::{avg_path_length, resample_stats, transitivity, triangles, ConstantPredictor, ResampleOptions, SimpleGraph};
use multigraphon::rng;
use multigraphon::smoother::{fit_multigraphon, fit_per_edge, fit_replicated, KernelKind, Method, SmootherConfig};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

pub type Check = std::result::Result<(), String>;

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Binary collection with pair-specific edge probabilities.
pub fn random_collection(n: usize, m: usize, seed: u64) -> GraphCollection {
    let mut r = rng::stream(seed, "test-collection", (n * 100 + m) as u64);
    let p: Vec<f64> = (0..n * n).map(|_| r.random_range(0.15..0.85)).collect();
    let mut g = GraphCollection::from_fn(n, m, |i, j, _| u32::from(r.random::<f64>() < p[i * n + j]));
    if estimate_density(&g).unwrap() == 0.0 {
        g.set(0, 1, 0, 1);
    }
    g
}

pub fn random_perm(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng::stream(seed, "test-perm", n as u64));
    perm
}

pub fn random_points(k: usize, seed: u64, tag: &str) -> Vec<f64> {
    let mut r = rng::stream(seed, tag, k as u64);
    (0..k).map(|_| r.random::<f64>()).collect()
}

fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn permuted(m: &DMatrix<f64>, perm: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(perm[i], perm[j])])
}

fn check_prob_matrix(p: &DMatrix<f64>, what: &str) -> Check {
    let n = p.nrows();
    for i in 0..n {
        for j in 0..n {
            ensure((0.0..=1.0).contains(&p[(i, j)]), || format!("{what}: entry ({i},{j}) = {} outside [0,1]", p[(i, j)]))?;
            ensure(p[(i, j)] == p[(j, i)], || format!("{what}: asymmetric at ({i},{j})"))?;
        }
    }
    Ok(())
}

/// Direct evaluation of the split-half distance estimate.
pub fn reference_distance(g: &GraphCollection) -> DMatrix<f64> {
    let (n, m) = (g.n(), g.m());
    let half = m / 2;
    let mut total = 0.0;
    for l in 0..m {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    total += f64::from(g.get(i, j, l));
                }
            }
        }
    }
    let rho = total / (m * n * (n - 1)) as f64;
    let avg = |i: usize, j: usize, layers: std::ops::Range<usize>| -> f64 {
        let k = layers.len() as f64;
        layers.map(|l| f64::from(g.get(i, j, l))).sum::<f64>() / k
    };
    let r = |i: usize, j: usize| -> f64 {
        let mut sum = 0.0;
        let mut count = 0;
        for k in 0..n {
            if k != i && k != j {
                sum += avg(i, k, 0..half) * avg(k, j, half..m);
                count += 1;
            }
        }
        sum / count as f64
    };
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            ((r(i, i) + r(j, j) - r(i, j) - r(j, i)) / (rho * rho)).max(0.0)
        }
    })
}

/// Gaussian-kernel Nadaraya-Watson estimate at every `(x_i, x_j, z_l)`,
/// summing over design triples with distinct nodes, then symmetrized.
pub fn reference_nw(layers: &[DMatrix<f64>], x: &[f64], z: &[f64], hx: f64, hz: f64) -> Vec<DMatrix<f64>> {
    let k = |u: f64| (-0.5 * u * u).exp();
    let n = x.len();
    let raw: Vec<DMatrix<f64>> = z
        .iter()
        .map(|&zq| {
            DMatrix::from_fn(n, n, |i, j| {
                let (mut num, mut den) = (0.0, 0.0);
                for (l, layer) in layers.iter().enumerate() {
                    let wz = k((z[l] - zq) / hz);
                    for a in 0..n {
                        for b in 0..n {
                            if a != b {
                                let w = k((x[a] - x[i]) / hx) * k((x[b] - x[j]) / hx) * wz;
                                num += w * layer[(a, b)];
                                den += w;
                            }
                        }
                    }
                }
                num / den
            })
        })
        .collect();
    raw.iter()
        .map(|p| DMatrix::from_fn(n, n, |i, j| ((p[(i, j)] + p[(j, i)]) / 2.0).clamp(0.0, 1.0)))
        .collect()
}

pub fn reference_triangles(g: &SimpleGraph) -> u64 {
    let n = g.n();
    let mut t = 0;
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) {
                    t += 1;
                }
            }
        }
    }
    t
}

pub fn reference_transitivity(g: &SimpleGraph) -> f64 {
    let paths: usize = (0..g.n()).map(|v| g.degree(v) * g.degree(v).saturating_sub(1) / 2).sum();
    if paths == 0 {
        0.0
    } else {
        3.0 * reference_triangles(g) as f64 / paths as f64
    }
}

/// Floyd-Warshall over the largest component (lowest label on ties).
pub fn reference_avg_path(g: &SimpleGraph) -> Option<f64> {
    let n = g.n();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if i != j && g.has_edge(i, j) {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let mut best: Vec<usize> = Vec::new();
    for s in 0..n {
        let comp: Vec<usize> = (0..n).filter(|&v| d[s][v] < inf).collect();
        if comp[0] == s && comp.len() > best.len() {
            best = comp;
        }
    }
    if best.len() < 2 {
        return None;
    }
    let total: usize = best.iter().flat_map(|&a| best.iter().map(move |&b| (a, b))).map(|(a, b)| d[a][b]).sum();
    Some(total as f64 / (best.len() * (best.len() - 1)) as f64)
}

fn layer_graph(g: &GraphCollection, l: usize) -> SimpleGraph {
    SimpleGraph::from_adjacency(&g.layer(l)).expect("binary layer")
}

pub fn check_model(n: usize, m: usize, seed: u64) -> Check {
    let spec = MultiGraphonSpec::f2(0.5);
    let params = SampleParams {
        n,
        m,
        rho: spec.default_rho(),
        sigma_cov: 0.1,
        mode: SamplingMode::CrossSection,
        seed,
    };
    let (a, la) = sample(&spec, &params).map_err(|e| e.to_string())?;
    let (b, lb) = sample(&spec, &params).map_err(|e| e.to_string())?;
    ensure(a == b && la == lb, || format!("sampling not deterministic at n={n} m={m}"))?;
    for l in 0..m {
        for i in 0..n {
            ensure(a.get(i, i, l) == 0, || "sampled self-loop".into())?;
            for j in 0..n {
                ensure(a.get(i, j, l) == a.get(j, i, l) && a.get(i, j, l) <= 1, || "sampled layer not symmetric binary".into())?;
            }
        }
    }
    for &(x, y, z) in &[(0.1, 0.7, 0.3), (0.9, 0.2, 0.8)] {
        for s in [MultiGraphonSpec::f1(0.5), MultiGraphonSpec::f2(0.5), MultiGraphonSpec::f3(0.5)] {
            ensure(s.evaluate(x, y, z) == s.evaluate(y, x, z), || format!("{} not symmetric", s.kind_name()))?;
        }
    }
    Ok(())
}

pub fn check_distance(g: &GraphCollection, perm: &[usize]) -> Check {
    let d = distance_matrix(g, DistanceOptions::default()).map_err(|e| e.to_string())?;
    let reference = reference_distance(g);
    let n = g.n();
    for i in 0..n {
        ensure(d.get(i, i) == 0.0, || format!("distance diagonal nonzero at {i}"))?;
        for j in 0..n {
            let v = d.get(i, j);
            ensure(v >= 0.0 && v == d.get(j, i), || format!("distance ({i},{j}) negative or asymmetric"))?;
            let r = reference[(i, j)];
            ensure((v - r).abs() <= 1e-10 * r.abs().max(1.0), || format!("distance ({i},{j}) = {v}, direct evaluation {r}"))?;
        }
    }
    let again = distance_matrix(g, DistanceOptions::default()).map_err(|e| e.to_string())?;
    ensure(again == d, || "distance not deterministic".into())?;
    let dp = distance_matrix(&g.permute_nodes(perm), DistanceOptions::default()).map_err(|e| e.to_string())?;
    ensure(dp.values == permuted(&d.values, perm), || "distance not permutation equivariant".into())?;
    Ok(())
}

pub fn check_embedding(g: &GraphCollection, seed: u64) -> Check {
    let d = distance_matrix(g, DistanceOptions::default()).map_err(|e| e.to_string())?;
    let opts = EmbedOptions {
        restarts: 2,
        max_iter: 300,
        seed,
        ..Default::default()
    };
    let a = embed_1d(&d, &opts).map_err(|e| e.to_string())?;
    let b = embed_1d(&d, &opts).map_err(|e| e.to_string())?;
    ensure(a == b, || "embedding not deterministic".into())?;
    let n = g.n() as f64;
    ensure(a.positions.len() == g.n(), || "embedding length".into())?;
    ensure(
        a.positions.iter().all(|&x| x >= 1.0 / (n + 1.0) - 1e-12 && x <= n / (n + 1.0) + 1e-12),
        || format!("embedding outside range: {:?}", a.positions),
    )
}

pub fn check_smoother(g: &GraphCollection, perm: &[usize], seed: u64) -> Check {
    let (n, m) = (g.n(), g.m());
    let x = random_points(n, seed, "test-x");
    let z = random_points(m, seed, "test-z");
    let layers: Vec<DMatrix<f64>> = (0..m).map(|l| g.layer(l)).collect();
    let (hx, hz) = (0.3, 0.4);
    let nw = SmootherConfig::default().with_bandwidths(hx, hz).with_kernel(KernelKind::Gaussian);
    let fit = fit_multigraphon(g, &x, &z, &nw).map_err(|e| e.to_string())?;
    let reference = reference_nw(&layers, &x, &z, hx, hz);
    for l in 0..m {
        check_prob_matrix(&fit.p_hat[l], "multilayer fit")?;
        let err = max_abs_diff(&fit.p_hat[l], &reference[l]);
        ensure(err < 1e-10, || format!("multilayer fit differs from direct sum by {err} at n={n} m={m}"))?;
    }
    let again = fit_multigraphon(g, &x, &z, &nw).map_err(|e| e.to_string())?;
    ensure(again.p_hat == fit.p_hat, || "fit not deterministic".into())?;

    let px: Vec<f64> = perm.iter().map(|&k| x[k]).collect();
    let gp = g.permute_nodes(perm);
    for method in [Method::NadarayaWatson, Method::LocalLinear] {
        let mut cfg = SmootherConfig::default().with_bandwidths(0.5, 0.6);
        cfg.method = method;
        let a = fit_multigraphon(g, &x, &z, &cfg).map_err(|e| e.to_string())?;
        let b = fit_multigraphon(&gp, &px, &z, &cfg).map_err(|e| e.to_string())?;
        for l in 0..m {
            check_prob_matrix(&a.p_hat[l], "fit")?;
            let err = max_abs_diff(&b.p_hat[l], &permuted(&a.p_hat[l], perm));
            ensure(err < 1e-9, || format!("{method:?} fit not permutation equivariant ({err})"))?;
        }
    }

    let rep = fit_replicated(g, &x, &nw).map_err(|e| e.to_string())?;
    ensure(rep.p_hat.iter().all(|p| *p == rep.p_hat[0]), || "replicated fit varies across layers".into())?;
    check_prob_matrix(&rep.p_hat[0], "replicated fit")?;

    let pe = fit_per_edge(g, &z, &nw).map_err(|e| e.to_string())?;
    let k = |u: f64| (-0.5 * u * u).exp();
    for l in 0..m {
        check_prob_matrix(&pe.p_hat[l], "per-edge fit")?;
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j {
                    0.0
                } else {
                    let w: Vec<f64> = z.iter().map(|&zk| k((zk - z[l]) / hz)).collect();
                    w.iter().zip(&layers).map(|(w, a)| w * a[(i, j)]).sum::<f64>() / w.iter().sum::<f64>()
                };
                ensure((pe.p_hat[l][(i, j)] - expected).abs() < 1e-10, || format!("per-edge ({i},{j},{l}) mismatch"))?;
            }
        }
    }
    Ok(())
}

pub fn check_baselines(g: &GraphCollection, perm: &[usize]) -> Check {
    let a = g.aggregate();
    let ap = g.permute_nodes(perm).aggregate();
    let opts = UsvtOptions::averaged(g.m());
    let u = usvt(&a, &opts).map_err(|e| e.to_string())?;
    let up = usvt(&ap, &opts).map_err(|e| e.to_string())?;
    check_prob_matrix(&u, "usvt")?;
    let err = max_abs_diff(&up, &permuted(&u, perm));
    ensure(err < 1e-8, || format!("usvt not permutation equivariant ({err})"))?;
    ensure(usvt(&a, &opts).map_err(|e| e.to_string())? == u, || "usvt not deterministic".into())?;

    let layer = g.layer(0);
    let s = nbs(&layer, &NbsOptions::default()).map_err(|e| e.to_string())?;
    let sp = nbs(&g.permute_nodes(perm).layer(0), &NbsOptions::default()).map_err(|e| e.to_string())?;
    check_prob_matrix(&s, "nbs")?;
    ensure(sp == permuted(&s, perm), || "nbs not permutation equivariant".into())
}

pub fn check_netstats(g: &GraphCollection, perm: &[usize]) -> Check {
    for l in 0..g.m() {
        let s = layer_graph(g, l);
        ensure(triangles(&s) == reference_triangles(&s), || "triangle count mismatch".into())?;
        ensure((transitivity(&s) - reference_transitivity(&s)).abs() < 1e-12, || "transitivity mismatch".into())?;
        let apl = avg_path_length(&s).ok();
        match (apl, reference_avg_path(&s)) {
            (None, None) => {}
            (Some(a), Some(b)) => ensure((a - b).abs() < 1e-12, || format!("path length {a} vs {b}"))?,
            (a, b) => return Err(format!("path length defined mismatch: {a:?} vs {b:?}")),
        }
        let r = s.relabel(perm);
        ensure(triangles(&r) == triangles(&s), || "triangles not relabel invariant".into())?;
        ensure(r.edge_count() == s.edge_count(), || "edge count not relabel invariant".into())?;
        ensure((transitivity(&r) - transitivity(&s)).abs() < 1e-12, || "transitivity not relabel invariant".into())?;
    }
    Ok(())
}

pub fn check_resample_threads(n: usize, seed: u64) -> Check {
    let model = ConstantPredictor { n, p: 0.4 };
    let opts = ResampleOptions { draws: 40, level: 0.9, seed };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool")
            .install(|| resample_stats(&model, 0.5, &opts))
            .map_err(|e| e.to_string())
    };
    let a = run(1)?;
    let b = run(3)?;
    ensure(format!("{a:?}") == format!("{b:?}"), || "resampling depends on thread count".into())
}

/// Every invariant over `3 <= n <= 12`, `2 <= m <= 6` and two seeds.
/// Returns the number of configurations checked.
pub fn run_invariant_suite() -> std::result::Result<usize, String> {
    let mut count = 0;
    for n in 3..=12 {
        for m in 2..=6 {
            for seed in 0..2u64 {
                let g = random_collection(n, m, seed);
                let perm = random_perm(n, seed);
                let tag = |e: String| format!("n={n} m={m} seed={seed}: {e}");
                check_model(n, m, seed).map_err(tag)?;
                check_distance(&g, &perm).map_err(tag)?;
                check_embedding(&g, seed).map_err(tag)?;
                check_smoother(&g, &perm, seed).map_err(tag)?;
                check_baselines(&g, &perm).map_err(tag)?;
                check_netstats(&g, &perm).map_err(tag)?;
                count += 1;
            }
        }
        check_resample_threads(n, n as u64).map_err(|e| format!("n={n}: {e}"))?;
    }
    Ok(count)
}
