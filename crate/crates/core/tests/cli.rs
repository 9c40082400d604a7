use std::path::Path;
use std::process::{Command, Output};

use multigraphon::bench::parse_table;
use multigraphon::io::{parse_embedding, parse_matrix, read_edge_list, read_fit_layers};

fn cli(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multigraphon"))
        .args(["--out-dir", dir.to_str().unwrap(), "--seed", "3"])
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = cli(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn end_to_end_workflow() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let p = |name: &str| d.join(name).to_str().unwrap().to_string();
    ok(d, &["simulate", "--kind", "f2", "--beta", "0.5", "--n", "24", "--m", "12", "--mode", "cross_section", "--sigma", "0.1"]);
    let g = read_edge_list(&d.join("edges.tsv"), Some(24), Some(12)).unwrap();
    assert_eq!((g.n(), g.m()), (24, 12));

    let (edges, cov, emb) = (p("edges.tsv"), p("covariates.tsv"), p("embedding.tsv"));
    let data = ["--edges", edges.as_str(), "--nodes", "24", "--layers", "12"];
    let inputs = ["--covariates", cov.as_str(), "--positions", emb.as_str()];
    ok(d, &[&["distance"][..], &data].concat());
    let dist = parse_matrix(&std::fs::read_to_string(d.join("distance.txt")).unwrap()).unwrap();
    assert_eq!(dist.nrows(), 24);

    ok(d, &["embed", "--distance", &p("distance.txt"), "--restarts", "2"]);
    let pos = parse_embedding(&std::fs::read_to_string(d.join("embedding.tsv")).unwrap()).unwrap();
    assert_eq!(pos.len(), 24);

    let fit_args = [&["fit"][..], &data, &inputs].concat();
    ok(d, &fit_args);
    let layers = read_fit_layers(&d.join("fit").join("manifest.tsv")).unwrap();
    assert_eq!(layers.len(), 12);
    assert!(layers.iter().all(|(_, p)| p.iter().all(|v| (0.0..=1.0).contains(v))));

    let resample = [&["resample", "--z", "0.2,0.8", "--draws", "50"][..], &data, &inputs].concat();
    ok(d, &resample);
    let table = std::fs::read_to_string(d.join("resample.tsv")).unwrap();
    assert_eq!(table.lines().count(), 1 + 2 * 4);

    let ci = [&["ci", "--pair", "1,2", "--reps", "20"][..], &data, &inputs].concat();
    ok(d, &ci);
    assert!(d.join("band.tsv").exists());
}

#[test]
fn bench_writes_a_report() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(d, &["bench", "--kind", "f2", "--beta", "0", "--n", "30", "--m", "10", "--reps", "2", "--arms", "oracle_rep,usvt,nbs", "--with-paper-context", "--heatmaps"]);
    let recs = parse_table(&std::fs::read_to_string(d.join("records.tsv")).unwrap()).unwrap();
    assert_eq!(recs.len(), 3);
    assert!(d.join("heatmaps").join("truth_layer000.pgm").exists());
}

#[test]
fn config_file_supplies_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let cfg = d.join("run.cfg");
    std::fs::write(&cfg, "kind=f1\nbeta=0.35\nn=10\nm=3\n").unwrap();
    ok(d, &["--config", cfg.to_str().unwrap(), "simulate"]);
    assert!(read_edge_list(&d.join("edges.tsv"), Some(10), Some(3)).is_ok());
}

#[test]
fn validation_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let out = cli(d, &["simulate", "--kind", "f2", "--n", "10", "--m", "2", "--rho", "1.0"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let out = cli(d, &["bench", "--kind", "f2", "--mode", "dynamic", "--arms", "oracle2", "--n", "10", "--m", "4"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(d.join("bad.tsv"), "1\t1\t1\t1\n").unwrap();
    let out = cli(d, &["distance", "--edges", d.join("bad.tsv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
