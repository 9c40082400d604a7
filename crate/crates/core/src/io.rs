//! Plain-text readers and writers for specs, network data and results.
//!
//! Every format is line oriented, whitespace (or comma) delimited and
//! accepts `#` comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;

use crate::collection::GraphCollection;
use crate::error::{Error, Result};
use crate::model::{GridKernel, MultiGraphonSpec};
use crate::netstats::ResampleSummary;
use crate::smoother::{BootstrapBand, FitResult};

/// Non-empty, non-comment lines with their 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn tokens(line: &str) -> Vec<&str> {
    line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect()
}

fn num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse::<T>()
        .map_err(|_| Error::parse(format!("line {line}"), format!("{what} '{tok}' is not a valid number")))
}

/// Flat `key=value` configuration; later keys override earlier ones.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (line, content) in data_lines(text) {
        let (k, v) = content
            .split_once('=')
            .ok_or_else(|| Error::parse(format!("line {line}"), format!("expected key=value, got '{content}'")))?;
        let key = k.trim();
        if key.is_empty() {
            return Err(Error::parse(format!("line {line}"), "empty key"));
        }
        out.insert(key.to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Grid value file: header `nx ny nz`, then `nx*ny*nz` values with `x`
/// varying fastest, then `y`, then `z`.
pub fn parse_grid_values(text: &str) -> Result<GridKernel> {
    let mut lines = data_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse("line 1", "missing grid header"))?;
    let dims: Vec<usize> = tokens(header)
        .iter()
        .map(|t| num::<usize>(t, hline, "grid dimension"))
        .collect::<Result<_>>()?;
    if dims.len() != 3 {
        return Err(Error::parse(format!("line {hline}"), "grid header needs three integers nx ny nz"));
    }
    if dims[0] != dims[1] {
        return Err(Error::InvalidSpec(format!("grid must be square in (x, y), got {} x {}", dims[0], dims[1])));
    }
    let mut values = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
    for (line, content) in lines {
        for t in tokens(content) {
            values.push(num::<f64>(t, line, "grid value")?);
        }
    }
    GridKernel::from_full(dims[0], dims[2], &values)
}

pub fn format_grid_values(grid: &GridKernel) -> String {
    let (nxy, nz) = grid.dims();
    let mut out = format!("{nxy} {nxy} {nz}\n");
    for iz in 0..nz {
        for iy in 0..nxy {
            let row: Vec<String> = (0..nxy).map(|ix| grid.value(ix, iy, iz).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Spec config with `kind=f1|f2|f3|grid`, `beta=<real>` for built-ins and
/// `file=<path>` (relative to `base`) for grids.
pub fn parse_spec_config(text: &str, base: &Path) -> Result<MultiGraphonSpec> {
    let kv = parse_kv(text)?;
    let kind = kv.get("kind").ok_or_else(|| Error::InvalidSpec("spec config needs kind=".into()))?;
    let beta = || -> Result<f64> {
        match kv.get("beta") {
            None => Ok(0.0),
            Some(b) => b.parse::<f64>().map_err(|_| Error::InvalidSpec(format!("beta '{b}' is not a number"))),
        }
    };
    let spec = match kind.as_str() {
        "f1" => MultiGraphonSpec::f1(beta()?),
        "f2" => MultiGraphonSpec::f2(beta()?),
        "f3" => MultiGraphonSpec::f3(beta()?),
        "grid" => {
            let file = kv.get("file").ok_or_else(|| Error::InvalidSpec("grid spec needs file=".into()))?;
            MultiGraphonSpec::Grid(parse_grid_values(&fs::read_to_string(base.join(file))?)?)
        }
        other => return Err(Error::InvalidSpec(format!("unknown kind '{other}'"))),
    };
    spec.validate()?;
    Ok(spec)
}

pub fn read_spec_config(path: &Path) -> Result<MultiGraphonSpec> {
    let base = path.parent().unwrap_or(Path::new("."));
    parse_spec_config(&fs::read_to_string(path)?, base)
}

/// Writes `path`; grids also get `<stem>.grid` next to it.
pub fn write_spec_config(spec: &MultiGraphonSpec, path: &Path) -> Result<()> {
    let text = match spec {
        MultiGraphonSpec::Grid(grid) => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("spec");
            let name = format!("{stem}.grid");
            fs::write(path.with_file_name(&name), format_grid_values(grid))?;
            format!("kind=grid\nfile={name}\n")
        }
        other => format!("kind={}\nbeta={}\n", other.kind_name(), other.beta()),
    };
    fs::write(path, text)?;
    Ok(())
}

/// Edge list with rows `layer i j [weight]`, all 1-indexed, each undirected
/// pair listed once per layer. A leading header row is skipped. `n` and `m`
/// default to the largest index seen.
pub fn parse_edge_list(text: &str, n: Option<usize>, m: Option<usize>) -> Result<GraphCollection> {
    let mut rows = Vec::new();
    for (k, (line, content)) in data_lines(text).enumerate() {
        let t = tokens(content);
        if k == 0 && t.first().is_some_and(|s| s.parse::<f64>().is_err()) {
            continue;
        }
        if !(3..=4).contains(&t.len()) {
            return Err(Error::parse(format!("line {line}"), format!("expected 3 or 4 columns, found {}", t.len())));
        }
        let layer: usize = num(t[0], line, "layer")?;
        let i: usize = num(t[1], line, "node")?;
        let j: usize = num(t[2], line, "node")?;
        let w: u32 = if t.len() == 4 { num(t[3], line, "weight")? } else { 1 };
        if layer == 0 || i == 0 || j == 0 {
            return Err(Error::parse(format!("line {line}"), "indices are 1-based"));
        }
        if i == j {
            return Err(Error::parse(format!("line {line}"), format!("self-loop at node {i}")));
        }
        rows.push((line, layer - 1, i - 1, j - 1, w));
    }
    let n_seen = rows.iter().map(|r| r.2.max(r.3) + 1).max().unwrap_or(0);
    let m_seen = rows.iter().map(|r| r.1 + 1).max().unwrap_or(0);
    let n = n.unwrap_or(n_seen);
    let m = m.unwrap_or(m_seen);
    if n_seen > n || m_seen > m {
        return Err(Error::InvalidInput(format!("edge list needs n >= {n_seen} and m >= {m_seen}, given n = {n}, m = {m}")));
    }
    if n < 2 || m < 1 {
        return Err(Error::InvalidInput("edge list describes no network".into()));
    }
    let mut g = GraphCollection::zeros(n, m);
    let mut seen = vec![false; n * n * m];
    for (line, l, i, j, w) in rows {
        let key = l * n * n + i.min(j) * n + i.max(j);
        if seen[key] {
            return Err(Error::parse(format!("line {line}"), format!("pair ({}, {}) repeated in layer {}", i + 1, j + 1, l + 1)));
        }
        seen[key] = true;
        g.set(i, j, l, w);
    }
    Ok(g)
}

pub fn read_edge_list(path: &Path, n: Option<usize>, m: Option<usize>) -> Result<GraphCollection> {
    parse_edge_list(&fs::read_to_string(path)?, n, m)
}

/// Nonzero entries as `layer i j weight`, 1-indexed, `i < j`.
pub fn format_edge_list(g: &GraphCollection) -> String {
    let mut out = String::from("layer\ti\tj\tweight\n");
    for l in 0..g.m() {
        for i in 0..g.n() {
            for j in (i + 1)..g.n() {
                let w = g.get(i, j, l);
                if w != 0 {
                    let _ = writeln!(out, "{}\t{}\t{}\t{}", l + 1, i + 1, j + 1, w);
                }
            }
        }
    }
    out
}

/// Covariates as `layer value` rows, one per layer.
pub fn parse_covariates(text: &str, m: usize) -> Result<Vec<f64>> {
    let mut out = vec![None; m];
    for (k, (line, content)) in data_lines(text).enumerate() {
        let t = tokens(content);
        if k == 0 && t.first().is_some_and(|s| s.parse::<f64>().is_err()) {
            continue;
        }
        if t.len() != 2 {
            return Err(Error::parse(format!("line {line}"), format!("expected 2 columns, found {}", t.len())));
        }
        let layer: usize = num(t[0], line, "layer")?;
        let value: f64 = num(t[1], line, "covariate")?;
        if layer == 0 || layer > m {
            return Err(Error::parse(format!("line {line}"), format!("layer {layer} outside 1..={m}")));
        }
        if out[layer - 1].replace(value).is_some() {
            return Err(Error::parse(format!("line {line}"), format!("layer {layer} listed twice")));
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(l, v)| v.ok_or_else(|| Error::InvalidInput(format!("no covariate for layer {}", l + 1))))
        .collect()
}

pub fn read_covariates(path: &Path, m: usize) -> Result<Vec<f64>> {
    parse_covariates(&fs::read_to_string(path)?, m)
}

pub fn format_covariates(values: &[f64]) -> String {
    let mut out = String::from("layer\tvalue\n");
    for (l, v) in values.iter().enumerate() {
        let _ = writeln!(out, "{}\t{}", l + 1, v);
    }
    out
}

/// Dense square matrix preceded by a line holding `n`.
pub fn format_matrix(m: &DMatrix<f64>) -> String {
    let mut out = format!("{}\n", m.nrows());
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| m[(i, j)].to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>> {
    let mut lines = data_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse("line 1", "missing size header"))?;
    let n: usize = num(header, hline, "matrix size")?;
    let mut values = Vec::with_capacity(n * n);
    for (line, content) in lines {
        let row = tokens(content);
        if row.len() != n {
            return Err(Error::parse(format!("line {line}"), format!("expected {n} values, found {}", row.len())));
        }
        for t in row {
            values.push(num::<f64>(t, line, "matrix entry")?);
        }
    }
    if values.len() != n * n {
        return Err(Error::parse("end of file", format!("expected {n} rows, found {}", values.len() / n.max(1))));
    }
    Ok(DMatrix::from_row_slice(n, n, &values))
}

/// Two columns `node_id position`, 1-indexed.
pub fn format_embedding(positions: &[f64]) -> String {
    let mut out = String::from("node\tposition\n");
    for (i, x) in positions.iter().enumerate() {
        let _ = writeln!(out, "{}\t{}", i + 1, x);
    }
    out
}

pub fn parse_embedding(text: &str) -> Result<Vec<f64>> {
    let mut out: Vec<Option<f64>> = Vec::new();
    for (k, (line, content)) in data_lines(text).enumerate() {
        let t = tokens(content);
        if k == 0 && t.first().is_some_and(|s| s.parse::<f64>().is_err()) {
            continue;
        }
        if t.len() != 2 {
            return Err(Error::parse(format!("line {line}"), format!("expected 2 columns, found {}", t.len())));
        }
        let id: usize = num(t[0], line, "node id")?;
        let x: f64 = num(t[1], line, "position")?;
        if id == 0 {
            return Err(Error::parse(format!("line {line}"), "node ids are 1-based"));
        }
        if out.len() < id {
            out.resize(id, None);
        }
        if out[id - 1].replace(x).is_some() {
            return Err(Error::parse(format!("line {line}"), format!("node {id} listed twice")));
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::InvalidInput(format!("no position for node {}", i + 1))))
        .collect()
}

/// Writes `p_hat_layerNNN.txt` per layer plus `manifest.tsv` listing the
/// layer index, its network position and file. Returns the manifest path.
pub fn write_fit(fit: &FitResult, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let (hx, hz) = fit.bandwidths();
    let mut manifest = format!("# rho_hat={} bandwidth_x={} bandwidth_z={}\nlayer\tnetpos\tfile\n", fit.rho_hat, hx, hz);
    for (l, p) in fit.p_hat.iter().enumerate() {
        let name = format!("p_hat_layer{:03}.txt", l + 1);
        fs::write(dir.join(&name), format_matrix(p))?;
        let z = fit.netpos.get(l).map_or("NA".to_string(), |z| z.to_string());
        let _ = writeln!(manifest, "{}\t{}\t{}", l + 1, z, name);
    }
    let path = dir.join("manifest.tsv");
    fs::write(&path, manifest)?;
    Ok(path)
}

/// Reads the layers listed in a manifest written by [`write_fit`], with
/// their network positions (NaN where absent).
pub fn read_fit_layers(manifest: &Path) -> Result<Vec<(f64, DMatrix<f64>)>> {
    let dir = manifest.parent().unwrap_or(Path::new("."));
    let mut out = Vec::new();
    for (k, (line, content)) in data_lines(&fs::read_to_string(manifest)?).enumerate() {
        let t = tokens(content);
        if k == 0 && t.first() == Some(&"layer") {
            continue;
        }
        if t.len() != 3 {
            return Err(Error::parse(format!("line {line}"), "manifest rows need layer, netpos, file"));
        }
        let z = if t[1] == "NA" { f64::NAN } else { num(t[1], line, "netpos")? };
        out.push((z, parse_matrix(&fs::read_to_string(dir.join(t[2]))?)?));
    }
    Ok(out)
}

/// Rows `zvalue statistic mean lo hi skipped`.
pub fn format_resample_table(summaries: &[ResampleSummary]) -> String {
    let mut out = String::from("zvalue\tstatistic\tmean\tlo\thi\tskipped\n");
    for s in summaries {
        for st in &s.stats {
            let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}\t{}", s.zvalue, st.statistic.name(), st.mean, st.lo, st.hi, st.skipped);
        }
    }
    out
}

/// Rows `z curve lower upper`.
pub fn format_band(band: &BootstrapBand) -> String {
    let mut out = String::from("z\tcurve\tlower\tupper\n");
    for k in 0..band.zgrid.len() {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", band.zgrid[k], band.curve[k], band.lower[k], band.upper[k]);
    }
    out
}
