use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;

use super::MseRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Tab-separated table with a header row.
    DelimitedTable,
    /// Blocks of `key=value` lines separated by blank lines.
    KeyValueRecords,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" | "delimited-table" => Ok(ReportFormat::DelimitedTable),
            "kv" | "key-value-records" => Ok(ReportFormat::KeyValueRecords),
            other => Err(Error::InvalidInput(format!("unknown report format '{other}'"))),
        }
    }
}

const COLUMNS: [&str; 8] = ["scenario", "arm", "mse_low_z", "mse_high_z", "mse_overall", "std_dev", "runtime", "source"];

fn fields(r: &MseRecord, with_runtime: bool) -> [String; 8] {
    let runtime = match (with_runtime, r.runtime) {
        (true, Some(t)) => t.to_string(),
        _ => "NA".to_string(),
    };
    [
        r.scenario.clone(),
        r.arm.clone(),
        r.mse_low_z.to_string(),
        r.mse_high_z.to_string(),
        r.mse_overall.to_string(),
        r.std_dev.to_string(),
        runtime,
        r.source.clone(),
    ]
}

fn render(records: &[MseRecord], format: ReportFormat, with_runtime: bool) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::DelimitedTable => {
            out.push_str(&COLUMNS.join("\t"));
            out.push('\n');
            for r in records {
                out.push_str(&fields(r, with_runtime).join("\t"));
                out.push('\n');
            }
        }
        ReportFormat::KeyValueRecords => {
            for (k, r) in records.iter().enumerate() {
                if k > 0 {
                    out.push('\n');
                }
                for (key, value) in COLUMNS.iter().zip(fields(r, with_runtime)) {
                    let _ = writeln!(out, "{key}={value}");
                }
            }
        }
    }
    out
}

/// Writes `records.tsv` or `records.txt` into `dir` and returns its path.
/// Runtimes are written only when `with_runtime` is set, so default reports
/// are byte-identical across runs.
pub fn emit_report(records: &[MseRecord], format: ReportFormat, dir: &Path, with_runtime: bool) -> Result<PathBuf> {
    if records.is_empty() {
        return Err(Error::InvalidInput("no records to report".into()));
    }
    fs::create_dir_all(dir)?;
    let name = match format {
        ReportFormat::DelimitedTable => "records.tsv",
        ReportFormat::KeyValueRecords => "records.txt",
    };
    let path = dir.join(name);
    fs::write(&path, render(records, format, with_runtime))?;
    Ok(path)
}

fn record_from(values: &[&str], location: &str) -> Result<MseRecord> {
    let num = |k: usize| -> Result<f64> {
        values[k]
            .parse::<f64>()
            .map_err(|_| Error::parse(location, format!("column {} is not a number: '{}'", COLUMNS[k], values[k])))
    };
    Ok(MseRecord {
        scenario: values[0].to_string(),
        arm: values[1].to_string(),
        mse_low_z: num(2)?,
        mse_high_z: num(3)?,
        mse_overall: num(4)?,
        std_dev: num(5)?,
        runtime: if values[6] == "NA" { None } else { Some(num(6)?) },
        source: values[7].to_string(),
    })
}

/// Parses a delimited table written by [`emit_report`].
pub fn parse_table(text: &str) -> Result<Vec<MseRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.split('\t').eq(COLUMNS.iter().copied()) => {}
        _ => return Err(Error::parse("line 1", "missing or unexpected header")),
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, line)| {
            let values: Vec<&str> = line.split('\t').collect();
            let location = format!("line {}", k + 1);
            if values.len() != COLUMNS.len() {
                return Err(Error::parse(location, format!("expected {} columns, found {}", COLUMNS.len(), values.len())));
            }
            record_from(&values, &location)
        })
        .collect()
}

/// Parses key-value records written by [`emit_report`].
pub fn parse_key_value(text: &str) -> Result<Vec<MseRecord>> {
    let mut out = Vec::new();
    for (b, block) in text.split("\n\n").enumerate() {
        if block.trim().is_empty() {
            continue;
        }
        let location = format!("record {}", b + 1);
        let mut values = [""; 8];
        for line in block.lines() {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(&location, format!("expected key=value, got '{line}'")))?;
            let k = COLUMNS
                .iter()
                .position(|c| *c == key)
                .ok_or_else(|| Error::parse(&location, format!("unknown key '{key}'")))?;
            values[k] = value;
        }
        out.push(record_from(&values, &location)?);
    }
    Ok(out)
}

/// Writes a plain (`P2`) grayscale image; values are scaled linearly from
/// `[lo, hi]` to `[0, 255]`, and a constant image is written mid-gray.
pub fn write_pgm(path: &Path, m: &DMatrix<f64>, lo: f64, hi: f64) -> Result<()> {
    let mut out = format!("P2\n{} {}\n255\n", m.ncols(), m.nrows());
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| {
                let v = if hi > lo { ((m[(i, j)] - lo) / (hi - lo) * 255.0).round().clamp(0.0, 255.0) } else { 128.0 };
                (v as u8).to_string()
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Writes each layer as `{label}_layer{l}.txt` (whitespace grid) and
/// `{label}_layer{l}.pgm`, sharing one gray scale across the layers.
pub fn emit_heatmaps(label: &str, layers: &[DMatrix<f64>], dir: &Path) -> Result<Vec<PathBuf>> {
    if layers.is_empty() {
        return Err(Error::InvalidInput("no layers to draw".into()));
    }
    fs::create_dir_all(dir)?;
    let lo = layers.iter().flat_map(|m| m.iter().copied()).fold(f64::INFINITY, f64::min);
    let hi = layers.iter().flat_map(|m| m.iter().copied()).fold(f64::NEG_INFINITY, f64::max);
    let mut paths = Vec::new();
    for (l, m) in layers.iter().enumerate() {
        let grid = dir.join(format!("{label}_layer{l:03}.txt"));
        let mut text = String::new();
        for i in 0..m.nrows() {
            let row: Vec<String> = (0..m.ncols()).map(|j| m[(i, j)].to_string()).collect();
            text.push_str(&row.join(" "));
            text.push('\n');
        }
        fs::write(&grid, text)?;
        let image = dir.join(format!("{label}_layer{l:03}.pgm"));
        write_pgm(&image, m, lo, hi)?;
        paths.push(grid);
        paths.push(image);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(arm: &str, v: f64) -> MseRecord {
        MseRecord {
            scenario: "f2_rep".into(),
            arm: arm.into(),
            mse_low_z: v,
            mse_high_z: v / 3.0,
            mse_overall: v * 0.7,
            std_dev: 0.125,
            runtime: Some(1.5),
            source: "computed".into(),
        }
    }

    #[test]
    fn one_record_one_row() {
        let text = render(&[record("nbs", 1.0)], ReportFormat::DelimitedTable, false);
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().nth(1).unwrap().contains("\tNA\t"));
    }

    #[test]
    fn round_trips() {
        let recs = vec![record("proposed", 0.1234567891), record("usvt", 5.5)];
        let back = parse_table(&render(&recs, ReportFormat::DelimitedTable, true)).unwrap();
        assert_eq!(back, recs);
        let back = parse_key_value(&render(&recs, ReportFormat::KeyValueRecords, true)).unwrap();
        assert_eq!(back, recs);
    }

    #[test]
    fn rejects_bad_header() {
        assert!(matches!(parse_table("a\tb\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn constant_heatmap_is_uniform() {
        let dir = tempfile::tempdir().unwrap();
        let paths = emit_heatmaps("c", &[DMatrix::from_element(3, 3, 0.4)], dir.path()).unwrap();
        let pgm = fs::read_to_string(&paths[1]).unwrap();
        let pixels: Vec<&str> = pgm.lines().skip(3).flat_map(|l| l.split(' ')).collect();
        assert_eq!(pixels.len(), 9);
        assert!(pixels.iter().all(|p| *p == pixels[0]));
    }
}
