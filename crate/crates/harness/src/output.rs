//! CSV and manifest emission.

use crate::error::Result;
use serde::Serialize;
use std::path::Path;

pub const CSV_SCHEMA_VERSION: &str = "bpr-csv-1";

pub const TRACE_HEADER: [&str; 7] = [
    "task_id", "episode", "policy", "utility", "regret", "entropy", "seed",
];
pub const COMPARE_SUMMARY_HEADER: [&str; 7] = [
    "strategy",
    "episode",
    "mean_regret",
    "std_regret",
    "mean_entropy",
    "std_entropy",
    "n_tasks",
];
pub const SWEEP_HEADER: [&str; 5] = [
    "library_fraction",
    "episodes",
    "mean_regret",
    "std_regret",
    "trials",
];

/// Six significant digits, shortest round-tripping rendering of the rounded value.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        "0".to_string()
    } else if rounded.abs() < 1e-4 || rounded.abs() >= 1e15 {
        format!("{rounded:e}")
    } else {
        rounded.to_string()
    }
}

pub fn sig6_opt(x: Option<f64>) -> String {
    x.map(sig6).unwrap_or_default()
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub schema_version: &'static str,
    pub kb_schema_version: &'static str,
    pub command: &'a str,
    pub domain: &'a str,
    pub seed: u64,
    pub files: Vec<&'a str>,
}

pub fn write_manifest(dir: &Path, manifest: &Manifest) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest)?;
    std::fs::write(dir.join("manifest.json"), text + "\n")?;
    Ok(())
}

/// Mean and sample standard deviation (zero for a single value).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(1.0), "1");
        assert_eq!(sig6(1.23456789), "1.23457");
        assert_eq!(sig6(-123456789.0), "-123457000");
        assert_eq!(sig6(0.000123456789), "0.000123457");
        assert_eq!(sig6(-0.0), "0");
        assert_eq!(sig6(5.82155123e-8), "5.82155e-8");
        assert_eq!(sig6_opt(None), "");
    }

    #[test]
    fn sample_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
        assert_eq!(mean_std(&[4.0]), (4.0, 0.0));
    }
}
