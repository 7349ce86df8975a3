//! Mean/std tables and per-problem angle rankings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use super::{HarnessError, RunRecord, INDEX_FILE};
use crate::evolution::Algorithm;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub problem: String,
    pub algorithm: Algorithm,
    pub angle_degrees: f64,
    pub runs: usize,
    pub hv_mean: f64,
    pub hv_std: Option<f64>,
    /// Over runs with a nonempty front.
    pub igd_mean: Option<f64>,
    pub igd_std: Option<f64>,
    /// 1 = best mean HV among the angles of this problem and algorithm.
    pub hv_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
}

/// Mean and sample standard deviation (`None` for a single value).
pub fn mean_std(values: &[f64]) -> (f64, Option<f64>) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = (values.len() > 1).then(|| (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt());
    (mean, std)
}

/// Groups records by (problem, algorithm, angle). Rows are ordered by
/// problem, algorithm and ascending angle; the result does not depend on
/// the order of `records`. Ranking ties go to the smaller angle.
pub fn summarize(records: &[RunRecord]) -> Summary {
    let mut groups: BTreeMap<(String, Algorithm, u64), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        let key = (format!("{}_m{}", r.problem, r.objectives), r.config.algorithm, r.angle_degrees.to_bits());
        groups.entry(key).or_default().push(r);
    }
    let mut rows: Vec<SummaryRow> = groups
        .into_iter()
        .map(|((problem, algorithm, angle), mut runs)| {
            runs.sort_by_key(|r| r.run);
            let hv: Vec<f64> = runs.iter().map(|r| r.hv).collect();
            let igd: Vec<f64> = runs.iter().filter_map(|r| r.igd).collect();
            let (hv_mean, hv_std) = mean_std(&hv);
            let (igd_mean, igd_std) = if igd.is_empty() {
                (None, None)
            } else {
                let (m, s) = mean_std(&igd);
                (Some(m), s)
            };
            SummaryRow {
                problem,
                algorithm,
                angle_degrees: f64::from_bits(angle),
                runs: runs.len(),
                hv_mean,
                hv_std,
                igd_mean,
                igd_std,
                hv_rank: 0,
            }
        })
        .collect();

    let mut start = 0;
    while start < rows.len() {
        let end = start + rows[start..].iter().take_while(|r| r.problem == rows[start].problem && r.algorithm == rows[start].algorithm).count();
        let mut idx: Vec<usize> = (start..end).collect();
        idx.sort_by(|&a, &b| rows[b].hv_mean.total_cmp(&rows[a].hv_mean).then(rows[a].angle_degrees.total_cmp(&rows[b].angle_degrees)));
        for (rank, i) in idx.into_iter().enumerate() {
            rows[i].hv_rank = rank + 1;
        }
        start = end;
    }
    Summary { rows }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| format!("{v:.4}"))
}

impl Summary {
    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["problem", "algorithm", "angle", "runs", "hv_mean", "hv_std", "igd_mean", "igd_std", "hv_rank"])?;
        let full = |v: Option<f64>| v.map_or_else(String::new, |v| v.to_string());
        for r in &self.rows {
            w.write_record([
                r.problem.clone(),
                r.algorithm.to_string(),
                r.angle_degrees.to_string(),
                r.runs.to_string(),
                r.hv_mean.to_string(),
                full(r.hv_std),
                full(r.igd_mean),
                full(r.igd_std),
                r.hv_rank.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Csv(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| problem | algorithm | angle | runs | HV mean | HV std | IGD mean | IGD std | HV rank |\n");
        out.push_str("|---|---|---:|---:|---:|---:|---:|---:|---:|\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {:.4} | {} | {} | {} | {} |",
                r.problem,
                r.algorithm,
                r.angle_degrees,
                r.runs,
                r.hv_mean,
                fmt_opt(r.hv_std),
                fmt_opt(r.igd_mean),
                fmt_opt(r.igd_std),
                r.hv_rank
            );
        }
        out
    }
}

/// Every run record in `dir`, sorted by file name.
pub fn load_records(dir: &Path) -> Result<Vec<RunRecord>, HarnessError> {
    let entries = std::fs::read_dir(dir).map_err(|source| HarnessError::Io { path: dir.into(), source })?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|source| HarnessError::Io { path: dir.into(), source })?.path();
        let is_record = path.extension().is_some_and(|e| e == "json") && path.file_name().is_some_and(|n| n != INDEX_FILE);
        if is_record {
            paths.push(path);
        }
    }
    paths.sort();
    paths.iter().map(|p| RunRecord::read(p)).collect()
}
