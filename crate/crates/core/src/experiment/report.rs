use std::path::{Path, PathBuf};

use super::run::{csv_err, write_atomic, RunReport};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ReportSummary {
    pub runs: usize,
    pub passed: bool,
    pub failing: Vec<String>,
    pub files: Vec<PathBuf>,
    pub text: String,
}

pub const SUMMARY_FILE: &str = "summary.txt";
pub const VERDICTS_FILE: &str = "verdicts.csv";
pub const BALL_PLOT_FILE: &str = "plot_ball_scaling.csv";
pub const ENSEMBLE_PLOT_FILE: &str = "plot_ensemble_ratios.csv";

pub fn read_reports(dir: &Path) -> Result<Vec<RunReport>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Config { path: dir.display().to_string(), message: e.to_string() })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.ends_with(".report.json") && !n.starts_with('.')))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Config { path: dir.display().to_string(), message: "no *.report.json files".into() });
    }
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p)?;
            serde_json::from_str(&text).map_err(|e| Error::Config { path: p.display().to_string(), message: e.to_string() })
        })
        .collect()
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header).map_err(csv_err)?;
        for r in rows {
            w.write_record(r).map_err(csv_err)?;
        }
        w.flush()?;
    }
    Ok(buf)
}

/// Merges every run report in `dir` into a text summary, a verdict table and
/// plot-ready CSVs, all written back into `dir`.
pub fn cmd_report(dir: &Path) -> Result<ReportSummary> {
    let reports = read_reports(dir)?;
    let mut text = String::new();
    let mut failing = Vec::new();
    let mut verdict_rows = Vec::new();
    let mut ball_rows = Vec::new();
    let mut ensemble_rows = Vec::new();
    for r in &reports {
        let n_fail = r.verdicts.iter().filter(|v| !v.passed).count();
        text.push_str(&format!(
            "{:<28} {:<16} {:<4} verdicts={} failed={} seed={} config_sha256={}\n",
            r.id,
            r.suite,
            if r.passed { "PASS" } else { "FAIL" },
            r.verdicts.len(),
            n_fail,
            r.seed,
            r.config_sha256
        ));
        if !r.passed {
            failing.push(r.id.clone());
        }
        for v in &r.verdicts {
            verdict_rows.push(vec![
                r.id.clone(),
                r.suite.clone(),
                v.name.clone(),
                if v.passed { "pass" } else { "fail" }.into(),
                v.value.to_string(),
                v.tolerance.clone(),
            ]);
        }
        if r.suite == "ball-scan" {
            if let Some(rows) = r.payload.get("rows").and_then(|v| v.as_array()) {
                for row in rows {
                    let delta = row["delta"].as_f64().unwrap_or(f64::NAN);
                    let norm = row["norm"].as_f64().unwrap_or(f64::NAN);
                    ball_rows.push(vec![
                        r.id.clone(),
                        row["center_id"].to_string(),
                        format!("{}/{}", row["p_num"].as_str().unwrap_or(""), row["p_den"].as_str().unwrap_or("")),
                        delta.to_string(),
                        delta.ln().to_string(),
                        norm.ln().to_string(),
                        row["ratio"].as_f64().unwrap_or(f64::NAN).ln().to_string(),
                    ]);
                }
            }
        }
        for e in &r.ensemble {
            ensemble_rows.push(vec![r.id.clone(), r.suite.clone(), e.member.clone(), e.ratio.to_string()]);
        }
    }
    let passed = failing.is_empty();
    text.push_str(&format!("runs={} overall={}\n", reports.len(), if passed { "PASS" } else { "FAIL" }));
    if !passed {
        text.push_str(&format!("failing: {}\n", failing.join(", ")));
    }

    let outputs = [
        (SUMMARY_FILE, text.clone().into_bytes()),
        (VERDICTS_FILE, csv_bytes(&["run_id", "suite", "verdict", "result", "value", "tolerance"], &verdict_rows)?),
        (BALL_PLOT_FILE, csv_bytes(&["run_id", "center_id", "p", "delta", "log_delta", "log_norm", "log_ratio"], &ball_rows)?),
        (ENSEMBLE_PLOT_FILE, csv_bytes(&["run_id", "suite", "member", "ratio"], &ensemble_rows)?),
    ];
    let mut files = Vec::new();
    for (name, bytes) in outputs {
        let p = dir.join(name);
        write_atomic(&p, &bytes)?;
        files.push(p);
    }
    Ok(ReportSummary { runs: reports.len(), passed, failing, files, text })
}
