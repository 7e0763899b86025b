use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{ExperimentConfig, ResolvedConfig};
use super::suites::{run_suite, EnsembleRatio, SuiteOutput, Table, Verdict};
use crate::surface::MatrixFile;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub id: String,
    pub suite: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub config_sha256: String,
    pub matrix_id: String,
    pub matrix: MatrixFile,
    pub seed: u64,
    pub passed: bool,
    pub verdicts: Vec<VerdictRecord>,
    pub samples: u64,
    #[serde(default)]
    pub ensemble: Vec<EnsembleRatio>,
    pub payload: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: String,
}

impl From<&Verdict> for VerdictRecord {
    fn from(v: &Verdict) -> Self {
        Self { name: v.name.clone(), passed: v.passed, value: v.value, tolerance: v.tolerance.clone() }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: RunReport,
    pub files: Vec<PathBuf>,
    pub wall_seconds: f64,
}

/// Writes `bytes` to a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn matrix_line(m: &MatrixFile) -> String {
    let entries: Vec<String> = m.entries.iter().map(|r| r.to_string()).collect();
    format!("k={} l={} entries={}", m.k, m.l, entries.join(" "))
}

/// CSV with `# config_sha256=` and `# matrix=` comment lines on top.
pub fn table_csv(t: &Table, hash: &str, m: &MatrixFile) -> Result<Vec<u8>> {
    let mut buf = format!("# config_sha256={hash}\n# matrix={}\n", matrix_line(m)).into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(&t.header).map_err(csv_err)?;
        for r in &t.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        w.flush()?;
    }
    Ok(buf)
}

pub(crate) fn csv_err(e: csv::Error) -> crate::Error {
    crate::Error::Io(std::io::Error::other(e))
}

fn to_pretty(v: &impl Serialize) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(v)?;
    s.push(b'\n');
    Ok(s)
}

pub fn build_report(cfg: &ResolvedConfig, out: &SuiteOutput) -> RunReport {
    RunReport {
        id: cfg.id(),
        suite: cfg.config.suite.name().into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.config.clone(),
        config_sha256: cfg.config_hash.clone(),
        matrix_id: cfg.matrix_id.clone(),
        matrix: MatrixFile::from(cfg.matrix.clone()),
        seed: cfg.seed,
        passed: out.verdicts.iter().all(|v| v.passed),
        verdicts: out.verdicts.iter().map(VerdictRecord::from).collect(),
        samples: out.samples,
        ensemble: out.ensemble.clone(),
        payload: out.payload.clone(),
    }
}

/// Runs the suite and writes `<id>.report.json`, `<id>.<table>.csv`,
/// `<id>.<records>.jsonl` and `<id>.timing.json` into `dir`.
///
/// Nothing is written if the suite errors.
pub fn cmd_run(cfg: &ResolvedConfig, dir: &Path) -> Result<RunOutcome> {
    let start = Instant::now();
    let out = run_suite(cfg)?;
    let wall = start.elapsed().as_secs_f64();
    let report = build_report(cfg, &out);
    let id = report.id.clone();

    let mut pending: Vec<(PathBuf, Vec<u8>)> = Vec::new();
    pending.push((dir.join(format!("{id}.report.json")), to_pretty(&report)?));
    for t in &out.tables {
        pending.push((dir.join(format!("{id}.{}.csv", t.name)), table_csv(t, &report.config_sha256, &report.matrix)?));
    }
    for (stem, recs) in &out.records {
        let mut buf = Vec::new();
        for r in recs {
            serde_json::to_writer(&mut buf, r)?;
            buf.push(b'\n');
        }
        pending.push((dir.join(format!("{id}.{stem}.jsonl")), buf));
    }
    let timing = serde_json::json!({
        "id": id,
        "config_sha256": report.config_sha256,
        "wall_seconds": wall,
        "samples": out.samples,
        "threads": rayon::current_num_threads(),
    });
    pending.push((dir.join(format!("{id}.timing.json")), to_pretty(&timing)?));

    std::fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    for (path, bytes) in pending {
        write_atomic(&path, &bytes)?;
        files.push(path);
    }
    Ok(RunOutcome { report, files, wall_seconds: wall })
}
