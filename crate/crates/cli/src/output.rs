//! Files on disk: one CSV per table plus a manifest.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::jobs::JobOutput;
use crate::validate::ValidationReport;

pub const MANIFEST: &str = "manifest.json";
pub const REPORT: &str = "validation_report.json";

/// Writes every table of `out` under `dir` and a manifest naming them.
/// Returns the written paths, manifest last.
pub fn write_job(dir: &Path, cfg: &ExperimentConfig, out: &JobOutput) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut paths = Vec::with_capacity(out.tables.len() + 1);
    let mut files = Vec::with_capacity(out.tables.len());
    for (name, table) in &out.tables {
        let path = dir.join(name);
        table.write_csv(BufWriter::new(File::create(&path)?))?;
        files.push(json!({
            "file": name,
            "rows": table.rows.len(),
            "columns": table.columns.iter().map(|c| c.header()).collect::<Vec<_>>(),
            "metadata": table.metadata,
        }));
        paths.push(path);
    }
    let manifest = json!({
        "job": out.job.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "parameters": cfg,
        "derived": out.derived.iter().map(|d| d.to_json()).collect::<Vec<_>>(),
        "files": files,
        "warnings": out.warnings,
    });
    let path = dir.join(MANIFEST);
    fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    paths.push(path);
    Ok(paths)
}

pub fn write_report(dir: &Path, report: &ValidationReport) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(REPORT);
    fs::write(&path, serde_json::to_string_pretty(report)? + "\n")?;
    Ok(path)
}
