//! Running a directory of scenarios.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::report::{run_scenario, FORMAT_VERSION};
use super::scenario::parse_scenario;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchFailure {
    pub file: String,
    pub reasons: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchSummary {
    pub format_version: u32,
    pub scenarios: usize,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<BatchFailure>,
}

impl BatchSummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Scenario files (`*.json`) in `dir`, sorted by name.
pub fn scenario_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && p.is_file())
        .collect();
    files.sort();
    Ok(files)
}

fn run_file(path: &Path, out_dir: Option<&Path>) -> std::result::Result<(), Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| vec![format!("unreadable: {e}")])?;
    let scenario = parse_scenario(&text).map_err(|e| vec![e.to_string()])?;
    let report = run_scenario(&scenario);
    if let Some(dir) = out_dir {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        fs::write(dir.join(format!("{stem}.report.json")), report.to_json() + "\n")
            .map_err(|e| vec![format!("cannot write report: {e}")])?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(report.violations)
    }
}

/// Run every scenario in `dir` on `jobs` threads, writing reports to `out_dir` if given.
pub fn batch_run(dir: &Path, jobs: usize, out_dir: Option<&Path>) -> Result<BatchSummary> {
    let files = scenario_files(dir)?;
    if let Some(out) = out_dir {
        fs::create_dir_all(out)?;
    }
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(|e| Error::Io(e.to_string()))?;
    let outcomes: Vec<_> = pool.install(|| files.par_iter().map(|f| run_file(f, out_dir)).collect());
    let failures: Vec<BatchFailure> = files
        .iter()
        .zip(outcomes)
        .filter_map(|(f, o)| {
            o.err().map(|reasons| BatchFailure {
                file: f.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
                reasons,
            })
        })
        .collect();
    Ok(BatchSummary {
        format_version: FORMAT_VERSION,
        scenarios: files.len(),
        passed: files.len() - failures.len(),
        failed: failures.len(),
        failures,
    })
}
