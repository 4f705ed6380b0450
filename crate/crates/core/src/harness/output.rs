use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{SolverId, TrialResult};
use crate::error::{Error, Result};

/// Mean and sample standard deviation of the feasible trials of one
/// (value, solver) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub value: f64,
    pub solver: SolverId,
    pub trials: usize,
    pub feasible: usize,
    pub mean_objective_j: f64,
    pub std_objective_j: f64,
    pub mean_deployed: f64,
    pub mean_active_sensing: f64,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Group by (value, solver) in order of first appearance.
pub fn aggregate(results: &[TrialResult]) -> Vec<SummaryRow> {
    let mut keys: Vec<(u64, SolverId)> = Vec::new();
    for r in results {
        let key = (r.value.to_bits(), r.solver);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(bits, solver)| {
            let cell: Vec<&TrialResult> = results
                .iter()
                .filter(|r| r.value.to_bits() == bits && r.solver == solver)
                .collect();
            let ok: Vec<&&TrialResult> = cell.iter().filter(|r| r.feasible).collect();
            let (mean, std) = mean_std(&ok.iter().map(|r| r.objective_j).collect::<Vec<_>>());
            let (deployed, _) = mean_std(&ok.iter().map(|r| r.deployed as f64).collect::<Vec<_>>());
            let (sensing, _) = mean_std(&ok.iter().map(|r| r.active_sensing as f64).collect::<Vec<_>>());
            SummaryRow {
                value: f64::from_bits(bits),
                solver,
                trials: cell.len(),
                feasible: ok.len(),
                mean_objective_j: mean,
                std_objective_j: std,
                mean_deployed: deployed,
                mean_active_sensing: sensing,
            }
        })
        .collect()
}

fn write_rows<T: Serialize>(rows: &[T], header: &[&str], path: &Path) -> Result<()> {
    let csv_err = |source| Error::Csv { path: path.to_path_buf(), source };
    let file = File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

const RESULT_HEADER: [&str; 11] = [
    "value",
    "solver",
    "trial",
    "seed",
    "objective_j",
    "deployed",
    "active_sensing",
    "feasible",
    "violations",
    "wall_time_s",
    "note",
];

const SUMMARY_HEADER: [&str; 8] = [
    "value",
    "solver",
    "trials",
    "feasible",
    "mean_objective_j",
    "std_objective_j",
    "mean_deployed",
    "mean_active_sensing",
];

/// Companion path `<stem>_summary.<ext>` next to `path`.
pub fn summary_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path.extension().map(|e| format!(".{}", e.to_string_lossy())).unwrap_or_default();
    path.with_file_name(format!("{stem}_summary{ext}"))
}

pub fn write_summary(rows: &[SummaryRow], path: &Path) -> Result<()> {
    write_rows(rows, &SUMMARY_HEADER, path)
}

/// Write the raw table to `path` and its aggregate next to it; returns the
/// aggregate's path.
pub fn write_results(results: &[TrialResult], path: &Path) -> Result<PathBuf> {
    write_rows(results, &RESULT_HEADER, path)?;
    let summary = summary_path(path);
    write_summary(&aggregate(results), &summary)?;
    Ok(summary)
}

pub fn read_results(path: &Path) -> Result<Vec<TrialResult>> {
    let csv_err = |source| Error::Csv { path: path.to_path_buf(), source };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}
