use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::grid::{CellResult, GridOutcome, SCHEMA_VERSION};
use crate::CliError;

/// Aggregated row of the summary table: mean and sample standard deviation
/// per (strategy, scenario) over the configured seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub strategy: String,
    pub scenario: String,
    pub k_avg_mean: f64,
    pub k_avg_std: f64,
    pub bwt_mean: f64,
    pub bwt_std: f64,
    pub aaa_mean: f64,
    pub aaa_std: f64,
}

pub fn mean_and_sample_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    assert!(n > 0, "aggregation over an empty cell");
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Aggregate per-run metrics into one row per (strategy, scenario).
pub fn aggregate_runs(results: &[CellResult]) -> Result<Vec<SummaryRow>, CliError> {
    if results.is_empty() {
        return Err(CliError::Internal(
            "no completed runs to aggregate".into(),
        ));
    }
    let mut cells: BTreeMap<(String, String), Vec<&CellResult>> = BTreeMap::new();
    for r in results {
        cells
            .entry((r.strategy.clone(), r.scenario.clone()))
            .or_default()
            .push(r);
    }
    let mut rows = Vec::new();
    for ((strategy, scenario), runs) in cells {
        let collect = |f: fn(&CellResult) -> f64| -> Vec<f64> { runs.iter().map(|r| f(r)).collect() };
        let (k_avg_mean, k_avg_std) = mean_and_sample_std(&collect(|r| r.k_avg));
        let (bwt_mean, bwt_std) = mean_and_sample_std(&collect(|r| r.bwt.unwrap_or(0.0)));
        let (aaa_mean, aaa_std) = mean_and_sample_std(&collect(|r| r.aaa));
        rows.push(SummaryRow {
            strategy,
            scenario,
            k_avg_mean,
            k_avg_std,
            bwt_mean,
            bwt_std,
            aaa_mean,
            aaa_std,
        });
    }
    Ok(rows)
}

pub const SUMMARY_HEADER: &str =
    "strategy,scenario,k_avg_mean,k_avg_std,bwt_mean,bwt_std,aaa_mean,aaa_std";

pub fn write_summary(rows: &[SummaryRow], path: &Path) -> Result<(), CliError> {
    let mut out = String::new();
    out.push_str(&format!("# schema_version={SCHEMA_VERSION}\n"));
    out.push_str(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.strategy,
            r.scenario,
            r.k_avg_mean,
            r.k_avg_std,
            r.bwt_mean,
            r.bwt_std,
            r.aaa_mean,
            r.aaa_std
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Write the combined artifacts: prequential.csv (all runs), clmatrix.json
/// (all matrices), and summary.csv.
pub fn emit_report(outcome: &GridOutcome, out_dir: &Path) -> Result<Vec<SummaryRow>, CliError> {
    fs::create_dir_all(out_dir)?;
    let mut prequential = String::new();
    prequential.push_str(&format!("# schema_version={SCHEMA_VERSION}\n"));
    prequential.push_str("strategy,seed,step,concept,y_true,y_pred,kappa\n");
    for cell in &outcome.results {
        for s in &cell.trace.steps {
            prequential.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                cell.strategy, cell.seed, s.step, s.concept, s.y_true, s.y_pred, s.kappa
            ));
        }
    }
    fs::write(out_dir.join("prequential.csv"), prequential)?;

    fs::write(
        out_dir.join("clmatrix.json"),
        serde_json::to_string_pretty(&outcome.results)?,
    )?;

    let rows = aggregate_runs(&outcome.results)?;
    write_summary(&rows, &out_dir.join("summary.csv"))?;
    Ok(rows)
}

/// Reload the per-run kappa matrices persisted under `dir/runs/`.
pub fn load_runs(dir: &Path) -> Result<Vec<CellResult>, CliError> {
    let runs_dir = dir.join("runs");
    let mut results = Vec::new();
    let entries = fs::read_dir(&runs_dir).map_err(|e| {
        CliError::Config(format!("cannot read {}: {e}", runs_dir.display()))
    })?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("clmatrix_") && n.ends_with(".json"))
        })
        .collect();
    paths.sort();
    for path in paths {
        let raw = fs::read_to_string(&path)?;
        let cell: CellResult = serde_json::from_str(&raw)?;
        results.push(cell);
    }
    if results.is_empty() {
        return Err(CliError::Config(format!(
            "no clmatrix_*.json files under {}",
            runs_dir.display()
        )));
    }
    Ok(results)
}

/// Human-readable summary table.
pub fn format_table(rows: &[SummaryRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<10} {:<10} {:>16} {:>16} {:>16}\n",
        "strategy", "scenario", "K_avg", "BWT", "AAA"
    ));
    for r in rows {
        out.push_str(&format!(
            "{:<10} {:<10} {:>7.3} ± {:>5.3} {:>7.3} ± {:>5.3} {:>7.3} ± {:>5.3}\n",
            r.strategy,
            r.scenario,
            r.k_avg_mean,
            r.k_avg_std,
            r.bwt_mean,
            r.bwt_std,
            r.aaa_mean,
            r.aaa_std
        ));
    }
    out
}
