use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{CoreError, Result};
use crate::stream::scenario::{Concept, DriftKind, Scenario};
use crate::stream::schedule::{DriftSchedule, DriftSpeed};
use crate::stream::LabeledExample;

/// Load a scenario from a CSV file with header
/// `f0,...,f{d-1},label,concept,split` where split is `train` or `test`.
/// Rows replay in file order within each concept.
pub fn load_csv_scenario(path: &Path) -> Result<Scenario> {
    let content = fs::read_to_string(path)?;
    let mut lines = content.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| CoreError::Schema("empty file".into()))?;
    let columns: Vec<&str> = header.split(',').collect();
    if columns.len() < 4 {
        return Err(CoreError::Schema(format!(
            "header must be f0,...,label,concept,split; got `{header}`"
        )));
    }
    let dim = columns.len() - 3;
    for (i, col) in columns[..dim].iter().enumerate() {
        if *col != format!("f{i}") {
            return Err(CoreError::Schema(format!(
                "expected feature column `f{i}`, got `{col}`"
            )));
        }
    }
    if columns[dim..] != ["label", "concept", "split"] {
        return Err(CoreError::Schema(format!(
            "trailing columns must be label,concept,split; got `{header}`"
        )));
    }

    // (train rows, test rows) per concept index, in file order.
    let mut per_concept: Vec<Concept> = Vec::new();
    let mut n_classes = 2usize;
    for (idx, line) in lines {
        let line_no = idx + 1; // 1-based, including the header line
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(CoreError::Parse {
                line: line_no,
                message: format!(
                    "expected {} fields, got {}",
                    columns.len(),
                    fields.len()
                ),
            });
        }
        let mut features = Vec::with_capacity(dim);
        for (ci, raw) in fields[..dim].iter().enumerate() {
            let v: f64 = raw.parse().map_err(|_| CoreError::Parse {
                line: line_no,
                message: format!("non-numeric feature `{raw}` in column f{ci}"),
            })?;
            features.push(v);
        }
        let label: usize = fields[dim].parse().map_err(|_| CoreError::Parse {
            line: line_no,
            message: format!("non-integer label `{}`", fields[dim]),
        })?;
        let concept: usize = fields[dim + 1].parse().map_err(|_| CoreError::Parse {
            line: line_no,
            message: format!("non-integer concept `{}`", fields[dim + 1]),
        })?;
        n_classes = n_classes.max(label + 1);
        while per_concept.len() <= concept {
            per_concept.push(Concept {
                train: Vec::new(),
                test: Vec::new(),
            });
        }
        let example = LabeledExample::new(features, label, concept);
        match fields[dim + 2] {
            "train" => per_concept[concept].train.push(example),
            "test" => per_concept[concept].test.push(example),
            other => {
                return Err(CoreError::Parse {
                    line: line_no,
                    message: format!("split must be train or test, got `{other}`"),
                })
            }
        }
    }

    if per_concept.is_empty() {
        return Err(CoreError::Schema("file contains no data rows".into()));
    }
    for (i, c) in per_concept.iter().enumerate() {
        if c.train.is_empty() {
            return Err(CoreError::Schema(format!("concept {i} has no train rows")));
        }
        if c.test.is_empty() {
            return Err(CoreError::Schema(format!("concept {i} has no test rows")));
        }
    }

    let mut boundaries = Vec::new();
    let mut acc = 0usize;
    for c in &per_concept[..per_concept.len() - 1] {
        acc += c.train.len();
        boundaries.push(acc);
    }

    let kinds = infer_drift_kinds(&per_concept);
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    Ok(Scenario {
        name,
        schedule: DriftSchedule::new(boundaries, DriftSpeed::Abrupt)?,
        drift_kinds: kinds,
        concepts: per_concept,
        feature_dim: dim,
        n_classes,
        seed: 0,
    })
}

/// A boundary is tagged `Real` when some feature vector appears on both
/// sides with different labels; otherwise `Virtual`.
fn infer_drift_kinds(concepts: &[Concept]) -> Vec<DriftKind> {
    let key = |ex: &LabeledExample| -> Vec<u64> {
        ex.features.iter().map(|f| f.to_bits()).collect()
    };
    let mut kinds = Vec::new();
    for pair in concepts.windows(2) {
        let mut labels: HashMap<Vec<u64>, usize> = HashMap::new();
        for ex in pair[0].train.iter().chain(&pair[0].test) {
            labels.insert(key(ex), ex.label);
        }
        let conflict = pair[1]
            .train
            .iter()
            .chain(&pair[1].test)
            .any(|ex| labels.get(&key(ex)).is_some_and(|&l| l != ex.label));
        kinds.push(if conflict {
            DriftKind::Real
        } else {
            DriftKind::Virtual
        });
    }
    kinds
}

/// Write a scenario in the CSV exchange format (UTF-8, LF, `.` decimals):
/// per concept, train rows then test rows, in stream order.
pub fn write_csv_scenario(scenario: &Scenario, path: &Path) -> Result<()> {
    let mut out = String::new();
    for i in 0..scenario.feature_dim {
        let _ = write!(out, "f{i},");
    }
    out.push_str("label,concept,split\n");
    for (ci, concept) in scenario.concepts.iter().enumerate() {
        for (split, rows) in [("train", &concept.train), ("test", &concept.test)] {
            for ex in rows {
                for f in &ex.features {
                    let _ = write!(out, "{f},");
                }
                let _ = writeln!(out, "{},{ci},{split}", ex.label);
            }
        }
    }
    fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::scenario::{build_real_scenario, build_virtual_scenario};
    use crate::stream::tasks::TaskSpec;

    fn write_temp(content: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir();
        let path = dir.join(format!(
            "sclbench_csv_test_{}_{}.csv",
            std::process::id(),
            content.len()
        ));
        fs::write(&path, content).unwrap();
        path
    }

    #[test]
    fn four_row_file_maps_to_two_concepts() {
        let path = write_temp(
            "f0,f1,label,concept,split\n\
             0.5,1.0,0,0,train\n\
             0.25,0.0,1,0,test\n\
             1.5,1.0,1,1,train\n\
             2.5,0.5,0,1,test\n",
        );
        let s = load_csv_scenario(&path).unwrap();
        assert_eq!(s.n_concepts(), 2);
        assert_eq!(s.concepts[0].train.len(), 1);
        assert_eq!(s.concepts[0].test.len(), 1);
        assert_eq!(s.concepts[1].train.len(), 1);
        assert_eq!(s.concepts[1].test.len(), 1);
        assert_eq!(s.feature_dim, 2);
        assert_eq!(s.schedule.boundaries(), &[1]);
        fs::remove_file(path).ok();
    }

    #[test]
    fn non_numeric_feature_names_the_line() {
        let path = write_temp(
            "f0,label,concept,split\n\
             0.5,0,0,train\n\
             oops,1,0,test\n",
        );
        match load_csv_scenario(&path) {
            Err(CoreError::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("oops"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        fs::remove_file(path).ok();
    }

    #[test]
    fn inconsistent_dimension_is_a_parse_error_with_line() {
        let path = write_temp(
            "f0,f1,label,concept,split\n\
             0.5,1.0,0,0,train\n\
             0.5,1,0,test\n",
        );
        assert!(matches!(
            load_csv_scenario(&path),
            Err(CoreError::Parse { line: 3, .. })
        ));
        fs::remove_file(path).ok();
    }

    #[test]
    fn missing_test_rows_is_a_schema_error() {
        let path = write_temp(
            "f0,label,concept,split\n\
             0.5,0,0,train\n",
        );
        assert!(matches!(load_csv_scenario(&path), Err(CoreError::Schema(_))));
        fs::remove_file(path).ok();
    }

    #[test]
    fn round_trip_preserves_example_sequences() {
        let s = build_virtual_scenario(13, 40, 10, 0.05).unwrap();
        let path = std::env::temp_dir().join(format!("sclbench_rt_{}.csv", std::process::id()));
        write_csv_scenario(&s, &path).unwrap();
        let loaded = load_csv_scenario(&path).unwrap();
        assert_eq!(loaded.concepts, s.concepts);
        assert_eq!(loaded.feature_dim, s.feature_dim);
        assert_eq!(loaded.schedule.boundaries(), s.schedule.boundaries());
        fs::remove_file(path).ok();
    }

    #[test]
    fn drift_kind_inference_distinguishes_real_from_virtual() {
        let virt = build_virtual_scenario(2, 80, 20, 0.0).unwrap();
        let path = std::env::temp_dir().join(format!("sclbench_kv_{}.csv", std::process::id()));
        write_csv_scenario(&virt, &path).unwrap();
        let loaded = load_csv_scenario(&path).unwrap();
        assert!(loaded.drift_kinds.iter().all(|k| *k == DriftKind::Virtual));

        let real = build_real_scenario(2, 80, 20, 0.0, &TaskSpec::all_builtin()).unwrap();
        write_csv_scenario(&real, &path).unwrap();
        let loaded = load_csv_scenario(&path).unwrap();
        assert!(loaded.drift_kinds.iter().all(|k| *k == DriftKind::Real));
        fs::remove_file(path).ok();
    }
}
