use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dataset::{MultiviewDataset, ViewMatrix};
use crate::error::{MvError, Result};
use crate::scalar::Real;

pub const MANIFEST_FILE: &str = "manifest.json";
const LABELS_FILE: &str = "labels.csv";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    /// View file names in view order.
    pub views: Vec<String>,
    pub labels: Option<String>,
    pub n_samples: usize,
    /// Whether each view file starts with a row of feature names.
    pub header: bool,
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).map_err(|e| MvError::io(path, e))
}

fn csv_row(fields: impl Iterator<Item = String>) -> String {
    let mut line = fields.collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

fn is_dataset_file(name: &str) -> bool {
    name == MANIFEST_FILE || name == LABELS_FILE || (name.starts_with("view_") && name.ends_with(".csv"))
}

/// Writes `ds` under `dir`. Values are written with 17 significant digits,
/// which round-trips every `f64` exactly.
///
/// A directory that already holds dataset files is only overwritten when
/// `force` is set; stale view files are then removed.
pub fn save_multiview_dir<T: Real>(ds: &MultiviewDataset<T>, dir: &Path, force: bool) -> Result<DatasetManifest> {
    if dir.exists() {
        let existing: Vec<_> = fs::read_dir(dir)
            .map_err(|e| MvError::io(dir, e))?
            .filter_map(|e| e.ok())
            .filter(|e| is_dataset_file(&e.file_name().to_string_lossy()))
            .map(|e| e.path())
            .collect();
        if !existing.is_empty() {
            if !force {
                return Err(MvError::io(
                    dir,
                    std::io::Error::new(
                        std::io::ErrorKind::AlreadyExists,
                        "directory already holds a dataset; pass force to overwrite",
                    ),
                ));
            }
            for p in existing {
                fs::remove_file(&p).map_err(|e| MvError::io(&p, e))?;
            }
        }
    } else {
        fs::create_dir_all(dir).map_err(|e| MvError::io(dir, e))?;
    }

    let header = ds.view_matrices().iter().any(|v| v.feature_names.is_some());
    let mut names = Vec::new();
    for (v, view) in ds.view_matrices().iter().enumerate() {
        let name = format!("view_{v}.csv");
        let mut body = String::new();
        if header {
            let cols: Vec<String> = match &view.feature_names {
                Some(n) => n.clone(),
                None => (0..view.n_features()).map(|j| format!("x{j}")).collect(),
            };
            body.push_str(&csv_row(cols.into_iter()));
        }
        for row in view.data.row_iter() {
            body.push_str(&csv_row(row.iter().map(|x| format!("{:.16e}", x.as_f64()))));
        }
        write_file(&dir.join(&name), &body)?;
        names.push(name);
    }
    let labels = match ds.labels() {
        Some(y) => {
            let body: String = y
                .iter()
                .map(|v| if v.is_nan() { "nan\n".to_string() } else { format!("{v}\n") })
                .collect();
            write_file(&dir.join(LABELS_FILE), &body)?;
            Some(LABELS_FILE.to_string())
        }
        None => None,
    };
    let manifest = DatasetManifest {
        views: names,
        labels,
        n_samples: ds.n_samples(),
        header,
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file(&dir.join(MANIFEST_FILE), &(json + "\n"))?;
    Ok(manifest)
}

struct Table {
    header: Option<Vec<String>>,
    rows: Vec<Vec<f64>>,
}

/// Reads a numeric CSV. `header = None` treats the first row as a header
/// when any of its fields fails to parse as a number.
fn read_table(path: &Path, header: Option<bool>) -> Result<Table> {
    let file = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => MvError::io(path, io),
            other => MvError::Parse {
                file: file.clone(),
                line: 0,
                column: 0,
                msg: format!("{other:?}"),
            },
        })?;
    let mut records = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            let msg = match e.into_kind() {
                csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
                    format!("expected {expected_len} fields, found {len}")
                }
                other => format!("{other:?}"),
            };
            MvError::Parse {
                file: file.clone(),
                line,
                column: 0,
                msg,
            }
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        records.push((line, rec));
    }
    let has_header = match header {
        Some(h) => h,
        None => records
            .first()
            .is_some_and(|(_, r)| r.iter().any(|f| f.trim().parse::<f64>().is_err())),
    };
    let mut out = Table {
        header: None,
        rows: Vec::with_capacity(records.len()),
    };
    let mut iter = records.into_iter();
    if has_header {
        out.header = iter.next().map(|(_, r)| r.iter().map(str::to_string).collect());
    }
    for (line, rec) in iter {
        let row = rec
            .iter()
            .enumerate()
            .map(|(c, f)| {
                f.trim().parse::<f64>().map_err(|_| MvError::Parse {
                    file: file.clone(),
                    line,
                    column: c + 1,
                    msg: format!("not a number: {f:?}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        out.rows.push(row);
    }
    Ok(out)
}

fn read_view<T: Real>(path: &Path, header: Option<bool>) -> Result<ViewMatrix<T>> {
    let t = read_table(path, header)?;
    let n = t.rows.len();
    let d = t.rows.first().map_or(0, Vec::len);
    if n == 0 || d == 0 {
        return Err(MvError::EmptyInput(format!("{} has no data rows", path.display())));
    }
    let data = DMatrix::from_fn(n, d, |i, j| T::lit(t.rows[i][j]));
    match t.header {
        Some(names) => ViewMatrix::with_names(data, names),
        None => Ok(ViewMatrix::new(data)),
    }
}

fn read_labels(path: &Path) -> Result<Vec<f64>> {
    let t = read_table(path, Some(false))?;
    t.rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            if r.len() != 1 {
                return Err(MvError::Parse {
                    file: path.display().to_string(),
                    line: i as u64 + 1,
                    column: 2,
                    msg: "expected one label per line".into(),
                });
            }
            Ok(r[0])
        })
        .collect()
}

/// Loads a dataset directory, using `manifest.json` when present and the
/// `view_*.csv` / `labels.csv` convention otherwise.
pub fn load_multiview_dir<T: Real>(dir: &Path) -> Result<MultiviewDataset<T>> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let (files, labels_file, header, declared) = if manifest_path.exists() {
        let text = fs::read_to_string(&manifest_path).map_err(|e| MvError::io(&manifest_path, e))?;
        let m: DatasetManifest = serde_json::from_str(&text).map_err(|e| MvError::Parse {
            file: manifest_path.display().to_string(),
            line: e.line() as u64,
            column: e.column(),
            msg: e.to_string(),
        })?;
        (m.views, m.labels, Some(m.header), Some(m.n_samples))
    } else {
        let mut views: Vec<String> = fs::read_dir(dir)
            .map_err(|e| MvError::io(dir, e))?
            .filter_map(|e| e.ok())
            .map(|e| e.file_name().to_string_lossy().into_owned())
            .filter(|n| n.starts_with("view_") && n.ends_with(".csv"))
            .collect();
        views.sort();
        let labels = dir.join(LABELS_FILE).exists().then(|| LABELS_FILE.to_string());
        (views, labels, None, None)
    };
    if files.is_empty() {
        return Err(MvError::EmptyInput(format!("no view files in {}", dir.display())));
    }
    let mut views: Vec<ViewMatrix<T>> = Vec::new();
    for f in &files {
        let v = read_view(&dir.join(f), header)?;
        if let Some(first) = views.first() {
            if first.n_samples() != v.n_samples() {
                return Err(MvError::ShapeMismatch(format!(
                    "{} has {} rows but {} has {}",
                    files[0],
                    first.n_samples(),
                    f,
                    v.n_samples()
                )));
            }
        }
        views.push(v);
    }
    let n = views[0].n_samples();
    if let Some(d) = declared {
        if d != n {
            return Err(MvError::ShapeMismatch(format!(
                "{MANIFEST_FILE} declares {d} samples but {} has {n}",
                files[0]
            )));
        }
    }
    let labels = match labels_file {
        Some(name) => {
            let y = read_labels(&dir.join(&name))?;
            if y.len() != n {
                return Err(MvError::ShapeMismatch(format!(
                    "{name} has {} rows but {} has {n}",
                    y.len(),
                    files[0]
                )));
            }
            Some(y)
        }
        None => None,
    };
    MultiviewDataset::from_views(views, labels)
}
