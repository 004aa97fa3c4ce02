//! Descriptor tables: CSV ingestion, observed-value transforms and min–max
//! normalization with invertible records.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read table: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("row {row}, column {column}: cannot parse {value:?} as a number")]
    NotNumeric { row: usize, column: String, value: String },
    #[error("duplicate compound id {0:?}")]
    DuplicateId(String),
    #[error("malformed table: {0}")]
    Malformed(String),
    #[error("log transform undefined for compound {id:?}: {value} + {offset} is not positive")]
    LogDomain { id: String, value: f64, offset: f64 },
    #[error("data set is empty")]
    Empty,
    #[error("normalization needs at least two compounds, got {0}")]
    TooFewRows(usize),
    #[error("target range is degenerate (min = max = {0})")]
    DegenerateTarget(f64),
}

/// Compounds with their descriptor vectors and observed values.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    pub ids: Vec<String>,
    /// Row-major `|C| × K` matrix.
    pub features: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    pub descriptor_names: Vec<String>,
    pub id_header: String,
    pub target_header: String,
    /// Offset `c` of an applied `ln(a + c)` transform.
    pub log_offset: Option<f64>,
}

impl DataSet {
    pub fn new(
        ids: Vec<String>,
        features: Vec<Vec<f64>>,
        targets: Vec<f64>,
        descriptor_names: Vec<String>,
    ) -> Result<Self, DatasetError> {
        let ds = DataSet {
            ids,
            features,
            targets,
            descriptor_names,
            id_header: "id".into(),
            target_header: "target".into(),
            log_offset: None,
        };
        ds.check()?;
        Ok(ds)
    }

    fn check(&self) -> Result<(), DatasetError> {
        let n = self.ids.len();
        if self.features.len() != n || self.targets.len() != n {
            return Err(DatasetError::Malformed(format!(
                "{n} ids, {} feature rows, {} targets",
                self.features.len(),
                self.targets.len()
            )));
        }
        let k = self.descriptor_names.len();
        for (i, row) in self.features.iter().enumerate() {
            if row.len() != k {
                return Err(DatasetError::Row {
                    row: i + 1,
                    message: format!("{} descriptor values, expected {k}", row.len()),
                });
            }
        }
        let mut seen = HashSet::with_capacity(n);
        for id in &self.ids {
            if !seen.insert(id.as_str()) {
                return Err(DatasetError::DuplicateId(id.clone()));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn num_descriptors(&self) -> usize {
        self.descriptor_names.len()
    }

    /// Rows at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> DataSet {
        DataSet {
            ids: indices.iter().map(|&i| self.ids[i].clone()).collect(),
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            targets: indices.iter().map(|&i| self.targets[i]).collect(),
            descriptor_names: self.descriptor_names.clone(),
            id_header: self.id_header.clone(),
            target_header: self.target_header.clone(),
            log_offset: self.log_offset,
        }
    }

    /// Keeps only the descriptor columns at `columns`.
    pub fn select_columns(&self, columns: &[usize]) -> DataSet {
        DataSet {
            features: self.features.iter().map(|r| columns.iter().map(|&j| r[j]).collect()).collect(),
            descriptor_names: columns.iter().map(|&j| self.descriptor_names[j].clone()).collect(),
            ..self.clone()
        }
    }

    pub fn with_targets(&self, targets: Vec<f64>) -> DataSet {
        DataSet { targets, ..self.clone() }
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.features.iter().map(|r| r[j]).collect()
    }
}

/// Reads a table whose header names the id column, the target column and then
/// every descriptor.
pub fn load_table(path: impl AsRef<Path>) -> Result<DataSet, DatasetError> {
    let file = std::fs::File::open(path)?;
    read_table(file)
}

pub fn read_table(reader: impl Read) -> Result<DataSet, DatasetError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.len() < 2 {
        return Err(DatasetError::Malformed(format!(
            "header needs an id and a target column, found {} column(s)",
            header.len()
        )));
    }
    let names: Vec<String> = header.iter().map(str::to_owned).collect();
    let width = names.len();
    let mut ids = Vec::new();
    let mut features = Vec::new();
    let mut targets = Vec::new();
    let mut seen = HashSet::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        if rec.len() != width {
            return Err(DatasetError::Row {
                row,
                message: format!("{} cells, header has {width}", rec.len()),
            });
        }
        let id = rec[0].to_owned();
        if !seen.insert(id.clone()) {
            return Err(DatasetError::DuplicateId(id));
        }
        let parse = |j: usize| -> Result<f64, DatasetError> {
            let cell = &rec[j];
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(DatasetError::NotNumeric {
                    row,
                    column: names[j].clone(),
                    value: cell.to_owned(),
                }),
            }
        };
        targets.push(parse(1)?);
        features.push((2..width).map(parse).collect::<Result<Vec<_>, _>>()?);
        ids.push(id);
    }
    Ok(DataSet {
        ids,
        features,
        targets,
        descriptor_names: names[2..].to_vec(),
        id_header: names[0].clone(),
        target_header: names[1].clone(),
        log_offset: None,
    })
}

pub fn save_table(ds: &DataSet, path: impl AsRef<Path>) -> Result<(), DatasetError> {
    let file = std::fs::File::create(path)?;
    write_table(ds, file)
}

/// Writes `ds` in the layout [`read_table`] accepts; numbers use the shortest
/// representation that parses back to the same `f64`.
pub fn write_table(ds: &DataSet, writer: impl Write) -> Result<(), DatasetError> {
    let mut wtr = csv::WriterBuilder::new().from_writer(writer);
    let mut header = vec![ds.id_header.clone(), ds.target_header.clone()];
    header.extend(ds.descriptor_names.iter().cloned());
    wtr.write_record(&header)?;
    for ((id, t), row) in ds.ids.iter().zip(&ds.targets).zip(&ds.features) {
        let mut rec = Vec::with_capacity(row.len() + 2);
        rec.push(id.clone());
        rec.push(t.to_string());
        rec.extend(row.iter().map(f64::to_string));
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Replaces every observed value `a` by `ln(a + offset)`.
pub fn apply_log_transform(ds: &DataSet, offset: f64) -> Result<DataSet, DatasetError> {
    let targets = ds
        .ids
        .iter()
        .zip(&ds.targets)
        .map(|(id, &a)| {
            let arg = a + offset;
            if arg > 0.0 && arg.is_finite() {
                Ok(arg.ln())
            } else {
                Err(DatasetError::LogDomain { id: id.clone(), value: a, offset })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DataSet { targets, log_offset: Some(offset), ..ds.clone() })
}

/// Per-column affine maps onto `[0, 1]` plus the optional log offset that was
/// applied to the observed values beforehand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationRecord {
    pub feature_mins: Vec<f64>,
    pub feature_maxs: Vec<f64>,
    pub target_min: f64,
    pub target_max: f64,
    pub log_offset: Option<f64>,
}

fn unit_scale(v: f64, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        (v - lo) / (hi - lo)
    } else {
        0.0
    }
}

impl NormalizationRecord {
    /// Identity record for data that is already on the unit scale.
    pub fn identity(k: usize) -> Self {
        NormalizationRecord {
            feature_mins: vec![0.0; k],
            feature_maxs: vec![1.0; k],
            target_min: 0.0,
            target_max: 1.0,
            log_offset: None,
        }
    }

    /// Indices of descriptor columns that were constant when the record was built.
    pub fn constant_features(&self) -> Vec<usize> {
        self.feature_mins
            .iter()
            .zip(&self.feature_maxs)
            .enumerate()
            .filter(|(_, (lo, hi))| hi <= lo)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn target_is_degenerate(&self) -> bool {
        self.target_max <= self.target_min
    }

    pub fn normalize_features(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.feature_mins.iter().zip(&self.feature_maxs))
            .map(|(&v, (&lo, &hi))| unit_scale(v, lo, hi))
            .collect()
    }

    /// Maps an already log-transformed observed value to the unit scale.
    pub fn normalize_transformed_target(&self, a: f64) -> f64 {
        unit_scale(a, self.target_min, self.target_max)
    }

    /// Maps a raw observed value (before any log transform) to the unit scale.
    pub fn normalize_raw_target(&self, y: f64) -> Result<f64, DatasetError> {
        let a = match self.log_offset {
            Some(c) if y + c > 0.0 => (y + c).ln(),
            Some(c) => {
                return Err(DatasetError::LogDomain { id: "<target>".into(), value: y, offset: c })
            }
            None => y,
        };
        Ok(self.normalize_transformed_target(a))
    }
}

/// Min–max normalizes every descriptor column and the targets.
///
/// Constant columns map to all zeros; they are kept so the descriptor count
/// stays fixed and can be listed with [`NormalizationRecord::constant_features`].
pub fn normalize(ds: &DataSet) -> Result<(DataSet, NormalizationRecord), DatasetError> {
    match ds.len() {
        0 => return Err(DatasetError::Empty),
        1 => return Err(DatasetError::TooFewRows(1)),
        _ => {}
    }
    let k = ds.num_descriptors();
    let mut mins = vec![f64::INFINITY; k];
    let mut maxs = vec![f64::NEG_INFINITY; k];
    for row in &ds.features {
        for (j, &v) in row.iter().enumerate() {
            mins[j] = mins[j].min(v);
            maxs[j] = maxs[j].max(v);
        }
    }
    let tmin = ds.targets.iter().copied().fold(f64::INFINITY, f64::min);
    let tmax = ds.targets.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let record = NormalizationRecord {
        feature_mins: mins,
        feature_maxs: maxs,
        target_min: tmin,
        target_max: tmax,
        log_offset: ds.log_offset,
    };
    let features = ds.features.iter().map(|r| record.normalize_features(r)).collect();
    let targets = ds.targets.iter().map(|&a| record.normalize_transformed_target(a)).collect();
    Ok((DataSet { features, targets, ..ds.clone() }, record))
}

/// Inverse of the target normalization, including the log transform if any.
pub fn denormalize_target(v: f64, rec: &NormalizationRecord) -> Result<f64, DatasetError> {
    if rec.target_is_degenerate() {
        return Err(DatasetError::DegenerateTarget(rec.target_min));
    }
    let a = (1.0 - v) * rec.target_min + v * rec.target_max;
    Ok(match rec.log_offset {
        Some(c) => a.exp() - c,
        None => a,
    })
}
