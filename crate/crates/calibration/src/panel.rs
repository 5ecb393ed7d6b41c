use std::collections::HashSet;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CalibrationError, Result};

pub const PANEL_COLUMNS: [&str; 9] =
    ["sector_id", "roe_t0", "roe_t1", "labprod_t0", "labprod_t1", "y_t0", "y_t1", "l_t0", "l_t1"];

/// One sector observed at two dates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorRow {
    pub sector_id: String,
    pub roe_t0: f64,
    pub roe_t1: f64,
    pub labprod_t0: f64,
    pub labprod_t1: f64,
    pub y_t0: f64,
    pub y_t1: f64,
    pub l_t0: f64,
    pub l_t1: f64,
}

impl SectorRow {
    fn check(&self) -> std::result::Result<(), String> {
        let all = [self.roe_t0, self.roe_t1, self.labprod_t0, self.labprod_t1, self.y_t0, self.y_t1, self.l_t0, self.l_t1];
        if all.iter().any(|v| !v.is_finite()) {
            return Err("non-finite value".into());
        }
        let positive = [self.labprod_t0, self.labprod_t1, self.y_t0, self.y_t1, self.l_t0, self.l_t1];
        if positive.iter().any(|v| *v <= 0.0) {
            return Err("non-positive productivity, output or employment".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SectorPanel {
    pub rows: Vec<SectorRow>,
}

/// Rows dropped while reading a panel, with the reason for each.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestReport {
    pub rows_read: usize,
    pub rows_kept: usize,
    pub dropped: Vec<(usize, String)>,
}

impl SectorPanel {
    /// Builds a panel, rejecting duplicated ids and invalid values.
    pub fn new(rows: Vec<SectorRow>) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &rows {
            r.check().map_err(|e| CalibrationError::Config(format!("sector {}: {e}", r.sector_id)))?;
            if !seen.insert(r.sector_id.clone()) {
                return Err(CalibrationError::Config(format!("duplicated sector id {}", r.sector_id)));
            }
        }
        Ok(SectorPanel { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, f: impl Fn(&SectorRow) -> f64) -> Vec<f64> {
        self.rows.iter().map(f).collect()
    }

    /// Reads a comma separated panel whose header is exactly [`PANEL_COLUMNS`].
    /// Malformed, invalid and duplicated rows are dropped and reported.
    pub fn from_reader(reader: impl Read) -> Result<(Self, IngestReport)> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
        let found: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if found != PANEL_COLUMNS {
            return Err(CalibrationError::Header { expected: PANEL_COLUMNS.map(String::from).to_vec(), found });
        }
        let mut report = IngestReport::default();
        let mut seen = HashSet::new();
        let mut rows = Vec::new();
        for (k, rec) in rdr.deserialize::<SectorRow>().enumerate() {
            report.rows_read += 1;
            let line = k + 2;
            let row = match rec {
                Ok(r) => r,
                Err(e) => {
                    report.dropped.push((line, e.to_string()));
                    continue;
                }
            };
            if let Err(e) = row.check() {
                report.dropped.push((line, e));
            } else if !seen.insert(row.sector_id.clone()) {
                report.dropped.push((line, format!("duplicated sector id {}", row.sector_id)));
            } else {
                rows.push(row);
            }
        }
        report.rows_kept = rows.len();
        Ok((SectorPanel { rows }, report))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<(Self, IngestReport)> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    pub fn write_csv(&self, w: impl std::io::Write) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        wtr.write_record(PANEL_COLUMNS)?;
        for r in &self.rows {
            wtr.serialize(r)?;
        }
        wtr.flush()?;
        Ok(())
    }
}
