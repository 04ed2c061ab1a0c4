//! Human survey baseline.
//!
//! Long format, one row per answer: `respondent_id,wep,probability`, with
//! probability on the 0-100 scale. [`load_survey_wide`] reads the
//! one-column-per-WEP layout that survey exports usually come in.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domain::{wep_by_name, wep_registry};
use crate::{Error, Result};

pub const HEADER: [&str; 3] = ["respondent_id", "wep", "probability"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub respondent_id: String,
    /// Canonical WEP name.
    pub wep: String,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SurveyTable {
    pub rows: Vec<SurveyRow>,
}

fn valid_names() -> String {
    wep_registry()
        .iter()
        .map(|w| w.canonical_name)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Orders "r2" before "r10".
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for ((da, sa), (db, sb)) in ca.iter().zip(&cb) {
        let ord = if *da && *db {
            let (ta, tb) = (sa.trim_start_matches('0'), sb.trim_start_matches('0'));
            ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb))
        } else {
            sa.cmp(sb)
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

fn data_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Data {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn check_probability(path: &Path, line: usize, raw: &str) -> Result<f64> {
    let value: f64 = raw
        .trim()
        .parse()
        .map_err(|_| data_error(path, line, format!("probability {raw:?} is not a number")))?;
    if !(0.0..=100.0).contains(&value) {
        return Err(data_error(path, line, format!("probability {value} is outside [0, 100]")));
    }
    Ok(value)
}

fn canonical_wep(path: &Path, line: usize, raw: &str) -> Result<String> {
    wep_by_name(raw)
        .map(|w| w.canonical_name.to_string())
        .ok_or_else(|| data_error(path, line, format!("unknown WEP {raw:?}; expected one of: {}", valid_names())))
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

pub fn load_survey(path: &Path) -> Result<SurveyTable> {
    SurveyTable::from_reader(open(path)?, path)
}

pub fn load_survey_wide(path: &Path) -> Result<SurveyTable> {
    SurveyTable::from_wide_reader(open(path)?, path)
}

impl SurveyTable {
    /// `path` is only used in error messages.
    pub fn from_reader<R: Read>(reader: R, path: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
        let mut records = rdr.records();
        let header = match records.next() {
            None => return Err(data_error(path, 1, "empty survey file")),
            Some(r) => r.map_err(|e| data_error(path, 1, e.to_string()))?,
        };
        if header.iter().collect::<Vec<_>>() != HEADER {
            return Err(data_error(path, 1, format!("expected header {:?}", HEADER.join(","))));
        }
        let mut rows = Vec::new();
        for (i, record) in records.enumerate() {
            let line = i + 2;
            let record = record.map_err(|e| data_error(path, line, e.to_string()))?;
            if record.len() != 3 {
                return Err(data_error(path, line, format!("expected 3 fields, found {}", record.len())));
            }
            let respondent_id = record[0].to_string();
            if respondent_id.is_empty() {
                return Err(data_error(path, line, "empty respondent_id"));
            }
            rows.push(SurveyRow {
                respondent_id,
                wep: canonical_wep(path, line, &record[1])?,
                probability: check_probability(path, line, &record[2])?,
            });
        }
        if rows.is_empty() {
            return Err(data_error(path, 1, "survey has a header but no rows"));
        }
        Ok(SurveyTable { rows })
    }

    /// First column is the respondent id, every other column a WEP; blank
    /// cells are skipped.
    pub fn from_wide_reader<R: Read>(reader: R, path: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers().map_err(|e| data_error(path, 1, e.to_string()))?.clone();
        if header.len() < 2 {
            return Err(data_error(path, 1, "expected respondent_id followed by WEP columns"));
        }
        let weps: Vec<String> = header.iter().skip(1).map(|h| canonical_wep(path, 1, h)).collect::<Result<_>>()?;
        let mut rows = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let line = i + 2;
            let record = record.map_err(|e| data_error(path, line, e.to_string()))?;
            for (wep, cell) in weps.iter().zip(record.iter().skip(1)) {
                if cell.is_empty() {
                    continue;
                }
                rows.push(SurveyRow {
                    respondent_id: record[0].to_string(),
                    wep: wep.clone(),
                    probability: check_probability(path, line, cell)?,
                });
            }
        }
        if rows.is_empty() {
            return Err(data_error(path, 1, "survey has no answers"));
        }
        Ok(SurveyTable { rows })
    }

    pub fn write<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(HEADER)?;
        for row in &self.rows {
            w.write_record([&row.respondent_id, &row.wep, &row.probability.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write(file).map_err(|e| data_error(path, 0, e.to_string()))
    }

    /// Every answer for one WEP, ordered by respondent id.
    pub fn wep_distribution(&self, wep: &str) -> Result<Vec<f64>> {
        let name = wep_by_name(wep)
            .ok_or_else(|| Error::Validation(format!("unknown WEP {wep:?}; expected one of: {}", valid_names())))?
            .canonical_name;
        let mut rows: Vec<&SurveyRow> = self.rows.iter().filter(|r| r.wep == name).collect();
        if rows.is_empty() {
            return Err(Error::EmptySample("the survey has no answers for this WEP"));
        }
        rows.sort_by(|a, b| natural_cmp(&a.respondent_id, &b.respondent_id));
        Ok(rows.iter().map(|r| r.probability).collect())
    }

    /// Answer count per WEP, in registry order; absent WEPs are omitted.
    pub fn respondents_per_wep(&self) -> BTreeMap<usize, (String, usize)> {
        let mut out: BTreeMap<usize, (String, usize)> = BTreeMap::new();
        for row in &self.rows {
            let w = wep_by_name(&row.wep).expect("validated on load");
            out.entry(w.index()).or_insert_with(|| (row.wep.clone(), 0)).1 += 1;
        }
        out
    }
}
