//! Check reports and the append-only witness store.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::semigroup::NumericalSemigroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Fail dominates inconclusive, which dominates pass.
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }

    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Outcome of one check on one semigroup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub gens: Vec<u64>,
    pub verdict: Verdict,
    pub data: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl CheckReport {
    pub fn new(check: &str, s: &NumericalSemigroup, verdict: Verdict, data: Value) -> Self {
        CheckReport {
            check: check.to_string(),
            gens: s.generators().to_vec(),
            verdict,
            data,
            timestamp: None,
        }
    }

    pub fn semigroup(&self) -> Result<NumericalSemigroup> {
        NumericalSemigroup::from_generators(&self.gens)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// One persisted witness: the report plus a snapshot of everything
/// recomputable from the generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub id: usize,
    #[serde(flatten)]
    pub report: CheckReport,
    pub snapshot: Value,
}

/// Append-only JSON-lines file of witnesses. Record ids are line numbers
/// starting at 1.
#[derive(Debug)]
pub struct WitnessStore {
    path: PathBuf,
    next_id: usize,
}

impl WitnessStore {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let next_id = match File::open(&path) {
            Ok(f) => BufReader::new(f).lines().count() + 1,
            Err(_) => 1,
        };
        Ok(WitnessStore { path, next_id })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&mut self, report: CheckReport, snapshot: Value) -> Result<usize> {
        let id = self.next_id;
        let rec = WitnessRecord { id, report, snapshot };
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(io_err)?;
        writeln!(f, "{}", serde_json::to_string(&rec).expect("records serialize")).map_err(io_err)?;
        self.next_id += 1;
        Ok(id)
    }

    pub fn records(&self) -> Result<Vec<WitnessRecord>> {
        let f = match File::open(&self.path) {
            Ok(f) => f,
            Err(_) => return Ok(Vec::new()),
        };
        BufReader::new(f)
            .lines()
            .map(|line| {
                let line = line.map_err(io_err)?;
                serde_json::from_str(&line)
                    .map_err(|e| Error::InvalidInput(format!("corrupt witness record: {e}")))
            })
            .collect()
    }

    pub fn get(&self, id: usize) -> Result<WitnessRecord> {
        self.records()?
            .into_iter()
            .find(|r| r.id == id)
            .ok_or_else(|| Error::InvalidInput(format!("no witness with id {id}")))
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidInput(format!("witness store: {e}"))
}
