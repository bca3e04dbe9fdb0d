use std::collections::BTreeSet;
use std::fs::OpenOptions;
use std::io::Write;

use natframe_core::group::{search_certificate, Budget, CertificateFile, SearchBudget, SearchStats};
use natframe_core::notation::PresentationFile;
use natframe_core::properties::run_all;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::report::{canonical, sha256_hex};
use crate::resolve::{presentation, usage, UsageError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KSpec {
    One(i64),
    Range([i64; 2]),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub presentation: String,
    pub k: KSpec,
    #[serde(default)]
    pub max_m: Option<usize>,
    #[serde(default)]
    pub budget_states: Option<usize>,
    #[serde(default)]
    pub budget_len: Option<usize>,
    #[serde(default)]
    pub max_candidates: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropertySpec {
    pub cases: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default)]
    pub cells: Vec<CellSpec>,
    #[serde(default)]
    pub properties: Option<PropertySpec>,
}

/// One line of the ledger. `checksum` is the SHA-256 of the record's
/// canonical JSON with the checksum field removed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerRecord {
    pub cell: String,
    pub inputs_digest: String,
    /// `certificate`, `exhausted` (no certificate among the placements
    /// tried, nothing undecided) or `unknown`.
    pub outcome: String,
    pub payload: Value,
    pub checksum: String,
}

impl LedgerRecord {
    fn compute_checksum(&self) -> String {
        let mut v = serde_json::to_value(self).expect("record serializes");
        v.as_object_mut().unwrap().remove("checksum");
        sha256_hex(canonical(&v).as_bytes())
    }

    fn sealed(mut self) -> LedgerRecord {
        self.checksum = self.compute_checksum();
        self
    }

    pub fn to_line(&self) -> String {
        canonical(&serde_json::to_value(self).expect("record serializes"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerError {
    pub line: usize,
    pub reason: String,
}

pub fn read_ledger(text: &str) -> Result<Vec<LedgerRecord>, LedgerError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let r: LedgerRecord =
            serde_json::from_str(line).map_err(|e| LedgerError { line: i + 1, reason: e.to_string() })?;
        if r.compute_checksum() != r.checksum {
            return Err(LedgerError { line: i + 1, reason: "checksum mismatch".into() });
        }
        out.push(r);
    }
    Ok(out)
}

struct Cell {
    id: String,
    order: (String, i64),
    digest: String,
    job: Job,
}

enum Job {
    Search { spec: CellSpec, k: i64 },
    Properties { seed: u64, cases: usize },
}

fn expand(spec: &ExperimentSpec, seed: u64) -> Result<Vec<Cell>, UsageError> {
    let mut cells = Vec::new();
    for c in &spec.cells {
        let pres = presentation(&c.presentation)?;
        let file = serde_json::to_value(PresentationFile::from_presentation(&pres)).expect("presentation serializes");
        let ks: Vec<i64> = match c.k {
            KSpec::One(k) => vec![k],
            KSpec::Range([a, b]) if a <= b => (a..=b).collect(),
            KSpec::Range([a, b]) => return Err(usage(format!("empty k range [{a}, {b}]"))),
        };
        for k in ks {
            let inputs = json!({
                "presentation": file,
                "k": k,
                "max_m": c.max_m,
                "budget_states": c.budget_states,
                "budget_len": c.budget_len,
                "max_candidates": c.max_candidates,
            });
            cells.push(Cell {
                id: format!("{}/k={k}", c.presentation),
                order: (c.presentation.clone(), k),
                digest: sha256_hex(canonical(&inputs).as_bytes()),
                job: Job::Search { spec: c.clone(), k },
            });
        }
    }
    if let Some(p) = &spec.properties {
        let inputs = json!({"properties": p.cases, "seed": seed});
        cells.push(Cell {
            id: format!("properties/seed={seed}"),
            order: ("properties".into(), seed as i64),
            digest: sha256_hex(canonical(&inputs).as_bytes()),
            job: Job::Properties { seed, cases: p.cases },
        });
    }
    cells.sort_by(|a, b| a.order.cmp(&b.order));
    Ok(cells)
}

fn run_cell(cell: &Cell) -> LedgerRecord {
    let (outcome, payload) = match &cell.job {
        Job::Search { spec, k } => {
            let pres = presentation(&spec.presentation).expect("resolved during expansion");
            let mut budget = SearchBudget::default();
            budget.triviality = Budget { max_len: spec.budget_len, max_states: spec.budget_states.unwrap_or(budget.triviality.max_states) };
            if let Some(c) = spec.max_candidates {
                budget.max_candidates = c;
            }
            let max_m = spec.max_m.unwrap_or(k.unsigned_abs() as usize + 4);
            let out = search_certificate(&pres, *k, max_m, budget);
            let stats: &SearchStats = &out.stats;
            match &out.certificate {
                Some(c) => {
                    let file: CertificateFile = c.to_file(pres.generator_count());
                    ("certificate", json!({"k": k, "m": c.m(), "max_m": max_m, "certificate": file, "stats": stats}))
                }
                None => {
                    let outcome = if out.had_unknowns() { "unknown" } else { "exhausted" };
                    (outcome, json!({"k": k, "max_m": max_m, "stats": stats}))
                }
            }
        }
        Job::Properties { seed, cases } => {
            let reports = run_all(*seed, *cases);
            let ok = reports.iter().all(|r| r.passed());
            (if ok { "passed" } else { "failed" }, json!({"seed": seed, "suites": reports}))
        }
    };
    LedgerRecord {
        cell: cell.id.clone(),
        inputs_digest: cell.digest.clone(),
        outcome: outcome.into(),
        payload,
        checksum: String::new(),
    }
    .sealed()
}

pub enum ExperimentError {
    Usage(UsageError),
    Corrupt(LedgerError),
    Io(String),
}

/// Runs the cells not yet in the ledger, in parallel, and appends their
/// records ordered by cell.
pub fn run_experiment(spec_text: &str, ledger_path: &str, seed: u64) -> Result<Value, ExperimentError> {
    let spec: ExperimentSpec =
        serde_json::from_str(spec_text).map_err(|e| ExperimentError::Usage(usage(format!("experiment spec: {e}"))))?;
    let cells = expand(&spec, seed).map_err(ExperimentError::Usage)?;
    let existing = match std::fs::read_to_string(ledger_path) {
        Ok(text) => read_ledger(&text).map_err(ExperimentError::Corrupt)?,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Vec::new(),
        Err(e) => return Err(ExperimentError::Io(e.to_string())),
    };
    let done: BTreeSet<(String, String)> = existing.iter().map(|r| (r.cell.clone(), r.inputs_digest.clone())).collect();
    let todo: Vec<&Cell> = cells.iter().filter(|c| !done.contains(&(c.id.clone(), c.digest.clone()))).collect();
    let records: Vec<LedgerRecord> = todo.par_iter().map(|c| run_cell(c)).collect();
    if !records.is_empty() {
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(ledger_path)
            .map_err(|e| ExperimentError::Io(e.to_string()))?;
        let mut text = String::new();
        for r in &records {
            text.push_str(&r.to_line());
            text.push('\n');
        }
        f.write_all(text.as_bytes()).and_then(|_| f.sync_all()).map_err(|e| ExperimentError::Io(e.to_string()))?;
    }
    let summary: Vec<Value> = records
        .iter()
        .map(|r| json!({"cell": r.cell, "outcome": r.outcome, "m": r.payload.get("m")}))
        .collect();
    Ok(json!({
        "cells": cells.len(),
        "skipped": cells.len() - records.len(),
        "new": summary,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checksum_detects_edits() {
        let r = LedgerRecord {
            cell: "a".into(),
            inputs_digest: "d".into(),
            outcome: "certificate".into(),
            payload: json!({"m": 2}),
            checksum: String::new(),
        }
        .sealed();
        let line = r.to_line();
        assert_eq!(read_ledger(&line).unwrap(), vec![r]);
        let bad = line.replace("\"m\":2", "\"m\":0");
        assert_eq!(read_ledger(&bad).unwrap_err().reason, "checksum mismatch");
        assert!(read_ledger("{").is_err());
    }

    #[test]
    fn k_ranges_expand_in_order() {
        let spec: ExperimentSpec = serde_json::from_str(r#"{"cells": [{"presentation": "3_1", "k": [-2, 1]}]}"#).unwrap();
        let cells = expand(&spec, 0).unwrap();
        let ids: Vec<&str> = cells.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["3_1/k=-2", "3_1/k=-1", "3_1/k=0", "3_1/k=1"]);
        let bad: ExperimentSpec = serde_json::from_str(r#"{"cells": [{"presentation": "3_1", "k": [2, 1]}]}"#).unwrap();
        assert!(expand(&bad, 0).is_err());
    }
}
