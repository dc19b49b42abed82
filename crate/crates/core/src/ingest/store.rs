//! Line-delimited JSON persistence for corpora and sidecar tables.
//!
//! One record per line, lines sorted by (initial submission, id), so the
//! same corpus always serializes to the same bytes.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    ArxivId, AuthorRecord, ImpactTier, LabeledPreprint, ModelError, PreprintRecord, Stage,
    SubfieldLabel,
};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    Malformed {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("{path}:{line}: invalid record: {source}")]
    Invalid {
        path: String,
        line: usize,
        source: ModelError,
    },
    #[error("{path}:{line}: duplicate id {id}")]
    Duplicate {
        path: String,
        line: usize,
        id: String,
    },
}

fn io_err(path: &Path, source: std::io::Error) -> StoreError {
    StoreError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Serialize a corpus to its canonical byte form.
pub fn corpus_to_string(records: &[PreprintRecord]) -> String {
    let mut sorted: Vec<&PreprintRecord> = records.iter().collect();
    sorted.sort_by(|a, b| (a.submitted_at(), &a.arxiv_id).cmp(&(b.submitted_at(), &b.arxiv_id)));
    let mut out = String::new();
    for record in sorted {
        out.push_str(&serde_json::to_string(record).expect("corpus records serialize"));
        out.push('\n');
    }
    out
}

pub fn save_corpus(path: &Path, records: &[PreprintRecord]) -> Result<(), StoreError> {
    fs::write(path, corpus_to_string(records)).map_err(|e| io_err(path, e))
}

/// Load and validate a corpus. Parse and validation failures carry the
/// 1-based line number; duplicate ids are rejected.
pub fn load_corpus(path: &Path) -> Result<Vec<PreprintRecord>, StoreError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let display = path.display().to_string();
    let mut records = Vec::new();
    let mut seen: BTreeSet<ArxivId> = BTreeSet::new();
    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        if line.trim().is_empty() {
            return Err(StoreError::Malformed {
                path: display,
                line: line_no,
                reason: "empty line".to_owned(),
            });
        }
        let record: PreprintRecord =
            serde_json::from_str(line).map_err(|e| StoreError::Malformed {
                path: display.clone(),
                line: line_no,
                reason: e.to_string(),
            })?;
        record.validate().map_err(|source| StoreError::Invalid {
            path: display.clone(),
            line: line_no,
            source,
        })?;
        if !seen.insert(record.arxiv_id.clone()) {
            return Err(StoreError::Duplicate {
                path: display,
                line: line_no,
                id: record.arxiv_id.as_str().to_owned(),
            });
        }
        records.push(record);
    }
    Ok(records)
}

#[derive(Serialize, Deserialize)]
struct AuthorRow {
    id: String,
    name: String,
    influential_citation_count: u64,
}

/// Save the author influence sidecar, one JSON object per line sorted by
/// author id. Preprint memberships are not persisted; they re-derive from
/// the corpus.
pub fn save_authors(path: &Path, authors: &[AuthorRecord]) -> Result<(), StoreError> {
    let mut rows: Vec<AuthorRow> = authors
        .iter()
        .map(|a| AuthorRow {
            id: a.s2_author_id.clone(),
            name: a.name.clone(),
            influential_citation_count: a.influential_citation_count,
        })
        .collect();
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    let mut out = String::new();
    for row in rows {
        out.push_str(&serde_json::to_string(&row).expect("author rows serialize"));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

pub fn load_authors(path: &Path) -> Result<Vec<AuthorRecord>, StoreError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let display = path.display().to_string();
    let mut authors = Vec::new();
    let mut seen = BTreeSet::new();
    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        let row: AuthorRow = serde_json::from_str(line).map_err(|e| StoreError::Malformed {
            path: display.clone(),
            line: line_no,
            reason: e.to_string(),
        })?;
        if !seen.insert(row.id.clone()) {
            return Err(StoreError::Duplicate {
                path: display,
                line: line_no,
                id: row.id,
            });
        }
        authors.push(AuthorRecord {
            s2_author_id: row.id,
            name: row.name,
            influential_citation_count: row.influential_citation_count,
            preprint_ids: BTreeSet::new(),
        });
    }
    Ok(authors)
}

/// One classification verdict as persisted in the labels sidecar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRow {
    pub arxiv_id: ArxivId,
    pub subfields: BTreeSet<SubfieldLabel>,
    pub impact: ImpactTier,
    pub official: bool,
    pub stage: Stage,
}

pub fn save_labels(path: &Path, labeled: &[LabeledPreprint]) -> Result<(), StoreError> {
    let mut out = String::new();
    for item in labeled {
        let row = LabelRow {
            arxiv_id: item.record.arxiv_id.clone(),
            subfields: item.subfields.clone(),
            impact: item.impact,
            official: item.official,
            stage: item.stage,
        };
        out.push_str(&serde_json::to_string(&row).expect("label rows serialize"));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

pub fn load_labels(path: &Path) -> Result<Vec<LabelRow>, StoreError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let display = path.display().to_string();
    let mut rows = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let row: LabelRow = serde_json::from_str(line).map_err(|e| StoreError::Malformed {
            path: display.clone(),
            line: index + 1,
            reason: e.to_string(),
        })?;
        rows.push(row);
    }
    Ok(rows)
}
