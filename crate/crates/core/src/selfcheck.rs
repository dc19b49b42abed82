//! Invariant suite over a corpus file.
//!
//! Checks two layers: structural record validity (parseable lines, valid
//! version sequences, unique ids, canonical order) and the numeric
//! identities the indicators must satisfy (the telescoped ATI equals the
//! summed-gap form, IS is the reciprocal of ATI, the closed-form update
//! speed equals its literal transcription). Every failure is reported as a
//! named violation; an empty result means the corpus is sound.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use chrono::Datelike;

use crate::metrics::reference::{ati_hours_summed, update_speed_literal};
use crate::metrics::update::{update_speed, UpdateCohort, UpdateDivisor};
use crate::metrics::{ati_hours, Bucket, EventSeries};
use crate::model::PreprintRecord;

/// Relative tolerance for the ATI and update-speed oracle comparisons.
pub const ORACLE_REL_TOL: f64 = 1e-9;
/// Relative tolerance for the IS = 1/ATI reciprocity check.
pub const RECIPROCITY_REL_TOL: f64 = 1e-12;

/// One failed invariant: which rule, where, and what was observed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub invariant: &'static str,
    pub subject: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invariant {}: {}: {}", self.invariant, self.subject, self.detail)
    }
}

fn violation(invariant: &'static str, subject: impl Into<String>, detail: impl Into<String>) -> Violation {
    Violation {
        invariant,
        subject: subject.into(),
        detail: detail.into(),
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= tol * scale
}

/// Check a corpus file, tolerating malformed lines so they can be reported
/// as violations instead of aborting the run.
pub fn check_file(path: &Path) -> io::Result<Vec<Violation>> {
    let text = fs::read_to_string(path)?;
    let mut violations = Vec::new();
    let mut records = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let subject = format!("{}:{}", path.display(), index + 1);
        if line.trim().is_empty() {
            violations.push(violation("parse", subject, "blank line"));
            continue;
        }
        match serde_json::from_str::<PreprintRecord>(line) {
            Ok(record) => records.push(record),
            Err(e) => violations.push(violation("parse", subject, e.to_string())),
        }
    }
    violations.extend(check_corpus(&records));
    Ok(violations)
}

/// Run every invariant over in-memory records.
pub fn check_corpus(corpus: &[PreprintRecord]) -> Vec<Violation> {
    let mut violations = Vec::new();

    let mut valid: Vec<&PreprintRecord> = Vec::new();
    for record in corpus {
        match record.validate() {
            Ok(()) => valid.push(record),
            Err(e) => violations.push(violation(
                "record-validity",
                record.arxiv_id.as_str(),
                e.to_string(),
            )),
        }
    }

    let mut seen = std::collections::BTreeMap::new();
    for record in corpus {
        *seen.entry(record.arxiv_id.as_str()).or_insert(0u32) += 1;
    }
    for (id, count) in seen {
        if count > 1 {
            violations.push(violation("unique-ids", id, format!("appears {count} times")));
        }
    }

    for pair in valid.windows(2) {
        let a = (pair[0].submitted_at(), pair[0].arxiv_id.as_str());
        let b = (pair[1].submitted_at(), pair[1].arxiv_id.as_str());
        if b < a {
            violations.push(violation(
                "corpus-order",
                pair[1].arxiv_id.as_str(),
                format!("sorts before preceding record {}", pair[0].arxiv_id.as_str()),
            ));
        }
    }

    let records: Vec<PreprintRecord> = valid.iter().map(|r| (*r).clone()).collect();
    violations.extend(check_pace_identities(&records));
    violations.extend(check_update_oracle(&records));
    violations
}

/// Per submission year: telescoped ATI vs the summed-gap oracle, and
/// IS * ATI = 1 where both are defined.
fn check_pace_identities(corpus: &[PreprintRecord]) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut by_year = std::collections::BTreeMap::new();
    for record in corpus {
        by_year
            .entry(record.submitted_at().year())
            .or_insert_with(Vec::new)
            .push(record.submitted_at());
    }
    for (year, events) in by_year {
        let series = EventSeries::new(Bucket::Year(year), events);
        let closed = ati_hours(&series);
        let summed = ati_hours_summed(&series);
        match (closed, summed) {
            (Ok(a), Ok(b)) => {
                if !rel_close(a, b, ORACLE_REL_TOL) {
                    violations.push(violation(
                        "ati-telescoping",
                        year.to_string(),
                        format!("closed form {a} vs summed form {b}"),
                    ));
                } else if a > 0.0 {
                    let pace = series.pace();
                    if let Some(is) = pace.is_per_hour {
                        if !rel_close(is, 1.0 / a, RECIPROCITY_REL_TOL) {
                            violations.push(violation(
                                "is-reciprocity",
                                year.to_string(),
                                format!("is {is} vs 1/ati {}", 1.0 / a),
                            ));
                        }
                    }
                }
            }
            (Ok(_), Err(e)) | (Err(e), Ok(_)) => violations.push(violation(
                "ati-telescoping",
                year.to_string(),
                format!("only one form is defined: {e}"),
            )),
            (Err(_), Err(_)) => {}
        }
    }
    violations
}

/// Per cohort year and divisor: closed-form update speed vs the literal
/// double-sum transcription.
fn check_update_oracle(corpus: &[PreprintRecord]) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut years: Vec<i32> = corpus.iter().map(|r| r.submitted_at().year()).collect();
    years.sort_unstable();
    years.dedup();
    for year in years {
        let Ok(cohort) = UpdateCohort::from_corpus(corpus, year) else {
            continue;
        };
        for divisor in [UpdateDivisor::VersionCount, UpdateDivisor::UpdateCount] {
            let closed = update_speed(&cohort, divisor);
            let literal = update_speed_literal(&cohort, divisor);
            match (closed, literal) {
                (Ok(a), Ok(b)) => {
                    if !rel_close(a, b, ORACLE_REL_TOL) {
                        violations.push(violation(
                            "update-speed-oracle",
                            format!("{year} ({})", divisor.as_str()),
                            format!("closed form {a} vs literal form {b}"),
                        ));
                    }
                }
                (Ok(_), Err(e)) | (Err(e), Ok(_)) => violations.push(violation(
                    "update-speed-oracle",
                    format!("{year} ({})", divisor.as_str()),
                    format!("only one form is defined: {e}"),
                )),
                (Err(_), Err(_)) => {}
            }
        }
    }
    violations
}
