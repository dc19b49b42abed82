//! Duplicate removal for harvested corpora.

use std::collections::BTreeMap;

use crate::model::{ArxivId, PreprintRecord};

/// Keep one record per arXiv id. The record with the longer version
/// history wins; ties go to the later last-version timestamp, then to the
/// first record encountered. Output is sorted by (initial submission,
/// id), the canonical corpus order. Applying it twice changes nothing.
pub fn dedupe(records: Vec<PreprintRecord>) -> Vec<PreprintRecord> {
    let mut best: BTreeMap<ArxivId, PreprintRecord> = BTreeMap::new();
    for record in records {
        match best.get(&record.arxiv_id) {
            Some(kept)
                if (kept.version_count(), kept.last_updated_at())
                    >= (record.version_count(), record.last_updated_at()) => {}
            _ => {
                best.insert(record.arxiv_id.clone(), record);
            }
        }
    }
    let mut out: Vec<PreprintRecord> = best.into_values().collect();
    out.sort_by(|a, b| {
        (a.submitted_at(), &a.arxiv_id).cmp(&(b.submitted_at(), &b.arxiv_id))
    });
    out
}
