//! Distribution of version counts per submission year.

use chrono::Datelike;

use crate::metrics::buckets::Selector;
use crate::model::LabeledPreprint;

/// Histogram bin labels: N_v = 1, 2, 3 and >= 4.
pub const VERSION_BINS: [&str; 4] = ["1", "2", "3", "4+"];

/// One submission year's version-count histogram for one group.
#[derive(Debug, Clone, PartialEq)]
pub struct VersionDistRow {
    pub year: i32,
    pub total: usize,
    /// Preprint counts for N_v = 1, 2, 3, >= 4.
    pub counts: [usize; 4],
    /// Shares summing to 1; `None` when the year has no preprints.
    pub shares: Option<[f64; 4]>,
}

/// Version-count histogram per submission year over the selected
/// preprints, spanning the selection's years including empty ones.
pub fn version_distribution(
    corpus: &[LabeledPreprint],
    selector: &Selector,
) -> Vec<VersionDistRow> {
    let selected: Vec<&LabeledPreprint> = corpus.iter().filter(|p| selector.matches(p)).collect();
    let years: Vec<i32> = selected
        .iter()
        .map(|p| p.record.submitted_at().year())
        .collect();
    let (Some(&first), Some(&last)) = (years.iter().min(), years.iter().max()) else {
        return Vec::new();
    };
    (first..=last)
        .map(|year| {
            let mut counts = [0usize; 4];
            for p in selected
                .iter()
                .filter(|p| p.record.submitted_at().year() == year)
            {
                let bin = match p.record.version_count() {
                    1 => 0,
                    2 => 1,
                    3 => 2,
                    _ => 3,
                };
                counts[bin] += 1;
            }
            let total: usize = counts.iter().sum();
            let shares = (total > 0).then(|| counts.map(|c| c as f64 / total as f64));
            VersionDistRow {
                year,
                total,
                counts,
                shares,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::labels::label_corpus;
    use crate::classify::lexicon::ClueLexicon;
    use crate::model::{ArxivId, Enrichment, PreprintRecord, VersionEvent};
    use chrono::{DateTime, Utc};
    use std::collections::BTreeSet;

    fn ts(s: &str) -> DateTime<Utc> {
        DateTime::parse_from_rfc3339(s).unwrap().with_timezone(&Utc)
    }

    fn record(id: &str, submitted: &str, versions: u32, official: bool) -> PreprintRecord {
        let start = ts(submitted);
        PreprintRecord {
            arxiv_id: ArxivId::new(id).unwrap(),
            title: "t".into(),
            abstract_text: "a".into(),
            authors: vec![],
            categories: BTreeSet::new(),
            versions: (1..=versions)
                .map(|n| VersionEvent {
                    number: n,
                    timestamp: start + chrono::Duration::days(n as i64 - 1),
                })
                .collect(),
            doi: official.then(|| format!("10.0/{id}")),
            journal_ref: None,
            s2: Some(Enrichment {
                paper_id: format!("s2-{id}"),
                topics: vec![],
                citation_count: 0,
                citations: vec![],
                publication_date: None,
            }),
        }
    }

    fn labeled(records: Vec<PreprintRecord>) -> Vec<LabeledPreprint> {
        label_corpus(&records, &ClueLexicon::builtin()).unwrap().labeled
    }

    #[test]
    fn all_single_version_is_all_in_the_first_bin() {
        let corpus = labeled(vec![
            record("1901.00001", "2019-01-01T00:00:00Z", 1, false),
            record("1901.00002", "2019-01-02T00:00:00Z", 1, false),
        ]);
        let rows = version_distribution(&corpus, &Selector::All);
        assert_eq!(rows[0].counts, [2, 0, 0, 0]);
        assert_eq!(rows[0].shares, Some([1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn hand_counted_histogram() {
        // Ten preprints with N_v 1,1,1,2,2,3,4,4,5,7 -> bins [3,2,1,4].
        let versions = [1u32, 1, 1, 2, 2, 3, 4, 4, 5, 7];
        let records: Vec<PreprintRecord> = versions
            .iter()
            .enumerate()
            .map(|(i, &v)| record(&format!("1901.{:05}", i + 1), "2019-01-01T00:00:00Z", v, false))
            .collect();
        let corpus = labeled(records);
        let rows = version_distribution(&corpus, &Selector::All);
        assert_eq!(rows[0].counts, [3, 2, 1, 4]);
        let shares = rows[0].shares.unwrap();
        assert!((shares.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((shares[3] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn official_groups_partition_each_year() {
        let corpus = labeled(vec![
            record("1901.00001", "2019-01-01T00:00:00Z", 1, true),
            record("1901.00002", "2019-01-02T00:00:00Z", 2, false),
            record("1901.00003", "2019-01-03T00:00:00Z", 3, true),
        ]);
        let all = version_distribution(&corpus, &Selector::All);
        let official = version_distribution(&corpus, &Selector::Official(true));
        let rest = version_distribution(&corpus, &Selector::Official(false));
        assert_eq!(all[0].total, official[0].total + rest[0].total);
        for bin in 0..4 {
            assert_eq!(all[0].counts[bin], official[0].counts[bin] + rest[0].counts[bin]);
        }
    }

    #[test]
    fn empty_years_have_no_shares() {
        let corpus = labeled(vec![
            record("1701.00001", "2017-01-01T00:00:00Z", 1, false),
            record("1901.00001", "2019-01-01T00:00:00Z", 2, false),
        ]);
        let rows = version_distribution(&corpus, &Selector::All);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1].year, 2018);
        assert_eq!(rows[1].shares, None);
    }
}
