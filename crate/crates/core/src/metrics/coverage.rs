//! Days coverage: how much of the calendar sees at least one submission.

use std::collections::BTreeSet;

use chrono::{Datelike, NaiveDate};

use crate::metrics::buckets::Selector;
use crate::model::{LabeledPreprint, Stage};

fn days_in_year(year: i32) -> u32 {
    if NaiveDate::from_ymd_opt(year, 2, 29).is_some() {
        366
    } else {
        365
    }
}

/// Fraction of `year`'s days with at least one selected initial
/// submission. A year without submissions scores 0.
pub fn days_coverage_year(corpus: &[LabeledPreprint], selector: &Selector, year: i32) -> f64 {
    let dates: BTreeSet<NaiveDate> = corpus
        .iter()
        .filter(|p| selector.matches(p))
        .map(|p| p.record.submitted_at().date_naive())
        .filter(|d| d.year() == year)
        .collect();
    dates.len() as f64 / days_in_year(year) as f64
}

/// Unweighted mean of the yearly coverage fractions over the stage's
/// calendar years. Empty years pull the mean down as zeros.
pub fn days_coverage_stage(corpus: &[LabeledPreprint], selector: &Selector, stage: Stage) -> f64 {
    let (first, last) = stage.years();
    let sum: f64 = (first..=last)
        .map(|year| days_coverage_year(corpus, selector, year))
        .sum();
    sum / (last - first + 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::labels::label_corpus;
    use crate::classify::lexicon::ClueLexicon;
    use crate::model::{ArxivId, Enrichment, PreprintRecord, VersionEvent};
    use chrono::{DateTime, Duration, TimeZone, Utc};
    use std::collections::BTreeSet as Set;

    fn record_at(id: &str, t: DateTime<Utc>) -> PreprintRecord {
        PreprintRecord {
            arxiv_id: ArxivId::new(id).unwrap(),
            title: "t".into(),
            abstract_text: "a".into(),
            authors: vec![],
            categories: Set::new(),
            versions: vec![VersionEvent {
                number: 1,
                timestamp: t,
            }],
            doi: None,
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
    fn everyday_submissions_cover_the_full_year() {
        let start = Utc.with_ymd_and_hms(2019, 1, 1, 12, 0, 0).unwrap();
        let records: Vec<PreprintRecord> = (0..365)
            .map(|d| record_at(&format!("19{:02}.{:05}", 1 + d / 100, d + 1), start + Duration::days(d as i64)))
            .collect();
        let corpus = labeled(records);
        assert_eq!(days_coverage_year(&corpus, &Selector::All, 2019), 1.0);
    }

    #[test]
    fn ninety_eight_days_of_365() {
        let start = Utc.with_ymd_and_hms(1994, 1, 3, 9, 0, 0).unwrap();
        // 98 distinct days, two submissions on the first day to confirm
        // dates are deduplicated.
        let mut records: Vec<PreprintRecord> = (0..98)
            .map(|d| record_at(&format!("cs/94{:05}", d + 1), start + Duration::days(3 * d as i64)))
            .collect();
        records.push(record_at("cs/9400099", start + Duration::hours(5)));
        let corpus = labeled(records);
        let coverage = days_coverage_year(&corpus, &Selector::All, 1994);
        assert!((coverage - 98.0 / 365.0).abs() < 1e-12);
        assert!((coverage * 100.0 - 26.8).abs() < 0.1);
    }

    #[test]
    fn empty_year_scores_zero() {
        let corpus = labeled(vec![record_at(
            "1901.00001",
            Utc.with_ymd_and_hms(2019, 1, 1, 0, 0, 0).unwrap(),
        )]);
        assert_eq!(days_coverage_year(&corpus, &Selector::All, 2018), 0.0);
    }

    #[test]
    fn leap_years_divide_by_366() {
        let corpus = labeled(vec![record_at(
            "1602.00001",
            Utc.with_ymd_and_hms(2016, 2, 29, 0, 0, 0).unwrap(),
        )]);
        let coverage = days_coverage_year(&corpus, &Selector::All, 2016);
        assert!((coverage - 1.0 / 366.0).abs() < 1e-15);
    }

    #[test]
    fn stage_coverage_is_the_mean_of_yearly_fractions() {
        // Deep-learning stage 2014-2019: full coverage in 2019 only, the
        // other five years empty -> mean 1/6.
        let start = Utc.with_ymd_and_hms(2019, 1, 1, 0, 0, 0).unwrap();
        let records: Vec<PreprintRecord> = (0..365)
            .map(|d| record_at(&format!("19{:02}.{:05}", 1 + d / 100, d + 1), start + Duration::days(d as i64)))
            .collect();
        let corpus = labeled(records);
        let coverage = days_coverage_stage(&corpus, &Selector::All, Stage::DeepLearning);
        assert!((coverage - 1.0 / 6.0).abs() < 1e-12);
    }
}
