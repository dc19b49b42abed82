//! Grouping of submission events into calendar buckets.

use chrono::{DateTime, Utc};
use std::collections::BTreeMap;

use crate::metrics::{Bucket, EventSeries, Granularity};
use crate::model::{ImpactTier, LabeledPreprint, Stage, SubfieldLabel};

/// Which preprints feed a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    All,
    Subfield(SubfieldLabel),
    Impact(ImpactTier),
    Official(bool),
    InStage(Stage),
}

impl Selector {
    pub fn matches(&self, p: &LabeledPreprint) -> bool {
        match self {
            Selector::All => true,
            Selector::Subfield(s) => p.subfields.contains(s),
            Selector::Impact(t) => p.impact == *t,
            Selector::Official(flag) => p.official == *flag,
            Selector::InStage(s) => p.stage == *s,
        }
    }

    /// Column label for report output.
    pub fn label(&self) -> String {
        match self {
            Selector::All => "all".to_owned(),
            Selector::Subfield(s) => s.code().to_owned(),
            Selector::Impact(t) => t.label().to_owned(),
            Selector::Official(true) => "official".to_owned(),
            Selector::Official(false) => "no-official".to_owned(),
            Selector::InStage(s) => s.label().to_owned(),
        }
    }
}

/// Earliest and latest initial-submission instants of the corpus.
pub fn corpus_span(corpus: &[LabeledPreprint]) -> Option<(DateTime<Utc>, DateTime<Utc>)> {
    let mut iter = corpus.iter().map(|p| p.record.submitted_at());
    let first = iter.next()?;
    Some(iter.fold((first, first), |(lo, hi), t| (lo.min(t), hi.max(t))))
}

/// Bucket the selected preprints' initial-submission instants over an
/// explicit span, emitting every bucket from the one containing
/// `span.0` through the one containing `span.1`, empty buckets included.
/// Pinning the span lets several selectors share aligned bucket lists.
pub fn bucket_events_between(
    corpus: &[LabeledPreprint],
    granularity: Granularity,
    selector: &Selector,
    span: (DateTime<Utc>, DateTime<Utc>),
) -> Vec<EventSeries> {
    let mut grouped: BTreeMap<Bucket, Vec<DateTime<Utc>>> = BTreeMap::new();
    for p in corpus {
        if !selector.matches(p) {
            continue;
        }
        let t = p.record.submitted_at();
        if t < span.0 || t > span.1 {
            continue;
        }
        grouped.entry(granularity.bucket_of(t)).or_default().push(t);
    }

    let last = granularity.bucket_of(span.1);
    let mut bucket = granularity.bucket_of(span.0);
    let mut series = Vec::new();
    loop {
        let events = grouped.remove(&bucket).unwrap_or_default();
        series.push(EventSeries::new(bucket, events));
        if bucket == last {
            break;
        }
        bucket = bucket.next();
    }
    series
}

/// Bucket over the span of the selection itself. An empty selection yields
/// no buckets.
pub fn bucket_events(
    corpus: &[LabeledPreprint],
    granularity: Granularity,
    selector: &Selector,
) -> Vec<EventSeries> {
    let selected: Vec<LabeledPreprint> = corpus
        .iter()
        .filter(|p| selector.matches(p))
        .cloned()
        .collect();
    match corpus_span(&selected) {
        Some(span) => bucket_events_between(&selected, granularity, &Selector::All, span),
        None => Vec::new(),
    }
}

/// One pooled series per stage, in stage order, empty stages included.
pub fn stage_series(corpus: &[LabeledPreprint], selector: &Selector) -> Vec<EventSeries> {
    Stage::ALL
        .into_iter()
        .map(|stage| {
            let events: Vec<DateTime<Utc>> = corpus
                .iter()
                .filter(|p| p.stage == stage && selector.matches(p))
                .map(|p| p.record.submitted_at())
                .collect();
            EventSeries::new(Bucket::Stage(stage), events)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::labels::label_corpus;
    use crate::classify::lexicon::ClueLexicon;
    use crate::model::{ArxivId, AuthorRef, Enrichment, PreprintRecord, VersionEvent};
    use chrono::NaiveDate;
    use std::collections::BTreeSet;

    fn ts(s: &str) -> DateTime<Utc> {
        DateTime::parse_from_rfc3339(s).unwrap().with_timezone(&Utc)
    }

    fn record(id: &str, submitted: &str, topic: Option<&str>) -> PreprintRecord {
        PreprintRecord {
            arxiv_id: ArxivId::new(id).unwrap(),
            title: "t".into(),
            abstract_text: "a".into(),
            authors: vec![AuthorRef {
                name: "A".into(),
                s2_author_id: None,
            }],
            categories: BTreeSet::new(),
            versions: vec![VersionEvent {
                number: 1,
                timestamp: ts(submitted),
            }],
            doi: None,
            journal_ref: None,
            s2: Some(Enrichment {
                paper_id: format!("s2-{id}"),
                topics: topic.map(|t| vec![t.to_owned()]).unwrap_or_default(),
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
    fn day_buckets_are_singletons_for_daily_submissions() {
        let corpus = labeled(vec![
            record("1901.00001", "2019-01-01T10:00:00Z", None),
            record("1901.00002", "2019-01-02T11:00:00Z", None),
            record("1901.00003", "2019-01-03T12:00:00Z", None),
        ]);
        let series = bucket_events(&corpus, Granularity::Day, &Selector::All);
        assert_eq!(series.len(), 3);
        assert!(series.iter().all(|s| s.m() == 1));
        assert_eq!(
            series[0].bucket(),
            Bucket::Day(NaiveDate::from_ymd_opt(2019, 1, 1).unwrap())
        );
    }

    #[test]
    fn empty_buckets_inside_the_span_are_emitted() {
        let corpus = labeled(vec![
            record("1901.00001", "2019-01-01T00:00:00Z", None),
            record("1903.00001", "2019-03-15T00:00:00Z", None),
        ]);
        let series = bucket_events(&corpus, Granularity::Month, &Selector::All);
        let counts: Vec<(String, usize)> = series
            .iter()
            .map(|s| (s.bucket().label(), s.m()))
            .collect();
        assert_eq!(
            counts,
            vec![
                ("2019-01".to_owned(), 1),
                ("2019-02".to_owned(), 0),
                ("2019-03".to_owned(), 1),
            ]
        );
    }

    #[test]
    fn subfield_selector_filters_preprints() {
        let corpus = labeled(vec![
            record("1901.00001", "2019-01-01T00:00:00Z", Some("Deep learning")),
            record("1901.00002", "2019-01-02T00:00:00Z", Some("Computer vision")),
            record("1901.00003", "2019-01-03T00:00:00Z", Some("Deep learning")),
            record("1901.00004", "2019-01-04T00:00:00Z", None),
            record("1901.00005", "2019-01-05T00:00:00Z", Some("Clustering")),
        ]);
        let series = bucket_events(&corpus, Granularity::Year, &Selector::Subfield(SubfieldLabel::Dl));
        assert_eq!(series.len(), 1);
        assert_eq!(series[0].m(), 2);
    }

    #[test]
    fn pinned_span_aligns_groups() {
        let corpus = labeled(vec![
            record("1801.00001", "2018-01-01T00:00:00Z", Some("Deep learning")),
            record("1901.00001", "2019-06-01T00:00:00Z", Some("Computer vision")),
        ]);
        let span = corpus_span(&corpus).unwrap();
        let dl = bucket_events_between(&corpus, Granularity::Year, &Selector::Subfield(SubfieldLabel::Dl), span);
        let cv = bucket_events_between(&corpus, Granularity::Year, &Selector::Subfield(SubfieldLabel::Cv), span);
        assert_eq!(dl.len(), 2);
        assert_eq!(cv.len(), 2);
        assert_eq!(dl[0].m(), 1);
        assert_eq!(dl[1].m(), 0);
        assert_eq!(cv[0].m(), 0);
        assert_eq!(cv[1].m(), 1);
    }

    #[test]
    fn empty_selection_yields_no_buckets() {
        let corpus = labeled(vec![record("1901.00001", "2019-01-01T00:00:00Z", None)]);
        let series = bucket_events(&corpus, Granularity::Year, &Selector::Subfield(SubfieldLabel::Ro));
        assert!(series.is_empty());
    }

    #[test]
    fn stage_series_pools_submissions_per_stage() {
        let corpus = labeled(vec![
            record("cs/9705001", "1997-05-01T00:00:00Z", None),
            record("cs/0305001", "2003-05-01T00:00:00Z", None),
            record("1905.00001", "2019-05-01T00:00:00Z", None),
            record("1906.00001", "2019-06-01T00:00:00Z", None),
        ]);
        let series = stage_series(&corpus, &Selector::All);
        assert_eq!(series.len(), 4);
        let counts: Vec<usize> = series.iter().map(|s| s.m()).collect();
        assert_eq!(counts, vec![1, 1, 0, 2]);
        assert_eq!(series[3].bucket(), Bucket::Stage(Stage::DeepLearning));
    }

    #[test]
    fn month_counts_match_a_hand_count() {
        // Twenty events: 3 in Jan, 0 in Feb, 5 in Mar, 12 in Apr.
        let mut records = Vec::new();
        let spread: [(u32, usize); 3] = [(1, 3), (3, 5), (4, 12)];
        let mut n = 0;
        for (month, count) in spread {
            for day in 1..=count {
                n += 1;
                records.push(record(
                    &format!("19{month:02}.{n:05}"),
                    &format!("2019-{month:02}-{day:02}T08:00:00Z"),
                    None,
                ));
            }
        }
        let corpus = labeled(records);
        let series = bucket_events(&corpus, Granularity::Month, &Selector::All);
        let counts: Vec<usize> = series.iter().map(|s| s.m()).collect();
        assert_eq!(counts, vec![3, 0, 5, 12]);
    }
}
