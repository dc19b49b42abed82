//! Pace indicators and the derived series behind the reports.
//!
//! The three core indicators: the average time interval (ATI) between
//! adjacent events of a cohort, its reciprocal the innovation speed (IS),
//! and the update speed (US) over preprint revision histories. Everything
//! in this module is pure and deterministic.

pub mod authors;
pub mod buckets;
pub mod citations;
pub mod coverage;
pub mod reference;
pub mod update;
pub mod versions;

pub use authors::{
    author_debuts, new_author_events, new_author_series, old_author_cutoff, productivity_series,
    AuthorDebut, ProductivityRow,
};
pub use buckets::{bucket_events, bucket_events_between, corpus_span, stage_series, Selector};
pub use citations::{
    cited_within_ratio, first_citation, first_citation_lag, versions_vs_metric, CitedRatioRow,
    LagRow, QuartileRow, VersionsMetric,
};
pub use coverage::{days_coverage_stage, days_coverage_year};
pub use update::{update_speed, UpdateCohort, UpdateDivisor, UpdateMember};
pub use versions::{version_distribution, VersionDistRow, VERSION_BINS};

use chrono::{DateTime, Datelike, NaiveDate, Utc};
use thiserror::Error;

use crate::model::Stage;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("need at least two events, found {m}")]
    InsufficientEvents { m: usize },
    #[error("all events coincide, speed is undefined")]
    ZeroSpan,
    #[error("need at least two cohort members, found {m}")]
    InsufficientCohort { m: usize },
    #[error("cohort member {id} has zero versions")]
    ZeroVersions { id: String },
    #[error("cohort member {id} has its last version before its first")]
    NegativeSpan { id: String },
    #[error("cohort member {id} has no update interval; tau is undefined under the nv-minus-1 divisor")]
    NoUpdateInterval { id: String },
    #[error("cohort update intervals sum to zero, speed is undefined")]
    ZeroDenominator,
}

/// Exact span between two instants in hours, at nanosecond fidelity.
pub fn hours_between(start: DateTime<Utc>, end: DateTime<Utc>) -> f64 {
    let delta = end - start;
    match delta.num_nanoseconds() {
        Some(ns) => ns as f64 / 3_600_000_000_000.0,
        // Spans beyond ~292 years overflow the nanosecond count; fall back
        // to second resolution there.
        None => delta.num_seconds() as f64 / 3600.0,
    }
}

/// Calendar resolution for bucketed series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Granularity {
    Year,
    Month,
    Day,
}

impl Granularity {
    pub fn as_str(self) -> &'static str {
        match self {
            Granularity::Year => "year",
            Granularity::Month => "month",
            Granularity::Day => "day",
        }
    }

    /// The bucket containing a UTC instant.
    pub fn bucket_of(self, t: DateTime<Utc>) -> Bucket {
        match self {
            Granularity::Year => Bucket::Year(t.year()),
            Granularity::Month => Bucket::Month(t.year(), t.month()),
            Granularity::Day => Bucket::Day(t.date_naive()),
        }
    }
}

/// Key of one series bucket: a calendar unit or a whole stage.
///
/// The derived ordering is chronological within one variant, which is the
/// only way buckets are ever collected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bucket {
    Year(i32),
    Month(i32, u32),
    Day(NaiveDate),
    Stage(Stage),
}

impl Bucket {
    pub fn label(self) -> String {
        match self {
            Bucket::Year(y) => format!("{y}"),
            Bucket::Month(y, m) => format!("{y:04}-{m:02}"),
            Bucket::Day(d) => d.format("%Y-%m-%d").to_string(),
            Bucket::Stage(s) => s.label().to_owned(),
        }
    }

    /// The chronologically following calendar bucket.
    pub(crate) fn next(self) -> Bucket {
        match self {
            Bucket::Year(y) => Bucket::Year(y + 1),
            Bucket::Month(y, 12) => Bucket::Month(y + 1, 1),
            Bucket::Month(y, m) => Bucket::Month(y, m + 1),
            Bucket::Day(d) => Bucket::Day(d.succ_opt().expect("date in range")),
            Bucket::Stage(_) => unreachable!("stage buckets are never iterated"),
        }
    }
}

/// The events of one bucket: sorted UTC instants x_1 <= ... <= x_M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventSeries {
    bucket: Bucket,
    events: Vec<DateTime<Utc>>,
}

impl EventSeries {
    /// Build a series; events are sorted here so the ascending invariant
    /// holds by construction.
    pub fn new(bucket: Bucket, mut events: Vec<DateTime<Utc>>) -> EventSeries {
        events.sort_unstable();
        EventSeries { bucket, events }
    }

    pub fn bucket(&self) -> Bucket {
        self.bucket
    }

    pub fn events(&self) -> &[DateTime<Utc>] {
        &self.events
    }

    /// M, the number of events in the bucket.
    pub fn m(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn pace(&self) -> PaceSample {
        PaceSample::from_series(self)
    }
}

/// Average time interval between adjacent events, in hours:
/// the mean of (x_j - x_{j-1}) over j = 2..M, which telescopes to
/// (x_M - x_1)/(M - 1). Undefined below two events.
pub fn ati_hours(series: &EventSeries) -> Result<f64, MetricsError> {
    let m = series.m();
    if m < 2 {
        return Err(MetricsError::InsufficientEvents { m });
    }
    let events = series.events();
    Ok(hours_between(events[0], events[m - 1]) / (m - 1) as f64)
}

/// Events per hour: the reciprocal of [`ati_hours`]. Additionally undefined
/// when all events coincide.
pub fn innovation_speed(series: &EventSeries) -> Result<f64, MetricsError> {
    let ati = ati_hours(series)?;
    if ati == 0.0 {
        return Err(MetricsError::ZeroSpan);
    }
    Ok(1.0 / ati)
}

/// One bucket's pace figures; `None` marks undefined values, which reports
/// render as empty cells.
#[derive(Debug, Clone, PartialEq)]
pub struct PaceSample {
    pub bucket: Bucket,
    pub n_events: usize,
    pub ati_hours: Option<f64>,
    pub is_per_hour: Option<f64>,
}

impl PaceSample {
    pub fn from_series(series: &EventSeries) -> PaceSample {
        PaceSample {
            bucket: series.bucket(),
            n_events: series.m(),
            ati_hours: ati_hours(series).ok(),
            is_per_hour: innovation_speed(series).ok(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn ts(s: &str) -> DateTime<Utc> {
        DateTime::parse_from_rfc3339(s).unwrap().with_timezone(&Utc)
    }

    fn series(times: &[&str]) -> EventSeries {
        EventSeries::new(Bucket::Year(2019), times.iter().map(|t| ts(t)).collect())
    }

    #[test]
    fn ati_of_two_events_is_their_gap() {
        let s = series(&["2019-01-01T00:00:00Z", "2019-01-01T01:00:00Z"]);
        assert_eq!(ati_hours(&s).unwrap(), 1.0);
    }

    #[test]
    fn ati_telescopes_over_three_events() {
        let s = series(&[
            "2019-01-01T00:00:00Z",
            "2019-01-01T02:00:00Z",
            "2019-01-01T10:00:00Z",
        ]);
        assert_eq!(ati_hours(&s).unwrap(), 5.0);
    }

    #[test]
    fn ati_needs_two_events() {
        let empty = series(&[]);
        let single = series(&["2019-01-01T00:00:00Z"]);
        assert_eq!(ati_hours(&empty), Err(MetricsError::InsufficientEvents { m: 0 }));
        assert_eq!(ati_hours(&single), Err(MetricsError::InsufficientEvents { m: 1 }));
    }

    #[test]
    fn innovation_speed_is_reciprocal() {
        let s = series(&["2019-01-01T00:00:00Z", "2019-01-01T00:30:00Z"]);
        assert_eq!(ati_hours(&s).unwrap(), 0.5);
        assert_eq!(innovation_speed(&s).unwrap(), 2.0);
    }

    #[test]
    fn coincident_events_have_zero_ati_and_no_speed() {
        let s = series(&["2019-01-01T00:00:00Z", "2019-01-01T00:00:00Z"]);
        assert_eq!(ati_hours(&s).unwrap(), 0.0);
        assert_eq!(innovation_speed(&s), Err(MetricsError::ZeroSpan));
        let pace = s.pace();
        assert_eq!(pace.ati_hours, Some(0.0));
        assert_eq!(pace.is_per_hour, None);
    }

    #[test]
    fn events_are_sorted_on_construction() {
        let s = series(&[
            "2019-01-01T10:00:00Z",
            "2019-01-01T00:00:00Z",
            "2019-01-01T02:00:00Z",
        ]);
        assert_eq!(ati_hours(&s).unwrap(), 5.0);
        assert!(s.events().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn hours_between_keeps_subsecond_precision() {
        let a = Utc.with_ymd_and_hms(2019, 1, 1, 0, 0, 0).unwrap();
        let b = a + chrono::Duration::milliseconds(1500);
        assert!((hours_between(a, b) - 1.5 / 3600.0).abs() < 1e-15);
    }

    #[test]
    fn bucket_labels_and_iteration() {
        assert_eq!(Bucket::Year(2019).label(), "2019");
        assert_eq!(Bucket::Month(2019, 3).label(), "2019-03");
        assert_eq!(Bucket::Day(NaiveDate::from_ymd_opt(2019, 3, 10).unwrap()).label(), "2019-03-10");
        assert_eq!(Bucket::Stage(Stage::DeepLearning).label(), "deep-learning");
        assert_eq!(Bucket::Month(2019, 12).next(), Bucket::Month(2020, 1));
        assert_eq!(
            Bucket::Day(NaiveDate::from_ymd_opt(2019, 12, 31).unwrap()).next(),
            Bucket::Day(NaiveDate::from_ymd_opt(2020, 1, 1).unwrap())
        );
    }

    #[test]
    fn granularity_buckets_an_instant() {
        let t = ts("2019-03-10T14:23:07Z");
        assert_eq!(Granularity::Year.bucket_of(t), Bucket::Year(2019));
        assert_eq!(Granularity::Month.bucket_of(t), Bucket::Month(2019, 3));
        assert_eq!(
            Granularity::Day.bucket_of(t),
            Bucket::Day(NaiveDate::from_ymd_opt(2019, 3, 10).unwrap())
        );
    }

    #[test]
    fn pace_sample_reciprocity() {
        let s = series(&[
            "2019-01-01T00:00:00Z",
            "2019-01-02T00:00:00Z",
            "2019-01-04T00:00:00Z",
        ]);
        let pace = s.pace();
        let (ati, is) = (pace.ati_hours.unwrap(), pace.is_per_hour.unwrap());
        assert!((ati * is - 1.0).abs() < 1e-12);
        assert_eq!(pace.n_events, 3);
    }
}
