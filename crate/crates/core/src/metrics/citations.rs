//! Citation reception: first-citation lag, citation-within-window ratios,
//! and per-update-count summaries.

use chrono::{DateTime, Datelike, NaiveDate, TimeZone, Utc};
use std::collections::BTreeMap;

use crate::metrics::buckets::Selector;
use crate::metrics::hours_between;
use crate::model::{CitationStub, ImpactTier, LabeledPreprint};

/// Fixed-length year for lag arithmetic; leap-safe by convention.
pub const HOURS_PER_YEAR: f64 = 365.25 * 24.0;

/// The instant a citation counts from: its full date at midnight UTC when
/// known, otherwise July 1 of its citation year (mid-year minimizes the
/// expected error of the year-only records).
pub fn citation_instant(stub: &CitationStub) -> DateTime<Utc> {
    let date = stub
        .date
        .unwrap_or_else(|| NaiveDate::from_ymd_opt(stub.year, 7, 1).expect("valid fallback date"));
    Utc.from_utc_datetime(&date.and_hms_opt(0, 0, 0).expect("midnight exists"))
}

/// Earliest citation instant of a preprint, if it has any citations.
pub fn first_citation(p: &LabeledPreprint) -> Option<DateTime<Utc>> {
    p.enrichment().citations.iter().map(citation_instant).min()
}

/// One submission year's first-citation lag figures.
#[derive(Debug, Clone, PartialEq)]
pub struct LagRow {
    pub year: i32,
    /// Mean lag in fractional years over the cited preprints; `None` when
    /// no preprint of the year has a usable citation.
    pub mean_lag_years: Option<f64>,
    /// Preprints contributing to the mean.
    pub cited: usize,
    /// Preprints without any citation (excluded from the mean).
    pub uncited: usize,
    /// Preprints whose first citation precedes their submission; excluded
    /// and tallied here as a data-quality signal.
    pub excluded_bad_dates: usize,
}

/// Mean years from submission to first citation, per submission year, over
/// the preprints passing `selector`. Spans the corpus years including
/// empty ones.
pub fn first_citation_lag(corpus: &[LabeledPreprint], selector: &Selector) -> Vec<LagRow> {
    per_year(corpus, selector, |year, preprints| {
        let mut lags = Vec::new();
        let mut uncited = 0usize;
        let mut excluded = 0usize;
        for p in preprints {
            match first_citation(p) {
                None => uncited += 1,
                Some(instant) => {
                    let lag = hours_between(p.record.submitted_at(), instant) / HOURS_PER_YEAR;
                    if lag < 0.0 {
                        excluded += 1;
                    } else {
                        lags.push(lag);
                    }
                }
            }
        }
        LagRow {
            year,
            mean_lag_years: (!lags.is_empty())
                .then(|| lags.iter().sum::<f64>() / lags.len() as f64),
            cited: lags.len(),
            uncited,
            excluded_bad_dates: excluded,
        }
    })
}

/// One submission year's share of preprints cited within the window.
#[derive(Debug, Clone, PartialEq)]
pub struct CitedRatioRow {
    pub year: i32,
    pub total: usize,
    pub cited_within: usize,
    /// `None` when the year has no preprints.
    pub ratio: Option<f64>,
}

/// Fraction of each year's preprints receiving at least one citation
/// within `window_years` of submission (lag in [0, window]).
pub fn cited_within_ratio(
    corpus: &[LabeledPreprint],
    selector: &Selector,
    window_years: f64,
) -> Vec<CitedRatioRow> {
    per_year(corpus, selector, |year, preprints| {
        let total = preprints.len();
        let cited_within = preprints
            .iter()
            .filter(|p| {
                p.enrichment().citations.iter().any(|stub| {
                    let lag = hours_between(p.record.submitted_at(), citation_instant(stub))
                        / HOURS_PER_YEAR;
                    (0.0..=window_years).contains(&lag)
                })
            })
            .count();
        CitedRatioRow {
            year,
            total,
            cited_within,
            ratio: (total > 0).then(|| cited_within as f64 / total as f64),
        }
    })
}

fn per_year<T>(
    corpus: &[LabeledPreprint],
    selector: &Selector,
    mut f: impl FnMut(i32, &[&LabeledPreprint]) -> T,
) -> Vec<T> {
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
            let of_year: Vec<&LabeledPreprint> = selected
                .iter()
                .copied()
                .filter(|p| p.record.submitted_at().year() == year)
                .collect();
            f(year, &of_year)
        })
        .collect()
}

/// The per-preprint quantity summarized against updated-version counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VersionsMetric {
    /// Calendar year of first citation minus calendar year of submission.
    /// Only cited preprints contribute.
    FirstCitedYearOffset,
    CitationCount,
    TeamSize,
}

impl VersionsMetric {
    pub fn as_str(self) -> &'static str {
        match self {
            VersionsMetric::FirstCitedYearOffset => "first-cited-year-offset",
            VersionsMetric::CitationCount => "citation-count",
            VersionsMetric::TeamSize => "team-size",
        }
    }

    fn value(self, p: &LabeledPreprint) -> Option<f64> {
        match self {
            VersionsMetric::FirstCitedYearOffset => first_citation(p)
                .map(|instant| (instant.year() - p.record.submitted_at().year()) as f64),
            VersionsMetric::CitationCount => Some(p.enrichment().citation_count as f64),
            VersionsMetric::TeamSize => Some(p.record.authors.len() as f64),
        }
    }
}

/// Quartile summary of one updated-version-count group.
#[derive(Debug, Clone, PartialEq)]
pub struct QuartileRow {
    pub updated_versions: u32,
    pub n: usize,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

/// Group preprints by updated-version count (N_v - 1) and summarize the
/// metric per group. Empty groups emit no row; rows come in ascending
/// update-count order.
pub fn versions_vs_metric(
    corpus: &[LabeledPreprint],
    metric: VersionsMetric,
    tier: Option<ImpactTier>,
) -> Vec<QuartileRow> {
    let mut groups: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for p in corpus {
        if tier.is_some_and(|t| p.impact != t) {
            continue;
        }
        if let Some(value) = metric.value(p) {
            groups
                .entry(p.record.updated_version_count())
                .or_default()
                .push(value);
        }
    }
    groups
        .into_iter()
        .map(|(updated_versions, mut values)| {
            values.sort_by(f64::total_cmp);
            QuartileRow {
                updated_versions,
                n: values.len(),
                q1: quantile_sorted(&values, 0.25),
                median: quantile_sorted(&values, 0.5),
                q3: quantile_sorted(&values, 0.75),
            }
        })
        .collect()
}

/// Linearly interpolated quantile of an ascending slice: index
/// h = (n-1)p, value v[floor(h)] + (h - floor(h)) * (v[ceil(h)] - v[floor(h)]).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty slice");
    assert!((0.0..=1.0).contains(&p));
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
