//! Deterministic emission of the analysis series as CSV, optionally with
//! SVG line charts.
//!
//! Each run loads a corpus, labels it and writes one CSV per requested
//! metric/grouping pair: the publication pace series (count, ati, is), the
//! new-author series, the update-speed series, the citation-lag and
//! cited-ratio series, version distributions, day coverage, productivity
//! and versions-versus-performance quartiles. The CSV is the contract;
//! charts are convenience renderings of the same numbers. Reruns on the
//! same inputs are byte-identical.

pub mod csv;
pub mod svg;

pub use csv::{Cell, Table, CSV_SCHEMA};
pub use svg::{Chart, Series};

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::{Datelike, NaiveDate};
use thiserror::Error;

use crate::classify::authors::collect_author_records;
use crate::classify::{build_author_profiles, label_corpus, Breadth, ClueLexicon, LexiconError};
use crate::ingest::store::{load_authors, load_corpus, StoreError};
use crate::metrics::authors::{author_debuts, new_author_series, AuthorDebut};
use crate::metrics::buckets::{bucket_events_between, corpus_span, stage_series, Selector};
use crate::metrics::citations::{
    cited_within_ratio, first_citation_lag, versions_vs_metric, VersionsMetric,
};
use crate::metrics::coverage::{days_coverage_stage, days_coverage_year};
use crate::metrics::update::{update_speed, UpdateCohort, UpdateDivisor};
use crate::metrics::version_distribution;
use crate::metrics::{Bucket, EventSeries, Granularity};
use crate::model::{ImpactTier, LabeledPreprint, ModelError, Stage, SubfieldLabel};

/// Window for the cited-ratio series, mirroring the three-year citation
/// horizon the ratio figure is based on.
pub const CITED_RATIO_WINDOW_YEARS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Metric {
    Count,
    Ati,
    Is,
    Us,
    NewAuthorIs,
    FirstCitationLag,
    CitedRatio,
    VersionDist,
    DaysCoverage,
    Productivity,
    VersionsVs,
}

impl Metric {
    pub const ALL: [Metric; 11] = [
        Metric::Count,
        Metric::Ati,
        Metric::Is,
        Metric::Us,
        Metric::NewAuthorIs,
        Metric::FirstCitationLag,
        Metric::CitedRatio,
        Metric::VersionDist,
        Metric::DaysCoverage,
        Metric::Productivity,
        Metric::VersionsVs,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Count => "count",
            Metric::Ati => "ati",
            Metric::Is => "is",
            Metric::Us => "us",
            Metric::NewAuthorIs => "new_author_is",
            Metric::FirstCitationLag => "first_citation_lag",
            Metric::CitedRatio => "cited_ratio",
            Metric::VersionDist => "version_dist",
            Metric::DaysCoverage => "days_coverage",
            Metric::Productivity => "productivity",
            Metric::VersionsVs => "versions_vs",
        }
    }

    /// Groupings with a corresponding figure or table in the analysis.
    pub fn valid_groupings(self) -> &'static [Grouping] {
        use Grouping::*;
        match self {
            Metric::Count => &[All, Subfield, Impact, Official, Stage, Breadth, Influence],
            Metric::Ati | Metric::Is => &[All, Subfield, Impact, Official, Stage],
            Metric::Us => &[All, Official],
            Metric::NewAuthorIs => &[All, Subfield, Influence, Breadth],
            Metric::FirstCitationLag | Metric::CitedRatio | Metric::VersionDist => {
                &[All, Official]
            }
            Metric::DaysCoverage => &[All, Stage],
            Metric::Productivity => &[All],
            Metric::VersionsVs => &[All, Impact],
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Metric, String> {
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Metric::ALL.iter().map(|m| m.as_str()).collect();
                format!("unknown metric {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Grouping {
    All,
    Subfield,
    Impact,
    Influence,
    Official,
    Stage,
    Breadth,
}

impl Grouping {
    pub const ALL: [Grouping; 7] = [
        Grouping::All,
        Grouping::Subfield,
        Grouping::Impact,
        Grouping::Influence,
        Grouping::Official,
        Grouping::Stage,
        Grouping::Breadth,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Grouping::All => "all",
            Grouping::Subfield => "subfield",
            Grouping::Impact => "impact",
            Grouping::Influence => "influence",
            Grouping::Official => "official",
            Grouping::Stage => "stage",
            Grouping::Breadth => "breadth",
        }
    }
}

impl fmt::Display for Grouping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Grouping {
    type Err = String;

    fn from_str(s: &str) -> Result<Grouping, String> {
        Grouping::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Grouping::ALL.iter().map(|g| g.as_str()).collect();
                format!("unknown grouping {s:?}; expected one of {}", names.join(", "))
            })
    }
}

/// Every supported metric/grouping pair, one line per metric.
pub fn valid_pairs() -> String {
    Metric::ALL
        .into_iter()
        .map(|m| {
            let groupings: Vec<&str> = m.valid_groupings().iter().map(|g| g.as_str()).collect();
            format!("{}: {}", m.as_str(), groupings.join(", "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Clone)]
pub struct ReportSpec {
    pub corpus: PathBuf,
    pub out_dir: PathBuf,
    pub metric: Metric,
    pub grouping: Grouping,
    pub granularity: Granularity,
    /// Custom clue lexicon; the built-in table when absent.
    pub lexicon: Option<PathBuf>,
    /// Author influence sidecar; defaults to `<corpus>.authors.jsonl`.
    pub authors: Option<PathBuf>,
    pub divisor: UpdateDivisor,
    /// Inclusive submission-date window applied before any computation.
    pub from: Option<NaiveDate>,
    pub until: Option<NaiveDate>,
    pub svg: bool,
}

impl ReportSpec {
    pub fn new(corpus: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> ReportSpec {
        ReportSpec {
            corpus: corpus.into(),
            out_dir: out_dir.into(),
            metric: Metric::Is,
            grouping: Grouping::All,
            granularity: Granularity::Year,
            lexicon: None,
            authors: None,
            divisor: UpdateDivisor::VersionCount,
            from: None,
            until: None,
            svg: false,
        }
    }

    pub fn authors_path(&self) -> PathBuf {
        self.authors
            .clone()
            .unwrap_or_else(|| self.corpus.with_extension("authors.jsonl"))
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        if !self.metric.valid_groupings().contains(&self.grouping) {
            return Err(ReportError::InvalidCombination {
                metric: self.metric.as_str(),
                grouping: self.grouping.as_str(),
                valid: valid_pairs(),
            });
        }
        let granular_ok = matches!(self.metric, Metric::Count | Metric::Ati | Metric::Is)
            && matches!(
                self.grouping,
                Grouping::All | Grouping::Subfield | Grouping::Impact | Grouping::Official
            );
        if self.granularity != Granularity::Year && !granular_ok {
            return Err(ReportError::InvalidGranularity {
                granularity: self.granularity.as_str(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(
        "metric {metric} does not support grouping {grouping}; valid pairs are:\n{valid}"
    )]
    InvalidCombination {
        metric: &'static str,
        grouping: &'static str,
        valid: String,
    },
    #[error("granularity {granularity} only applies to count, ati and is with all, subfield, impact or official grouping")]
    InvalidGranularity { granularity: &'static str },
    #[error("grouping needs the author sidecar at {path}; run enrich to produce it")]
    MissingAuthors { path: String },
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("lexicon: {0}")]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Label(#[from] ModelError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn io_err(path: &Path, source: std::io::Error) -> ReportError {
    ReportError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Run one report: load, label, compute, write. Returns the written file
/// paths in emission order.
pub fn run(spec: &ReportSpec) -> Result<Vec<PathBuf>, ReportError> {
    spec.validate()?;
    let mut corpus = load_corpus(&spec.corpus)?;
    if spec.from.is_some() || spec.until.is_some() {
        corpus.retain(|r| {
            let day = r.submitted_at().date_naive();
            spec.from.is_none_or(|from| day >= from) && spec.until.is_none_or(|until| day <= until)
        });
    }
    let lexicon = match &spec.lexicon {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            ClueLexicon::from_tsv(&text)?
        }
        None => ClueLexicon::builtin(),
    };
    let labeled = label_corpus(&corpus, &lexicon)?.labeled;

    let influence = load_influence(spec)?;
    let tables = build_tables(spec, &labeled, &influence)?;

    fs::create_dir_all(&spec.out_dir).map_err(|e| io_err(&spec.out_dir, e))?;
    let mut written = Vec::new();
    for table in &tables {
        let csv_path = spec.out_dir.join(format!("{}.csv", table.name));
        fs::write(&csv_path, table.to_csv()).map_err(|e| io_err(&csv_path, e))?;
        written.push(csv_path);
        if spec.svg {
            if let Some(chart) = &table.chart {
                let svg_path = spec.out_dir.join(format!("{}.svg", table.name));
                fs::write(&svg_path, svg::render(chart)).map_err(|e| io_err(&svg_path, e))?;
                written.push(svg_path);
            }
        }
    }
    Ok(written)
}

fn load_influence(spec: &ReportSpec) -> Result<BTreeMap<String, u64>, ReportError> {
    let path = spec.authors_path();
    if !path.exists() {
        if matches!(spec.grouping, Grouping::Influence) {
            return Err(ReportError::MissingAuthors {
                path: path.display().to_string(),
            });
        }
        return Ok(BTreeMap::new());
    }
    Ok(load_authors(&path)?
        .into_iter()
        .map(|a| (a.s2_author_id, a.influential_citation_count))
        .collect())
}

fn build_tables(
    spec: &ReportSpec,
    labeled: &[LabeledPreprint],
    influence: &BTreeMap<String, u64>,
) -> Result<Vec<Table>, ReportError> {
    let table = match spec.metric {
        Metric::Count | Metric::Ati | Metric::Is => match spec.grouping {
            Grouping::Stage => stage_table(spec.metric, labeled),
            Grouping::Breadth => breadth_census(labeled, influence),
            Grouping::Influence => influence_census(labeled, influence),
            _ => event_table(spec, labeled),
        },
        Metric::Us => us_table(spec, labeled),
        Metric::NewAuthorIs => new_author_table(spec, labeled, influence)?,
        Metric::FirstCitationLag => lag_table(spec.grouping, labeled),
        Metric::CitedRatio => ratio_table(spec.grouping, labeled),
        Metric::VersionDist => version_dist_table(spec.grouping, labeled),
        Metric::DaysCoverage => coverage_table(spec.grouping, labeled),
        Metric::Productivity => productivity_table(labeled),
        Metric::VersionsVs => versions_vs_table(spec.grouping, labeled),
    };
    Ok(vec![table])
}

fn stem(spec: &ReportSpec) -> String {
    format!("{}_{}", spec.metric.as_str(), spec.grouping.as_str())
}

fn granular_stem(spec: &ReportSpec) -> String {
    format!("{}_{}", stem(spec), spec.granularity.as_str())
}

/// Column name for the single-series (ungrouped) variants.
fn value_column(metric: Metric) -> &'static str {
    match metric {
        Metric::Count => "count",
        Metric::Ati => "ati_hours",
        Metric::Is => "is_per_hour",
        Metric::Us => "us_per_hour",
        _ => unreachable!("no single value column for {metric:?}"),
    }
}

fn group_selectors(metric: Metric, grouping: Grouping) -> Vec<(String, Selector)> {
    match grouping {
        Grouping::All => vec![(value_column(metric).to_owned(), Selector::All)],
        Grouping::Subfield => SubfieldLabel::ALL
            .into_iter()
            .map(|s| (s.code().to_owned(), Selector::Subfield(s)))
            .collect(),
        Grouping::Impact => vec![
            ("high".to_owned(), Selector::Impact(ImpactTier::High)),
            ("low".to_owned(), Selector::Impact(ImpactTier::Low)),
        ],
        Grouping::Official => vec![
            ("official".to_owned(), Selector::Official(true)),
            ("no-official".to_owned(), Selector::Official(false)),
        ],
        _ => unreachable!("selector grouping {grouping:?}"),
    }
}

fn series_value(metric: Metric, series: &EventSeries) -> Option<f64> {
    let pace = series.pace();
    match metric {
        Metric::Count => Some(series.m() as f64),
        Metric::Ati => pace.ati_hours,
        Metric::Is => pace.is_per_hour,
        _ => unreachable!("no event value for {metric:?}"),
    }
}

fn value_cell(metric: Metric, value: Option<f64>) -> Cell {
    match (metric, value) {
        (Metric::Count, Some(v)) => Cell::Int(v as i64),
        (_, v) => Cell::from(v),
    }
}

/// Assemble a wide table plus chart from aligned per-group bucket series.
fn wide_table(
    name: String,
    bucket_column: &str,
    x_labels: Vec<String>,
    groups: Vec<(String, Vec<Option<f64>>)>,
    metric: Metric,
) -> Table {
    let mut columns = vec![bucket_column.to_owned()];
    columns.extend(groups.iter().map(|(label, _)| label.clone()));
    let rows = x_labels
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut row = vec![Cell::from(x.clone())];
            row.extend(groups.iter().map(|(_, values)| value_cell(metric, values[i])));
            row
        })
        .collect();
    let chart = Chart {
        title: name.clone(),
        x_labels,
        series: groups
            .into_iter()
            .map(|(label, values)| Series { label, values })
            .collect(),
    };
    Table {
        name,
        columns,
        rows,
        chart: Some(chart),
    }
}

fn event_table(spec: &ReportSpec, labeled: &[LabeledPreprint]) -> Table {
    let metric = spec.metric;
    let name = granular_stem(spec);
    let Some(span) = corpus_span(labeled) else {
        return wide_table(
            name,
            spec.granularity.as_str(),
            Vec::new(),
            group_selectors(metric, spec.grouping)
                .into_iter()
                .map(|(label, _)| (label, Vec::new()))
                .collect(),
            metric,
        );
    };
    let mut x_labels: Vec<String> = Vec::new();
    let mut groups = Vec::new();
    for (label, selector) in group_selectors(metric, spec.grouping) {
        let series = bucket_events_between(labeled, spec.granularity, &selector, span);
        if x_labels.is_empty() {
            x_labels = series.iter().map(|s| s.bucket().label()).collect();
        }
        groups.push((
            label,
            series.iter().map(|s| series_value(metric, s)).collect(),
        ));
    }
    wide_table(name, spec.granularity.as_str(), x_labels, groups, metric)
}

fn stage_table(metric: Metric, labeled: &[LabeledPreprint]) -> Table {
    let series = stage_series(labeled, &Selector::All);
    let x_labels: Vec<String> = Stage::ALL.into_iter().map(|s| s.label().to_owned()).collect();
    let values: Vec<Option<f64>> = series.iter().map(|s| series_value(metric, s)).collect();
    wide_table(
        format!("{}_stage", metric.as_str()),
        "stage",
        x_labels,
        vec![(value_column(metric).to_owned(), values)],
        metric,
    )
}

fn profiles(
    labeled: &[LabeledPreprint],
    influence: &BTreeMap<String, u64>,
) -> Vec<crate::classify::AuthorProfile> {
    let records = collect_author_records(labeled, influence);
    build_author_profiles(labeled, &records)
}

fn breadth_census(labeled: &[LabeledPreprint], influence: &BTreeMap<String, u64>) -> Table {
    let profiles = profiles(labeled, influence);
    let rows = Breadth::ALL
        .into_iter()
        .map(|b| {
            let count = profiles.iter().filter(|p| p.breadth == b).count();
            vec![Cell::from(b.label()), Cell::from(count)]
        })
        .collect();
    Table {
        name: "count_breadth".to_owned(),
        columns: vec!["breadth".to_owned(), "authors".to_owned()],
        rows,
        chart: None,
    }
}

fn influence_census(labeled: &[LabeledPreprint], influence: &BTreeMap<String, u64>) -> Table {
    let records = collect_author_records(labeled, influence);
    let tiers = crate::classify::assign_author_influence_tiers(&records);
    let rows = [ImpactTier::High, ImpactTier::Mid, ImpactTier::Low]
        .into_iter()
        .map(|tier| {
            let count = tiers.values().filter(|t| **t == tier).count();
            vec![Cell::from(tier.label()), Cell::from(count)]
        })
        .collect();
    Table {
        name: "count_influence".to_owned(),
        columns: vec!["tier".to_owned(), "authors".to_owned()],
        rows,
        chart: None,
    }
}

fn year_span(labeled: &[LabeledPreprint]) -> Option<(i32, i32)> {
    let mut years = labeled.iter().map(|p| p.record.submitted_at().year());
    let first = years.next()?;
    Some(years.fold((first, first), |(lo, hi), y| (lo.min(y), hi.max(y))))
}

fn us_table(spec: &ReportSpec, labeled: &[LabeledPreprint]) -> Table {
    let name = stem(spec);
    let Some((y0, y1)) = year_span(labeled) else {
        return wide_table(name, "year", Vec::new(), Vec::new(), Metric::Us);
    };
    let x_labels: Vec<String> = (y0..=y1).map(|y| y.to_string()).collect();
    let groups = group_selectors(Metric::Us, spec.grouping)
        .into_iter()
        .map(|(label, selector)| {
            let records: Vec<_> = labeled
                .iter()
                .filter(|p| selector.matches(p))
                .map(|p| p.record.clone())
                .collect();
            let values = (y0..=y1)
                .map(|year| {
                    UpdateCohort::from_corpus(&records, year)
                        .ok()
                        .and_then(|cohort| update_speed(&cohort, spec.divisor).ok())
                })
                .collect();
            (label, values)
        })
        .collect();
    wide_table(name, "year", x_labels, groups, Metric::Us)
}

fn debut_is_values(debuts: &[&AuthorDebut], years: (i32, i32)) -> Vec<Option<f64>> {
    (years.0..=years.1)
        .map(|year| {
            let events: Vec<_> = debuts
                .iter()
                .filter(|d| d.instant.year() == year)
                .map(|d| d.instant)
                .collect();
            EventSeries::new(Bucket::Year(year), events).pace().is_per_hour
        })
        .collect()
}

fn new_author_table(
    spec: &ReportSpec,
    labeled: &[LabeledPreprint],
    influence: &BTreeMap<String, u64>,
) -> Result<Table, ReportError> {
    let name = stem(spec);
    if spec.grouping == Grouping::All {
        let series = new_author_series(labeled, None);
        let x_labels: Vec<String> = series.iter().map(|s| s.bucket().label()).collect();
        let mut rows = Vec::new();
        let mut is_values = Vec::new();
        for s in &series {
            let pace = s.pace();
            rows.push(vec![
                Cell::from(s.bucket().label()),
                Cell::from(s.m()),
                Cell::from(pace.is_per_hour),
            ]);
            is_values.push(pace.is_per_hour);
        }
        let chart = Chart {
            title: name.clone(),
            x_labels,
            series: vec![Series {
                label: "is_per_hour".to_owned(),
                values: is_values,
            }],
        };
        return Ok(Table {
            name,
            columns: vec![
                "year".to_owned(),
                "new_authors".to_owned(),
                "is_per_hour".to_owned(),
            ],
            rows,
            chart: Some(chart),
        });
    }

    let Some(years) = year_span(labeled) else {
        return Ok(wide_table(name, "year", Vec::new(), Vec::new(), Metric::Is));
    };
    let x_labels: Vec<String> = (years.0..=years.1).map(|y| y.to_string()).collect();
    let debuts = author_debuts(labeled);
    let groups: Vec<(String, Vec<Option<f64>>)> = match spec.grouping {
        Grouping::Subfield => SubfieldLabel::ALL
            .into_iter()
            .map(|code| {
                let members: Vec<&AuthorDebut> = debuts
                    .iter()
                    .filter(|d| d.subfields.contains(&code))
                    .collect();
                (code.code().to_owned(), debut_is_values(&members, years))
            })
            .collect(),
        Grouping::Influence => {
            if influence.is_empty() {
                return Err(ReportError::MissingAuthors {
                    path: spec.authors_path().display().to_string(),
                });
            }
            let records = collect_author_records(labeled, influence);
            let tiers = crate::classify::assign_author_influence_tiers(&records);
            [(ImpactTier::High, "high"), (ImpactTier::Low, "low")]
                .into_iter()
                .map(|(tier, label)| {
                    let members: Vec<&AuthorDebut> = debuts
                        .iter()
                        .filter(|d| tiers.get(&d.s2_author_id) == Some(&tier))
                        .collect();
                    (label.to_owned(), debut_is_values(&members, years))
                })
                .collect()
        }
        Grouping::Breadth => {
            let by_breadth: BTreeMap<String, Breadth> = profiles(labeled, influence)
                .into_iter()
                .map(|p| (p.author.s2_author_id, p.breadth))
                .collect();
            Breadth::ALL
                .into_iter()
                .map(|b| {
                    let members: Vec<&AuthorDebut> = debuts
                        .iter()
                        .filter(|d| by_breadth.get(&d.s2_author_id) == Some(&b))
                        .collect();
                    (b.label().to_owned(), debut_is_values(&members, years))
                })
                .collect()
        }
        _ => unreachable!("validated grouping"),
    };
    Ok(wide_table(name, "year", x_labels, groups, Metric::Is))
}

/// Official-grouping variants come out in long form: one row per year and
/// group, official before no-official.
fn official_groups(grouping: Grouping) -> Vec<(String, Selector)> {
    match grouping {
        Grouping::All => vec![(String::new(), Selector::All)],
        Grouping::Official => vec![
            ("official".to_owned(), Selector::Official(true)),
            ("no-official".to_owned(), Selector::Official(false)),
        ],
        _ => unreachable!("validated grouping"),
    }
}

fn long_chart(
    title: String,
    rows: &[(i32, String, Option<f64>)],
    grouped: bool,
) -> Option<Chart> {
    let years: Vec<i32> = {
        let mut ys: Vec<i32> = rows.iter().map(|(y, _, _)| *y).collect();
        ys.sort_unstable();
        ys.dedup();
        ys
    };
    if years.is_empty() {
        return None;
    }
    let mut labels: Vec<String> = rows.iter().map(|(_, g, _)| g.clone()).collect();
    labels.dedup();
    let series = labels
        .into_iter()
        .map(|label| {
            let values = years
                .iter()
                .map(|year| {
                    rows.iter()
                        .find(|(y, g, _)| y == year && *g == label)
                        .and_then(|(_, _, v)| *v)
                })
                .collect();
            Series {
                label: if grouped { label } else { title.clone() },
                values,
            }
        })
        .collect();
    Some(Chart {
        title,
        x_labels: years.iter().map(|y| y.to_string()).collect(),
        series,
    })
}

fn lag_table(grouping: Grouping, labeled: &[LabeledPreprint]) -> Table {
    let grouped = grouping == Grouping::Official;
    let name = format!("first_citation_lag_{}", grouping.as_str());
    let mut columns = vec!["year".to_owned()];
    if grouped {
        columns.push("group".to_owned());
    }
    columns.extend(
        ["mean_lag_years", "cited", "uncited", "excluded_bad_dates"]
            .map(str::to_owned),
    );
    let mut rows = Vec::new();
    let mut chart_rows = Vec::new();
    let mut ordered: BTreeMap<(i32, usize), Vec<Cell>> = BTreeMap::new();
    for (gi, (label, selector)) in official_groups(grouping).into_iter().enumerate() {
        for row in first_citation_lag(labeled, &selector) {
            let mut cells = vec![Cell::from(row.year)];
            if grouped {
                cells.push(Cell::from(label.clone()));
            }
            cells.push(Cell::from(row.mean_lag_years));
            cells.push(Cell::from(row.cited));
            cells.push(Cell::from(row.uncited));
            cells.push(Cell::from(row.excluded_bad_dates));
            ordered.insert((row.year, gi), cells);
            chart_rows.push((row.year, label.clone(), row.mean_lag_years));
        }
    }
    rows.extend(ordered.into_values());
    chart_rows.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let chart = long_chart(name.clone(), &chart_rows, grouped);
    Table {
        name,
        columns,
        rows,
        chart,
    }
}

fn ratio_table(grouping: Grouping, labeled: &[LabeledPreprint]) -> Table {
    let grouped = grouping == Grouping::Official;
    let name = format!("cited_ratio_{}", grouping.as_str());
    let mut columns = vec!["year".to_owned()];
    if grouped {
        columns.push("group".to_owned());
    }
    columns.extend(["total", "cited_within_3y", "ratio"].map(str::to_owned));
    let mut ordered: BTreeMap<(i32, usize), Vec<Cell>> = BTreeMap::new();
    let mut chart_rows = Vec::new();
    for (gi, (label, selector)) in official_groups(grouping).into_iter().enumerate() {
        for row in cited_within_ratio(labeled, &selector, CITED_RATIO_WINDOW_YEARS) {
            let mut cells = vec![Cell::from(row.year)];
            if grouped {
                cells.push(Cell::from(label.clone()));
            }
            cells.push(Cell::from(row.total));
            cells.push(Cell::from(row.cited_within));
            cells.push(Cell::from(row.ratio));
            ordered.insert((row.year, gi), cells);
            chart_rows.push((row.year, label.clone(), row.ratio));
        }
    }
    let chart = long_chart(name.clone(), &chart_rows, grouped);
    Table {
        name,
        columns,
        rows: ordered.into_values().collect(),
        chart,
    }
}

fn version_dist_table(grouping: Grouping, labeled: &[LabeledPreprint]) -> Table {
    let grouped = grouping == Grouping::Official;
    let name = format!("version_dist_{}", grouping.as_str());
    let mut columns = vec!["year".to_owned()];
    if grouped {
        columns.push("group".to_owned());
    }
    columns.extend(
        [
            "total", "v1", "v2", "v3", "v4plus", "v1_share", "v2_share", "v3_share",
            "v4plus_share",
        ]
        .map(str::to_owned),
    );
    let mut ordered: BTreeMap<(i32, usize), Vec<Cell>> = BTreeMap::new();
    let mut share_rows = Vec::new();
    for (gi, (label, selector)) in official_groups(grouping).into_iter().enumerate() {
        for row in version_distribution(labeled, &selector) {
            let mut cells = vec![Cell::from(row.year)];
            if grouped {
                cells.push(Cell::from(label.clone()));
            }
            cells.push(Cell::from(row.total));
            for count in row.counts {
                cells.push(Cell::from(count));
            }
            for i in 0..4 {
                cells.push(Cell::from(row.shares.map(|s| s[i])));
            }
            ordered.insert((row.year, gi), cells);
            if !grouped {
                share_rows.push((row.year, row.shares));
            }
        }
    }
    // Chart only for the ungrouped variant: the four version-bin shares.
    let chart = if grouped || share_rows.is_empty() {
        None
    } else {
        let x_labels: Vec<String> = share_rows.iter().map(|(y, _)| y.to_string()).collect();
        let series = crate::metrics::VERSION_BINS
            .iter()
            .enumerate()
            .map(|(i, bin)| Series {
                label: format!("{bin} version(s)"),
                values: share_rows.iter().map(|(_, s)| s.map(|v| v[i])).collect(),
            })
            .collect();
        Some(Chart {
            title: name.clone(),
            x_labels,
            series,
        })
    };
    Table {
        name,
        columns,
        rows: ordered.into_values().collect(),
        chart,
    }
}

fn coverage_table(grouping: Grouping, labeled: &[LabeledPreprint]) -> Table {
    let name = format!("days_coverage_{}", grouping.as_str());
    match grouping {
        Grouping::All => {
            let Some((y0, y1)) = year_span(labeled) else {
                return Table {
                    name,
                    columns: vec!["year".to_owned(), "coverage".to_owned()],
                    rows: Vec::new(),
                    chart: None,
                };
            };
            let values: Vec<(i32, f64)> = (y0..=y1)
                .map(|y| (y, days_coverage_year(labeled, &Selector::All, y)))
                .collect();
            let chart = Chart {
                title: name.clone(),
                x_labels: values.iter().map(|(y, _)| y.to_string()).collect(),
                series: vec![Series {
                    label: "coverage".to_owned(),
                    values: values.iter().map(|(_, v)| Some(*v)).collect(),
                }],
            };
            Table {
                name,
                columns: vec!["year".to_owned(), "coverage".to_owned()],
                rows: values
                    .into_iter()
                    .map(|(y, v)| vec![Cell::from(y), Cell::from(v)])
                    .collect(),
                chart: Some(chart),
            }
        }
        Grouping::Stage => {
            let values: Vec<(&str, f64)> = Stage::ALL
                .into_iter()
                .map(|s| (s.label(), days_coverage_stage(labeled, &Selector::All, s)))
                .collect();
            let chart = Chart {
                title: name.clone(),
                x_labels: values.iter().map(|(s, _)| (*s).to_owned()).collect(),
                series: vec![Series {
                    label: "coverage".to_owned(),
                    values: values.iter().map(|(_, v)| Some(*v)).collect(),
                }],
            };
            Table {
                name,
                columns: vec!["stage".to_owned(), "coverage".to_owned()],
                rows: values
                    .into_iter()
                    .map(|(s, v)| vec![Cell::from(s), Cell::from(v)])
                    .collect(),
                chart: Some(chart),
            }
        }
        _ => unreachable!("validated grouping"),
    }
}

fn productivity_table(labeled: &[LabeledPreprint]) -> Table {
    let rows_data = crate::metrics::productivity_series(labeled);
    let name = "productivity_all".to_owned();
    let columns = [
        "year",
        "preprints",
        "mean_authors_per_preprint",
        "mean_preprints_per_author",
        "active_old_authors",
        "active_new_authors",
        "mean_preprints_per_old_author",
        "mean_preprints_per_new_author",
    ]
    .map(str::to_owned)
    .to_vec();
    let rows = rows_data
        .iter()
        .map(|r| {
            vec![
                Cell::from(r.year),
                Cell::from(r.preprints),
                Cell::from(r.mean_authors_per_preprint),
                Cell::from(r.mean_preprints_per_author),
                Cell::from(r.active_old_authors),
                Cell::from(r.active_new_authors),
                Cell::from(r.mean_preprints_per_old_author),
                Cell::from(r.mean_preprints_per_new_author),
            ]
        })
        .collect();
    let chart = if rows_data.is_empty() {
        None
    } else {
        Some(Chart {
            title: name.clone(),
            x_labels: rows_data.iter().map(|r| r.year.to_string()).collect(),
            series: vec![
                Series {
                    label: "mean_authors_per_preprint".to_owned(),
                    values: rows_data.iter().map(|r| r.mean_authors_per_preprint).collect(),
                },
                Series {
                    label: "mean_preprints_per_author".to_owned(),
                    values: rows_data.iter().map(|r| r.mean_preprints_per_author).collect(),
                },
                Series {
                    label: "mean_preprints_per_old_author".to_owned(),
                    values: rows_data
                        .iter()
                        .map(|r| r.mean_preprints_per_old_author)
                        .collect(),
                },
                Series {
                    label: "mean_preprints_per_new_author".to_owned(),
                    values: rows_data
                        .iter()
                        .map(|r| r.mean_preprints_per_new_author)
                        .collect(),
                },
            ],
        })
    };
    Table {
        name,
        columns,
        rows,
        chart,
    }
}

/// Versions-versus-performance quartiles, computed over preprints with an
/// official version, mirroring the figures it stands in for.
fn versions_vs_table(grouping: Grouping, labeled: &[LabeledPreprint]) -> Table {
    let official: Vec<LabeledPreprint> = labeled.iter().filter(|p| p.official).cloned().collect();
    let grouped = grouping == Grouping::Impact;
    let name = format!("versions_vs_{}", grouping.as_str());
    let mut columns = vec!["metric".to_owned()];
    if grouped {
        columns.push("tier".to_owned());
    }
    columns.extend(["updated_versions", "n", "q1", "median", "q3"].map(str::to_owned));
    let tiers: Vec<(Option<ImpactTier>, &str)> = if grouped {
        vec![(Some(ImpactTier::High), "high"), (Some(ImpactTier::Low), "low")]
    } else {
        vec![(None, "")]
    };
    let mut rows = Vec::new();
    for metric in [
        VersionsMetric::FirstCitedYearOffset,
        VersionsMetric::CitationCount,
        VersionsMetric::TeamSize,
    ] {
        for (tier, tier_label) in &tiers {
            for row in versions_vs_metric(&official, metric, *tier) {
                let mut cells = vec![Cell::from(metric.as_str())];
                if grouped {
                    cells.push(Cell::from(*tier_label));
                }
                cells.push(Cell::from(row.updated_versions));
                cells.push(Cell::from(row.n));
                cells.push(Cell::from(row.q1));
                cells.push(Cell::from(row.median));
                cells.push(Cell::from(row.q3));
                rows.push(cells);
            }
        }
    }
    Table {
        name,
        columns,
        rows,
        chart: None,
    }
}
