//! Domain types shared by the whole pipeline.
//!
//! Everything here is immutable after construction and safe to share across
//! threads. Validation lives in [`PreprintRecord::validate`] and is applied
//! at every ingest boundary (OAI parsing, corpus load), so downstream code
//! can rely on the invariants without re-checking them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Datelike, NaiveDate, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by domain-type validation and pure derivations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("empty arXiv identifier")]
    EmptyId,
    #[error("record {id}: version list is empty")]
    NoVersions { id: String },
    #[error("record {id}: version numbers must be consecutive from 1, found {found} at position {position}")]
    NonConsecutiveVersions {
        id: String,
        position: usize,
        found: u32,
    },
    #[error("record {id}: version {version} timestamp precedes version {previous}")]
    NonMonotonicTimestamps {
        id: String,
        version: u32,
        previous: u32,
    },
    #[error("record {id}: citation date {date} falls outside citation year {year}")]
    CitationDateOutsideYear {
        id: String,
        date: NaiveDate,
        year: i32,
    },
    #[error("year {year} is outside the covered range 1993-2019")]
    YearOutOfRange { year: i32 },
}

/// An arXiv identifier, stored verbatim.
///
/// Both the new style (`2301.00001`) and the old style (`cs/9901001`) are
/// first-class; the string doubles as the join key towards Semantic Scholar
/// via [`ArxivId::s2_lookup_key`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArxivId(String);

impl ArxivId {
    pub fn new(id: impl Into<String>) -> Result<Self, ModelError> {
        let id = id.into();
        if id.trim().is_empty() {
            return Err(ModelError::EmptyId);
        }
        Ok(ArxivId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The paper lookup key used by the Semantic Scholar Graph API.
    pub fn s2_lookup_key(&self) -> String {
        format!("arXiv:{}", self.0)
    }
}

impl fmt::Display for ArxivId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for ArxivId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ArxivId::new(s)
    }
}

/// Timestamp (de)serialization: ISO-8601 at second resolution with a `Z`
/// suffix, e.g. `2019-03-10T14:23:07Z`. Parsing accepts any RFC 3339 offset
/// and normalizes to UTC.
pub mod ts_second {
    use chrono::{DateTime, SecondsFormat, Utc};
    use serde::{self, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(dt: &DateTime<Utc>, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&dt.to_rfc3339_opts(SecondsFormat::Secs, true))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<DateTime<Utc>, D::Error> {
        let raw = String::deserialize(de)?;
        DateTime::parse_from_rfc3339(&raw)
            .map(|dt| dt.with_timezone(&Utc))
            .map_err(serde::de::Error::custom)
    }
}

/// One submission or revision event recorded by arXiv, at second resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VersionEvent {
    /// 1-based version number; consecutive within one preprint.
    #[serde(rename = "n")]
    pub number: u32,
    #[serde(rename = "ts", with = "ts_second")]
    pub timestamp: DateTime<Utc>,
}

/// An author as listed on one preprint, optionally resolved to a Semantic
/// Scholar author id during enrichment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorRef {
    pub name: String,
    #[serde(rename = "id")]
    pub s2_author_id: Option<String>,
}

/// A citing paper retained from the Semantic Scholar citation list.
///
/// `date` is frequently absent upstream; `year` is always present (stubs
/// without a year are dropped at parse time).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitationStub {
    #[serde(rename = "id")]
    pub citing_s2_id: String,
    pub year: i32,
    pub date: Option<NaiveDate>,
}

/// Semantic Scholar payload attached to a preprint.
///
/// `citation_count` may exceed the number of retained stubs when the API
/// truncates the citation list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enrichment {
    pub paper_id: String,
    pub topics: Vec<String>,
    pub citation_count: u64,
    pub citations: Vec<CitationStub>,
    pub publication_date: Option<NaiveDate>,
}

/// One arXiv submission with its full ordered version history.
///
/// The serde layout is the corpus line format: one JSON object per line with
/// exactly the fields `arxiv_id, title, abstract, authors, categories,
/// versions[{n,ts}], doi, journal_ref, s2{...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprintRecord {
    pub arxiv_id: ArxivId,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub authors: Vec<AuthorRef>,
    pub categories: BTreeSet<String>,
    pub versions: Vec<VersionEvent>,
    pub doi: Option<String>,
    pub journal_ref: Option<String>,
    /// `None` while enrichment is still pending; analytic corpora require it.
    pub s2: Option<Enrichment>,
}

impl PreprintRecord {
    /// The initial submission instant: the timestamp of version 1.
    pub fn submitted_at(&self) -> DateTime<Utc> {
        self.versions[0].timestamp
    }

    /// The timestamp of the highest version.
    pub fn last_updated_at(&self) -> DateTime<Utc> {
        self.versions[self.versions.len() - 1].timestamp
    }

    /// Number of versions recorded by arXiv (>= 1).
    pub fn version_count(&self) -> u32 {
        self.versions.len() as u32
    }

    /// Number of revisions after the initial submission.
    pub fn updated_version_count(&self) -> u32 {
        self.version_count() - 1
    }

    /// Check every structural invariant of the record.
    pub fn validate(&self) -> Result<(), ModelError> {
        let id = self.arxiv_id.as_str();
        if id.trim().is_empty() {
            return Err(ModelError::EmptyId);
        }
        if self.versions.is_empty() {
            return Err(ModelError::NoVersions { id: id.to_owned() });
        }
        for (i, v) in self.versions.iter().enumerate() {
            if v.number != i as u32 + 1 {
                return Err(ModelError::NonConsecutiveVersions {
                    id: id.to_owned(),
                    position: i,
                    found: v.number,
                });
            }
        }
        for pair in self.versions.windows(2) {
            if pair[1].timestamp < pair[0].timestamp {
                return Err(ModelError::NonMonotonicTimestamps {
                    id: id.to_owned(),
                    version: pair[1].number,
                    previous: pair[0].number,
                });
            }
        }
        if let Some(s2) = &self.s2 {
            for stub in &s2.citations {
                if let Some(date) = stub.date {
                    if date.year() != stub.year {
                        return Err(ModelError::CitationDateOutsideYear {
                            id: id.to_owned(),
                            date,
                            year: stub.year,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// True iff the preprint carries a DOI or a journal reference
/// (non-empty after trimming whitespace), i.e. it has an official version.
pub fn official_status(record: &PreprintRecord) -> bool {
    let filled = |field: &Option<String>| {
        field
            .as_deref()
            .map(|s| !s.trim().is_empty())
            .unwrap_or(false)
    };
    filled(&record.doi) || filled(&record.journal_ref)
}

/// The four development stages partitioning 1993-2019.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Embryo,
    Stable,
    MachineLearning,
    DeepLearning,
}

impl Stage {
    pub const ALL: [Stage; 4] = [
        Stage::Embryo,
        Stage::Stable,
        Stage::MachineLearning,
        Stage::DeepLearning,
    ];

    /// Inclusive calendar-year range of the stage.
    pub fn years(self) -> (i32, i32) {
        match self {
            Stage::Embryo => (1993, 1999),
            Stage::Stable => (2000, 2007),
            Stage::MachineLearning => (2008, 2013),
            Stage::DeepLearning => (2014, 2019),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Stage::Embryo => "embryo",
            Stage::Stable => "stable",
            Stage::MachineLearning => "machine-learning",
            Stage::DeepLearning => "deep-learning",
        }
    }

    pub fn of_year(year: i32) -> Result<Stage, ModelError> {
        Stage::ALL
            .into_iter()
            .find(|s| {
                let (lo, hi) = s.years();
                (lo..=hi).contains(&year)
            })
            .ok_or(ModelError::YearOutOfRange { year })
    }

    pub fn contains_year(self, year: i32) -> bool {
        let (lo, hi) = self.years();
        (lo..=hi).contains(&year)
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Stage containing the UTC calendar year of `t`.
pub fn stage_of(t: DateTime<Utc>) -> Result<Stage, ModelError> {
    Stage::of_year(t.year())
}

/// The nine subfields of the classification scheme.
///
/// Declaration order matches the scheme's numbering and is used as the fixed
/// tie-break order wherever a deterministic choice between labels is needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SubfieldLabel {
    /// Natural language processing
    Nlp,
    /// Knowledge representation and reasoning
    Kr,
    /// Planning and scheduling
    Ps,
    /// Information retrieval (search methodologies)
    Ir,
    /// Robotics
    Ro,
    /// Intelligent agents
    Ia,
    /// Computer vision
    Cv,
    /// Deep learning
    Dl,
    /// Machine learning
    Ml,
}

impl SubfieldLabel {
    pub const ALL: [SubfieldLabel; 9] = [
        SubfieldLabel::Nlp,
        SubfieldLabel::Kr,
        SubfieldLabel::Ps,
        SubfieldLabel::Ir,
        SubfieldLabel::Ro,
        SubfieldLabel::Ia,
        SubfieldLabel::Cv,
        SubfieldLabel::Dl,
        SubfieldLabel::Ml,
    ];

    pub fn code(self) -> &'static str {
        match self {
            SubfieldLabel::Nlp => "NLP",
            SubfieldLabel::Kr => "KR",
            SubfieldLabel::Ps => "PS",
            SubfieldLabel::Ir => "IR",
            SubfieldLabel::Ro => "RO",
            SubfieldLabel::Ia => "IA",
            SubfieldLabel::Cv => "CV",
            SubfieldLabel::Dl => "DL",
            SubfieldLabel::Ml => "ML",
        }
    }

    pub fn from_code(code: &str) -> Option<SubfieldLabel> {
        Self::ALL.into_iter().find(|s| s.code() == code)
    }
}

impl fmt::Display for SubfieldLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Rank-based impact split: top 20% High, middle 40% Mid, last 40% Low.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImpactTier {
    High,
    Mid,
    Low,
}

impl ImpactTier {
    pub fn label(self) -> &'static str {
        match self {
            ImpactTier::High => "high",
            ImpactTier::Mid => "mid",
            ImpactTier::Low => "low",
        }
    }
}

impl fmt::Display for ImpactTier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A preprint together with its derived labels.
///
/// Only enriched records are labeled; `record.s2` is always `Some` here.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPreprint {
    pub record: PreprintRecord,
    /// May be empty: unclassified preprints stay in the corpus for
    /// whole-field series and are absent from per-subfield series.
    pub subfields: BTreeSet<SubfieldLabel>,
    pub impact: ImpactTier,
    pub official: bool,
    pub stage: Stage,
}

impl LabeledPreprint {
    pub fn enrichment(&self) -> &Enrichment {
        self.record
            .s2
            .as_ref()
            .expect("labeled preprints are always enriched")
    }
}

/// An author aggregated across the corpus, keyed by Semantic Scholar id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthorRecord {
    pub s2_author_id: String,
    pub name: String,
    pub influential_citation_count: u64,
    pub preprint_ids: BTreeSet<ArxivId>,
}
