//! arXiv OAI-PMH harvester.
//!
//! Uses verb=ListRecords with the raw arXiv metadata format, which carries
//! the full per-version submission history at second resolution. The
//! server-side from/until window prefilters by record datestamp (the OAI
//! semantics); the submission-date and category filters that define a
//! harvest are applied client-side on the parsed records.

use std::collections::BTreeSet;
use std::time::Duration;

use chrono::{DateTime, NaiveDate, Utc};
use roxmltree::{Document, Node};
use url::Url;

use crate::ingest::transport::{
    fetch_with_retry, RateLimiter, RetryPolicy, Transport, TransportError,
};
use crate::ingest::IngestError;
use crate::model::{ArxivId, AuthorRef, PreprintRecord, VersionEvent};

pub const ARXIV_OAI_BASE: &str = "https://export.arxiv.org/oai2";

/// arXiv category codes standing in for the field of AI research:
/// artificial intelligence, computation and language, computer vision,
/// machine learning, neural/evolutionary computing, robotics, multiagent
/// systems and information retrieval.
pub const DEFAULT_CATEGORIES: [&str; 8] = [
    "cs.AI", "cs.CL", "cs.CV", "cs.LG", "cs.NE", "cs.RO", "cs.MA", "cs.IR",
];

/// What to harvest: categories, an inclusive submission-date window and
/// the polite minimum gap between requests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarvestSpec {
    pub categories: BTreeSet<String>,
    pub from: NaiveDate,
    pub until: NaiveDate,
    pub rate_limit: Duration,
}

impl HarvestSpec {
    pub fn new(
        categories: impl IntoIterator<Item = String>,
        from: NaiveDate,
        until: NaiveDate,
        rate_limit: Duration,
    ) -> Result<HarvestSpec, IngestError> {
        let categories: BTreeSet<String> = categories.into_iter().collect();
        if categories.is_empty() {
            return Err(IngestError::InvalidSpec {
                reason: "no categories".to_owned(),
            });
        }
        if from > until {
            return Err(IngestError::InvalidSpec {
                reason: format!("from {from} is after until {until}"),
            });
        }
        if rate_limit.is_zero() {
            return Err(IngestError::InvalidSpec {
                reason: "rate limit must be positive".to_owned(),
            });
        }
        Ok(HarvestSpec {
            categories,
            from,
            until,
            rate_limit,
        })
    }

    /// OAI set specs covering the categories: the archive prefix before
    /// the dot ("cs.AI" -> "cs"), sorted.
    pub fn sets(&self) -> BTreeSet<String> {
        self.categories
            .iter()
            .map(|c| c.split('.').next().unwrap_or(c).to_owned())
            .collect()
    }

    fn accepts(&self, record: &PreprintRecord) -> bool {
        let submitted = record.submitted_at().date_naive();
        submitted >= self.from
            && submitted <= self.until
            && record.categories.iter().any(|c| self.categories.contains(c))
    }
}

/// Collapse whitespace runs (OAI text wraps lines with indentation).
fn normalize_text(raw: &str) -> String {
    raw.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn child_text<'a>(node: Node<'a, '_>, name: &str) -> Option<&'a str> {
    node.children()
        .find(|c| c.tag_name().name() == name)
        .and_then(|c| c.text())
}

/// Parse one OAI `<record>` element carrying raw arXiv metadata into a
/// validated [`PreprintRecord`].
pub fn parse_arxiv_record(record: Node) -> Result<PreprintRecord, IngestError> {
    let metadata = record
        .children()
        .find(|c| c.tag_name().name() == "metadata")
        .and_then(|m| m.children().find(|c| c.is_element()))
        .ok_or_else(|| IngestError::MissingField {
            id: header_identifier(record),
            field: "metadata",
        })?;

    let id_text = child_text(metadata, "id")
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| IngestError::MissingField {
            id: header_identifier(record),
            field: "id",
        })?;
    let id = id_text.to_owned();

    let mut versions = Vec::new();
    for version in metadata
        .children()
        .filter(|c| c.tag_name().name() == "version")
    {
        let label = version.attribute("version").unwrap_or_default();
        let number: u32 = label
            .strip_prefix('v')
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| IngestError::MalformedField {
                id: id.clone(),
                field: "version",
                value: label.to_owned(),
            })?;
        let date_text =
            child_text(version, "date").ok_or_else(|| IngestError::MissingField {
                id: id.clone(),
                field: "version date",
            })?;
        let timestamp = DateTime::parse_from_rfc2822(date_text.trim())
            .map(|dt| dt.with_timezone(&Utc))
            .map_err(|_| IngestError::MalformedField {
                id: id.clone(),
                field: "version date",
                value: date_text.trim().to_owned(),
            })?;
        versions.push(VersionEvent { number, timestamp });
    }
    if versions.is_empty() {
        return Err(IngestError::MissingField {
            id,
            field: "versions",
        });
    }
    versions.sort_by_key(|v| v.number);

    let title = normalize_text(child_text(metadata, "title").unwrap_or_default());
    let abstract_text = normalize_text(child_text(metadata, "abstract").unwrap_or_default());
    let authors = parse_author_list(child_text(metadata, "authors").unwrap_or_default());
    let categories: BTreeSet<String> = child_text(metadata, "categories")
        .unwrap_or_default()
        .split_whitespace()
        .map(str::to_owned)
        .collect();
    let non_blank = |s: Option<&str>| {
        s.map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::to_owned)
    };

    let parsed = PreprintRecord {
        arxiv_id: ArxivId::new(&id).map_err(|source| IngestError::InvalidRecord {
            id: id.clone(),
            source,
        })?,
        title,
        abstract_text,
        authors,
        categories,
        versions,
        doi: non_blank(child_text(metadata, "doi")),
        journal_ref: non_blank(child_text(metadata, "journal-ref")),
        s2: None,
    };
    parsed
        .validate()
        .map_err(|source| IngestError::InvalidRecord { id, source })?;
    Ok(parsed)
}

/// The raw format lists authors as one string; split on commas and a
/// final "and". Semantic Scholar supplies the authoritative structured
/// list during enrichment.
fn parse_author_list(raw: &str) -> Vec<AuthorRef> {
    raw.split(',')
        .flat_map(|chunk| {
            let chunk = chunk.trim();
            match chunk.split_once(" and ") {
                Some((a, b)) => vec![a, b],
                None => vec![chunk],
            }
        })
        .map(|name| name.trim().trim_start_matches("and ").trim())
        .filter(|name| !name.is_empty())
        .map(|name| AuthorRef {
            name: normalize_text(name),
            s2_author_id: None,
        })
        .collect()
}

fn header_identifier(record: Node) -> String {
    record
        .children()
        .find(|c| c.tag_name().name() == "header")
        .and_then(|h| child_text(h, "identifier"))
        .unwrap_or("<unknown>")
        .trim()
        .to_owned()
}

fn is_deleted(record: Node) -> bool {
    record
        .children()
        .find(|c| c.tag_name().name() == "header")
        .and_then(|h| h.attribute("status"))
        == Some("deleted")
}

struct Page {
    records: Vec<PreprintRecord>,
    resumption_token: Option<String>,
}

/// Parse one ListRecords response body. `noRecordsMatch` is an empty page,
/// any other OAI error code is surfaced. Deleted records are skipped.
fn parse_page(body: &str) -> Result<Page, IngestError> {
    let doc = Document::parse(body).map_err(|e| IngestError::Xml(e.to_string()))?;
    let root = doc.root_element();

    if let Some(error) = root
        .descendants()
        .find(|n| n.tag_name().name() == "error")
    {
        let code = error.attribute("code").unwrap_or("unknown").to_owned();
        if code == "noRecordsMatch" {
            return Ok(Page {
                records: Vec::new(),
                resumption_token: None,
            });
        }
        return Err(IngestError::Oai {
            code,
            message: error.text().unwrap_or_default().trim().to_owned(),
        });
    }

    let mut records = Vec::new();
    for record in root
        .descendants()
        .filter(|n| n.tag_name().name() == "record")
    {
        if is_deleted(record) {
            continue;
        }
        records.push(parse_arxiv_record(record)?);
    }

    let resumption_token = root
        .descendants()
        .find(|n| n.tag_name().name() == "resumptionToken")
        .and_then(|n| n.text())
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::to_owned);

    Ok(Page {
        records,
        resumption_token,
    })
}

/// Resumable position of an interrupted harvest: the OAI set being paged
/// and the server's resumption token within it, encoded as
/// `set|token`.
fn encode_resume(set: &str, token: &str) -> String {
    format!("{set}|{token}")
}

fn decode_resume(resume: &str) -> Option<(String, String)> {
    resume
        .split_once('|')
        .map(|(set, token)| (set.to_owned(), token.to_owned()))
}

pub struct OaiClient<'t> {
    transport: &'t dyn Transport,
    base_url: String,
    retry: RetryPolicy,
}

impl<'t> OaiClient<'t> {
    pub fn new(transport: &'t dyn Transport, base_url: impl Into<String>) -> OaiClient<'t> {
        OaiClient {
            transport,
            base_url: base_url.into(),
            retry: RetryPolicy::default(),
        }
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> OaiClient<'t> {
        self.retry = retry;
        self
    }

    fn first_page_url(&self, spec: &HarvestSpec, set: &str) -> String {
        let mut url = Url::parse(&self.base_url).expect("valid base url");
        url.query_pairs_mut()
            .append_pair("verb", "ListRecords")
            .append_pair("metadataPrefix", "arXivRaw")
            .append_pair("set", set)
            .append_pair("from", &spec.from.format("%Y-%m-%d").to_string())
            .append_pair("until", &spec.until.format("%Y-%m-%d").to_string());
        url.to_string()
    }

    fn next_page_url(&self, token: &str) -> String {
        let mut url = Url::parse(&self.base_url).expect("valid base url");
        url.query_pairs_mut()
            .append_pair("verb", "ListRecords")
            .append_pair("resumptionToken", token);
        url.to_string()
    }

    /// Harvest every record matching the spec, feeding them to `sink` as
    /// pages arrive. `resume` continues an interrupted run from its
    /// reported token. Transport failures surface as
    /// [`IngestError::Interrupted`] carrying the token to resume from.
    pub fn harvest_into(
        &self,
        spec: &HarvestSpec,
        resume: Option<&str>,
        sink: &mut dyn FnMut(PreprintRecord),
    ) -> Result<(), IngestError> {
        let limiter = RateLimiter::new(spec.rate_limit);
        let resume_state = resume.and_then(decode_resume);
        for set in spec.sets() {
            let mut url = match &resume_state {
                Some((resume_set, _)) if *resume_set > set => continue,
                Some((resume_set, token)) if *resume_set == set => self.next_page_url(token),
                _ => self.first_page_url(spec, &set),
            };
            let mut current_token: Option<String> = resume_state
                .as_ref()
                .filter(|(s, _)| *s == set)
                .map(|(_, t)| t.clone());
            loop {
                let response =
                    fetch_with_retry(self.transport, &limiter, &self.retry, &url, &[]).map_err(
                        |e: TransportError| IngestError::Interrupted {
                            token: current_token.clone().map(|t| encode_resume(&set, &t)),
                            reason: e.to_string(),
                        },
                    )?;
                if response.status != 200 {
                    return Err(IngestError::Interrupted {
                        token: current_token.clone().map(|t| encode_resume(&set, &t)),
                        reason: format!("HTTP {}", response.status),
                    });
                }
                let page = parse_page(&response.body)?;
                for record in page.records {
                    if spec.accepts(&record) {
                        sink(record);
                    }
                }
                match page.resumption_token {
                    Some(token) => {
                        url = self.next_page_url(&token);
                        current_token = Some(token);
                    }
                    None => break,
                }
            }
        }
        Ok(())
    }

    /// Harvest into a vector. Records are not deduplicated here; run the
    /// result through [`crate::ingest::dedupe`] before persisting.
    pub fn harvest(
        &self,
        spec: &HarvestSpec,
        resume: Option<&str>,
    ) -> Result<Vec<PreprintRecord>, IngestError> {
        let mut records = Vec::new();
        self.harvest_into(spec, resume, &mut |r| records.push(r))?;
        Ok(records)
    }
}
