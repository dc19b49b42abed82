//! Semantic Scholar Graph API client.
//!
//! Looks papers up by arXiv id, merges author ids back into the harvested
//! records and fetches per-author influential citation counts. A missing
//! paper (404) is "unmatched" and gets dropped from the analytic corpus by
//! the caller; a transient failure leaves the record "pending" so it can
//! be retried without shrinking the corpus.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use chrono::{Datelike, NaiveDate};
use serde::Deserialize;

use crate::ingest::transport::{fetch_with_retry, RateLimiter, RetryPolicy, Transport};
use crate::ingest::IngestError;
use crate::model::{ArxivId, AuthorRef, CitationStub, Enrichment, PreprintRecord};

pub const S2_API_BASE: &str = "https://api.semanticscholar.org/graph/v1";

const PAPER_FIELDS: &str = "paperId,title,publicationDate,citationCount,s2FieldsOfStudy,authors,citations.paperId,citations.year,citations.publicationDate";
const AUTHOR_FIELDS: &str = "name,influentialCitationCount";

/// Result of a paper lookup: either a populated enrichment plus the
/// author list as Semantic Scholar sees it, or a definitive no-match.
#[derive(Debug, Clone, PartialEq)]
pub enum PaperLookup {
    Found(S2Paper),
    Unmatched,
}

#[derive(Debug, Clone, PartialEq)]
pub struct S2Paper {
    pub enrichment: Enrichment,
    pub authors: Vec<AuthorRef>,
}

pub struct S2Client<'t> {
    transport: &'t dyn Transport,
    base_url: String,
    api_key: Option<String>,
    limiter: RateLimiter,
    retry: RetryPolicy,
}

impl<'t> S2Client<'t> {
    pub fn new(transport: &'t dyn Transport, base_url: impl Into<String>) -> S2Client<'t> {
        S2Client {
            transport,
            base_url: base_url.into(),
            api_key: None,
            limiter: RateLimiter::new(Duration::from_secs(1)),
            retry: RetryPolicy::default(),
        }
    }

    /// Attach the key from S2_API_KEY; sent as the x-api-key header.
    pub fn with_api_key(mut self, api_key: Option<String>) -> S2Client<'t> {
        self.api_key = api_key.filter(|k| !k.trim().is_empty());
        self
    }

    pub fn with_rate_limit(mut self, min_gap: Duration) -> S2Client<'t> {
        self.limiter = RateLimiter::new(min_gap);
        self
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> S2Client<'t> {
        self.retry = retry;
        self
    }

    fn headers(&self) -> Vec<(&str, &str)> {
        match &self.api_key {
            Some(key) => vec![("x-api-key", key.as_str())],
            None => Vec::new(),
        }
    }

    /// Old-style ids contain a slash, which must be escaped inside the
    /// path segment.
    pub fn paper_url(&self, id: &ArxivId) -> String {
        format!(
            "{}/paper/{}?fields={PAPER_FIELDS}",
            self.base_url,
            id.s2_lookup_key().replace('/', "%2F")
        )
    }

    pub fn author_url(&self, author_id: &str) -> String {
        format!("{}/author/{author_id}?fields={AUTHOR_FIELDS}", self.base_url)
    }

    pub fn lookup_paper(&self, id: &ArxivId) -> Result<PaperLookup, IngestError> {
        let url = self.paper_url(id);
        let response =
            fetch_with_retry(self.transport, &self.limiter, &self.retry, &url, &self.headers())?;
        match response.status {
            200 => {}
            404 => return Ok(PaperLookup::Unmatched),
            status => return Err(IngestError::HttpStatus { status, url }),
        }
        let dto: PaperDto =
            serde_json::from_str(&response.body).map_err(|e| IngestError::Payload {
                url: url.clone(),
                reason: e.to_string(),
            })?;
        let paper_id = dto.paper_id.clone().ok_or_else(|| IngestError::Payload {
            url,
            reason: "response without paperId".to_owned(),
        })?;
        Ok(PaperLookup::Found(dto.into_paper(paper_id)))
    }

    /// Influential citation count for one author id; 404 means the author
    /// page is gone, reported as absent rather than an error.
    pub fn lookup_author_influence(&self, author_id: &str) -> Result<Option<u64>, IngestError> {
        let url = self.author_url(author_id);
        let response =
            fetch_with_retry(self.transport, &self.limiter, &self.retry, &url, &self.headers())?;
        match response.status {
            200 => {}
            404 => return Ok(None),
            status => return Err(IngestError::HttpStatus { status, url }),
        }
        let dto: AuthorInfluenceDto =
            serde_json::from_str(&response.body).map_err(|e| IngestError::Payload {
                url,
                reason: e.to_string(),
            })?;
        Ok(Some(dto.influential_citation_count.unwrap_or(0)))
    }
}

#[derive(Deserialize)]
struct PaperDto {
    #[serde(rename = "paperId")]
    paper_id: Option<String>,
    #[serde(default)]
    topics: Vec<TopicDto>,
    #[serde(rename = "s2FieldsOfStudy", default)]
    s2_fields_of_study: Vec<FieldDto>,
    #[serde(rename = "citationCount")]
    citation_count: Option<u64>,
    #[serde(default)]
    citations: Vec<CitationDto>,
    #[serde(rename = "publicationDate")]
    publication_date: Option<String>,
    #[serde(default)]
    authors: Vec<AuthorDto>,
}

#[derive(Deserialize)]
struct TopicDto {
    topic: Option<String>,
}

#[derive(Deserialize)]
struct FieldDto {
    category: Option<String>,
}

#[derive(Deserialize)]
struct CitationDto {
    #[serde(rename = "paperId")]
    paper_id: Option<String>,
    year: Option<i32>,
    #[serde(rename = "publicationDate")]
    publication_date: Option<String>,
}

#[derive(Deserialize)]
struct AuthorDto {
    #[serde(rename = "authorId")]
    author_id: Option<String>,
    name: Option<String>,
}

#[derive(Deserialize)]
struct AuthorInfluenceDto {
    #[serde(rename = "influentialCitationCount")]
    influential_citation_count: Option<u64>,
}

fn parse_date(raw: &str) -> Option<NaiveDate> {
    NaiveDate::parse_from_str(raw, "%Y-%m-%d").ok()
}

impl PaperDto {
    fn into_paper(self, paper_id: String) -> S2Paper {
        let mut topics = Vec::new();
        let mut seen = BTreeSet::new();
        let candidates = self
            .topics
            .into_iter()
            .filter_map(|t| t.topic)
            .chain(self.s2_fields_of_study.into_iter().filter_map(|f| f.category));
        for topic in candidates {
            let topic = topic.trim().to_owned();
            if !topic.is_empty() && seen.insert(topic.clone()) {
                topics.push(topic);
            }
        }

        let mut citations: Vec<CitationStub> = self
            .citations
            .into_iter()
            .filter_map(|c| {
                let citing_s2_id = c.paper_id?;
                let year = c.year?;
                let date = c
                    .publication_date
                    .as_deref()
                    .and_then(parse_date)
                    .filter(|d| d.year() == year);
                Some(CitationStub {
                    citing_s2_id,
                    year,
                    date,
                })
            })
            .collect();
        citations.sort_by(|a, b| (a.year, &a.citing_s2_id).cmp(&(b.year, &b.citing_s2_id)));

        let authors = self
            .authors
            .into_iter()
            .map(|a| AuthorRef {
                name: a.name.unwrap_or_default(),
                s2_author_id: a.author_id,
            })
            .collect();

        S2Paper {
            enrichment: Enrichment {
                paper_id,
                topics,
                citation_count: self.citation_count.unwrap_or(0),
                citations,
                publication_date: self.publication_date.as_deref().and_then(parse_date),
            },
            authors,
        }
    }
}

fn normalize_name(name: &str) -> String {
    name.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// Fill Semantic Scholar author ids into the harvested author list. When
/// both lists have the same length the match is positional; otherwise
/// authors are matched by normalized name, each S2 entry used at most
/// once. Unmatched harvested authors keep a None id.
pub fn merge_author_ids(harvested: &mut [AuthorRef], s2_authors: &[AuthorRef]) {
    if harvested.len() == s2_authors.len() {
        for (target, source) in harvested.iter_mut().zip(s2_authors) {
            if target.s2_author_id.is_none() {
                target.s2_author_id = source.s2_author_id.clone();
            }
        }
        return;
    }
    let mut used = vec![false; s2_authors.len()];
    for target in harvested.iter_mut() {
        if target.s2_author_id.is_some() {
            continue;
        }
        let wanted = normalize_name(&target.name);
        for (i, candidate) in s2_authors.iter().enumerate() {
            if used[i] || candidate.s2_author_id.is_none() {
                continue;
            }
            if normalize_name(&candidate.name) == wanted {
                target.s2_author_id = candidate.s2_author_id.clone();
                used[i] = true;
                break;
            }
        }
    }
}

/// Outcome of an enrichment pass over a corpus.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct EnrichReport {
    pub enriched: usize,
    pub already_enriched: usize,
    pub unmatched: Vec<ArxivId>,
    pub pending: Vec<(ArxivId, String)>,
}

/// Enrich every record lacking Semantic Scholar data, in place. Records
/// already carrying an enrichment are not re-fetched, so a second pass
/// over the same corpus issues no requests for them. Per-record failures
/// end up in `pending` instead of aborting the pass.
pub fn enrich_corpus(client: &S2Client, records: &mut [PreprintRecord]) -> EnrichReport {
    let mut report = EnrichReport::default();
    for record in records.iter_mut() {
        if record.s2.is_some() {
            report.already_enriched += 1;
            continue;
        }
        match client.lookup_paper(&record.arxiv_id) {
            Ok(PaperLookup::Found(paper)) => {
                merge_author_ids(&mut record.authors, &paper.authors);
                record.s2 = Some(paper.enrichment);
                report.enriched += 1;
            }
            Ok(PaperLookup::Unmatched) => report.unmatched.push(record.arxiv_id.clone()),
            Err(e) => report.pending.push((record.arxiv_id.clone(), e.to_string())),
        }
    }
    report
}

/// Fetch influential citation counts for every distinct author id in the
/// corpus. Authors whose page returns 404 are simply absent from the map.
pub fn collect_author_influence(
    client: &S2Client,
    records: &[PreprintRecord],
) -> Result<BTreeMap<String, u64>, IngestError> {
    let ids: BTreeSet<&String> = records
        .iter()
        .flat_map(|r| r.authors.iter())
        .filter_map(|a| a.s2_author_id.as_ref())
        .collect();
    let mut influence = BTreeMap::new();
    for id in ids {
        if let Some(count) = client.lookup_author_influence(id)? {
            influence.insert(id.clone(), count);
        }
    }
    Ok(influence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::transport::{FixtureTransport, HttpResponse};
    use crate::model::VersionEvent;
    use chrono::{DateTime, Utc};

    fn fast_client(transport: &FixtureTransport) -> S2Client<'_> {
        S2Client::new(transport, S2_API_BASE)
            .with_rate_limit(Duration::from_millis(1))
            .with_retry(RetryPolicy {
                max_attempts: 3,
                base_delay: Duration::from_millis(1),
                max_delay: Duration::from_millis(2),
            })
    }

    fn paper_json() -> &'static str {
        r#"{
          "paperId": "abc123",
          "title": "Example",
          "publicationDate": "2019-06-01",
          "citationCount": 42,
          "topics": [{"topic": "Deep learning"}, {"topic": "Convolutional neural network"}],
          "s2FieldsOfStudy": [{"category": "Computer Science"}, {"category": "Deep learning"}],
          "authors": [
            {"authorId": "1001", "name": "Alice Smith"},
            {"authorId": null, "name": "Bob Jones"}
          ],
          "citations": [
            {"paperId": "c1", "year": 2019, "publicationDate": "2019-07-15"},
            {"paperId": "c2", "year": 2020, "publicationDate": "2021-01-01"},
            {"paperId": "c3", "year": null, "publicationDate": "2020-01-01"},
            {"paperId": null, "year": 2020, "publicationDate": null}
          ]
        }"#
    }

    fn stub_record(id: &str) -> PreprintRecord {
        PreprintRecord {
            arxiv_id: ArxivId::new(id).unwrap(),
            title: "T".into(),
            abstract_text: "A".into(),
            authors: vec![
                AuthorRef {
                    name: "Alice Smith".into(),
                    s2_author_id: None,
                },
                AuthorRef {
                    name: "Bob Jones".into(),
                    s2_author_id: None,
                },
            ],
            categories: BTreeSet::from(["cs.AI".to_owned()]),
            versions: vec![VersionEvent {
                number: 1,
                timestamp: DateTime::parse_from_rfc3339("2019-03-10T14:23:07Z")
                    .unwrap()
                    .with_timezone(&Utc),
            }],
            doi: None,
            journal_ref: None,
            s2: None,
        }
    }

    #[test]
    fn paper_url_escapes_old_style_ids() {
        let transport = FixtureTransport::new();
        let client = fast_client(&transport);
        let id = ArxivId::new("cs/9901001").unwrap();
        assert!(client
            .paper_url(&id)
            .starts_with("https://api.semanticscholar.org/graph/v1/paper/arXiv:cs%2F9901001?"));
        let modern = ArxivId::new("1901.00001").unwrap();
        assert!(client
            .paper_url(&modern)
            .contains("/paper/arXiv:1901.00001?fields="));
    }

    #[test]
    fn found_paper_parses_topics_citations_and_dates() {
        let transport = FixtureTransport::new();
        let client = fast_client(&transport);
        let id = ArxivId::new("1901.00001").unwrap();
        transport.push(client.paper_url(&id), HttpResponse::ok(paper_json()));
        let paper = match client.lookup_paper(&id).unwrap() {
            PaperLookup::Found(p) => p,
            PaperLookup::Unmatched => panic!("expected a match"),
        };
        let e = &paper.enrichment;
        assert_eq!(e.paper_id, "abc123");
        assert_eq!(
            e.topics,
            vec!["Deep learning", "Convolutional neural network", "Computer Science"]
        );
        assert_eq!(e.citation_count, 42);
        assert_eq!(e.publication_date, NaiveDate::from_ymd_opt(2019, 6, 1));
        // c3 lacks a year, the fourth lacks an id; c2's date contradicts
        // its year so only the year survives.
        assert_eq!(e.citations.len(), 2);
        assert_eq!(e.citations[0].citing_s2_id, "c1");
        assert_eq!(
            e.citations[0].date,
            NaiveDate::from_ymd_opt(2019, 7, 15)
        );
        assert_eq!(e.citations[1].citing_s2_id, "c2");
        assert_eq!(e.citations[1].year, 2020);
        assert_eq!(e.citations[1].date, None);
        assert_eq!(paper.authors.len(), 2);
        assert_eq!(paper.authors[0].s2_author_id.as_deref(), Some("1001"));
    }

    #[test]
    fn missing_paper_is_unmatched() {
        let transport = FixtureTransport::new();
        let client = fast_client(&transport);
        let id = ArxivId::new("0000.00000").unwrap();
        transport.push(
            client.paper_url(&id),
            HttpResponse::status(404, r#"{"error": "Paper not found"}"#),
        );
        assert_eq!(client.lookup_paper(&id).unwrap(), PaperLookup::Unmatched);
    }

    #[test]
    fn rate_limited_lookup_retries_and_succeeds() {
        let transport = FixtureTransport::new();
        let client = fast_client(&transport);
        let id = ArxivId::new("1901.00001").unwrap();
        transport.push(
            client.paper_url(&id),
            HttpResponse::status(429, "slow down"),
        );
        transport.push(client.paper_url(&id), HttpResponse::ok(paper_json()));
        assert!(matches!(
            client.lookup_paper(&id).unwrap(),
            PaperLookup::Found(_)
        ));
        assert_eq!(transport.remaining(), 0);
    }

    #[test]
    fn author_influence_lookup_handles_missing_authors() {
        let transport = FixtureTransport::new();
        let client = fast_client(&transport);
        transport.push(
            client.author_url("1001"),
            HttpResponse::ok(r#"{"authorId": "1001", "name": "Alice", "influentialCitationCount": 7}"#),
        );
        transport.push(client.author_url("404404"), HttpResponse::status(404, "{}"));
        assert_eq!(client.lookup_author_influence("1001").unwrap(), Some(7));
        assert_eq!(client.lookup_author_influence("404404").unwrap(), None);
    }

    #[test]
    fn positional_author_merge_when_counts_agree() {
        let mut harvested = vec![
            AuthorRef {
                name: "A. Smith".into(),
                s2_author_id: None,
            },
            AuthorRef {
                name: "B. Jones".into(),
                s2_author_id: None,
            },
        ];
        let s2 = vec![
            AuthorRef {
                name: "Alice Smith".into(),
                s2_author_id: Some("1".into()),
            },
            AuthorRef {
                name: "Bob Jones".into(),
                s2_author_id: Some("2".into()),
            },
        ];
        merge_author_ids(&mut harvested, &s2);
        assert_eq!(harvested[0].s2_author_id.as_deref(), Some("1"));
        assert_eq!(harvested[1].s2_author_id.as_deref(), Some("2"));
    }

    #[test]
    fn name_based_merge_when_counts_differ() {
        let mut harvested = vec![
            AuthorRef {
                name: "Bob  Jones".into(),
                s2_author_id: None,
            },
            AuthorRef {
                name: "Carol Wu".into(),
                s2_author_id: None,
            },
        ];
        let s2 = vec![
            AuthorRef {
                name: "Alice Smith".into(),
                s2_author_id: Some("1".into()),
            },
            AuthorRef {
                name: "bob jones".into(),
                s2_author_id: Some("2".into()),
            },
            AuthorRef {
                name: "Dan Poe".into(),
                s2_author_id: Some("4".into()),
            },
        ];
        merge_author_ids(&mut harvested, &s2);
        assert_eq!(harvested[0].s2_author_id.as_deref(), Some("2"));
        assert_eq!(harvested[1].s2_author_id, None);
    }

    #[test]
    fn enrich_corpus_fills_skips_and_reports() {
        let transport = FixtureTransport::new();
        let client = fast_client(&transport);
        let mut records = vec![
            stub_record("1901.00001"),
            stub_record("0000.00000"),
            stub_record("1901.00003"),
        ];
        transport.push(
            client.paper_url(&records[0].arxiv_id),
            HttpResponse::ok(paper_json()),
        );
        transport.push(
            client.paper_url(&records[1].arxiv_id),
            HttpResponse::status(404, "{}"),
        );
        transport.push(
            client.paper_url(&records[2].arxiv_id),
            HttpResponse::status(500, "boom"),
        );
        transport.push(
            client.paper_url(&records[2].arxiv_id),
            HttpResponse::status(500, "boom"),
        );
        transport.push(
            client.paper_url(&records[2].arxiv_id),
            HttpResponse::status(500, "boom"),
        );
        let report = enrich_corpus(&client, &mut records);
        assert_eq!(report.enriched, 1);
        assert_eq!(report.already_enriched, 0);
        assert_eq!(report.unmatched, vec![ArxivId::new("0000.00000").unwrap()]);
        assert_eq!(report.pending.len(), 1);
        assert_eq!(report.pending[0].0.as_str(), "1901.00003");
        assert!(records[0].s2.is_some());
        assert_eq!(records[0].authors[0].s2_author_id.as_deref(), Some("1001"));
        assert!(records[1].s2.is_none());
        assert!(records[2].s2.is_none());

        // A second pass touches nothing that is already enriched.
        let report2 = enrich_corpus(&client, &mut records[..1]);
        assert_eq!(report2.already_enriched, 1);
        assert_eq!(report2.enriched, 0);
        assert_eq!(transport.remaining(), 0);
    }

    #[test]
    fn author_influence_collection_covers_distinct_ids() {
        let transport = FixtureTransport::new();
        let client = fast_client(&transport);
        let mut records = vec![stub_record("1901.00001")];
        records[0].authors[0].s2_author_id = Some("1001".into());
        records[0].authors[1].s2_author_id = Some("1002".into());
        transport.push(
            client.author_url("1001"),
            HttpResponse::ok(r#"{"influentialCitationCount": 5}"#),
        );
        transport.push(
            client.author_url("1002"),
            HttpResponse::status(404, "{}"),
        );
        let influence = collect_author_influence(&client, &records).unwrap();
        assert_eq!(influence.get("1001"), Some(&5));
        assert_eq!(influence.get("1002"), None);
        assert_eq!(influence.len(), 1);
    }
}
