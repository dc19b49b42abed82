//! Harvesting, enrichment and persistence of the preprint corpus.
//!
//! Network access goes through the [`transport::Transport`] trait so every
//! client is testable against recorded fixtures; live endpoints are only
//! touched by the opt-in networked tests.

pub mod dedupe;
pub mod oai;
pub mod s2;
pub mod store;
pub mod transport;

pub use dedupe::dedupe;
pub use oai::{parse_arxiv_record, HarvestSpec, OaiClient, ARXIV_OAI_BASE, DEFAULT_CATEGORIES};
pub use s2::{enrich_corpus, EnrichReport, PaperLookup, S2Client, S2_API_BASE};
pub use store::{load_authors, load_corpus, save_authors, save_corpus, save_labels, StoreError};
pub use transport::{
    FixtureTransport, HttpResponse, HttpTransport, RateLimiter, RetryPolicy, Transport,
    TransportError,
};

use thiserror::Error;

use crate::model::ModelError;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("invalid harvest spec: {reason}")]
    InvalidSpec { reason: String },
    #[error("transport failure: {0}")]
    Transport(#[from] TransportError),
    #[error("harvest interrupted ({reason}); resume token: {}", token.as_deref().unwrap_or("none"))]
    Interrupted {
        token: Option<String>,
        reason: String,
    },
    #[error("OAI error {code}: {message}")]
    Oai { code: String, message: String },
    #[error("malformed XML: {0}")]
    Xml(String),
    #[error("record {id}: missing {field}")]
    MissingField { id: String, field: &'static str },
    #[error("record {id}: malformed {field} {value:?}")]
    MalformedField {
        id: String,
        field: &'static str,
        value: String,
    },
    #[error("record {id}: {source}")]
    InvalidRecord { id: String, source: ModelError },
    #[error("unexpected HTTP status {status} for {url}")]
    HttpStatus { status: u16, url: String },
    #[error("unusable payload from {url}: {reason}")]
    Payload { url: String, reason: String },
}
