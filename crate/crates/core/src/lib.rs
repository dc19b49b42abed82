//! Measure the pace of innovation in a research field from arXiv preprint
//! metadata.
//!
//! The library covers the full pipeline: harvesting arXiv submission
//! histories over OAI-PMH, enriching them through the Semantic Scholar
//! Graph API, classifying preprints and authors into subfields and impact
//! tiers, and computing the Average Time Interval (ATI), Innovation Speed
//! (IS), and Update Speed (US) indicators together with the citation-lag
//! and version-history analytics built on top of them.
//!
//! Modules follow the pipeline order:
//!
//! * [`model`]: immutable domain types and the corpus line format
//! * [`ingest`]: OAI-PMH harvester, Semantic Scholar client, corpus store
//! * [`classify`]: clue-word lexicon, tiering, author profiles
//! * [`metrics`]: ATI / IS / US and every derived series
//! * [`report`]: deterministic CSV/SVG emission for the series
//! * [`selfcheck`]: runtime invariant suite over a loaded corpus

pub mod classify;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod report;
pub mod selfcheck;

pub use model::{
    ArxivId, AuthorRecord, AuthorRef, CitationStub, Enrichment, ImpactTier, LabeledPreprint,
    ModelError, PreprintRecord, Stage, SubfieldLabel, VersionEvent,
};
