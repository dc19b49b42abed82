//! Subfield classification, impact tiering and author profiling.

pub mod authors;
pub mod labels;
pub mod lexicon;
pub mod tiers;

pub use authors::{build_author_profiles, AuthorProfile, Breadth, PROFILE_MIN_PREPRINTS};
pub use labels::{label_corpus, LabelOutcome};
pub use lexicon::{classify_preprint, ClueLexicon, LexiconError};
pub use tiers::{assign_author_influence_tiers, assign_impact_tiers, assign_tiers};
