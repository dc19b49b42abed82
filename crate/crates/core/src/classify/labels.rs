//! Corpus-wide labeling: subfields, impact tier, official status, stage.

use std::collections::BTreeMap;

use crate::classify::lexicon::{classify_preprint, ClueLexicon};
use crate::classify::tiers::assign_impact_tiers;
use crate::model::{
    official_status, stage_of, ArxivId, ImpactTier, LabeledPreprint, ModelError, PreprintRecord,
    SubfieldLabel,
};

/// Result of labeling a corpus. Input order is preserved in `labeled`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelOutcome {
    pub labeled: Vec<LabeledPreprint>,
    /// Records without Semantic Scholar enrichment; they carry no topics or
    /// citation counts and cannot be labeled.
    pub skipped_unenriched: Vec<ArxivId>,
}

impl LabelOutcome {
    /// Preprints per subfield; multi-label preprints count once per label.
    pub fn subfield_counts(&self) -> BTreeMap<SubfieldLabel, usize> {
        let mut counts = BTreeMap::new();
        for label in SubfieldLabel::ALL {
            counts.insert(label, 0);
        }
        for p in &self.labeled {
            for s in &p.subfields {
                *counts.get_mut(s).expect("all labels preset") += 1;
            }
        }
        counts
    }

    pub fn unclassified_count(&self) -> usize {
        self.labeled.iter().filter(|p| p.subfields.is_empty()).count()
    }

    pub fn tier_count(&self, tier: ImpactTier) -> usize {
        self.labeled.iter().filter(|p| p.impact == tier).count()
    }

    pub fn official_count(&self) -> usize {
        self.labeled.iter().filter(|p| p.official).count()
    }
}

/// Label every enriched record of the corpus: subfields from the topic
/// lexicon, impact tier from the corpus-wide citation ranking, official
/// status from DOI or journal reference, stage from the submission instant.
///
/// Unenriched records are reported, not labeled. Errors only when a
/// submission falls outside the covered 1993-2019 range.
pub fn label_corpus(
    corpus: &[PreprintRecord],
    lex: &ClueLexicon,
) -> Result<LabelOutcome, ModelError> {
    let mut enriched: Vec<&PreprintRecord> = Vec::new();
    let mut skipped_unenriched = Vec::new();
    for record in corpus {
        match &record.s2 {
            Some(_) => enriched.push(record),
            None => skipped_unenriched.push(record.arxiv_id.clone()),
        }
    }

    let citation_items: Vec<(ArxivId, u64)> = enriched
        .iter()
        .map(|r| {
            let s2 = r.s2.as_ref().expect("filtered to enriched");
            (r.arxiv_id.clone(), s2.citation_count)
        })
        .collect();
    let impact = assign_impact_tiers(&citation_items);

    let mut labeled = Vec::with_capacity(enriched.len());
    for record in enriched {
        let s2 = record.s2.as_ref().expect("filtered to enriched");
        labeled.push(LabeledPreprint {
            subfields: classify_preprint(&s2.topics, lex),
            impact: impact[&record.arxiv_id],
            official: official_status(record),
            stage: stage_of(record.submitted_at())?,
            record: record.clone(),
        });
    }
    Ok(LabelOutcome {
        labeled,
        skipped_unenriched,
    })
}
