//! Rank-based 20/40/40 tier assignment.
//!
//! Items are ranked by count descending with ascending id as the
//! deterministic tie-break. The top ceil(0.2n) land in High, the bottom
//! floor(0.4n) in Low, everything between in Mid. The split depends only on
//! ranks, so any strictly increasing transform of the counts leaves every
//! assignment unchanged.

use std::collections::BTreeMap;

use crate::model::{ArxivId, AuthorRecord, ImpactTier};

/// Tier a list of (id, count) pairs. Duplicate ids collapse to one entry
/// (the last count wins before ranking). Empty input yields an empty map.
pub fn assign_tiers<K: Ord + Clone>(items: &[(K, u64)]) -> BTreeMap<K, ImpactTier> {
    let deduped: BTreeMap<&K, u64> = items.iter().map(|(k, c)| (k, *c)).collect();
    let mut ranked: Vec<(&K, u64)> = deduped.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));

    let n = ranked.len();
    let high = n.div_ceil(5);
    let low = 2 * n / 5;
    ranked
        .into_iter()
        .enumerate()
        .map(|(rank, (id, _))| {
            let tier = if rank < high {
                ImpactTier::High
            } else if rank >= n - low {
                ImpactTier::Low
            } else {
                ImpactTier::Mid
            };
            (id.clone(), tier)
        })
        .collect()
}

/// Tier preprints by citation count.
pub fn assign_impact_tiers(items: &[(ArxivId, u64)]) -> BTreeMap<ArxivId, ImpactTier> {
    assign_tiers(items)
}

/// Tier authors by influential citation count, keyed by Semantic Scholar
/// author id.
pub fn assign_author_influence_tiers(authors: &[AuthorRecord]) -> BTreeMap<String, ImpactTier> {
    let items: Vec<(String, u64)> = authors
        .iter()
        .map(|a| (a.s2_author_id.clone(), a.influential_citation_count))
        .collect();
    assign_tiers(&items)
}
