//! Author-to-subfield profiling with breadth categories.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};

use crate::classify::tiers::assign_author_influence_tiers;
use crate::model::{ArxivId, AuthorRecord, ImpactTier, LabeledPreprint, SubfieldLabel};

/// Authors are profiled only when they have strictly more than this many
/// preprints in the corpus.
pub const PROFILE_MIN_PREPRINTS: usize = 5;

/// Number of assigned subfields, bucketed into the reported categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Breadth {
    One,
    Two,
    Three,
    Four,
    FivePlus,
}

impl Breadth {
    /// Bucket for a non-empty assigned-subfield set.
    pub fn from_count(count: usize) -> Breadth {
        match count {
            0 => panic!("breadth requires a non-empty subfield set"),
            1 => Breadth::One,
            2 => Breadth::Two,
            3 => Breadth::Three,
            4 => Breadth::Four,
            _ => Breadth::FivePlus,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Breadth::One => "1",
            Breadth::Two => "2",
            Breadth::Three => "3",
            Breadth::Four => "4",
            Breadth::FivePlus => "5+",
        }
    }

    pub const ALL: [Breadth; 5] = [
        Breadth::One,
        Breadth::Two,
        Breadth::Three,
        Breadth::Four,
        Breadth::FivePlus,
    ];
}

/// One profiled author: subfield shares against the eligible-author mean,
/// the resulting assignment, and the influence tier from the corpus-wide
/// ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct AuthorProfile {
    pub author: AuthorRecord,
    pub preprint_count: usize,
    /// Share of the author's preprints labeled with each subfield; all nine
    /// keys are present. Multi-label preprints count towards each label, so
    /// the shares need not sum to one.
    pub subfield_shares: BTreeMap<SubfieldLabel, f64>,
    pub assigned_subfields: BTreeSet<SubfieldLabel>,
    pub breadth: Breadth,
    pub influence_tier: ImpactTier,
    pub first_submission: DateTime<Utc>,
}

/// Aggregate corpus authorship into one record per Semantic Scholar author
/// id. Authors that were never resolved to an id are not representable here
/// and are left out. `influence` maps author ids to influential citation
/// counts; missing ids count as zero.
pub fn collect_author_records(
    corpus: &[LabeledPreprint],
    influence: &BTreeMap<String, u64>,
) -> Vec<AuthorRecord> {
    let mut names: BTreeMap<&str, &str> = BTreeMap::new();
    let mut preprints: BTreeMap<&str, BTreeSet<ArxivId>> = BTreeMap::new();
    for p in corpus {
        for author in &p.record.authors {
            let Some(id) = author.s2_author_id.as_deref() else {
                continue;
            };
            names.entry(id).or_insert(author.name.as_str());
            preprints
                .entry(id)
                .or_default()
                .insert(p.record.arxiv_id.clone());
        }
    }
    preprints
        .into_iter()
        .map(|(id, preprint_ids)| AuthorRecord {
            s2_author_id: id.to_owned(),
            name: names[id].to_owned(),
            influential_citation_count: influence.get(id).copied().unwrap_or(0),
            preprint_ids,
        })
        .collect()
}

/// Profile every author with more than [`PROFILE_MIN_PREPRINTS`] corpus
/// preprints.
///
/// An author's share of a subfield is the fraction of their preprints
/// labeled with it. Assigned subfields are those where the share strictly
/// exceeds the mean share over all eligible authors; when no share clears
/// its mean, the author falls back to the single subfield maximizing
/// share/mean (a zero mean scores 0.0; ties resolve in the fixed subfield
/// order), so the assignment is never empty. Influence tiers come from the
/// ranking over all `authors`, not just the eligible ones.
pub fn build_author_profiles(
    corpus: &[LabeledPreprint],
    authors: &[AuthorRecord],
) -> Vec<AuthorProfile> {
    let by_id: BTreeMap<&str, &LabeledPreprint> = corpus
        .iter()
        .map(|p| (p.record.arxiv_id.as_str(), p))
        .collect();
    let influence_tiers = assign_author_influence_tiers(authors);

    let mut sorted: Vec<&AuthorRecord> = authors.iter().collect();
    sorted.sort_by_key(|a| a.s2_author_id.as_str());

    struct Eligible<'a> {
        author: &'a AuthorRecord,
        count: usize,
        shares: BTreeMap<SubfieldLabel, f64>,
        first_submission: DateTime<Utc>,
    }

    let mut eligible: Vec<Eligible> = Vec::new();
    for author in sorted {
        let found: Vec<&LabeledPreprint> = author
            .preprint_ids
            .iter()
            .filter_map(|id| by_id.get(id.as_str()).copied())
            .collect();
        if found.len() <= PROFILE_MIN_PREPRINTS {
            continue;
        }
        let count = found.len();
        let mut shares = BTreeMap::new();
        for label in SubfieldLabel::ALL {
            let labeled = found.iter().filter(|p| p.subfields.contains(&label)).count();
            shares.insert(label, labeled as f64 / count as f64);
        }
        let first_submission = found
            .iter()
            .map(|p| p.record.submitted_at())
            .min()
            .expect("count > 0");
        eligible.push(Eligible {
            author,
            count,
            shares,
            first_submission,
        });
    }

    let mut mean_shares: BTreeMap<SubfieldLabel, f64> = BTreeMap::new();
    for label in SubfieldLabel::ALL {
        let total: f64 = eligible.iter().map(|e| e.shares[&label]).sum();
        let mean = if eligible.is_empty() {
            0.0
        } else {
            total / eligible.len() as f64
        };
        mean_shares.insert(label, mean);
    }

    eligible
        .into_iter()
        .map(|e| {
            let mut assigned: BTreeSet<SubfieldLabel> = SubfieldLabel::ALL
                .into_iter()
                .filter(|label| e.shares[label] > mean_shares[label])
                .collect();
            if assigned.is_empty() {
                let best = SubfieldLabel::ALL
                    .into_iter()
                    .map(|label| {
                        let mean = mean_shares[&label];
                        let ratio = if mean > 0.0 { e.shares[&label] / mean } else { 0.0 };
                        (label, ratio)
                    })
                    // max_by picks the last maximum; reverse to make ties
                    // resolve to the first subfield in enum order.
                    .rev()
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|(label, _)| label)
                    .expect("nine subfields");
                assigned.insert(best);
            }
            AuthorProfile {
                breadth: Breadth::from_count(assigned.len()),
                influence_tier: influence_tiers[&e.author.s2_author_id],
                author: e.author.clone(),
                preprint_count: e.count,
                subfield_shares: e.shares,
                assigned_subfields: assigned,
                first_submission: e.first_submission,
            }
        })
        .collect()
}
