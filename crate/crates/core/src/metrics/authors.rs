//! Author-level series: new-author entry events and productivity.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Datelike, TimeZone, Utc};

use crate::metrics::{Bucket, EventSeries};
use crate::model::{ArxivId, LabeledPreprint, SubfieldLabel};

/// An author's debut: the earliest initial-submission instant over all
/// their corpus preprints, plus the subfield labels of that first preprint
/// (earliest instant, ties broken by ascending arXiv id).
#[derive(Debug, Clone, PartialEq)]
pub struct AuthorDebut {
    pub s2_author_id: String,
    pub instant: DateTime<Utc>,
    pub subfields: BTreeSet<SubfieldLabel>,
}

/// Debut of every id-resolved author, sorted by (instant, author id).
pub fn author_debuts(corpus: &[LabeledPreprint]) -> Vec<AuthorDebut> {
    struct First<'a> {
        instant: DateTime<Utc>,
        arxiv_id: &'a ArxivId,
        subfields: &'a BTreeSet<SubfieldLabel>,
    }
    let mut firsts: BTreeMap<&str, First> = BTreeMap::new();
    for p in corpus {
        let t = p.record.submitted_at();
        for author in &p.record.authors {
            let Some(id) = author.s2_author_id.as_deref() else {
                continue;
            };
            let candidate = First {
                instant: t,
                arxiv_id: &p.record.arxiv_id,
                subfields: &p.subfields,
            };
            firsts
                .entry(id)
                .and_modify(|cur| {
                    if (t, &p.record.arxiv_id) < (cur.instant, cur.arxiv_id) {
                        *cur = First {
                            instant: t,
                            arxiv_id: &p.record.arxiv_id,
                            subfields: &p.subfields,
                        };
                    }
                })
                .or_insert(candidate);
        }
    }
    let mut debuts: Vec<AuthorDebut> = firsts
        .into_iter()
        .map(|(id, first)| AuthorDebut {
            s2_author_id: id.to_owned(),
            instant: first.instant,
            subfields: first.subfields.clone(),
        })
        .collect();
    debuts.sort_by(|a, b| {
        a.instant
            .cmp(&b.instant)
            .then_with(|| a.s2_author_id.cmp(&b.s2_author_id))
    });
    debuts
}

/// First-submission instants of the authors who are new in `year`: those
/// whose debut falls in that calendar year.
pub fn new_author_events(corpus: &[LabeledPreprint], year: i32) -> EventSeries {
    let events = author_debuts(corpus)
        .into_iter()
        .filter(|d| d.instant.year() == year)
        .map(|d| d.instant)
        .collect();
    EventSeries::new(Bucket::Year(year), events)
}

/// Yearly new-author series over the corpus span, optionally restricted to
/// authors whose debut preprint carries a given subfield label.
pub fn new_author_series(
    corpus: &[LabeledPreprint],
    subfield: Option<SubfieldLabel>,
) -> Vec<EventSeries> {
    let debuts = author_debuts(corpus);
    let filtered: Vec<&AuthorDebut> = debuts
        .iter()
        .filter(|d| subfield.is_none_or(|s| d.subfields.contains(&s)))
        .collect();
    let Some((first, last)) = corpus_year_span(corpus) else {
        return Vec::new();
    };
    (first..=last)
        .map(|year| {
            let events = filtered
                .iter()
                .filter(|d| d.instant.year() == year)
                .map(|d| d.instant)
                .collect();
            EventSeries::new(Bucket::Year(year), events)
        })
        .collect()
}

fn corpus_year_span(corpus: &[LabeledPreprint]) -> Option<(i32, i32)> {
    let years = corpus.iter().map(|p| p.record.submitted_at().year());
    let first = years.clone().min()?;
    let last = years.max()?;
    Some((first, last))
}

/// Authors whose corpus-wide debut precedes this instant are "old".
pub fn old_author_cutoff() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2000, 1, 1, 0, 0, 0).unwrap()
}

/// One year of productivity figures. Means are `None` when the underlying
/// population is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductivityRow {
    pub year: i32,
    pub preprints: usize,
    pub mean_authors_per_preprint: Option<f64>,
    /// Over authors active (submitting) in this year.
    pub mean_preprints_per_author: Option<f64>,
    pub active_old_authors: usize,
    pub active_new_authors: usize,
    pub mean_preprints_per_old_author: Option<f64>,
    pub mean_preprints_per_new_author: Option<f64>,
}

/// Per-year team sizes and author productivity, split by the old/new
/// author distinction (debut before 2000 or not). Team size counts every
/// listed author; the per-author means only cover id-resolved authors,
/// since authorship cannot be aggregated without an identity.
pub fn productivity_series(corpus: &[LabeledPreprint]) -> Vec<ProductivityRow> {
    let Some((first, last)) = corpus_year_span(corpus) else {
        return Vec::new();
    };
    let cutoff = old_author_cutoff();
    let debut_of: BTreeMap<String, DateTime<Utc>> = author_debuts(corpus)
        .into_iter()
        .map(|d| (d.s2_author_id, d.instant))
        .collect();

    (first..=last)
        .map(|year| {
            let this_year: Vec<&LabeledPreprint> = corpus
                .iter()
                .filter(|p| p.record.submitted_at().year() == year)
                .collect();
            let preprints = this_year.len();
            let mean_authors_per_preprint = (preprints > 0).then(|| {
                let total: usize = this_year.iter().map(|p| p.record.authors.len()).sum();
                total as f64 / preprints as f64
            });

            let mut per_author: BTreeMap<&str, usize> = BTreeMap::new();
            for p in &this_year {
                for author in &p.record.authors {
                    if let Some(id) = author.s2_author_id.as_deref() {
                        *per_author.entry(id).or_default() += 1;
                    }
                }
            }
            let mean_over = |ids: &[&str]| {
                (!ids.is_empty()).then(|| {
                    let total: usize = ids.iter().map(|id| per_author[*id]).sum();
                    total as f64 / ids.len() as f64
                })
            };
            let all: Vec<&str> = per_author.keys().copied().collect();
            let old: Vec<&str> = all
                .iter()
                .copied()
                .filter(|id| debut_of[*id] < cutoff)
                .collect();
            let new: Vec<&str> = all
                .iter()
                .copied()
                .filter(|id| debut_of[*id] >= cutoff)
                .collect();

            ProductivityRow {
                year,
                preprints,
                mean_authors_per_preprint,
                mean_preprints_per_author: mean_over(&all),
                active_old_authors: old.len(),
                active_new_authors: new.len(),
                mean_preprints_per_old_author: mean_over(&old),
                mean_preprints_per_new_author: mean_over(&new),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::labels::label_corpus;
    use crate::classify::lexicon::ClueLexicon;
    use crate::model::{AuthorRef, Enrichment, PreprintRecord, VersionEvent};

    fn ts(s: &str) -> DateTime<Utc> {
        DateTime::parse_from_rfc3339(s).unwrap().with_timezone(&Utc)
    }

    fn record(id: &str, submitted: &str, authors: &[&str], topic: Option<&str>) -> PreprintRecord {
        PreprintRecord {
            arxiv_id: ArxivId::new(id).unwrap(),
            title: "t".into(),
            abstract_text: "a".into(),
            authors: authors
                .iter()
                .map(|a| AuthorRef {
                    name: format!("Name {a}"),
                    s2_author_id: Some(a.to_string()),
                })
                .collect(),
            categories: BTreeSet::new(),
            versions: vec![VersionEvent {
                number: 1,
                timestamp: ts(submitted),
            }],
            doi: None,
            journal_ref: None,
            s2: Some(Enrichment {
                paper_id: format!("s2-{id}"),
                topics: topic.map(|t| vec![t.to_owned()]).unwrap_or_default(),
                citation_count: 0,
                citations: vec![],
                publication_date: None,
            }),
        }
    }

    fn labeled(records: Vec<PreprintRecord>) -> Vec<LabeledPreprint> {
        label_corpus(&records, &ClueLexicon::builtin()).unwrap().labeled
    }

    #[test]
    fn returning_author_is_not_new() {
        let corpus = labeled(vec![
            record("1801.00001", "2018-01-01T00:00:00Z", &["a"], None),
            record("1901.00001", "2019-01-01T00:00:00Z", &["a", "b"], None),
        ]);
        let series = new_author_events(&corpus, 2019);
        assert_eq!(series.m(), 1);
        assert_eq!(series.events()[0], ts("2019-01-01T00:00:00Z"));
    }

    #[test]
    fn four_authors_two_debut_in_year() {
        let corpus = labeled(vec![
            record("1701.00001", "2017-01-01T00:00:00Z", &["a", "b"], None),
            record("1902.00001", "2019-02-01T00:00:00Z", &["a", "c"], None),
            record("1903.00001", "2019-03-01T00:00:00Z", &["d", "b"], None),
        ]);
        let series = new_author_events(&corpus, 2019);
        assert_eq!(series.m(), 2);
        assert_eq!(
            series.events(),
            &[ts("2019-02-01T00:00:00Z"), ts("2019-03-01T00:00:00Z")]
        );
    }

    #[test]
    fn debut_subfields_come_from_the_first_preprint() {
        let corpus = labeled(vec![
            record("1801.00001", "2018-01-01T00:00:00Z", &["a"], Some("Planning")),
            record("1901.00001", "2019-01-01T00:00:00Z", &["a"], Some("Deep learning")),
        ]);
        let debuts = author_debuts(&corpus);
        assert_eq!(debuts.len(), 1);
        assert_eq!(debuts[0].subfields, BTreeSet::from([SubfieldLabel::Ps]));
    }

    #[test]
    fn debut_tie_on_instant_takes_smaller_arxiv_id() {
        let corpus = labeled(vec![
            record("1901.00002", "2019-01-01T00:00:00Z", &["a"], Some("Deep learning")),
            record("1901.00001", "2019-01-01T00:00:00Z", &["a"], Some("Planning")),
        ]);
        let debuts = author_debuts(&corpus);
        assert_eq!(debuts[0].subfields, BTreeSet::from([SubfieldLabel::Ps]));
    }

    #[test]
    fn new_author_series_respects_subfield_filter() {
        let corpus = labeled(vec![
            record("1801.00001", "2018-01-01T00:00:00Z", &["a"], Some("Deep learning")),
            record("1901.00001", "2019-01-01T00:00:00Z", &["b"], Some("Planning")),
            record("1902.00001", "2019-02-01T00:00:00Z", &["c"], Some("Deep learning")),
        ]);
        let all = new_author_series(&corpus, None);
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].m(), 1);
        assert_eq!(all[1].m(), 2);
        let dl = new_author_series(&corpus, Some(SubfieldLabel::Dl));
        assert_eq!(dl[0].m(), 1);
        assert_eq!(dl[1].m(), 1);
    }

    #[test]
    fn single_preprint_productivity() {
        let corpus = labeled(vec![record(
            "1901.00001",
            "2019-01-01T00:00:00Z",
            &["a", "b", "c"],
            None,
        )]);
        let rows = productivity_series(&corpus);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].mean_authors_per_preprint, Some(3.0));
        assert_eq!(rows[0].mean_preprints_per_author, Some(1.0));
    }

    #[test]
    fn productivity_matches_hand_oracle_with_overlapping_authors() {
        // 2019: p1{a,b}, p2{a}, p3{a,c}, p4{b}. Team sizes 2,1,2,1 -> 1.5.
        // Author counts: a=3, b=2, c=1 -> mean 2.0.
        let corpus = labeled(vec![
            record("1901.00001", "2019-01-01T00:00:00Z", &["a", "b"], None),
            record("1901.00002", "2019-01-02T00:00:00Z", &["a"], None),
            record("1901.00003", "2019-01-03T00:00:00Z", &["a", "c"], None),
            record("1901.00004", "2019-01-04T00:00:00Z", &["b"], None),
        ]);
        let rows = productivity_series(&corpus);
        assert_eq!(rows[0].mean_authors_per_preprint, Some(1.5));
        assert_eq!(rows[0].mean_preprints_per_author, Some(2.0));
    }

    #[test]
    fn old_new_split_uses_the_2000_cutoff() {
        let corpus = labeled(vec![
            record("cs/9901001", "1999-01-01T00:00:00Z", &["old1"], None),
            record("1901.00001", "2019-01-01T00:00:00Z", &["old1", "new1"], None),
            record("1902.00001", "2019-02-01T00:00:00Z", &["old1", "new1"], None),
            record("1903.00001", "2019-03-01T00:00:00Z", &["new2"], None),
        ]);
        let rows = productivity_series(&corpus);
        let y2019 = rows.iter().find(|r| r.year == 2019).unwrap();
        assert_eq!(y2019.active_old_authors, 1);
        assert_eq!(y2019.active_new_authors, 2);
        // 2019 counts: old1 has 2 preprints; new1 has 2, new2 has 1.
        assert_eq!(y2019.mean_preprints_per_old_author, Some(2.0));
        assert_eq!(y2019.mean_preprints_per_new_author, Some(1.5));
        let y1999 = rows.iter().find(|r| r.year == 1999).unwrap();
        assert_eq!(y1999.active_old_authors, 1);
        assert_eq!(y1999.active_new_authors, 0);
        assert_eq!(y1999.mean_preprints_per_new_author, None);
    }

    #[test]
    fn empty_years_between_are_rows_with_empty_means() {
        let corpus = labeled(vec![
            record("1701.00001", "2017-01-01T00:00:00Z", &["a"], None),
            record("1901.00001", "2019-01-01T00:00:00Z", &["b"], None),
        ]);
        let rows = productivity_series(&corpus);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1].year, 2018);
        assert_eq!(rows[1].preprints, 0);
        assert_eq!(rows[1].mean_authors_per_preprint, None);
        assert_eq!(rows[1].mean_preprints_per_author, None);
    }
}
