//! Seeded synthetic series, cohorts and corpora for the criterion
//! benchmarks.

use std::collections::BTreeSet;

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use innopace_core::classify::ClueLexicon;
use innopace_core::metrics::{Bucket, EventSeries, UpdateCohort, UpdateMember};
use innopace_core::model::{ArxivId, AuthorRef, Enrichment, PreprintRecord, VersionEvent};

/// First instant of a calendar year.
pub fn year_start(year: i32) -> DateTime<Utc> {
    Utc.with_ymd_and_hms(year, 1, 1, 0, 0, 0).unwrap()
}

/// `m` unsorted event timestamps spread over 2019.
pub fn synthetic_events(m: usize, seed: u64) -> Vec<DateTime<Utc>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m)
        .map(|_| year_start(2019) + Duration::seconds(rng.random_range(0..=31_535_999)))
        .collect()
}

/// A year-bucket series built from [`synthetic_events`].
pub fn synthetic_series(m: usize, seed: u64) -> EventSeries {
    EventSeries::new(Bucket::Year(2019), synthetic_events(m, seed))
}

/// A cohort of `m` revised preprints with 2 to 6 versions each.
pub fn synthetic_cohort(m: usize, seed: u64) -> UpdateCohort {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = (0..m)
        .map(|i| {
            let t_initial = year_start(2019) + Duration::seconds(rng.random_range(0..=20_000_000));
            UpdateMember {
                id: ArxivId::new(format!("19{:02}.{:05}", 1 + i / 10_000, 1 + i % 10_000)).unwrap(),
                t_initial,
                t_last: t_initial + Duration::seconds(rng.random_range(3_600..=10_000_000)),
                n_v: rng.random_range(2..=6),
            }
        })
        .collect();
    UpdateCohort::new(2019, members).unwrap()
}

/// `n` enriched records spread over 2012 to 2019, with topics drawn from
/// the builtin clue lexicon, 1 to 4 versions and a shared author pool.
pub fn synthetic_corpus(n: usize, seed: u64) -> Vec<PreprintRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lex = ClueLexicon::builtin();
    let phrases: Vec<String> = lex.entries().map(|(p, _)| p.to_owned()).collect();
    (0..n)
        .map(|i| {
            let submitted =
                year_start(2012) + Duration::seconds(rng.random_range(0..=8 * 31_536_000 - 1));
            let mut versions = vec![VersionEvent {
                number: 1,
                timestamp: submitted,
            }];
            for number in 2..=rng.random_range(1..=4u32) {
                versions.push(VersionEvent {
                    number,
                    timestamp: versions.last().unwrap().timestamp
                        + Duration::seconds(rng.random_range(3_600..=5_000_000)),
                });
            }
            let authors = (0..rng.random_range(1..=3))
                .map(|_| {
                    let id = format!("author-{:03}", rng.random_range(0..500));
                    AuthorRef {
                        name: format!("Name {id}"),
                        s2_author_id: Some(id),
                    }
                })
                .collect();
            let topics = (0..rng.random_range(1..=3))
                .map(|_| phrases[rng.random_range(0..phrases.len())].clone())
                .collect();
            PreprintRecord {
                arxiv_id: ArxivId::new(format!("{:02}01.{:05}", 12 + i / 100_000, 1 + i % 100_000))
                    .unwrap(),
                title: format!("synthetic preprint {i}"),
                abstract_text: "synthetic abstract".into(),
                authors,
                categories: BTreeSet::from(["cs.AI".to_owned()]),
                versions,
                doi: (rng.random_range(0..10) < 3).then(|| format!("10.1000/synth.{i}")),
                journal_ref: None,
                s2: Some(Enrichment {
                    paper_id: format!("s2-synth-{i}"),
                    topics,
                    citation_count: rng.random_range(0..=500),
                    citations: vec![],
                    publication_date: None,
                }),
            }
        })
        .collect()
}
