//! Clue-phrase lexicon for mapping Semantic Scholar topic strings to
//! subfields.
//!
//! Matching is whole-phrase equality on normalized topic strings, never
//! substring search: a preprint is labeled with a subfield iff one of its
//! topics, after normalization, equals a phrase listed under that subfield.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::SubfieldLabel;

/// The lexicon file shipped with the crate, a plain-text transcription of
/// the nine-subfield clue-phrase table.
const BUILTIN_TSV: &str = include_str!("../../data/lexicon.tsv");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("lexicon line {line}: expected 'phrase<TAB>codes'")]
    MissingTab { line: usize },
    #[error("lexicon line {line}: empty phrase")]
    EmptyPhrase { line: usize },
    #[error("lexicon line {line}: no subfield codes")]
    NoCodes { line: usize },
    #[error("lexicon line {line}: unknown subfield code {code:?}")]
    UnknownCode { line: usize, code: String },
    #[error("subfield {code} has no phrases")]
    EmptyCategory { code: &'static str },
}

/// Normalize a phrase or topic string for matching: curly quotes become
/// straight, everything is lowercased, whitespace runs collapse to single
/// spaces and the ends are trimmed. Idempotent.
pub fn normalize_phrase(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    for ch in raw.chars() {
        let ch = match ch {
            '\u{2018}' | '\u{2019}' => '\'',
            '\u{201C}' | '\u{201D}' => '"',
            c => c,
        };
        if ch.is_whitespace() {
            pending_space = true;
            continue;
        }
        if pending_space && !out.is_empty() {
            out.push(' ');
        }
        pending_space = false;
        out.extend(ch.to_lowercase());
    }
    out
}

/// Expand the variant notation of a raw lexicon phrase into normalized
/// match entries. `/` separates full alternative phrasings; a `(s)` or
/// `(es)` marker glued to a word yields both the bare and the suffixed
/// form. "Support vector machine(s)/SVM(s)" therefore produces four
/// entries.
pub fn expand_phrase(raw: &str) -> Vec<String> {
    let mut variants = Vec::new();
    for alternative in raw.split('/') {
        for expanded in expand_plural_markers(alternative) {
            let phrase = normalize_phrase(&expanded);
            if !phrase.is_empty() && !variants.contains(&phrase) {
                variants.push(phrase);
            }
        }
    }
    variants
}

fn expand_plural_markers(phrase: &str) -> Vec<String> {
    let mut hit: Option<(usize, &str)> = None;
    for marker in ["(s)", "(es)"] {
        for (pos, _) in phrase.match_indices(marker) {
            // Only a marker glued to a word counts; "(Multiagent Systems)"
            // style parentheticals stay part of the phrase.
            let glued = phrase[..pos]
                .chars()
                .next_back()
                .is_some_and(|c| c.is_alphanumeric());
            if glued && hit.is_none_or(|(p, _)| pos < p) {
                hit = Some((pos, marker));
            }
        }
    }
    let Some((pos, marker)) = hit else {
        return vec![phrase.to_owned()];
    };
    let suffix = &marker[1..marker.len() - 1];
    let bare = format!("{}{}", &phrase[..pos], &phrase[pos + marker.len()..]);
    let suffixed = format!("{}{suffix}{}", &phrase[..pos], &phrase[pos + marker.len()..]);
    let mut out = expand_plural_markers(&bare);
    for v in expand_plural_markers(&suffixed) {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Normalized clue phrases, each mapped to the set of subfields listing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClueLexicon {
    entries: BTreeMap<String, BTreeSet<SubfieldLabel>>,
}

impl ClueLexicon {
    /// Parse the tab-separated lexicon format. Lines starting with `#` and
    /// blank lines are skipped; every other line is `raw phrase<TAB>codes`
    /// with comma-separated subfield codes. Phrases are expanded via
    /// [`expand_phrase`]; repeats across lines merge into multi-label
    /// entries. Every subfield must end up with at least one phrase.
    pub fn from_tsv(text: &str) -> Result<ClueLexicon, LexiconError> {
        let mut entries: BTreeMap<String, BTreeSet<SubfieldLabel>> = BTreeMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw_line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (phrase_part, codes_part) = raw_line
                .split_once('\t')
                .ok_or(LexiconError::MissingTab { line })?;
            if phrase_part.trim().is_empty() {
                return Err(LexiconError::EmptyPhrase { line });
            }
            let mut labels = BTreeSet::new();
            for code in codes_part.split(',') {
                let code = code.trim();
                if code.is_empty() {
                    continue;
                }
                let label = SubfieldLabel::from_code(code).ok_or_else(|| {
                    LexiconError::UnknownCode {
                        line,
                        code: code.to_owned(),
                    }
                })?;
                labels.insert(label);
            }
            if labels.is_empty() {
                return Err(LexiconError::NoCodes { line });
            }
            for variant in expand_phrase(phrase_part) {
                entries.entry(variant).or_default().extend(labels.iter());
            }
        }
        for label in SubfieldLabel::ALL {
            if !entries.values().any(|set| set.contains(&label)) {
                return Err(LexiconError::EmptyCategory { code: label.code() });
            }
        }
        Ok(ClueLexicon { entries })
    }

    /// The lexicon shipped with the crate.
    pub fn builtin() -> ClueLexicon {
        ClueLexicon::from_tsv(BUILTIN_TSV).expect("builtin lexicon must parse")
    }

    /// Subfields for one already-normalized phrase, if it is a clue phrase.
    pub fn lookup(&self, normalized: &str) -> Option<&BTreeSet<SubfieldLabel>> {
        self.entries.get(normalized)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All (phrase, subfields) entries in lexicographic phrase order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &BTreeSet<SubfieldLabel>)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// Classify one preprint from its topic strings: the union of subfields of
/// every topic that, normalized, equals a clue phrase. The empty set means
/// "unclassified"; such preprints stay in the corpus for whole-field series.
pub fn classify_preprint<S: AsRef<str>>(topics: &[S], lex: &ClueLexicon) -> BTreeSet<SubfieldLabel> {
    let mut labels = BTreeSet::new();
    for topic in topics {
        if let Some(set) = lex.lookup(&normalize_phrase(topic.as_ref())) {
            labels.extend(set.iter());
        }
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;
    use SubfieldLabel::*;

    fn set(labels: &[SubfieldLabel]) -> BTreeSet<SubfieldLabel> {
        labels.iter().copied().collect()
    }

    #[test]
    fn normalize_lowercases_and_collapses_whitespace() {
        assert_eq!(normalize_phrase("  Monte   Carlo\tTree Search "), "monte carlo tree search");
    }

    #[test]
    fn normalize_straightens_curly_quotes() {
        assert_eq!(normalize_phrase("\u{201C}Deep learning\u{201D}"), "\"deep learning\"");
        assert_eq!(normalize_phrase("agent\u{2019}s view"), "agent's view");
    }

    #[test]
    fn normalize_is_idempotent() {
        for raw in ["  Gaussian  Process(es)", "\u{201C}POS Tagging\u{201D}", "n-grams"] {
            let once = normalize_phrase(raw);
            assert_eq!(normalize_phrase(&once), once);
        }
    }

    #[test]
    fn expand_handles_plural_markers_and_aliases() {
        assert_eq!(
            expand_phrase("Support vector machine(s)/SVM(s)"),
            vec!["support vector machine", "support vector machines", "svm", "svms"]
        );
        assert_eq!(expand_phrase("Gaussian process(es)"), vec!["gaussian process", "gaussian processes"]);
        assert_eq!(expand_phrase("Long short term memory/LSTM"), vec!["long short term memory", "lstm"]);
    }

    #[test]
    fn expand_leaves_parenthetical_qualifiers_alone() {
        assert_eq!(
            expand_phrase("Evaluation and analysis (Multiagent Systems)"),
            vec!["evaluation and analysis (multiagent systems)"]
        );
    }

    #[test]
    fn expand_dedupes_variants() {
        assert_eq!(expand_phrase("LDA/LDA"), vec!["lda"]);
    }

    #[test]
    fn builtin_lexicon_loads_and_covers_all_subfields() {
        let lex = ClueLexicon::builtin();
        assert!(lex.len() > 200, "expected a few hundred entries, got {}", lex.len());
        for label in SubfieldLabel::ALL {
            assert!(
                lex.entries().any(|(_, s)| s.contains(&label)),
                "no phrases for {label}"
            );
        }
    }

    #[test]
    fn multi_label_phrases_map_to_unions() {
        let lex = ClueLexicon::builtin();
        assert_eq!(lex.lookup("word2vec"), Some(&set(&[Kr, Dl])));
        assert_eq!(lex.lookup("doc2vec"), Some(&set(&[Kr, Dl])));
        assert_eq!(lex.lookup("structure2vec"), Some(&set(&[Kr, Dl])));
        assert_eq!(lex.lookup("robotic planning"), Some(&set(&[Ps, Ro])));
        assert_eq!(lex.lookup("evolutionary robotics"), Some(&set(&[Ps, Ro])));
        assert_eq!(lex.lookup("evolutionary robotic"), Some(&set(&[Ro])));
    }

    #[test]
    fn classify_matches_whole_phrases_only() {
        let lex = ClueLexicon::builtin();
        assert_eq!(classify_preprint(&["Monte carlo tree search"], &lex), set(&[Ir]));
        assert_eq!(classify_preprint(&["advanced monte carlo tree search methods"], &lex), set(&[]));
        assert_eq!(classify_preprint::<&str>(&[], &lex), set(&[]));
    }

    #[test]
    fn classify_unions_across_topics() {
        let lex = ClueLexicon::builtin();
        let topics = ["Convolutional neural network", "Image restoration", "Super-resolution"];
        assert_eq!(classify_preprint(&topics, &lex), set(&[Cv, Dl]));
    }

    #[test]
    fn classify_normalizes_incoming_topics() {
        let lex = ClueLexicon::builtin();
        assert_eq!(classify_preprint(&["  DEEP   Learning "], &lex), set(&[Dl]));
    }

    #[test]
    fn from_tsv_rejects_malformed_lines() {
        assert_eq!(
            ClueLexicon::from_tsv("Deep learning DL").unwrap_err(),
            LexiconError::MissingTab { line: 1 }
        );
        assert_eq!(
            ClueLexicon::from_tsv("Deep learning\tXX").unwrap_err(),
            LexiconError::UnknownCode { line: 1, code: "XX".into() }
        );
        assert_eq!(
            ClueLexicon::from_tsv("Deep learning\t  ").unwrap_err(),
            LexiconError::NoCodes { line: 1 }
        );
    }

    #[test]
    fn from_tsv_requires_every_subfield() {
        let only_dl = "Deep learning\tDL";
        assert!(matches!(
            ClueLexicon::from_tsv(only_dl).unwrap_err(),
            LexiconError::EmptyCategory { .. }
        ));
    }

    #[test]
    fn from_tsv_merges_repeated_phrases() {
        let text = "Deep learning\tDL\nNatural language processing\tNLP\nKnowledge representation\tKR\nPlanning\tPS\nHeuristic Search\tIR\nRobot control\tRO\nMechanism design\tIA\nComputer vision\tCV\nClustering\tML\nDeep learning\tML";
        let lex = ClueLexicon::from_tsv(text).unwrap();
        assert_eq!(lex.lookup("deep learning"), Some(&set(&[Dl, Ml])));
    }
}
