//! Index-term analysis: tokenization, lemmatization, character n-grams, and
//! corpus statistics.
//!
//! A segment is turned into a multiset of index terms under one of three
//! modes: surface word forms, lemmatized forms (unambiguous forms replaced by
//! their citation forms), or within-token character n-grams. The multisets
//! feed the vector stage; the statistics mirror the usual type/token report.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpusio::{Document, LemmaTable, Segment, Stoplist};
use crate::error::{Error, Result};

/// Default character n-gram size. Trigrams tend to beat longer n-grams for
/// cohesion tracking, capturing stem overlap between inflected forms.
pub const DEFAULT_NGRAM: usize = 3;

/// Default padding character surrounding each token before n-gram windows.
pub const DEFAULT_PAD: char = '_';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalysisMode {
    Surface,
    Lemmatized,
    CharNgram,
}

/// Configuration of the term-analysis stage.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub mode: AnalysisMode,
    /// N-gram size, used only in [`AnalysisMode::CharNgram`].
    pub n: usize,
    pub pad: char,
    /// Forms removed from the token stream before term mapping. `None`
    /// disables stoplisting (the default).
    pub stoplist: Option<Stoplist>,
    /// Required in [`AnalysisMode::Lemmatized`].
    pub lemma_table: Option<LemmaTable>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig::surface()
    }
}

impl AnalysisConfig {
    pub fn surface() -> AnalysisConfig {
        AnalysisConfig {
            mode: AnalysisMode::Surface,
            n: DEFAULT_NGRAM,
            pad: DEFAULT_PAD,
            stoplist: None,
            lemma_table: None,
        }
    }

    pub fn lemmatized(table: LemmaTable) -> AnalysisConfig {
        AnalysisConfig {
            mode: AnalysisMode::Lemmatized,
            lemma_table: Some(table),
            ..AnalysisConfig::surface()
        }
    }

    pub fn char_ngram(n: usize) -> AnalysisConfig {
        AnalysisConfig {
            mode: AnalysisMode::CharNgram,
            n,
            ..AnalysisConfig::surface()
        }
    }

    pub fn with_stoplist(mut self, stoplist: Stoplist) -> AnalysisConfig {
        self.stoplist = Some(stoplist);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode == AnalysisMode::Lemmatized && self.lemma_table.is_none() {
            return Err(Error::InvalidConfig(
                "lemmatized mode requires a lemma table".to_string(),
            ));
        }
        if self.mode == AnalysisMode::CharNgram && !(2..=8).contains(&self.n) {
            return Err(Error::InvalidConfig(format!(
                "n-gram size must be in 2..=8, got {}",
                self.n
            )));
        }
        Ok(())
    }
}

/// The term multiset of one segment, before idf.tf weighting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzedSegment {
    pub index: usize,
    /// Index term -> occurrence count (all counts positive).
    pub terms: BTreeMap<String, usize>,
    /// Tokens produced by tokenization, before stoplisting and term
    /// expansion.
    pub token_count: usize,
}

/// Type/token statistics for a document under one analysis configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub tokens: usize,
    pub surface_types: usize,
    /// Distinct terms after the configured mode's mapping.
    pub analyzed_types: usize,
}

/// Splits text into lowercase word tokens.
///
/// Words are whitespace-separated; characters that are neither letters nor
/// intra-word hyphens/apostrophes are stripped, and tokens left empty
/// (numbers, punctuation) are removed. Order is preserved.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for word in text.split_whitespace() {
        let chars: Vec<char> = word.chars().collect();
        let mut kept = String::new();
        for (i, &c) in chars.iter().enumerate() {
            let intra_word_joiner = (c == '-' || c == '\'')
                && i > 0
                && chars[i - 1].is_alphabetic()
                && i + 1 < chars.len()
                && chars[i + 1].is_alphabetic();
            if c.is_alphabetic() || intra_word_joiner {
                kept.push(c);
            }
        }
        if !kept.is_empty() {
            tokens.push(kept.to_lowercase());
        }
    }
    tokens
}

/// Replaces every token present in the table by its lemma; unknown tokens
/// pass through unchanged. Length is preserved.
pub fn lemmatize(tokens: &[String], table: &LemmaTable) -> Vec<String> {
    tokens
        .iter()
        .map(|t| table.lemma(t).unwrap_or(t).to_string())
        .collect()
}

/// Removes all tokens equal to a stoplist form.
pub fn apply_stoplist(tokens: &[String], stoplist: &Stoplist) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| !stoplist.contains(t))
        .cloned()
        .collect()
}

/// Expands tokens into a multiset of within-token character n-grams.
///
/// Each token is padded with exactly one `pad` character on each side, and
/// every window of `n` characters becomes a term. A token whose padded length
/// is below `n` contributes the padded token itself as a single term.
pub fn char_ngrams(tokens: &[String], n: usize, pad: char) -> BTreeMap<String, usize> {
    let mut terms: BTreeMap<String, usize> = BTreeMap::new();
    for token in tokens {
        let mut padded: Vec<char> = Vec::with_capacity(token.len() + 2);
        padded.push(pad);
        padded.extend(token.chars());
        padded.push(pad);
        if padded.len() < n {
            *terms.entry(padded.iter().collect()).or_insert(0) += 1;
        } else {
            for window in padded.windows(n) {
                *terms.entry(window.iter().collect()).or_insert(0) += 1;
            }
        }
    }
    terms
}

fn count_terms(tokens: Vec<String>) -> BTreeMap<String, usize> {
    let mut terms: BTreeMap<String, usize> = BTreeMap::new();
    for token in tokens {
        *terms.entry(token).or_insert(0) += 1;
    }
    terms
}

fn analyze_segment(segment: &Segment, cfg: &AnalysisConfig) -> AnalyzedSegment {
    let tokens = tokenize(&segment.text);
    let token_count = tokens.len();
    let tokens = match &cfg.stoplist {
        Some(stoplist) => apply_stoplist(&tokens, stoplist),
        None => tokens,
    };
    let terms = match cfg.mode {
        AnalysisMode::Surface => count_terms(tokens),
        AnalysisMode::Lemmatized => {
            count_terms(lemmatize(&tokens, cfg.lemma_table.as_ref().unwrap()))
        }
        AnalysisMode::CharNgram => char_ngrams(&tokens, cfg.n, cfg.pad),
    };
    AnalyzedSegment {
        index: segment.index,
        terms,
        token_count,
    }
}

/// Analyzes every segment of a document: tokenize, optional stoplist, then
/// the configured term mapping. Headings are analyzed like paragraphs so the
/// signal index stays in step with the segment index.
pub fn analyze_document(doc: &Document, cfg: &AnalysisConfig) -> Result<Vec<AnalyzedSegment>> {
    cfg.validate()?;
    Ok(doc
        .segments
        .iter()
        .map(|seg| analyze_segment(seg, cfg))
        .collect())
}

/// Computes type/token statistics: raw token and surface-type counts over
/// all segments, plus the distinct term count after the configured mapping.
pub fn corpus_stats(doc: &Document, cfg: &AnalysisConfig) -> Result<CorpusStats> {
    cfg.validate()?;
    let mut tokens = 0usize;
    let mut surface: BTreeSet<String> = BTreeSet::new();
    for seg in &doc.segments {
        for token in tokenize(&seg.text) {
            tokens += 1;
            surface.insert(token);
        }
    }
    let mut analyzed: BTreeSet<String> = BTreeSet::new();
    for seg in analyze_document(doc, cfg)? {
        analyzed.extend(seg.terms.into_keys());
    }
    Ok(CorpusStats {
        tokens,
        surface_types: surface.len(),
        analyzed_types: analyzed.len(),
    })
}

/// JSON-serializable statistics report for one analysis run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub id: String,
    pub language: String,
    pub segments: usize,
    pub mode: AnalysisMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub stoplist: bool,
    pub tokens: usize,
    pub surface_types: usize,
    pub analyzed_types: usize,
    /// Per-segment term multisets; omitted unless explicitly requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub term_counts: Option<Vec<AnalyzedSegment>>,
}

pub fn stats_report(doc: &Document, cfg: &AnalysisConfig) -> Result<StatsReport> {
    let stats = corpus_stats(doc, cfg)?;
    Ok(StatsReport {
        id: doc.id.clone(),
        language: doc.language.clone(),
        segments: doc.segments.len(),
        mode: cfg.mode,
        n: (cfg.mode == AnalysisMode::CharNgram).then_some(cfg.n),
        stoplist: cfg.stoplist.is_some(),
        tokens: stats.tokens,
        surface_types: stats.surface_types,
        analyzed_types: stats.analyzed_types,
        term_counts: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpusio::{parse_document, ParseOptions};

    fn doc(text: &str) -> Document {
        parse_document(text, &ParseOptions::default()).unwrap()
    }

    fn strings(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn tokenize_strips_numbers_and_punctuation() {
        assert_eq!(
            tokenize("The bank's 3 Banks!"),
            strings(&["the", "bank's", "banks"])
        );
        assert_eq!(tokenize("1987 2.5%"), Vec::<String>::new());
    }

    #[test]
    fn tokenize_keeps_intra_word_hyphens() {
        assert_eq!(tokenize("Öl-Preis stieg"), strings(&["öl-preis", "stieg"]));
        // Hyphens and apostrophes only survive between letters.
        assert_eq!(
            tokenize("-ab- 'tis a- 3.5-inch"),
            strings(&["ab", "tis", "a", "inch"])
        );
        assert_eq!(tokenize("x2x"), strings(&["xx"]));
    }

    #[test]
    fn lemmatize_replaces_known_forms() {
        let table = LemmaTable::from_entries([("banks", "bank"), ("ran", "run")]);
        assert_eq!(
            lemmatize(&strings(&["banks", "ran", "xyzzy"]), &table),
            strings(&["bank", "run", "xyzzy"])
        );
        assert_eq!(lemmatize(&[], &table), Vec::<String>::new());
    }

    #[test]
    fn char_ngrams_pad_and_window() {
        let got = char_ngrams(&strings(&["bank"]), 3, '_');
        let want: BTreeMap<String, usize> = [("_ba", 1), ("ban", 1), ("ank", 1), ("nk_", 1)]
            .into_iter()
            .map(|(t, c)| (t.to_string(), c))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn char_ngrams_short_token_emits_padded_token() {
        let got = char_ngrams(&strings(&["a"]), 3, '_');
        assert_eq!(got, BTreeMap::from([("_a_".to_string(), 1)]));
        let got = char_ngrams(&strings(&["a"]), 4, '_');
        assert_eq!(got, BTreeMap::from([("_a_".to_string(), 1)]));
    }

    #[test]
    fn char_ngrams_accumulate_across_tokens() {
        let got = char_ngrams(&strings(&["ab", "ab"]), 3, '_');
        let want: BTreeMap<String, usize> = [("_ab", 2), ("ab_", 2)]
            .into_iter()
            .map(|(t, c)| (t.to_string(), c))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn stoplist_filters_tokens() {
        let stop = Stoplist::from_forms(["the", "of"]);
        assert_eq!(
            apply_stoplist(&strings(&["the", "bank", "of", "issue"]), &stop),
            strings(&["bank", "issue"])
        );
        let empty = Stoplist::default();
        assert_eq!(
            apply_stoplist(&strings(&["a", "b"]), &empty),
            strings(&["a", "b"])
        );
        let all = Stoplist::from_forms(["a", "b"]);
        assert_eq!(
            apply_stoplist(&strings(&["a", "b"]), &all),
            Vec::<String>::new()
        );
    }

    #[test]
    fn analyze_document_surface_counts() {
        let d = doc("bank bank loan\n\nloan rate");
        let analyzed = analyze_document(&d, &AnalysisConfig::surface()).unwrap();
        assert_eq!(analyzed.len(), 2);
        assert_eq!(
            analyzed[0].terms,
            BTreeMap::from([("bank".to_string(), 2), ("loan".to_string(), 1)])
        );
        assert_eq!(
            analyzed[1].terms,
            BTreeMap::from([("loan".to_string(), 1), ("rate".to_string(), 1)])
        );
        assert_eq!(analyzed[0].token_count, 3);
    }

    #[test]
    fn analyze_document_char_ngrams() {
        let d = doc("bank bank loan\n\nloan rate");
        let analyzed = analyze_document(&d, &AnalysisConfig::char_ngram(3)).unwrap();
        let want: BTreeMap<String, usize> = [
            ("_ba", 2),
            ("ban", 2),
            ("ank", 2),
            ("nk_", 2),
            ("_lo", 1),
            ("loa", 1),
            ("oan", 1),
            ("an_", 1),
        ]
        .into_iter()
        .map(|(t, c)| (t.to_string(), c))
        .collect();
        assert_eq!(analyzed[0].terms, want);
    }

    #[test]
    fn numeric_segment_analyzes_to_nothing() {
        let d = doc("only words here\n\n1987 12 44%\n\nmore words");
        let analyzed = analyze_document(&d, &AnalysisConfig::surface()).unwrap();
        assert!(analyzed[1].terms.is_empty());
        assert_eq!(analyzed[1].token_count, 0);
    }

    #[test]
    fn config_validation() {
        let mut cfg = AnalysisConfig::surface();
        cfg.mode = AnalysisMode::Lemmatized;
        assert!(cfg.validate().is_err());

        assert!(AnalysisConfig::char_ngram(1).validate().is_err());
        assert!(AnalysisConfig::char_ngram(9).validate().is_err());
        assert!(AnalysisConfig::char_ngram(2).validate().is_ok());
        assert!(AnalysisConfig::char_ngram(8).validate().is_ok());
    }

    #[test]
    fn corpus_stats_counts_types_and_tokens() {
        let d = doc("a b a\n\nb c");
        let stats = corpus_stats(&d, &AnalysisConfig::surface()).unwrap();
        assert_eq!(stats.tokens, 5);
        assert_eq!(stats.surface_types, 3);
        assert_eq!(stats.analyzed_types, 3);

        let table = LemmaTable::from_entries([("b", "a")]);
        let stats = corpus_stats(&d, &AnalysisConfig::lemmatized(table)).unwrap();
        assert_eq!(stats.tokens, 5);
        assert_eq!(stats.surface_types, 3);
        assert_eq!(stats.analyzed_types, 2);
    }

    #[test]
    fn stats_report_echoes_config() {
        let d = doc("a b a\n\nb c");
        let report = stats_report(&d, &AnalysisConfig::char_ngram(3)).unwrap();
        assert_eq!(report.mode, AnalysisMode::CharNgram);
        assert_eq!(report.n, Some(3));
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"mode\":\"char_ngram\""));
        assert!(json.contains("\"n\":3"));
    }
}
