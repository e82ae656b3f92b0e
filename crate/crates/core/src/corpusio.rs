//! Document parsing, lemma tables, stoplists, and segment-level alignment of
//! parallel documents.
//!
//! The canonical document format is UTF-8 plain text: one or more blank lines
//! separate segments, and a segment whose first line starts with the heading
//! marker (`"== "` by default) is a heading. Alignment pairs up the segments
//! of two parallel documents by first matching headings on size, then pairing
//! the paragraphs between matched headings, proposing merges and reporting
//! divergences where the two sides disagree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Marker prefix identifying heading segments in the canonical format.
pub const DEFAULT_HEADING_MARKER: &str = "== ";

/// Default relative size tolerance used by [`align_documents`].
pub const DEFAULT_SIZE_TOLERANCE: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    Heading,
    Paragraph,
}

/// One paragraph or heading of a document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub index: usize,
    pub kind: SegmentKind,
    pub text: String,
    /// Number of characters in `text`.
    pub char_length: usize,
}

/// An ordered list of segments for one language version of a text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    /// Language tag, e.g. "de", "en", "fr".
    pub language: String,
    pub segments: Vec<Segment>,
    /// Path the document was read from, if any.
    pub source: String,
}

impl Document {
    pub fn heading_indices(&self) -> Vec<usize> {
        self.segments
            .iter()
            .filter(|s| s.kind == SegmentKind::Heading)
            .map(|s| s.index)
            .collect()
    }

    /// Renders the document back into the canonical plain-text format.
    ///
    /// Re-parsing the result with the same heading marker yields an equal
    /// document.
    pub fn to_canonical_text(&self, heading_marker: &str) -> String {
        let mut out = String::new();
        for (i, seg) in self.segments.iter().enumerate() {
            if i > 0 {
                out.push_str("\n\n");
            }
            if seg.kind == SegmentKind::Heading {
                out.push_str(heading_marker);
            }
            out.push_str(&seg.text);
        }
        out.push('\n');
        out
    }
}

/// Options controlling [`parse_document`].
#[derive(Debug, Clone, PartialEq)]
pub struct ParseOptions {
    pub id: String,
    pub language: String,
    pub source: String,
    pub heading_marker: String,
    /// Also treat short single-line segments without terminal sentence
    /// punctuation as headings. Off by default; explicit markers keep
    /// parsing deterministic for marked-up corpora.
    pub heuristic_headings: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            id: "doc".to_string(),
            language: "und".to_string(),
            source: String::new(),
            heading_marker: DEFAULT_HEADING_MARKER.to_string(),
            heuristic_headings: false,
        }
    }
}

impl ParseOptions {
    pub fn new(id: impl Into<String>, language: impl Into<String>) -> Self {
        ParseOptions {
            id: id.into(),
            language: language.into(),
            ..ParseOptions::default()
        }
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    pub fn with_heading_marker(mut self, marker: impl Into<String>) -> Self {
        self.heading_marker = marker.into();
        self
    }

    pub fn with_heuristic_headings(mut self, on: bool) -> Self {
        self.heuristic_headings = on;
        self
    }
}

/// Splits raw text into segments: consecutive non-blank lines form one
/// segment, one or more blank lines separate segments, and a segment whose
/// first line starts with the heading marker is a heading (marker stripped).
pub fn parse_document(raw_text: &str, options: &ParseOptions) -> Result<Document> {
    let mut segments: Vec<Segment> = Vec::new();
    let mut current: Vec<&str> = Vec::new();

    let flush = |lines: &mut Vec<&str>, segments: &mut Vec<Segment>| {
        if lines.is_empty() {
            return;
        }
        let mut kind = SegmentKind::Paragraph;
        if let Some(stripped) = lines[0].strip_prefix(options.heading_marker.as_str()) {
            kind = SegmentKind::Heading;
            lines[0] = stripped;
        } else if options.heuristic_headings && lines.len() == 1 && looks_like_heading(lines[0]) {
            kind = SegmentKind::Heading;
        }
        let text = lines.join("\n");
        segments.push(Segment {
            index: segments.len(),
            kind,
            char_length: text.chars().count(),
            text,
        });
        lines.clear();
    };

    for line in raw_text.lines() {
        if line.trim().is_empty() {
            flush(&mut current, &mut segments);
        } else {
            current.push(line);
        }
    }
    flush(&mut current, &mut segments);

    if segments.is_empty() {
        return Err(Error::EmptyDocument);
    }
    Ok(Document {
        id: options.id.clone(),
        language: options.language.clone(),
        segments,
        source: options.source.clone(),
    })
}

fn looks_like_heading(line: &str) -> bool {
    let trimmed = line.trim_end();
    trimmed.chars().count() <= 60
        && !matches!(
            trimmed.chars().next_back(),
            Some('.') | Some('!') | Some('?')
        )
}

/// Lookup table mapping unambiguous inflected forms to their citation forms.
///
/// Forms that occurred with more than one distinct lemma in the source list
/// are dropped at load time, so every retained form maps to exactly one lemma.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaTable {
    entries: BTreeMap<String, String>,
    dropped_ambiguous: usize,
}

impl LemmaTable {
    /// Builds a table from (form, lemma) pairs, applying the same
    /// lowercasing and ambiguity-dropping rules as [`load_lemma_table`].
    pub fn from_entries<I, S>(pairs: I) -> LemmaTable
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut seen: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (form, lemma) in pairs {
            seen.entry(form.as_ref().to_lowercase())
                .or_default()
                .insert(lemma.as_ref().to_lowercase());
        }
        collapse_unambiguous(seen)
    }

    pub fn lemma(&self, form: &str) -> Option<&str> {
        self.entries.get(form).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of forms excluded because they mapped to several lemmas.
    pub fn dropped_ambiguous(&self) -> usize {
        self.dropped_ambiguous
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(f, l)| (f.as_str(), l.as_str()))
    }
}

fn collapse_unambiguous(seen: BTreeMap<String, BTreeSet<String>>) -> LemmaTable {
    let mut entries = BTreeMap::new();
    let mut dropped = 0;
    for (form, lemmas) in seen {
        if lemmas.len() == 1 {
            entries.insert(form, lemmas.into_iter().next().unwrap());
        } else {
            dropped += 1;
        }
    }
    LemmaTable {
        entries,
        dropped_ambiguous: dropped,
    }
}

/// Parses a two-column TSV of `form<TAB>lemma` lines.
///
/// Blank lines and lines starting with `#` are ignored. Forms listed with
/// more than one distinct lemma are dropped entirely and counted in
/// [`LemmaTable::dropped_ambiguous`].
pub fn load_lemma_table(tsv_text: &str) -> Result<LemmaTable> {
    let mut seen: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (idx, line) in tsv_text.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(Error::format(
                lineno,
                format!("expected 2 tab-separated fields, found {}", fields.len()),
            ));
        }
        let form = fields[0].trim().to_lowercase();
        let lemma = fields[1].trim().to_lowercase();
        if form.is_empty() || lemma.is_empty() {
            return Err(Error::format(lineno, "empty form or lemma"));
        }
        seen.entry(form).or_default().insert(lemma);
    }
    Ok(collapse_unambiguous(seen))
}

/// A set of forms to exclude from analysis.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stoplist {
    forms: BTreeSet<String>,
}

impl Stoplist {
    pub fn from_forms<I, S>(forms: I) -> Stoplist
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Stoplist {
            forms: forms
                .into_iter()
                .map(|f| f.as_ref().to_lowercase())
                .filter(|f| !f.is_empty())
                .collect(),
        }
    }

    pub fn contains(&self, form: &str) -> bool {
        self.forms.contains(form)
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }
}

/// Parses a stoplist file: one form per line, `#` comments ignored.
pub fn load_stoplist(text: &str) -> Stoplist {
    Stoplist::from_forms(
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#')),
    )
}

/// A contiguous, possibly empty range of segment indices on one side of an
/// alignment pair. Rendered as `start-end` (inclusive) or `-` when empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegSpan {
    pub start: usize,
    pub len: usize,
}

impl SegSpan {
    pub const EMPTY: SegSpan = SegSpan { start: 0, len: 0 };

    pub fn new(start: usize, len: usize) -> SegSpan {
        if len == 0 {
            SegSpan::EMPTY
        } else {
            SegSpan { start, len }
        }
    }

    pub fn single(index: usize) -> SegSpan {
        SegSpan {
            start: index,
            len: 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Last covered index; `None` for an empty span.
    pub fn end(&self) -> Option<usize> {
        if self.len == 0 {
            None
        } else {
            Some(self.start + self.len - 1)
        }
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }

    fn parse(field: &str, lineno: usize) -> Result<SegSpan> {
        let field = field.trim();
        if field == "-" {
            return Ok(SegSpan::EMPTY);
        }
        let (start, end) = match field.split_once('-') {
            Some((a, b)) => (a, b),
            None => (field, field),
        };
        let bad = || Error::format(lineno, format!("invalid segment range {field:?}"));
        let start: usize = start.trim().parse().map_err(|_| bad())?;
        let end: usize = end.trim().parse().map_err(|_| bad())?;
        if end < start {
            return Err(bad());
        }
        Ok(SegSpan::new(start, end - start + 1))
    }
}

impl fmt::Display for SegSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.end() {
            None => write!(f, "-"),
            Some(end) => write!(f, "{}-{}", self.start, end),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairStatus {
    Ok,
    Divergent,
}

impl fmt::Display for PairStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairStatus::Ok => write!(f, "ok"),
            PairStatus::Divergent => write!(f, "divergent"),
        }
    }
}

/// One row of an alignment: a span of segments in document A matched with a
/// span in document B. A clean match pairs exactly one segment with one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentPair {
    pub a: SegSpan,
    pub b: SegSpan,
    pub status: PairStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergenceKind {
    CountMismatch,
    SizeMismatch,
}

impl fmt::Display for DivergenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivergenceKind::CountMismatch => write!(f, "count_mismatch"),
            DivergenceKind::SizeMismatch => write!(f, "size_mismatch"),
        }
    }
}

/// A spot where the two documents do not line up one segment to one segment
/// of compatible size. Divergences are proposals for a human to review.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divergence {
    /// Segment index in document A where the divergence starts (document B
    /// when the A side is empty).
    pub position: usize,
    pub kind: DivergenceKind,
    pub detail: String,
}

/// Segment-level correspondence between two parallel documents.
///
/// The spans of each column are disjoint, ascending, and jointly cover every
/// segment of their document.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentMap {
    pub pairs: Vec<AlignmentPair>,
    pub divergences: Vec<Divergence>,
}

impl AlignmentMap {
    /// Renders the TSV interchange format: `A_start-A_end<TAB>B_start-B_end<TAB>status`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for pair in &self.pairs {
            out.push_str(&format!("{}\t{}\t{}\n", pair.a, pair.b, pair.status));
        }
        out
    }

    /// Reads the TSV interchange format back. Divergence details are not part
    /// of the format, so only pairs and their statuses are recovered.
    pub fn from_tsv(text: &str) -> Result<AlignmentMap> {
        let mut pairs = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::format(
                    lineno,
                    format!("expected 3 tab-separated fields, found {}", fields.len()),
                ));
            }
            let status = match fields[2].trim() {
                "ok" => PairStatus::Ok,
                "divergent" => PairStatus::Divergent,
                other => {
                    return Err(Error::format(lineno, format!("unknown status {other:?}")));
                }
            };
            pairs.push(AlignmentPair {
                a: SegSpan::parse(fields[0], lineno)?,
                b: SegSpan::parse(fields[1], lineno)?,
                status,
            });
        }
        Ok(AlignmentMap {
            pairs,
            divergences: Vec::new(),
        })
    }
}

/// Ratio of the shorter to the longer of two lengths, in [0, 1].
fn length_ratio(a: usize, b: usize) -> f64 {
    let (min, max) = (a.min(b), a.max(b));
    if max == 0 {
        1.0
    } else {
        min as f64 / max as f64
    }
}

/// Aligns two parallel documents at the segment level.
///
/// Headings are matched in order by a longest-common-subsequence over the
/// heading sequences, scoring two headings as compatible when the ratio of
/// their character lengths is at least `1 - size_tolerance`. Between matched
/// headings, paragraphs pair one to one when counts agree; otherwise adjacent
/// segments on the larger side are merged to minimize the total length-ratio
/// deviation and a count mismatch is reported. The result is a proposal: a
/// human corrects the emitted alignment file and re-runs.
pub fn align_documents(a: &Document, b: &Document, size_tolerance: f64) -> Result<AlignmentMap> {
    if a.segments.is_empty() || b.segments.is_empty() {
        return Err(Error::EmptyDocument);
    }
    if size_tolerance <= 0.0 || size_tolerance.is_nan() {
        return Err(Error::InvalidConfig(format!(
            "size tolerance must be positive, got {size_tolerance}"
        )));
    }

    let ha = a.heading_indices();
    let hb = b.heading_indices();
    let anchors = match_headings(a, b, &ha, &hb, size_tolerance);

    let mut map = AlignmentMap::default();
    let (mut next_a, mut next_b) = (0, 0);
    for &(xa, xb) in &anchors {
        emit_region(&mut map, a, b, next_a..xa, next_b..xb, size_tolerance);
        emit_pair(
            &mut map,
            a,
            b,
            SegSpan::single(xa),
            SegSpan::single(xb),
            size_tolerance,
        );
        next_a = xa + 1;
        next_b = xb + 1;
    }
    emit_region(
        &mut map,
        a,
        b,
        next_a..a.segments.len(),
        next_b..b.segments.len(),
        size_tolerance,
    );
    Ok(map)
}

/// LCS over the two heading sequences with earliest-match preference.
fn match_headings(
    a: &Document,
    b: &Document,
    ha: &[usize],
    hb: &[usize],
    size_tolerance: f64,
) -> Vec<(usize, usize)> {
    let compatible = |i: usize, j: usize| {
        length_ratio(a.segments[ha[i]].char_length, b.segments[hb[j]].char_length)
            >= 1.0 - size_tolerance
    };

    let (n, m) = (ha.len(), hb.len());
    let mut dp = vec![vec![0usize; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            let skip = dp[i + 1][j].max(dp[i][j + 1]);
            dp[i][j] = if compatible(i, j) {
                skip.max(dp[i + 1][j + 1] + 1)
            } else {
                skip
            };
        }
    }

    let mut anchors = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        if compatible(i, j) && dp[i][j] == dp[i + 1][j + 1] + 1 {
            anchors.push((ha[i], hb[j]));
            i += 1;
            j += 1;
        } else if dp[i + 1][j] >= dp[i][j + 1] {
            i += 1;
        } else {
            j += 1;
        }
    }
    anchors
}

fn span_chars(doc: &Document, span: SegSpan) -> usize {
    span.indices().map(|i| doc.segments[i].char_length).sum()
}

fn emit_pair(
    map: &mut AlignmentMap,
    a: &Document,
    b: &Document,
    sa: SegSpan,
    sb: SegSpan,
    size_tolerance: f64,
) {
    let one_to_one = sa.len == 1 && sb.len == 1;
    let mut status = if one_to_one {
        PairStatus::Ok
    } else {
        PairStatus::Divergent
    };
    // Merged pairs are already covered by their region's count-mismatch
    // record; the size check flags 1:1 pairs whose lengths do not add up.
    if one_to_one {
        let (ca, cb) = (span_chars(a, sa), span_chars(b, sb));
        if length_ratio(ca, cb) < 1.0 - size_tolerance {
            status = PairStatus::Divergent;
            map.divergences.push(Divergence {
                position: sa.start,
                kind: DivergenceKind::SizeMismatch,
                detail: format!("A {sa} has {ca} chars, B {sb} has {cb}"),
            });
        }
    }
    map.pairs.push(AlignmentPair {
        a: sa,
        b: sb,
        status,
    });
}

/// Pairs up the segments of one inter-anchor region.
fn emit_region(
    map: &mut AlignmentMap,
    a: &Document,
    b: &Document,
    ra: std::ops::Range<usize>,
    rb: std::ops::Range<usize>,
    size_tolerance: f64,
) {
    let (la, lb) = (ra.len(), rb.len());
    if la == 0 && lb == 0 {
        return;
    }
    if la == lb {
        for k in 0..la {
            emit_pair(
                map,
                a,
                b,
                SegSpan::single(ra.start + k),
                SegSpan::single(rb.start + k),
                size_tolerance,
            );
        }
        return;
    }

    // One count-mismatch record spans the whole region.
    let span_a = SegSpan::new(ra.start, la);
    let span_b = SegSpan::new(rb.start, lb);
    map.divergences.push(Divergence {
        position: if la > 0 { ra.start } else { rb.start },
        kind: DivergenceKind::CountMismatch,
        detail: format!("A {span_a} has {la} segments, B {span_b} has {lb}"),
    });

    if la == 0 || lb == 0 {
        emit_pair(map, a, b, span_a, span_b, size_tolerance);
        return;
    }

    // Merge adjacent segments on the larger side so counts agree,
    // minimizing the total deviation of the paired length ratios from 1.
    let a_is_big = la > lb;
    let (big_doc, big_range, small_doc, small_range) = if a_is_big {
        (a, ra, b, rb)
    } else {
        (b, rb, a, ra)
    };
    let big_lens: Vec<usize> = big_range
        .clone()
        .map(|i| big_doc.segments[i].char_length)
        .collect();
    let small_lens: Vec<usize> = small_range
        .clone()
        .map(|i| small_doc.segments[i].char_length)
        .collect();
    let groups = merge_partition(&big_lens, &small_lens);

    let mut big_cursor = big_range.start;
    for (g, &size) in groups.iter().enumerate() {
        let big_span = SegSpan::new(big_cursor, size);
        let small_span = SegSpan::single(small_range.start + g);
        let (sa, sb) = if a_is_big {
            (big_span, small_span)
        } else {
            (small_span, big_span)
        };
        emit_pair(map, a, b, sa, sb, size_tolerance);
        big_cursor += size;
    }
}

/// Splits `big` into `small.len()` contiguous groups (each non-empty),
/// minimizing the summed deviation `1 - min/max` of group length vs. the
/// paired segment length. Returns the group sizes in order.
fn merge_partition(big: &[usize], small: &[usize]) -> Vec<usize> {
    let (m, k) = (big.len(), small.len());
    debug_assert!(m > k && k >= 1);

    let mut prefix = vec![0usize; m + 1];
    for (i, &len) in big.iter().enumerate() {
        prefix[i + 1] = prefix[i] + len;
    }
    let cost = |s: usize, e: usize, t: usize| 1.0 - length_ratio(prefix[e] - prefix[s], small[t]);

    let mut dp = vec![vec![f64::INFINITY; k + 1]; m + 1];
    let mut cut = vec![vec![0usize; k + 1]; m + 1];
    dp[0][0] = 0.0;
    for i in 1..=m {
        for g in 1..=k.min(i) {
            if m - i < k - g {
                continue; // not enough segments left to fill the remaining groups
            }
            for s in (g - 1)..i {
                if dp[s][g - 1].is_finite() {
                    let c = dp[s][g - 1] + cost(s, i, g - 1);
                    if c < dp[i][g] {
                        dp[i][g] = c;
                        cut[i][g] = s;
                    }
                }
            }
        }
    }

    let mut sizes = vec![0usize; k];
    let (mut i, mut g) = (m, k);
    while g > 0 {
        let s = cut[i][g];
        sizes[g - 1] = i - s;
        i = s;
        g -= 1;
    }
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(text: &str) -> Document {
        parse_document(text, &ParseOptions::default()).unwrap()
    }

    #[test]
    fn parses_headings_and_paragraphs() {
        let d = doc("== Intro\n\nAlpha beta.\n\nGamma.");
        assert_eq!(d.segments.len(), 3);
        assert_eq!(d.segments[0].kind, SegmentKind::Heading);
        assert_eq!(d.segments[0].text, "Intro");
        assert_eq!(d.segments[1].text, "Alpha beta.");
        assert_eq!(d.segments[2].text, "Gamma.");
        assert!(d.segments[1..]
            .iter()
            .all(|s| s.kind == SegmentKind::Paragraph));
        assert_eq!(
            d.segments.iter().map(|s| s.index).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn collapses_multiple_blank_lines() {
        let d = doc("A\nB\n\n\nC");
        assert_eq!(d.segments.len(), 2);
        assert_eq!(d.segments[0].text, "A\nB");
        assert_eq!(d.segments[1].text, "C");
    }

    #[test]
    fn empty_input_is_an_error() {
        for text in ["", "   \n\n \t \n"] {
            assert!(matches!(
                parse_document(text, &ParseOptions::default()),
                Err(Error::EmptyDocument)
            ));
        }
    }

    #[test]
    fn crlf_lines_parse_like_lf() {
        let d = doc("== H\r\n\r\nBody\r\n");
        assert_eq!(d.segments[0].text, "H");
        assert_eq!(d.segments[1].text, "Body");
    }

    #[test]
    fn char_length_counts_characters() {
        let d = doc("Öl-Preis");
        assert_eq!(d.segments[0].char_length, 8);
    }

    #[test]
    fn heuristic_headings_mode() {
        let opts = ParseOptions::default().with_heuristic_headings(true);
        let d = parse_document("Short title\n\nA full sentence that ends.\n", &opts).unwrap();
        assert_eq!(d.segments[0].kind, SegmentKind::Heading);
        assert_eq!(d.segments[0].text, "Short title");
        assert_eq!(d.segments[1].kind, SegmentKind::Paragraph);
    }

    #[test]
    fn canonical_text_round_trips() {
        let original = "== Intro\n\nAlpha beta.\nSecond line.\n\nGamma.\n";
        let d = doc(original);
        let rendered = d.to_canonical_text(DEFAULT_HEADING_MARKER);
        assert_eq!(rendered, original);
        assert_eq!(doc(&rendered), d);
    }

    #[test]
    fn lemma_table_basic() {
        let t = load_lemma_table("banks\tbank\nran\trun").unwrap();
        assert_eq!(t.lemma("banks"), Some("bank"));
        assert_eq!(t.lemma("ran"), Some("run"));
        assert_eq!(t.dropped_ambiguous(), 0);
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn lemma_table_drops_ambiguous_forms() {
        let t = load_lemma_table("saw\tsee\nsaw\tsaw").unwrap();
        assert!(t.is_empty());
        assert_eq!(t.dropped_ambiguous(), 1);
    }

    #[test]
    fn lemma_table_rejects_malformed_lines() {
        match load_lemma_table("a\tb\tc") {
            Err(Error::Format { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn lemma_table_lowercases_and_skips_comments() {
        let t = load_lemma_table("# comment\nBanks\tBank\nbanks\tbank\n").unwrap();
        // Same lemma after lowercasing: not ambiguous.
        assert_eq!(t.lemma("banks"), Some("bank"));
        assert_eq!(t.dropped_ambiguous(), 0);
    }

    #[test]
    fn stoplist_load() {
        let s = load_stoplist("the\nOf\n\n# comment\nand\n");
        assert!(s.contains("the"));
        assert!(s.contains("of"));
        assert!(s.contains("and"));
        assert_eq!(s.len(), 3);
    }

    fn coverage(map: &AlignmentMap, len_a: usize, len_b: usize) {
        let mut seen_a = vec![0usize; len_a];
        let mut seen_b = vec![0usize; len_b];
        for p in &map.pairs {
            for i in p.a.indices() {
                seen_a[i] += 1;
            }
            for j in p.b.indices() {
                seen_b[j] += 1;
            }
        }
        assert!(seen_a.iter().all(|&c| c == 1), "A coverage: {seen_a:?}");
        assert!(seen_b.iter().all(|&c| c == 1), "B coverage: {seen_b:?}");
    }

    #[test]
    fn identical_documents_align_cleanly() {
        let d = doc("== One\n\naa bb cc\n\ndd ee\n\n== Two\n\nff gg hh ii\n");
        let map = align_documents(&d, &d, DEFAULT_SIZE_TOLERANCE).unwrap();
        assert!(map.divergences.is_empty());
        assert!(map
            .pairs
            .iter()
            .all(|p| p.a.len == 1 && p.b.len == 1 && p.status == PairStatus::Ok));
        coverage(&map, d.segments.len(), d.segments.len());
    }

    #[test]
    fn two_to_one_merge_is_proposed() {
        let a = doc(&format!("{}\n\n{}\n", "x".repeat(100), "y".repeat(110)));
        let b = doc(&"z".repeat(205));
        let map = align_documents(&a, &b, DEFAULT_SIZE_TOLERANCE).unwrap();
        assert_eq!(map.pairs.len(), 1);
        assert_eq!(map.pairs[0].a, SegSpan::new(0, 2));
        assert_eq!(map.pairs[0].b, SegSpan::single(0));
        assert_eq!(map.pairs[0].status, PairStatus::Divergent);
        assert_eq!(map.divergences.len(), 1);
        assert_eq!(map.divergences[0].kind, DivergenceKind::CountMismatch);
        coverage(&map, 2, 1);
    }

    #[test]
    fn merge_prefers_best_length_ratio() {
        // 60 + 40 vs (58, 45): grouping [60][40] beats [60 40] as one group.
        let a = doc(&format!(
            "{}\n\n{}\n\n{}\n",
            "x".repeat(60),
            "y".repeat(40),
            "w".repeat(90)
        ));
        let b = doc(&format!("{}\n\n{}\n", "z".repeat(58), "v".repeat(130)));
        let map = align_documents(&a, &b, DEFAULT_SIZE_TOLERANCE).unwrap();
        let spans: Vec<(SegSpan, SegSpan)> = map.pairs.iter().map(|p| (p.a, p.b)).collect();
        assert_eq!(
            spans,
            vec![
                (SegSpan::single(0), SegSpan::single(0)),
                (SegSpan::new(1, 2), SegSpan::single(1)),
            ]
        );
        coverage(&map, 3, 2);
    }

    #[test]
    fn unmatched_heading_region_diverges() {
        let mk = |headings: usize| {
            let mut parts = Vec::new();
            for h in 0..headings {
                parts.push(format!("== Head {h}"));
                parts.push("pppp pppp pppp".to_string());
            }
            parts.join("\n\n")
        };
        let a = doc(&mk(3));
        let b = doc(&mk(2));
        let map = align_documents(&a, &b, DEFAULT_SIZE_TOLERANCE).unwrap();
        let counts: Vec<DivergenceKind> = map.divergences.iter().map(|d| d.kind).collect();
        assert_eq!(counts, vec![DivergenceKind::CountMismatch]);
        // The trailing region (third heading plus its paragraph) folds into
        // one divergent pair spanning it.
        let tail = map.pairs.last().unwrap();
        assert_eq!(tail.a, SegSpan::new(3, 3));
        assert_eq!(tail.b, SegSpan::single(3));
        assert_eq!(tail.status, PairStatus::Divergent);
        coverage(&map, 6, 4);
    }

    #[test]
    fn size_mismatch_is_reported_for_wildly_different_pairs() {
        let a = doc(&format!("== H\n\n{}\n", "x".repeat(500)));
        let b = doc(&format!("== H\n\n{}\n", "y".repeat(40)));
        let map = align_documents(&a, &b, DEFAULT_SIZE_TOLERANCE).unwrap();
        assert_eq!(map.divergences.len(), 1);
        assert_eq!(map.divergences[0].kind, DivergenceKind::SizeMismatch);
        assert_eq!(map.pairs[1].status, PairStatus::Divergent);
    }

    #[test]
    fn align_rejects_empty_documents() {
        let d = doc("aa");
        let empty = Document {
            id: "x".into(),
            language: "und".into(),
            segments: vec![],
            source: String::new(),
        };
        assert!(matches!(
            align_documents(&d, &empty, 0.4),
            Err(Error::EmptyDocument)
        ));
    }

    #[test]
    fn alignment_tsv_round_trips() {
        let a = doc(&format!("{}\n\n{}\n", "x".repeat(100), "y".repeat(110)));
        let b = doc(&"z".repeat(205));
        let map = align_documents(&a, &b, DEFAULT_SIZE_TOLERANCE).unwrap();
        let tsv = map.to_tsv();
        assert_eq!(tsv, "0-1\t0-0\tdivergent\n");
        let reread = AlignmentMap::from_tsv(&tsv).unwrap();
        assert_eq!(reread.pairs, map.pairs);
    }

    #[test]
    fn alignment_tsv_rejects_bad_rows() {
        assert!(matches!(
            AlignmentMap::from_tsv("0-1\t0-0\n"),
            Err(Error::Format { line: 1, .. })
        ));
        assert!(matches!(
            AlignmentMap::from_tsv("0-1\t0-0\tmaybe\n"),
            Err(Error::Format { line: 1, .. })
        ));
        assert!(matches!(
            AlignmentMap::from_tsv("1-0\t0-0\tok\n"),
            Err(Error::Format { line: 1, .. })
        ));
    }
}
