//! idf.tf term weighting, cosine similarity, and the per-document cohesion
//! signal over adjacent segment pairs.
//!
//! With `N` segments and `df(t)` the number of segments containing term `t`,
//! a term's weight in segment `s` is `tf(t, s) * ln(N / df(t))`. Terms
//! present in every segment weigh exactly zero and are omitted. The cohesion
//! signal is the sequence of cosines between adjacent segment vectors; value
//! `i` scores the gap between segments `i` and `i + 1`, so valleys mark
//! subtopic transitions. Term contributions are always accumulated in
//! lexicographic term order, which keeps results reproducible.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::{analyze_document, AnalysisConfig, AnalyzedSegment};
use crate::corpusio::Document;
use crate::dsp::FilterSpec;
use crate::error::{Error, Result};

/// Sparse idf.tf-weighted term vector of one segment. Stored weights are
/// strictly positive and finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentVector {
    pub index: usize,
    pub weights: BTreeMap<String, f64>,
}

impl SegmentVector {
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Cosine value of one gap. An empty vector on either side makes the gap
/// degenerate: it scores 0 but keeps its place, so the signal stays aligned
/// with the segment sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapScore {
    pub value: f64,
    pub degenerate: bool,
}

/// The discourse signal of one document: cosine similarities over all
/// adjacent segment pairs, raw or smoothed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohesionSignal {
    pub doc_id: String,
    /// Value `i` is the similarity of segments `i` and `i + 1`.
    pub values: Vec<f64>,
    /// Flags gaps where at least one segment vector was empty.
    pub degenerate: Vec<bool>,
    pub smoothed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter: Option<FilterSpec>,
}

impl CohesionSignal {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Renders the signal CSV: `gap_index,value,degenerate`, values with six
    /// decimal places.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("gap_index,value,degenerate\n");
        for (i, (v, d)) in self.values.iter().zip(&self.degenerate).enumerate() {
            let _ = writeln!(out, "{i},{v:.6},{d}");
        }
        out
    }

    /// Reads a signal CSV back. The file stores neither document id nor
    /// smoothing metadata, so the id is supplied by the caller.
    pub fn from_csv(doc_id: impl Into<String>, text: &str) -> Result<CohesionSignal> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == "gap_index,value,degenerate" => {}
            _ => {
                return Err(Error::format(
                    1,
                    "expected header gap_index,value,degenerate",
                ))
            }
        }
        let mut values = Vec::new();
        let mut degenerate = Vec::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(Error::format(
                    lineno,
                    format!("expected 3 fields, found {}", fields.len()),
                ));
            }
            let gap: usize = fields[0]
                .trim()
                .parse()
                .map_err(|_| Error::format(lineno, "invalid gap index"))?;
            if gap != values.len() {
                return Err(Error::format(
                    lineno,
                    format!("gap index {gap} out of order, expected {}", values.len()),
                ));
            }
            let value: f64 = fields[1]
                .trim()
                .parse()
                .map_err(|_| Error::format(lineno, "invalid value"))?;
            let degen: bool = fields[2]
                .trim()
                .parse()
                .map_err(|_| Error::format(lineno, "invalid degenerate flag"))?;
            values.push(value);
            degenerate.push(degen);
        }
        Ok(CohesionSignal {
            doc_id: doc_id.into(),
            values,
            degenerate,
            smoothed: false,
            filter: None,
        })
    }
}

/// Builds idf.tf-weighted vectors for a sequence of analyzed segments.
///
/// The segments themselves act as the document collection: `N` is the
/// segment count and `df(t)` counts the segments containing `t`. Ubiquitous
/// terms (`df = N`) carry no contrast and are omitted.
pub fn build_vectors(analyzed: &[AnalyzedSegment]) -> Result<Vec<SegmentVector>> {
    if analyzed.len() < 2 {
        return Err(Error::TooFewSegments(analyzed.len()));
    }
    let n = analyzed.len();

    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for seg in analyzed {
        for term in seg.terms.keys() {
            *df.entry(term).or_insert(0) += 1;
        }
    }

    Ok(analyzed
        .iter()
        .map(|seg| {
            let mut weights = BTreeMap::new();
            for (term, &tf) in &seg.terms {
                let d = df[term.as_str()];
                if d == n {
                    continue;
                }
                let idf = (n as f64 / d as f64).ln();
                weights.insert(term.clone(), tf as f64 * idf);
            }
            SegmentVector {
                index: seg.index,
                weights,
            }
        })
        .collect())
}

/// Cosine of the angle between two weight vectors, over the union of their
/// term sets. Empty vectors yield a degenerate zero rather than an error.
pub fn cosine(x: &SegmentVector, y: &SegmentVector) -> GapScore {
    if x.is_empty() || y.is_empty() {
        return GapScore {
            value: 0.0,
            degenerate: true,
        };
    }
    let mut dot = 0.0;
    let mut sum_x = 0.0;
    for (term, wx) in &x.weights {
        sum_x += wx * wx;
        if let Some(wy) = y.weights.get(term) {
            dot += wx * wy;
        }
    }
    let mut sum_y = 0.0;
    for wy in y.weights.values() {
        sum_y += wy * wy;
    }
    GapScore {
        value: dot / (sum_x * sum_y).sqrt(),
        degenerate: false,
    }
}

/// Scores every gap of a document: value `i` is the cosine of segment
/// vectors `i` and `i + 1`.
pub fn cohesion_signal(
    doc_id: impl Into<String>,
    vectors: &[SegmentVector],
) -> Result<CohesionSignal> {
    if vectors.len() < 2 {
        return Err(Error::TooFewSegments(vectors.len()));
    }
    let mut values = Vec::with_capacity(vectors.len() - 1);
    let mut degenerate = Vec::with_capacity(vectors.len() - 1);
    for pair in vectors.windows(2) {
        let gap = cosine(&pair[0], &pair[1]);
        values.push(gap.value);
        degenerate.push(gap.degenerate);
    }
    Ok(CohesionSignal {
        doc_id: doc_id.into(),
        values,
        degenerate,
        smoothed: false,
        filter: None,
    })
}

/// Full pipeline from a parsed document to its raw cohesion signal.
pub fn document_signal(doc: &Document, cfg: &AnalysisConfig) -> Result<CohesionSignal> {
    let analyzed = analyze_document(doc, cfg)?;
    let vectors = build_vectors(&analyzed)?;
    cohesion_signal(doc.id.clone(), &vectors)
}
