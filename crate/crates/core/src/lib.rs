//! Lexical cohesion signals for documents and their translations.
//!
//! A document's discourse structure leaves a measurable trace: adjacent text
//! segments that discuss the same subtopic reuse vocabulary. This crate
//! computes that trace as a *cohesion signal* — the sequence of cosine
//! similarities between idf.tf-weighted term vectors of adjacent segments —
//! and builds on it:
//!
//! - [`corpusio`]: parsing the canonical plain-text document format, lemma
//!   tables, stoplists, and segment-level alignment of parallel documents;
//! - [`analysis`]: tokenization and index-term mapping (surface forms,
//!   lemmas, or character n-grams) plus type/token statistics;
//! - [`vectors`]: idf.tf weighting, cosine similarity, and signal
//!   construction;
//! - [`dsp`]: zero-phase low-pass smoothing and normalized discrete
//!   correlation of parallel signals;
//! - [`tiling`]: subtopic boundary detection at signal minima and
//!   cross-language boundary comparison and repair.
//!
//! Everything is a pure function over immutable values, so all operations
//! are safe to run concurrently, and term contributions are accumulated in a
//! canonical order to keep results reproducible across platforms.

pub mod analysis;
pub mod corpusio;
pub mod dsp;
pub mod error;
pub mod tiling;
pub mod vectors;

pub use analysis::{
    analyze_document, apply_stoplist, char_ngrams, corpus_stats, lemmatize, stats_report, tokenize,
    AnalysisConfig, AnalysisMode, AnalyzedSegment, CorpusStats, StatsReport,
};
pub use corpusio::{
    align_documents, load_lemma_table, load_stoplist, parse_document, AlignmentMap, AlignmentPair,
    Divergence, DivergenceKind, Document, LemmaTable, PairStatus, ParseOptions, SegSpan, Segment,
    SegmentKind, Stoplist,
};
pub use dsp::{
    correlation_matrix, cross_correlate, lowpass, plot_dat, smoothed_csv, CorrelationMatrix,
    CorrelationResult, EdgeMode, FilterKind, FilterSpec,
};
pub use error::{Error, Result};
pub use tiling::{
    agreement_score, compare_boundaries, comparison_table, detect_boundaries, repair_boundaries,
    BoundaryClass, BoundaryComparison, BoundarySet, GapCluster,
};
pub use vectors::{
    build_vectors, cohesion_signal, cosine, document_signal, CohesionSignal, GapScore,
    SegmentVector,
};
