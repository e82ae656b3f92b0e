//! Subtopic boundary detection at signal minima, cross-language boundary
//! comparison, and automatic repair of near-miss boundaries.
//!
//! A gap is a boundary candidate when the signal dips there: its value is
//! below the left neighbor and no higher than the right one, so a plateau of
//! equal values is claimed by its leftmost gap and the signal endpoints are
//! never boundaries. Comparing the boundary sets of parallel documents
//! classifies each consensus gap as confirmed (all versions agree exactly),
//! a weak distortion (a majority agrees and the rest are one gap off), or
//! unconfirmed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vectors::CohesionSignal;

/// Default clustering tolerance for [`compare_boundaries`].
pub const DEFAULT_TOLERANCE: usize = 1;

/// Default length-normalization factor for [`agreement_score`].
pub const DEFAULT_ALPHA: f64 = 0.25;

/// Detected subtopic boundaries of one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundarySet {
    pub doc_id: String,
    /// Ascending gap indices selected as boundaries.
    pub gaps: Vec<usize>,
    /// Depth score per boundary gap: the summed rise to the nearest flanking
    /// local maxima.
    pub depths: BTreeMap<usize, f64>,
    pub min_depth: f64,
    pub signal_length: usize,
}

#[derive(Debug, Clone, Copy)]
struct Run {
    start: usize,
    value: f64,
}

fn runs_of(values: &[f64]) -> (Vec<Run>, Vec<usize>) {
    let mut runs: Vec<Run> = Vec::new();
    let mut run_of = vec![0usize; values.len()];
    for (i, &v) in values.iter().enumerate() {
        if runs.is_empty() || runs.last().unwrap().value != v {
            runs.push(Run { start: i, value: v });
        }
        run_of[i] = runs.len() - 1;
    }
    (runs, run_of)
}

/// Detects boundaries at interior local minima of the signal.
///
/// Depth sums the rise from the minimum to the nearest local maximum on each
/// side (clamped at zero); gaps with depth below `min_depth` are discarded.
/// The default threshold of 0 keeps every minimum.
pub fn detect_boundaries(signal: &CohesionSignal, min_depth: f64) -> BoundarySet {
    let values = &signal.values;
    let n = values.len();
    let mut gaps = Vec::new();
    let mut depths = BTreeMap::new();

    if n >= 3 {
        let (runs, run_of) = runs_of(values);
        let is_max = |idx: usize| {
            let v = runs[idx].value;
            (idx == 0 || runs[idx - 1].value < v)
                && (idx + 1 == runs.len() || runs[idx + 1].value < v)
        };
        for i in 1..n - 1 {
            if !(values[i] < values[i - 1] && values[i] <= values[i + 1]) {
                continue;
            }
            debug_assert_eq!(runs[run_of[i]].start, i, "minimum must lead its run");
            let here = run_of[i];
            let left = (0..here).rev().find(|&r| is_max(r)).map(|r| runs[r].value);
            let right = (here + 1..runs.len())
                .find(|&r| is_max(r))
                .map(|r| runs[r].value);
            let rise = |m: Option<f64>| m.map_or(0.0, |m| (m - values[i]).max(0.0));
            let depth = rise(left) + rise(right);
            if depth >= min_depth {
                gaps.push(i);
                depths.insert(i, depth);
            }
        }
    }

    BoundarySet {
        doc_id: signal.doc_id.clone(),
        gaps,
        depths,
        min_depth,
        signal_length: n,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryClass {
    Confirmed,
    WeakDistortion,
    Unconfirmed,
}

impl std::fmt::Display for BoundaryClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryClass::Confirmed => write!(f, "confirmed"),
            BoundaryClass::WeakDistortion => write!(f, "weak_distortion"),
            BoundaryClass::Unconfirmed => write!(f, "unconfirmed"),
        }
    }
}

/// One cross-document boundary cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapCluster {
    pub consensus_gap: usize,
    pub class: BoundaryClass,
    /// Per document (in input order): offset of its nearest boundary in this
    /// cluster relative to the consensus gap, or `None` when it has none.
    pub supporters: Vec<Option<i64>>,
    /// Fraction-weighted support: an exact match counts 1, an off-by-one
    /// counts 0.5, averaged over all documents. 1 exactly when confirmed.
    pub strength: f64,
}

/// Cross-language comparison of the boundary sets of parallel documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryComparison {
    pub sets: Vec<BoundarySet>,
    pub clusters: Vec<GapCluster>,
    /// Pairwise length-normalized agreement scores.
    pub agreement: Vec<Vec<f64>>,
    pub tolerance_used: usize,
    pub alpha_used: f64,
}

/// Clusters the boundaries of parallel documents and classifies each cluster.
///
/// Gaps are chained into one cluster while consecutive candidates lie within
/// `tolerance` of each other; the consensus is the gap backed by the most
/// documents, ties resolved toward the smaller index. `alpha` feeds the
/// pairwise agreement matrix.
pub fn compare_boundaries(
    sets: &[BoundarySet],
    tolerance: usize,
    alpha: f64,
) -> Result<BoundaryComparison> {
    if sets.len() < 2 {
        return Err(Error::InvalidConfig(format!(
            "boundary comparison needs at least 2 documents, got {}",
            sets.len()
        )));
    }
    for set in &sets[1..] {
        if set.signal_length != sets[0].signal_length {
            return Err(Error::ComparisonLength(
                sets[0].signal_length,
                set.signal_length,
            ));
        }
    }

    let n_docs = sets.len();
    let mut agreement = vec![vec![0.0; n_docs]; n_docs];
    for i in 0..n_docs {
        for j in i..n_docs {
            let score = agreement_score(&sets[i], &sets[j], alpha)?;
            agreement[i][j] = score;
            agreement[j][i] = score;
        }
    }

    let mut candidates: Vec<usize> = sets.iter().flat_map(|s| s.gaps.iter().copied()).collect();
    candidates.sort_unstable();
    candidates.dedup();

    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 0..candidates.len() {
        let chain_ends = i + 1 == candidates.len() || candidates[i + 1] - candidates[i] > tolerance;
        if chain_ends {
            clusters.push(classify_cluster(sets, &candidates[start..=i]));
            start = i + 1;
        }
    }

    Ok(BoundaryComparison {
        sets: sets.to_vec(),
        clusters,
        agreement,
        tolerance_used: tolerance,
        alpha_used: alpha,
    })
}

fn classify_cluster(sets: &[BoundarySet], cluster_gaps: &[usize]) -> GapCluster {
    // Consensus: the gap supported by the most documents, smallest index on ties.
    let mut votes: BTreeMap<usize, usize> = BTreeMap::new();
    for set in sets {
        for &gap in &set.gaps {
            if cluster_gaps.contains(&gap) {
                *votes.entry(gap).or_insert(0) += 1;
            }
        }
    }
    let consensus = votes
        .iter()
        .max_by(|(ga, ca), (gb, cb)| ca.cmp(cb).then(gb.cmp(ga)))
        .map(|(&g, _)| g)
        .expect("cluster is non-empty");

    let supporters: Vec<Option<i64>> = sets
        .iter()
        .map(|set| {
            set.gaps
                .iter()
                .filter(|g| cluster_gaps.contains(g))
                .map(|&g| g as i64 - consensus as i64)
                .min_by_key(|off| (off.abs(), *off))
        })
        .collect();

    let exact = supporters.iter().flatten().filter(|&&o| o == 0).count();
    let class = if exact == sets.len() {
        BoundaryClass::Confirmed
    } else if supporters
        .iter()
        .all(|o| matches!(o, Some(off) if off.abs() <= 1))
        && 2 * exact > sets.len()
    {
        BoundaryClass::WeakDistortion
    } else {
        BoundaryClass::Unconfirmed
    };

    let strength = supporters
        .iter()
        .map(|o| match o {
            Some(0) => 1.0,
            Some(off) if off.abs() == 1 => 0.5,
            _ => 0.0,
        })
        .sum::<f64>()
        / sets.len() as f64;

    GapCluster {
        consensus_gap: consensus,
        class,
        supporters,
        strength,
    }
}

/// Length-normalized agreement of two boundary sets in [0, 1].
///
/// Boundaries match greedily one to one within a tolerance proportional to
/// the mean tile length of the combined sets: longer tiles forgive larger
/// placement distortions. Two empty sets agree perfectly.
pub fn agreement_score(a: &BoundarySet, b: &BoundarySet, alpha: f64) -> Result<f64> {
    if a.signal_length != b.signal_length {
        return Err(Error::ComparisonLength(a.signal_length, b.signal_length));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "alpha must be in (0, 1], got {alpha}"
        )));
    }
    let total = a.gaps.len() + b.gaps.len();
    if total == 0 {
        return Ok(1.0);
    }
    let mean_tile = (a.signal_length + b.signal_length) as f64 / (total + 2) as f64;
    let within = ((alpha * mean_tile).floor() as i64).max(1);

    let (mut i, mut j, mut matches) = (0, 0, 0usize);
    while i < a.gaps.len() && j < b.gaps.len() {
        let (ga, gb) = (a.gaps[i] as i64, b.gaps[j] as i64);
        if (ga - gb).abs() <= within {
            matches += 1;
            i += 1;
            j += 1;
        } else if ga < gb {
            i += 1;
        } else {
            j += 1;
        }
    }
    Ok(2.0 * matches as f64 / total as f64)
}

/// Applies the near-miss corrections a comparison makes possible: in every
/// weak-distortion cluster, each off-by-one document's boundary moves to the
/// consensus gap. Confirmed and unconfirmed clusters are left alone.
pub fn repair_boundaries(comparison: &BoundaryComparison) -> Vec<BoundarySet> {
    let mut sets = comparison.sets.clone();
    for cluster in &comparison.clusters {
        if cluster.class != BoundaryClass::WeakDistortion {
            continue;
        }
        for (set, offset) in sets.iter_mut().zip(&cluster.supporters) {
            let Some(offset) = *offset else { continue };
            if offset == 0 {
                continue;
            }
            let old_gap = (cluster.consensus_gap as i64 + offset) as usize;
            if let Ok(pos) = set.gaps.binary_search(&old_gap) {
                set.gaps.remove(pos);
                let depth = set.depths.remove(&old_gap);
                if let Err(insert_at) = set.gaps.binary_search(&cluster.consensus_gap) {
                    set.gaps.insert(insert_at, cluster.consensus_gap);
                    if let Some(depth) = depth {
                        set.depths.entry(cluster.consensus_gap).or_insert(depth);
                    }
                }
            }
        }
    }
    sets
}

/// Renders a per-gap table of the comparison, one mark column per document:
/// `=` exact, `+1`/`-1` an off-by-one placement, `.` absent.
pub fn comparison_table(comparison: &BoundaryComparison) -> String {
    let doc_width = comparison
        .sets
        .iter()
        .map(|s| s.doc_id.len())
        .max()
        .unwrap_or(2)
        .max(2);

    let mut out = String::new();
    let _ = write!(out, "{:<5} {:<16} {:<9}", "gap", "class", "strength");
    for set in &comparison.sets {
        let _ = write!(out, " {:<doc_width$}", set.doc_id);
    }
    out.push('\n');
    for cluster in &comparison.clusters {
        let _ = write!(
            out,
            "{:<5} {:<16} {:<9.3}",
            cluster.consensus_gap,
            cluster.class.to_string(),
            cluster.strength
        );
        for offset in &cluster.supporters {
            let mark = match offset {
                Some(0) => "=".to_string(),
                Some(off) => format!("{off:+}"),
                None => ".".to_string(),
            };
            let _ = write!(out, " {mark:<doc_width$}");
        }
        out.push('\n');
    }
    out
}
