//! `cohesion` — lexical cohesion signals, subtopic tiling, and discourse
//! comparison of parallel texts.

mod manifest;
mod output;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cohesion::{
    align_documents, compare_boundaries, comparison_table, correlation_matrix, detect_boundaries,
    document_signal, lowpass, parse_document, plot_dat, repair_boundaries, smoothed_csv,
    stats_report, BoundarySet, CohesionSignal, Document, ParseOptions,
};
use manifest::{build_analysis_config, build_filter_spec, load_manifest, RunDefaults};
use output::{boundary_table, matrix_table, to_json_pretty, write_atomic};

#[derive(Parser)]
#[command(
    name = "cohesion",
    version,
    about = "Lexical cohesion signals, subtopic tiling, and discourse comparison of parallel texts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the cohesion signal and statistics of one document
    Analyze(AnalyzeArgs),
    /// Print type/token statistics of one document
    Stats(StatsArgs),
    /// Align two parallel documents at the segment level
    Align(AlignArgs),
    /// Correlate the signals of the runs in a manifest
    Correlate(CorrelateArgs),
    /// Detect subtopic boundaries of one document
    Segment(SegmentArgs),
    /// Compare boundaries across the runs in a manifest
    Compare(CompareArgs),
}

#[derive(Args)]
struct AnalysisFlags {
    /// Index-term analysis mode
    #[arg(long, default_value = "ngram", value_parser = ["surface", "lemma", "ngram"])]
    mode: String,

    /// Character n-gram size for --mode ngram
    #[arg(long, default_value_t = 3)]
    ngram: usize,

    /// Lemma table TSV (form<TAB>lemma), required for --mode lemma
    #[arg(long)]
    lemmas: Option<PathBuf>,

    /// Stoplist file, one form per line
    #[arg(long)]
    stoplist: Option<PathBuf>,

    /// Language tag recorded in reports
    #[arg(long, default_value = "und")]
    lang: String,
}

impl AnalysisFlags {
    fn to_config(&self) -> Result<cohesion::AnalysisConfig> {
        build_analysis_config(
            &self.mode,
            self.ngram,
            self.lemmas.as_deref(),
            self.stoplist.as_deref(),
        )
    }
}

#[derive(Args)]
struct FilterFlags {
    /// Low-pass filter kernel
    #[arg(long, default_value = "ma", value_parser = ["ma", "hamming"])]
    filter: String,

    /// Filter window width in gaps (odd)
    #[arg(long, default_value_t = 5)]
    window: usize,
}

impl FilterFlags {
    fn to_spec(&self) -> Result<cohesion::FilterSpec> {
        build_filter_spec(&self.filter, self.window)
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Document file
    doc: PathBuf,
    #[command(flatten)]
    analysis: AnalysisFlags,
    #[command(flatten)]
    filter: FilterFlags,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    /// Document file
    doc: PathBuf,
    #[command(flatten)]
    analysis: AnalysisFlags,
    /// Also write <id>_stats.json into this directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AlignArgs {
    /// Document A
    doc_a: PathBuf,
    /// Document B
    doc_b: PathBuf,
    /// Relative segment-size tolerance for matching
    #[arg(long, default_value_t = 0.4)]
    size_tolerance: f64,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct CorrelateArgs {
    /// Run manifest (label<TAB>path<TAB>key=value...)
    #[arg(long)]
    manifest: PathBuf,
    #[command(flatten)]
    analysis: AnalysisFlags,
    #[command(flatten)]
    filter: FilterFlags,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct SegmentArgs {
    /// Document file
    doc: PathBuf,
    #[command(flatten)]
    analysis: AnalysisFlags,
    #[command(flatten)]
    filter: FilterFlags,
    /// Discard boundaries shallower than this depth
    #[arg(long, default_value_t = 0.0)]
    min_depth: f64,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    /// Run manifest (label<TAB>path<TAB>key=value...)
    #[arg(long)]
    manifest: PathBuf,
    #[command(flatten)]
    analysis: AnalysisFlags,
    #[command(flatten)]
    filter: FilterFlags,
    /// Discard boundaries shallower than this depth
    #[arg(long, default_value_t = 0.0)]
    min_depth: f64,
    /// Clustering tolerance in gaps
    #[arg(long, default_value_t = 1)]
    tolerance: usize,
    /// Length-normalization factor for agreement scores
    #[arg(long, default_value_t = 0.25)]
    alpha: f64,
    /// Also write boundary sets with weak distortions corrected
    #[arg(long)]
    repair: bool,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Align(args) => cmd_align(args),
        Command::Correlate(args) => cmd_correlate(args),
        Command::Segment(args) => cmd_segment(args),
        Command::Compare(args) => cmd_compare(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn doc_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "doc".to_string())
}

fn load_document(path: &Path, language: &str) -> Result<Document> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let options = ParseOptions::new(doc_id(path), language).with_source(path.display().to_string());
    parse_document(&text, &options).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let doc = load_document(&args.doc, &args.analysis.lang)?;
    let cfg = args.analysis.to_config()?;
    let spec = args.filter.to_spec()?;

    let raw = document_signal(&doc, &cfg)?;
    let smoothed = lowpass(&raw, &spec)?;
    let stats = stats_report(&doc, &cfg)?;

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let id = &doc.id;
    let files = [
        (format!("{id}_signal.csv"), raw.to_csv()),
        (
            format!("{id}_smoothed.csv"),
            smoothed_csv(&raw.values, &smoothed.values),
        ),
        (format!("{id}_stats.json"), to_json_pretty(&stats)),
        (format!("{id}_raw.dat"), plot_dat(&raw.values)),
        (format!("{id}_smoothed.dat"), plot_dat(&smoothed.values)),
    ];
    for (name, contents) in &files {
        write_atomic(&args.out.join(name), contents)?;
    }

    println!(
        "analyzed {id}: {} segments, {} gaps, mode {}",
        doc.segments.len(),
        raw.len(),
        manifest::mode_name(cfg.mode),
    );
    let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
    println!("wrote {}", names.join(" "));
    Ok(())
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let doc = load_document(&args.doc, &args.analysis.lang)?;
    let cfg = args.analysis.to_config()?;
    let report = stats_report(&doc, &cfg)?;
    let json = to_json_pretty(&report);
    print!("{json}");
    if let Some(out) = &args.out {
        fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
        write_atomic(&out.join(format!("{}_stats.json", doc.id)), &json)?;
    }
    Ok(())
}

fn cmd_align(args: AlignArgs) -> Result<()> {
    let a = load_document(&args.doc_a, "und")?;
    let b = load_document(&args.doc_b, "und")?;
    let map = align_documents(&a, &b, args.size_tolerance)?;

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let stem = format!("{}_{}", a.id, b.id);
    write_atomic(
        &args.out.join(format!("{stem}_alignment.tsv")),
        &map.to_tsv(),
    )?;
    write_atomic(
        &args.out.join(format!("{stem}_divergences.json")),
        &to_json_pretty(&map.divergences),
    )?;

    let ok = map
        .pairs
        .iter()
        .filter(|p| p.status == cohesion::PairStatus::Ok)
        .count();
    println!(
        "aligned {} / {}: {} pairs ({} ok, {} divergent)",
        a.id,
        b.id,
        map.pairs.len(),
        ok,
        map.pairs.len() - ok
    );
    for d in &map.divergences {
        println!("  {} at A:{} — {}", d.kind, d.position, d.detail);
    }
    println!("wrote {stem}_alignment.tsv {stem}_divergences.json");
    Ok(())
}

/// Loads every run of a manifest and returns its document and smoothed
/// signal, enforcing that all runs cover the same number of segments.
fn load_runs(
    manifest_path: &Path,
    analysis: &AnalysisFlags,
    filter: &FilterFlags,
) -> Result<Vec<(manifest::RunSpec, Document, CohesionSignal)>> {
    let defaults = RunDefaults {
        language: analysis.lang.clone(),
        mode: analysis.mode.clone(),
        ngram: analysis.ngram,
        lemmas: analysis.lemmas.clone(),
        stoplist: analysis.stoplist.clone(),
        filter: filter.filter.clone(),
        window: filter.window,
    };
    let manifest = load_manifest(manifest_path, &defaults)?;
    if manifest.runs.len() < 2 {
        bail!(
            "manifest {} lists {} runs; need at least 2",
            manifest_path.display(),
            manifest.runs.len()
        );
    }

    let mut docs = Vec::new();
    for run in manifest.runs {
        let text = fs::read_to_string(&run.path)
            .with_context(|| format!("run {:?}: reading {}", run.label, run.path.display()))?;
        let options = ParseOptions::new(run.label.clone(), run.language.clone())
            .with_source(run.path.display().to_string());
        let doc = parse_document(&text, &options)
            .with_context(|| format!("run {:?}: parsing {}", run.label, run.path.display()))?;
        docs.push((run, doc));
    }

    // Comparing signals is only meaningful over a segment-aligned corpus, so
    // check that before computing anything.
    let (first_run, first_doc) = &docs[0];
    for (run, doc) in &docs[1..] {
        if doc.segments.len() != first_doc.segments.len() {
            bail!(
                "segment counts differ ({}: {}, {}: {}); parallel runs must be aligned \
                 at the segment level first — `cohesion align` proposes an alignment",
                first_run.label,
                first_doc.segments.len(),
                run.label,
                doc.segments.len()
            );
        }
    }

    let mut loaded = Vec::new();
    for (run, doc) in docs {
        let raw =
            document_signal(&doc, &run.analysis).with_context(|| format!("run {:?}", run.label))?;
        let smoothed =
            lowpass(&raw, &run.filter).with_context(|| format!("run {:?}", run.label))?;
        loaded.push((run, doc, smoothed));
    }
    Ok(loaded)
}

fn cmd_correlate(args: CorrelateArgs) -> Result<()> {
    let loaded = load_runs(&args.manifest, &args.analysis, &args.filter)?;
    let runs: Vec<(String, Vec<f64>)> = loaded
        .iter()
        .map(|(run, _, signal)| (run.label.clone(), signal.values.clone()))
        .collect();
    let matrix = correlation_matrix(&runs)?;

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    write_atomic(&args.out.join("matrix.csv"), &matrix.to_csv())?;
    write_atomic(&args.out.join("matrix.json"), &matrix.to_json())?;

    print!("{}", matrix_table(&matrix.labels, &matrix.cells));
    println!("wrote matrix.csv matrix.json");
    Ok(())
}

fn cmd_segment(args: SegmentArgs) -> Result<()> {
    let doc = load_document(&args.doc, &args.analysis.lang)?;
    let cfg = args.analysis.to_config()?;
    let spec = args.filter.to_spec()?;

    let raw = document_signal(&doc, &cfg)?;
    let smoothed = lowpass(&raw, &spec)?;
    let set = detect_boundaries(&smoothed, args.min_depth);

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let name = format!("{}_boundaries.json", doc.id);
    write_atomic(&args.out.join(&name), &to_json_pretty(&set))?;

    println!(
        "segmented {}: {} boundaries over {} gaps (min depth {})",
        doc.id,
        set.gaps.len(),
        set.signal_length,
        args.min_depth
    );
    print!("{}", boundary_table(&set));
    println!("wrote {name}");
    Ok(())
}

/// Comparison report written by `compare`: the comparison itself plus the
/// repaired boundary sets when repair was requested.
#[derive(Serialize)]
struct CompareReport<'a> {
    #[serde(flatten)]
    comparison: &'a cohesion::BoundaryComparison,
    #[serde(skip_serializing_if = "Option::is_none")]
    repaired: Option<&'a Vec<BoundarySet>>,
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    let loaded = load_runs(&args.manifest, &args.analysis, &args.filter)?;
    let sets: Vec<BoundarySet> = loaded
        .iter()
        .map(|(_, _, signal)| detect_boundaries(signal, args.min_depth))
        .collect();
    let comparison = compare_boundaries(&sets, args.tolerance, args.alpha)?;
    let repaired = args.repair.then(|| repair_boundaries(&comparison));

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let report = CompareReport {
        comparison: &comparison,
        repaired: repaired.as_ref(),
    };
    write_atomic(&args.out.join("compare.json"), &to_json_pretty(&report))?;

    print!("{}", comparison_table(&comparison));
    let labels: Vec<String> = sets.iter().map(|s| s.doc_id.clone()).collect();
    println!("agreement:");
    print!("{}", matrix_table(&labels, &comparison.agreement));
    if let Some(repaired) = &repaired {
        for (before, after) in sets.iter().zip(repaired) {
            if before.gaps != after.gaps {
                println!(
                    "repaired {}: {:?} -> {:?}",
                    before.doc_id, before.gaps, after.gaps
                );
            }
        }
    }
    println!("wrote compare.json");
    Ok(())
}
