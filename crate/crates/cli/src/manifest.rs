//! The run manifest: a small TSV listing the labeled analysis runs a
//! multi-document command operates on.
//!
//! One run per line: `label<TAB>path<TAB>key=value...`. Recognized keys are
//! `lang`, `mode` (surface|lemma|ngram), `ngram`, `lemmas`, `stoplist`,
//! `filter` (ma|hamming), and `window`; anything a run does not set falls
//! back to the command-line flags. Paths in the manifest are resolved
//! relative to the manifest file. A line starting with the reserved word
//! `alignment` names an alignment file for the run set. Blank lines and `#`
//! comments are ignored.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use cohesion::{load_lemma_table, load_stoplist, AnalysisConfig, AnalysisMode, FilterSpec};

/// Flag-level defaults a manifest line can override.
#[derive(Debug, Clone)]
pub struct RunDefaults {
    pub language: String,
    pub mode: String,
    pub ngram: usize,
    pub lemmas: Option<PathBuf>,
    pub stoplist: Option<PathBuf>,
    pub filter: String,
    pub window: usize,
}

/// One labeled analysis run.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub label: String,
    pub path: PathBuf,
    pub language: String,
    pub analysis: AnalysisConfig,
    pub filter: FilterSpec,
}

#[derive(Debug, Clone)]
pub struct RunManifest {
    pub runs: Vec<RunSpec>,
    #[allow(dead_code)] // recorded for tooling; commands check counts directly
    pub alignment: Option<PathBuf>,
}

struct RawRun {
    label: String,
    path: String,
    language: String,
    mode: String,
    ngram: usize,
    lemmas: Option<String>,
    stoplist: Option<String>,
    filter: String,
    window: usize,
}

pub fn load_manifest(path: &Path, defaults: &RunDefaults) -> Result<RunManifest> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));

    let mut raws: Vec<RawRun> = Vec::new();
    let mut alignment = None;
    let mut labels = BTreeSet::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields[0] == "alignment" {
            if fields.len() != 2 {
                bail!("manifest line {lineno}: alignment takes exactly one path");
            }
            alignment = Some(base.join(fields[1]));
            continue;
        }
        if fields.len() < 2 {
            bail!("manifest line {lineno}: expected label<TAB>path");
        }
        if !labels.insert(fields[0].to_string()) {
            bail!("manifest line {lineno}: duplicate label {:?}", fields[0]);
        }

        let mut raw = RawRun {
            label: fields[0].to_string(),
            path: fields[1].to_string(),
            language: defaults.language.clone(),
            mode: defaults.mode.clone(),
            ngram: defaults.ngram,
            lemmas: None,
            stoplist: None,
            filter: defaults.filter.clone(),
            window: defaults.window,
        };
        for field in &fields[2..] {
            let Some((key, value)) = field.split_once('=') else {
                bail!("manifest line {lineno}: expected key=value, found {field:?}");
            };
            match key {
                "lang" => raw.language = value.to_string(),
                "mode" => raw.mode = value.to_string(),
                "ngram" => {
                    raw.ngram = value
                        .parse()
                        .with_context(|| format!("manifest line {lineno}: ngram {value:?}"))?;
                }
                "lemmas" => raw.lemmas = Some(value.to_string()),
                "stoplist" => raw.stoplist = Some(value.to_string()),
                "filter" => raw.filter = value.to_string(),
                "window" => {
                    raw.window = value
                        .parse()
                        .with_context(|| format!("manifest line {lineno}: window {value:?}"))?;
                }
                other => bail!("manifest line {lineno}: unknown key {other:?}"),
            }
        }
        raws.push(raw);
    }

    let mut runs = Vec::new();
    for raw in raws {
        let lemmas_path = raw
            .lemmas
            .map(|p| base.join(p))
            .or_else(|| defaults.lemmas.clone());
        let stoplist_path = raw
            .stoplist
            .map(|p| base.join(p))
            .or_else(|| defaults.stoplist.clone());
        let analysis = build_analysis_config(
            &raw.mode,
            raw.ngram,
            lemmas_path.as_deref(),
            stoplist_path.as_deref(),
        )
        .with_context(|| format!("run {:?}", raw.label))?;
        let filter = build_filter_spec(&raw.filter, raw.window)
            .with_context(|| format!("run {:?}", raw.label))?;
        runs.push(RunSpec {
            label: raw.label,
            path: base.join(raw.path),
            language: raw.language,
            analysis,
            filter,
        });
    }
    Ok(RunManifest { runs, alignment })
}

/// Assembles an analysis configuration, loading lemma table and stoplist
/// files as needed.
pub fn build_analysis_config(
    mode: &str,
    ngram: usize,
    lemmas: Option<&Path>,
    stoplist: Option<&Path>,
) -> Result<AnalysisConfig> {
    let mut cfg = match mode {
        "surface" => AnalysisConfig::surface(),
        "ngram" => AnalysisConfig::char_ngram(ngram),
        "lemma" => {
            let path = lemmas.context("--mode lemma needs a lemma table (--lemmas FILE)")?;
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading lemma table {}", path.display()))?;
            let table = load_lemma_table(&text)
                .with_context(|| format!("parsing lemma table {}", path.display()))?;
            AnalysisConfig::lemmatized(table)
        }
        other => bail!("unknown analysis mode {other:?} (expected surface, lemma, or ngram)"),
    };
    if let Some(path) = stoplist {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading stoplist {}", path.display()))?;
        cfg = cfg.with_stoplist(load_stoplist(&text));
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn build_filter_spec(kind: &str, window: usize) -> Result<FilterSpec> {
    let spec = match kind {
        "ma" => FilterSpec::moving_average(window),
        "hamming" => FilterSpec::hamming(window),
        other => bail!("unknown filter {other:?} (expected ma or hamming)"),
    };
    spec.kernel()?;
    Ok(spec)
}

/// Human-readable mode name used in messages.
pub fn mode_name(mode: AnalysisMode) -> &'static str {
    match mode {
        AnalysisMode::Surface => "surface",
        AnalysisMode::Lemmatized => "lemmatized",
        AnalysisMode::CharNgram => "char_ngram",
    }
}
