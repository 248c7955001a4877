//! End-to-end runs: expand, score, classify, plot.
//!
//! Each stage is also exposed on its own so the command-line tool can run
//! them separately and get the same files a full run writes.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::classifier::{
    classify_row, document_average_sign, ClassifierError, Label, LexiconSets, PointMode, Thresholds,
};
use crate::corpus::{
    count_frequencies, crawl_hub, load_corpus_dir, unigram_total, CorpusRun, Document, FetchSource, FrequencyMatrix,
    MatrixError,
};
use crate::lexicon::{
    expand_by_sweep, ExpansionConfig, ExpansionReport, LexiconError, SeedLexicon, SynsetOrder, SynsetSelection,
};
use crate::plot::{scatter_points, scatter_svg, write_results, write_scatter, PlotError, ResultRow, SvgLayout};
use crate::taxonomy::{GraphOptions, TaxonomyError, TaxonomyGraph};
use crate::wndb::{load_database, WndbError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("wordnet: {0}")]
    Wordnet(#[from] WndbError),
    #[error("taxonomy: {0}")]
    Taxonomy(#[from] TaxonomyError),
    #[error("lexicon: {0}")]
    Lexicon(#[from] LexiconError),
    #[error("corpus: {0}")]
    Corpus(String),
    #[error("matrix: {0}")]
    Matrix(#[from] MatrixError),
    #[error("classifier: {0}")]
    Classifier(#[from] ClassifierError),
    #[error("plot: {0}")]
    Plot(#[from] PlotError),
    #[error("output: {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl PipelineError {
    /// Process exit status: 2 for usage and configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Usage(_) | PipelineError::Config { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CorpusSource {
    Directory(PathBuf),
    /// A hub page (path or URL) and the keywords selecting its sublinks.
    Hub {
        hub: String,
        keywords: Vec<String>,
    },
}

impl CorpusSource {
    pub fn load(&self, max_concurrent: usize) -> Result<CorpusRun, PipelineError> {
        match self {
            CorpusSource::Directory(dir) => {
                load_corpus_dir(dir).map_err(|e| PipelineError::Corpus(format!("{}: {e}", dir.display())))
            }
            CorpusSource::Hub { hub, keywords } => {
                let mut source = if hub.starts_with("http://") || hub.starts_with("https://") {
                    FetchSource::http()
                } else {
                    FetchSource::local(None)
                };
                source.max_concurrent = max_concurrent.max(1);
                crawl_hub(&source, hub, keywords).map_err(|e| PipelineError::Corpus(e.to_string()))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifyOptions {
    pub thresholds: Thresholds,
    pub mode: PointMode,
    pub clauses: bool,
    pub inherit: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            thresholds: Thresholds::default(),
            mode: PointMode::Raw,
            clauses: false,
            inherit: true,
        }
    }
}

impl ClassifyOptions {
    pub fn needs_documents(&self) -> bool {
        self.clauses || self.mode == PointMode::Normalized
    }
}

pub fn score_documents(documents: &[Document], lexicon: &SeedLexicon) -> FrequencyMatrix {
    count_frequencies(documents, &lexicon.column_words())
}

/// Classifies every matrix row. `documents` supplies token totals and text
/// when the options need them; rows are matched to documents by id.
pub fn classify_matrix(
    matrix: &FrequencyMatrix,
    lexicon: &SeedLexicon,
    options: &ClassifyOptions,
    documents: Option<&[Document]>,
) -> Result<Vec<ResultRow>, PipelineError> {
    let sides = lexicon.column_sides();
    if matrix.cols.len() != sides.len() {
        return Err(ClassifierError::Misaligned {
            row: matrix.cols.len(),
            lexicon: sides.len(),
        }
        .into());
    }
    let by_id: HashMap<&str, &Document> = documents
        .unwrap_or_default()
        .iter()
        .map(|d| (d.id.as_str(), d))
        .collect();
    if options.needs_documents() && documents.is_none() {
        return Err(PipelineError::Usage(
            "normalized coordinates and clause signs need the corpus documents".into(),
        ));
    }
    let sets = options.clauses.then(|| LexiconSets::new(lexicon));

    let mut rows = Vec::with_capacity(matrix.rows.len());
    for (i, id) in matrix.rows.iter().enumerate() {
        let doc = by_id.get(id.as_str()).copied();
        if options.needs_documents() && doc.is_none() {
            return Err(PipelineError::Corpus(format!("no document with id {id:?}")));
        }
        let total = doc.map(|d| unigram_total(&d.text));
        let result = classify_row(matrix.row(i), &sides, options.thresholds, options.mode, total)?;
        let avg = match (&sets, doc) {
            (Some(sets), Some(d)) => Some(document_average_sign(&d.text, sets, options.inherit)),
            _ => None,
        };
        rows.push(ResultRow::new(id.clone(), &result, avg));
    }
    Ok(rows)
}

/// Every setting of a run. Relative paths are resolved against the
/// directory of the config file they came from.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub wordnet_dir: Option<PathBuf>,
    pub lexicon_path: PathBuf,
    pub corpus: CorpusSource,
    pub output_dir: PathBuf,
    /// When false the input lexicon is scored as is.
    pub expand: bool,
    /// Build the taxonomy with a virtual root above the verb roots.
    pub verb_root: bool,
    pub expansion: ExpansionConfig,
    pub classify: ClassifyOptions,
    pub swap_axes: bool,
    pub svg: bool,
    pub random_seed: u64,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            wordnet_dir: None,
            lexicon_path: PathBuf::from("seeds.tsv"),
            corpus: CorpusSource::Directory(PathBuf::from("corpus")),
            output_dir: PathBuf::from("out"),
            expand: true,
            verb_root: true,
            expansion: ExpansionConfig::default(),
            classify: ClassifyOptions::default(),
            swap_axes: false,
            svg: true,
            random_seed: 0,
            jobs: 4,
        }
    }
}

fn parse_bool(v: &str) -> Result<bool, String> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got {v:?}")),
    }
}

fn parse_value<T: std::str::FromStr>(v: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e: T::Err| format!("{v:?}: {e}"))
}

impl RunConfig {
    pub fn parse(text: &str, base: &Path) -> Result<Self, PipelineError> {
        let mut c = RunConfig {
            lexicon_path: base.join("seeds.tsv"),
            output_dir: base.join("out"),
            ..RunConfig::default()
        };
        let mut corpus_dir: Option<PathBuf> = None;
        let mut hub: Option<String> = None;
        let mut keywords: Vec<String> = Vec::new();
        let mut sample = false;
        let resolve = |v: &str| base.join(v);

        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| PipelineError::Config { line: i + 1, message };
            let Some((key, value)) = line.split_once('=') else {
                return Err(err(format!("expected `key = value`, got {line:?}")));
            };
            let (key, v) = (key.trim(), value.trim());
            let r: Result<(), String> = (|| {
                match key {
                    "wordnet_dir" => c.wordnet_dir = Some(resolve(v)),
                    "lexicon_path" => c.lexicon_path = resolve(v),
                    "corpus_dir" => corpus_dir = Some(resolve(v)),
                    "hub" => {
                        hub = Some(if v.contains("://") {
                            v.to_string()
                        } else {
                            resolve(v).to_string_lossy().into_owned()
                        })
                    }
                    "keywords" => {
                        keywords = v
                            .split(',')
                            .map(str::trim)
                            .filter(|k| !k.is_empty())
                            .map(String::from)
                            .collect()
                    }
                    "output_dir" => c.output_dir = resolve(v),
                    "expand" => c.expand = parse_bool(v)?,
                    "verb_root" => c.verb_root = parse_bool(v)?,
                    "tau_good" => c.expansion.tau_good = parse_value(v)?,
                    "tau_bad" => c.expansion.tau_bad = parse_value(v)?,
                    "synset_limit" => c.expansion.synset_limit = parse_value(v)?,
                    "cap_good" => c.expansion.cap_good = parse_value(v)?,
                    "cap_bad" => c.expansion.cap_bad = parse_value(v)?,
                    "dedup" => c.expansion.dedup = parse_bool(v)?,
                    "live_growth" => c.expansion.live_growth = parse_bool(v)?,
                    "order" => c.expansion.order = parse_value::<SynsetOrder>(v)?,
                    "selection" => {
                        sample = match v {
                            "prefix" => false,
                            "sample" => true,
                            _ => return Err(format!("expected prefix or sample, got {v:?}")),
                        }
                    }
                    "eps1" => c.classify.thresholds.eps1 = parse_value(v)?,
                    "eps2" => c.classify.thresholds.eps2 = parse_value(v)?,
                    "normalize" => {
                        c.classify.mode = if parse_bool(v)? {
                            PointMode::Normalized
                        } else {
                            PointMode::Raw
                        }
                    }
                    "clauses" => c.classify.clauses = parse_bool(v)?,
                    "inherit" => c.classify.inherit = parse_bool(v)?,
                    "swap_axes" => c.swap_axes = parse_bool(v)?,
                    "svg" => c.svg = parse_bool(v)?,
                    "random_seed" => c.random_seed = parse_value(v)?,
                    "jobs" => c.jobs = parse_value(v)?,
                    _ => return Err(format!("unknown key {key:?}")),
                }
                Ok(())
            })();
            r.map_err(err)?;
        }

        c.corpus = match (corpus_dir, hub) {
            (Some(_), Some(_)) => {
                return Err(PipelineError::Usage("set either corpus_dir or hub, not both".into()));
            }
            (Some(dir), None) => CorpusSource::Directory(dir),
            (None, Some(hub)) => CorpusSource::Hub { hub, keywords },
            (None, None) => return Err(PipelineError::Usage("config sets neither corpus_dir nor hub".into())),
        };
        if sample {
            c.expansion.selection = SynsetSelection::Sample { seed: c.random_seed };
        }
        if c.expand && c.wordnet_dir.is_none() {
            return Err(PipelineError::Usage("config is missing wordnet_dir".into()));
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = fs::read_to_string(path).map_err(|e| PipelineError::Usage(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new("")))
    }

    /// Serializes every setting with absolute or as-given paths.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        if let Some(dir) = &self.wordnet_dir {
            kv("wordnet_dir", dir.display().to_string());
        }
        kv("lexicon_path", self.lexicon_path.display().to_string());
        match &self.corpus {
            CorpusSource::Directory(dir) => kv("corpus_dir", dir.display().to_string()),
            CorpusSource::Hub { hub, keywords } => {
                kv("hub", hub.clone());
                kv("keywords", keywords.join(","));
            }
        }
        kv("output_dir", self.output_dir.display().to_string());
        kv("expand", self.expand.to_string());
        kv("verb_root", self.verb_root.to_string());
        let e = &self.expansion;
        kv("tau_good", e.tau_good.to_string());
        kv("tau_bad", e.tau_bad.to_string());
        kv("synset_limit", e.synset_limit.to_string());
        kv("cap_good", e.cap_good.to_string());
        kv("cap_bad", e.cap_bad.to_string());
        kv("dedup", e.dedup.to_string());
        kv("live_growth", e.live_growth.to_string());
        kv("order", e.order.to_string());
        kv(
            "selection",
            match e.selection {
                SynsetSelection::Prefix => "prefix",
                SynsetSelection::Sample { .. } => "sample",
            }
            .into(),
        );
        let k = &self.classify;
        kv("eps1", k.thresholds.eps1.to_string());
        kv("eps2", k.thresholds.eps2.to_string());
        kv("normalize", (k.mode == PointMode::Normalized).to_string());
        kv("clauses", k.clauses.to_string());
        kv("inherit", k.inherit.to_string());
        kv("swap_axes", self.swap_axes.to_string());
        kv("svg", self.svg.to_string());
        kv("random_seed", self.random_seed.to_string());
        kv("jobs", self.jobs.to_string());
        s
    }
}

pub const LEXICON_FILE: &str = "lexicon.tsv";
pub const MATRIX_FILE: &str = "matrix.csv";
pub const RESULTS_FILE: &str = "results.csv";
pub const SCATTER_FILE: &str = "scatter.csv";
pub const SVG_FILE: &str = "scatter.svg";
pub const CONFIG_FILE: &str = "run.conf";

#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub lexicon: SeedLexicon,
    pub report: Option<ExpansionReport>,
    pub documents: usize,
    pub fetch_errors: Vec<String>,
    pub sparsity: f64,
    pub labels: [usize; 3],
    pub outputs: Vec<PathBuf>,
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), PipelineError> {
    fs::write(path, bytes).map_err(|source| PipelineError::Output {
        path: path.display().to_string(),
        source,
    })
}

pub fn run_pipeline(config: &RunConfig) -> Result<RunSummary, PipelineError> {
    let seeds = SeedLexicon::load(&config.lexicon_path)?;

    let (lexicon, report) = if config.expand {
        let dir = config
            .wordnet_dir
            .as_deref()
            .ok_or_else(|| PipelineError::Usage("config is missing wordnet_dir".into()))?;
        config.expansion.validate()?;
        let db = load_database(dir)?;
        let options = GraphOptions {
            virtual_verb_root: config.verb_root,
            allow_cycles: true,
        };
        let graph = TaxonomyGraph::build_with(&db, options)?;
        let (lexicon, report) = expand_by_sweep(&db, &graph, &seeds, &config.expansion);
        (lexicon, Some(report))
    } else {
        (seeds, None)
    };

    let run = config.corpus.load(config.jobs)?;
    let matrix = score_documents(&run.documents, &lexicon);
    let rows = classify_matrix(&matrix, &lexicon, &config.classify, Some(&run.documents))?;
    let points = scatter_points(&rows, config.swap_axes);

    let out = &config.output_dir;
    fs::create_dir_all(out).map_err(|source| PipelineError::Output {
        path: out.display().to_string(),
        source,
    })?;
    let mut outputs = Vec::new();
    let mut emit = |name: &str, bytes: Vec<u8>| -> Result<(), PipelineError> {
        let path = out.join(name);
        write_file(&path, &bytes)?;
        outputs.push(path);
        Ok(())
    };

    emit(LEXICON_FILE, lexicon.to_text().into_bytes())?;
    let mut buf = Vec::new();
    matrix.write_csv(&mut buf)?;
    emit(MATRIX_FILE, buf)?;
    let mut buf = Vec::new();
    write_results(&rows, &mut buf)?;
    emit(RESULTS_FILE, buf)?;
    let mut buf = Vec::new();
    write_scatter(&points, &mut buf)?;
    emit(SCATTER_FILE, buf)?;
    if config.svg {
        emit(
            SVG_FILE,
            scatter_svg(&points, SvgLayout::default(), config.swap_axes).into_bytes(),
        )?;
    }
    emit(CONFIG_FILE, config.to_text().into_bytes())?;

    let mut labels = [0usize; 3];
    for r in &rows {
        labels[match r.label {
            Label::A => 0,
            Label::B => 1,
            Label::Unclassified => 2,
        }] += 1;
    }
    Ok(RunSummary {
        lexicon,
        report,
        documents: run.documents.len(),
        fetch_errors: run.errors.iter().map(ToString::to_string).collect(),
        sparsity: matrix.sparsity(),
        labels,
        outputs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip() {
        let text = "wordnet_dir = wn\nlexicon_path = seeds.tsv\ncorpus_dir = docs\n\
                    tau_bad = 0.5\nselection = sample\nrandom_seed = 7\nclauses = true\n";
        let c = RunConfig::parse(text, Path::new("/base")).unwrap();
        assert_eq!(c.wordnet_dir.as_deref(), Some(Path::new("/base/wn")));
        assert_eq!(c.corpus, CorpusSource::Directory("/base/docs".into()));
        assert_eq!(c.expansion.selection, SynsetSelection::Sample { seed: 7 });
        assert!(c.classify.clauses);
        let again = RunConfig::parse(&c.to_text(), Path::new("/elsewhere")).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn config_errors() {
        let missing = RunConfig::parse("lexicon_path = s\ncorpus_dir = d\n", Path::new(""));
        assert!(matches!(missing, Err(ref e) if e.exit_code() == 2 && e.to_string().contains("wordnet_dir")));
        let bad = RunConfig::parse("wordnet_dir = w\ncorpus_dir = d\ntau_good = x\n", Path::new(""));
        assert!(matches!(bad, Err(PipelineError::Config { line: 3, .. })));
        let unknown = RunConfig::parse("colour = red\n", Path::new(""));
        assert!(matches!(unknown, Err(PipelineError::Config { line: 1, .. })));
        let without_expand = RunConfig::parse("expand = false\ncorpus_dir = d\n", Path::new(""));
        assert!(without_expand.is_ok());
    }
}
