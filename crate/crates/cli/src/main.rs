use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use lexpand::classifier::{PointMode, Thresholds};
use lexpand::corpus::{load_corpus_dir, Document, FrequencyMatrix};
use lexpand::lexicon::{
    expand_by_sweep, expand_from_corpus, CorpusExpansionConfig, ExpansionConfig, SeedLexicon, Side, SynsetOrder,
    SynsetSelection,
};
use lexpand::pipeline::{classify_matrix, run_pipeline, score_documents, ClassifyOptions, CorpusSource, RunConfig};
use lexpand::plot::{read_results, scatter_points, scatter_svg, write_results, write_scatter, SvgLayout};
use lexpand::similarity::{similarity, Measure, MeasureKind, Variant};
use lexpand::taxonomy::{GraphOptions, TaxonomyGraph};
use lexpand::wndb::{load_database, PartOfSpeech, SynsetId, WordNetDatabase};

#[derive(Parser)]
#[command(
    name = "lexpand",
    version,
    about = "WordNet lexicon expansion and document polarity classification"
)]
struct Cli {
    /// WordNet database directory (data.noun, index.noun, ...).
    #[arg(long, global = true, env = "LEXPAND_WORDNET_DIR")]
    wordnet_dir: Option<PathBuf>,
    /// Upper bound on worker threads and concurrent fetches.
    #[arg(long, global = true, default_value_t = 4)]
    jobs: usize,
    /// Leave verb roots unconnected instead of joining them under one
    /// synthetic root.
    #[arg(long, global = true)]
    no_verb_root: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate the database, then print statistics.
    Load {
        /// Also print the ancestor map of this synset (e.g. dog.n.01).
        #[arg(long)]
        ancestors: Option<String>,
    },
    /// Similarity between two words or synset names.
    Sim(SimArgs),
    /// Grow a seed lexicon by sweeping WordNet synsets.
    Expand(ExpandArgs),
    /// Grow a seed lexicon from words of labeled documents.
    ExpandCorpus(ExpandCorpusArgs),
    /// Count lexicon words in every document of a corpus.
    Score(ScoreArgs),
    /// Label every row of a frequency matrix.
    Classify(ClassifyArgs),
    /// Scatter CSV and SVG from a results table.
    Plot(PlotArgs),
    /// Run expand, score, classify and plot from a config file.
    Pipeline {
        #[arg(long)]
        config: PathBuf,
        /// Overrides output_dir from the config.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SimArgs {
    first: String,
    second: String,
    #[arg(long, default_value = "path")]
    measure: Measure,
    #[arg(long, default_value = "ratio")]
    variant: Variant,
    /// Score every sense pair instead of the first senses only.
    #[arg(long)]
    all_senses: bool,
    /// Restrict word senses to one part of speech (n, v, a, r).
    #[arg(long, value_parser = parse_pos)]
    pos: Option<PartOfSpeech>,
}

#[derive(Args)]
struct ExpandArgs {
    /// Seed lexicon file.
    #[arg(long)]
    seeds: PathBuf,
    /// Output lexicon file.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0.8)]
    tau_good: f64,
    #[arg(long, default_value_t = 0.2)]
    tau_bad: f64,
    /// Number of synsets to sweep.
    #[arg(long, default_value_t = 25000)]
    limit: usize,
    #[arg(long, default_value_t = 3)]
    cap_good: usize,
    #[arg(long, default_value_t = 5)]
    cap_bad: usize,
    /// Skip words already on the receiving side.
    #[arg(long)]
    dedup: bool,
    /// Score every synset against the seeds only.
    #[arg(long)]
    frozen: bool,
    #[arg(long, default_value = "adj-first")]
    order: SynsetOrder,
    /// Draw the synsets at random with this seed instead of taking a prefix.
    #[arg(long)]
    sample_seed: Option<u64>,
    /// Write a per-synset trace (TSV) here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct ExpandCorpusArgs {
    #[arg(long)]
    seeds: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Directory of good documents.
    #[arg(long)]
    good: PathBuf,
    /// Directory of bad documents.
    #[arg(long)]
    bad: PathBuf,
    #[arg(long, default_value_t = 5)]
    repetitions: usize,
    /// Words kept per side; 0 keeps all.
    #[arg(long, default_value_t = 20)]
    top_k: usize,
    #[arg(long, default_value_t = 0.8)]
    membership_threshold: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "source")]
struct SourceArgs {
    /// Directory of documents (manifest.txt fixes the order).
    #[arg(long, group = "source")]
    corpus: Option<PathBuf>,
    /// Hub page whose keyword links are fetched.
    #[arg(long, group = "source")]
    hub: Option<String>,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    lexicon: PathBuf,
    #[command(flatten)]
    source: SourceArgs,
    /// Comma-separated keywords selecting hub links.
    #[arg(long, value_delimiter = ',')]
    keywords: Vec<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    eps1: f64,
    #[arg(long, default_value_t = 0.5)]
    eps2: f64,
    /// Divide polarity coordinates by each document's token count.
    #[arg(long, requires = "corpus")]
    normalize: bool,
    /// Add the average clause sign of each document.
    #[arg(long, requires = "corpus")]
    clauses: bool,
    /// Leave evidence-free clauses unsigned.
    #[arg(long)]
    no_inherit: bool,
    /// Corpus directory the matrix was scored from.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    results: PathBuf,
    /// Scatter CSV output.
    #[arg(long)]
    out: PathBuf,
    /// Also write an SVG scatter here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Put the bad-set frequency on the x axis.
    #[arg(long)]
    swap_axes: bool,
}

fn parse_pos(s: &str) -> Result<PartOfSpeech, String> {
    PartOfSpeech::from_tag(s).ok_or_else(|| format!("unknown part of speech {s:?} (expected n, v, a or r)"))
}

/// Failures that are the caller's fault exit with 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn wordnet(cli: &Cli) -> Result<WordNetDatabase> {
    let Some(dir) = &cli.wordnet_dir else {
        return Err(Usage("no WordNet directory: pass --wordnet-dir or set LEXPAND_WORDNET_DIR".into()).into());
    };
    load_database(dir).with_context(|| format!("wndb: loading {}", dir.display()))
}

fn graph(cli: &Cli, db: &WordNetDatabase) -> Result<TaxonomyGraph> {
    let options = GraphOptions {
        virtual_verb_root: !cli.no_verb_root,
        allow_cycles: true,
    };
    TaxonomyGraph::build_with(db, options).context("taxonomy")
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn cmd_load(cli: &Cli, ancestors: Option<&str>) -> Result<()> {
    let db = wordnet(cli)?;
    let g = graph(cli, &db)?;
    let c = db.counts();
    println!("version\t{}", db.version());
    for (name, pos) in [
        ("noun", PartOfSpeech::Noun),
        ("verb", PartOfSpeech::Verb),
        ("adj", PartOfSpeech::Adjective),
        ("adv", PartOfSpeech::Adverb),
    ] {
        println!("{name}\t{}", c.get(pos));
    }
    println!("total\t{}", c.total());
    for (name, pos) in [("noun", PartOfSpeech::Noun), ("verb", PartOfSpeech::Verb)] {
        let depth = g.max_depth(pos).map_or("-".to_string(), |d| d.to_string());
        println!("{name} roots\t{}\tmax depth\t{depth}", g.roots(pos).len());
    }
    for cycle in g.cycles() {
        let names: Vec<String> = cycle.iter().map(|&id| g.name(&db, id)).collect();
        println!("cycle\t{}", names.join(" -> "));
    }
    if let Some(name) = ancestors {
        let id = synset_by_name(&db, name)?;
        let map = g.ancestor_map(id)?;
        let mut rows: Vec<(u32, String)> = map.iter().map(|(n, d)| (d, g.name(&db, g.synset_id(n)))).collect();
        rows.sort();
        for (d, n) in rows {
            println!("{d}\t{n}");
        }
    }
    Ok(())
}

fn synset_by_name(db: &WordNetDatabase, name: &str) -> Result<SynsetId> {
    db.lookup_name(name)
        .ok_or_else(|| Usage(format!("no synset named {name:?}")).into())
}

fn looks_like_synset_name(s: &str) -> bool {
    let parts: Vec<&str> = s.rsplitn(3, '.').collect();
    parts.len() == 3 && parts[0].chars().all(|c| c.is_ascii_digit()) && parse_pos(parts[1]).is_ok()
}

fn senses(db: &WordNetDatabase, arg: &str, pos: Option<PartOfSpeech>) -> Result<Vec<SynsetId>> {
    if looks_like_synset_name(arg) {
        return Ok(vec![synset_by_name(db, arg)?]);
    }
    let found: Vec<SynsetId> = db.synset_ids_for_word(arg, pos).collect();
    if found.is_empty() {
        bail!(Usage(format!("{arg:?} is not in WordNet")));
    }
    Ok(found)
}

fn cmd_sim(cli: &Cli, args: &SimArgs) -> Result<()> {
    let db = wordnet(cli)?;
    let g = graph(cli, &db)?;
    let a = senses(&db, &args.first, args.pos)?;
    let b = senses(&db, &args.second, args.pos)?;
    let pairs: Vec<(SynsetId, SynsetId)> = if args.all_senses {
        a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
    } else {
        // First sense of each, matching parts of speech when the first
        // word decides one.
        let x = a[0];
        let y = b.iter().copied().find(|y| y.pos == x.pos).unwrap_or(b[0]);
        vec![(x, y)]
    };
    let kind = MeasureKind::new(args.measure, args.variant);
    for (x, y) in pairs {
        let score = similarity(&g, x, y, kind)?;
        let shown = score.map_or("undefined".to_string(), |s| format!("{s:.6}"));
        println!("{}\t{}\t{shown}", g.name(&db, x), g.name(&db, y));
    }
    Ok(())
}

fn load_lexicon(path: &Path) -> Result<SeedLexicon> {
    SeedLexicon::load(path).with_context(|| format!("lexicon: {}", path.display()))
}

fn cmd_expand(cli: &Cli, args: &ExpandArgs) -> Result<()> {
    let config = ExpansionConfig {
        tau_good: args.tau_good,
        tau_bad: args.tau_bad,
        synset_limit: args.limit,
        cap_good: args.cap_good,
        cap_bad: args.cap_bad,
        dedup: args.dedup,
        live_growth: !args.frozen,
        order: args.order,
        selection: args
            .sample_seed
            .map_or(SynsetSelection::Prefix, |seed| SynsetSelection::Sample { seed }),
        trace: args.trace.is_some(),
    };
    config.validate().map_err(|e| Usage(e.to_string()))?;
    let seeds = load_lexicon(&args.seeds)?;
    let db = wordnet(cli)?;
    let g = graph(cli, &db)?;
    let (lexicon, report) = expand_by_sweep(&db, &g, &seeds, &config);
    write(&args.out, lexicon.to_text())?;
    if let Some(path) = &args.trace {
        write(path, report.trace_tsv())?;
    }
    println!(
        "examined {}\tappended good {}\tappended bad {}\tskipped {}",
        report.examined(),
        report.appended_good,
        report.appended_bad,
        report.skipped
    );
    Ok(())
}

fn labeled_dir(dir: &Path, side: Side) -> Result<Vec<(Document, Side)>> {
    let run = load_corpus_dir(dir).with_context(|| format!("corpus: {}", dir.display()))?;
    for e in &run.errors {
        eprintln!("warning: {e}");
    }
    Ok(run.documents.into_iter().map(|d| (d, side)).collect())
}

fn cmd_expand_corpus(cli: &Cli, args: &ExpandCorpusArgs) -> Result<()> {
    let seeds = load_lexicon(&args.seeds)?;
    let mut docs = labeled_dir(&args.good, Side::Good)?;
    docs.extend(labeled_dir(&args.bad, Side::Bad)?);
    let db = wordnet(cli)?;
    let g = graph(cli, &db)?;
    let config = CorpusExpansionConfig {
        repetitions: args.repetitions,
        top_k: (args.top_k > 0).then_some(args.top_k),
        membership_threshold: args.membership_threshold,
        seed: args.seed,
        ..Default::default()
    };
    let lexicon = expand_from_corpus(&docs, &g, &db, &seeds, &config).map_err(|e| Usage(e.to_string()))?;
    write(&args.out, lexicon.to_text())?;
    println!(
        "good {}\tbad {}",
        lexicon.side(Side::Good).len() - seeds.side(Side::Good).len(),
        lexicon.side(Side::Bad).len() - seeds.side(Side::Bad).len()
    );
    Ok(())
}

fn cmd_score(cli: &Cli, args: &ScoreArgs) -> Result<()> {
    let lexicon = load_lexicon(&args.lexicon)?;
    let source = match (&args.source.corpus, &args.source.hub) {
        (Some(dir), _) => CorpusSource::Directory(dir.clone()),
        (None, Some(hub)) => {
            if args.keywords.is_empty() {
                bail!(Usage("--hub needs --keywords".into()));
            }
            CorpusSource::Hub {
                hub: hub.clone(),
                keywords: args.keywords.clone(),
            }
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    let run = source.load(cli.jobs)?;
    for e in &run.errors {
        eprintln!("warning: {e}");
    }
    let matrix = score_documents(&run.documents, &lexicon);
    let mut buf = Vec::new();
    matrix.write_csv(&mut buf)?;
    write(&args.out, buf)?;
    println!(
        "documents {}\tfailed {}\tsparsity {:.4}",
        run.documents.len(),
        run.errors.len(),
        matrix.sparsity()
    );
    Ok(())
}

fn cmd_classify(args: &ClassifyArgs) -> Result<()> {
    let lexicon = load_lexicon(&args.lexicon)?;
    let file = fs::File::open(&args.matrix).with_context(|| format!("opening {}", args.matrix.display()))?;
    let matrix = FrequencyMatrix::read_csv(file).context("matrix")?;
    if matrix.cols != lexicon.column_words() {
        bail!(Usage("matrix columns do not match the lexicon words".into()));
    }
    let documents = match &args.corpus {
        Some(dir) => Some(
            load_corpus_dir(dir)
                .with_context(|| format!("corpus: {}", dir.display()))?
                .documents,
        ),
        None => None,
    };
    let options = ClassifyOptions {
        thresholds: Thresholds {
            eps1: args.eps1,
            eps2: args.eps2,
        },
        mode: if args.normalize {
            PointMode::Normalized
        } else {
            PointMode::Raw
        },
        clauses: args.clauses,
        inherit: !args.no_inherit,
    };
    let rows = classify_matrix(&matrix, &lexicon, &options, documents.as_deref())?;
    let mut buf = Vec::new();
    write_results(&rows, &mut buf)?;
    write(&args.out, buf)?;
    let count = |l| rows.iter().filter(|r| r.label == l).count();
    use lexpand::classifier::Label;
    println!(
        "eps1 {}\teps2 {}\tA {}\tB {}\tUnclassified {}",
        args.eps1,
        args.eps2,
        count(Label::A),
        count(Label::B),
        count(Label::Unclassified)
    );
    Ok(())
}

fn cmd_plot(args: &PlotArgs) -> Result<()> {
    let file = fs::File::open(&args.results).with_context(|| format!("opening {}", args.results.display()))?;
    let rows = read_results(file).context("results")?;
    let points = scatter_points(&rows, args.swap_axes);
    let mut buf = Vec::new();
    write_scatter(&points, &mut buf)?;
    write(&args.out, buf)?;
    if let Some(svg) = &args.svg {
        write(svg, scatter_svg(&points, SvgLayout::default(), args.swap_axes))?;
    }
    Ok(())
}

fn cmd_pipeline(cli: &Cli, config: &Path, output_dir: Option<&Path>) -> Result<()> {
    let mut run = RunConfig::load(config)?;
    if let Some(dir) = output_dir {
        run.output_dir = dir.to_path_buf();
    }
    if run.wordnet_dir.is_none() {
        run.wordnet_dir = cli.wordnet_dir.clone();
    }
    if cli.no_verb_root {
        run.verb_root = false;
    }
    run.jobs = run.jobs.min(cli.jobs.max(1));
    let summary = run_pipeline(&run)?;
    if let Some(report) = &summary.report {
        println!(
            "appended good {}\tappended bad {}",
            report.appended_good, report.appended_bad
        );
    }
    for e in &summary.fetch_errors {
        eprintln!("warning: {e}");
    }
    println!(
        "documents {}\tsparsity {:.4}\tA {}\tB {}\tUnclassified {}",
        summary.documents, summary.sparsity, summary.labels[0], summary.labels[1], summary.labels[2]
    );
    for p in &summary.outputs {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Load { ancestors } => cmd_load(cli, ancestors.as_deref()),
        Command::Sim(args) => cmd_sim(cli, args),
        Command::Expand(args) => cmd_expand(cli, args),
        Command::ExpandCorpus(args) => cmd_expand_corpus(cli, args),
        Command::Score(args) => cmd_score(cli, args),
        Command::Classify(args) => cmd_classify(args),
        Command::Plot(args) => cmd_plot(args),
        Command::Pipeline { config, output_dir } => cmd_pipeline(cli, config, output_dir.as_deref()),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match err.downcast_ref::<lexpand::pipeline::PipelineError>() {
        Some(e) => e.exit_code() as u8,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Read by the global thread pool when it first starts.
    std::env::set_var("RAYON_NUM_THREADS", cli.jobs.max(1).to_string());
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // Library errors already quote their source, so skip causes
            // that repeat what was printed.
            let mut msg = String::new();
            for cause in e.chain() {
                let s = cause.to_string();
                if !msg.contains(&s) {
                    if !msg.is_empty() {
                        msg.push_str(": ");
                    }
                    msg.push_str(&s);
                }
            }
            eprintln!("error: {msg}");
            ExitCode::from(exit_code(&e))
        }
    }
}
