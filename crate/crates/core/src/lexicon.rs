//! Good/bad word lexicons and the two ways of growing them.
//!
//! The synset sweep walks the database and, for each synset, takes the best
//! path similarity against the current good list (`maxp`) and bad list
//! (`maxn`). A synset whose word part is appended must sit strictly inside
//! both windows `0 < maxp < tau_good` and `0 < maxn < tau_bad`; it goes to
//! the good list when `maxp > maxn` and to the bad list otherwise.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{tokenize_parts, Document};
use crate::similarity::path_score;
use crate::taxonomy::{AncestorMap, NodeId, TaxonomyGraph};
use crate::wndb::{normalize_lemma, word_part, PartOfSpeech, SynsetId, WordNetDatabase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Good,
    Bad,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Good => Side::Bad,
            Side::Bad => Side::Good,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Good => "good",
            Side::Bad => "bad",
        })
    }
}

impl FromStr for Side {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "good" => Ok(Side::Good),
            "bad" => Ok(Side::Bad),
            _ => Err(format!("unknown side {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Seed,
    Sweep,
    Corpus,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Seed => "seed",
            Provenance::Sweep => "sweep",
            Provenance::Corpus => "corpus",
        })
    }
}

impl FromStr for Provenance {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "seed" => Ok(Provenance::Seed),
            "sweep" => Ok(Provenance::Sweep),
            "corpus" => Ok(Provenance::Corpus),
            _ => Err(format!("unknown provenance {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexiconEntry {
    pub word: String,
    pub provenance: Provenance,
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("failed to access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Ordered good and bad word lists. Duplicates are allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SeedLexicon {
    pub good: Vec<LexiconEntry>,
    pub bad: Vec<LexiconEntry>,
}

/// Positive seed words for movie-style reviews.
pub const REVIEW_GOOD_SEEDS: [&str; 23] = [
    "good",
    "dazzling",
    "brilliant",
    "phenomenal",
    "excellent",
    "fantastic",
    "gripping",
    "mesmerizing",
    "riveting",
    "spectacular",
    "cool",
    "awesome",
    "thrilling",
    "badass",
    "moving",
    "exciting",
    "love",
    "wonderful",
    "best",
    "great",
    "superb",
    "still",
    "beautiful",
];

/// Negative seed words for movie-style reviews.
pub const REVIEW_BAD_SEEDS: [&str; 13] = [
    "suck",
    "terrible",
    "awful",
    "unwatchable",
    "hideous",
    "bad",
    "clichéd",
    "sucks",
    "boring",
    "stupid",
    "slow",
    "worst",
    "waste",
];

impl SeedLexicon {
    pub fn from_seeds<S: AsRef<str>>(good: &[S], bad: &[S]) -> Self {
        let entries = |words: &[S]| {
            words
                .iter()
                .map(|w| LexiconEntry {
                    word: w.as_ref().to_string(),
                    provenance: Provenance::Seed,
                })
                .collect()
        };
        SeedLexicon {
            good: entries(good),
            bad: entries(bad),
        }
    }

    /// The 23 + 13 movie review seeds.
    pub fn review_seeds() -> Self {
        Self::from_seeds(&REVIEW_GOOD_SEEDS, &REVIEW_BAD_SEEDS)
    }

    pub fn side(&self, side: Side) -> &[LexiconEntry] {
        match side {
            Side::Good => &self.good,
            Side::Bad => &self.bad,
        }
    }

    fn side_mut(&mut self, side: Side) -> &mut Vec<LexiconEntry> {
        match side {
            Side::Good => &mut self.good,
            Side::Bad => &mut self.bad,
        }
    }

    pub fn push(&mut self, side: Side, word: impl Into<String>, provenance: Provenance) {
        self.side_mut(side).push(LexiconEntry {
            word: word.into(),
            provenance,
        });
    }

    pub fn words(&self, side: Side) -> impl Iterator<Item = &str> {
        self.side(side).iter().map(|e| e.word.as_str())
    }

    /// Matrix column layout: every good entry, then every bad entry.
    pub fn columns(&self) -> Vec<(Side, &str)> {
        self.words(Side::Good)
            .map(|w| (Side::Good, w))
            .chain(self.words(Side::Bad).map(|w| (Side::Bad, w)))
            .collect()
    }

    pub fn column_sides(&self) -> Vec<Side> {
        self.columns().into_iter().map(|(s, _)| s).collect()
    }

    pub fn column_words(&self) -> Vec<String> {
        self.columns().into_iter().map(|(_, w)| w.to_string()).collect()
    }

    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut lexicon = SeedLexicon::default();
        for (i, line) in text.lines().enumerate() {
            let err = |message: String| LexiconError::Parse { line: i + 1, message };
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [side, word, provenance] = fields[..] else {
                return Err(err(format!("expected 3 tab-separated fields, found {}", fields.len())));
            };
            if word.is_empty() {
                return Err(err("empty word".into()));
            }
            let side: Side = side.parse().map_err(err)?;
            let provenance: Provenance = provenance.parse().map_err(err)?;
            lexicon.push(side, word, provenance);
        }
        Ok(lexicon)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# side\tword\tprovenance\n");
        for side in [Side::Good, Side::Bad] {
            for e in self.side(side) {
                out.push_str(&format!("{side}\t{}\t{}\n", e.word, e.provenance));
            }
        }
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), LexiconError> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SynsetOrder {
    /// Noun, verb, adjective, adverb files, each by ascending offset.
    File,
    /// One synset from each part of speech in turn.
    PosInterleaved,
    /// Adjective, adverb, verb, then noun files, each by ascending offset.
    /// Older toolkits enumerated every synset in this order, and the
    /// default 25000-synset prefix then covers adjectives, adverbs and the
    /// first few thousand verbs.
    #[default]
    AdjFirst,
}

impl FromStr for SynsetOrder {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "file" => Ok(SynsetOrder::File),
            "pos-interleaved" => Ok(SynsetOrder::PosInterleaved),
            "adj-first" => Ok(SynsetOrder::AdjFirst),
            _ => Err(format!("unknown synset order {s:?}")),
        }
    }
}

impl fmt::Display for SynsetOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SynsetOrder::File => "file",
            SynsetOrder::PosInterleaved => "pos-interleaved",
            SynsetOrder::AdjFirst => "adj-first",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SynsetSelection {
    /// The first `synset_limit` synsets of the order.
    #[default]
    Prefix,
    /// `synset_limit` synsets drawn uniformly without replacement, visited
    /// in order.
    Sample { seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionConfig {
    pub tau_good: f64,
    pub tau_bad: f64,
    pub synset_limit: usize,
    pub cap_good: usize,
    pub cap_bad: usize,
    pub dedup: bool,
    pub live_growth: bool,
    pub order: SynsetOrder,
    pub selection: SynsetSelection,
    pub trace: bool,
}

impl Default for ExpansionConfig {
    fn default() -> Self {
        ExpansionConfig {
            tau_good: 0.8,
            tau_bad: 0.2,
            synset_limit: 25000,
            cap_good: 3,
            cap_bad: 5,
            dedup: false,
            live_growth: true,
            order: SynsetOrder::AdjFirst,
            selection: SynsetSelection::Prefix,
            trace: false,
        }
    }
}

impl ExpansionConfig {
    pub fn validate(&self) -> Result<(), LexiconError> {
        if !(0.0 < self.tau_bad && self.tau_bad <= self.tau_good && self.tau_good <= 1.0) {
            return Err(LexiconError::Config(format!(
                "thresholds must satisfy 0 < tau_bad <= tau_good <= 1 (got {} and {})",
                self.tau_good, self.tau_bad
            )));
        }
        if self.cap_good == 0 || self.cap_bad == 0 {
            return Err(LexiconError::Config("sense caps must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepDecision {
    AppendGood,
    AppendBad,
    Skip,
}

impl fmt::Display for SweepDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepDecision::AppendGood => "good",
            SweepDecision::AppendBad => "bad",
            SweepDecision::Skip => "skip",
        })
    }
}

pub fn sweep_decision(maxp: f64, maxn: f64, tau_good: f64, tau_bad: f64) -> SweepDecision {
    if 0.0 < maxp && maxp < tau_good && 0.0 < maxn && maxn < tau_bad {
        if maxp > maxn {
            SweepDecision::AppendGood
        } else {
            SweepDecision::AppendBad
        }
    } else {
        SweepDecision::Skip
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub synset: SynsetId,
    pub name: String,
    pub word: String,
    pub maxp: f64,
    pub maxn: f64,
    pub decision: SweepDecision,
    /// False when the decision was an append that dedup mode suppressed.
    pub appended: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExpansionReport {
    pub appended_good: usize,
    pub appended_bad: usize,
    pub skipped: usize,
    pub trace: Option<Vec<TraceRow>>,
}

impl ExpansionReport {
    pub fn examined(&self) -> usize {
        self.appended_good + self.appended_bad + self.skipped
    }

    /// Tab-separated trace, one synset per line.
    pub fn trace_tsv(&self) -> String {
        let mut out = String::from("synset\tname\tword\tmaxp\tmaxn\tdecision\tappended\n");
        for r in self.trace.iter().flatten() {
            out.push_str(&format!(
                "{}\t{}\t{}\t{:.6}\t{:.6}\t{}\t{}\n",
                r.synset, r.name, r.word, r.maxp, r.maxn, r.decision, r.appended
            ));
        }
        out
    }
}

/// Distinct senses of one side of a lexicon, with their ancestor maps.
struct SenseSet<'g> {
    graph: &'g TaxonomyGraph,
    cap: usize,
    pos: Option<PartOfSpeech>,
    words: HashSet<String>,
    nodes: HashSet<NodeId>,
    maps: Vec<Arc<AncestorMap>>,
}

impl<'g> SenseSet<'g> {
    fn new(graph: &'g TaxonomyGraph, cap: usize, pos: Option<PartOfSpeech>) -> Self {
        SenseSet {
            graph,
            cap,
            pos,
            words: HashSet::new(),
            nodes: HashSet::new(),
            maps: Vec::new(),
        }
    }

    fn add_word(&mut self, db: &WordNetDatabase, word: &str) {
        let lemma = normalize_lemma(word);
        if !self.words.insert(lemma.clone()) {
            return;
        }
        for id in db.synset_ids_for_word(&lemma, self.pos).take(self.cap) {
            let node = self.graph.node(id).expect("graph built from this database");
            if self.nodes.insert(node) {
                self.maps.push(self.graph.ancestors(node));
            }
        }
    }

    /// Best path similarity between any sense in the set and the synset
    /// whose ancestor distances are loaded in `scratch`.
    fn best_score(&self, scratch: &Scratch) -> f64 {
        let mut best: Option<u32> = None;
        for map in &self.maps {
            for (n, d) in map.iter() {
                if let Some(dt) = scratch.get(n) {
                    let total = d + dt;
                    if best.is_none_or(|b| total < b) {
                        best = Some(total);
                    }
                }
            }
        }
        best.map_or(0.0, path_score)
    }
}

/// Dense ancestor-distance table for the synset under test.
struct Scratch {
    dist: Vec<u32>,
    stamp: Vec<u32>,
    generation: u32,
}

impl Scratch {
    fn new(len: usize) -> Self {
        Scratch {
            dist: vec![0; len],
            stamp: vec![0; len],
            generation: 0,
        }
    }

    fn load(&mut self, map: &AncestorMap) {
        self.generation += 1;
        for (n, d) in map.iter() {
            self.dist[n.index()] = d;
            self.stamp[n.index()] = self.generation;
        }
    }

    fn get(&self, n: NodeId) -> Option<u32> {
        (self.stamp[n.index()] == self.generation).then(|| self.dist[n.index()])
    }
}

/// Positions (canonical order) of the synsets a sweep visits.
pub fn sweep_positions(db: &WordNetDatabase, config: &ExpansionConfig) -> Vec<usize> {
    let mut per_pos: Vec<Vec<usize>> = vec![Vec::new(); 4];
    for (i, s) in db.synsets().iter().enumerate() {
        let slot = PartOfSpeech::FILE_ORDER
            .iter()
            .position(|&p| p == s.id.pos)
            .expect("synset ids never carry the satellite tag");
        per_pos[slot].push(i);
    }
    let ordered: Vec<usize> = match config.order {
        SynsetOrder::File => (0..db.len()).collect(),
        SynsetOrder::AdjFirst => [2, 3, 1, 0].iter().flat_map(|&k| per_pos[k].iter().copied()).collect(),
        SynsetOrder::PosInterleaved => {
            let longest = per_pos.iter().map(Vec::len).max().unwrap_or(0);
            (0..longest)
                .flat_map(|k| per_pos.iter().filter_map(move |v| v.get(k).copied()))
                .collect()
        }
    };
    let limit = config.synset_limit.min(ordered.len());
    match config.selection {
        SynsetSelection::Prefix => ordered[..limit].to_vec(),
        SynsetSelection::Sample { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked = sample(&mut rng, ordered.len(), limit).into_vec();
            picked.sort_unstable();
            picked.into_iter().map(|k| ordered[k]).collect()
        }
    }
}

#[derive(Clone, Copy)]
struct Scored {
    maxp: f64,
    maxn: f64,
    decision: SweepDecision,
}

fn score_synset(
    graph: &TaxonomyGraph,
    good: &SenseSet<'_>,
    bad: &SenseSet<'_>,
    scratch: &mut Scratch,
    node: NodeId,
    config: &ExpansionConfig,
) -> Scored {
    scratch.load(&graph.compute_ancestor_map(node));
    let maxp = good.best_score(scratch);
    let maxn = bad.best_score(scratch);
    Scored {
        maxp,
        maxn,
        decision: sweep_decision(maxp, maxn, config.tau_good, config.tau_bad),
    }
}

/// Grows a lexicon by sweeping database synsets against both sides.
///
/// With `live_growth` every appended word immediately joins the side it was
/// appended to, so later synsets are scored against the grown list. Without
/// it every synset is scored against the input lexicon only, which makes
/// the result independent of visiting order.
///
/// `graph` must have been built from `db`.
pub fn expand_by_sweep(
    db: &WordNetDatabase,
    graph: &TaxonomyGraph,
    lexicon: &SeedLexicon,
    config: &ExpansionConfig,
) -> (SeedLexicon, ExpansionReport) {
    let mut out = lexicon.clone();
    let mut report = ExpansionReport {
        trace: config.trace.then(Vec::new),
        ..Default::default()
    };

    let mut good = SenseSet::new(graph, config.cap_good, None);
    let mut bad = SenseSet::new(graph, config.cap_bad, None);
    for w in lexicon.words(Side::Good) {
        good.add_word(db, w);
    }
    for w in lexicon.words(Side::Bad) {
        bad.add_word(db, w);
    }
    let mut present: [HashSet<String>; 2] = [
        lexicon.words(Side::Good).map(str::to_string).collect(),
        lexicon.words(Side::Bad).map(str::to_string).collect(),
    ];

    let positions = sweep_positions(db, config);
    let nodes: Vec<NodeId> = positions
        .iter()
        .map(|&pos| {
            graph
                .node(db.synsets()[pos].id)
                .expect("graph built from this database")
        })
        .collect();

    let frozen_scores: Option<Vec<Scored>> =
        (!config.live_growth).then(|| score_frozen(graph, &good, &bad, &nodes, config));

    let mut scratch = Scratch::new(graph.len());
    for (k, &pos) in positions.iter().enumerate() {
        let scored = match &frozen_scores {
            Some(s) => s[k],
            None => score_synset(graph, &good, &bad, &mut scratch, nodes[k], config),
        };
        let side = match scored.decision {
            SweepDecision::AppendGood => Some(Side::Good),
            SweepDecision::AppendBad => Some(Side::Bad),
            SweepDecision::Skip => None,
        };

        let needs_name = side.is_some() || report.trace.is_some();
        let name = if needs_name {
            db.display_name(db.synsets()[pos].id).unwrap_or_default()
        } else {
            String::new()
        };
        let word = word_part(&name).to_string();

        let mut appended = false;
        if let Some(side) = side {
            let slot = side as usize;
            if !config.dedup || !present[slot].contains(&word) {
                out.push(side, word.clone(), Provenance::Sweep);
                present[slot].insert(word.clone());
                appended = true;
                if config.live_growth {
                    match side {
                        Side::Good => good.add_word(db, &word),
                        Side::Bad => bad.add_word(db, &word),
                    }
                }
            }
        }
        match (side, appended) {
            (Some(Side::Good), true) => report.appended_good += 1,
            (Some(Side::Bad), true) => report.appended_bad += 1,
            _ => report.skipped += 1,
        }
        if let Some(trace) = &mut report.trace {
            trace.push(TraceRow {
                synset: db.synsets()[pos].id,
                name,
                word,
                maxp: scored.maxp,
                maxn: scored.maxn,
                decision: scored.decision,
                appended,
            });
        }
    }
    (out, report)
}

#[cfg(feature = "parallel")]
fn score_frozen(
    graph: &TaxonomyGraph,
    good: &SenseSet<'_>,
    bad: &SenseSet<'_>,
    nodes: &[NodeId],
    config: &ExpansionConfig,
) -> Vec<Scored> {
    use rayon::prelude::*;
    nodes
        .par_iter()
        .map_init(
            || Scratch::new(graph.len()),
            |scratch, &node| score_synset(graph, good, bad, scratch, node, config),
        )
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn score_frozen(
    graph: &TaxonomyGraph,
    good: &SenseSet<'_>,
    bad: &SenseSet<'_>,
    nodes: &[NodeId],
    config: &ExpansionConfig,
) -> Vec<Scored> {
    let mut scratch = Scratch::new(graph.len());
    nodes
        .iter()
        .map(|&node| score_synset(graph, good, bad, &mut scratch, node, config))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusExpansionConfig {
    pub repetitions: usize,
    /// `None` keeps every word that appeared in some repetition.
    pub top_k: Option<usize>,
    /// A word scoring above this against either pool counts as already
    /// classified and is disregarded.
    pub membership_threshold: f64,
    /// Senses considered when comparing words; nouns by default.
    pub pos: Option<PartOfSpeech>,
    pub seed: u64,
}

impl Default for CorpusExpansionConfig {
    fn default() -> Self {
        CorpusExpansionConfig {
            repetitions: 5,
            top_k: Some(20),
            membership_threshold: 0.8,
            pos: Some(PartOfSpeech::Noun),
            seed: 0,
        }
    }
}

/// Starting good and bad documents for each repetition.
pub fn pick_pool_documents(
    labels: &[Side],
    repetitions: usize,
    seed: u64,
) -> Result<Vec<(usize, usize)>, LexiconError> {
    let good: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == Side::Good).collect();
    let bad: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == Side::Bad).collect();
    if good.is_empty() || bad.is_empty() {
        return Err(LexiconError::Config(
            "corpus expansion needs at least one good and one bad document".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..repetitions)
        .map(|_| (good[rng.gen_range(0..good.len())], bad[rng.gen_range(0..bad.len())]))
        .collect())
}

/// Unigrams, plus bigrams that are WordNet lemmas, without repeats.
fn document_words(db: &WordNetDatabase, doc: &Document) -> Vec<String> {
    let tokens = tokenize_parts(&doc.text);
    let mut seen = HashSet::new();
    tokens
        .unigrams
        .into_iter()
        .chain(tokens.bigrams.into_iter().filter(|b| db.contains_lemma(b)))
        .filter(|w| seen.insert(w.clone()))
        .collect()
}

struct Pool<'g> {
    words: Vec<String>,
    senses: SenseSet<'g>,
}

impl<'g> Pool<'g> {
    fn new(graph: &'g TaxonomyGraph, db: &WordNetDatabase, pos: Option<PartOfSpeech>, words: Vec<String>) -> Self {
        let mut senses = SenseSet::new(graph, usize::MAX, pos);
        for w in &words {
            senses.add_word(db, w);
        }
        Pool { words, senses }
    }

    fn push(&mut self, db: &WordNetDatabase, word: &str) {
        if !self.words.iter().any(|w| w == word) {
            self.words.push(word.to_string());
            self.senses.add_word(db, word);
        }
    }
}

/// Corpus-driven expansion with explicit starting documents per repetition.
pub fn expand_from_corpus_with_picks(
    labeled: &[(Document, Side)],
    graph: &TaxonomyGraph,
    db: &WordNetDatabase,
    seeds: &SeedLexicon,
    config: &CorpusExpansionConfig,
    picks: &[(usize, usize)],
) -> SeedLexicon {
    let words: Vec<Vec<String>> = labeled.iter().map(|(d, _)| document_words(db, d)).collect();
    let mut scratch = Scratch::new(graph.len());

    // Per side: word -> (repetition count, first appearance).
    let mut tallies: [HashMap<String, (usize, usize)>; 2] = [HashMap::new(), HashMap::new()];
    let mut appearance = 0usize;

    for &(g, b) in picks {
        let mut pools = [
            Pool::new(graph, db, config.pos, words[g].clone()),
            Pool::new(graph, db, config.pos, words[b].clone()),
        ];
        for (k, (_, label)) in labeled.iter().enumerate() {
            if k == g || k == b {
                continue;
            }
            for w in &words[k] {
                if word_score(db, graph, &pools[0].senses, &mut scratch, w, config.pos) > config.membership_threshold
                    || word_score(db, graph, &pools[1].senses, &mut scratch, w, config.pos)
                        > config.membership_threshold
                {
                    continue;
                }
                pools[*label as usize].push(db, w);
            }
        }
        for (slot, pool) in pools.iter().enumerate() {
            for w in &pool.words {
                let e = tallies[slot].entry(w.clone()).or_insert((0, appearance));
                e.0 += 1;
                appearance += 1;
            }
        }
    }

    let mut out = seeds.clone();
    for side in [Side::Good, Side::Bad] {
        let mut ranked: Vec<(&String, &(usize, usize))> = tallies[side as usize].iter().collect();
        ranked.sort_by(|a, b| b.1 .0.cmp(&a.1 .0).then(a.1 .1.cmp(&b.1 .1)));
        for (w, _) in ranked.into_iter().take(config.top_k.unwrap_or(usize::MAX)) {
            out.push(side, w.clone(), Provenance::Corpus);
        }
    }
    out
}

/// Best similarity between any sense of `word` and any sense in `set`.
fn word_score(
    db: &WordNetDatabase,
    graph: &TaxonomyGraph,
    set: &SenseSet<'_>,
    scratch: &mut Scratch,
    word: &str,
    pos: Option<PartOfSpeech>,
) -> f64 {
    let mut best = 0.0f64;
    for id in db.synset_ids_for_word(&normalize_lemma(word), pos) {
        let node = graph.node(id).expect("graph built from this database");
        scratch.load(&graph.ancestors(node));
        best = best.max(set.best_score(scratch));
    }
    best
}

/// Corpus-driven expansion: `repetitions` runs, each seeded by a randomly
/// drawn good and bad document, merged by how often each word recurs.
pub fn expand_from_corpus(
    labeled: &[(Document, Side)],
    graph: &TaxonomyGraph,
    db: &WordNetDatabase,
    seeds: &SeedLexicon,
    config: &CorpusExpansionConfig,
) -> Result<SeedLexicon, LexiconError> {
    if config.repetitions == 0 || config.top_k == Some(0) {
        return Err(LexiconError::Config("repetitions and top_k must be at least 1".into()));
    }
    let labels: Vec<Side> = labeled.iter().map(|(_, s)| *s).collect();
    let picks = pick_pool_documents(&labels, config.repetitions, config.seed)?;
    Ok(expand_from_corpus_with_picks(labeled, graph, db, seeds, config, &picks))
}
