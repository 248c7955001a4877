//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Everything here is plain Rust returning `Result<_, String>`, so the same
//! functions run under `cargo test` and in the page.

use wasm_bindgen::prelude::*;

use lexpand::classifier::{
    classify_row, clause_signs, document_average_sign, split_clauses, split_sentences, Connective, LexiconSets,
    PointMode, Thresholds,
};
use lexpand::corpus::{count_frequencies, unigram_total, Document};
use lexpand::lexicon::{expand_by_sweep, ExpansionConfig, Provenance, SeedLexicon, Side};
use lexpand::plot::{scatter_points, scatter_svg, ResultRow, SvgLayout};
use lexpand::similarity::{similarity, Measure, MeasureKind, Variant};
use lexpand::taxonomy::GraphOptions;
use lexpand::wndb::{PartOfSpeech, PosSource};
use lexpand::{SynsetId, TaxonomyGraph, WordNetDatabase};

macro_rules! fixture {
    ($name:literal) => {
        include_str!(concat!("../../core/testdata/miniwn/", $name))
    };
}

/// A loaded database plus its hypernym graph.
#[wasm_bindgen]
pub struct Demo {
    db: WordNetDatabase,
    graph: TaxonomyGraph,
}

#[wasm_bindgen(getter_with_clone)]
pub struct SimilarityReport {
    pub a: String,
    pub b: String,
    /// None when the pair has no common ancestor.
    pub score: Option<f64>,
    pub distance: Option<u32>,
    pub subsumer: Option<String>,
}

#[wasm_bindgen(getter_with_clone)]
pub struct ExpandReport {
    pub added_good: Vec<String>,
    pub added_bad: Vec<String>,
    pub skipped: usize,
    /// The grown lexicon in the seed file format.
    pub lexicon: String,
}

#[wasm_bindgen(getter_with_clone)]
pub struct ClassifyReport {
    /// One line per document: id, label, p_good, p_bad, average clause sign.
    pub rows: Vec<String>,
    /// One line per clause of every document, with its resolved sign.
    pub clauses: Vec<String>,
    pub svg: String,
}

#[wasm_bindgen]
impl Demo {
    /// The miniature database bundled with the test suite.
    #[wasm_bindgen(constructor)]
    pub fn new() -> Result<Demo, String> {
        Demo::from_files(
            fixture!("data.noun"),
            fixture!("index.noun"),
            fixture!("data.verb"),
            fixture!("index.verb"),
            fixture!("data.adj"),
            fixture!("index.adj"),
            fixture!("data.adv"),
            fixture!("index.adv"),
        )
    }

    /// Builds from the eight wndb files. Empty strings leave a part of
    /// speech empty.
    #[wasm_bindgen(js_name = fromFiles)]
    #[allow(clippy::too_many_arguments)]
    pub fn from_files(
        noun_data: &str,
        noun_index: &str,
        verb_data: &str,
        verb_index: &str,
        adj_data: &str,
        adj_index: &str,
        adv_data: &str,
        adv_index: &str,
    ) -> Result<Demo, String> {
        let sources = [
            PosSource {
                pos: PartOfSpeech::Noun,
                data: noun_data,
                index: noun_index,
            },
            PosSource {
                pos: PartOfSpeech::Verb,
                data: verb_data,
                index: verb_index,
            },
            PosSource {
                pos: PartOfSpeech::Adjective,
                data: adj_data,
                index: adj_index,
            },
            PosSource {
                pos: PartOfSpeech::Adverb,
                data: adv_data,
                index: adv_index,
            },
        ];
        let db = WordNetDatabase::from_sources(&sources).map_err(|e| e.to_string())?;
        let graph = TaxonomyGraph::build_with(&db, GraphOptions::wordnet()).map_err(|e| e.to_string())?;
        Ok(Demo { db, graph })
    }

    pub fn summary(&self) -> String {
        let c = self.db.counts();
        format!(
            "{} synsets ({} noun, {} verb, {} adj, {} adv)",
            c.total(),
            c.noun,
            c.verb,
            c.adjective,
            c.adverb
        )
    }

    /// Scores two words or synset names (`dog.n.01`). Words resolve to
    /// their first sense.
    pub fn similarity(&self, a: &str, b: &str, measure: &str, variant: &str) -> Result<SimilarityReport, String> {
        let measure: Measure = measure.parse()?;
        let variant: Variant = variant.parse()?;
        let (sa, sb) = (self.resolve(a)?, self.resolve(b)?);
        let score = similarity(&self.graph, sa, sb, MeasureKind::new(measure, variant)).map_err(|e| e.to_string())?;
        let distance = self
            .graph
            .shortest_ancestral_distance(sa, sb)
            .map_err(|e| e.to_string())?;
        let subsumer = self.graph.least_common_subsumer(sa, sb).map_err(|e| e.to_string())?;
        Ok(SimilarityReport {
            a: self.graph.name(&self.db, sa),
            b: self.graph.name(&self.db, sb),
            score,
            distance,
            subsumer: subsumer.map(|s| self.graph.name(&self.db, s)),
        })
    }

    /// Sweeps the first `limit` synsets (adjectives first) against the
    /// seed words.
    pub fn expand(
        &self,
        good: &str,
        bad: &str,
        tau_good: f64,
        tau_bad: f64,
        limit: usize,
    ) -> Result<ExpandReport, String> {
        let seeds = seeds(good, bad);
        let config = ExpansionConfig {
            tau_good,
            tau_bad,
            synset_limit: limit,
            ..Default::default()
        };
        config.validate().map_err(|e| e.to_string())?;
        let (lexicon, report) = expand_by_sweep(&self.db, &self.graph, &seeds, &config);
        let added = |side| {
            lexicon
                .side(side)
                .iter()
                .filter(|e| e.provenance == Provenance::Sweep)
                .map(|e| e.word.clone())
                .collect()
        };
        Ok(ExpandReport {
            added_good: added(Side::Good),
            added_bad: added(Side::Bad),
            skipped: report.skipped,
            lexicon: lexicon.to_text(),
        })
    }
}

/// Classifies documents separated by blank lines against the given word
/// lists and draws the polarity scatter.
#[wasm_bindgen(js_name = classifyDocuments)]
pub fn classify_documents(text: &str, good: &str, bad: &str, eps1: f64, eps2: f64) -> Result<ClassifyReport, String> {
    let lexicon = seeds(good, bad);
    let documents = split_documents(text);
    if documents.is_empty() {
        return Err("no documents".into());
    }
    let sets = LexiconSets::new(&lexicon);
    let matrix = count_frequencies(&documents, &lexicon.column_words());
    let sides = lexicon.column_sides();
    let thresholds = Thresholds { eps1, eps2 };

    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut clauses = Vec::new();
    for (i, doc) in documents.iter().enumerate() {
        let r = classify_row(
            matrix.row(i),
            &sides,
            thresholds,
            PointMode::Normalized,
            Some(unigram_total(&doc.text)),
        )
        .map_err(|e| e.to_string())?;
        let avg = document_average_sign(&doc.text, &sets, true);
        rows.push(format!(
            "{}\t{}\t{:.3}\t{:.3}\t{:+.3}",
            doc.id, r.label, r.p_good, r.p_bad, avg
        ));
        for sentence in split_sentences(&doc.text) {
            let seq = clause_signs(&split_clauses(sentence), &sets, true);
            for c in &seq.clauses {
                let joint = match c.connective {
                    Connective::None => "",
                    Connective::Additive => "+ ",
                    Connective::Contrastive => "~ ",
                };
                clauses.push(format!("{}\t{:+}\t{joint}{}", doc.id, c.sign, c.text));
            }
        }
        results.push(ResultRow::new(doc.id.clone(), &r, Some(avg)));
    }
    let svg = scatter_svg(&scatter_points(&results, false), SvgLayout::default(), false);
    Ok(ClassifyReport { rows, clauses, svg })
}

impl Demo {
    fn resolve(&self, arg: &str) -> Result<SynsetId, String> {
        let arg = arg.trim();
        if let Some(id) = self.db.lookup_name(arg) {
            return Ok(id);
        }
        self.db
            .synset_ids_for_word(arg, None)
            .next()
            .ok_or_else(|| format!("{arg:?} is not in the database"))
    }
}

fn words(list: &str) -> Vec<&str> {
    list.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|w| !w.is_empty())
        .collect()
}

fn seeds(good: &str, bad: &str) -> SeedLexicon {
    SeedLexicon::from_seeds(&words(good), &words(bad))
}

fn split_documents(text: &str) -> Vec<Document> {
    let mut docs = Vec::new();
    let mut current = String::new();
    for line in text.lines().chain(std::iter::once("")) {
        if line.trim().is_empty() {
            if !current.trim().is_empty() {
                docs.push(Document::new(format!("doc{}", docs.len() + 1), current.trim_end()));
            }
            current.clear();
        } else {
            current.push_str(line);
            current.push('\n');
        }
    }
    docs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_loads() {
        let demo = Demo::new().unwrap();
        assert_eq!(demo.summary(), "6 synsets (6 noun, 0 verb, 0 adj, 0 adv)");
    }

    #[test]
    fn similarity_of_fixture_pairs() {
        let demo = Demo::new().unwrap();
        let r = demo.similarity("dog", "cat", "path", "ratio").unwrap();
        assert_eq!((r.a.as_str(), r.b.as_str()), ("dog.n.01", "cat.n.01"));
        assert!((r.score.unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.distance, Some(2));
        assert_eq!(r.subsumer.as_deref(), Some("animal.n.01"));
        assert!(demo.similarity("dog", "nothing", "path", "ratio").is_err());
        assert!(demo.similarity("dog", "cat", "cosine", "ratio").is_err());
    }

    #[test]
    fn expand_reports_new_words() {
        let demo = Demo::new().unwrap();
        let r = demo.expand("dog", "car", 0.8, 0.6, 100).unwrap();
        // entity and animal tie between the sides, and ties go bad; dog and
        // car score 1 against themselves and are skipped
        assert!(r.added_good.is_empty());
        assert_eq!(r.added_bad, ["entity", "animal", "cat", "artifact"]);
        assert_eq!(r.skipped, 2);
        assert!(r.lexicon.contains("good\tdog\tseed"));
        assert!(demo.expand("dog", "car", 0.2, 0.5, 100).is_err());
    }

    #[test]
    fn documents_split_on_blank_lines() {
        let docs = split_documents("a fine film\n\n\nawful plot\nreally\n");
        assert_eq!(docs.len(), 2);
        assert_eq!(docs[1].text, "awful plot\nreally");
    }

    #[test]
    fn classify_labels_and_clauses() {
        let text =
            "A superb cast and a fine script.\n\nThe action was terrible, yet the screenplay was superb. Awful pacing.";
        let r = classify_documents(text, "superb fine", "terrible awful", 0.5, 0.5).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!(r.rows[0].starts_with("doc1\tA\t1.000"), "{}", r.rows[0]);
        assert!(r.rows[1].starts_with("doc2\tB\t0.333"), "{}", r.rows[1]);
        assert!(
            r.clauses.contains(&"doc2\t+1\t~ the screenplay was superb".to_string()),
            "{:?}",
            r.clauses
        );
        assert!(r.svg.starts_with("<svg"));
        assert!(classify_documents("  \n", "a", "b", 0.5, 0.5).is_err());
    }
}
