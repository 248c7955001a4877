//! Checks against the released WordNet 3.0 files. Each test returns early
//! when the files are not installed.

mod common;

use common::{real_db, real_dir};
use lexpand::similarity::word_max_path_similarity;
use lexpand::taxonomy::{GraphOptions, TaxonomyGraph};
use lexpand::wndb::{DatabaseVersion, PartOfSpeech, PosCounts, SynsetId};

macro_rules! real_or_skip {
    () => {
        match real_db() {
            Some(db) => db,
            None => {
                eprintln!("WordNet 3.0 not installed; skipping");
                return;
            }
        }
    };
}

#[test]
fn counts_and_version() {
    let db = real_or_skip!();
    assert_eq!(
        db.counts(),
        PosCounts {
            noun: 82115,
            verb: 13767,
            adjective: 18156,
            adverb: 3621
        }
    );
    assert_eq!(db.version(), DatabaseVersion::WordNet30);
}

#[test]
fn every_data_line_round_trips() {
    let db = real_or_skip!();
    let dir = real_dir().unwrap();
    for pos in [
        PartOfSpeech::Noun,
        PartOfSpeech::Verb,
        PartOfSpeech::Adjective,
        PartOfSpeech::Adverb,
    ] {
        let text = std::fs::read_to_string(dir.join(format!("data.{}", pos.file_suffix()))).unwrap();
        let mut offset = 0usize;
        for line in text.split_inclusive('\n') {
            if !line.starts_with("  ") {
                let synset = db
                    .get(SynsetId::new(pos, offset as u32))
                    .expect("offset is a byte position");
                assert_eq!(synset.to_string(), line.trim_end_matches('\n'));
            }
            offset += line.len();
        }
    }
}

#[test]
fn hypernym_pointers_are_mirrored() {
    let db = real_or_skip!();
    for s in db.synsets() {
        for p in s.pointers.iter().filter(|p| p.symbol == "@") {
            let target = db.get(p.target).unwrap();
            assert!(
                target.pointers.iter().any(|q| q.symbol == "~" && q.target == s.id),
                "{} -> {}",
                s.id,
                p.target
            );
        }
    }
}

#[test]
fn sense_order_and_names() {
    let db = real_or_skip!();
    let good: Vec<PartOfSpeech> = db
        .synsets_for_word("good", None)
        .iter()
        .take(3)
        .map(|s| s.id.pos)
        .collect();
    assert_eq!(good, [PartOfSpeech::Noun; 3]);
    let dog = db.index_entry("dog", PartOfSpeech::Noun).unwrap();
    assert_eq!(
        db.display_name(SynsetId::new(PartOfSpeech::Noun, dog.synset_offsets[0]))
            .as_deref(),
        Some("dog.n.01")
    );
}

#[test]
fn taxonomy_shape() {
    let db = real_or_skip!();
    assert!(TaxonomyGraph::build(db).is_err(), "released data has one verb cycle");
    let g = TaxonomyGraph::build_with(db, GraphOptions::wordnet()).unwrap();
    assert_eq!(g.cycles().len(), 1);
    let nouns = g.roots(PartOfSpeech::Noun);
    assert_eq!(nouns.len(), 1);
    assert_eq!(db.get(nouns[0]).unwrap().first_lemma(), "entity");
    assert_eq!(g.max_depth(PartOfSpeech::Noun), Some(19));
    assert_eq!(g.max_depth(PartOfSpeech::Verb), Some(13));
}

#[test]
fn good_never_reaches_verbs() {
    let db = real_or_skip!();
    let g = TaxonomyGraph::build_with(db, GraphOptions::wordnet()).unwrap();
    let run = db.synset_ids_for_word("run", Some(PartOfSpeech::Verb)).next().unwrap();
    assert_eq!(word_max_path_similarity(&g, db, "good", run, 3).unwrap(), 0.0);
}
