//! Slow, independent reference implementations used to check the fast
//! graph code. Nothing here touches `TaxonomyGraph`: edges are read straight
//! from the parsed pointer lists and every upward path is enumerated.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};

use lexpand::wndb::{load_database, PartOfSpeech, SynsetId, WordNetDatabase};

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("testdata")
}

pub fn mini_db() -> WordNetDatabase {
    load_database(fixture_dir().join("miniwn")).expect("fixture database loads")
}

/// Real WordNet directory from LEXPAND_WORDNET_DIR or `<workspace>/data/wordnet-3.0`.
pub fn real_dir() -> Option<PathBuf> {
    let dir = std::env::var_os("LEXPAND_WORDNET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/wordnet-3.0"));
    dir.join("data.noun").is_file().then_some(dir)
}

/// Loads the real database once per test binary.
pub fn real_db() -> Option<&'static WordNetDatabase> {
    use std::sync::OnceLock;
    static DB: OnceLock<Option<WordNetDatabase>> = OnceLock::new();
    DB.get_or_init(|| real_dir().map(|d| load_database(d).expect("real WordNet loads")))
        .as_ref()
}

/// Stand-in id for the synthetic verb root in the oracle's own graph.
pub const ORACLE_VERB_ROOT: SynsetId = SynsetId {
    pos: PartOfSpeech::Verb,
    offset: 0,
};

pub struct Oracle {
    up: HashMap<SynsetId, Vec<SynsetId>>,
}

impl Oracle {
    pub fn new(db: &WordNetDatabase, verb_root: bool) -> Self {
        let mut up: HashMap<SynsetId, Vec<SynsetId>> = HashMap::new();
        for s in db.synsets() {
            let mut parents: Vec<SynsetId> = s
                .pointers
                .iter()
                .filter(|p| p.symbol == "@" || p.symbol == "@i")
                .map(|p| p.target)
                .collect();
            parents.sort_unstable_by_key(|p| p.offset);
            parents.dedup();
            if verb_root && s.id.pos == PartOfSpeech::Verb && parents.is_empty() {
                parents.push(ORACLE_VERB_ROOT);
            }
            up.insert(s.id, parents);
        }
        if verb_root {
            up.insert(ORACLE_VERB_ROOT, Vec::new());
        }
        Oracle { up }
    }

    /// Every ancestor (self included) with the length of the shortest of
    /// all enumerated simple upward paths reaching it.
    pub fn upward(&self, s: SynsetId) -> HashMap<SynsetId, u32> {
        let mut best: HashMap<SynsetId, u32> = HashMap::new();
        let mut path = vec![s];
        let mut on_path: HashSet<SynsetId> = HashSet::from([s]);
        self.walk(&mut path, &mut on_path, &mut best);
        best
    }

    fn walk(&self, path: &mut Vec<SynsetId>, on_path: &mut HashSet<SynsetId>, best: &mut HashMap<SynsetId, u32>) {
        let here = *path.last().unwrap();
        let len = (path.len() - 1) as u32;
        let e = best.entry(here).or_insert(len);
        *e = (*e).min(len);
        for &p in &self.up[&here] {
            if on_path.insert(p) {
                path.push(p);
                self.walk(path, on_path, best);
                path.pop();
                on_path.remove(&p);
            }
        }
    }

    pub fn common(&self, a: SynsetId, b: SynsetId) -> Vec<(SynsetId, u32)> {
        let (ua, ub) = (self.upward(a), self.upward(b));
        let mut out: Vec<(SynsetId, u32)> = ua
            .iter()
            .filter_map(|(c, da)| ub.get(c).map(|db| (*c, da + db)))
            .collect();
        out.sort_unstable_by_key(|&(c, d)| (d, c.offset));
        out
    }

    pub fn distance(&self, a: SynsetId, b: SynsetId) -> Option<u32> {
        self.common(a, b).iter().map(|&(_, d)| d).min()
    }

    pub fn is_root(&self, s: SynsetId) -> bool {
        self.up[&s].is_empty()
    }

    /// Shortest upward path to any root, for nouns and verbs.
    pub fn depth(&self, s: SynsetId) -> Option<u32> {
        if !matches!(s.pos, PartOfSpeech::Noun | PartOfSpeech::Verb) {
            return None;
        }
        self.upward(s)
            .into_iter()
            .filter(|(c, _)| self.is_root(*c))
            .map(|(_, d)| d)
            .min()
    }

    /// Minimal path sum, then deepest, then lowest offset.
    pub fn lcs(&self, a: SynsetId, b: SynsetId) -> Option<SynsetId> {
        let common = self.common(a, b);
        let min = common.iter().map(|&(_, d)| d).min()?;
        common
            .into_iter()
            .filter(|&(_, d)| d == min)
            .map(|(c, _)| c)
            .min_by_key(|c| (std::cmp::Reverse(self.depth(*c)), c.offset))
    }

    /// Longest simple upward path from `s` that ends at a root.
    pub fn height(&self, s: SynsetId) -> Option<u32> {
        fn go(o: &Oracle, here: SynsetId, len: u32, on_path: &mut HashSet<SynsetId>, best: &mut Option<u32>) {
            if o.is_root(here) {
                *best = Some(best.map_or(len, |b| b.max(len)));
            }
            for &p in &o.up[&here] {
                if on_path.insert(p) {
                    go(o, p, len + 1, on_path, best);
                    on_path.remove(&p);
                }
            }
        }
        let mut best = None;
        go(self, s, 0, &mut HashSet::from([s]), &mut best);
        best
    }

    pub fn max_depth(&self, pos: PartOfSpeech) -> Option<u32> {
        self.up
            .keys()
            .filter(|s| s.pos == pos)
            .filter_map(|&s| self.height(s))
            .max()
    }
}

/// Path similarity straight from the oracle distance.
pub fn oracle_path(oracle: &Oracle, a: SynsetId, b: SynsetId) -> Option<f64> {
    oracle.distance(a, b).map(|d| 1.0 / (d as f64 + 1.0))
}

pub fn s(v: &[&str]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// One synthetic part of speech: `parents[i]` lists hypernyms of synset
/// `i + 1` among lower-numbered synsets, `words[i]` its lemma.
#[derive(Clone, Debug)]
pub struct SynthPos {
    pub pos: PartOfSpeech,
    pub parents: Vec<Vec<usize>>,
    pub words: Vec<String>,
}

/// Data and index file texts for a synthetic part of speech. Offsets are
/// the 1-based synset numbers.
pub fn synth_files(p: &SynthPos) -> (String, String) {
    let tag = p.pos.tag();
    let mut data = String::new();
    let mut senses: std::collections::BTreeMap<&str, Vec<usize>> = Default::default();
    for (i, (parents, word)) in p.parents.iter().zip(&p.words).enumerate() {
        let n = i + 1;
        let mut ptrs: Vec<String> = parents.iter().map(|&q| format!("@ {:08} {tag} 0000", q)).collect();
        for (j, other) in p.parents.iter().enumerate() {
            if other.contains(&n) {
                ptrs.push(format!("~ {:08} {tag} 0000", j + 1));
            }
        }
        let frames = if p.pos == PartOfSpeech::Verb { " 01 + 02 00" } else { "" };
        data.push_str(&format!(
            "{n:08} 03 {tag} 01 {word} 0 {:03} {}{frames} | synthetic  \n",
            ptrs.len(),
            ptrs.join(" ")
        ));
        senses.entry(word).or_default().push(n);
    }
    let mut index = String::new();
    for (word, offs) in senses {
        let offs: Vec<String> = offs.iter().map(|o| format!("{o:08}")).collect();
        index.push_str(&format!(
            "{word} {tag} {n} 2 @ ~ {n} 0 {}  \n",
            offs.join(" "),
            n = offs.len()
        ));
    }
    (data, index)
}

pub fn synth_db(parts: &[SynthPos]) -> WordNetDatabase {
    let files: Vec<(PartOfSpeech, String, String)> = parts
        .iter()
        .map(|p| {
            let (d, i) = synth_files(p);
            (p.pos, d, i)
        })
        .collect();
    let sources: Vec<lexpand::wndb::PosSource<'_>> = files
        .iter()
        .map(|(pos, d, i)| lexpand::wndb::PosSource {
            pos: *pos,
            data: d,
            index: i,
        })
        .collect();
    WordNetDatabase::from_sources(&sources).expect("synthetic database parses")
}
