//! Reader for the Princeton WordNet `wndb` database files (`data.pos` and
//! `index.pos`).
//!
//! Data lines have the shape
//!
//! ```text
//! offset lex_filenum ss_type w_cnt word lex_id [word lex_id...] p_cnt [ptr...] [frames] | gloss
//! ```
//!
//! where `w_cnt` is two hex digits, `lex_id` one hex digit, `p_cnt` three
//! decimal digits and each pointer is `symbol offset pos source/target`
//! (the last field being four hex digits). Lines in the published files end
//! with two spaces; [`Synset`]'s `Display` impl writes them back the same way.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartOfSpeech {
    Noun,
    Verb,
    Adjective,
    AdjectiveSatellite,
    Adverb,
}

impl PartOfSpeech {
    /// The four database files in canonical load order.
    pub const FILE_ORDER: [PartOfSpeech; 4] = [
        PartOfSpeech::Noun,
        PartOfSpeech::Verb,
        PartOfSpeech::Adjective,
        PartOfSpeech::Adverb,
    ];

    pub fn tag(self) -> char {
        match self {
            PartOfSpeech::Noun => 'n',
            PartOfSpeech::Verb => 'v',
            PartOfSpeech::Adjective => 'a',
            PartOfSpeech::AdjectiveSatellite => 's',
            PartOfSpeech::Adverb => 'r',
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "n" => PartOfSpeech::Noun,
            "v" => PartOfSpeech::Verb,
            "a" => PartOfSpeech::Adjective,
            "s" => PartOfSpeech::AdjectiveSatellite,
            "r" => PartOfSpeech::Adverb,
            _ => return None,
        })
    }

    /// Satellites live in the adjective files and share their namespace.
    pub fn lookup_pos(self) -> Self {
        match self {
            PartOfSpeech::AdjectiveSatellite => PartOfSpeech::Adjective,
            other => other,
        }
    }

    pub fn file_suffix(self) -> &'static str {
        match self.lookup_pos() {
            PartOfSpeech::Noun => "noun",
            PartOfSpeech::Verb => "verb",
            PartOfSpeech::Adverb => "adv",
            _ => "adj",
        }
    }

    fn file_rank(self) -> usize {
        match self.lookup_pos() {
            PartOfSpeech::Noun => 0,
            PartOfSpeech::Verb => 1,
            PartOfSpeech::Adverb => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for PartOfSpeech {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartOfSpeech::Noun => "noun",
            PartOfSpeech::Verb => "verb",
            PartOfSpeech::Adjective => "adjective",
            PartOfSpeech::AdjectiveSatellite => "adjective_satellite",
            PartOfSpeech::Adverb => "adverb",
        })
    }
}

/// Stable key of a synset: the file it lives in plus its byte offset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SynsetId {
    pub pos: PartOfSpeech,
    pub offset: u32,
}

impl SynsetId {
    pub fn new(pos: PartOfSpeech, offset: u32) -> Self {
        SynsetId {
            pos: pos.lookup_pos(),
            offset,
        }
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08}-{}", self.offset, self.pos.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynsetWord {
    /// Lemma as printed, underscores for spaces, case preserved.
    pub lemma: String,
    pub lex_id: u8,
    /// Adjective syntactic marker such as `p`, `a` or `ip`.
    pub marker: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pointer {
    pub symbol: String,
    pub target: SynsetId,
    pub source_word: u8,
    pub target_word: u8,
}

impl Pointer {
    pub const HYPERNYM: &'static str = "@";
    pub const INSTANCE_HYPERNYM: &'static str = "@i";
    pub const HYPONYM: &'static str = "~";
    pub const INSTANCE_HYPONYM: &'static str = "~i";

    pub fn is_hypernym(&self) -> bool {
        self.symbol == Self::HYPERNYM || self.symbol == Self::INSTANCE_HYPERNYM
    }

    pub fn is_hyponym(&self) -> bool {
        self.symbol == Self::HYPONYM || self.symbol == Self::INSTANCE_HYPONYM
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerbFrame {
    pub frame: u8,
    /// Zero when the frame applies to every word in the synset.
    pub word: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Synset {
    pub id: SynsetId,
    pub lex_filenum: u8,
    pub ss_type: PartOfSpeech,
    pub words: Vec<SynsetWord>,
    pub pointers: Vec<Pointer>,
    pub frames: Vec<VerbFrame>,
    pub gloss: String,
    /// Gloss field exactly as stored, surrounding spaces included.
    pub raw_gloss: String,
}

impl Synset {
    pub fn first_lemma(&self) -> &str {
        &self.words[0].lemma
    }

    pub fn hypernyms(&self) -> impl Iterator<Item = SynsetId> + '_ {
        self.pointers.iter().filter(|p| p.is_hypernym()).map(|p| p.target)
    }
}

impl fmt::Display for Synset {
    /// Writes the record exactly as it appears in a `data.pos` file,
    /// including the two trailing spaces but not the newline.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:08} {:02} {} {:02x}",
            self.id.offset,
            self.lex_filenum,
            self.ss_type.tag(),
            self.words.len()
        )?;
        for w in &self.words {
            match &w.marker {
                Some(m) => write!(f, " {}({}) {:x}", w.lemma, m, w.lex_id)?,
                None => write!(f, " {} {:x}", w.lemma, w.lex_id)?,
            }
        }
        write!(f, " {:03}", self.pointers.len())?;
        for p in &self.pointers {
            write!(
                f,
                " {} {:08} {} {:02x}{:02x}",
                p.symbol,
                p.target.offset,
                p.target.pos.tag(),
                p.source_word,
                p.target_word
            )?;
        }
        if self.ss_type == PartOfSpeech::Verb {
            write!(f, " {:02}", self.frames.len())?;
            for fr in &self.frames {
                write!(f, " + {:02} {:02x}", fr.frame, fr.word)?;
            }
        }
        write!(f, " | {}", self.raw_gloss)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexEntry {
    pub lemma: String,
    pub pos: PartOfSpeech,
    pub pointer_symbols: Vec<String>,
    pub sense_count: u32,
    pub tagged_sense_count: u32,
    /// Most frequent sense first, exactly as stored in the file.
    pub synset_offsets: Vec<u32>,
}

impl fmt::Display for IndexEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.lemma,
            self.pos.tag(),
            self.synset_offsets.len(),
            self.pointer_symbols.len()
        )?;
        for s in &self.pointer_symbols {
            write!(f, " {s}")?;
        }
        write!(f, " {} {}", self.sense_count, self.tagged_sense_count)?;
        for o in &self.synset_offsets {
            write!(f, " {o:08}")?;
        }
        f.write_str("  ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    /// One-based byte column of the offending field.
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum WndbError {
    #[error("{file}: {source}")]
    Parse {
        file: String,
        #[source]
        source: ParseError,
    },
    #[error("missing database file {}", .0.display())]
    MissingFile(PathBuf),
    #[error("failed to read {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("duplicate synset {0}")]
    DuplicateSynset(SynsetId),
    #[error("{} dangling pointer(s), first: {} -> {}", .dangling.len(), .dangling[0].0, .dangling[0].1)]
    Integrity {
        /// (source synset, unresolved target) pairs.
        dangling: Vec<(SynsetId, SynsetId)>,
    },
}

/// Space-separated field cursor that remembers byte columns.
struct Fields<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Fields<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Fields { text, pos: 0, line }
    }

    fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: column + 1,
            message: message.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos] == b' ' {
            self.pos += 1;
        }
        if self.pos >= bytes.len() {
            return Err(self.error(self.pos, format!("truncated record: expected {what}")));
        }
        let start = self.pos;
        while self.pos < bytes.len() && bytes[self.pos] != b' ' {
            self.pos += 1;
        }
        Ok((start, &self.text[start..self.pos]))
    }

    fn decimal<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, ParseError> {
        self.decimal_at(what).map(|(_, v)| v)
    }

    fn decimal_at<T: std::str::FromStr>(&mut self, what: &str) -> Result<(usize, T), ParseError> {
        let (col, s) = self.next(what)?;
        if !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.error(col, format!("{what} is not a decimal integer: {s:?}")));
        }
        s.parse()
            .map(|v| (col, v))
            .map_err(|_| self.error(col, format!("{what} out of range: {s:?}")))
    }

    fn hex(&mut self, what: &str) -> Result<u32, ParseError> {
        let (col, s) = self.next(what)?;
        u32::from_str_radix(s, 16).map_err(|_| self.error(col, format!("{what} is not hexadecimal: {s:?}")))
    }

    fn pos_tag(&mut self, what: &str) -> Result<(usize, PartOfSpeech), ParseError> {
        let (col, s) = self.next(what)?;
        let pos = PartOfSpeech::from_tag(s).ok_or_else(|| self.error(col, format!("unknown {what} {s:?}")))?;
        Ok((col, pos))
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.next("") {
            Ok((col, s)) => Err(self.error(col, format!("unexpected trailing field {s:?}"))),
            Err(_) => Ok(()),
        }
    }
}

/// Parses one record of a `data.pos` file.
pub fn parse_data_line(line: &str, pos: PartOfSpeech) -> Result<Synset, ParseError> {
    parse_data_line_at(line, pos, 1)
}

pub(crate) fn parse_data_line_at(line: &str, pos: PartOfSpeech, lineno: usize) -> Result<Synset, ParseError> {
    let line = line.trim_end_matches(['\n', '\r']);
    let Some(bar) = line.find(" | ") else {
        return Err(ParseError {
            line: lineno,
            column: line.len() + 1,
            message: "missing \" | \" gloss separator".into(),
        });
    };
    let raw_gloss = line[bar + 3..].to_string();
    let gloss = raw_gloss.trim().to_string();
    let mut fields = Fields::new(&line[..bar], lineno);

    let offset: u32 = fields.decimal("synset offset")?;
    let lex_filenum: u8 = fields.decimal("lex_filenum")?;
    let (col, ss_type) = fields.pos_tag("ss_type")?;
    if ss_type.lookup_pos() != pos.lookup_pos() {
        return Err(fields.error(
            col,
            format!(
                "ss_type {} does not belong in a {} file",
                ss_type.tag(),
                pos.file_suffix()
            ),
        ));
    }

    let w_cnt = fields.hex("w_cnt")?;
    if w_cnt == 0 {
        return Err(fields.error(col, "synset has no words"));
    }
    let mut words = Vec::with_capacity(w_cnt as usize);
    for _ in 0..w_cnt {
        let (wcol, raw) = fields.next("word")?;
        let (lemma, marker) = match raw.strip_suffix(')').and_then(|r| r.rsplit_once('(')) {
            Some((lemma, m)) if ss_type.lookup_pos() == PartOfSpeech::Adjective => {
                (lemma.to_string(), Some(m.to_string()))
            }
            _ => (raw.to_string(), None),
        };
        let lex_id = fields.hex("lex_id")?;
        if lex_id > 0xf {
            return Err(fields.error(wcol, "lex_id exceeds one hex digit"));
        }
        words.push(SynsetWord {
            lemma,
            lex_id: lex_id as u8,
            marker,
        });
    }

    let p_cnt: usize = fields.decimal("p_cnt")?;
    let mut pointers = Vec::with_capacity(p_cnt);
    for _ in 0..p_cnt {
        let (_, symbol) = fields.next("pointer symbol")?;
        let target_offset: u32 = fields.decimal("pointer offset")?;
        let (_, target_pos) = fields.pos_tag("pointer pos")?;
        let (scol, st) = fields.next("pointer source/target")?;
        if st.len() != 4 {
            return Err(fields.error(scol, format!("source/target field must be 4 hex digits: {st:?}")));
        }
        let st = u16::from_str_radix(st, 16)
            .map_err(|_| fields.error(scol, format!("source/target is not hexadecimal: {st:?}")))?;
        pointers.push(Pointer {
            symbol: symbol.to_string(),
            target: SynsetId::new(target_pos, target_offset),
            source_word: (st >> 8) as u8,
            target_word: (st & 0xff) as u8,
        });
    }

    let mut frames = Vec::new();
    if ss_type == PartOfSpeech::Verb {
        let f_cnt: usize = fields.decimal("f_cnt")?;
        for _ in 0..f_cnt {
            let (pcol, plus) = fields.next("frame marker")?;
            if plus != "+" {
                return Err(fields.error(pcol, format!("expected '+' before frame, found {plus:?}")));
            }
            let frame: u8 = fields.decimal("frame number")?;
            let word = fields.hex("frame word number")?;
            frames.push(VerbFrame {
                frame,
                word: word as u8,
            });
        }
    }
    fields.finish()?;

    Ok(Synset {
        id: SynsetId::new(ss_type, offset),
        lex_filenum,
        ss_type,
        words,
        pointers,
        frames,
        gloss,
        raw_gloss,
    })
}

/// Parses one record of an `index.pos` file.
pub fn parse_index_line(line: &str, pos: PartOfSpeech) -> Result<IndexEntry, ParseError> {
    parse_index_line_at(line, pos, 1)
}

pub(crate) fn parse_index_line_at(line: &str, pos: PartOfSpeech, lineno: usize) -> Result<IndexEntry, ParseError> {
    let line = line.trim_end_matches(['\n', '\r']);
    let mut fields = Fields::new(line, lineno);
    let (_, lemma) = fields.next("lemma")?;
    let (pcol, entry_pos) = fields.pos_tag("pos")?;
    if entry_pos.lookup_pos() != pos.lookup_pos() {
        return Err(fields.error(pcol, format!("pos {} does not belong in this index", entry_pos.tag())));
    }
    let (ccol, synset_cnt): (usize, usize) = fields.decimal_at("synset_cnt")?;
    let p_cnt: usize = fields.decimal("p_cnt")?;
    let mut pointer_symbols = Vec::with_capacity(p_cnt);
    for _ in 0..p_cnt {
        pointer_symbols.push(fields.next("pointer symbol")?.1.to_string());
    }
    let sense_count = fields.decimal("sense_cnt")?;
    let tagged_sense_count = fields.decimal("tagsense_cnt")?;
    let mut synset_offsets = Vec::with_capacity(synset_cnt);
    while let Ok((col, s)) = fields.next("synset offset") {
        if !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(fields.error(col, format!("synset offset is not a decimal integer: {s:?}")));
        }
        synset_offsets.push(s.parse().map_err(|_| fields.error(col, "synset offset out of range"))?);
    }
    if synset_offsets.len() != synset_cnt {
        return Err(fields.error(
            ccol,
            format!(
                "synset_cnt says {synset_cnt} but {} offsets follow",
                synset_offsets.len()
            ),
        ));
    }
    Ok(IndexEntry {
        lemma: lemma.to_lowercase(),
        pos: entry_pos.lookup_pos(),
        pointer_symbols,
        sense_count,
        tagged_sense_count,
        synset_offsets,
    })
}

fn is_header(line: &str) -> bool {
    line.starts_with("  ")
}

/// Which WordNet release the loaded files look like, judged by synset totals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DatabaseVersion {
    WordNet30,
    WordNet31,
    Unknown,
}

impl fmt::Display for DatabaseVersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DatabaseVersion::WordNet30 => "3.0",
            DatabaseVersion::WordNet31 => "3.1",
            DatabaseVersion::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PosCounts {
    pub noun: usize,
    pub verb: usize,
    pub adjective: usize,
    pub adverb: usize,
}

impl PosCounts {
    pub fn total(&self) -> usize {
        self.noun + self.verb + self.adjective + self.adverb
    }

    pub fn get(&self, pos: PartOfSpeech) -> usize {
        match pos.lookup_pos() {
            PartOfSpeech::Noun => self.noun,
            PartOfSpeech::Verb => self.verb,
            PartOfSpeech::Adverb => self.adverb,
            _ => self.adjective,
        }
    }

    fn bump(&mut self, pos: PartOfSpeech) {
        match pos.lookup_pos() {
            PartOfSpeech::Noun => self.noun += 1,
            PartOfSpeech::Verb => self.verb += 1,
            PartOfSpeech::Adverb => self.adverb += 1,
            _ => self.adjective += 1,
        }
    }
}

/// Raw text of one part of speech's data and index files.
#[derive(Clone, Copy, Debug)]
pub struct PosSource<'a> {
    pub pos: PartOfSpeech,
    pub data: &'a str,
    pub index: &'a str,
}

/// Parsed WordNet database. Immutable once built.
#[derive(Debug)]
pub struct WordNetDatabase {
    /// Canonical order: noun, verb, adjective, adverb; ascending offset.
    synsets: Vec<Synset>,
    by_id: HashMap<SynsetId, usize>,
    /// Entries per lemma, sorted by file order of their part of speech.
    index: HashMap<String, Vec<IndexEntry>>,
    counts: PosCounts,
    version: DatabaseVersion,
}

impl WordNetDatabase {
    /// Builds a database from in-memory file contents. Parts of speech that
    /// are not supplied are simply empty.
    pub fn from_sources(sources: &[PosSource<'_>]) -> Result<Self, WndbError> {
        let mut synsets = Vec::new();
        let mut index: HashMap<String, Vec<IndexEntry>> = HashMap::new();
        let mut sources = sources.to_vec();
        sources.sort_by_key(|s| s.pos.file_rank());

        for src in &sources {
            let start = synsets.len();
            for (i, line) in src.data.lines().enumerate() {
                if is_header(line) || line.trim().is_empty() {
                    continue;
                }
                let synset = parse_data_line_at(line, src.pos, i + 1).map_err(|e| WndbError::Parse {
                    file: format!("data.{}", src.pos.file_suffix()),
                    source: e,
                })?;
                synsets.push(synset);
            }
            synsets[start..].sort_by_key(|s| s.id.offset);

            for (i, line) in src.index.lines().enumerate() {
                if is_header(line) || line.trim().is_empty() {
                    continue;
                }
                let entry = parse_index_line_at(line, src.pos, i + 1).map_err(|e| WndbError::Parse {
                    file: format!("index.{}", src.pos.file_suffix()),
                    source: e,
                })?;
                index.entry(entry.lemma.clone()).or_default().push(entry);
            }
        }
        for entries in index.values_mut() {
            entries.sort_by_key(|e| e.pos.file_rank());
        }

        let mut by_id = HashMap::with_capacity(synsets.len());
        let mut counts = PosCounts::default();
        for (i, s) in synsets.iter().enumerate() {
            if by_id.insert(s.id, i).is_some() {
                return Err(WndbError::DuplicateSynset(s.id));
            }
            counts.bump(s.id.pos);
        }

        let dangling: Vec<_> = synsets
            .iter()
            .flat_map(|s| s.pointers.iter().map(move |p| (s.id, p.target)))
            .filter(|(_, t)| !by_id.contains_key(t))
            .collect();
        if !dangling.is_empty() {
            return Err(WndbError::Integrity { dangling });
        }

        let version = detect_version(&counts);
        Ok(WordNetDatabase {
            synsets,
            by_id,
            index,
            counts,
            version,
        })
    }

    pub fn synsets(&self) -> &[Synset] {
        &self.synsets
    }

    pub fn len(&self) -> usize {
        self.synsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.synsets.is_empty()
    }

    pub fn counts(&self) -> PosCounts {
        self.counts
    }

    pub fn version(&self) -> DatabaseVersion {
        self.version
    }

    pub fn get(&self, id: SynsetId) -> Option<&Synset> {
        self.by_id.get(&id).map(|&i| &self.synsets[i])
    }

    /// Position of a synset in canonical order.
    pub fn position(&self, id: SynsetId) -> Option<usize> {
        self.by_id.get(&id).copied()
    }

    pub fn index_entry(&self, lemma: &str, pos: PartOfSpeech) -> Option<&IndexEntry> {
        let pos = pos.lookup_pos();
        self.index.get(lemma)?.iter().find(|e| e.pos == pos)
    }

    pub fn contains_lemma(&self, lemma: &str) -> bool {
        self.index.contains_key(lemma)
    }

    /// Synsets of a normalized lemma. Without a part of speech the result
    /// runs noun, verb, adjective, adverb, each in index sense order.
    pub fn synsets_for_word(&self, lemma: &str, pos: Option<PartOfSpeech>) -> Vec<&Synset> {
        self.synset_ids_for_word(lemma, pos)
            .filter_map(|id| self.get(id))
            .collect()
    }

    pub fn synset_ids_for_word<'a>(
        &'a self,
        lemma: &str,
        pos: Option<PartOfSpeech>,
    ) -> impl Iterator<Item = SynsetId> + 'a {
        let pos = pos.map(PartOfSpeech::lookup_pos);
        self.index
            .get(lemma)
            .into_iter()
            .flatten()
            .filter(move |e| pos.is_none_or(|p| e.pos == p))
            .flat_map(|e| e.synset_offsets.iter().map(move |&o| SynsetId::new(e.pos, o)))
    }

    /// Display name such as `dog.n.01`: first lemma lowercased, the synset
    /// type tag, and the synset's sense number under that lemma.
    pub fn display_name(&self, id: SynsetId) -> Option<String> {
        let synset = self.get(id)?;
        let lemma = synset.first_lemma().to_lowercase();
        let sense = self
            .index_entry(&lemma, id.pos)
            .and_then(|e| e.synset_offsets.iter().position(|&o| o == id.offset))
            .map_or(1, |i| i + 1);
        Some(format!("{lemma}.{}.{sense:02}", synset.ss_type.tag()))
    }

    /// Resolves a display name like `dog.n.01` back to its synset.
    pub fn lookup_name(&self, name: &str) -> Option<SynsetId> {
        let mut parts = name.rsplitn(3, '.');
        let sense: usize = parts.next()?.parse().ok()?;
        let pos = PartOfSpeech::from_tag(parts.next()?)?;
        let lemma = parts.next()?;
        let offset = *self
            .index_entry(lemma, pos)?
            .synset_offsets
            .get(sense.checked_sub(1)?)?;
        let id = SynsetId::new(pos, offset);
        self.get(id).map(|s| s.id)
    }
}

fn detect_version(counts: &PosCounts) -> DatabaseVersion {
    match (counts.noun, counts.verb, counts.adjective, counts.adverb) {
        (82115, 13767, 18156, 3621) => DatabaseVersion::WordNet30,
        _ if counts.total() == 117791 => DatabaseVersion::WordNet31,
        _ => DatabaseVersion::Unknown,
    }
}

/// Loads `data.{noun,verb,adj,adv}` and `index.{noun,verb,adj,adv}` from a
/// WordNet `dict` directory.
pub fn load_database(directory: impl AsRef<Path>) -> Result<WordNetDatabase, WndbError> {
    let directory = directory.as_ref();
    let read = |name: String| -> Result<String, WndbError> {
        let path = directory.join(name);
        if !path.is_file() {
            return Err(WndbError::MissingFile(path));
        }
        fs::read_to_string(&path).map_err(|source| WndbError::Io { path, source })
    };
    let mut texts = Vec::with_capacity(4);
    for pos in PartOfSpeech::FILE_ORDER {
        let data = read(format!("data.{}", pos.file_suffix()))?;
        let index = read(format!("index.{}", pos.file_suffix()))?;
        texts.push((pos, data, index));
    }
    let sources: Vec<PosSource<'_>> = texts
        .iter()
        .map(|(pos, data, index)| PosSource { pos: *pos, data, index })
        .collect();
    WordNetDatabase::from_sources(&sources)
}

/// The lemma part of a display name: everything before the first `.`.
pub fn word_part(display_name: &str) -> &str {
    match display_name.find('.') {
        Some(i) => &display_name[..i],
        None => display_name,
    }
}

/// Lowercases and replaces spaces with underscores, the form index files use.
pub fn normalize_lemma(word: &str) -> String {
    word.trim().to_lowercase().replace(' ', "_")
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOG_30: &str = "02084071 05 n 03 dog 0 domestic_dog 0 Canis_familiaris 0 023 @ 02083346 n 0000 @ 01317541 n 0000 #m 02083863 n 0000 #m 07994941 n 0000 ~ 01322604 n 0000 ~ 02084732 n 0000 ~ 02084861 n 0000 ~ 02085272 n 0000 ~ 02085374 n 0000 ~ 02087122 n 0000 ~ 02103406 n 0000 ~ 02110341 n 0000 ~ 02110806 n 0000 ~ 02110958 n 0000 ~ 02111129 n 0000 ~ 02111277 n 0000 ~ 02111500 n 0000 ~ 02111626 n 0000 ~ 02112497 n 0000 ~ 02112826 n 0000 ~ 02113335 n 0000 ~ 02113978 n 0000 %p 02158846 n 0000 | a member of the genus Canis (probably descended from the common wolf) that has been domesticated by man since prehistoric times; occurs in many breeds; \"the dog barked all night\"  ";

    #[test]
    fn parses_real_dog_record() {
        let s = parse_data_line(DOG_30, PartOfSpeech::Noun).unwrap();
        let lemmas: Vec<_> = s.words.iter().map(|w| w.lemma.as_str()).collect();
        assert_eq!(lemmas, ["dog", "domestic_dog", "Canis_familiaris"]);
        assert_eq!(s.pointers.len(), 23);
        assert_eq!(s.pointers[0].symbol, "@");
        assert_eq!(s.pointers[0].target, SynsetId::new(PartOfSpeech::Noun, 2083346));
        assert!(s.gloss.starts_with("a member of the genus Canis"));
        assert!(s.gloss.ends_with("\"the dog barked all night\""));
        assert_eq!(s.to_string(), DOG_30);
    }

    #[test]
    fn parses_minimal_record() {
        let s = parse_data_line("00000001 03 n 01 entity 0 000 | root node", PartOfSpeech::Noun).unwrap();
        assert_eq!(s.words.len(), 1);
        assert_eq!(s.words[0].lemma, "entity");
        assert!(s.pointers.is_empty());
        assert_eq!(s.gloss, "root node");
        assert_eq!(s.lex_filenum, 3);
    }

    #[test]
    fn parses_verb_frames_and_adjective_markers() {
        let verb = "00002325 29 v 01 respire 1 005 $ 00001740 v 0000 @ 02108377 v 0000 + 03110322 a 0101 + 00831191 n 0103 + 00830811 n 0101 01 + 02 00 | undergo the biomedical and metabolic processes of respiration by taking up oxygen and producing carbon monoxide  ";
        let s = parse_data_line(verb, PartOfSpeech::Verb).unwrap();
        assert_eq!(s.frames, [VerbFrame { frame: 2, word: 0 }]);
        assert_eq!(s.words[0].lex_id, 1);
        assert_eq!(s.pointers[2].source_word, 1);
        assert_eq!(s.pointers[2].target_word, 1);
        assert_eq!(s.pointers[2].target.pos, PartOfSpeech::Adjective);
        assert_eq!(s.to_string(), verb);

        let adj = "00202677 00 s 01 regardant(ip) 0 002 & 00201354 a 0000 ;c 05801594 n 0000 | looking backward  ";
        let s = parse_data_line(adj, PartOfSpeech::Adjective).unwrap();
        assert_eq!(s.ss_type, PartOfSpeech::AdjectiveSatellite);
        assert_eq!(s.id.pos, PartOfSpeech::Adjective);
        assert_eq!(s.words[0].lemma, "regardant");
        assert_eq!(s.words[0].marker.as_deref(), Some("ip"));
        assert_eq!(s.pointers[1].symbol, ";c");
        assert_eq!(s.to_string(), adj);
    }

    #[test]
    fn unknown_pointer_symbols_are_kept() {
        let s = parse_data_line(
            "00000009 03 n 01 thing 0 001 ?? 00000001 n 0000 | x",
            PartOfSpeech::Noun,
        )
        .unwrap();
        assert_eq!(s.pointers[0].symbol, "??");
    }

    #[test]
    fn data_line_errors_carry_location() {
        let e = parse_data_line("0000x001 03 n 01 entity 0 000 | root", PartOfSpeech::Noun).unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));

        // p_cnt claims two pointers, only one present.
        let e = parse_data_line(
            "00000001 03 n 01 entity 0 002 @ 00000002 n 0000 | root",
            PartOfSpeech::Noun,
        )
        .unwrap_err();
        assert!(e.message.contains("truncated"), "{e}");

        // w_cnt of 2 swallows "000" as a lemma and then finds no lex_id.
        let e = parse_data_line("00000001 03 n 02 entity 0 000 | root", PartOfSpeech::Noun).unwrap_err();
        assert!(e.message.contains("lex_id"), "{e}");

        let e = parse_data_line("00000001 03 n zz entity 0 000 | root", PartOfSpeech::Noun).unwrap_err();
        assert_eq!(e.column, 15);

        let e = parse_data_line("00000001 03 n 01 entity 0 000 extra | root", PartOfSpeech::Noun).unwrap_err();
        assert!(e.message.contains("trailing"));

        assert!(parse_data_line("00000001 03 n 01 entity 0 000", PartOfSpeech::Noun).is_err());
        assert!(parse_data_line("00000001 03 v 01 go 0 000 00 | x", PartOfSpeech::Noun).is_err());
    }

    #[test]
    fn parses_index_lines() {
        let e = parse_index_line("dog n 1 1 @ 1 0 00000003", PartOfSpeech::Noun).unwrap();
        assert_eq!(e.lemma, "dog");
        assert_eq!(e.pos, PartOfSpeech::Noun);
        assert_eq!(e.synset_offsets, [3]);

        let e = parse_index_line(
            "good n 4 4 ! @ ~ = 4 3 05159725 04849241 05142180 03076708  ",
            PartOfSpeech::Noun,
        )
        .unwrap();
        assert_eq!(e.synset_offsets, [5159725, 4849241, 5142180, 3076708]);
        assert_eq!(e.pointer_symbols, ["!", "@", "~", "="]);
        assert_eq!(
            e.to_string(),
            "good n 4 4 ! @ ~ = 4 3 05159725 04849241 05142180 03076708  "
        );

        let err = parse_index_line("dog n 2 1 @ 1 0 00000003", PartOfSpeech::Noun).unwrap_err();
        assert!(err.message.contains("synset_cnt"));
        assert_eq!(err.column, 7);
    }

    #[test]
    fn word_part_cases() {
        assert_eq!(word_part("dog.n.01"), "dog");
        assert_eq!(word_part("carry_back.v.01"), "carry_back");
        assert_eq!(word_part("x"), "x");
    }

    #[test]
    fn satellite_shares_adjective_namespace() {
        assert_eq!(
            SynsetId::new(PartOfSpeech::AdjectiveSatellite, 7),
            SynsetId::new(PartOfSpeech::Adjective, 7)
        );
    }
}
