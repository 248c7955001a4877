//! Document ingestion and the per-document word frequency matrix.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use regex::Regex;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    /// URL or file path, unique within one run.
    pub id: String,
    pub text: String,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            text: text.into(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tokens {
    pub unigrams: Vec<String>,
    /// Adjacent unigram pairs joined by `_`. Pairs never span a line break.
    pub bigrams: Vec<String>,
}

impl Tokens {
    pub fn into_vec(self) -> Vec<String> {
        let mut all = self.unigrams;
        all.extend(self.bigrams);
        all
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

pub fn tokenize_parts(text: &str) -> Tokens {
    let mut tokens = Tokens::default();
    for line in text.lines() {
        let start = tokens.unigrams.len();
        tokens.unigrams.extend(
            line.split(|c: char| !is_word_char(c))
                .filter(|t| !t.is_empty())
                .map(str::to_lowercase),
        );
        let line_words = &tokens.unigrams[start..];
        tokens
            .bigrams
            .extend(line_words.windows(2).map(|w| format!("{}_{}", w[0], w[1])));
    }
    tokens
}

/// Lowercased word tokens followed by their bigrams.
pub fn tokenize(text: &str) -> Vec<String> {
    tokenize_parts(text).into_vec()
}

fn link_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r#"(?is)<a\b[^>]*?\bhref\s*=\s*(?:"([^"]*)"|'([^']*)'|([^\s>"']+))"#).unwrap())
}

/// `href` values of every anchor, in document order. With a base URL,
/// relative links are resolved against it.
pub fn extract_links(html: &str, base: Option<&str>) -> Vec<String> {
    let base = base.and_then(|b| url::Url::parse(b).ok());
    link_pattern()
        .captures_iter(html)
        .filter_map(|c| c.get(1).or_else(|| c.get(2)).or_else(|| c.get(3)))
        .map(|m| decode_entities(m.as_str().trim()))
        .map(|href| match &base {
            Some(b) => b.join(&href).map(String::from).unwrap_or(href),
            None => href,
        })
        .collect()
}

/// Links containing at least one keyword, case-insensitively. Each link is
/// kept once no matter how many keywords it contains.
pub fn filter_sublinks(links: &[String], keywords: &[String]) -> Vec<String> {
    let keywords: Vec<String> = keywords.iter().map(|k| k.to_lowercase()).collect();
    links
        .iter()
        .filter(|link| {
            let lower = link.to_lowercase();
            keywords.iter().any(|k| lower.contains(k.as_str()))
        })
        .cloned()
        .collect()
}

/// Decodes named and numeric character references.
pub fn decode_entities(s: &str) -> String {
    html_escape::decode_html_entities(s).into_owned()
}

/// Strips markup to visible text. Every source line maps to exactly one
/// output line; `script` and `style` bodies are dropped.
pub fn html_to_text(html: &str) -> String {
    let lower = html.to_ascii_lowercase();
    let mut out = String::with_capacity(html.len());
    let mut text_start = 0;
    let mut i = 0;
    let bytes = html.as_bytes();

    let skip_to = |out: &mut String, from: usize, to: usize| {
        out.extend(std::iter::repeat_n('\n', html[from..to].matches('\n').count()));
    };

    while i < bytes.len() {
        if bytes[i] != b'<' {
            i += 1;
            continue;
        }
        out.push_str(&decode_entities(&html[text_start..i]));
        let end = if lower[i..].starts_with("<!--") {
            lower[i..].find("-->").map_or(bytes.len(), |e| i + e + 3)
        } else {
            let tag_end = find_tag_end(bytes, i);
            let name: String = lower[i + 1..tag_end]
                .chars()
                .take_while(|c| c.is_ascii_alphanumeric())
                .collect();
            if name == "script" || name == "style" {
                let close = format!("</{name}");
                lower[tag_end..]
                    .find(&close)
                    .map_or(bytes.len(), |c| find_tag_end(bytes, tag_end + c))
            } else {
                tag_end
            }
        };
        skip_to(&mut out, i, end);
        i = end;
        text_start = end;
    }
    out.push_str(&decode_entities(&html[text_start..]));
    out
}

/// Index just past the `>` closing the tag that opens at `start`, honouring
/// quoted attribute values.
fn find_tag_end(bytes: &[u8], start: usize) -> usize {
    let mut quote = None;
    for (k, &b) in bytes.iter().enumerate().skip(start + 1) {
        match (quote, b) {
            (None, b'"') | (None, b'\'') => quote = Some(b),
            (Some(q), _) if b == q => quote = None,
            (None, b'>') => return k + 1,
            _ => {}
        }
    }
    bytes.len()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SourceKind {
    /// Ids are file paths, relative to `root` when one is given.
    LocalFile { root: Option<PathBuf> },
    /// Ids are http(s) URLs.
    Http,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FetchSource {
    pub kind: SourceKind,
    pub max_concurrent: usize,
    pub per_host_delay: Duration,
}

impl FetchSource {
    pub fn local(root: Option<PathBuf>) -> Self {
        FetchSource {
            kind: SourceKind::LocalFile { root },
            max_concurrent: 1,
            per_host_delay: Duration::ZERO,
        }
    }

    pub fn http() -> Self {
        FetchSource {
            kind: SourceKind::Http,
            max_concurrent: 4,
            per_host_delay: Duration::from_millis(500),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("failed to fetch {id}: {message}")]
pub struct FetchError {
    pub id: String,
    pub message: String,
}

/// Documents of one ingestion run, in request order, plus the ids that
/// could not be fetched.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusRun {
    pub documents: Vec<Document>,
    pub errors: Vec<FetchError>,
}

fn is_html_name(id: &str) -> bool {
    let lower = id.to_ascii_lowercase();
    let path = lower.split(['?', '#']).next().unwrap_or("");
    path.ends_with(".html") || path.ends_with(".htm")
}

/// Raw body of `id` plus whether it is HTML.
fn fetch_raw(source: &FetchSource, id: &str) -> Result<(String, bool), FetchError> {
    let fail = |message: String| FetchError {
        id: id.to_string(),
        message,
    };
    match &source.kind {
        SourceKind::LocalFile { root } => {
            let path = match root {
                Some(r) => r.join(id),
                None => PathBuf::from(id),
            };
            let body = fs::read_to_string(&path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
            Ok((body, is_html_name(id)))
        }
        SourceKind::Http => http_get(id).map_err(fail),
    }
}

#[cfg(feature = "http")]
fn http_get(url: &str) -> Result<(String, bool), String> {
    let response = reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs(30))
        .build()
        .and_then(|c| c.get(url).send())
        .map_err(|e| e.to_string())?;
    if !response.status().is_success() {
        return Err(format!("HTTP {}", response.status()));
    }
    let html = response
        .headers()
        .get(reqwest::header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .map_or_else(|| is_html_name(url), |ct| ct.contains("html"));
    let body = response.text().map_err(|e| e.to_string())?;
    Ok((body, html))
}

#[cfg(not(feature = "http"))]
fn http_get(_url: &str) -> Result<(String, bool), String> {
    Err("built without http support".into())
}

/// Fetches one document; HTML bodies are reduced to visible text.
pub fn fetch(source: &FetchSource, id: &str) -> Result<Document, FetchError> {
    let (body, html) = fetch_raw(source, id)?;
    let text = if html { html_to_text(&body) } else { body };
    Ok(Document::new(id, text))
}

fn host_of(id: &str) -> Option<String> {
    url::Url::parse(id).ok()?.host_str().map(str::to_string)
}

/// Fetches every id, at most `max_concurrent` at a time. Output order is
/// request order regardless of completion order; failures are collected
/// and never abort the run.
pub fn fetch_all(source: &FetchSource, ids: &[String]) -> CorpusRun {
    let workers = source.max_concurrent.clamp(1, ids.len().max(1));
    let results: Vec<Mutex<Option<Result<Document, FetchError>>>> = ids.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let last_hit: Mutex<HashMap<String, Instant>> = Mutex::new(HashMap::new());

    let work = || loop {
        let i = next.fetch_add(1, Ordering::SeqCst);
        if i >= ids.len() {
            break;
        }
        if source.kind == SourceKind::Http && !source.per_host_delay.is_zero() {
            if let Some(host) = host_of(&ids[i]) {
                let wait = {
                    let mut hits = last_hit.lock().unwrap();
                    let now = Instant::now();
                    let slot = hits.get(&host).map_or(now, |&t| (t + source.per_host_delay).max(now));
                    hits.insert(host, slot);
                    slot - now
                };
                std::thread::sleep(wait);
            }
        }
        *results[i].lock().unwrap() = Some(fetch(source, &ids[i]));
    };

    if workers == 1 {
        work();
    } else {
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(work);
            }
        });
    }

    let mut run = CorpusRun::default();
    for r in results {
        match r.into_inner().unwrap().expect("every id fetched") {
            Ok(doc) => run.documents.push(doc),
            Err(e) => run.errors.push(e),
        }
    }
    run
}

pub const MANIFEST_NAME: &str = "manifest.txt";

/// Document ids of a corpus directory: the manifest's lines when present,
/// otherwise every `.txt`, `.htm` and `.html` file sorted by name.
pub fn corpus_ids(dir: &Path) -> io::Result<Vec<String>> {
    let manifest = dir.join(MANIFEST_NAME);
    if manifest.is_file() {
        return Ok(fs::read_to_string(manifest)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_string)
            .collect());
    }
    let mut ids = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name().to_string_lossy().into_owned();
        let lower = name.to_ascii_lowercase();
        if entry.file_type()?.is_file()
            && (lower.ends_with(".txt") || lower.ends_with(".html") || lower.ends_with(".htm"))
        {
            ids.push(name);
        }
    }
    ids.sort();
    Ok(ids)
}

pub fn load_corpus_dir(dir: &Path) -> io::Result<CorpusRun> {
    let ids = corpus_ids(dir)?;
    Ok(fetch_all(&FetchSource::local(Some(dir.to_path_buf())), &ids))
}

/// Fetches a hub page, keeps the links that contain a keyword and fetches
/// those. For local sources, links are resolved against the hub's directory.
pub fn crawl_hub(source: &FetchSource, hub: &str, keywords: &[String]) -> Result<CorpusRun, FetchError> {
    let (body, _) = fetch_raw(source, hub)?;
    let base = matches!(source.kind, SourceKind::Http).then_some(hub);
    let links = extract_links(&body, base);
    // A page may link the same document twice; ids stay unique per run.
    let mut seen = HashSet::new();
    let mut sublinks: Vec<String> = filter_sublinks(&links, keywords)
        .into_iter()
        .filter(|l| seen.insert(l.clone()))
        .collect();
    if let SourceKind::LocalFile { .. } = source.kind {
        let dir = Path::new(hub).parent().unwrap_or(Path::new(""));
        for l in &mut sublinks {
            *l = dir.join(l.trim_start_matches("./")).to_string_lossy().into_owned();
        }
    }
    Ok(fetch_all(source, &sublinks))
}

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("matrix csv: {0}")]
    Format(String),
}

/// `counts[i][k]`: occurrences of search word `k` in document `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl FrequencyMatrix {
    pub fn row(&self, i: usize) -> &[u64] {
        &self.counts[i]
    }

    /// Fraction of zero cells; 0 for an empty matrix.
    pub fn sparsity(&self) -> f64 {
        let cells = self.rows.len() * self.cols.len();
        if cells == 0 {
            return 0.0;
        }
        let zeros = self.counts.iter().flatten().filter(|&&c| c == 0).count();
        zeros as f64 / cells as f64
    }

    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<(), MatrixError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        let mut header = vec!["doc_id".to_string()];
        header.extend(self.cols.iter().cloned());
        w.write_record(&header)?;
        for (id, row) in self.rows.iter().zip(&self.counts) {
            let mut rec = vec![id.clone()];
            rec.extend(row.iter().map(u64::to_string));
            w.write_record(&rec)?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn read_csv<R: io::Read>(reader: R) -> Result<Self, MatrixError> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let header = r.headers()?.clone();
        if header.get(0) != Some("doc_id") {
            return Err(MatrixError::Format("first column must be doc_id".into()));
        }
        let cols: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut rows = Vec::new();
        let mut counts = Vec::new();
        for (n, rec) in r.records().enumerate() {
            let rec = rec?;
            rows.push(rec.get(0).unwrap_or_default().to_string());
            let row = rec
                .iter()
                .skip(1)
                .map(|c| c.parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| MatrixError::Format(format!("row {}: {e}", n + 1)))?;
            counts.push(row);
        }
        Ok(FrequencyMatrix { rows, cols, counts })
    }
}

/// Counts every search word line by line over each document's tokens.
/// Repeated search words get repeated, identical columns.
pub fn count_frequencies(documents: &[Document], searchwords: &[String]) -> FrequencyMatrix {
    let keys: Vec<String> = searchwords.iter().map(|w| w.to_lowercase()).collect();
    let counts = documents
        .iter()
        .map(|doc| {
            let mut row = vec![0u64; keys.len()];
            for line in doc.text.lines() {
                let mut line_counts: HashMap<String, u64> = HashMap::new();
                for t in tokenize(line) {
                    *line_counts.entry(t).or_default() += 1;
                }
                for (k, key) in keys.iter().enumerate() {
                    row[k] += line_counts.get(key).copied().unwrap_or(0);
                }
            }
            row
        })
        .collect();
    FrequencyMatrix {
        rows: documents.iter().map(|d| d.id.clone()).collect(),
        cols: searchwords.to_vec(),
        counts,
    }
}

/// Number of word tokens, used to normalize polarity coordinates.
pub fn unigram_total(text: &str) -> u64 {
    tokenize_parts(text).unigrams.len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(
            tokenize("A good, GOOD plot"),
            s(&["a", "good", "good", "plot", "a_good", "good_good", "good_plot"])
        );
        assert!(tokenize("").is_empty());
        assert!(tokenize("carry back").contains(&"carry_back".to_string()));
        assert!(!tokenize("carry\nback").contains(&"carry_back".to_string()));
    }

    #[test]
    fn links_in_order() {
        let html = r#"<a href="/wiki/A">x</a><a href="/wiki/B">y</a>"#;
        assert_eq!(extract_links(html, None), s(&["/wiki/A", "/wiki/B"]));
        assert!(extract_links("<p>no anchors</p>", None).is_empty());
        let html = r#"<A class='x' HREF='/a?x=1&amp;y=2'>"#;
        assert_eq!(extract_links(html, None), s(&["/a?x=1&y=2"]));
        assert_eq!(
            extract_links(r#"<a href="/wiki/A">"#, Some("https://en.wikipedia.org/wiki/Cat")),
            s(&["https://en.wikipedia.org/wiki/A"])
        );
        // <abbr> is not an anchor.
        assert!(extract_links(r#"<abbr href="x">"#, None).is_empty());
    }

    #[test]
    fn sublink_filter() {
        let links = s(&["/wiki/Dog_(novel)", "/talk/Dog"]);
        assert_eq!(filter_sublinks(&links, &s(&["wiki"])), s(&["/wiki/Dog_(novel)"]));
        assert!(filter_sublinks(&links, &s(&["zzz"])).is_empty());
        assert_eq!(
            filter_sublinks(&links, &s(&["WIKI", "dog"])),
            s(&["/wiki/Dog_(novel)", "/talk/Dog"])
        );
    }

    #[test]
    fn html_stripping_keeps_lines() {
        let html = "<html><head><style>\np { color: red }\n</style></head>\n<body><p>Fish &amp; chips</p>\n<script>var x = '<b>';\n</script>tasty <!-- hidden\n --> &#233;t&eacute;\n</body>";
        let text = html_to_text(html);
        assert_eq!(text.matches('\n').count(), html.matches('\n').count());
        assert_eq!(text, "\n\n\nFish & chips\n\ntasty \n \u{e9}t\u{e9}\n");
    }

    #[test]
    fn frequency_counts() {
        let docs = vec![Document::new("d", "good good bad")];
        let m = count_frequencies(&docs, &s(&["good", "bad", "ugly"]));
        assert_eq!(m.counts, vec![vec![2, 1, 0]]);
        let m = count_frequencies(&docs, &s(&["good", "good"]));
        assert_eq!(m.counts, vec![vec![2, 2]]);
        let docs = vec![Document::new("d", "Goodness, good_good\ncarry back")];
        let m = count_frequencies(&docs, &s(&["good", "carry_back", "good_good"]));
        assert_eq!(m.counts, vec![vec![0, 1, 1]]);
    }

    #[test]
    fn matrix_csv_round_trip() {
        let m = FrequencyMatrix {
            rows: s(&["a.txt", "b,c.txt"]),
            cols: s(&["good", "plug", "plug"]),
            counts: vec![vec![1, 0, 0], vec![0, 3, 3]],
        };
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("doc_id,good,plug,plug\na.txt,1,0,0\n"));
        assert_eq!(FrequencyMatrix::read_csv(buf.as_slice()).unwrap(), m);
        assert!((m.sparsity() - 0.5).abs() < 1e-12);
    }
}
