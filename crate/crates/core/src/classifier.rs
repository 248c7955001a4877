//! Proportion-threshold classification, polarity coordinates and the
//! clause-level sign refinement.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::corpus::tokenize;
use crate::lexicon::{SeedLexicon, Side};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifierError {
    #[error("row has {row} columns but the lexicon has {lexicon} entries")]
    Misaligned { row: usize, lexicon: usize },
    #[error("normalized coordinates need the document's token total")]
    MissingTokenTotal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    A,
    B,
    Unclassified,
}

impl Label {
    pub fn swapped(self) -> Label {
        match self {
            Label::A => Label::B,
            Label::B => Label::A,
            Label::Unclassified => Label::Unclassified,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::A => "A",
            Label::B => "B",
            Label::Unclassified => "Unclassified",
        })
    }
}

impl FromStr for Label {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "A" => Ok(Label::A),
            "B" => Ok(Label::B),
            "Unclassified" => Ok(Label::Unclassified),
            _ => Err(format!("unknown label {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    pub eps1: f64,
    pub eps2: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { eps1: 0.5, eps2: 0.5 }
    }
}

impl Thresholds {
    /// True when a row can clear both thresholds at once.
    pub fn overlapping(&self) -> bool {
        self.eps1 + self.eps2 < 1.0
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PolarityPoint {
    /// Good-set frequency.
    pub x: f64,
    /// Bad-set frequency.
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decision {
    pub label: Label,
    /// Both proportions cleared their thresholds; the larger one won.
    pub both_passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassificationResult {
    pub label: Label,
    pub p_good: f64,
    pub p_bad: f64,
    pub strength: f64,
    pub point: PolarityPoint,
    pub both_passed: bool,
}

/// Summed counts of the good-side and bad-side columns.
pub fn side_totals(row: &[u64], sides: &[Side]) -> Result<(u64, u64), ClassifierError> {
    if row.len() != sides.len() {
        return Err(ClassifierError::Misaligned {
            row: row.len(),
            lexicon: sides.len(),
        });
    }
    Ok(row.iter().zip(sides).fold((0, 0), |(g, b), (&c, side)| match side {
        Side::Good => (g + c, b),
        Side::Bad => (g, b + c),
    }))
}

pub fn proportions(row: &[u64], sides: &[Side]) -> Result<(f64, f64), ClassifierError> {
    let (g, b) = side_totals(row, sides)?;
    Ok(proportions_from_totals(g, b))
}

fn proportions_from_totals(g: u64, b: u64) -> (f64, f64) {
    let total = g + b;
    if total == 0 {
        (0.0, 0.0)
    } else {
        (g as f64 / total as f64, b as f64 / total as f64)
    }
}

/// A when `p_good > eps1`, B when `p_bad > eps2`, otherwise unclassified.
pub fn classify(p_good: f64, p_bad: f64, thresholds: Thresholds) -> Decision {
    let a = p_good > thresholds.eps1;
    let b = p_bad > thresholds.eps2;
    let label = match (a, b) {
        (true, false) => Label::A,
        (false, true) => Label::B,
        (false, false) => Label::Unclassified,
        (true, true) if p_good > p_bad => Label::A,
        (true, true) if p_bad > p_good => Label::B,
        (true, true) => Label::Unclassified,
    };
    Decision {
        label,
        both_passed: a && b,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PointMode {
    /// Summed counts.
    #[default]
    Raw,
    /// Summed counts divided by the document's word token total.
    Normalized,
}

pub fn polarity_point(
    row: &[u64],
    sides: &[Side],
    mode: PointMode,
    token_total: Option<u64>,
) -> Result<PolarityPoint, ClassifierError> {
    let (g, b) = side_totals(row, sides)?;
    match mode {
        PointMode::Raw => Ok(PolarityPoint {
            x: g as f64,
            y: b as f64,
        }),
        PointMode::Normalized => {
            let t = token_total.ok_or(ClassifierError::MissingTokenTotal)?;
            if t == 0 {
                return Ok(PolarityPoint::default());
            }
            Ok(PolarityPoint {
                x: g as f64 / t as f64,
                y: b as f64 / t as f64,
            })
        }
    }
}

/// Full classification of one count row. Strength is the larger proportion,
/// which is the winning side's share whenever a label is assigned.
pub fn classify_row(
    row: &[u64],
    sides: &[Side],
    thresholds: Thresholds,
    mode: PointMode,
    token_total: Option<u64>,
) -> Result<ClassificationResult, ClassifierError> {
    let (p_good, p_bad) = proportions(row, sides)?;
    let decision = classify(p_good, p_bad, thresholds);
    Ok(ClassificationResult {
        label: decision.label,
        p_good,
        p_bad,
        strength: p_good.max(p_bad),
        point: polarity_point(row, sides, mode, token_total)?,
        both_passed: decision.both_passed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connective {
    None,
    Additive,
    Contrastive,
}

pub const CONTRASTIVE: [&str; 4] = ["but", "however", "yet", "although"];
pub const ADDITIVE: [&str; 3] = ["and", "also", "moreover"];

fn connective_of(word: &str) -> Option<Connective> {
    if CONTRASTIVE.contains(&word) {
        Some(Connective::Contrastive)
    } else if ADDITIVE.contains(&word) {
        Some(Connective::Additive)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Clause {
    pub text: String,
    pub connective: Connective,
    /// +1 good, -1 bad, 0 unresolved.
    pub sign: i8,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ClauseSequence {
    pub clauses: Vec<Clause>,
}

impl ClauseSequence {
    pub fn signs(&self) -> Vec<i8> {
        self.clauses.iter().map(|c| c.sign).collect()
    }
}

/// Splits one sentence at connective words. Each clause after the first
/// records the connective that introduced it; connectives are dropped from
/// the clause text.
pub fn split_clauses(sentence: &str) -> ClauseSequence {
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    let mut connective = Connective::None;

    for piece in sentence.split_whitespace() {
        let bare = piece
            .trim_matches(|c: char| !c.is_alphanumeric() && c != '_')
            .to_lowercase();
        match connective_of(&bare) {
            Some(c) => {
                if !current.is_empty() {
                    clauses.push(Clause {
                        text: clause_text(&current),
                        connective,
                        sign: 0,
                    });
                    current.clear();
                    connective = c;
                } else if !clauses.is_empty() && connective == Connective::None {
                    connective = c;
                }
            }
            None => current.push(piece),
        }
    }
    if !current.is_empty() {
        clauses.push(Clause {
            text: clause_text(&current),
            connective,
            sign: 0,
        });
    }
    ClauseSequence { clauses }
}

fn clause_text(words: &[&str]) -> String {
    words
        .join(" ")
        .trim_matches(|c: char| c == ',' || c == ';' || c == ':' || c.is_whitespace())
        .to_string()
}

/// Good and bad word sets of a lexicon, lowercased.
#[derive(Clone, Debug, Default)]
pub struct LexiconSets {
    pub good: HashSet<String>,
    pub bad: HashSet<String>,
}

impl LexiconSets {
    pub fn new(lexicon: &SeedLexicon) -> Self {
        LexiconSets {
            good: lexicon.words(Side::Good).map(str::to_lowercase).collect(),
            bad: lexicon.words(Side::Bad).map(str::to_lowercase).collect(),
        }
    }

    /// sign(good hits - bad hits) over the tokens of `text`.
    pub fn raw_sign(&self, text: &str) -> i8 {
        let (mut g, mut b) = (0i64, 0i64);
        for t in tokenize(text) {
            g += i64::from(self.good.contains(&t));
            b += i64::from(self.bad.contains(&t));
        }
        (g - b).signum() as i8
    }
}

/// Resolves clause signs. With `inherit`, a clause without evidence takes
/// the previous resolved sign, flipped after a contrastive connective; a
/// leading evidence-free clause stays 0. Without it, such clauses stay 0.
pub fn clause_signs(seq: &ClauseSequence, lexicon: &LexiconSets, inherit: bool) -> ClauseSequence {
    let mut prev: i8 = 0;
    let clauses = seq
        .clauses
        .iter()
        .map(|c| {
            let mut sign = lexicon.raw_sign(&c.text);
            if sign == 0 && inherit {
                sign = match c.connective {
                    Connective::Contrastive => -prev,
                    _ => prev,
                };
            }
            if sign != 0 {
                prev = sign;
            }
            Clause { sign, ..c.clone() }
        })
        .collect();
    ClauseSequence { clauses }
}

/// Mean of the non-zero signs; 0 when there are none.
pub fn average_sign(seq: &ClauseSequence) -> f64 {
    mean_sign(seq.clauses.iter().map(|c| c.sign))
}

fn mean_sign(signs: impl Iterator<Item = i8>) -> f64 {
    let (sum, n) = signs
        .filter(|&s| s != 0)
        .fold((0i64, 0usize), |(s, n), x| (s + i64::from(x), n + 1));
    if n == 0 {
        0.0
    } else {
        sum as f64 / n as f64
    }
}

pub fn split_sentences(text: &str) -> impl Iterator<Item = &str> {
    text.split(['.', '!', '?']).map(str::trim).filter(|s| !s.is_empty())
}

/// Average clause sign over every sentence of a document.
pub fn document_average_sign(text: &str, lexicon: &LexiconSets, inherit: bool) -> f64 {
    let mut signs = Vec::new();
    for sentence in split_sentences(text) {
        signs.extend(clause_signs(&split_clauses(sentence), lexicon, inherit).signs());
    }
    mean_sign(signs.into_iter())
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: Side = Side::Good;
    const B: Side = Side::Bad;

    #[test]
    fn proportion_examples() {
        assert_eq!(proportions(&[4, 2, 2], &[G, G, B]).unwrap(), (0.75, 0.25));
        assert_eq!(proportions(&[0, 0], &[G, B]).unwrap(), (0.0, 0.0));
        assert_eq!(proportions(&[5, 5], &[G, B]).unwrap(), (0.5, 0.5));
        assert_eq!(
            proportions(&[1], &[G, B]),
            Err(ClassifierError::Misaligned { row: 1, lexicon: 2 })
        );
    }

    #[test]
    fn classify_examples() {
        let t = Thresholds::default();
        assert_eq!(classify(0.8, 0.2, t).label, Label::A);
        assert_eq!(classify(0.2, 0.8, t).label, Label::B);
        assert_eq!(classify(0.5, 0.5, t).label, Label::Unclassified);
        assert_eq!(classify(0.0, 0.0, t).label, Label::Unclassified);
        assert_eq!(
            classify(0.0, 0.0, Thresholds { eps1: 0.0, eps2: 0.0 }).label,
            Label::Unclassified
        );

        let low = Thresholds { eps1: 0.3, eps2: 0.3 };
        assert!(low.overlapping());
        let d = classify(0.6, 0.4, low);
        assert_eq!(
            d,
            Decision {
                label: Label::A,
                both_passed: true
            }
        );
        assert_eq!(classify(0.5, 0.5, low).label, Label::Unclassified);
    }

    #[test]
    fn polarity_examples() {
        let row = [6, 2];
        let sides = [G, B];
        assert_eq!(
            polarity_point(&row, &sides, PointMode::Raw, None).unwrap(),
            PolarityPoint { x: 6.0, y: 2.0 }
        );
        assert_eq!(
            polarity_point(&[0, 0], &sides, PointMode::Normalized, Some(0)).unwrap(),
            PolarityPoint::default()
        );
        assert_eq!(
            polarity_point(&row, &sides, PointMode::Normalized, Some(100)).unwrap(),
            PolarityPoint { x: 0.06, y: 0.02 }
        );
        assert_eq!(
            polarity_point(&row, &sides, PointMode::Normalized, None),
            Err(ClassifierError::MissingTokenTotal)
        );
    }

    #[test]
    fn clause_splitting() {
        let seq = split_clauses("the action was terrible but the screenplay was superb");
        assert_eq!(seq.clauses.len(), 2);
        assert_eq!(seq.clauses[0].text, "the action was terrible");
        assert_eq!(seq.clauses[1].connective, Connective::Contrastive);
        assert_eq!(seq.clauses[1].text, "the screenplay was superb");

        assert_eq!(split_clauses("a plain sentence").clauses.len(), 1);

        let seq = split_clauses("good and good and good");
        assert_eq!(seq.clauses.len(), 3);
        assert!(seq.clauses[1..].iter().all(|c| c.connective == Connective::Additive));
        assert_eq!(seq.clauses[0].connective, Connective::None);

        let seq = split_clauses("However, it was dull, but, also, long");
        assert_eq!(seq.clauses[0].connective, Connective::None);
        assert_eq!(seq.clauses[0].text, "it was dull");
        assert_eq!(seq.clauses[1].connective, Connective::Contrastive);
        assert_eq!(seq.clauses[1].text, "long");
    }

    #[test]
    fn average_examples() {
        let seq = |signs: &[i8]| ClauseSequence {
            clauses: signs
                .iter()
                .map(|&sign| Clause {
                    text: String::new(),
                    connective: Connective::None,
                    sign,
                })
                .collect(),
        };
        assert_eq!(average_sign(&seq(&[-1, 1])), 0.0);
        assert!((average_sign(&seq(&[1, 1, -1])) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(average_sign(&seq(&[])), 0.0);
        assert_eq!(average_sign(&seq(&[0, 1])), 1.0);
    }
}
