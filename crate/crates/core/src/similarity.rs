//! Path-based similarity measures.
//!
//! `path` is `1 / (d + 1)` with `d` the ancestral distance in edges, so a
//! synset compared with itself scores exactly 1. `lch` and `wup` default to
//! the plain ratio forms
//!
//! ```text
//! lch = d(a, b) / (2 * max_depth)
//! wup = depth(lcs) / (depth(a) + depth(b))
//! ```
//!
//! where `depth(a)` is measured along the path through the subsumer.
//!
//! with the usual literature forms available as [`Variant::Standard`].

use std::fmt;
use std::str::FromStr;

use crate::taxonomy::{NodeId, TaxonomyError, TaxonomyGraph};
use crate::wndb::{normalize_lemma, SynsetId, WordNetDatabase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Measure {
    #[default]
    Path,
    Lch,
    Wup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Variant {
    #[default]
    Ratio,
    Standard,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureKind {
    Path,
    LchRatio,
    LchStandard,
    WupRatio,
    WupStandard,
}

impl MeasureKind {
    pub fn new(measure: Measure, variant: Variant) -> Self {
        match (measure, variant) {
            (Measure::Path, _) => MeasureKind::Path,
            (Measure::Lch, Variant::Ratio) => MeasureKind::LchRatio,
            (Measure::Lch, Variant::Standard) => MeasureKind::LchStandard,
            (Measure::Wup, Variant::Ratio) => MeasureKind::WupRatio,
            (Measure::Wup, Variant::Standard) => MeasureKind::WupStandard,
        }
    }
}

impl FromStr for Measure {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "path" => Ok(Measure::Path),
            "lch" => Ok(Measure::Lch),
            "wup" => Ok(Measure::Wup),
            _ => Err(format!("unknown measure {s:?} (expected path, lch or wup)")),
        }
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ratio" => Ok(Variant::Ratio),
            "standard" => Ok(Variant::Standard),
            _ => Err(format!("unknown variant {s:?} (expected ratio or standard)")),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Path => "path",
            Measure::Lch => "lch",
            Measure::Wup => "wup",
        })
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Ratio => "ratio",
            Variant::Standard => "standard",
        })
    }
}

/// `1 / (d + 1)` for a known distance in edges.
pub fn path_score(distance: u32) -> f64 {
    1.0 / (f64::from(distance) + 1.0)
}

pub fn node_path_similarity(graph: &TaxonomyGraph, a: NodeId, b: NodeId) -> Option<f64> {
    graph.node_distance(a, b).map(path_score)
}

pub fn path_similarity(graph: &TaxonomyGraph, a: SynsetId, b: SynsetId) -> Result<Option<f64>, TaxonomyError> {
    Ok(graph.shortest_ancestral_distance(a, b)?.map(path_score))
}

pub fn lch_measure(
    graph: &TaxonomyGraph,
    a: SynsetId,
    b: SynsetId,
    variant: Variant,
) -> Result<Option<f64>, TaxonomyError> {
    let Some(d) = graph.shortest_ancestral_distance(a, b)? else {
        return Ok(None);
    };
    let Some(max_depth) = graph.max_depth(a.pos) else {
        return Ok(None);
    };
    let d = f64::from(d);
    let max_depth = f64::from(max_depth);
    Ok(Some(match variant {
        Variant::Ratio if max_depth == 0.0 => 0.0,
        Variant::Ratio => d / (2.0 * max_depth),
        Variant::Standard => -((d + 1.0) / (2.0 * (max_depth + 1.0))).ln(),
    }))
}

pub fn wup_measure(
    graph: &TaxonomyGraph,
    a: SynsetId,
    b: SynsetId,
    variant: Variant,
) -> Result<Option<f64>, TaxonomyError> {
    let (na, nb) = (graph.node(a)?, graph.node(b)?);
    let Some(lcs) = graph.node_lcs(na, nb) else {
        return Ok(None);
    };
    let Some(dl) = graph.node_depth(lcs) else {
        return Ok(None);
    };
    // Root distances run through the subsumer. Under multiple inheritance a
    // synset's own shortest root path can bypass it, which would let the
    // ratio exceed its range.
    let through = |n: NodeId| graph.ancestors(n).get(lcs).map(|d| dl + d);
    let (Some(da), Some(db)) = (through(na), through(nb)) else {
        return Ok(None);
    };
    if da + db == 0 {
        return Ok(Some(1.0));
    }
    let numerator = match variant {
        Variant::Ratio => f64::from(dl),
        Variant::Standard => 2.0 * f64::from(dl),
    };
    Ok(Some(numerator / f64::from(da + db)))
}

pub fn similarity(
    graph: &TaxonomyGraph,
    a: SynsetId,
    b: SynsetId,
    kind: MeasureKind,
) -> Result<Option<f64>, TaxonomyError> {
    match kind {
        MeasureKind::Path => path_similarity(graph, a, b),
        MeasureKind::LchRatio => lch_measure(graph, a, b, Variant::Ratio),
        MeasureKind::LchStandard => lch_measure(graph, a, b, Variant::Standard),
        MeasureKind::WupRatio => wup_measure(graph, a, b, Variant::Ratio),
        MeasureKind::WupStandard => wup_measure(graph, a, b, Variant::Standard),
    }
}

/// Best path similarity between `target` and the first `cap` senses of
/// `word`. Undefined pairs never raise the maximum above its start of 0.
pub fn word_max_path_similarity(
    graph: &TaxonomyGraph,
    db: &WordNetDatabase,
    word: &str,
    target: SynsetId,
    cap: usize,
) -> Result<f64, TaxonomyError> {
    let target = graph.node(target)?;
    let lemma = normalize_lemma(word);
    let mut best = 0.0f64;
    for sense in db.synset_ids_for_word(&lemma, None).take(cap) {
        if let Some(score) = node_path_similarity(graph, target, graph.node(sense)?) {
            best = best.max(score);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_score_is_inverse_of_nodes_on_path() {
        assert_eq!(path_score(0), 1.0);
        assert!((path_score(6) - 0.142857).abs() < 1e-6);
        assert!(path_score(3) < path_score(2));
    }

    #[test]
    fn parse_measure_names() {
        assert_eq!("wup".parse::<Measure>().unwrap(), Measure::Wup);
        assert_eq!("standard".parse::<Variant>().unwrap(), Variant::Standard);
        assert!("res".parse::<Measure>().is_err());
        assert_eq!(MeasureKind::new(Measure::Path, Variant::Standard), MeasureKind::Path);
    }
}
