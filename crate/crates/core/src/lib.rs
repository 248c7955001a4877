//! WordNet-driven sentiment lexicon expansion and document polarity
//! classification.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`wndb`] parses the WordNet database files and [`taxonomy`] builds the
//!    hypernym graph over them.
//! 2. [`lexicon`] grows a seed good/bad lexicon by sweeping synsets and
//!    scoring each with the [`similarity`] measures.
//! 3. [`corpus`] ingests documents and counts lexicon words per document.
//! 4. [`classifier`] turns each count row into a label, a strength and a
//!    polarity point, which [`plot`] renders as a scatter.

pub mod classifier;
pub mod corpus;
pub mod lexicon;
pub mod pipeline;
pub mod plot;
pub mod similarity;
pub mod taxonomy;
pub mod wndb;

pub use taxonomy::TaxonomyGraph;
pub use wndb::{load_database, PartOfSpeech, SynsetId, WordNetDatabase};
