//! Machine-translation quality metrics evaluated by how well they rank
//! segments by measured post-editing effort.
//!
//! The crate computes reference-based metrics (TER, BLEU, METEOR),
//! human-targeted metrics against the post-edited text (HTER, HBLEU,
//! HMETEOR), task measurements (post-editing time per word, keystrokes per
//! character), and compares the rankings these induce with the ranking by
//! measured time using Spearman's ρ, SATRA, DeltaAVG and tail overlap.

pub mod corpus;
pub mod error;
pub mod pipeline;
pub mod rankeval;
pub mod stats;
pub mod taskmetrics;
pub mod textmetrics;
mod tsv;

pub use corpus::{load_corpus, tokenize, validate_corpus, Corpus, PeSession, Segment, TokenList};
pub use error::{Error, Result};
pub use pipeline::Metric;
pub use rankeval::{rank_by, satra, spearman, Polarity, RankInstance};
pub use taskmetrics::{SegmentScores, ALL};
