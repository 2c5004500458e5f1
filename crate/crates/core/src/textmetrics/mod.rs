//! Sentence-level text-similarity metrics over [`TokenList`]s.
//!
//! Each metric compares a hypothesis against a single gold text. Passing an
//! independent reference gives the usual reference-based score; passing the
//! post-edited version of the hypothesis gives its human-targeted variant
//! (HTER, HBLEU, HMETEOR).
//!
//! [`TokenList`]: crate::corpus::TokenList

mod bleu;
mod edit_distance;
mod meteor;
mod ter;

pub use bleu::{bleu, DEFAULT_MAX_N};
pub use edit_distance::word_edit_distance;
pub use meteor::{meteor_lite, MeteorResult};
pub use ter::{ter, EditBreakdown, TerResult, MAX_SHIFT_BLOCK};
