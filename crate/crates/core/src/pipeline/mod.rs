//! End-to-end analyses over a scored corpus.
//!
//! Every table here is composed from the metric, ranking and statistics
//! modules; nothing in this module introduces new math.

mod analysis;
mod report;
mod scores;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::rankeval::Polarity;

pub use analysis::{
    leave_one_out, loo_gold, loo_tsv, petpw_by_annotator, rank_eval, scatter, scatter_csv, stats_table,
    stats_tsv, tails, tails_tsv, LooGold, LooRow, RankEvalRow, RankEvalTable, ScatterRow, Side, StatsRow,
    TailRow, TailSpec,
};
pub use report::{build_report, write_report, ClusterSection, PairwiseKs, Report, ReportFiles, TailSection};
pub use scores::{score_corpus, ScoreRow, ScoresTable};

pub const DEFAULT_WILLIAMS_ALPHA: f64 = 0.01;

/// The fixed metric vocabulary used in every table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Ter,
    Bleu,
    Meteor,
    Da,
    Hter,
    Hbleu,
    Hmeteor,
    KeysPerChar,
    Petpw,
}

impl Metric {
    pub const ALL: [Metric; 9] = [
        Metric::Ter,
        Metric::Bleu,
        Metric::Meteor,
        Metric::Da,
        Metric::Hter,
        Metric::Hbleu,
        Metric::Hmeteor,
        Metric::KeysPerChar,
        Metric::Petpw,
    ];

    /// Metrics compared against the gold ranking (everything but PETpW).
    pub const CANDIDATES: [Metric; 8] = [
        Metric::Ter,
        Metric::Bleu,
        Metric::Meteor,
        Metric::Da,
        Metric::Hter,
        Metric::Hbleu,
        Metric::Hmeteor,
        Metric::KeysPerChar,
    ];

    /// Metrics that depend on a single annotator's post-edit, plus DA.
    pub const LEAVE_ONE_OUT: [Metric; 6] = [
        Metric::Da,
        Metric::Hter,
        Metric::Hbleu,
        Metric::Hmeteor,
        Metric::KeysPerChar,
        Metric::Petpw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Ter => "TER",
            Metric::Bleu => "BLEU",
            Metric::Meteor => "METEOR",
            Metric::Da => "DA",
            Metric::Hter => "HTER",
            Metric::Hbleu => "HBLEU",
            Metric::Hmeteor => "HMETEOR",
            Metric::KeysPerChar => "KEYS_PER_CHAR",
            Metric::Petpw => "PETPW",
        }
    }

    /// Column name in the scores file.
    pub fn column(self) -> &'static str {
        match self {
            Metric::Ter => "ter",
            Metric::Bleu => "bleu",
            Metric::Meteor => "meteor",
            Metric::Da => "da",
            Metric::Hter => "hter",
            Metric::Hbleu => "hbleu",
            Metric::Hmeteor => "hmeteor",
            Metric::KeysPerChar => "keys_per_char",
            Metric::Petpw => "petpw",
        }
    }

    pub fn polarity(self) -> Polarity {
        match self {
            Metric::Bleu | Metric::Meteor | Metric::Da | Metric::Hbleu | Metric::Hmeteor => {
                Polarity::LowerIsMoreEffort
            }
            Metric::Ter | Metric::Hter | Metric::KeysPerChar | Metric::Petpw => {
                Polarity::HigherIsMoreEffort
            }
        }
    }

    /// Whether the value comes from a post-editing session.
    pub fn needs_session(self) -> bool {
        matches!(
            self,
            Metric::Hter | Metric::Hbleu | Metric::Hmeteor | Metric::KeysPerChar | Metric::Petpw
        )
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s) || m.column() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown metric `{s}`")))
    }
}

impl Serialize for Metric {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}
