use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::BufRead;

use rayon::prelude::*;
use serde::Serialize;

use super::Metric;
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::taskmetrics::{all_view, score_reference, score_session, SegmentScores, ALL};
use crate::tsv::{cell, escape, Table};

const ID_COLUMNS: [&str; 4] = ["segment_id", "annotator_id", "mt_tokens", "pe_time_sec"];

/// One line of the scores file. Session-derived fields are empty for
/// segments nobody post-edited.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreRow {
    pub segment_id: String,
    pub annotator_id: String,
    pub mt_tokens: usize,
    pub pe_time_sec: Option<f64>,
    pub petpw: Option<f64>,
    pub keys_per_char: Option<f64>,
    pub hter: Option<f64>,
    pub hbleu: Option<f64>,
    pub hmeteor: Option<f64>,
    pub ter: Option<f64>,
    pub bleu: Option<f64>,
    pub meteor: Option<f64>,
    pub da: Option<f64>,
}

impl ScoreRow {
    pub fn metric(&self, m: Metric) -> Option<f64> {
        match m {
            Metric::Ter => self.ter,
            Metric::Bleu => self.bleu,
            Metric::Meteor => self.meteor,
            Metric::Da => self.da,
            Metric::Hter => self.hter,
            Metric::Hbleu => self.hbleu,
            Metric::Hmeteor => self.hmeteor,
            Metric::KeysPerChar => self.keys_per_char,
            Metric::Petpw => self.petpw,
        }
    }

    /// Whether the row carries post-editing measurements.
    pub fn has_session(&self) -> bool {
        self.pe_time_sec.is_some() && self.petpw.is_some()
    }

    pub fn is_all(&self) -> bool {
        self.annotator_id == ALL
    }
}

impl From<SegmentScores> for ScoreRow {
    fn from(s: SegmentScores) -> Self {
        ScoreRow {
            segment_id: s.segment_id,
            annotator_id: s.annotator_id,
            mt_tokens: s.mt_tokens,
            pe_time_sec: Some(s.pe_time_sec),
            petpw: Some(s.petpw),
            keys_per_char: Some(s.keys_per_char),
            hter: Some(s.hter),
            hbleu: Some(s.hbleu),
            hmeteor: Some(s.hmeteor),
            ter: Some(s.ter),
            bleu: Some(s.bleu),
            meteor: Some(s.meteor),
            da: s.da,
        }
    }
}

/// Per-segment scores for every annotator plus the `ALL` average, in
/// (segment id, annotator id, `ALL` last) order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoresTable {
    rows: Vec<ScoreRow>,
    /// Metric columns present in the source file.
    columns: BTreeSet<Metric>,
}

fn score_one(corpus: &Corpus, seg: &crate::corpus::Segment) -> Result<Vec<ScoreRow>> {
    let reference = score_reference(seg)?;
    let sessions = corpus.sessions_for(&seg.id);
    let per_annotator: Vec<SegmentScores> = sessions
        .iter()
        .map(|s| score_session(seg, s, reference))
        .collect::<Result<_>>()?;
    let mut rows: Vec<ScoreRow> = Vec::with_capacity(per_annotator.len() + 1);
    if per_annotator.is_empty() {
        rows.push(ScoreRow {
            segment_id: seg.id.clone(),
            annotator_id: ALL.to_string(),
            mt_tokens: seg.mt_tokens().len(),
            pe_time_sec: None,
            petpw: None,
            keys_per_char: None,
            hter: None,
            hbleu: None,
            hmeteor: None,
            ter: Some(reference.ter),
            bleu: Some(reference.bleu),
            meteor: Some(reference.meteor),
            da: seg.da,
        });
    } else {
        let all = all_view(&per_annotator)?;
        rows.extend(per_annotator.into_iter().map(ScoreRow::from));
        rows.push(all.into());
    }
    Ok(rows)
}

/// Scores every segment of the corpus. Segments are scored in parallel on
/// `threads` workers (all available cores when `None`); the output order
/// does not depend on scheduling.
pub fn score_corpus(corpus: &Corpus, threads: Option<usize>) -> Result<ScoresTable> {
    let mut segments: Vec<&crate::corpus::Segment> = corpus.segments().iter().collect();
    segments.sort_by(|a, b| a.id.cmp(&b.id));

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let nested: Vec<Vec<ScoreRow>> = pool.install(|| {
        segments
            .par_iter()
            .map(|seg| score_one(corpus, seg))
            .collect::<Result<_>>()
    })?;
    Ok(ScoresTable {
        rows: nested.into_iter().flatten().collect(),
        columns: Metric::ALL.into_iter().collect(),
    })
}

impl ScoresTable {
    pub fn from_rows(rows: Vec<ScoreRow>) -> Self {
        ScoresTable {
            rows,
            columns: Metric::ALL.into_iter().collect(),
        }
    }

    pub fn rows(&self) -> &[ScoreRow] {
        &self.rows
    }

    pub fn has_column(&self, m: Metric) -> bool {
        self.columns.contains(&m)
    }

    /// Individual annotators (excluding `ALL`), sorted.
    pub fn annotators(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self
            .rows
            .iter()
            .filter(|r| !r.is_all())
            .map(|r| r.annotator_id.as_str())
            .collect();
        set.into_iter().map(str::to_string).collect()
    }

    /// Rows for one annotator (or `ALL`) that carry session measurements.
    pub fn rows_for<'a>(&'a self, annotator: &'a str) -> impl Iterator<Item = &'a ScoreRow> + 'a {
        self.rows
            .iter()
            .filter(move |r| r.annotator_id == annotator && r.has_session())
    }

    /// Whether any row of `annotator` has a value for `m`.
    pub fn any_value(&self, annotator: &str, m: Metric) -> bool {
        self.rows_for(annotator).any(|r| r.metric(m).is_some())
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(&ID_COLUMNS.join("\t"));
        for m in Metric::ALL {
            if m != Metric::Da || self.has_column(m) {
                out.push('\t');
                out.push_str(m.column());
            }
        }
        out.push('\n');
        for r in &self.rows {
            let _ = write!(
                out,
                "{}\t{}\t{}\t{}",
                escape(&r.segment_id),
                escape(&r.annotator_id),
                r.mt_tokens,
                cell(r.pe_time_sec)
            );
            for m in Metric::ALL {
                if m != Metric::Da || self.has_column(m) {
                    out.push('\t');
                    out.push_str(&cell(r.metric(m)));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let table = Table::read("scores.tsv", reader)?;
        table.require(&ID_COLUMNS)?;
        let columns: BTreeSet<Metric> = Metric::ALL
            .into_iter()
            .filter(|m| table.has_column(m.column()))
            .collect();
        let mut rows = Vec::new();
        for row in table.rows() {
            let tokens = row.u64("mt_tokens")? as usize;
            if tokens == 0 {
                return Err(row.parse_error("mt_tokens must be positive"));
            }
            rows.push(ScoreRow {
                segment_id: row.text("segment_id"),
                annotator_id: row.text("annotator_id"),
                mt_tokens: tokens,
                pe_time_sec: row.opt_f64("pe_time_sec")?,
                petpw: row.opt_f64("petpw")?,
                keys_per_char: row.opt_f64("keys_per_char")?,
                hter: row.opt_f64("hter")?,
                hbleu: row.opt_f64("hbleu")?,
                hmeteor: row.opt_f64("hmeteor")?,
                ter: row.opt_f64("ter")?,
                bleu: row.opt_f64("bleu")?,
                meteor: row.opt_f64("meteor")?,
                da: row.opt_f64("da")?,
            });
        }
        Ok(ScoresTable { rows, columns })
    }

    pub fn read_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let p = path.as_ref();
        let f = std::fs::File::open(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
        Self::read(std::io::BufReader::new(f))
    }
}
