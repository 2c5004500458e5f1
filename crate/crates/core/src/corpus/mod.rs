//! Evaluation corpus: segments, post-editing sessions and the annotator roster.
//!
//! Segments and sessions are read from two tab-separated files:
//!
//! ```text
//! segments.tsv: id  system_id  source  mt  reference  [da]
//! sessions.tsv: segment_id  annotator_id  pe_text  pe_time_sec  keystrokes
//! ```
//!
//! The `da` column may be absent altogether or left empty per row. A loaded
//! [`Corpus`] is immutable.

mod tokenize;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::io::BufRead;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tsv::{escape, Table};

pub use tokenize::{tokenize, TokenList};

pub const SEGMENT_COLUMNS: [&str; 5] = ["id", "system_id", "source", "mt", "reference"];
pub const SESSION_COLUMNS: [&str; 5] = [
    "segment_id",
    "annotator_id",
    "pe_text",
    "pe_time_sec",
    "keystrokes",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub id: String,
    pub system_id: String,
    pub source: String,
    pub mt: String,
    pub reference: String,
    /// Standardized adequacy score, read as given.
    pub da: Option<f64>,
}

impl Segment {
    pub fn mt_tokens(&self) -> TokenList {
        tokenize(&self.mt)
    }

    pub fn reference_tokens(&self) -> TokenList {
        tokenize(&self.reference)
    }

    /// Unicode scalar values in the raw MT string, ignoring surrounding
    /// whitespace.
    pub fn mt_char_count(&self) -> usize {
        self.mt.trim().chars().count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeSession {
    pub segment_id: String,
    pub annotator_id: String,
    pub pe_text: String,
    pub pe_time_sec: f64,
    pub keystrokes: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    segments: Vec<Segment>,
    sessions: Vec<PeSession>,
    annotators: BTreeSet<String>,
    index: HashMap<String, usize>,
}

/// A non-fatal finding about corpus completeness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    MissingSession { segment: String, annotator: String },
    ZeroTime { segment: String, annotator: String },
    MissingDa { segment: String },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::MissingSession { segment, annotator } => {
                write!(f, "no session for segment `{segment}` by annotator `{annotator}`")
            }
            Warning::ZeroTime { segment, annotator } => {
                write!(f, "zero post-editing time for segment `{segment}` by annotator `{annotator}`")
            }
            Warning::MissingDa { segment } => write!(f, "segment `{segment}` has no DA score"),
        }
    }
}

pub type ValidationReport = Vec<Warning>;

impl Corpus {
    /// Builds a corpus from in-memory parts, enforcing the same invariants as
    /// [`load_corpus`].
    pub fn new(segments: Vec<Segment>, sessions: Vec<PeSession>) -> Result<Self> {
        let mut index = HashMap::with_capacity(segments.len());
        for (i, seg) in segments.iter().enumerate() {
            check_segment(seg).map_err(|m| Error::InvalidArgument(format!("segment `{}`: {m}", seg.id)))?;
            if index.insert(seg.id.clone(), i).is_some() {
                return Err(Error::DuplicateSegment(seg.id.clone()));
            }
        }
        let mut seen = HashSet::new();
        let mut annotators = BTreeSet::new();
        for s in &sessions {
            if !index.contains_key(&s.segment_id) {
                return Err(Error::UnknownSegment(s.segment_id.clone()));
            }
            check_session(s).map_err(|m| {
                Error::InvalidArgument(format!(
                    "session `{}`/`{}`: {m}",
                    s.segment_id, s.annotator_id
                ))
            })?;
            if !seen.insert((s.segment_id.as_str(), s.annotator_id.as_str())) {
                return Err(Error::DuplicateSession {
                    segment: s.segment_id.clone(),
                    annotator: s.annotator_id.clone(),
                });
            }
            annotators.insert(s.annotator_id.clone());
        }
        Ok(Corpus {
            segments,
            sessions,
            annotators,
            index,
        })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn sessions(&self) -> &[PeSession] {
        &self.sessions
    }

    pub fn annotators(&self) -> &BTreeSet<String> {
        &self.annotators
    }

    pub fn segment(&self, id: &str) -> Option<&Segment> {
        self.index.get(id).map(|&i| &self.segments[i])
    }

    /// Sessions for one segment, sorted by annotator id.
    pub fn sessions_for(&self, segment_id: &str) -> Vec<&PeSession> {
        let mut out: Vec<&PeSession> = self
            .sessions
            .iter()
            .filter(|s| s.segment_id == segment_id)
            .collect();
        out.sort_by(|a, b| a.annotator_id.cmp(&b.annotator_id));
        out
    }

    pub fn has_da_column(&self) -> bool {
        self.segments.iter().any(|s| s.da.is_some())
    }

    /// Serializes segments in the `segments.tsv` layout.
    pub fn segments_tsv(&self) -> String {
        let mut out = String::from("id\tsystem_id\tsource\tmt\treference\tda\n");
        for s in &self.segments {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                escape(&s.id),
                escape(&s.system_id),
                escape(&s.source),
                escape(&s.mt),
                escape(&s.reference),
                crate::tsv::cell(s.da)
            );
        }
        out
    }

    /// Serializes sessions in the `sessions.tsv` layout.
    pub fn sessions_tsv(&self) -> String {
        let mut out = SESSION_COLUMNS.join("\t");
        out.push('\n');
        for s in &self.sessions {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                escape(&s.segment_id),
                escape(&s.annotator_id),
                escape(&s.pe_text),
                s.pe_time_sec,
                s.keystrokes
            );
        }
        out
    }
}

fn check_segment(seg: &Segment) -> std::result::Result<(), &'static str> {
    if seg.id.trim().is_empty() {
        return Err("empty id");
    }
    if seg.mt.trim().is_empty() {
        return Err("empty MT text");
    }
    if seg.reference.trim().is_empty() {
        return Err("empty reference");
    }
    if seg.mt_tokens().is_empty() {
        return Err("MT text has no tokens");
    }
    Ok(())
}

fn check_session(s: &PeSession) -> std::result::Result<(), &'static str> {
    if s.annotator_id.trim().is_empty() {
        return Err("empty annotator id");
    }
    if s.pe_text.trim().is_empty() {
        return Err("empty post-edited text");
    }
    if !(s.pe_time_sec >= 0.0) || !s.pe_time_sec.is_finite() {
        return Err("negative or non-finite time");
    }
    Ok(())
}

/// Reads and validates a corpus from `segments.tsv` and `sessions.tsv`
/// streams. Segment row order is preserved.
pub fn load_corpus<S: BufRead, P: BufRead>(segments_source: S, sessions_source: P) -> Result<Corpus> {
    let seg_table = Table::read("segments.tsv", segments_source)?;
    seg_table.require(&SEGMENT_COLUMNS)?;
    let mut segments = Vec::new();
    let mut ids = HashSet::new();
    for row in seg_table.rows() {
        let seg = Segment {
            id: row.text("id"),
            system_id: row.text("system_id"),
            source: row.text("source"),
            mt: row.text("mt"),
            reference: row.text("reference"),
            da: row.opt_f64("da")?,
        };
        if !ids.insert(seg.id.clone()) {
            return Err(Error::DuplicateSegment(seg.id));
        }
        check_segment(&seg).map_err(|m| row.parse_error(m))?;
        segments.push(seg);
    }

    let ses_table = Table::read("sessions.tsv", sessions_source)?;
    ses_table.require(&SESSION_COLUMNS)?;
    let mut sessions = Vec::new();
    for row in ses_table.rows() {
        let s = PeSession {
            segment_id: row.text("segment_id"),
            annotator_id: row.text("annotator_id"),
            pe_text: row.text("pe_text"),
            pe_time_sec: row.f64("pe_time_sec")?,
            keystrokes: row.u64("keystrokes")?,
        };
        if !ids.contains(&s.segment_id) {
            return Err(Error::UnknownSegment(s.segment_id));
        }
        check_session(&s).map_err(|m| row.parse_error(m))?;
        sessions.push(s);
    }
    Corpus::new(segments, sessions)
}

/// Loads a corpus from two file paths.
pub fn load_corpus_files(
    segments: impl AsRef<std::path::Path>,
    sessions: impl AsRef<std::path::Path>,
) -> Result<Corpus> {
    let open = |p: &std::path::Path| {
        std::fs::File::open(p)
            .map(std::io::BufReader::new)
            .map_err(|e| Error::Io(format!("{}: {e}", p.display())))
    };
    load_corpus(open(segments.as_ref())?, open(sessions.as_ref())?)
}

/// Lists completeness problems. The report is empty iff every
/// (segment, annotator) pair has a session with non-zero time and every
/// segment carries a DA score.
pub fn validate_corpus(c: &Corpus) -> ValidationReport {
    let mut present: HashMap<(&str, &str), &PeSession> = HashMap::new();
    for s in &c.sessions {
        present.insert((s.segment_id.as_str(), s.annotator_id.as_str()), s);
    }
    let mut report = Vec::new();
    for seg in &c.segments {
        if seg.da.is_none() {
            report.push(Warning::MissingDa {
                segment: seg.id.clone(),
            });
        }
        for ann in &c.annotators {
            match present.get(&(seg.id.as_str(), ann.as_str())) {
                None => report.push(Warning::MissingSession {
                    segment: seg.id.clone(),
                    annotator: ann.clone(),
                }),
                Some(s) if s.pe_time_sec == 0.0 => report.push(Warning::ZeroTime {
                    segment: seg.id.clone(),
                    annotator: ann.clone(),
                }),
                Some(_) => {}
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SEGS: &str = "id\tsystem_id\tsource\tmt\treference\tda\n\
        s1\tsysA\tHallo Welt\tHello world\tHello, world!\t0.5\n\
        s2\tsysB\tGuten Tag\tGood day\tGood afternoon\t\n";
    const SESSIONS_HEADER: &str = "segment_id\tannotator_id\tpe_text\tpe_time_sec\tkeystrokes\n";

    fn load(segs: &str, sessions: &str) -> Result<Corpus> {
        load_corpus(segs.as_bytes(), sessions.as_bytes())
    }

    #[test]
    fn minimal_corpus() {
        let c = load(SEGS, SESSIONS_HEADER).unwrap();
        assert_eq!(c.segments().len(), 2);
        assert!(c.sessions().is_empty());
        assert!(c.annotators().is_empty());
        assert_eq!(c.segments()[0].id, "s1");
        assert_eq!(c.segments()[0].da, Some(0.5));
        assert_eq!(c.segments()[1].da, None);
    }

    #[test]
    fn duplicate_segment_id() {
        let segs = "id\tsystem_id\tsource\tmt\treference\n\
            s1\ta\tx\ty\tz\n\
            s1\ta\tx\ty\tz\n";
        assert_eq!(
            load(segs, SESSIONS_HEADER).unwrap_err(),
            Error::DuplicateSegment("s1".into())
        );
    }

    #[test]
    fn bad_time_names_row() {
        let sessions = format!("{SESSIONS_HEADER}s1\tA\tHello world\t12\t3\ns2\tA\tGood day\tabc\t4\n");
        match load(SEGS, &sessions).unwrap_err() {
            Error::Parse { file, line, message } => {
                assert_eq!(file, "sessions.tsv");
                assert_eq!(line, 3);
                assert!(message.contains("pe_time_sec"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn bad_keystrokes_and_da() {
        let sessions = format!("{SESSIONS_HEADER}s1\tA\tHello world\t12\t-3\n");
        assert!(matches!(load(SEGS, &sessions), Err(Error::Parse { line: 2, .. })));
        let segs = "id\tsystem_id\tsource\tmt\treference\tda\ns1\ta\tx\ty\tz\thigh\n";
        assert!(matches!(load(segs, SESSIONS_HEADER), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn missing_column() {
        let segs = "id\tsystem_id\tsource\treference\ns1\ta\tx\tz\n";
        assert_eq!(
            load(segs, SESSIONS_HEADER).unwrap_err(),
            Error::MissingColumn {
                file: "segments.tsv".into(),
                column: "mt".into()
            }
        );
        assert!(matches!(
            load(SEGS, "segment_id\tannotator_id\tpe_text\tpe_time_sec\n"),
            Err(Error::MissingColumn { column, .. }) if column == "keystrokes"
        ));
    }

    #[test]
    fn unknown_segment_and_duplicate_session() {
        let sessions = format!("{SESSIONS_HEADER}s9\tA\tx\t1\t1\n");
        assert_eq!(
            load(SEGS, &sessions).unwrap_err(),
            Error::UnknownSegment("s9".into())
        );
        let sessions = format!("{SESSIONS_HEADER}s1\tA\tx\t1\t1\ns1\tA\ty\t2\t2\n");
        assert!(matches!(
            load(SEGS, &sessions),
            Err(Error::DuplicateSession { .. })
        ));
    }

    #[test]
    fn empty_mt_rejected() {
        let segs = "id\tsystem_id\tsource\tmt\treference\ns1\ta\tx\t  \tz\n";
        assert!(matches!(load(segs, SESSIONS_HEADER), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn validation_warnings() {
        let segs = "id\tsystem_id\tsource\tmt\treference\tda\ns1\ta\tx\ty\tz\t0.1\n";
        let sessions = format!("{SESSIONS_HEADER}s1\tA\ty\t3\t1\n");
        let mut c = load(segs, &sessions).unwrap();
        assert!(validate_corpus(&c).is_empty());

        let sessions = format!("{SESSIONS_HEADER}s1\tA\ty\t3\t1\ns1\tB\ty\t0\t0\n");
        c = load(segs, &sessions).unwrap();
        assert_eq!(
            validate_corpus(&c),
            vec![Warning::ZeroTime {
                segment: "s1".into(),
                annotator: "B".into()
            }]
        );

        // annotator B only appears on s2, so s1×B is missing
        let segs2 = format!("{segs}s2\ta\tx\ty\tz\t0.2\n");
        let sessions = format!("{SESSIONS_HEADER}s1\tA\ty\t3\t1\ns2\tA\ty\t3\t1\ns2\tB\ty\t3\t1\n");
        c = load(&segs2, &sessions).unwrap();
        let before = c.clone();
        assert_eq!(
            validate_corpus(&c),
            vec![Warning::MissingSession {
                segment: "s1".into(),
                annotator: "B".into()
            }]
        );
        assert_eq!(c, before);
    }

    #[test]
    fn escaped_fields_round_trip() {
        let segs = "id\tsystem_id\tsource\tmt\treference\tda\ns1\ta\tline\\none\ttab\\there\tz\t\n";
        let c = load(segs, SESSIONS_HEADER).unwrap();
        assert_eq!(c.segments()[0].source, "line\none");
        assert_eq!(c.segments()[0].mt, "tab\there");
        assert_eq!(c.segments_tsv(), segs);
    }

    #[test]
    fn char_count_ignores_outer_whitespace() {
        let seg = Segment {
            id: "s".into(),
            system_id: String::new(),
            source: String::new(),
            mt: "  Größe ok \n".into(),
            reference: "x".into(),
            da: None,
        };
        assert_eq!(seg.mt_char_count(), 8);
    }

    fn text() -> impl Strategy<Value = String> {
        "[a-zA-Z0-9 ,.!?'\\t\\n\\\\éß]{0,12}[a-z]"
    }

    proptest! {
        #[test]
        fn serialize_then_load_is_identity(
            rows in proptest::collection::vec((text(), text(), text(), proptest::option::of(-3.0f64..3.0)), 1..5),
            times in proptest::collection::vec((0.0f64..500.0, 0u64..1000, text()), 0..5),
        ) {
            let segments: Vec<Segment> = rows.iter().enumerate().map(|(i, (src, mt, r, da))| Segment {
                id: format!("seg{i}"),
                system_id: "sys".into(),
                source: src.clone(),
                mt: mt.clone(),
                reference: r.clone(),
                da: *da,
            }).collect();
            let sessions: Vec<PeSession> = times.iter().enumerate().map(|(i, (t, k, pe))| PeSession {
                segment_id: format!("seg{}", i % segments.len()),
                annotator_id: format!("ANN{i}"),
                pe_text: pe.clone(),
                pe_time_sec: *t,
                keystrokes: *k,
            }).collect();
            let c = Corpus::new(segments, sessions).unwrap();
            let back = load_corpus(c.segments_tsv().as_bytes(), c.sessions_tsv().as_bytes()).unwrap();
            prop_assert_eq!(&back, &c);
            for s in back.segments() {
                prop_assert!(s.mt_tokens().len() >= 1);
            }
        }
    }
}
