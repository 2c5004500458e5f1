//! Task-based measurements and per-segment scoring across annotators.

use serde::Serialize;

use crate::corpus::{tokenize, PeSession, Segment};
use crate::error::{Error, Result};
use crate::textmetrics::{bleu, meteor_lite, ter, DEFAULT_MAX_N};

/// Annotator label used for the annotator-averaged view.
pub const ALL: &str = "ALL";

/// Post-editing seconds per MT word.
pub fn petpw(pe_time_sec: f64, mt_token_count: usize) -> Result<f64> {
    if mt_token_count == 0 {
        return Err(Error::EmptySegment);
    }
    Ok(pe_time_sec / mt_token_count as f64)
}

/// Keystrokes per MT character.
pub fn keys_per_char(keystrokes: u64, mt_char_count: usize) -> Result<f64> {
    if mt_char_count == 0 {
        return Err(Error::EmptySegment);
    }
    Ok(keystrokes as f64 / mt_char_count as f64)
}

/// Reference-based scores of the MT output against the independent
/// reference. These do not depend on the annotator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceScores {
    pub ter: f64,
    pub bleu: f64,
    pub meteor: f64,
}

pub fn score_reference(seg: &Segment) -> Result<ReferenceScores> {
    let mt = seg.mt_tokens();
    let reference = seg.reference_tokens();
    Ok(ReferenceScores {
        ter: ter(&mt, &reference)?.score,
        bleu: bleu(&mt, &reference, DEFAULT_MAX_N)?,
        meteor: meteor_lite(&mt, &reference)?.score,
    })
}

/// Every metric value for one (segment, annotator) pair, or for the
/// annotator average when `annotator_id == "ALL"`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentScores {
    pub segment_id: String,
    pub annotator_id: String,
    /// MT token count, the PETpW denominator.
    pub mt_tokens: usize,
    pub pe_time_sec: f64,
    pub petpw: f64,
    pub keys_per_char: f64,
    pub hter: f64,
    pub hbleu: f64,
    pub hmeteor: f64,
    pub ter: f64,
    pub bleu: f64,
    pub meteor: f64,
    pub da: Option<f64>,
}

/// Scores one post-editing session. Human-targeted metrics use the
/// post-edited text as gold; reference metrics use the segment reference.
pub fn score_segment(seg: &Segment, session: &PeSession) -> Result<SegmentScores> {
    let reference = score_reference(seg)?;
    score_session(seg, session, reference)
}

/// Like [`score_segment`] with the reference-based part precomputed.
pub fn score_session(seg: &Segment, session: &PeSession, reference: ReferenceScores) -> Result<SegmentScores> {
    if session.segment_id != seg.id {
        return Err(Error::InvalidArgument(format!(
            "session for `{}` scored against segment `{}`",
            session.segment_id, seg.id
        )));
    }
    let mt = seg.mt_tokens();
    let pe = tokenize(&session.pe_text);
    Ok(SegmentScores {
        segment_id: seg.id.clone(),
        annotator_id: session.annotator_id.clone(),
        mt_tokens: mt.len(),
        pe_time_sec: session.pe_time_sec,
        petpw: petpw(session.pe_time_sec, mt.len())?,
        keys_per_char: keys_per_char(session.keystrokes, seg.mt_char_count())?,
        hter: ter(&mt, &pe)?.score,
        hbleu: bleu(&mt, &pe, DEFAULT_MAX_N)?,
        hmeteor: meteor_lite(&mt, &pe)?.score,
        ter: reference.ter,
        bleu: reference.bleu,
        meteor: reference.meteor,
        da: seg.da,
    })
}

/// Unweighted mean of every metric across the annotators of one segment.
pub fn all_view(scores: &[SegmentScores]) -> Result<SegmentScores> {
    let first = scores
        .first()
        .ok_or_else(|| Error::InvalidArgument("no annotator scores to average".into()))?;
    if let Some(other) = scores.iter().find(|s| s.segment_id != first.segment_id) {
        return Err(Error::InvalidArgument(format!(
            "mixed segments `{}` and `{}`",
            first.segment_id, other.segment_id
        )));
    }
    let mean = |f: fn(&SegmentScores) -> f64| scores.iter().map(f).sum::<f64>() / scores.len() as f64;
    Ok(SegmentScores {
        segment_id: first.segment_id.clone(),
        annotator_id: ALL.to_string(),
        mt_tokens: first.mt_tokens,
        pe_time_sec: mean(|s| s.pe_time_sec),
        petpw: mean(|s| s.petpw),
        keys_per_char: mean(|s| s.keys_per_char),
        hter: mean(|s| s.hter),
        hbleu: mean(|s| s.hbleu),
        hmeteor: mean(|s| s.hmeteor),
        ter: mean(|s| s.ter),
        bleu: mean(|s| s.bleu),
        meteor: mean(|s| s.meteor),
        da: first.da,
    })
}
