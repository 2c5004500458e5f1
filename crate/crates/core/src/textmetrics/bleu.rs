use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_N: usize = 4;

fn ngram_counts<T: Hash + Eq>(tokens: &[T], n: usize) -> HashMap<&[T], usize> {
    let mut counts = HashMap::new();
    for gram in tokens.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

/// Sentence-level BLEU against a single reference.
///
/// Higher-order precisions with no clipped match get add-one smoothing on
/// both numerator and denominator. A hypothesis with no unigram match
/// scores zero.
pub fn bleu<T: Hash + Eq>(hyp: &[T], refr: &[T], max_n: usize) -> Result<f64> {
    if refr.is_empty() {
        return Err(Error::EmptyReference);
    }
    if max_n == 0 {
        return Err(Error::InvalidArgument("max_n must be at least 1".into()));
    }
    if hyp.is_empty() {
        return Ok(0.0);
    }

    let mut log_sum = 0.0;
    for n in 1..=max_n {
        let hyp_counts = ngram_counts(hyp, n);
        let ref_counts = ngram_counts(refr, n);
        let total = hyp.len().saturating_sub(n - 1);
        let clipped: usize = hyp_counts
            .iter()
            .map(|(g, &c)| c.min(ref_counts.get(g).copied().unwrap_or(0)))
            .sum();
        let precision = if n == 1 {
            if clipped == 0 {
                return Ok(0.0);
            }
            clipped as f64 / total as f64
        } else if clipped == 0 {
            1.0 / (total as f64 + 1.0)
        } else {
            clipped as f64 / total as f64
        };
        log_sum += precision.ln();
    }

    let brevity = if hyp.len() < refr.len() {
        (1.0 - refr.len() as f64 / hyp.len() as f64).exp()
    } else {
        1.0
    };
    Ok(brevity * (log_sum / max_n as f64).exp())
}
