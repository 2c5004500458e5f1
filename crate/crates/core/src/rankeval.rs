//! Rankings induced by metrics and scores of how well they track effort:
//! Spearman's ρ, SATRA, DeltaAVG and tail overlap.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which end of a metric means more post-editing effort.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarity {
    /// Edit rates, times, keystrokes.
    HigherIsMoreEffort,
    /// Similarity and adequacy scores.
    LowerIsMoreEffort,
}

impl Polarity {
    /// Maps a raw value onto the effort axis (larger = more effort).
    pub fn orient(self, value: f64) -> f64 {
        match self {
            Polarity::HigherIsMoreEffort => value,
            Polarity::LowerIsMoreEffort => -value,
        }
    }
}

/// Ranks segments from least to most effort. Ties are broken by segment id.
pub fn rank_by<S: AsRef<str>>(values: &[(S, f64)], polarity: Polarity) -> Result<Vec<String>> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("nothing to rank".into()));
    }
    if let Some((id, _)) = values.iter().find(|(_, v)| v.is_nan()) {
        return Err(Error::NanValue(id.as_ref().to_string()));
    }
    let mut keyed: Vec<(f64, &str)> = values
        .iter()
        .map(|(id, v)| (polarity.orient(*v), id.as_ref()))
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    Ok(keyed.into_iter().map(|(_, id)| id.to_string()).collect())
}

/// Fractional ranks (1-based; ties share the average of their positions).
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Pearson product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::InvalidArgument("vectors differ in length".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("constant vector".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Spearman's rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "vectors differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::InvalidArgument(
            "Spearman correlation needs at least three pairs".into(),
        ));
    }
    if x.iter().chain(y).any(|v| v.is_nan()) {
        return Err(Error::UndefinedCorrelation("NaN input".into()));
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

/// A ranking together with the measured time and MT length of each ranked
/// segment. Position `j` holds the `j`-th easiest segment according to the
/// ranking under evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankInstance {
    segment_ids: Vec<String>,
    times: Vec<f64>,
    lengths: Vec<usize>,
}

impl RankInstance {
    pub fn new(segment_ids: Vec<String>, times: Vec<f64>, lengths: Vec<usize>) -> Result<Self> {
        let n = segment_ids.len();
        if times.len() != n || lengths.len() != n {
            return Err(Error::InvalidArgument(
                "ids, times and lengths must have equal length".into(),
            ));
        }
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "a ranking needs at least two segments (got {n})"
            )));
        }
        if lengths.contains(&0) {
            return Err(Error::EmptySegment);
        }
        if times.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
            return Err(Error::DegenerateTimes("negative or non-finite time".into()));
        }
        let mut seen = HashSet::with_capacity(n);
        if let Some(dup) = segment_ids.iter().find(|id| !seen.insert(id.as_str())) {
            return Err(Error::InvalidArgument(format!(
                "segment `{dup}` appears twice in the ranking"
            )));
        }
        Ok(RankInstance {
            segment_ids,
            times,
            lengths,
        })
    }

    pub fn len(&self) -> usize {
        self.segment_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segment_ids.is_empty()
    }

    pub fn segment_ids(&self) -> &[String] {
        &self.segment_ids
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }
}

/// Split-averaged time-ratio assessment.
///
/// For every split point, divides the time-per-word of the segments ranked
/// above the split by that of the segments below it, and averages the
/// ratios. About 1 for a random ranking, below 1 when easy segments are
/// ranked first. Lower is better.
pub fn satra(inst: &RankInstance) -> Result<f64> {
    let n = inst.len();
    let total_time: f64 = inst.times.iter().sum();
    let total_len: usize = inst.lengths.iter().sum();
    let (mut head_time, mut head_len) = (0.0, 0usize);
    let mut sum = 0.0;
    for j in 0..n - 1 {
        head_time += inst.times[j];
        head_len += inst.lengths[j];
        let tail_time = total_time - head_time;
        if !(tail_time > 0.0) {
            return Err(Error::DegenerateTimes(format!(
                "no post-editing time after position {}",
                j + 1
            )));
        }
        let head_rate = head_time / head_len as f64;
        let tail_rate = tail_time / (total_len - head_len) as f64;
        sum += head_rate / tail_rate;
    }
    Ok(sum / (n - 1) as f64)
}

/// DeltaAVG of a ranking over `quantiles` equal parts; any remainder
/// segments are added to the last part. Positive when segments with high
/// gold values are ranked first.
pub fn delta_avg<S: AsRef<str>>(ranking: &[S], gold: &std::collections::HashMap<String, f64>, quantiles: usize) -> Result<f64> {
    let n = ranking.len();
    if quantiles < 2 {
        return Err(Error::InvalidArgument("need at least two quantiles".into()));
    }
    if quantiles > n {
        return Err(Error::InvalidArgument(format!(
            "{quantiles} quantiles requested for {n} segments"
        )));
    }
    let values: Vec<f64> = ranking
        .iter()
        .map(|id| {
            gold.get(id.as_ref())
                .copied()
                .ok_or_else(|| Error::InvalidArgument(format!("no gold value for `{}`", id.as_ref())))
        })
        .collect::<Result<_>>()?;
    let overall = values.iter().sum::<f64>() / n as f64;
    let size = n / quantiles;
    let mut total = 0.0;
    for k in 1..quantiles {
        let head = &values[..k * size];
        total += head.iter().sum::<f64>() / head.len() as f64 - overall;
    }
    Ok(total / (quantiles - 1) as f64)
}

/// Size of the intersection of the first `c` ids of both rankings, for each
/// cut `c`. Pass reversed rankings to inspect the high-effort tail.
pub fn tail_overlap<S: AsRef<str>>(gold_rank: &[S], metric_rank: &[S], cuts: &[usize]) -> Result<Vec<usize>> {
    let gold_set: HashSet<&str> = gold_rank.iter().map(AsRef::as_ref).collect();
    let metric_set: HashSet<&str> = metric_rank.iter().map(AsRef::as_ref).collect();
    if gold_rank.len() != metric_rank.len()
        || gold_set.len() != gold_rank.len()
        || gold_set != metric_set
    {
        return Err(Error::MismatchedIds);
    }
    let n = gold_rank.len();
    cuts.iter()
        .map(|&c| {
            if c > n {
                return Err(Error::InvalidArgument(format!(
                    "cut {c} exceeds ranking size {n}"
                )));
            }
            let top: HashSet<&str> = gold_rank[..c].iter().map(AsRef::as_ref).collect();
            Ok(metric_rank[..c]
                .iter()
                .filter(|id| top.contains(id.as_ref()))
                .count())
        })
        .collect()
}
