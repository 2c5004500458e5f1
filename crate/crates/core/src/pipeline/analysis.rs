use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use super::scores::{ScoreRow, ScoresTable};
use super::Metric;
use crate::error::{Error, Result};
use crate::rankeval::{rank_by, satra, spearman, RankInstance};
use crate::stats::{weighted_mean_std, williams_test};
use crate::taskmetrics::ALL;

/// Session rows of one annotator with the values of `m`, or `None` when a
/// row lacks the value.
fn column(rows: &[&ScoreRow], m: Metric) -> Option<Vec<f64>> {
    rows.iter().map(|r| r.metric(m)).collect()
}

fn oriented(values: &[f64], m: Metric) -> Vec<f64> {
    values.iter().map(|v| m.polarity().orient(*v)).collect()
}

/// SATRA of the ranking induced by `values` (one per row of `rows`), scored
/// with the given per-row times.
fn satra_of(rows: &[&ScoreRow], values: &[f64], m: Metric, times: &[f64]) -> Result<f64> {
    let keyed: Vec<(&str, f64)> = rows
        .iter()
        .zip(values)
        .map(|(r, v)| (r.segment_id.as_str(), *v))
        .collect();
    let ranking = rank_by(&keyed, m.polarity())?;
    let by_id: HashMap<&str, usize> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.segment_id.as_str(), i))
        .collect();
    let order: Vec<usize> = ranking.iter().map(|id| by_id[id.as_str()]).collect();
    let inst = RankInstance::new(
        ranking,
        order.iter().map(|&i| times[i]).collect(),
        order.iter().map(|&i| rows[i].mt_tokens).collect(),
    )?;
    satra(&inst)
}

/// Checks that a candidate metric can be evaluated; returns a note when it
/// has to be skipped.
fn usable(table: &ScoresTable, rows: &[&ScoreRow], annotator: &str, m: Metric) -> Result<Option<String>> {
    if !table.has_column(m) {
        if m == Metric::Da {
            return Ok(Some("DA column absent; DA rows omitted".into()));
        }
        return Err(Error::MissingMetric(m.name().into()));
    }
    if rows.iter().any(|r| r.metric(m).is_none()) {
        return Ok(Some(format!(
            "{annotator}: {m} missing for some segments; {m} rows omitted"
        )));
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEvalRow {
    pub annotator: String,
    pub metric: Metric,
    pub rho: f64,
    pub satra: f64,
    /// Whether the Williams test finds no significant difference between
    /// this metric and the best-correlated one.
    pub no_sig_diff_from_best: bool,
    /// One-tailed p-value that this metric's ρ exceeds the other metric's.
    pub williams_p: BTreeMap<Metric, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEvalTable {
    pub rows: Vec<RankEvalRow>,
    pub notes: Vec<String>,
}

impl RankEvalTable {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("annotator\tmetric\trho\tsatra\tno_sig_diff_from_best");
        for m in Metric::CANDIDATES {
            let _ = write!(out, "\tp_vs_{}", m.name());
        }
        out.push('\n');
        for r in &self.rows {
            let _ = write!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                r.annotator, r.metric, r.rho, r.satra, r.no_sig_diff_from_best
            );
            for m in Metric::CANDIDATES {
                out.push('\t');
                if let Some(p) = r.williams_p.get(&m) {
                    let _ = write!(out, "{p}");
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn row(&self, annotator: &str, m: Metric) -> Option<&RankEvalRow> {
        self.rows
            .iter()
            .find(|r| r.annotator == annotator && r.metric == m)
    }
}

/// Spearman's ρ and SATRA of every metric against the annotator's measured
/// PETpW, with the PETpW oracle as the last row, plus pairwise Williams
/// tests between metrics.
pub fn rank_eval(table: &ScoresTable, annotator: &str, williams_alpha: f64) -> Result<RankEvalTable> {
    let rows: Vec<&ScoreRow> = table.rows_for(annotator).collect();
    if rows.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "annotator `{annotator}` has {} scored segments; at least 3 are needed",
            rows.len()
        )));
    }
    let gold = column(&rows, Metric::Petpw).ok_or_else(|| Error::MissingMetric("PETPW".into()))?;
    let times: Vec<f64> = rows.iter().map(|r| r.pe_time_sec.unwrap_or_default()).collect();

    let mut notes = Vec::new();
    let mut evaluated: Vec<(Metric, Vec<f64>, f64, f64)> = Vec::new();
    for m in Metric::CANDIDATES.into_iter().chain([Metric::Petpw]) {
        if let Some(note) = usable(table, &rows, annotator, m)? {
            notes.push(note);
            continue;
        }
        let values = column(&rows, m).expect("checked by usable");
        let effort = oriented(&values, m);
        let rho = match spearman(&effort, &gold) {
            Ok(r) => r,
            Err(Error::UndefinedCorrelation(why)) => {
                notes.push(format!("{annotator}: {m} has undefined correlation ({why}); row omitted"));
                continue;
            }
            Err(e) => return Err(e),
        };
        let s = satra_of(&rows, &values, m, &times)?;
        evaluated.push((m, effort, rho, s));
    }

    let candidates: Vec<&(Metric, Vec<f64>, f64, f64)> =
        evaluated.iter().filter(|e| e.0 != Metric::Petpw).collect();
    let mut pvalues: HashMap<(Metric, Metric), f64> = HashMap::new();
    if rows.len() < 4 {
        notes.push(format!(
            "{annotator}: Williams test needs at least 4 segments; no difference is treated as significant"
        ));
    }
    for a in &candidates {
        for b in &candidates {
            if a.0 == b.0 {
                continue;
            }
            let Ok(r12) = spearman(&a.1, &b.1) else { continue };
            if let Ok(w) = williams_test(r12, a.2, b.2, rows.len()) {
                pvalues.insert((a.0, b.0), w.p_one_tailed);
            }
        }
    }
    let best = candidates
        .iter()
        .fold(None::<&(Metric, Vec<f64>, f64, f64)>, |acc, e| match acc {
            Some(b) if b.2 >= e.2 => Some(b),
            _ => Some(e),
        })
        .map(|e| e.0);

    let rows_out = evaluated
        .iter()
        .map(|(m, _, rho, s)| {
            let williams_p: BTreeMap<Metric, f64> = Metric::CANDIDATES
                .into_iter()
                .filter_map(|other| pvalues.get(&(*m, other)).map(|p| (other, *p)))
                .collect();
            let no_sig_diff_from_best = match best {
                Some(b) if b != *m && *m != Metric::Petpw => pvalues
                    .get(&(b, *m))
                    .is_none_or(|p| *p >= williams_alpha),
                _ => false,
            };
            RankEvalRow {
                annotator: annotator.to_string(),
                metric: *m,
                rho: *rho,
                satra: *s,
                no_sig_diff_from_best,
                williams_p,
            }
        })
        .collect();
    Ok(RankEvalTable {
        rows: rows_out,
        notes,
    })
}

/// Gold PETpW for one annotator: per segment, the mean PETpW of all other
/// annotators who post-edited it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LooGold {
    pub annotator_id: String,
    pub gold_petpw: BTreeMap<String, f64>,
}

pub fn loo_gold(table: &ScoresTable) -> Result<Vec<LooGold>> {
    let annotators = table.annotators();
    if annotators.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "leave-one-out needs at least two annotators (found {})",
            annotators.len()
        )));
    }
    let mut by_segment: BTreeMap<&str, Vec<(&str, f64)>> = BTreeMap::new();
    for r in table.rows().iter().filter(|r| !r.is_all() && r.has_session()) {
        by_segment
            .entry(r.segment_id.as_str())
            .or_default()
            .push((r.annotator_id.as_str(), r.petpw.unwrap_or_default()));
    }
    Ok(annotators
        .iter()
        .map(|ann| {
            let gold_petpw = by_segment
                .iter()
                .filter(|(_, v)| v.iter().any(|(a, _)| a == ann))
                .filter_map(|(seg, v)| {
                    let others: Vec<f64> = v.iter().filter(|(a, _)| a != ann).map(|(_, p)| *p).collect();
                    (!others.is_empty())
                        .then(|| (seg.to_string(), others.iter().sum::<f64>() / others.len() as f64))
                })
                .collect();
            LooGold {
                annotator_id: ann.clone(),
                gold_petpw,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LooRow {
    pub annotator: String,
    pub metric: Metric,
    pub rho: f64,
    pub satra: f64,
}

/// Scores each annotator's own metrics against the leave-one-out gold.
/// Returns the table rows and notes about omitted metrics.
pub fn leave_one_out(table: &ScoresTable) -> Result<(Vec<LooRow>, Vec<String>)> {
    let mut out = Vec::new();
    let mut notes = Vec::new();
    for gold in loo_gold(table)? {
        let ann = gold.annotator_id.as_str();
        let rows: Vec<&ScoreRow> = table
            .rows_for(ann)
            .filter(|r| gold.gold_petpw.contains_key(&r.segment_id))
            .collect();
        if rows.len() < 3 {
            notes.push(format!("{ann}: fewer than 3 segments shared with other annotators; skipped"));
            continue;
        }
        let gold_values: Vec<f64> = rows.iter().map(|r| gold.gold_petpw[&r.segment_id]).collect();
        let gold_times: Vec<f64> = rows
            .iter()
            .zip(&gold_values)
            .map(|(r, g)| g * r.mt_tokens as f64)
            .collect();
        for m in Metric::LEAVE_ONE_OUT {
            if let Some(note) = usable(table, &rows, ann, m)? {
                notes.push(note);
                continue;
            }
            let values = column(&rows, m).expect("checked by usable");
            let rho = match spearman(&oriented(&values, m), &gold_values) {
                Ok(r) => r,
                Err(Error::UndefinedCorrelation(why)) => {
                    notes.push(format!("{ann}: {m} has undefined leave-one-out correlation ({why}); row omitted"));
                    continue;
                }
                Err(e) => return Err(e),
            };
            out.push(LooRow {
                annotator: ann.to_string(),
                metric: m,
                rho,
                satra: satra_of(&rows, &values, m, &gold_times)?,
            });
        }
    }
    Ok((out, notes))
}

pub fn loo_tsv(rows: &[LooRow]) -> String {
    let mut out = String::from("annotator\tmetric\trho\tsatra\n");
    for r in rows {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", r.annotator, r.metric, r.rho, r.satra);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Least-effort end of the rankings.
    Best,
    /// Most-effort end.
    Worst,
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "best" => Ok(Side::Best),
            "worst" => Ok(Side::Worst),
            other => Err(Error::InvalidArgument(format!("unknown tail side `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailSpec {
    pub side: Side,
    pub max_cut: usize,
    pub step: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailRow {
    pub cut: usize,
    pub metric: Metric,
    pub overlap: usize,
}

/// Overlap between the tails of the PETpW ranking and each metric's ranking
/// at cuts `step, 2·step, …, max_cut`.
pub fn tails(table: &ScoresTable, annotator: &str, spec: TailSpec) -> Result<(Vec<TailRow>, Vec<String>)> {
    if spec.step == 0 {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    let rows: Vec<&ScoreRow> = table.rows_for(annotator).collect();
    if spec.max_cut > rows.len() {
        return Err(Error::InvalidArgument(format!(
            "cut {} exceeds the {} scored segments",
            spec.max_cut,
            rows.len()
        )));
    }
    let ranking_of = |m: Metric| -> Result<Vec<String>> {
        let keyed: Vec<(&str, f64)> = rows
            .iter()
            .map(|r| (r.segment_id.as_str(), r.metric(m).unwrap_or_default()))
            .collect();
        let mut ranking = rank_by(&keyed, m.polarity())?;
        if spec.side == Side::Worst {
            ranking.reverse();
        }
        Ok(ranking)
    };
    let gold = ranking_of(Metric::Petpw)?;
    let cuts: Vec<usize> = (1..=spec.max_cut / spec.step).map(|k| k * spec.step).collect();

    let mut notes = Vec::new();
    let mut per_metric = Vec::new();
    for m in Metric::ALL {
        if let Some(note) = usable(table, &rows, annotator, m)? {
            notes.push(note);
            continue;
        }
        let overlaps = crate::rankeval::tail_overlap(&gold, &ranking_of(m)?, &cuts)?;
        per_metric.push((m, overlaps));
    }
    let mut out = Vec::new();
    for (k, &cut) in cuts.iter().enumerate() {
        for (m, overlaps) in &per_metric {
            out.push(TailRow {
                cut,
                metric: *m,
                overlap: overlaps[k],
            });
        }
    }
    Ok((out, notes))
}

pub fn tails_tsv(rows: &[TailRow]) -> String {
    let mut out = String::from("cut\tmetric\toverlap\n");
    for r in rows {
        let _ = writeln!(out, "{}\t{}\t{}", r.cut, r.metric, r.overlap);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsRow {
    pub annotator: String,
    pub metric: Metric,
    pub mean: f64,
    pub std: f64,
    pub segments: usize,
}

/// Mean and standard deviation of every metric per annotator and for `ALL`,
/// weighted by MT token count.
pub fn stats_table(table: &ScoresTable) -> Result<Vec<StatsRow>> {
    let mut groups = table.annotators();
    groups.push(ALL.to_string());
    let mut out = Vec::new();
    for ann in &groups {
        let rows: Vec<&ScoreRow> = table.rows_for(ann).collect();
        if rows.is_empty() {
            continue;
        }
        for m in Metric::ALL {
            let pairs: Vec<(f64, f64)> = rows
                .iter()
                .filter_map(|r| r.metric(m).map(|v| (v, r.mt_tokens as f64)))
                .collect();
            if pairs.is_empty() {
                continue;
            }
            let (values, weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let (mean, std) = weighted_mean_std(&values, &weights)?;
            out.push(StatsRow {
                annotator: ann.clone(),
                metric: m,
                mean,
                std,
                segments: values.len(),
            });
        }
    }
    Ok(out)
}

pub fn stats_tsv(rows: &[StatsRow]) -> String {
    let mut out = String::from("annotator\tmetric\tmean\tstd\tsegments\n");
    for r in rows {
        let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}", r.annotator, r.metric, r.mean, r.std, r.segments);
    }
    out
}

/// PETpW samples of each individual annotator.
pub fn petpw_by_annotator(table: &ScoresTable) -> BTreeMap<String, Vec<f64>> {
    table
        .annotators()
        .into_iter()
        .map(|a| {
            let v: Vec<f64> = table.rows_for(&a).filter_map(|r| r.petpw).collect();
            (a, v)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterRow {
    pub segment_id: String,
    pub annotator: String,
    pub metric: Metric,
    pub metric_value: f64,
    pub petpw: f64,
}

/// (metric value, PETpW) pairs for every session row and metric.
pub fn scatter(table: &ScoresTable) -> Vec<ScatterRow> {
    let mut out = Vec::new();
    for r in table.rows().iter().filter(|r| r.has_session()) {
        let petpw = r.petpw.unwrap_or_default();
        for m in Metric::CANDIDATES {
            if let Some(v) = r.metric(m) {
                out.push(ScatterRow {
                    segment_id: r.segment_id.clone(),
                    annotator: r.annotator_id.clone(),
                    metric: m,
                    metric_value: v,
                    petpw,
                });
            }
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn scatter_csv(rows: &[ScatterRow]) -> String {
    let mut out = String::from("segment_id,annotator,metric_name,metric_value,petpw\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            csv_field(&r.segment_id),
            csv_field(&r.annotator),
            r.metric,
            r.metric_value,
            r.petpw
        );
    }
    out
}
