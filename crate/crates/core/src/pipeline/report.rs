use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use super::analysis::{
    leave_one_out, loo_tsv, petpw_by_annotator, rank_eval, scatter, scatter_csv, stats_table, stats_tsv, tails,
    tails_tsv, LooRow, RankEvalRow, Side, StatsRow, TailRow, TailSpec,
};
use super::scores::score_corpus;
use super::DEFAULT_WILLIAMS_ALPHA;
use crate::corpus::{validate_corpus, Corpus, Warning};
use crate::error::{Error, Result};
use crate::stats::{cluster_annotators, ks_two_sample, KsResult, DEFAULT_KS_ALPHA};
use crate::taskmetrics::ALL;

const TAIL_MAX_CUT: usize = 500;
const TAIL_STEP: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailSection {
    pub annotator: String,
    pub max_cut: usize,
    pub step: usize,
    pub best: Vec<TailRow>,
    pub worst: Vec<TailRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseKs {
    pub a: String,
    pub b: String,
    #[serde(flatten)]
    pub result: KsResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterSection {
    pub alpha: f64,
    pub clusters: Vec<Vec<String>>,
    pub pairwise: Vec<PairwiseKs>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterSection {
    pub file: String,
    pub rows: usize,
}

/// Everything the `report` command produces, in serializable form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub segments: usize,
    pub annotators: Vec<String>,
    pub validation: Vec<Warning>,
    pub notes: Vec<String>,
    pub stats_tables: Vec<StatsRow>,
    pub ranking_table: Vec<RankEvalRow>,
    pub loo_table: Vec<LooRow>,
    pub tails: Option<TailSection>,
    pub clusters: Option<ClusterSection>,
    pub scatter: ScatterSection,
}

/// Output files of a report run, keyed by file name.
pub type ReportFiles = BTreeMap<&'static str, String>;

/// Runs score → rank-eval → leave-one-out → tails → clusters → scatter and
/// bundles the results. Stage failures are wrapped with the stage name.
pub fn build_report(corpus: &Corpus, threads: Option<usize>) -> Result<(Report, ReportFiles)> {
    let mut files = ReportFiles::new();
    let mut notes = Vec::new();

    let table = score_corpus(corpus, threads).map_err(|e| e.in_stage("score"))?;
    files.insert("scores.tsv", table.to_tsv());
    let annotators = table.annotators();

    let stats = stats_table(&table).map_err(|e| e.in_stage("stats"))?;
    files.insert("stats.tsv", stats_tsv(&stats));

    let mut ranking = Vec::new();
    let mut rank_tsv = String::new();
    for ann in annotators.iter().map(String::as_str).chain([ALL]) {
        if table.rows_for(ann).count() == 0 {
            continue;
        }
        let t = rank_eval(&table, ann, DEFAULT_WILLIAMS_ALPHA).map_err(|e| e.in_stage("rank-eval"))?;
        let tsv = t.to_tsv();
        if rank_tsv.is_empty() {
            rank_tsv.push_str(tsv.lines().next().unwrap_or_default());
            rank_tsv.push('\n');
        }
        for line in tsv.lines().skip(1) {
            rank_tsv.push_str(line);
            rank_tsv.push('\n');
        }
        notes.extend(t.notes);
        ranking.extend(t.rows);
    }
    files.insert("rank_eval.tsv", rank_tsv);

    let loo_table = if annotators.len() >= 2 {
        let (rows, loo_notes) = leave_one_out(&table).map_err(|e| e.in_stage("loo"))?;
        notes.extend(loo_notes);
        rows
    } else {
        notes.push("fewer than two annotators; leave-one-out and clustering skipped".into());
        Vec::new()
    };
    files.insert("loo.tsv", loo_tsv(&loo_table));

    let n_all = table.rows_for(ALL).count();
    let tails_section = if n_all > 0 {
        let max_cut = TAIL_MAX_CUT.min(n_all);
        let step = if max_cut >= TAIL_STEP { TAIL_STEP } else { 1 };
        let spec = TailSpec { side: Side::Best, max_cut, step };
        let (best, n1) = tails(&table, ALL, spec).map_err(|e| e.in_stage("tails"))?;
        let (worst, _) = tails(&table, ALL, TailSpec { side: Side::Worst, ..spec }).map_err(|e| e.in_stage("tails"))?;
        notes.extend(n1);
        files.insert("tails_best.tsv", tails_tsv(&best));
        files.insert("tails_worst.tsv", tails_tsv(&worst));
        Some(TailSection {
            annotator: ALL.to_string(),
            max_cut,
            step,
            best,
            worst,
        })
    } else {
        None
    };

    let clusters = if annotators.len() >= 2 {
        let samples = petpw_by_annotator(&table);
        let clusters = cluster_annotators(&samples, DEFAULT_KS_ALPHA).map_err(|e| e.in_stage("clusters"))?;
        let ids: Vec<&String> = samples.keys().collect();
        let mut pairwise = Vec::new();
        for (i, a) in ids.iter().enumerate() {
            for b in &ids[i + 1..] {
                let result = ks_two_sample(&samples[*a], &samples[*b]).map_err(|e| e.in_stage("clusters"))?;
                pairwise.push(PairwiseKs {
                    a: a.to_string(),
                    b: b.to_string(),
                    result,
                });
            }
        }
        Some(ClusterSection {
            alpha: DEFAULT_KS_ALPHA,
            clusters,
            pairwise,
        })
    } else {
        None
    };

    let scatter_rows = scatter(&table);
    files.insert("scatter.csv", scatter_csv(&scatter_rows));

    notes.sort();
    notes.dedup();
    let report = Report {
        segments: corpus.segments().len(),
        annotators,
        validation: validate_corpus(corpus),
        notes,
        stats_tables: stats,
        ranking_table: ranking,
        loo_table,
        tails: tails_section,
        clusters,
        scatter: ScatterSection {
            file: "scatter.csv".into(),
            rows: scatter_rows.len(),
        },
    };
    ensure_finite(&report)?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    files.insert("report.json", json + "\n");
    Ok((report, files))
}

fn ensure_finite(report: &Report) -> Result<()> {
    let cells = report
        .stats_tables
        .iter()
        .flat_map(|r| [r.mean, r.std])
        .chain(report.ranking_table.iter().flat_map(|r| {
            [r.rho, r.satra].into_iter().chain(r.williams_p.values().copied())
        }))
        .chain(report.loo_table.iter().flat_map(|r| [r.rho, r.satra]));
    for v in cells {
        if !v.is_finite() {
            return Err(Error::NanValue("report table cell".into()).in_stage("report"));
        }
    }
    Ok(())
}

/// Builds the report and writes every output file into `out_dir`.
pub fn write_report(corpus: &Corpus, out_dir: &Path, threads: Option<usize>) -> Result<Report> {
    let (report, files) = build_report(corpus, threads)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::Io(format!("{}: {e}", out_dir.display())))?;
    for (name, contents) in files {
        let path = out_dir.join(name);
        std::fs::write(&path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(report)
}
