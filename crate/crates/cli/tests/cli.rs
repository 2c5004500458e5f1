use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn pe_rank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pe-rank"))
        .args(args)
        .env("PE_RANK_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn score_fixture(dir: &TempDir) -> PathBuf {
    let out = dir.path().join("scores.tsv");
    let o = pe_rank(&[
        "score",
        "--segments",
        path_str(&fixture("segments.tsv")),
        "--sessions",
        path_str(&fixture("sessions.tsv")),
        "--out",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

/// Reads a TSV into (header, rows) keeping cells as strings.
fn read_tsv(p: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(p).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split('\t').map(str::to_string).collect();
    let rows = lines.map(|l| l.split('\t').map(str::to_string).collect()).collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

const SEG_ONE: &str = "id\tsystem_id\tsource\tmt\treference\tda\ns1\tsys\tx\tthe cat sat\tthe cat sat down\t0.2\n";
const SES_HEADER: &str = "segment_id\tannotator_id\tpe_text\tpe_time_sec\tkeystrokes\n";

#[test]
fn score_writes_annotator_and_all_rows() {
    let dir = TempDir::new().unwrap();
    let segs = write(&dir, "s.tsv", SEG_ONE);
    let ses = write(
        &dir,
        "p.tsv",
        &format!("{SES_HEADER}s1\tB\tthe cat sat\t3\t0\ns1\tA\tthe cat sat down\t6\t5\n"),
    );
    let out = dir.path().join("o.tsv");
    let o = pe_rank(&["score", "--segments", path_str(&segs), "--sessions", path_str(&ses), "--out", path_str(&out)]);
    assert!(o.status.success());
    let (h, rows) = read_tsv(&out);
    let ann: Vec<&str> = rows.iter().map(|r| r[col(&h, "annotator_id")].as_str()).collect();
    assert_eq!(ann, ["A", "B", "ALL"]);
    assert_eq!(rows[1][col(&h, "hter")], "0");
    assert_eq!(rows[2][col(&h, "petpw")], "1.5");
}

#[test]
fn score_without_sessions_leaves_session_fields_empty() {
    let dir = TempDir::new().unwrap();
    let segs = write(&dir, "s.tsv", SEG_ONE);
    let ses = write(&dir, "p.tsv", SES_HEADER);
    let out = dir.path().join("o.tsv");
    let o = pe_rank(&["score", "--segments", path_str(&segs), "--sessions", path_str(&ses), "--out", path_str(&out)]);
    assert!(o.status.success());
    let (h, rows) = read_tsv(&out);
    assert_eq!(rows.len(), 1);
    for c in ["pe_time_sec", "petpw", "keys_per_char", "hter", "hbleu", "hmeteor"] {
        assert_eq!(rows[0][col(&h, c)], "", "{c}");
    }
    for c in ["ter", "bleu", "meteor", "da"] {
        assert_ne!(rows[0][col(&h, c)], "", "{c}");
    }
}

#[test]
fn identity_post_edits_give_zero_hter() {
    let dir = TempDir::new().unwrap();
    let fixture_sessions = std::fs::read_to_string(fixture("sessions.tsv")).unwrap();
    let segments = std::fs::read_to_string(fixture("segments.tsv")).unwrap();
    let mt: std::collections::HashMap<&str, &str> = segments
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0], f[3])
        })
        .collect();
    let mut ses = String::from(SES_HEADER);
    for l in fixture_sessions.lines().skip(1) {
        let f: Vec<&str> = l.split('\t').collect();
        ses.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", f[0], f[1], mt[f[0]], f[3], f[4]));
    }
    let ses = write(&dir, "p.tsv", &ses);
    let out = dir.path().join("o.tsv");
    let o = pe_rank(&[
        "score",
        "--segments",
        path_str(&fixture("segments.tsv")),
        "--sessions",
        path_str(&ses),
        "--out",
        path_str(&out),
    ]);
    assert!(o.status.success());
    let (h, rows) = read_tsv(&out);
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r[col(&h, "hter")] == "0"));
}

#[test]
fn rank_eval_reports_every_metric_and_the_oracle() {
    let dir = TempDir::new().unwrap();
    let scores = score_fixture(&dir);
    let out = dir.path().join("rank.tsv");
    let o = pe_rank(&["rank-eval", "--scores", path_str(&scores), "--annotator", "ALL", "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = read_tsv(&out);
    let metrics: Vec<&str> = rows.iter().map(|r| r[col(&h, "metric")].as_str()).collect();
    assert_eq!(
        metrics,
        ["TER", "BLEU", "METEOR", "DA", "HTER", "HBLEU", "HMETEOR", "KEYS_PER_CHAR", "PETPW"]
    );
    let oracle = rows.last().unwrap();
    let rho: f64 = oracle[col(&h, "rho")].parse().unwrap();
    assert!((rho - 1.0).abs() < 1e-12);
}

#[test]
fn rank_eval_missing_metric_column_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let scores = score_fixture(&dir);
    let text = std::fs::read_to_string(&scores).unwrap();
    let stripped: String = text
        .lines()
        .map(|l| {
            let mut f: Vec<&str> = l.split('\t').collect();
            f.remove(8); // hter
            f.join("\t") + "\n"
        })
        .collect();
    assert!(text.lines().next().unwrap().split('\t').nth(8) == Some("hter"));
    let scores = write(&dir, "stripped.tsv", &stripped);
    let out = dir.path().join("rank.tsv");
    let o = pe_rank(&["rank-eval", "--scores", path_str(&scores), "--annotator", "ALL", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).to_lowercase().contains("hter"));
}

#[test]
fn loo_with_two_annotators_uses_the_other_annotator() {
    let dir = TempDir::new().unwrap();
    let scores = score_fixture(&dir);
    let out = dir.path().join("loo.tsv");
    let o = pe_rank(&["loo", "--scores", path_str(&scores), "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = read_tsv(&out);
    let annotators: std::collections::BTreeSet<&str> =
        rows.iter().map(|r| r[col(&h, "annotator")].as_str()).collect();
    assert_eq!(annotators.into_iter().collect::<Vec<_>>(), ["ANN0", "ANN1"]);
}

#[test]
fn loo_with_one_annotator_fails() {
    let dir = TempDir::new().unwrap();
    let segs = write(
        &dir,
        "s.tsv",
        "id\tsystem_id\tsource\tmt\treference\na\ts\tx\tone two\tone two\nb\ts\tx\tthree\tfour\nc\ts\tx\tfive six\tfive\n",
    );
    let ses = write(
        &dir,
        "p.tsv",
        &format!("{SES_HEADER}a\tA\tone two\t2\t0\nb\tA\tfour\t3\t4\nc\tA\tfive\t5\t4\n"),
    );
    let scores = dir.path().join("scores.tsv");
    let o = pe_rank(&["score", "--segments", path_str(&segs), "--sessions", path_str(&ses), "--out", path_str(&scores)]);
    assert!(o.status.success());
    let o = pe_rank(&["loo", "--scores", path_str(&scores), "--out", path_str(&dir.path().join("l.tsv"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn tails_full_cut_overlaps_equal_on_both_sides() {
    let dir = TempDir::new().unwrap();
    let scores = score_fixture(&dir);
    let mut outputs = Vec::new();
    for side in ["best", "worst"] {
        let out = dir.path().join(format!("{side}.tsv"));
        let o = pe_rank(&[
            "tails", "--scores", path_str(&scores), "--side", side, "--max", "3", "--step", "3", "--out",
            path_str(&out),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read_to_string(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(outputs[0].lines().skip(1).all(|l| l.starts_with("3\t") && l.ends_with("\t3")));
}

#[test]
fn tails_cut_beyond_segments_fails() {
    let dir = TempDir::new().unwrap();
    let scores = score_fixture(&dir);
    let o = pe_rank(&[
        "tails", "--scores", path_str(&scores), "--side", "best", "--max", "4", "--step", "1", "--out",
        path_str(&dir.path().join("t.tsv")),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn report_contains_all_sections() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report");
    let o = pe_rank(&[
        "report",
        "--segments",
        path_str(&fixture("segments.tsv")),
        "--sessions",
        path_str(&fixture("sessions.tsv")),
        "--out-dir",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    for key in ["stats_tables", "ranking_table", "loo_table", "tails", "clusters", "scatter"] {
        assert!(!json[key].is_null(), "{key}");
    }
    assert!(!json["loo_table"].as_array().unwrap().is_empty());
    let scatter = std::fs::read_to_string(out.join("scatter.csv")).unwrap();
    assert_eq!(scatter.lines().next(), Some("segment_id,annotator,metric_name,metric_value,petpw"));
}

#[test]
fn report_without_da_column_omits_da_and_says_so() {
    let dir = TempDir::new().unwrap();
    let segments = std::fs::read_to_string(fixture("segments.tsv")).unwrap();
    let no_da: String = segments
        .lines()
        .map(|l| l.rsplit_once('\t').unwrap().0.to_string() + "\n")
        .collect();
    let segs = write(&dir, "s.tsv", &no_da);
    let out = dir.path().join("report");
    let o = pe_rank(&[
        "report",
        "--segments",
        path_str(&segs),
        "--sessions",
        path_str(&fixture("sessions.tsv")),
        "--out-dir",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let has_da = |key: &str| json[key].as_array().unwrap().iter().any(|r| r["metric"] == "DA");
    assert!(!has_da("ranking_table") && !has_da("loo_table") && !has_da("stats_tables"));
    let notes = json["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().contains("DA")), "{notes:?}");
}

#[test]
fn malformed_input_exits_with_one() {
    let dir = TempDir::new().unwrap();
    let segs = write(&dir, "s.tsv", "id\tsystem_id\tsource\tmt\n");
    let o = pe_rank(&[
        "score",
        "--segments",
        path_str(&segs),
        "--sessions",
        path_str(&fixture("sessions.tsv")),
        "--out",
        path_str(&dir.path().join("o.tsv")),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("reference"));

    let o = pe_rank(&["tails", "--scores", "x", "--side", "middle", "--out", "y"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn thread_count_does_not_change_scores() {
    let dir = TempDir::new().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("s{threads}.tsv"));
        let o = Command::new(env!("CARGO_BIN_EXE_pe-rank"))
            .args([
                "score",
                "--segments",
                path_str(&fixture("segments.tsv")),
                "--sessions",
                path_str(&fixture("sessions.tsv")),
                "--out",
                path_str(&out),
            ])
            .env("PE_RANK_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success());
        outputs.push(std::fs::read(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}
