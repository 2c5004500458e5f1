use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pe_rank_core::corpus::load_corpus_files;
use pe_rank_core::pipeline::{
    leave_one_out, loo_tsv, rank_eval, score_corpus, tails, tails_tsv, write_report, ScoresTable, Side, TailSpec,
    DEFAULT_WILLIAMS_ALPHA,
};
use pe_rank_core::{Error, Result, ALL};

const THREADS_VAR: &str = "PE_RANK_THREADS";

#[derive(Parser)]
#[command(name = "pe-rank", version, about = "Rank MT quality metrics by how well they predict post-editing time")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score every segment and session of a corpus.
    Score {
        #[arg(long)]
        segments: PathBuf,
        #[arg(long)]
        sessions: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Spearman's rho, SATRA and Williams flags against PETpW.
    RankEval {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long, default_value = ALL)]
        annotator: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_WILLIAMS_ALPHA)]
        williams_alpha: f64,
    },
    /// Each annotator's metrics against the mean PETpW of the others.
    Loo {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Overlap of the best or worst tails of each metric's ranking with PETpW.
    Tails {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long, value_parser = parse_side)]
        side: Side,
        #[arg(long, default_value_t = 500)]
        max: usize,
        #[arg(long, default_value_t = 50)]
        step: usize,
        #[arg(long, default_value = ALL)]
        annotator: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every analysis and write all tables plus report.json.
    Report {
        #[arg(long)]
        segments: PathBuf,
        #[arg(long)]
        sessions: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn parse_side(s: &str) -> std::result::Result<Side, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn threads() -> Result<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::InvalidArgument(format!("{THREADS_VAR} must be a positive integer, got `{v}`"))),
        },
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn note_all(notes: &[String]) {
    for n in notes {
        eprintln!("note: {n}");
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Score { segments, sessions, out } => {
            let corpus = load_corpus_files(segments, sessions)?;
            let table = score_corpus(&corpus, threads()?)?;
            write(&out, &table.to_tsv())
        }
        Command::RankEval {
            scores,
            annotator,
            out,
            williams_alpha,
        } => {
            let table = ScoresTable::read_file(scores)?;
            let result = rank_eval(&table, &annotator, williams_alpha)?;
            note_all(&result.notes);
            write(&out, &result.to_tsv())
        }
        Command::Loo { scores, out } => {
            let table = ScoresTable::read_file(scores)?;
            let (rows, notes) = leave_one_out(&table)?;
            note_all(&notes);
            write(&out, &loo_tsv(&rows))
        }
        Command::Tails {
            scores,
            side,
            max,
            step,
            annotator,
            out,
        } => {
            let table = ScoresTable::read_file(scores)?;
            let spec = TailSpec { side, max_cut: max, step };
            let (rows, notes) = tails(&table, &annotator, spec)?;
            note_all(&notes);
            write(&out, &tails_tsv(&rows))
        }
        Command::Report {
            segments,
            sessions,
            out_dir,
        } => {
            let corpus = load_corpus_files(segments, sessions)?;
            let report = write_report(&corpus, &out_dir, threads()?)?;
            note_all(&report.notes);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 1 } else { 2 })
        }
    }
}
