//! Batch front end: annotate, align, evaluate, compare and score.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use errtag::alignment::{align, format_alignment_tsv, inject_merges, merge_edits, parse_m2, M2Edit, TokenSequence};
use errtag::annotator::{parse_annotations, write_annotations, AnnotateError, Annotator, AnnotatorConfig, MappingTable};
use errtag::metrics::{compare_systems, evaluate_system, score_against_gold, top_k_table, MetricsError, ScoreOptions};
use errtag::morphology::{AnalyzerDb, TopK};

#[derive(Parser)]
#[command(name = "errtag", version, about = "Error-type annotation and tag-based evaluation for Arabic text correction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tag every aligned word pair of two sentence-aligned files.
    Annotate {
        #[arg(long)]
        src: PathBuf,
        #[arg(long)]
        tgt: PathBuf,
        /// M2 file whose merge edits become many-to-one pairs.
        #[arg(long)]
        m2: Option<PathBuf>,
        /// Edit-to-tag table replacing the bundled one.
        #[arg(long)]
        mapping: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Dump the word alignment of two sentence-aligned files.
    Align {
        #[arg(long)]
        src: PathBuf,
        #[arg(long)]
        tgt: PathBuf,
        #[arg(long)]
        m2: Option<PathBuf>,
    },
    /// Per-tag precision, recall and F1 of one system output.
    Evaluate {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[command(flatten)]
        score: ScoreArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Per-tag F1 table for several systems, with optional correlation
    /// against external per-system scores.
    Compare {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// System outputs as name=path, in table order.
        #[arg(long = "hyp", value_name = "NAME=PATH", required = true)]
        hyps: Vec<String>,
        /// External scores, one per line: `name<TAB>score` or bare scores
        /// in system order.
        #[arg(long)]
        m2_scores: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[command(flatten)]
        score: ScoreArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Score the annotator against a gold annotation file for 1, 2, 3 and
    /// all analyses.
    Score {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Gold annotations in the `annotate` TSV format.
        #[arg(long)]
        gold: PathBuf,
        #[command(flatten)]
        score: ScoreArgs,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct CorpusArgs {
    /// Uncorrected input sentences, one per line.
    #[arg(long)]
    raw: PathBuf,
    /// Reference corrections, one per line.
    #[arg(long = "ref")]
    reference: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Analyzer lexicon; the bundled one when unset.
    #[arg(long, env = "ERRTAG_DB")]
    db: Option<PathBuf>,
    /// Analyses kept per word.
    #[arg(long, value_parser = ["1", "2", "3", "all"])]
    top_k: Option<String>,
    /// `key=value` settings file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ScoreArgs {
    /// Score complex tags as whole labels.
    #[arg(long)]
    exact: bool,
    /// Keep UC and UNK in the scores.
    #[arg(long)]
    include_meta: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Table,
    Json,
}

impl ScoreArgs {
    fn options(&self) -> ScoreOptions {
        ScoreOptions { include_meta: self.include_meta, exact_complex: self.exact }
    }
}

impl RunArgs {
    fn load(&self) -> Result<(AnalyzerDb, AnnotatorConfig)> {
        let mut config = match &self.config {
            Some(path) => AnnotatorConfig::load(path).with_context(|| format!("reading {}", path.display()))?,
            None => AnnotatorConfig::default(),
        };
        if let Some(k) = &self.top_k {
            config.top_k = k.parse()?;
        }
        if let Some(jobs) = self.jobs {
            config.jobs = jobs;
        }
        config.validate()?;
        let db = match &self.db {
            Some(path) => AnalyzerDb::load(path).with_context(|| format!("loading analyzer {}", path.display()))?,
            None => AnalyzerDb::bundled(),
        };
        Ok((db, config))
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_corpus(path: &Path) -> Result<Vec<TokenSequence>> {
    Ok(read_text(path)?.lines().map(TokenSequence::new).collect())
}

/// Merge edits per sentence; sentences past the end of the file get none.
fn read_merges(path: Option<&Path>, n: usize) -> Result<Vec<Vec<M2Edit>>> {
    let mut merges = vec![Vec::new(); n];
    if let Some(path) = path {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        for (i, s) in parse_m2(&bytes).with_context(|| format!("parsing {}", path.display()))?.iter().enumerate().take(n) {
            merges[i] = merge_edits(&s.edits);
        }
    }
    Ok(merges)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn external_scores(path: &Path, names: &[String]) -> Result<Vec<f64>> {
    let text = read_text(path)?;
    let rows: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let parse = |s: &str| s.trim().parse::<f64>().with_context(|| format!("bad score {s:?} in {}", path.display()));
    if rows.iter().all(|r| r.contains('\t')) {
        let mut by_name = std::collections::HashMap::new();
        for r in &rows {
            let (name, score) = r.split_once('\t').unwrap();
            by_name.insert(name.trim(), parse(score)?);
        }
        names
            .iter()
            .map(|n| by_name.get(n.as_str()).copied().with_context(|| format!("no external score for system {n:?}")))
            .collect()
    } else {
        rows.iter().map(|r| parse(r)).collect()
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Annotate { src, tgt, m2, mapping, out, run } => {
            let (db, config) = run.load()?;
            let (src, tgt) = (read_corpus(&src)?, read_corpus(&tgt)?);
            let mut annotator = Annotator::new(&db, config);
            if let Some(path) = mapping {
                annotator = annotator.with_mapping(MappingTable::load(&path).with_context(|| format!("loading {}", path.display()))?);
            }
            let annotated = match m2 {
                None => annotator.annotate_corpus(&src, &tgt)?,
                Some(path) => {
                    if src.len() != tgt.len() {
                        return Err(AnnotateError::LengthMismatch { src: src.len(), tgt: tgt.len() }.into());
                    }
                    let merges = read_merges(Some(&path), src.len())?;
                    let mut out = Vec::with_capacity(src.len());
                    for ((s, t), m) in src.iter().zip(&tgt).zip(&merges) {
                        out.push(annotator.annotate_sentence_with_merges(s, t, m)?);
                    }
                    out
                }
            };
            emit(out.as_deref(), &write_annotations(&annotated))
        }
        Command::Align { src, tgt, m2 } => {
            let (src, tgt) = (read_corpus(&src)?, read_corpus(&tgt)?);
            if src.len() != tgt.len() {
                return Err(AnnotateError::LengthMismatch { src: src.len(), tgt: tgt.len() }.into());
            }
            let merges = read_merges(m2.as_deref(), src.len())?;
            let costs = AnnotatorConfig::default().costs;
            let mut text = String::new();
            for (i, ((s, t), m)) in src.iter().zip(&tgt).zip(&merges).enumerate() {
                let pairs = inject_merges(align(s, t, &costs), m)?;
                for line in format_alignment_tsv(&pairs).lines() {
                    let _ = writeln!(text, "{i}\t{line}");
                }
            }
            emit(None, &text)
        }
        Command::Evaluate { corpus, hyp, format, score, run } => {
            let (db, config) = run.load()?;
            let raw = read_corpus(&corpus.raw)?;
            let reference = read_corpus(&corpus.reference)?;
            let hyp = read_corpus(&hyp)?;
            let report = evaluate_system(&raw, &reference, &hyp, &db, &config, score.options())?;
            let text = match format {
                Format::Tsv => report.to_tsv(),
                Format::Table => report.to_table(),
                Format::Json => report.to_json_lines(),
            };
            emit(None, &text)
        }
        Command::Compare { corpus, hyps, m2_scores, format, score, run } => {
            let (db, config) = run.load()?;
            let raw = read_corpus(&corpus.raw)?;
            let reference = read_corpus(&corpus.reference)?;
            let mut systems = Vec::with_capacity(hyps.len());
            for spec in &hyps {
                let Some((name, path)) = spec.split_once('=') else {
                    bail!("expected NAME=PATH, got {spec:?}");
                };
                systems.push((name.to_string(), read_corpus(Path::new(path))?));
            }
            let names: Vec<String> = systems.iter().map(|s| s.0.clone()).collect();
            let external = m2_scores.as_deref().map(|p| external_scores(p, &names)).transpose()?;
            let cmp = compare_systems(&raw, &reference, &systems, &db, &config, score.options())?;
            let mut text = match format {
                Format::Tsv | Format::Json => cmp.to_tsv(),
                Format::Table => cmp.to_table(),
            };
            if let Some(external) = external {
                let rows = cmp.correlate(&external)?;
                if matches!(format, Format::Json) {
                    text.clear();
                    for r in &rows {
                        text.push_str(&serde_json::to_string(r)?);
                        text.push('\n');
                    }
                } else {
                    text.push_str("\nmetric\tpearson\trank pearson\tavg rank diff\n");
                    for r in &rows {
                        let _ = writeln!(text, "{}\t{:.4}\t{:.4}\t{:.4}", r.metric, r.pearson, r.rank_pearson, r.avg_rank_diff);
                    }
                }
            }
            emit(None, &text)
        }
        Command::Score { corpus, gold, score, run } => {
            let (db, config) = run.load()?;
            let raw = read_corpus(&corpus.raw)?;
            let reference = read_corpus(&corpus.reference)?;
            let gold = parse_annotations(&read_text(&gold)?)?;
            let ks = [TopK::N(1), TopK::N(2), TopK::N(3), TopK::All];
            let rows = score_against_gold(&raw, &reference, &gold, &db, &config, &ks, score.options())?;
            emit(None, &top_k_table(&rows))
        }
    }
}

/// 1 for corpora that do not line up, 2 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    let coverage = err.chain().any(|e| {
        matches!(e.downcast_ref::<AnnotateError>(), Some(AnnotateError::LengthMismatch { .. }))
            || matches!(
                e.downcast_ref::<MetricsError>(),
                Some(MetricsError::CoverageMismatch { .. } | MetricsError::Annotate(AnnotateError::LengthMismatch { .. }))
            )
    });
    if coverage {
        1
    } else {
        2
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("errtag: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
