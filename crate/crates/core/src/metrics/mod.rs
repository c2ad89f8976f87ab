//! Tag-based evaluation: per-tag precision/recall/F1 with micro, macro and
//! support-weighted averages, system comparison and score correlation.

mod report;
mod stats;

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::alignment::TokenSequence;
use crate::annotator::{annotate_corpus, AnnotateError, AnnotatedPair, AnnotatorConfig};
use crate::morphology::{AnalyzerDb, TopK};

pub use report::{Average, Comparison, CorrelationRow, EvaluationReport, TagScore};
pub use stats::{pearson, rank_compare, ranks};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("sentence {sentence}: {reason}")]
    CoverageMismatch { sentence: usize, reason: String },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error(transparent)]
    Annotate(#[from] AnnotateError),
}

impl MetricsError {
    fn coverage(sentence: usize, reason: impl Into<String>) -> Self {
        MetricsError::CoverageMismatch { sentence, reason: reason.into() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScoreOptions {
    /// Count `UC` and `UNK` like error tags.
    pub include_meta: bool,
    /// Score whole complex tags as single labels instead of atomic tags.
    pub exact_complex: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TagCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl TagCounts {
    pub fn support(&self) -> usize {
        self.tp + self.fn_
    }

    fn add(&mut self, other: &TagCounts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }
}

/// Scoring position on the source side: a word, or the gap before word
/// `n` for null-source pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Slot {
    Gap(usize),
    Word(usize),
}

fn labels(ap: &AnnotatedPair, opts: ScoreOptions) -> Vec<String> {
    if opts.exact_complex {
        if ap.tag.is_meta() && !opts.include_meta {
            return Vec::new();
        }
        return vec![ap.tag.to_string()];
    }
    ap.tag
        .tags()
        .filter(|t| opts.include_meta || !t.is_meta())
        .map(|t| t.code().to_string())
        .collect()
}

type Bag = BTreeMap<Slot, BTreeMap<String, usize>>;

fn bag(pairs: &[AnnotatedPair], opts: ScoreOptions) -> Bag {
    let mut out: Bag = BTreeMap::new();
    for ap in pairs {
        let slot = if ap.pair.src_words.is_empty() {
            Slot::Gap(ap.pair.src_span.start)
        } else {
            Slot::Word(ap.pair.src_span.start)
        };
        let entry = out.entry(slot).or_default();
        for label in labels(ap, opts) {
            *entry.entry(label).or_insert(0) += 1;
        }
    }
    out
}

fn source_words(pairs: &[AnnotatedPair]) -> Vec<&str> {
    pairs.iter().flat_map(|p| p.pair.src_words.iter().map(String::as_str)).collect()
}

fn sentence_counts(
    sentence: usize,
    gold: &[AnnotatedPair],
    pred: &[AnnotatedPair],
    opts: ScoreOptions,
) -> Result<BTreeMap<String, TagCounts>, MetricsError> {
    if source_words(gold) != source_words(pred) {
        return Err(MetricsError::coverage(sentence, "gold and predicted pairs cover different source words"));
    }
    let (g, p) = (bag(gold, opts), bag(pred, opts));
    let empty = BTreeMap::new();
    let mut counts: BTreeMap<String, TagCounts> = BTreeMap::new();
    let slots: std::collections::BTreeSet<&Slot> = g.keys().chain(p.keys()).collect();
    for slot in slots {
        let gl = g.get(slot).unwrap_or(&empty);
        let pl = p.get(slot).unwrap_or(&empty);
        let labels: std::collections::BTreeSet<&String> = gl.keys().chain(pl.keys()).collect();
        for label in labels {
            let (gn, pn) = (gl.get(label).copied().unwrap_or(0), pl.get(label).copied().unwrap_or(0));
            let tp = gn.min(pn);
            let c = counts.entry(label.clone()).or_default();
            c.add(&TagCounts { tp, fp: pn - tp, fn_: gn - tp });
        }
    }
    Ok(counts)
}

/// Count per-label tp/fp/fn over sentence-aligned gold and predicted
/// annotations. Tags are matched per source word; null-source pairs are
/// matched by the gap they fill.
pub fn tag_counts(
    gold: &[Vec<AnnotatedPair>],
    pred: &[Vec<AnnotatedPair>],
    opts: ScoreOptions,
) -> Result<BTreeMap<String, TagCounts>, MetricsError> {
    if gold.len() != pred.len() {
        return Err(MetricsError::coverage(
            gold.len().min(pred.len()),
            format!("{} gold sentences but {} predicted", gold.len(), pred.len()),
        ));
    }
    let per_sentence: Vec<BTreeMap<String, TagCounts>> = gold
        .par_iter()
        .zip(pred.par_iter())
        .enumerate()
        .map(|(i, (g, p))| sentence_counts(i, g, p, opts))
        .collect::<Result<_, _>>()?;
    let mut total: BTreeMap<String, TagCounts> = BTreeMap::new();
    for counts in per_sentence {
        for (label, c) in counts {
            total.entry(label).or_default().add(&c);
        }
    }
    Ok(total)
}

pub fn score_tags(
    gold: &[Vec<AnnotatedPair>],
    pred: &[Vec<AnnotatedPair>],
    opts: ScoreOptions,
) -> Result<EvaluationReport, MetricsError> {
    Ok(EvaluationReport::from_counts(&tag_counts(gold, pred, opts)?))
}

/// Reference tags from the (raw, ref) pair.
pub fn reference_tags(
    raw: &[TokenSequence],
    reference: &[TokenSequence],
    db: &AnalyzerDb,
    config: &AnnotatorConfig,
) -> Result<Vec<Vec<AnnotatedPair>>, MetricsError> {
    Ok(annotate_corpus(raw, reference, db, config)?)
}

/// Predicted tags from the (raw, hyp) pair.
pub fn predicted_tags(
    raw: &[TokenSequence],
    hyp: &[TokenSequence],
    db: &AnalyzerDb,
    config: &AnnotatorConfig,
) -> Result<Vec<Vec<AnnotatedPair>>, MetricsError> {
    Ok(annotate_corpus(raw, hyp, db, config)?)
}

/// Errors left in a system output, from the (hyp, ref) pair.
pub fn diagnose_remaining(
    hyp: &[TokenSequence],
    reference: &[TokenSequence],
    db: &AnalyzerDb,
    config: &AnnotatorConfig,
) -> Result<Vec<Vec<AnnotatedPair>>, MetricsError> {
    Ok(annotate_corpus(hyp, reference, db, config)?)
}

/// Score a system output against the reference, both annotated against
/// the raw text.
pub fn evaluate_system(
    raw: &[TokenSequence],
    reference: &[TokenSequence],
    hyp: &[TokenSequence],
    db: &AnalyzerDb,
    config: &AnnotatorConfig,
    opts: ScoreOptions,
) -> Result<EvaluationReport, MetricsError> {
    check_lengths(raw, reference, "reference")?;
    check_lengths(raw, hyp, "hypothesis")?;
    let gold = reference_tags(raw, reference, db, config)?;
    let pred = predicted_tags(raw, hyp, db, config)?;
    score_tags(&gold, &pred, opts)
}

fn check_lengths(raw: &[TokenSequence], other: &[TokenSequence], what: &str) -> Result<(), MetricsError> {
    if raw.len() != other.len() {
        return Err(MetricsError::coverage(
            raw.len().min(other.len()),
            format!("{} raw sentences but {} {what} sentences", raw.len(), other.len()),
        ));
    }
    Ok(())
}

/// Evaluate several named systems against the same raw/reference corpus.
pub fn compare_systems(
    raw: &[TokenSequence],
    reference: &[TokenSequence],
    hyps: &[(String, Vec<TokenSequence>)],
    db: &AnalyzerDb,
    config: &AnnotatorConfig,
    opts: ScoreOptions,
) -> Result<Comparison, MetricsError> {
    check_lengths(raw, reference, "reference")?;
    let gold = reference_tags(raw, reference, db, config)?;
    let mut systems = Vec::with_capacity(hyps.len());
    for (name, hyp) in hyps {
        check_lengths(raw, hyp, &format!("{name:?}"))?;
        let pred = predicted_tags(raw, hyp, db, config)?;
        systems.push((name.clone(), score_tags(&gold, &pred, opts)?));
    }
    Ok(Comparison::new(systems))
}

/// Score the annotator against hand-made gold annotations of (raw, ref)
/// once per analysis count. Gold files may omit trailing empty sentences.
pub fn score_against_gold(
    raw: &[TokenSequence],
    reference: &[TokenSequence],
    gold: &[Vec<AnnotatedPair>],
    db: &AnalyzerDb,
    config: &AnnotatorConfig,
    ks: &[TopK],
    opts: ScoreOptions,
) -> Result<Vec<(TopK, EvaluationReport)>, MetricsError> {
    check_lengths(raw, reference, "reference")?;
    if gold.len() > raw.len() {
        return Err(MetricsError::coverage(raw.len(), format!("{} gold sentences for {} raw", gold.len(), raw.len())));
    }
    let mut gold = gold.to_vec();
    gold.resize_with(raw.len(), Vec::new);
    ks.iter()
        .map(|&k| {
            let cfg = AnnotatorConfig { top_k: k, ..*config };
            let pred = annotate_corpus(raw, reference, db, &cfg)?;
            Ok((k, score_tags(&gold, &pred, opts)?))
        })
        .collect()
}

/// One row per analysis count: micro, macro and weighted F1.
pub fn top_k_table(rows: &[(TopK, EvaluationReport)]) -> String {
    let mut out = String::from("analyses\tmicro avg\tmacro avg\tweighted avg\n");
    for (k, r) in rows {
        out.push_str(&format!("{k}\t{:.4}\t{:.4}\t{:.4}\n", r.micro.f1, r.macro_avg.f1, r.weighted.f1));
    }
    out
}
