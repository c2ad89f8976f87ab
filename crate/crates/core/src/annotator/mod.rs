//! Error-type classification of aligned word pairs.
//!
//! Each pair passes through punctuation detection, then a terminal set of
//! regex-style rules, then either the ortho-morph shortest-path search
//! (one-to-one pairs) or clitic-tokenized re-alignment (one-to-many).

mod config;
mod io;
mod mapping;
mod multi_word;
mod ortho;
mod ortho_morph;
mod punct;
mod regex;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::alignment::{align, inject_merges, AlignError, M2Edit, TokenSequence, WordAlignmentPair};
use crate::morphology::{AnalyzerDb, FeatureEdit, TopK};
use crate::taxonomy::{ComplexTag, ErrorTag};

pub use config::{AnnotatorConfig, DEFAULT_ENUMERATION_CAP, MAX_ENUMERATION_CAP};
pub use io::{parse_annotations, write_annotations};
pub use mapping::{map_edits_to_tags, MappingTable};
pub use multi_word::MAX_COMBINATIONS;
pub use ortho::{apply_edits, ortho_edit_candidates, OrthoEdit, OrthoKind};
pub use punct::punct_component;
pub use regex::regex_component;

#[derive(Debug, Error)]
pub enum AnnotateError {
    #[error("{src} source sentences but {tgt} target sentences")]
    LengthMismatch { src: usize, tgt: usize },
    #[error("{len} orthographic edits exceed the enumeration cap of {cap}")]
    EditListTooLong { len: usize, cap: usize },
    #[error("config line {line}: {reason}")]
    BadConfig { line: usize, reason: String },
    #[error("mapping line {line}: {reason}")]
    BadMapping { line: usize, reason: String },
    #[error("annotation line {line}: {reason}")]
    BadAnnotation { line: usize, reason: String },
    #[error(transparent)]
    Align(#[from] AlignError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Orthographic and morphological edits turning a source word into its
/// target; the path cost is the number of edits.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EditPath {
    pub orth_edits: Vec<OrthoEdit>,
    pub morph_edits: Vec<FeatureEdit>,
}

impl EditPath {
    pub fn cost(&self) -> usize {
        self.orth_edits.len() + self.morph_edits.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnnotatedPair {
    #[serde(serialize_with = "serialize_pair")]
    pub pair: WordAlignmentPair,
    pub tag: ComplexTag,
    /// The chosen edit path, for one-to-one pairs classified by search.
    pub path: Option<EditPath>,
}

fn serialize_pair<S: serde::Serializer>(p: &WordAlignmentPair, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("pair", 4)?;
    st.serialize_field("src", &p.src_words)?;
    st.serialize_field("tgt", &p.tgt_words)?;
    st.serialize_field("src_span", &[p.src_span.start, p.src_span.end])?;
    st.serialize_field("tgt_span", &[p.tgt_span.start, p.tgt_span.end])?;
    st.end()
}

/// Classification result with the cost used to rank alternatives.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub tag: ComplexTag,
    pub path: Option<EditPath>,
    pub cost: usize,
}

impl Outcome {
    fn unchanged() -> Self {
        Outcome { tag: ComplexTag::unchanged(), path: None, cost: 0 }
    }

    fn tagged(tag: ErrorTag) -> Self {
        Outcome { tag: ComplexTag::single(tag), path: None, cost: 1 }
    }
}

/// The classification pipeline. Holds only read-only state, so one
/// instance can serve many threads.
#[derive(Debug, Clone)]
pub struct Annotator<'a> {
    db: &'a AnalyzerDb,
    config: AnnotatorConfig,
    mapping: MappingTable,
}

impl<'a> Annotator<'a> {
    pub fn new(db: &'a AnalyzerDb, config: AnnotatorConfig) -> Self {
        Annotator { db, config, mapping: MappingTable::bundled() }
    }

    pub fn with_mapping(mut self, mapping: MappingTable) -> Self {
        self.mapping = mapping;
        self
    }

    pub fn config(&self) -> &AnnotatorConfig {
        &self.config
    }

    pub fn db(&self) -> &AnalyzerDb {
        self.db
    }

    pub fn annotate_pair(&self, pair: &WordAlignmentPair) -> AnnotatedPair {
        let (punct, residual) = punct_component(pair);
        let outcome = self.classify_residual(&residual, true);
        let tag = match punct {
            Some(p) => outcome.tag.merge(&ComplexTag::single(p)),
            None => outcome.tag,
        };
        AnnotatedPair { pair: pair.clone(), tag, path: outcome.path }
    }

    /// Classify a punctuation-free pair. `allow_split` guards against
    /// re-entering the multi-word component from token-level pairs.
    fn classify_residual(&self, pair: &WordAlignmentPair, allow_split: bool) -> Outcome {
        let (src, tgt) = (&pair.src_words, &pair.tgt_words);
        if src == tgt {
            return Outcome::unchanged();
        }
        if let Some(tag) = regex_component(pair) {
            return Outcome::tagged(tag);
        }
        match (src.len(), tgt.len()) {
            (1, 1) => {
                let (path, tag) = self.best_path(&src[0], &tgt[0]);
                Outcome { tag, cost: path.cost(), path: Some(path) }
            }
            (1, _) if allow_split => self.multi_word(src, tgt),
            (_, 1) => {
                let (path, tag) = self.best_path(&src.concat(), &tgt[0]);
                let tag = tag.merge(&ComplexTag::single(ErrorTag::MG));
                Outcome { tag, cost: path.cost() + 1, path: Some(path) }
            }
            _ => Outcome { tag: ComplexTag::unknown(), path: None, cost: src.len().max(tgt.len()) },
        }
    }

    pub fn annotate_pairs(&self, pairs: &[WordAlignmentPair]) -> Vec<AnnotatedPair> {
        pairs.iter().map(|p| self.annotate_pair(p)).collect()
    }

    pub fn annotate_sentence(&self, src: &TokenSequence, tgt: &TokenSequence) -> Vec<AnnotatedPair> {
        self.annotate_pairs(&align(src, tgt, &self.config.costs))
    }

    /// Like [`Annotator::annotate_sentence`], with merge spans from an
    /// `.m2` file collapsed into many-to-one pairs first.
    pub fn annotate_sentence_with_merges(
        &self,
        src: &TokenSequence,
        tgt: &TokenSequence,
        merges: &[M2Edit],
    ) -> Result<Vec<AnnotatedPair>, AnnotateError> {
        let pairs = inject_merges(align(src, tgt, &self.config.costs), merges)?;
        Ok(self.annotate_pairs(&pairs))
    }

    /// Annotate sentence-aligned corpora, in parallel when `jobs != 1`.
    /// Output order follows input order.
    pub fn annotate_corpus(
        &self,
        src: &[TokenSequence],
        tgt: &[TokenSequence],
    ) -> Result<Vec<Vec<AnnotatedPair>>, AnnotateError> {
        if src.len() != tgt.len() {
            return Err(AnnotateError::LengthMismatch { src: src.len(), tgt: tgt.len() });
        }
        if self.config.jobs == 1 {
            return Ok(src.iter().zip(tgt).map(|(s, t)| self.annotate_sentence(s, t)).collect());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.config.jobs)
            .build()
            .expect("thread pool");
        Ok(pool.install(|| {
            src.par_iter()
                .zip(tgt.par_iter())
                .map(|(s, t)| self.annotate_sentence(s, t))
                .collect()
        }))
    }
}

/// One-to-one classification with default settings and the bundled table.
pub fn ortho_morph_component(src: &str, tgt: &str, db: &AnalyzerDb, k: TopK) -> ComplexTag {
    let config = AnnotatorConfig { top_k: k, ..AnnotatorConfig::default() };
    let pair = WordAlignmentPair::from_words(&[src], &[tgt]);
    Annotator::new(db, config).classify_residual(&pair, false).tag
}

/// One-to-many classification with default settings and the bundled table.
pub fn multi_word_component(src: &str, tgt: &[String], db: &AnalyzerDb, k: TopK) -> ComplexTag {
    let config = AnnotatorConfig { top_k: k, ..AnnotatorConfig::default() };
    Annotator::new(db, config).multi_word(&[src.to_string()], tgt).tag
}

pub fn annotate_corpus(
    src: &[TokenSequence],
    tgt: &[TokenSequence],
    db: &AnalyzerDb,
    config: &AnnotatorConfig,
) -> Result<Vec<Vec<AnnotatedPair>>, AnnotateError> {
    Annotator::new(db, *config).annotate_corpus(src, tgt)
}
