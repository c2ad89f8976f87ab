//! Word alignment between a source and a target sentence.
//!
//! Characters of the space-joined sentences are aligned with a weighted
//! edit-distance DP, then grouped into 1-to-many word pairs. Many-to-one
//! pairs only appear when merge spans are injected from an `.m2` file.

mod char_align;
mod group;
mod m2;

use std::fmt::Write as _;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::script::{normalize, NormalizeOptions};

pub use char_align::{alignment_cost, char_align, edit_distance};
pub use group::group_words;
pub use m2::{inject_merges, merge_edits, parse_m2, M2Edit, M2Sentence};

/// Placeholder for an empty side in TSV outputs.
pub const EMPTY_SIDE: &str = "∅";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlignError {
    #[error("m2 line {0}: malformed line")]
    MalformedLine(usize),
    #[error("m2 input is not valid UTF-8")]
    NotUtf8,
    #[error("edit span {start}..{end} out of range for a sentence of {len} tokens")]
    SpanOutOfRange { start: usize, end: usize, len: usize },
}

/// Weighted edit costs for the character aligner. `space_penalty` is added
/// to any substitution that pairs a space with a non-space character.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EditCosts {
    pub sub: f64,
    pub ins: f64,
    pub del: f64,
    pub space_penalty: f64,
}

impl Default for EditCosts {
    fn default() -> Self {
        Self {
            sub: 1.0,
            ins: 1.0,
            del: 1.0,
            space_penalty: 0.5,
        }
    }
}

impl EditCosts {
    pub fn substitution(&self, a: char, b: char) -> f64 {
        if a == b {
            0.0
        } else if (a == ' ') != (b == ' ') {
            self.sub + self.space_penalty
        } else {
            self.sub
        }
    }
}

/// A whitespace-tokenized, normalized sentence.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenSequence {
    pub tokens: Vec<String>,
    pub raw_text: String,
}

impl TokenSequence {
    /// Normalize with default options (no diacritic stripping) and split.
    pub fn new(raw: &str) -> Self {
        Self::with_options(raw, NormalizeOptions::default())
    }

    pub fn with_options(raw: &str, opts: NormalizeOptions) -> Self {
        let normalized = normalize(raw, opts);
        Self {
            tokens: normalized.split(' ').filter(|t| !t.is_empty()).map(String::from).collect(),
            raw_text: raw.to_string(),
        }
    }

    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        let raw_text = tokens.join(" ");
        Self { tokens, raw_text }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn joined(&self) -> String {
        self.tokens.join(" ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Match,
    Substitute,
    Insert,
    Delete,
}

/// One step of a character alignment. Indices are char offsets into the
/// source and target strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CharOp {
    pub kind: OpKind,
    pub src: Option<usize>,
    pub tgt: Option<usize>,
}

impl CharOp {
    pub fn matched(src: usize, tgt: usize) -> Self {
        Self { kind: OpKind::Match, src: Some(src), tgt: Some(tgt) }
    }

    pub fn substitute(src: usize, tgt: usize) -> Self {
        Self { kind: OpKind::Substitute, src: Some(src), tgt: Some(tgt) }
    }

    pub fn insert(tgt: usize) -> Self {
        Self { kind: OpKind::Insert, src: None, tgt: Some(tgt) }
    }

    pub fn delete(src: usize) -> Self {
        Self { kind: OpKind::Delete, src: Some(src), tgt: None }
    }
}

/// A source word span aligned to zero or more target words. Null-source
/// pairs carry an empty `src_span` positioned at the gap they occupy.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WordAlignmentPair {
    pub src_words: Vec<String>,
    pub tgt_words: Vec<String>,
    pub src_span: Range<usize>,
    pub tgt_span: Range<usize>,
}

impl WordAlignmentPair {
    pub fn new(src: &[String], tgt: &[String], src_span: Range<usize>, tgt_span: Range<usize>) -> Self {
        debug_assert_eq!(src.len(), src_span.len());
        debug_assert_eq!(tgt.len(), tgt_span.len());
        Self {
            src_words: src.to_vec(),
            tgt_words: tgt.to_vec(),
            src_span,
            tgt_span,
        }
    }

    /// Build a standalone pair from word lists, spans starting at zero.
    pub fn from_words<S: AsRef<str>>(src: &[S], tgt: &[S]) -> Self {
        Self {
            src_words: src.iter().map(|s| s.as_ref().to_string()).collect(),
            tgt_words: tgt.iter().map(|s| s.as_ref().to_string()).collect(),
            src_span: 0..src.len(),
            tgt_span: 0..tgt.len(),
        }
    }

    pub fn is_null_source(&self) -> bool {
        self.src_words.is_empty()
    }

    pub fn is_null_target(&self) -> bool {
        self.tgt_words.is_empty()
    }

    pub fn src_text(&self) -> String {
        self.src_words.join(" ")
    }

    pub fn tgt_text(&self) -> String {
        self.tgt_words.join(" ")
    }
}

fn side(words: &[String]) -> String {
    if words.is_empty() {
        EMPTY_SIDE.to_string()
    } else {
        words.join(" ")
    }
}

/// Alignment dump: one pair per line, `src_words<TAB>tgt_words`.
pub fn format_alignment_tsv(pairs: &[WordAlignmentPair]) -> String {
    let mut out = String::new();
    for pair in pairs {
        let _ = writeln!(out, "{}\t{}", side(&pair.src_words), side(&pair.tgt_words));
    }
    out
}

pub(crate) fn format_side(words: &[String]) -> String {
    side(words)
}

/// Character-align two token sequences and group the result into word pairs.
pub fn align(src: &TokenSequence, tgt: &TokenSequence, costs: &EditCosts) -> Vec<WordAlignmentPair> {
    let ops = char_align(&src.joined(), &tgt.joined(), costs);
    group_words(&ops, src, tgt, costs)
}

/// Check that pairs tile both sequences in order without overlap.
pub fn tiles(pairs: &[WordAlignmentPair], src: &[String], tgt: &[String]) -> bool {
    let mut s = 0;
    let mut t = 0;
    for p in pairs {
        if p.src_words.is_empty() && p.tgt_words.is_empty() {
            return false;
        }
        if p.src_span.start != s || p.tgt_span.start != t {
            return false;
        }
        if src.get(p.src_span.clone()) != Some(&p.src_words[..])
            || tgt.get(p.tgt_span.clone()) != Some(&p.tgt_words[..])
        {
            return false;
        }
        s = p.src_span.end;
        t = p.tgt_span.end;
    }
    s == src.len() && t == tgt.len()
}
