use std::fmt::Write as _;

use super::{AnnotateError, AnnotatedPair};
use crate::alignment::{WordAlignmentPair, EMPTY_SIDE};
use crate::taxonomy::parse_tag;

/// Annotation TSV: `sentence_id<TAB>src_words<TAB>tgt_words<TAB>complex_tag`,
/// one row per pair, sentence ids from 0, empty sides written as `∅`.
pub fn write_annotations(corpus: &[Vec<AnnotatedPair>]) -> String {
    let mut out = String::new();
    for (id, sentence) in corpus.iter().enumerate() {
        for ap in sentence {
            let _ = writeln!(
                out,
                "{id}\t{}\t{}\t{}",
                crate::alignment::format_side(&ap.pair.src_words),
                crate::alignment::format_side(&ap.pair.tgt_words),
                ap.tag
            );
        }
    }
    out
}

fn side(text: &str) -> Vec<String> {
    if text == EMPTY_SIDE {
        Vec::new()
    } else {
        text.split(' ').filter(|w| !w.is_empty()).map(String::from).collect()
    }
}

/// Parse annotation TSV. Spans are rebuilt by counting words in row order;
/// sentence ids must not decrease and skipped ids become empty sentences.
pub fn parse_annotations(text: &str) -> Result<Vec<Vec<AnnotatedPair>>, AnnotateError> {
    let mut corpus: Vec<Vec<AnnotatedPair>> = Vec::new();
    let mut offsets = (0, 0);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let bad = |reason: String| AnnotateError::BadAnnotation { line, reason };
        let cols: Vec<&str> = raw.split('\t').collect();
        if cols.len() != 4 {
            return Err(bad(format!("expected 4 columns, found {}", cols.len())));
        }
        let id: usize = cols[0].trim().parse().map_err(|_| bad(format!("bad sentence id {:?}", cols[0])))?;
        if id + 1 < corpus.len() {
            return Err(bad(format!("sentence id {id} out of order")));
        }
        if id + 1 > corpus.len() {
            corpus.resize_with(id + 1, Vec::new);
            offsets = (0, 0);
        }
        let tag = parse_tag(cols[3]).map_err(|e| bad(e.to_string()))?;
        let (src, tgt) = (side(cols[1]), side(cols[2]));
        if src.is_empty() && tgt.is_empty() {
            return Err(bad("both sides empty".into()));
        }
        let pair = WordAlignmentPair {
            src_span: offsets.0..offsets.0 + src.len(),
            tgt_span: offsets.1..offsets.1 + tgt.len(),
            src_words: src,
            tgt_words: tgt,
        };
        offsets = (pair.src_span.end, pair.tgt_span.end);
        corpus[id].push(AnnotatedPair { pair, tag, path: None });
    }
    Ok(corpus)
}
