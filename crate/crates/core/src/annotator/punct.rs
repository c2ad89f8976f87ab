use std::collections::BTreeMap;

use crate::alignment::WordAlignmentPair;
use crate::script::is_punct;
use crate::taxonomy::ErrorTag;

fn punct_counts(words: &[String]) -> BTreeMap<char, usize> {
    let mut counts = BTreeMap::new();
    for ch in words.iter().flat_map(|w| w.chars()).filter(|&c| is_punct(c)) {
        *counts.entry(ch).or_insert(0) += 1;
    }
    counts
}

fn strip(words: &[String]) -> Vec<String> {
    words
        .iter()
        .map(|w| w.chars().filter(|&c| !is_punct(c)).collect::<String>())
        .filter(|w| !w.is_empty())
        .collect()
}

/// Compare punctuation on both sides and detach it. Punctuation present
/// only in the target is missing (PM), only in the source unnecessary
/// (PT), and differing on both sides confused (PC). The residual pair
/// keeps the original spans.
pub fn punct_component(pair: &WordAlignmentPair) -> (Option<ErrorTag>, WordAlignmentPair) {
    let src = punct_counts(&pair.src_words);
    let tgt = punct_counts(&pair.tgt_words);
    let excess = |a: &BTreeMap<char, usize>, b: &BTreeMap<char, usize>| {
        a.iter().any(|(c, n)| b.get(c).copied().unwrap_or(0) < *n)
    };
    let tag = match (excess(&src, &tgt), excess(&tgt, &src)) {
        (true, true) => Some(ErrorTag::PC),
        (false, true) => Some(ErrorTag::PM),
        (true, false) => Some(ErrorTag::PT),
        (false, false) => None,
    };
    let residual = WordAlignmentPair {
        src_words: strip(&pair.src_words),
        tgt_words: strip(&pair.tgt_words),
        src_span: pair.src_span.clone(),
        tgt_span: pair.tgt_span.clone(),
    };
    (tag, residual)
}
