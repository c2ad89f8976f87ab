use std::sync::LazyLock;

use regex::Regex;

use crate::alignment::WordAlignmentPair;
use crate::script::is_long_vowel;
use crate::taxonomy::ErrorTag;

// word-final nunation, optionally preceded by the Alif seat of Fathatan
static TANWIN_END: LazyLock<Regex> = LazyLock::new(|| Regex::new("^(.*?)ا?[\u{064B}-\u{064D}]$").unwrap());
static NUN_END: LazyLock<Regex> = LazyLock::new(|| Regex::new("^(.*)ن$").unwrap());
static WAW_ALIF_END: LazyLock<Regex> = LazyLock::new(|| Regex::new("^(.*و)ا$").unwrap());

/// Rule-based detector for word insertions/deletions, merges, splits and
/// a few orthographic patterns. The first matching rule wins and is
/// terminal; `None` hands the pair to the later components.
pub fn regex_component(pair: &WordAlignmentPair) -> Option<ErrorTag> {
    let (src, tgt) = (&pair.src_words, &pair.tgt_words);
    if src.is_empty() && tgt.is_empty() {
        return None;
    }
    if tgt.is_empty() {
        return Some(ErrorTag::XT);
    }
    if src.is_empty() {
        return Some(ErrorTag::XM);
    }
    if src.len() > 1 && tgt.len() == 1 && src.concat() == tgt[0] {
        return Some(ErrorTag::MG);
    }
    if src.len() == 1 && tgt.len() > 1 && src[0] == tgt.concat() {
        return Some(ErrorTag::SP);
    }
    if src.len() != 1 || tgt.len() != 1 {
        return None;
    }
    word_rule(&src[0], &tgt[0])
}

fn word_rule(s: &str, t: &str) -> Option<ErrorTag> {
    if s == t {
        return None;
    }
    if is_transposed(s, t) {
        Some(ErrorTag::OC)
    } else if is_alif_fariqa(s, t) {
        Some(ErrorTag::OW)
    } else if deletes_only(s, t, is_long_vowel) {
        Some(ErrorTag::OG)
    } else if deletes_only(t, s, is_long_vowel) {
        Some(ErrorTag::OS)
    } else if is_tanwin_nun(s, t) || is_tanwin_nun(t, s) {
        Some(ErrorTag::ON)
    } else {
        None
    }
}

fn is_transposed(s: &str, t: &str) -> bool {
    let mut a: Vec<char> = s.chars().collect();
    let mut b: Vec<char> = t.chars().collect();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

fn is_alif_fariqa(s: &str, t: &str) -> bool {
    let dropped = |long: &str, short: &str| {
        WAW_ALIF_END.captures(long).is_some_and(|c| &c[1] == short)
    };
    dropped(s, t) || dropped(t, s)
}

fn is_tanwin_nun(with_nun: &str, with_tanwin: &str) -> bool {
    match (NUN_END.captures(with_nun), TANWIN_END.captures(with_tanwin)) {
        (Some(a), Some(b)) => a[1] == b[1],
        _ => false,
    }
}

/// True when `short` is `long` with one or more chars satisfying `pred`
/// removed.
fn deletes_only(long: &str, short: &str, pred: fn(char) -> bool) -> bool {
    let l: Vec<char> = long.chars().collect();
    let s: Vec<char> = short.chars().collect();
    if l.len() <= s.len() {
        return false;
    }
    // reach[j]: prefix of `long` processed so far can produce s[..j]
    let mut reach = vec![false; s.len() + 1];
    reach[0] = true;
    for &c in &l {
        for j in (0..=s.len()).rev() {
            let keep = j > 0 && reach[j - 1] && s[j - 1] == c;
            let drop = reach[j] && pred(c);
            reach[j] = keep || drop;
        }
    }
    reach[s.len()]
}
