use std::fmt;

use serde::Serialize;

use super::AnnotateError;
use crate::alignment::{char_align, CharOp, EditCosts, OpKind};
use crate::script::{classify, is_long_vowel, CharClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OrthoKind {
    HamzaSwap,
    TaMarbutaSwap,
    AlifMaqsuraSwap,
    AlifFariqa,
    TanwinNunSwap,
    VowelLengthen,
    VowelShorten,
    CharTranspose,
    CharSubstitute,
    CharInsert,
    CharDelete,
}

impl OrthoKind {
    pub const ALL: [OrthoKind; 11] = [
        OrthoKind::HamzaSwap,
        OrthoKind::TaMarbutaSwap,
        OrthoKind::AlifMaqsuraSwap,
        OrthoKind::AlifFariqa,
        OrthoKind::TanwinNunSwap,
        OrthoKind::VowelLengthen,
        OrthoKind::VowelShorten,
        OrthoKind::CharTranspose,
        OrthoKind::CharSubstitute,
        OrthoKind::CharInsert,
        OrthoKind::CharDelete,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OrthoKind::HamzaSwap => "HamzaSwap",
            OrthoKind::TaMarbutaSwap => "TaMarbutaSwap",
            OrthoKind::AlifMaqsuraSwap => "AlifMaqsuraSwap",
            OrthoKind::AlifFariqa => "AlifFariqa",
            OrthoKind::TanwinNunSwap => "TanwinNunSwap",
            OrthoKind::VowelLengthen => "VowelLengthen",
            OrthoKind::VowelShorten => "VowelShorten",
            OrthoKind::CharTranspose => "CharTranspose",
            OrthoKind::CharSubstitute => "CharSubstitute",
            OrthoKind::CharInsert => "CharInsert",
            OrthoKind::CharDelete => "CharDelete",
        }
    }

    /// Plain character edits, subject to the word-selection threshold.
    pub fn is_generic(self) -> bool {
        matches!(self, OrthoKind::CharSubstitute | OrthoKind::CharInsert | OrthoKind::CharDelete)
    }
}

impl fmt::Display for OrthoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One orthographic edit: replace the `from` chars starting at source char
/// offset `src_pos` with `to`. Insertions have an empty `from`, deletions
/// an empty `to`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct OrthoEdit {
    pub kind: OrthoKind,
    pub src_pos: usize,
    pub from: String,
    pub to: String,
}

impl OrthoEdit {
    fn new(kind: OrthoKind, src_pos: usize, from: &[char], to: &[char]) -> Self {
        OrthoEdit {
            kind,
            src_pos,
            from: from.iter().collect(),
            to: to.iter().collect(),
        }
    }

    /// Number of source chars this edit touches (transpositions touch two).
    pub fn affected(&self) -> usize {
        self.from.chars().count().max(1)
    }
}

impl fmt::Display for OrthoEdit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}:{}→{}", self.kind, self.src_pos, self.from, self.to)
    }
}

fn hamza_related(c: char) -> bool {
    matches!(classify(c), CharClass::HamzaForm) || matches!(c, 'ا' | 'و' | 'ي' | 'ى')
}

fn classify_substitution(a: char, b: char) -> OrthoKind {
    let (ca, cb) = (classify(a), classify(b));
    let has = |cls: CharClass| ca == cls || cb == cls;
    if has(CharClass::HamzaForm) && hamza_related(a) && hamza_related(b) {
        OrthoKind::HamzaSwap
    } else if has(CharClass::TaMarbuta) && (has(CharClass::Ha) || has(CharClass::Ta)) {
        OrthoKind::TaMarbutaSwap
    } else if has(CharClass::AlifMaqsura) && (has(CharClass::Ya) || has(CharClass::BareAlif)) {
        OrthoKind::AlifMaqsuraSwap
    } else if has(CharClass::Tanwin) && has(CharClass::Nun) {
        OrthoKind::TanwinNunSwap
    } else {
        OrthoKind::CharSubstitute
    }
}

/// Extract the orthographic edits turning `src` into `tgt`, one per
/// non-match step of the character alignment (adjacent swaps fold into a
/// single transposition). Fails when the list exceeds `cap`.
pub fn ortho_edit_candidates(src: &str, tgt: &str, cap: usize) -> Result<Vec<OrthoEdit>, AnnotateError> {
    let edits = edit_list(src, tgt);
    if edits.len() > cap {
        return Err(AnnotateError::EditListTooLong { len: edits.len(), cap });
    }
    Ok(edits)
}

pub(crate) fn edit_list(src: &str, tgt: &str) -> Vec<OrthoEdit> {
    let s: Vec<char> = src.chars().collect();
    let t: Vec<char> = tgt.chars().collect();
    let ops = char_align(src, tgt, &EditCosts::default());
    let mut edits = Vec::new();
    let mut k = 0;
    while k < ops.len() {
        if let Some((edit, used)) = transposition(&ops[k..], &s, &t) {
            edits.push(edit);
            k += used;
            continue;
        }
        let op = ops[k];
        k += 1;
        match op.kind {
            OpKind::Match => {}
            OpKind::Substitute => {
                let (i, j) = (op.src.unwrap(), op.tgt.unwrap());
                let kind = classify_substitution(s[i], t[j]);
                edits.push(OrthoEdit::new(kind, i, &s[i..=i], &t[j..=j]));
            }
            OpKind::Delete => {
                let i = op.src.unwrap();
                let c = s[i];
                let kind = if classify(c) == CharClass::HamzaForm {
                    OrthoKind::HamzaSwap
                } else if c == 'ا' && i + 1 == s.len() && i > 0 && s[i - 1] == 'و' {
                    OrthoKind::AlifFariqa
                } else if is_long_vowel(c) {
                    OrthoKind::VowelLengthen
                } else {
                    OrthoKind::CharDelete
                };
                edits.push(OrthoEdit::new(kind, i, &s[i..=i], &[]));
            }
            OpKind::Insert => {
                let j = op.tgt.unwrap();
                let c = t[j];
                let at = insertion_point(&ops[..k]);
                let kind = if classify(c) == CharClass::HamzaForm {
                    OrthoKind::HamzaSwap
                } else if c == 'ا' && j + 1 == t.len() && j > 0 && t[j - 1] == 'و' {
                    OrthoKind::AlifFariqa
                } else if is_long_vowel(c) {
                    OrthoKind::VowelShorten
                } else {
                    OrthoKind::CharInsert
                };
                edits.push(OrthoEdit::new(kind, at, &[], &t[j..=j]));
            }
        }
    }
    edits
}

/// Source chars consumed before the last op of `prefix`.
fn insertion_point(prefix: &[CharOp]) -> usize {
    prefix[..prefix.len() - 1].iter().filter(|o| o.src.is_some()).count()
}

/// Adjacent swap `xy → yx` expressed as two substitutions, or as a
/// delete/match/insert (or insert/match/delete) triple.
fn transposition(ops: &[CharOp], s: &[char], t: &[char]) -> Option<(OrthoEdit, usize)> {
    use OpKind::*;
    match ops {
        [a, b, ..] if a.kind == Substitute && b.kind == Substitute => {
            let (i, j) = (a.src?, a.tgt?);
            if b.src? == i + 1 && s[i] == t[j + 1] && s[i + 1] == t[j] {
                let edit = OrthoEdit::new(OrthoKind::CharTranspose, i, &s[i..i + 2], &t[j..j + 2]);
                return Some((edit, 2));
            }
            None
        }
        [a, b, c, ..] if a.kind == Delete && b.kind == Match && c.kind == Insert => {
            let i = a.src?;
            if s[i] == t[c.tgt?] {
                let edit = OrthoEdit::new(OrthoKind::CharTranspose, i, &s[i..i + 2], &[s[i + 1], s[i]]);
                return Some((edit, 3));
            }
            None
        }
        [a, b, c, ..] if a.kind == Insert && b.kind == Match && c.kind == Delete => {
            let i = b.src?;
            if t[a.tgt?] == s[c.src?] {
                let edit = OrthoEdit::new(OrthoKind::CharTranspose, i, &s[i..i + 2], &[s[i + 1], s[i]]);
                return Some((edit, 3));
            }
            None
        }
        _ => None,
    }
}

/// Apply the selected edits (bit `i` of `mask` selects `edits[i]`). Edits
/// must be in source order with non-overlapping spans, as produced by
/// [`ortho_edit_candidates`].
pub fn apply_edits(src: &str, edits: &[OrthoEdit], mask: u64) -> String {
    let chars: Vec<char> = src.chars().collect();
    let mut out = String::with_capacity(src.len() + 8);
    let mut i = 0;
    for (n, e) in edits.iter().enumerate() {
        if mask & (1 << n) == 0 {
            continue;
        }
        out.extend(&chars[i..e.src_pos]);
        out.push_str(&e.to);
        i = e.src_pos + e.from.chars().count();
    }
    out.extend(&chars[i..]);
    out
}
