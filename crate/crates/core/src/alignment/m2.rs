use super::{AlignError, TokenSequence, WordAlignmentPair};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct M2Edit {
    pub sentence_index: usize,
    pub start_token: usize,
    pub end_token: usize,
    pub edit_type: String,
    pub correction: String,
}

impl M2Edit {
    pub fn is_merge(&self) -> bool {
        self.edit_type.eq_ignore_ascii_case("merge")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct M2Sentence {
    pub sentence: TokenSequence,
    pub edits: Vec<M2Edit>,
}

/// Parse an `.m2` file: `S <tokens>` lines each followed by zero or more
/// `A start end|||type|||correction|||...` lines. Fields after the
/// correction are ignored, as are `-1 -1` noop annotations.
pub fn parse_m2(bytes: &[u8]) -> Result<Vec<M2Sentence>, AlignError> {
    let text = std::str::from_utf8(bytes).map_err(|_| AlignError::NotUtf8)?;
    let mut out: Vec<M2Sentence> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("S ").or(if line == "S" { Some("") } else { None }) {
            out.push(M2Sentence {
                sentence: TokenSequence::from_tokens(rest.split_whitespace()),
                edits: Vec::new(),
            });
        } else if let Some(rest) = line.strip_prefix("A ") {
            let sentence_index = out.len().checked_sub(1).ok_or(AlignError::MalformedLine(lineno))?;
            let current = &mut out[sentence_index];
            let mut fields = rest.split("|||");
            let span = fields.next().ok_or(AlignError::MalformedLine(lineno))?;
            let edit_type = fields.next().ok_or(AlignError::MalformedLine(lineno))?;
            let correction = fields.next().ok_or(AlignError::MalformedLine(lineno))?;
            let mut nums = span.split_whitespace();
            let (start, end) = match (nums.next(), nums.next(), nums.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => return Err(AlignError::MalformedLine(lineno)),
            };
            if start == "-1" && end == "-1" {
                continue;
            }
            let start: usize = start.parse().map_err(|_| AlignError::MalformedLine(lineno))?;
            let end: usize = end.parse().map_err(|_| AlignError::MalformedLine(lineno))?;
            if start > end || end > current.sentence.len() {
                return Err(AlignError::MalformedLine(lineno));
            }
            current.edits.push(M2Edit {
                sentence_index,
                start_token: start,
                end_token: end,
                edit_type: edit_type.to_string(),
                correction: correction.to_string(),
            });
        } else {
            return Err(AlignError::MalformedLine(lineno));
        }
    }
    Ok(out)
}

pub fn merge_edits(edits: &[M2Edit]) -> Vec<M2Edit> {
    edits.iter().filter(|e| e.is_merge()).cloned().collect()
}

/// Collapse every pair whose source words fall inside a merge span into a
/// single multi-source pair. Null-source pairs enclosed by the span are
/// absorbed too.
pub fn inject_merges(
    pairs: Vec<WordAlignmentPair>,
    edits: &[M2Edit],
) -> Result<Vec<WordAlignmentPair>, AlignError> {
    let len: usize = pairs.iter().map(|p| p.src_words.len()).sum();
    let mut pairs = pairs;
    for edit in edits {
        let (start, end) = (edit.start_token, edit.end_token);
        if start > end || end > len {
            return Err(AlignError::SpanOutOfRange { start, end, len });
        }
        let overlaps = |p: &WordAlignmentPair| {
            !p.src_span.is_empty() && p.src_span.start < end && p.src_span.end > start
        };
        let Some(first) = pairs.iter().position(overlaps) else {
            continue;
        };
        let last = pairs.iter().rposition(overlaps).unwrap();
        if first == last {
            continue;
        }
        let group: Vec<WordAlignmentPair> = pairs.drain(first..=last).collect();
        let merged = WordAlignmentPair {
            src_words: group.iter().flat_map(|p| p.src_words.clone()).collect(),
            tgt_words: group.iter().flat_map(|p| p.tgt_words.clone()).collect(),
            src_span: group[0].src_span.start..group[group.len() - 1].src_span.end,
            tgt_span: group[0].tgt_span.start..group[group.len() - 1].tgt_span.end,
        };
        pairs.insert(first, merged);
    }
    Ok(pairs)
}
