use super::{edit_distance, CharOp, EditCosts, OpKind, TokenSequence, WordAlignmentPair};

/// Word index of every char in the space-joined token string (None for the
/// separating spaces).
fn word_index_map(tokens: &[String]) -> Vec<Option<usize>> {
    let mut map = Vec::new();
    for (w, tok) in tokens.iter().enumerate() {
        if w > 0 {
            map.push(None);
        }
        map.extend(std::iter::repeat_n(Some(w), tok.chars().count()));
    }
    map
}

/// Group character ops into word pairs.
///
/// Each target word is owned by the source word its characters align to
/// (matches weigh twice as much as substitutions). Unowned target words
/// become null-source pairs unless they sit between two words owned by
/// the same source word. A trailing or leading target word is split off
/// into its own null-source pair when doing so does not raise the edit cost.
pub fn group_words(
    ops: &[CharOp],
    src: &TokenSequence,
    tgt: &TokenSequence,
    costs: &EditCosts,
) -> Vec<WordAlignmentPair> {
    let src_word = word_index_map(&src.tokens);
    let tgt_word = word_index_map(&tgt.tokens);
    let (ns, nt) = (src.len(), tgt.len());

    let mut weights = vec![Vec::<(usize, u32)>::new(); nt];
    let mut first_src_op = vec![usize::MAX; ns];
    let mut first_tgt_op = vec![usize::MAX; nt];
    for (k, op) in ops.iter().enumerate() {
        let sw = op.src.and_then(|i| src_word.get(i).copied().flatten());
        let tw = op.tgt.and_then(|j| tgt_word.get(j).copied().flatten());
        if let Some(s) = sw {
            first_src_op[s] = first_src_op[s].min(k);
        }
        if let Some(t) = tw {
            first_tgt_op[t] = first_tgt_op[t].min(k);
        }
        if let (Some(s), Some(t)) = (sw, tw) {
            let w = if op.kind == OpKind::Match { 2 } else { 1 };
            match weights[t].iter_mut().find(|(src, _)| *src == s) {
                Some(entry) => entry.1 += w,
                None => weights[t].push((s, w)),
            }
        }
    }

    let mut owner: Vec<Option<usize>> = weights
        .iter()
        .map(|links| {
            links
                .iter()
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                .map(|&(s, _)| s)
        })
        .collect();

    let mut floor = 0;
    for o in owner.iter_mut().flatten() {
        *o = (*o).max(floor);
        floor = *o;
    }
    // absorb unowned words enclosed by the same owner
    for j in 0..nt {
        if owner[j].is_some() {
            continue;
        }
        let prev = owner[..j].iter().rev().flatten().next();
        let next = owner[j + 1..].iter().flatten().next();
        if let (Some(p), Some(n)) = (prev, next) {
            if p == n {
                owner[j] = Some(*p);
            }
        }
    }

    let mut ranges: Vec<Option<(usize, usize)>> = vec![None; ns];
    for (j, o) in owner.iter().enumerate() {
        if let Some(s) = *o {
            ranges[s] = Some(match ranges[s] {
                Some((a, _)) => (a, j + 1),
                None => (j, j + 1),
            });
        }
    }

    let mut pairs = Vec::with_capacity(ns.max(nt));
    let null_pair = |j: usize, gap: usize| {
        WordAlignmentPair::new(&[], &tgt.tokens[j..j + 1], gap..gap, j..j + 1)
    };
    let mut j = 0;
    for i in 0..ns {
        match ranges[i] {
            Some((a, b)) => {
                while j < a {
                    pairs.push(null_pair(j, i));
                    j += 1;
                }
                pairs.push(WordAlignmentPair::new(&src.tokens[i..i + 1], &tgt.tokens[a..b], i..i + 1, a..b));
                j = b;
            }
            None => {
                while j < nt && owner[j].is_none() && first_tgt_op[j] < first_src_op[i] {
                    pairs.push(null_pair(j, i));
                    j += 1;
                }
                pairs.push(WordAlignmentPair::new(&src.tokens[i..i + 1], &[], i..i + 1, j..j));
            }
        }
    }
    while j < nt {
        pairs.push(null_pair(j, ns));
        j += 1;
    }

    peel_boundary_targets(pairs, costs)
}

fn peel_boundary_targets(pairs: Vec<WordAlignmentPair>, costs: &EditCosts) -> Vec<WordAlignmentPair> {
    let word_cost = |w: &str| (w.chars().count() + 1) as f64 * costs.ins;
    let mut out = Vec::with_capacity(pairs.len());
    for mut pair in pairs {
        if pair.src_words.len() != 1 || pair.tgt_words.len() < 2 {
            out.push(pair);
            continue;
        }
        let src = pair.src_words[0].clone();
        let gap = pair.src_span.start;
        let mut leading = Vec::new();
        let mut trailing = Vec::new();
        loop {
            let n = pair.tgt_words.len();
            if n < 2 {
                break;
            }
            let full = edit_distance(&src, &pair.tgt_text(), costs);
            let last = &pair.tgt_words[n - 1];
            let without_last = pair.tgt_words[..n - 1].join(" ");
            if edit_distance(&src, &without_last, costs) + word_cost(last) <= full + 1e-9 {
                let word = pair.tgt_words.pop().unwrap();
                pair.tgt_span.end -= 1;
                trailing.push(WordAlignmentPair::new(
                    &[],
                    &[word],
                    gap + 1..gap + 1,
                    pair.tgt_span.end..pair.tgt_span.end + 1,
                ));
                continue;
            }
            let first = &pair.tgt_words[0];
            let without_first = pair.tgt_words[1..].join(" ");
            if edit_distance(&src, &without_first, costs) + word_cost(first) <= full + 1e-9 {
                let word = pair.tgt_words.remove(0);
                leading.push(WordAlignmentPair::new(
                    &[],
                    &[word],
                    gap..gap,
                    pair.tgt_span.start..pair.tgt_span.start + 1,
                ));
                pair.tgt_span.start += 1;
                continue;
            }
            break;
        }
        out.extend(leading);
        out.push(pair);
        out.extend(trailing.into_iter().rev());
    }
    out
}
