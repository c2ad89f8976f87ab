use super::{CharOp, EditCosts, OpKind};

const EPS: f64 = 1e-9;

fn cost_table(src: &[char], tgt: &[char], costs: &EditCosts) -> Vec<Vec<f64>> {
    let (n, m) = (src.len(), tgt.len());
    let mut d = vec![vec![0.0f64; m + 1]; n + 1];
    for i in 1..=n {
        d[i][0] = d[i - 1][0] + costs.del;
    }
    for j in 1..=m {
        d[0][j] = d[0][j - 1] + costs.ins;
    }
    for i in 1..=n {
        for j in 1..=m {
            let diag = d[i - 1][j - 1] + costs.substitution(src[i - 1], tgt[j - 1]);
            let del = d[i - 1][j] + costs.del;
            let ins = d[i][j - 1] + costs.ins;
            d[i][j] = diag.min(del).min(ins);
        }
    }
    d
}

/// Minimal weighted edit cost between two strings.
pub fn edit_distance(src: &str, tgt: &str, costs: &EditCosts) -> f64 {
    let s: Vec<char> = src.chars().collect();
    let t: Vec<char> = tgt.chars().collect();
    // Two-row variant of `cost_table`.
    let mut prev: Vec<f64> = (0..=t.len()).map(|j| j as f64 * costs.ins).collect();
    let mut cur = vec![0.0; t.len() + 1];
    for i in 1..=s.len() {
        cur[0] = i as f64 * costs.del;
        for j in 1..=t.len() {
            let diag = prev[j - 1] + costs.substitution(s[i - 1], t[j - 1]);
            cur[j] = diag.min(prev[j] + costs.del).min(cur[j - 1] + costs.ins);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[t.len()]
}

/// Minimal-cost character alignment. At equal cost the backtrace prefers
/// Match, then Substitute, then Delete, then Insert.
pub fn char_align(src: &str, tgt: &str, costs: &EditCosts) -> Vec<CharOp> {
    let s: Vec<char> = src.chars().collect();
    let t: Vec<char> = tgt.chars().collect();
    let d = cost_table(&s, &t, costs);
    let (mut i, mut j) = (s.len(), t.len());
    let mut ops = Vec::with_capacity(i.max(j));
    while i > 0 || j > 0 {
        let here = d[i][j];
        if i > 0 && j > 0 {
            let diag = d[i - 1][j - 1] + costs.substitution(s[i - 1], t[j - 1]);
            if (diag - here).abs() < EPS {
                ops.push(if s[i - 1] == t[j - 1] {
                    CharOp::matched(i - 1, j - 1)
                } else {
                    CharOp::substitute(i - 1, j - 1)
                });
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && (d[i - 1][j] + costs.del - here).abs() < EPS {
            ops.push(CharOp::delete(i - 1));
            i -= 1;
            continue;
        }
        debug_assert!(j > 0);
        ops.push(CharOp::insert(j - 1));
        j -= 1;
    }
    ops.reverse();
    ops
}

/// Total cost of an op sequence under the given costs.
pub fn alignment_cost(ops: &[CharOp], src: &str, tgt: &str, costs: &EditCosts) -> f64 {
    let s: Vec<char> = src.chars().collect();
    let t: Vec<char> = tgt.chars().collect();
    ops.iter()
        .map(|op| match op.kind {
            OpKind::Match => 0.0,
            OpKind::Substitute => costs.substitution(s[op.src.unwrap()], t[op.tgt.unwrap()]),
            OpKind::Insert => costs.ins,
            OpKind::Delete => costs.del,
        })
        .sum()
}
