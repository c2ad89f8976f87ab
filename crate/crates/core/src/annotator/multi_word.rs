use super::{Annotator, Outcome};
use crate::alignment::{align, edit_distance, EditCosts, TokenSequence, WordAlignmentPair};
use crate::taxonomy::{ComplexTag, ErrorTag};

/// Upper bound on tokenization combinations tried per pair.
pub const MAX_COMBINATIONS: usize = 16;

struct Combination {
    src: Vec<String>,
    tgt: Vec<String>,
    freq: u64,
}

fn is_attached(token: &str) -> bool {
    token.starts_with('+') || token.ends_with('+')
}

fn bare(token: &str) -> String {
    token.trim_matches('+').to_string()
}

impl Annotator<'_> {
    /// Clitic-tokenize both sides, align the tokens locally and classify
    /// each token pair. Among tokenization combinations the one with the
    /// lowest total path cost wins; ties keep the more frequent one.
    pub fn multi_word(&self, src: &[String], tgt: &[String]) -> Outcome {
        let mut best: Option<Outcome> = None;
        for combo in self.combinations(src, tgt) {
            let outcome = self.tokens_outcome(&combo.src, &combo.tgt);
            if best.as_ref().is_none_or(|b| outcome.cost < b.cost) {
                best = Some(outcome);
            }
        }
        let mut best = best.expect("at least one tokenization per word");
        if best.tag.is_unchanged() && src != tgt {
            // tokens agree but the surface words differ
            best.tag = if src.concat() == tgt.concat() {
                ComplexTag::single(ErrorTag::SP)
            } else {
                ComplexTag::unknown()
            };
            best.cost = 1;
        }
        best
    }

    fn combinations(&self, src: &[String], tgt: &[String]) -> Vec<Combination> {
        let k = self.config.top_k;
        let mut combos = vec![Combination { src: Vec::new(), tgt: Vec::new(), freq: 0 }];
        let sides = src.iter().map(|w| (true, w)).chain(tgt.iter().map(|w| (false, w)));
        for (is_src, word) in sides {
            let options = self.db.tokenizations(word, k);
            let mut next = Vec::with_capacity(combos.len() * options.len());
            for c in &combos {
                for (toks, freq) in &options {
                    let mut c2 = Combination { src: c.src.clone(), tgt: c.tgt.clone(), freq: c.freq + freq };
                    if is_src { &mut c2.src } else { &mut c2.tgt }.extend(toks.iter().cloned());
                    next.push(c2);
                }
            }
            // stable sort keeps lexicon order among equal frequencies
            next.sort_by_key(|c| std::cmp::Reverse(c.freq));
            next.truncate(MAX_COMBINATIONS);
            combos = next;
        }
        combos
    }

    fn tokens_outcome(&self, src: &[String], tgt: &[String]) -> Outcome {
        let s = TokenSequence::from_tokens(src.iter().map(|t| bare(t)));
        let t = TokenSequence::from_tokens(tgt.iter().map(|t| bare(t)));
        let pairs = align(&s, &t, &self.config.costs);
        let mut tags: Vec<ErrorTag> = Vec::new();
        let mut cost = 0;
        for p in &pairs {
            let out = self.token_pair(p, src, tgt);
            tags.extend(out.tag.tags());
            cost += out.cost;
        }
        let tag = ComplexTag::combine(tags).unwrap_or_else(|_| ComplexTag::unchanged());
        Outcome { tag, path: None, cost }
    }

    fn token_pair(&self, p: &WordAlignmentPair, src: &[String], tgt: &[String]) -> Outcome {
        if p.src_words.len() == 1 && p.tgt_words.len() == 1 && p.src_words == p.tgt_words {
            let attached = (is_attached(&src[p.src_span.start]), is_attached(&tgt[p.tgt_span.start]));
            let tag = match attached {
                (true, false) => ErrorTag::SP,
                (false, true) => ErrorTag::MG,
                _ => return Outcome::unchanged(),
            };
            return Outcome { tag: ComplexTag::single(tag), path: None, cost: 1 };
        }
        if p.src_words.len() == 1 && p.tgt_words.len() > 1 {
            // keep the closest target token, the rest are missing words
            let costs = EditCosts::default();
            let (closest, _) = p
                .tgt_words
                .iter()
                .enumerate()
                .map(|(i, w)| (i, edit_distance(&p.src_words[0], w, &costs)))
                .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
            let pair = WordAlignmentPair::from_words(&p.src_words, &p.tgt_words[closest..=closest]);
            let mut out = self.classify_residual(&pair, false);
            let missing = p.tgt_words.len() - 1;
            out.tag = out.tag.merge(&ComplexTag::single(ErrorTag::XM));
            out.cost += missing;
            return out;
        }
        self.classify_residual(p, false)
    }
}
