use super::mapping::map_edits_to_tags;
use super::ortho::{apply_edits, edit_list};
use super::{Annotator, EditPath};
use crate::morphology::{morph_diff, shared_lexpos_pairs, FeatureEdit};
use crate::taxonomy::ComplexTag;

impl Annotator<'_> {
    /// Every minimum-cost path from `src` to `tgt`: each subset of the
    /// orthographic edit list is applied to the source, then the edited
    /// word's analyses are compared with the target's over shared
    /// lemma/POS pairs. A subset that already produces the target is a
    /// purely orthographic path. Returns `None` when the edit list exceeds
    /// the enumeration cap.
    pub fn minimal_paths(&self, src: &str, tgt: &str) -> Option<Vec<EditPath>> {
        let edits = edit_list(src, tgt);
        if edits.len() > self.config.enumeration_cap {
            return None;
        }
        let k = self.config.top_k;
        let tgt_analyses = self.db.disambiguate(tgt, k);
        let mut best: Option<(usize, usize)> = None;
        let mut paths: Vec<EditPath> = Vec::new();
        let mut consider = |mask: u64, morph: Vec<FeatureEdit>, paths: &mut Vec<EditPath>| {
            let n_orth = mask.count_ones() as usize;
            // cost first, then fewer orthographic edits
            let key = (n_orth + morph.len(), n_orth);
            if best.is_some_and(|b| key > b) {
                return;
            }
            if best != Some(key) {
                best = Some(key);
                paths.clear();
            }
            let orth_edits = edits
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| e.clone())
                .collect();
            let path = EditPath { orth_edits, morph_edits: morph };
            if !paths.contains(&path) {
                paths.push(path);
            }
        };
        for mask in 0..(1u64 << edits.len()) {
            let edited = apply_edits(src, &edits, mask);
            if edited == tgt {
                consider(mask, Vec::new(), &mut paths);
                continue;
            }
            let src_analyses = self.db.disambiguate(&edited, k);
            for (a, b) in shared_lexpos_pairs(src_analyses, tgt_analyses) {
                let morph = morph_diff(a, b);
                if !morph.is_empty() {
                    consider(mask, morph, &mut paths);
                }
            }
        }
        Some(paths)
    }

    /// Shortest edit path for a one-to-one pair. Ties on cost prefer fewer
    /// orthographic edits, then the alphabetically smallest tag. Beyond the
    /// enumeration cap the full orthographic edit list is used.
    pub fn best_path(&self, src: &str, tgt: &str) -> (EditPath, ComplexTag) {
        let len = src.chars().count();
        let tag_of = |p: &EditPath| map_edits_to_tags(p, len, &self.mapping, self.config.sw_threshold);
        match self.minimal_paths(src, tgt) {
            Some(paths) => paths
                .into_iter()
                .map(|p| {
                    let tag = tag_of(&p);
                    (p, tag)
                })
                .min_by(|a, b| a.1.to_string().cmp(&b.1.to_string()))
                .expect("the full edit list always reaches the target"),
            None => {
                let path = EditPath { orth_edits: edit_list(src, tgt), morph_edits: Vec::new() };
                let tag = tag_of(&path);
                (path, tag)
            }
        }
    }
}
