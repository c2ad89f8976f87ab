use std::collections::HashMap;
use std::path::Path;

use super::{AnnotateError, EditPath, OrthoKind};
use crate::morphology::{Feature, FeatureEdit};
use crate::taxonomy::{ComplexTag, ErrorTag};

const BUNDLED_MAPPING: &str = include_str!("../../data/mapping.tsv");

/// Edit-to-tag table, loaded from `key<TAB>tag` lines. Keys are ortho edit
/// kinds (`HamzaSwap`), features (`gen`) or qualified features
/// (`prc0:Al_det`).
#[derive(Debug, Clone)]
pub struct MappingTable {
    ortho: HashMap<OrthoKind, ErrorTag>,
    qualified: Vec<(Feature, String, ErrorTag)>,
    features: HashMap<Feature, ErrorTag>,
}

impl Default for MappingTable {
    fn default() -> Self {
        Self::bundled()
    }
}

impl MappingTable {
    pub fn bundled() -> Self {
        Self::from_tsv(BUNDLED_MAPPING).expect("bundled mapping is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, AnnotateError> {
        Self::from_tsv(&std::fs::read_to_string(path)?)
    }

    pub fn from_tsv(text: &str) -> Result<Self, AnnotateError> {
        let mut table = MappingTable {
            ortho: HashMap::new(),
            qualified: Vec::new(),
            features: HashMap::new(),
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let bad = |reason: String| AnnotateError::BadMapping { line, reason };
            let (key, tag) = raw.split_once('\t').ok_or_else(|| bad("expected key<TAB>tag".into()))?;
            let tag: ErrorTag = tag.trim().parse().map_err(|e| bad(format!("{e}")))?;
            if tag.is_meta() {
                return Err(bad(format!("meta tag {} cannot be a mapping target", tag.code())));
            }
            let key = key.trim();
            if let Some(kind) = OrthoKind::ALL.into_iter().find(|k| k.name() == key) {
                table.ortho.insert(kind, tag);
            } else if let Some((feature, value)) = key.split_once(':') {
                let feature: Feature = feature.parse().map_err(bad)?;
                table.qualified.push((feature, value.to_string(), tag));
            } else {
                let feature: Feature = key.parse().map_err(bad)?;
                table.features.insert(feature, tag);
            }
        }
        Ok(table)
    }

    pub fn ortho_tag(&self, kind: OrthoKind) -> Option<ErrorTag> {
        self.ortho.get(&kind).copied()
    }

    pub fn feature_tag(&self, edit: &FeatureEdit) -> Option<ErrorTag> {
        self.qualified
            .iter()
            .find(|(f, v, _)| *f == edit.feature && (edit.from.contains(v.as_str()) || edit.to.contains(v.as_str())))
            .map(|&(_, _, tag)| tag)
            .or_else(|| self.features.get(&edit.feature).copied())
    }
}

/// Tags for an edit path. A purely orthographic path containing plain
/// character edits that touch at least `sw_threshold` of the source word
/// becomes a single word-selection error. Edits missing from the table
/// yield `UNK`.
pub fn map_edits_to_tags(path: &EditPath, src_len: usize, table: &MappingTable, sw_threshold: f64) -> ComplexTag {
    if path.orth_edits.is_empty() && path.morph_edits.is_empty() {
        return ComplexTag::unchanged();
    }
    if path.morph_edits.is_empty() && path.orth_edits.iter().any(|e| e.kind.is_generic()) {
        let affected: usize = path.orth_edits.iter().map(|e| e.affected()).sum();
        if affected as f64 >= sw_threshold * src_len.max(1) as f64 {
            return ComplexTag::single(ErrorTag::SW);
        }
    }
    let ortho = path.orth_edits.iter().map(|e| table.ortho_tag(e.kind));
    let morph = path.morph_edits.iter().map(|e| table.feature_tag(e));
    match ortho.chain(morph).collect::<Option<Vec<ErrorTag>>>() {
        Some(tags) => ComplexTag::combine(tags).unwrap_or_else(|_| ComplexTag::unknown()),
        None => ComplexTag::unknown(),
    }
}
