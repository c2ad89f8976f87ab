use std::path::Path;

use super::AnnotateError;
use crate::alignment::EditCosts;
use crate::morphology::TopK;

pub const DEFAULT_ENUMERATION_CAP: usize = 8;
/// Hard ceiling on the cap: 2^16 subsets per word pair.
pub const MAX_ENUMERATION_CAP: usize = 16;

/// Annotation settings. Loadable from a `key=value` file with keys
/// `top_k`, `enumeration_cap`, `sw_threshold` and `space_penalty`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnotatorConfig {
    pub top_k: TopK,
    pub enumeration_cap: usize,
    pub sw_threshold: f64,
    pub costs: EditCosts,
    /// Worker threads for corpus annotation; 0 picks the rayon default.
    pub jobs: usize,
}

impl Default for AnnotatorConfig {
    fn default() -> Self {
        AnnotatorConfig {
            top_k: TopK::All,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            sw_threshold: 0.5,
            costs: EditCosts::default(),
            jobs: 0,
        }
    }
}

impl AnnotatorConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, AnnotateError> {
        Self::from_kv(&std::fs::read_to_string(path)?)
    }

    pub fn from_kv(text: &str) -> Result<Self, AnnotateError> {
        let mut cfg = AnnotatorConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let bad = |reason: String| AnnotateError::BadConfig { line, reason };
            let (key, value) = raw.split_once('=').ok_or_else(|| bad("expected key=value".into()))?;
            let value = value.trim();
            let number = |v: &str| v.parse::<f64>().map_err(|_| bad(format!("{v:?} is not a number")));
            match key.trim() {
                "top_k" => cfg.top_k = value.parse().map_err(|e| bad(format!("{e}")))?,
                "enumeration_cap" => {
                    cfg.enumeration_cap = value.parse().map_err(|_| bad(format!("{value:?} is not a count")))?
                }
                "sw_threshold" => cfg.sw_threshold = number(value)?,
                "space_penalty" => cfg.costs.space_penalty = number(value)?,
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), AnnotateError> {
        let bad = |reason: String| Err(AnnotateError::BadConfig { line: 0, reason });
        if !(self.sw_threshold > 0.0 && self.sw_threshold <= 1.0) {
            return bad(format!("sw_threshold {} outside (0, 1]", self.sw_threshold));
        }
        if self.enumeration_cap > MAX_ENUMERATION_CAP {
            return bad(format!("enumeration_cap {} above {MAX_ENUMERATION_CAP}", self.enumeration_cap));
        }
        if self.costs.space_penalty.is_nan() || self.costs.space_penalty < 0.0 {
            return bad(format!("space_penalty {} is negative", self.costs.space_penalty));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let cfg = AnnotatorConfig::from_kv("# run\ntop_k = 2\nenumeration_cap=6\nsw_threshold=0.4\nspace_penalty=1\n").unwrap();
        assert_eq!(cfg.top_k, TopK::N(2));
        assert_eq!(cfg.enumeration_cap, 6);
        assert_eq!(cfg.sw_threshold, 0.4);
        assert_eq!(cfg.costs.space_penalty, 1.0);
    }

    #[test]
    fn empty_file_is_default() {
        assert_eq!(AnnotatorConfig::from_kv("").unwrap(), AnnotatorConfig::default());
    }

    #[test]
    fn rejects_bad_values() {
        for text in ["top_k=0", "sw_threshold=0", "sw_threshold=1.5", "enumeration_cap=40", "colour=red", "top_k"] {
            assert!(matches!(AnnotatorConfig::from_kv(text), Err(AnnotateError::BadConfig { .. })), "{text}");
        }
    }
}
