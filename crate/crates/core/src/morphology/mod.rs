//! File-backed morphological analysis: lexicon lookup, frequency-ranked
//! disambiguation, feature diffs and clitic (ATB-style) tokenization.

mod db;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

pub use db::{AnalyzerDb, FeatureVocab, DEFAULT_ANALYSIS_CAP};

#[derive(Debug, Error)]
pub enum MorphError {
    #[error("reading lexicon: {0}")]
    Io(#[from] std::io::Error),
    #[error("lexicon line {line}: {reason}")]
    BadRow { line: usize, reason: String },
    #[error("lexicon line {line}: value {value:?} not in the {feature} vocabulary")]
    UnknownFeatureValue {
        line: usize,
        feature: Feature,
        value: String,
    },
    #[error("lexicon line {line}: tokenization {atbtok:?} does not rebuild diacritized form {diac:?}")]
    InconsistentTokenization {
        line: usize,
        atbtok: String,
        diac: String,
    },
    #[error("invalid analysis count {0:?} (expected a positive integer or \"all\")")]
    BadTopK(String),
}

/// Clitic and inflectional features compared by [`morph_diff`], in the
/// order edits are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Feature {
    Prc0,
    Prc1,
    Prc2,
    Enc0,
    Per,
    Gen,
    Num,
    Asp,
    Vox,
    Mod,
    Stt,
    Cas,
}

impl Feature {
    pub const ALL: [Feature; 12] = [
        Feature::Prc0,
        Feature::Prc1,
        Feature::Prc2,
        Feature::Enc0,
        Feature::Per,
        Feature::Gen,
        Feature::Num,
        Feature::Asp,
        Feature::Vox,
        Feature::Mod,
        Feature::Stt,
        Feature::Cas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Feature::Prc0 => "prc0",
            Feature::Prc1 => "prc1",
            Feature::Prc2 => "prc2",
            Feature::Enc0 => "enc0",
            Feature::Per => "per",
            Feature::Gen => "gen",
            Feature::Num => "num",
            Feature::Asp => "asp",
            Feature::Vox => "vox",
            Feature::Mod => "mod",
            Feature::Stt => "stt",
            Feature::Cas => "cas",
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Feature {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Feature::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown feature {s:?}"))
    }
}

/// One morphological reading of a word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Analysis {
    pub lex: String,
    pub pos: String,
    pub prc0: String,
    pub prc1: String,
    pub prc2: String,
    pub enc0: String,
    pub per: String,
    pub gen: String,
    pub num: String,
    pub asp: String,
    pub vox: String,
    pub r#mod: String,
    pub stt: String,
    pub cas: String,
    pub diac: String,
    /// Clitic-segmented form: tokens separated by `_`, clitic boundaries
    /// marked with `+` (`ب+_السيارة`).
    pub atbtok: String,
    pub freq: u64,
}

impl Analysis {
    pub fn feature(&self, f: Feature) -> &str {
        match f {
            Feature::Prc0 => &self.prc0,
            Feature::Prc1 => &self.prc1,
            Feature::Prc2 => &self.prc2,
            Feature::Enc0 => &self.enc0,
            Feature::Per => &self.per,
            Feature::Gen => &self.gen,
            Feature::Num => &self.num,
            Feature::Asp => &self.asp,
            Feature::Vox => &self.vox,
            Feature::Mod => &self.r#mod,
            Feature::Stt => &self.stt,
            Feature::Cas => &self.cas,
        }
    }

    fn feature_mut(&mut self, f: Feature) -> &mut String {
        match f {
            Feature::Prc0 => &mut self.prc0,
            Feature::Prc1 => &mut self.prc1,
            Feature::Prc2 => &mut self.prc2,
            Feature::Enc0 => &mut self.enc0,
            Feature::Per => &mut self.per,
            Feature::Gen => &mut self.gen,
            Feature::Num => &mut self.num,
            Feature::Asp => &mut self.asp,
            Feature::Vox => &mut self.vox,
            Feature::Mod => &mut self.r#mod,
            Feature::Stt => &mut self.stt,
            Feature::Cas => &mut self.cas,
        }
    }

    /// A reading with every feature set to `na`; handy for fixtures.
    pub fn bare(lex: &str, pos: &str) -> Self {
        let na = || "na".to_string();
        Analysis {
            lex: lex.to_string(),
            pos: pos.to_string(),
            prc0: "0".into(),
            prc1: "0".into(),
            prc2: "0".into(),
            enc0: "0".into(),
            per: na(),
            gen: na(),
            num: na(),
            asp: na(),
            vox: na(),
            r#mod: na(),
            stt: na(),
            cas: na(),
            diac: lex.to_string(),
            atbtok: lex.to_string(),
            freq: 0,
        }
    }

    pub fn with(mut self, f: Feature, value: &str) -> Self {
        *self.feature_mut(f) = value.to_string();
        self
    }

    pub fn tokens(&self) -> Vec<String> {
        self.atbtok.split('_').filter(|t| !t.is_empty()).map(String::from).collect()
    }
}

/// Rebuild the surface spelling from a clitic tokenization: markers are
/// dropped, `ل+` followed by the article contracts to `لل`, and a
/// Ta-Marbuta before an enclitic surfaces as `ت`.
pub fn surface_from_tokens(tokens: &[String]) -> String {
    let mut out = String::new();
    for (i, tok) in tokens.iter().enumerate() {
        let mut bare: String = tok.trim_matches('+').to_string();
        if i > 0 && tokens[i - 1] == "ل+" && bare.starts_with("ال") {
            bare = bare.replacen("ال", "ل", 1);
        }
        if tok.starts_with('+') && out.ends_with('ة') {
            out.pop();
            out.push('ت');
        }
        out.push_str(&bare);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FeatureEdit {
    pub feature: Feature,
    pub from: String,
    pub to: String,
}

impl fmt::Display for FeatureEdit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}→{}", self.feature, self.from, self.to)
    }
}

/// One edit per differing clitic or inflectional feature. Lemma, POS,
/// diacritization, tokenization and frequency are not compared.
pub fn morph_diff(a: &Analysis, b: &Analysis) -> Vec<FeatureEdit> {
    Feature::ALL
        .into_iter()
        .filter(|&f| a.feature(f) != b.feature(f))
        .map(|f| FeatureEdit {
            feature: f,
            from: a.feature(f).to_string(),
            to: b.feature(f).to_string(),
        })
        .collect()
}

pub fn morph_distance(a: &Analysis, b: &Analysis) -> usize {
    Feature::ALL.into_iter().filter(|&f| a.feature(f) != b.feature(f)).count()
}

/// Cross product of the two analysis lists restricted to pairs with the
/// same lemma and POS.
pub fn shared_lexpos_pairs<'a>(
    src: &'a [Analysis],
    tgt: &'a [Analysis],
) -> Vec<(&'a Analysis, &'a Analysis)> {
    src.iter()
        .flat_map(|a| {
            tgt.iter()
                .filter(move |b| a.lex == b.lex && a.pos == b.pos)
                .map(move |b| (a, b))
        })
        .collect()
}

/// How many ranked analyses to keep per word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TopK {
    N(usize),
    #[default]
    All,
}

impl TopK {
    pub fn limit(self, n: usize) -> usize {
        match self {
            TopK::N(k) => k.min(n),
            TopK::All => n,
        }
    }
}

impl FromStr for TopK {
    type Err = MorphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("all") {
            return Ok(TopK::All);
        }
        match s.parse::<usize>() {
            Ok(k) if k > 0 => Ok(TopK::N(k)),
            _ => Err(MorphError::BadTopK(s.to_string())),
        }
    }
}

impl fmt::Display for TopK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopK::N(k) => write!(f, "{k}"),
            TopK::All => f.write_str("all"),
        }
    }
}
