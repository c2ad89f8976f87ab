//! Error-tag vocabulary and complex-tag composition.
//!
//! Atomic tags follow the learner-corpus taxonomy extended with merge (MG)
//! and split (SP). The five `*Other` tags are parseable so that gold files
//! using them can be scored, but the annotator never produces them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TaxonomyError {
    #[error("unknown tag code {0:?}")]
    UnknownTagCode(String),
    #[error("meta tag {0} cannot be combined with other tags")]
    MetaTagNotAlone(ErrorTag),
    #[error("empty tag")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TagClass {
    Orthographic,
    Morphological,
    Syntactic,
    Semantic,
    Punctuation,
    MergeSplit,
    Meta,
}

macro_rules! error_tags {
    ($( $variant:ident => $class:ident, $desc:literal; )*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum ErrorTag {
            $( $variant, )*
        }

        impl ErrorTag {
            pub const ALL: &'static [ErrorTag] = &[$( ErrorTag::$variant, )*];

            pub fn code(self) -> &'static str {
                match self {
                    $( ErrorTag::$variant => stringify!($variant), )*
                }
            }

            pub fn class(self) -> TagClass {
                match self {
                    $( ErrorTag::$variant => TagClass::$class, )*
                }
            }

            pub fn description(self) -> &'static str {
                match self {
                    $( ErrorTag::$variant => $desc, )*
                }
            }
        }

        impl FromStr for ErrorTag {
            type Err = TaxonomyError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s.trim() {
                    $( stringify!($variant) => Ok(ErrorTag::$variant), )*
                    other => Err(TaxonomyError::UnknownTagCode(other.to_string())),
                }
            }
        }
    };
}

error_tags! {
    OA => Orthographic, "Alif Maqsura / Ya confusion";
    OC => Orthographic, "wrong order of characters";
    OD => Orthographic, "additional character";
    OG => Orthographic, "lengthening of short vowel";
    OH => Orthographic, "Hamza error";
    OM => Orthographic, "missing character";
    ON => Orthographic, "Nun / Tanwin confusion";
    OO => Orthographic, "other orthographic error";
    OR => Orthographic, "replaced character";
    OS => Orthographic, "shortening of long vowel";
    OT => Orthographic, "Ha / Ta / Ta-Marbuta confusion";
    OW => Orthographic, "Alif Fariqa confusion";
    MI => Morphological, "incorrect inflection";
    MO => Morphological, "other morphological error";
    MT => Morphological, "verb tense";
    XC => Syntactic, "case";
    XF => Syntactic, "definiteness";
    XG => Syntactic, "gender";
    XM => Syntactic, "missing word";
    XN => Syntactic, "number";
    XO => Syntactic, "other syntactic error";
    XT => Syntactic, "unnecessary word";
    SF => Semantic, "Fasl / Wasl (conjunction) error";
    SO => Semantic, "other semantic error";
    SW => Semantic, "word selection";
    PC => Punctuation, "punctuation confusion";
    PM => Punctuation, "missing punctuation";
    PO => Punctuation, "other punctuation error";
    PT => Punctuation, "unnecessary punctuation";
    MG => MergeSplit, "words are merged";
    SP => MergeSplit, "words are split";
    UC => Meta, "unchanged";
    UNK => Meta, "unclassifiable";
}

impl ErrorTag {
    /// The `*Other` tags: accepted in gold input, never produced.
    pub fn is_other(self) -> bool {
        matches!(
            self,
            ErrorTag::OO | ErrorTag::MO | ErrorTag::XO | ErrorTag::SO | ErrorTag::PO
        )
    }

    pub fn is_meta(self) -> bool {
        self.class() == TagClass::Meta
    }

    /// Tags the annotator can emit (26 error tags plus the two meta tags).
    pub fn producible() -> impl Iterator<Item = ErrorTag> {
        Self::ALL.iter().copied().filter(|t| !t.is_other())
    }
}

impl fmt::Display for ErrorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl PartialOrd for ErrorTag {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Alphabetical by code.
impl Ord for ErrorTag {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.code().cmp(other.code())
    }
}

impl Serialize for ErrorTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

/// A non-empty set of atomic tags rendered in alphabetical order joined by
/// `+`. `UC` and `UNK` only ever appear alone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComplexTag(BTreeSet<ErrorTag>);

impl ComplexTag {
    pub fn single(tag: ErrorTag) -> Self {
        ComplexTag(BTreeSet::from([tag]))
    }

    pub fn unchanged() -> Self {
        Self::single(ErrorTag::UC)
    }

    pub fn unknown() -> Self {
        Self::single(ErrorTag::UNK)
    }

    /// Deduplicate and canonicalize. Meta tags are absorbed when any real
    /// error tag is present; `UNK` wins over `UC` when only meta tags remain.
    pub fn combine<I: IntoIterator<Item = ErrorTag>>(tags: I) -> Result<Self, TaxonomyError> {
        let all: BTreeSet<ErrorTag> = tags.into_iter().collect();
        let errors: BTreeSet<ErrorTag> = all.iter().copied().filter(|t| !t.is_meta()).collect();
        if !errors.is_empty() {
            Ok(ComplexTag(errors))
        } else if all.contains(&ErrorTag::UNK) {
            Ok(Self::unknown())
        } else if all.contains(&ErrorTag::UC) {
            Ok(Self::unchanged())
        } else {
            Err(TaxonomyError::Empty)
        }
    }

    pub fn tags(&self) -> impl Iterator<Item = ErrorTag> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, tag: ErrorTag) -> bool {
        self.0.contains(&tag)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_unchanged(&self) -> bool {
        self.0.len() == 1 && self.0.contains(&ErrorTag::UC)
    }

    pub fn is_meta(&self) -> bool {
        self.0.iter().all(|t| t.is_meta())
    }

    /// Union with another complex tag, re-applying the meta absorption rule.
    pub fn merge(&self, other: &ComplexTag) -> ComplexTag {
        ComplexTag::combine(self.tags().chain(other.tags())).expect("both sides non-empty")
    }
}

impl fmt::Display for ComplexTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for tag in &self.0 {
            if !first {
                f.write_str("+")?;
            }
            f.write_str(tag.code())?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for ComplexTag {
    type Err = TaxonomyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tag(s)
    }
}

impl Serialize for ComplexTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ComplexTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_tag(&s).map_err(serde::de::Error::custom)
    }
}

/// Parse a `+`-separated tag string into its canonical form.
pub fn parse_tag(s: &str) -> Result<ComplexTag, TaxonomyError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(TaxonomyError::Empty);
    }
    let tags = s
        .split('+')
        .map(ErrorTag::from_str)
        .collect::<Result<BTreeSet<_>, _>>()?;
    if tags.len() > 1 {
        if let Some(meta) = tags.iter().find(|t| t.is_meta()) {
            return Err(TaxonomyError::MetaTagNotAlone(*meta));
        }
    }
    Ok(ComplexTag(tags))
}
