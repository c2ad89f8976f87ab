//! Arabic script utilities: normalization, character classes and
//! table-driven transliteration.
//!
//! All internal processing works on Unicode Arabic. Transliteration is
//! only used for reading and writing human-friendly ASCII forms.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

const BUNDLED_BUCKWALTER: &str = include_str!("../data/buckwalter.tsv");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScriptError {
    #[error("no table entry for {ch:?} at position {position}")]
    UncoveredCodepoint { position: usize, ch: char },
    #[error("transliteration table line {line}: {reason}")]
    BadTable { line: usize, reason: String },
}

/// Coarse character classes used by the regex rules and the edit classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharClass {
    HamzaForm,
    BareAlif,
    TaMarbuta,
    Ha,
    Ta,
    AlifMaqsura,
    Ya,
    Waw,
    LongVowelLetter,
    ShortVowelDiacritic,
    Tanwin,
    Nun,
    ArabicPunct,
    LatinPunct,
    Digit,
    OtherLetter,
    Other,
}

pub fn classify(ch: char) -> CharClass {
    use CharClass::*;
    match ch {
        'ء' | 'أ' | 'إ' | 'آ' | 'ؤ' | 'ئ' => HamzaForm,
        'ا' => BareAlif,
        'ة' => TaMarbuta,
        'ه' => Ha,
        'ت' => Ta,
        'ى' => AlifMaqsura,
        'ي' => Ya,
        'و' => Waw,
        'ن' => Nun,
        '\u{0670}' | 'ٱ' | 'ی' => LongVowelLetter,
        '\u{064B}'..='\u{064D}' => Tanwin,
        '\u{064E}'..='\u{0652}' => ShortVowelDiacritic,
        '،' | '؛' | '؟' | '٪' | '٫' | '٬' | '۔' | '«' | '»' | '﴾' | '﴿' => ArabicPunct,
        '…' | '–' | '—' | '‘' | '’' | '“' | '”' => LatinPunct,
        c if c.is_ascii_punctuation() => LatinPunct,
        '0'..='9' | '\u{0660}'..='\u{0669}' | '\u{06F0}'..='\u{06F9}' => Digit,
        c if c.is_alphabetic() => OtherLetter,
        _ => Other,
    }
}

impl CharClass {
    pub fn is_punct(self) -> bool {
        matches!(self, CharClass::ArabicPunct | CharClass::LatinPunct)
    }

    pub fn is_diacritic(self) -> bool {
        matches!(self, CharClass::ShortVowelDiacritic | CharClass::Tanwin)
    }
}

/// The long-vowel letters ا و ي.
pub fn is_long_vowel(ch: char) -> bool {
    matches!(ch, 'ا' | 'و' | 'ي')
}

pub fn is_punct(ch: char) -> bool {
    classify(ch).is_punct()
}

pub fn is_diacritic(ch: char) -> bool {
    classify(ch).is_diacritic() || ch == '\u{0670}'
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NormalizeOptions {
    pub strip_diacritics: bool,
    pub unify_digits: bool,
}

/// NFC-compose, optionally strip diacritics and map Arabic-Indic digits to
/// ASCII, then collapse whitespace runs and trim.
pub fn normalize(text: &str, opts: NormalizeOptions) -> String {
    // Stripping a mark can expose a new composable pair, so compose twice.
    let filtered: String = text
        .nfc()
        .filter(|&ch| !(opts.strip_diacritics && is_diacritic(ch)))
        .map(|ch| if opts.unify_digits { ascii_digit(ch) } else { ch })
        .collect();
    let mut out = String::with_capacity(filtered.len());
    let mut pending_space = false;
    for ch in filtered.nfc() {
        if ch.is_whitespace() {
            pending_space = !out.is_empty();
            continue;
        }
        if pending_space {
            out.push(' ');
            pending_space = false;
        }
        out.push(ch);
    }
    out
}

pub fn strip_diacritics(text: &str) -> String {
    text.chars().filter(|&c| !is_diacritic(c)).collect()
}

fn ascii_digit(ch: char) -> char {
    match ch {
        '\u{0660}'..='\u{0669}' => char::from(b'0' + (ch as u32 - 0x0660) as u8),
        '\u{06F0}'..='\u{06F9}' => char::from(b'0' + (ch as u32 - 0x06F0) as u8),
        _ => ch,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Arabic script to ASCII symbols.
    To,
    /// ASCII symbols back to Arabic script.
    From,
}

/// A strictly one-to-one character table. Whitespace passes through
/// unchanged in both directions and may not appear in the table.
#[derive(Debug, Clone)]
pub struct TranslitScheme {
    name: String,
    to_symbol: HashMap<char, char>,
    from_symbol: HashMap<char, char>,
}

impl TranslitScheme {
    pub fn buckwalter() -> Self {
        Self::from_tsv("buckwalter", BUNDLED_BUCKWALTER).expect("bundled table is valid")
    }

    /// Parse a two-column TSV: `codepoint<TAB>symbol`. The codepoint column
    /// holds either the literal character or a `U+XXXX` escape.
    pub fn from_tsv(name: &str, text: &str) -> Result<Self, ScriptError> {
        let mut to_symbol = HashMap::new();
        let mut from_symbol = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.trim_end_matches('\r');
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: &str| ScriptError::BadTable {
                line: lineno,
                reason: reason.to_string(),
            };
            let (cp, sym) = line.split_once('\t').ok_or_else(|| bad("expected two columns"))?;
            let cp = parse_codepoint(cp).ok_or_else(|| bad("bad codepoint column"))?;
            let mut sym_chars = sym.chars();
            let sym = match (sym_chars.next(), sym_chars.next()) {
                (Some(c), None) => c,
                _ => return Err(bad("symbol must be a single character")),
            };
            if cp.is_whitespace() || sym.is_whitespace() {
                return Err(bad("whitespace is reserved"));
            }
            if to_symbol.insert(cp, sym).is_some() {
                return Err(bad("duplicate codepoint"));
            }
            if from_symbol.insert(sym, cp).is_some() {
                return Err(bad("duplicate symbol"));
            }
        }
        Ok(Self {
            name: name.to_string(),
            to_symbol,
            from_symbol,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Characters covered in the Arabic-to-ASCII direction.
    pub fn domain(&self) -> impl Iterator<Item = char> + '_ {
        self.to_symbol.keys().copied()
    }

    pub fn transliterate(&self, text: &str, direction: Direction) -> Result<String, ScriptError> {
        let table = match direction {
            Direction::To => &self.to_symbol,
            Direction::From => &self.from_symbol,
        };
        text.chars()
            .enumerate()
            .map(|(position, ch)| {
                if ch.is_whitespace() {
                    Ok(ch)
                } else {
                    table
                        .get(&ch)
                        .copied()
                        .ok_or(ScriptError::UncoveredCodepoint { position, ch })
                }
            })
            .collect()
    }
}

impl fmt::Display for TranslitScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} entries)", self.name, self.to_symbol.len())
    }
}

fn parse_codepoint(s: &str) -> Option<char> {
    let s = s.trim();
    if let Some(hex) = s.strip_prefix("U+").or_else(|| s.strip_prefix("u+")) {
        return u32::from_str_radix(hex, 16).ok().and_then(char::from_u32);
    }
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalize_trims_and_collapses() {
        let opts = NormalizeOptions::default();
        assert_eq!(normalize("كتاب ", opts), "كتاب");
        assert_eq!(normalize("  في   السيارة \t الحمراء ", opts), "في السيارة الحمراء");
        assert_eq!(normalize("كتب", opts), "كتب");
    }

    #[test]
    fn normalize_strips_diacritics_on_request() {
        let strip = NormalizeOptions {
            strip_diacritics: true,
            ..Default::default()
        };
        assert_eq!(normalize("كَتَبَ", strip), "كتب");
        assert_eq!(normalize("كَتَبَ", NormalizeOptions::default()), "كَتَبَ");
    }

    #[test]
    fn normalize_composes_hamza() {
        // alif + combining hamza above composes to U+0623
        assert_eq!(normalize("\u{0627}\u{0654}حمر", NormalizeOptions::default()), "أحمر");
    }

    #[test]
    fn normalize_unifies_digits() {
        let opts = NormalizeOptions {
            unify_digits: true,
            ..Default::default()
        };
        assert_eq!(normalize("٢٠١٤ ۱۲", opts), "2014 12");
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify('ة'), CharClass::TaMarbuta);
        assert_eq!(classify('\u{064B}'), CharClass::Tanwin);
        assert_eq!(classify('،'), CharClass::ArabicPunct);
        assert_eq!(classify('.'), CharClass::LatinPunct);
        assert_eq!(classify('آ'), CharClass::HamzaForm);
        assert_eq!(classify('ا'), CharClass::BareAlif);
        assert_eq!(classify('٣'), CharClass::Digit);
        assert_eq!(classify('ك'), CharClass::OtherLetter);
        assert_eq!(classify(' '), CharClass::Other);
        for c in ['ا', 'و', 'ي'] {
            assert!(is_long_vowel(c));
        }
        assert!(!is_long_vowel('ى'));
    }

    #[test]
    fn buckwalter_examples() {
        let bw = TranslitScheme::buckwalter();
        assert_eq!(bw.transliterate("فعل", Direction::To).unwrap(), "fEl");
        assert_eq!(bw.transliterate("fEl", Direction::From).unwrap(), "فعل");
        assert_eq!(bw.transliterate("ة", Direction::To).unwrap(), "p");
        assert_eq!(bw.transliterate("p", Direction::From).unwrap(), "ة");
        assert_eq!(
            bw.transliterate("x", Direction::To),
            Err(ScriptError::UncoveredCodepoint { position: 0, ch: 'x' })
        );
        assert_eq!(
            bw.transliterate("بالسياره أحمر", Direction::To).unwrap(),
            "bAlsyArh >Hmr"
        );
    }

    #[test]
    fn table_rejects_non_bijective_rows() {
        let err = TranslitScheme::from_tsv("t", "U+0628\tb\nU+062A\tb\n").unwrap_err();
        assert!(matches!(err, ScriptError::BadTable { line: 2, .. }));
        let err = TranslitScheme::from_tsv("t", "ب\tbb\n").unwrap_err();
        assert!(matches!(err, ScriptError::BadTable { line: 1, .. }));
        let ok = TranslitScheme::from_tsv("t", "ب\tb\n").unwrap();
        assert_eq!(ok.transliterate("بب", Direction::To).unwrap(), "bb");
    }

    fn arabic_string() -> impl Strategy<Value = String> {
        let mut domain: Vec<char> = TranslitScheme::buckwalter().domain().collect();
        domain.push(' ');
        domain.sort();
        prop::collection::vec(prop::sample::select(domain), 0..24)
            .prop_map(|cs| cs.into_iter().collect())
    }

    proptest! {
        #[test]
        fn transliteration_round_trips(s in arabic_string()) {
            let bw = TranslitScheme::buckwalter();
            let ascii = bw.transliterate(&s, Direction::To).unwrap();
            prop_assert!(ascii.is_ascii());
            prop_assert_eq!(bw.transliterate(&ascii, Direction::From).unwrap(), s);
        }

        #[test]
        fn normalize_is_idempotent(s in "\\PC{0,30}", strip in any::<bool>(), digits in any::<bool>()) {
            let opts = NormalizeOptions { strip_diacritics: strip, unify_digits: digits };
            let once = normalize(&s, opts);
            prop_assert_eq!(normalize(&once, opts), once.clone());
        }
    }
}
