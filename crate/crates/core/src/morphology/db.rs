use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use super::{surface_from_tokens, Analysis, Feature, MorphError, TopK};
use crate::script::strip_diacritics;

const BUNDLED_LEXICON: &str = include_str!("../../data/mini_lexicon.tsv");

pub const DEFAULT_ANALYSIS_CAP: usize = 50;

const COLUMNS: usize = 18;

/// Closed value sets per feature. Extensible through `#vocab` directives.
#[derive(Debug, Clone)]
pub struct FeatureVocab {
    values: HashMap<Feature, BTreeSet<String>>,
}

impl Default for FeatureVocab {
    fn default() -> Self {
        let mut values: HashMap<Feature, BTreeSet<String>> = HashMap::new();
        let mut add = |f: Feature, vs: &[&str]| {
            values
                .entry(f)
                .or_default()
                .extend(vs.iter().map(|v| v.to_string()));
        };
        add(Feature::Prc0, &["0", "na", "Al_det", "AlmA_neg", "lA_neg", "mA_neg", "mA_part", "mA_rel"]);
        add(
            Feature::Prc1,
            &["0", "na", "bi_prep", "bi_part", "ka_prep", "la_emph", "la_prep", "li_jus", "li_prep", "sa_fut", "ta_prep", "wa_prep", "fy_prep"],
        );
        add(Feature::Prc2, &["0", "na", "wa_conj", "wa_part", "wa_sub", "fa_conj", "fa_conn", "fa_rc", "fa_sub"]);
        add(Feature::Enc0, &["0", "na", "Ah_voc", "lA_neg", "mA_interrog", "mA_rel"]);
        let persons = ["1s", "1p", "2ms", "2fs", "2d", "2mp", "2fp", "3ms", "3fs", "3d", "3mp", "3fp"];
        let enclitics: Vec<String> = persons
            .iter()
            .flat_map(|p| ["dobj", "poss", "pron"].map(|role| format!("{p}_{role}")))
            .collect();
        values.entry(Feature::Enc0).or_default().extend(enclitics);
        let mut add = |f: Feature, vs: &[&str]| {
            values
                .entry(f)
                .or_default()
                .extend(vs.iter().map(|v| v.to_string()));
        };
        add(Feature::Per, &["1", "2", "3", "na"]);
        add(Feature::Gen, &["m", "f", "na"]);
        add(Feature::Num, &["s", "d", "p", "u", "na"]);
        add(Feature::Asp, &["p", "i", "c", "na"]);
        add(Feature::Vox, &["a", "p", "na"]);
        add(Feature::Mod, &["i", "s", "j", "u", "na"]);
        add(Feature::Stt, &["d", "i", "c", "u", "na"]);
        add(Feature::Cas, &["n", "a", "g", "u", "na"]);
        FeatureVocab { values }
    }
}

impl FeatureVocab {
    pub fn contains(&self, f: Feature, value: &str) -> bool {
        self.values.get(&f).is_some_and(|vs| vs.contains(value))
    }

    pub fn extend<I: IntoIterator<Item = String>>(&mut self, f: Feature, values: I) {
        self.values.entry(f).or_default().extend(values);
    }

    pub fn values(&self, f: Feature) -> impl Iterator<Item = &str> {
        self.values.get(&f).into_iter().flatten().map(String::as_str)
    }
}

/// Immutable lexicon: undiacritized surface form to frequency-ranked
/// analyses.
///
/// TSV layout, one analysis per row:
/// `surface lex pos prc0 prc1 prc2 enc0 per gen num asp vox mod stt cas diac atbtok freq`.
/// Lines starting with `#` are comments, except `#version<TAB>v` and
/// `#vocab<TAB>feature<TAB>v1,v2,...`. A header row starting with
/// `surface` is skipped.
#[derive(Debug, Clone)]
pub struct AnalyzerDb {
    entries: HashMap<String, Vec<Analysis>>,
    vocab: FeatureVocab,
    version: String,
}

impl AnalyzerDb {
    /// The bundled mini-lexicon.
    pub fn bundled() -> Self {
        Self::from_tsv(BUNDLED_LEXICON).expect("bundled lexicon is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, MorphError> {
        Self::from_tsv(&std::fs::read_to_string(path)?)
    }

    pub fn from_tsv(text: &str) -> Result<Self, MorphError> {
        Self::from_tsv_with_cap(text, DEFAULT_ANALYSIS_CAP)
    }

    pub fn from_tsv_with_cap(text: &str, cap: usize) -> Result<Self, MorphError> {
        let mut vocab = FeatureVocab::default();
        let mut version = String::from("unversioned");
        let mut entries: HashMap<String, Vec<Analysis>> = HashMap::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let raw = raw.trim_end_matches('\r');
            if raw.trim().is_empty() {
                continue;
            }
            if let Some(directive) = raw.strip_prefix('#') {
                let mut parts = directive.split('\t');
                match parts.next() {
                    Some("version") => {
                        version = parts.next().unwrap_or_default().trim().to_string();
                    }
                    Some("vocab") => {
                        let bad = |reason: &str| MorphError::BadRow { line, reason: reason.into() };
                        let feature: Feature = parts
                            .next()
                            .ok_or_else(|| bad("missing feature name"))?
                            .trim()
                            .parse()
                            .map_err(|e: String| bad(&e))?;
                        let values = parts.next().ok_or_else(|| bad("missing values"))?;
                        vocab.extend(feature, values.split(',').map(|v| v.trim().to_string()));
                    }
                    _ => {}
                }
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').collect();
            if cols[0] == "surface" {
                continue;
            }
            if cols.len() != COLUMNS {
                return Err(MorphError::BadRow {
                    line,
                    reason: format!("expected {COLUMNS} columns, found {}", cols.len()),
                });
            }
            let analysis = parse_row(&cols, line, &vocab)?;
            entries
                .entry(strip_diacritics(cols[0].trim()))
                .or_default()
                .push(analysis);
        }

        for list in entries.values_mut() {
            // stable: file order breaks frequency ties
            list.sort_by_key(|a| std::cmp::Reverse(a.freq));
            list.truncate(cap);
        }
        Ok(AnalyzerDb { entries, vocab, version })
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn vocab(&self) -> &FeatureVocab {
        &self.vocab
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Every analysis of the surface form, most frequent first. Empty for
    /// out-of-vocabulary words.
    pub fn analyze(&self, word: &str) -> &[Analysis] {
        let key = strip_diacritics(word);
        self.entries.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The first `k` analyses by descending frequency.
    pub fn disambiguate(&self, word: &str, k: TopK) -> &[Analysis] {
        let all = self.analyze(word);
        &all[..k.limit(all.len())]
    }

    /// Unique clitic tokenizations over all analyses, in rank order. An
    /// out-of-vocabulary word tokenizes to itself.
    pub fn atb_tokenizations(&self, word: &str) -> Vec<Vec<String>> {
        self.scored_tokenizations(word).into_iter().map(|(t, _)| t).collect()
    }

    /// Unique tokenizations paired with the highest frequency among the
    /// analyses producing them.
    pub fn scored_tokenizations(&self, word: &str) -> Vec<(Vec<String>, u64)> {
        self.tokenizations(word, TopK::All)
    }

    /// Like [`AnalyzerDb::scored_tokenizations`], restricted to the top `k`
    /// analyses.
    pub fn tokenizations(&self, word: &str, k: TopK) -> Vec<(Vec<String>, u64)> {
        let analyses = self.disambiguate(word, k);
        if analyses.is_empty() {
            return vec![(vec![word.to_string()], 0)];
        }
        let mut out: Vec<(Vec<String>, u64)> = Vec::new();
        for a in analyses {
            let toks = a.tokens();
            match out.iter_mut().find(|(t, _)| *t == toks) {
                Some(entry) => entry.1 = entry.1.max(a.freq),
                None => out.push((toks, a.freq)),
            }
        }
        out
    }
}

fn parse_row(cols: &[&str], line: usize, vocab: &FeatureVocab) -> Result<Analysis, MorphError> {
    let col = |i: usize| cols[i].trim().to_string();
    let freq = cols[17].trim().parse::<u64>().map_err(|_| MorphError::BadRow {
        line,
        reason: format!("frequency {:?} is not a non-negative integer", cols[17]),
    })?;
    let analysis = Analysis {
        lex: col(1),
        pos: col(2),
        prc0: col(3),
        prc1: col(4),
        prc2: col(5),
        enc0: col(6),
        per: col(7),
        gen: col(8),
        num: col(9),
        asp: col(10),
        vox: col(11),
        r#mod: col(12),
        stt: col(13),
        cas: col(14),
        diac: col(15),
        atbtok: col(16),
        freq,
    };
    for f in Feature::ALL {
        let value = analysis.feature(f);
        if !vocab.contains(f, value) {
            return Err(MorphError::UnknownFeatureValue {
                line,
                feature: f,
                value: value.to_string(),
            });
        }
    }
    if surface_from_tokens(&analysis.tokens()) != strip_diacritics(&analysis.diac) {
        return Err(MorphError::InconsistentTokenization {
            line,
            atbtok: analysis.atbtok.clone(),
            diac: analysis.diac.clone(),
        });
    }
    Ok(analysis)
}

#[cfg(test)]
mod tests {
    use super::super::{morph_diff, shared_lexpos_pairs};
    use super::*;

    const ROW: &str = "كتب\tكتب\tverb\t0\t0\t0\t0\t3\tm\ts\tp\ta\tna\tna\tna\tكَتَبَ\tكتب\t";

    #[test]
    fn red_readings() {
        let db = AnalyzerDb::bundled();
        let src = db.analyze("أحمر");
        assert!(src.iter().any(|a| a.lex == "أحمر" && a.pos == "adj" && a.gen == "m" && a.prc0 == "0"));
        let tgt = db.analyze("الحمراء");
        assert!(tgt.iter().any(|a| a.lex == "أحمر" && a.pos == "adj" && a.gen == "f" && a.prc0 == "Al_det"));
        assert!(db.analyze("zzzz").is_empty());
    }

    #[test]
    fn six_linked_pairs_with_two_edits() {
        let db = AnalyzerDb::bundled();
        let pairs = shared_lexpos_pairs(db.analyze("أحمر"), db.analyze("الحمراء"));
        assert_eq!(pairs.len(), 6);
        for (a, b) in pairs {
            let edits: Vec<String> = morph_diff(a, b).iter().map(|e| e.to_string()).collect();
            assert_eq!(edits, vec!["prc0:0→Al_det", "gen:m→f"]);
        }
    }

    #[test]
    fn disambiguation_takes_frequency_prefix() {
        let text = format!("{ROW}4\n{ROW}9\n{ROW}1\n");
        let db = AnalyzerDb::from_tsv(&text).unwrap();
        let freqs = |k| db.disambiguate("كتب", k).iter().map(|a| a.freq).collect::<Vec<_>>();
        assert_eq!(freqs(TopK::N(1)), vec![9]);
        assert_eq!(freqs(TopK::N(2)), vec![9, 4]);
        assert_eq!(freqs(TopK::N(7)), vec![9, 4, 1]);
        assert_eq!(freqs(TopK::All), vec![9, 4, 1]);
        assert!(db.disambiguate("zzzz", TopK::N(1)).is_empty());
    }

    #[test]
    fn ties_keep_file_order() {
        let a = ROW.replacen("\ta\t", "\tp\t", 1);
        let text = format!("{ROW}5\n{a}5\n");
        let db = AnalyzerDb::from_tsv(&text).unwrap();
        assert_eq!(db.disambiguate("كتب", TopK::N(1))[0].vox, "a");
    }

    #[test]
    fn cap_truncates() {
        let text = format!("{ROW}4\n{ROW}9\n{ROW}1\n");
        let db = AnalyzerDb::from_tsv_with_cap(&text, 2).unwrap();
        assert_eq!(db.analyze("كتب").len(), 2);
    }

    #[test]
    fn lookup_ignores_diacritics() {
        let db = AnalyzerDb::bundled();
        assert_eq!(db.analyze("كتابٌ"), db.analyze("كتاب"));
    }

    #[test]
    fn tokenizations() {
        let db = AnalyzerDb::bundled();
        assert_eq!(db.atb_tokenizations("بالسيارة"), vec![vec!["ب+".to_string(), "السيارة".to_string()]]);
        assert_eq!(db.atb_tokenizations("كتاب"), vec![vec!["كتاب".to_string()]]);
        // two readings (verb and plural noun) share one tokenization
        assert_eq!(db.analyze("وكتب").len(), 2);
        assert_eq!(db.atb_tokenizations("وكتب").len(), 1);
        assert_eq!(db.atb_tokenizations("غغغ"), vec![vec!["غغغ".to_string()]]);
    }

    #[test]
    fn rejects_bad_rows() {
        let bad_value = ROW.replacen("\tm\t", "\tx\t", 1) + "1";
        assert!(matches!(
            AnalyzerDb::from_tsv(&bad_value),
            Err(MorphError::UnknownFeatureValue { line: 1, feature: Feature::Gen, .. })
        ));
        assert!(matches!(
            AnalyzerDb::from_tsv(&format!("{ROW}-3")),
            Err(MorphError::BadRow { line: 1, .. })
        ));
        assert!(matches!(
            AnalyzerDb::from_tsv("a\tb\n"),
            Err(MorphError::BadRow { line: 1, .. })
        ));
        let bad_tok = ROW.replacen("\tكَتَبَ\tكتب\t", "\tكَتَبَ\tك+_تاب\t", 1) + "1";
        assert!(matches!(
            AnalyzerDb::from_tsv(&bad_tok),
            Err(MorphError::InconsistentTokenization { line: 1, .. })
        ));
    }

    #[test]
    fn vocab_directive_extends_features() {
        let row = ROW.replacen("\tm\t", "\tx\t", 1) + "1";
        let text = format!("#version\ttest-2\n#vocab\tgen\tx,y\n{row}\n");
        let db = AnalyzerDb::from_tsv(&text).unwrap();
        assert_eq!(db.version(), "test-2");
        assert_eq!(db.analyze("كتب")[0].gen, "x");
    }

    #[test]
    fn bundled_lexicon_loads() {
        let db = AnalyzerDb::bundled();
        assert_eq!(db.version(), "mini-1.0");
        for surface in db.surfaces() {
            let list = db.analyze(surface);
            assert!(list.windows(2).all(|w| w[0].freq >= w[1].freq));
        }
    }
}
