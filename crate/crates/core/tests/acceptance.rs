//! Acceptance criteria, one PASS/FAIL line each. Failures only change the
//! exit status when ERRTAG_STRICT_ACCEPTANCE=1.

use std::cmp::Reverse;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use errtag::alignment::{align, EditCosts, TokenSequence, WordAlignmentPair};
use errtag::annotator::{ortho_edit_candidates, AnnotatedPair, Annotator, AnnotatorConfig, OrthoEdit};
use errtag::metrics::{pearson, score_against_gold, score_tags, top_k_table, ScoreOptions};
use errtag::morphology::{morph_diff, shared_lexpos_pairs, AnalyzerDb, Analysis, Feature, TopK};
use errtag::taxonomy::ComplexTag;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");
const LETTERS: &[char] = &[
    'ا', 'ب', 'ت', 'ث', 'ج', 'ح', 'خ', 'د', 'ذ', 'ر', 'ز', 'س', 'ش', 'ص', 'ض', 'ط', 'ظ', 'ع', 'غ', 'ف', 'ق', 'ك', 'ل',
    'م', 'ن', 'ه', 'و', 'ي', 'ى', 'ة', 'أ', 'إ', 'آ', 'ء', 'ئ', 'ؤ',
];

type Check<'a> = (&'a str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn read(name: &str) -> Vec<TokenSequence> {
    std::fs::read_to_string(format!("{FIXTURES}/{name}"))
        .unwrap()
        .lines()
        .map(TokenSequence::new)
        .collect()
}

fn tags(out: &[AnnotatedPair]) -> Vec<String> {
    out.iter().map(|a| a.tag.to_string()).collect()
}

fn red_car(db: &AnalyzerDb) -> Outcome {
    let start = Instant::now();
    let ann = Annotator::new(db, AnnotatorConfig::default());
    let out = ann.annotate_sentence(&TokenSequence::new("بالسياره أحمر"), &TokenSequence::new("في السيارة الحمراء"));
    let elapsed = start.elapsed();
    let got = tags(&out);
    let pass = got == ["OT+SW", "XF+XG"] && elapsed < Duration::from_secs(1);
    outcome(pass, format!("tags {got:?} in {elapsed:.2?}"))
}

fn shared_pairs(db: &AnalyzerDb) -> Outcome {
    let pairs = shared_lexpos_pairs(db.analyze("أحمر"), db.analyze("الحمراء"));
    let diffs: Vec<Vec<String>> = pairs.iter().map(|(a, b)| morph_diff(a, b).iter().map(|e| e.to_string()).collect()).collect();
    let want = ["prc0:0→Al_det", "gen:m→f"];
    let pass = pairs.len() == 6 && diffs.iter().all(|d| d == &want);
    outcome(pass, format!("{} shared pairs, diffs {:?}", pairs.len(), diffs.first()))
}

/// Splice the chosen edits into `src` right to left so earlier positions
/// stay valid; edits sharing a position go in reverse list order.
fn splice(src: &str, edits: &[&OrthoEdit]) -> String {
    let mut chars: Vec<char> = src.chars().collect();
    let mut order: Vec<(usize, &&OrthoEdit)> = edits.iter().enumerate().collect();
    order.sort_by_key(|&(i, e)| Reverse((e.src_pos, i)));
    for (_, e) in order {
        let n = e.from.chars().count();
        chars.splice(e.src_pos..e.src_pos + n, e.to.chars());
    }
    chars.into_iter().collect()
}

fn feature_distance(a: &Analysis, b: &Analysis) -> usize {
    Feature::ALL.iter().filter(|&&f| a.feature(f) != b.feature(f)).count()
}

/// Exhaustive minimum path cost over every subset of the edit list and
/// every analysis pair sharing lemma and POS.
fn oracle_cost(db: &AnalyzerDb, src: &str, tgt: &str, edits: &[OrthoEdit]) -> usize {
    let tgt_analyses = db.analyze(tgt);
    let mut best = usize::MAX;
    for mask in 0u32..(1 << edits.len()) {
        let chosen: Vec<&OrthoEdit> = edits.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e).collect();
        let edited = splice(src, &chosen);
        let n = chosen.len();
        if edited == tgt {
            best = best.min(n);
            continue;
        }
        for a in db.analyze(&edited) {
            for b in tgt_analyses.iter().filter(|b| b.lex == a.lex && b.pos == a.pos) {
                let d = feature_distance(a, b);
                if d > 0 {
                    best = best.min(n + d);
                }
            }
        }
    }
    best
}

fn perturb(rng: &mut ChaCha8Rng, word: &str, max_edits: usize) -> String {
    let mut chars: Vec<char> = word.chars().collect();
    for _ in 0..rng.random_range(1..=max_edits) {
        let pos = rng.random_range(0..=chars.len());
        let c = *LETTERS.choose(rng).unwrap();
        match rng.random_range(0..3) {
            0 if pos < chars.len() => chars[pos] = c,
            1 if pos < chars.len() && chars.len() > 1 => {
                chars.remove(pos);
            }
            _ => chars.insert(pos, c),
        }
    }
    chars.into_iter().collect()
}

fn shortest_paths(db: &AnalyzerDb) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut words: Vec<&str> = db.surfaces().collect();
    words.sort_unstable();
    let mut pairs: Vec<(String, String)> = Vec::new();
    for s in &words {
        for t in &words {
            if s != t {
                pairs.push((s.to_string(), t.to_string()));
            }
        }
    }
    for _ in 0..200 {
        let t = *words.choose(&mut rng).unwrap();
        pairs.push((perturb(&mut rng, t, 3), t.to_string()));
    }
    let ann = Annotator::new(db, AnnotatorConfig::default());
    let (mut checked, mut mismatches) = (0, Vec::new());
    for (s, t) in &pairs {
        let Ok(edits) = ortho_edit_candidates(s, t, 16) else { continue };
        if edits.len() > 6 {
            continue;
        }
        checked += 1;
        let want = oracle_cost(db, s, t, &edits);
        let got = ann.best_path(s, t).0.cost();
        if got != want {
            mismatches.push(format!("{s}->{t}: {got} vs {want}"));
        }
    }
    let elapsed = start.elapsed();
    let pass = checked >= 100 && mismatches.is_empty() && elapsed < Duration::from_secs(30);
    outcome(pass, format!("{checked} pairs, {} mismatches {:?}, {elapsed:.2?}", mismatches.len(), mismatches.iter().take(3).collect::<Vec<_>>()))
}

/// Synthetic parallel sentence: the target is clean, the source has up to
/// two character edits per word, some dropped words and some stray words.
/// Returns the gold pairing as (source span, target span).
#[allow(clippy::type_complexity)]
fn synthetic_sentence(rng: &mut ChaCha8Rng, vocab: &[String]) -> (Vec<String>, Vec<String>, Vec<(Vec<usize>, Vec<usize>)>) {
    let len = rng.random_range(4..=12);
    let tgt: Vec<String> = (0..len).map(|_| vocab.choose(rng).unwrap().clone()).collect();
    let mut src = Vec::new();
    let mut gold = Vec::new();
    for (j, w) in tgt.iter().enumerate() {
        if rng.random_bool(0.05) {
            let stray = vocab.choose(rng).unwrap().clone();
            gold.push((vec![src.len()], vec![]));
            src.push(stray);
        }
        if rng.random_bool(0.05) {
            gold.push((vec![], vec![j]));
            continue;
        }
        let word = if rng.random_bool(0.3) { perturb(rng, w, 2) } else { w.clone() };
        gold.push((vec![src.len()], vec![j]));
        src.push(word);
    }
    (src, tgt, gold)
}

fn alignment_recovery(db: &AnalyzerDb) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut vocab: Vec<String> = db.surfaces().map(String::from).collect();
    vocab.sort_unstable();
    for _ in 0..200 {
        let n = rng.random_range(2..=7);
        vocab.push((0..n).map(|_| *LETTERS.choose(&mut rng).unwrap()).collect());
    }
    let costs = EditCosts::default();
    // [hit, total] for pairs next to a word insertion or deletion, and elsewhere
    let mut near = [0usize; 2];
    let mut far = [0usize; 2];
    for _ in 0..1000 {
        let (src, tgt, gold) = synthetic_sentence(&mut rng, &vocab);
        let pairs = align(&TokenSequence::from_tokens(&src), &TokenSequence::from_tokens(&tgt), &costs);
        let spans: Vec<(Vec<usize>, Vec<usize>)> = pairs.iter().map(|p: &WordAlignmentPair| (p.src_span.clone().collect(), p.tgt_span.clone().collect())).collect();
        let events: Vec<usize> = gold.iter().enumerate().filter(|(_, g)| g.0.is_empty() || g.1.is_empty()).map(|(i, _)| i).collect();
        for (i, g) in gold.iter().enumerate() {
            let bucket = if events.iter().any(|&e| e.abs_diff(i) <= 1) { &mut near } else { &mut far };
            bucket[0] += spans.contains(g) as usize;
            bucket[1] += 1;
        }
    }
    let elapsed = start.elapsed();
    let (hit, total) = (near[0] + far[0], near[1] + far[1]);
    let rate = hit as f64 / total as f64;
    let pass = rate >= 0.99 && elapsed < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "{hit}/{total} gold pairs recovered ({:.2}%; {}/{} next to inserted or deleted words, {}/{} elsewhere) in {elapsed:.2?}",
            rate * 100.0,
            near[0],
            near[1],
            far[0],
            far[1]
        ),
    )
}

fn scored_pair(i: usize, tag: &str) -> AnnotatedPair {
    let w = format!("w{i}");
    AnnotatedPair {
        pair: WordAlignmentPair::new(std::slice::from_ref(&w), std::slice::from_ref(&w), i..i + 1, i..i + 1),
        tag: tag.parse::<ComplexTag>().unwrap(),
        path: None,
    }
}

fn metric_fixture() -> Outcome {
    let gold = ["OT", "XF+XG", "UC", "SW", "OH", "XG", "PM", "OT", "UC", "XN"];
    let pred = ["OT", "XG", "OR", "SW", "UC", "XG", "PM", "OH", "UC", "XN+XG"];
    let side = |tags: &[&str]| vec![tags.iter().enumerate().map(|(i, t)| scored_pair(i, t)).collect::<Vec<_>>()];
    let report = score_tags(&side(&gold), &side(&pred), ScoreOptions::default()).unwrap();
    // tp 6, fp 3, fn 3; per-tag F1 OT 2/3, XF 0, XG 4/5, SW 1, OH 0, PM 1, XN 1
    let (micro, macro_f1, weighted) = (2.0 / 3.0, 67.0 / 105.0, 89.0 / 135.0);
    let close = |a: f64, b: f64| (a - b).abs() < 1e-9;
    let r = pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 7.0]).unwrap();
    let closed = 5.0 / (2.0f64 * 114.0 / 9.0).sqrt();
    let pass = close(report.micro.f1, micro)
        && close(report.macro_avg.f1, macro_f1)
        && close(report.weighted.f1, weighted)
        && (r - closed).abs() < 1e-4;
    outcome(
        pass,
        format!(
            "micro {:.6} macro {:.6} weighted {:.6}, pearson {r:.5} (closed form {closed:.5})",
            report.micro.f1, report.macro_avg.f1, report.weighted.f1
        ),
    )
}

fn gold_annotations() -> Vec<Vec<AnnotatedPair>> {
    let text = std::fs::read_to_string(format!("{FIXTURES}/gold.tsv")).unwrap();
    errtag::annotator::parse_annotations(&text).unwrap()
}

fn monotone_k(db: &AnalyzerDb) -> Outcome {
    let rows = score_against_gold(
        &read("raw.txt"),
        &read("ref.txt"),
        &gold_annotations(),
        db,
        &AnnotatorConfig::default(),
        &[TopK::N(1), TopK::All],
        ScoreOptions::default(),
    )
    .unwrap();
    let (one, all) = (rows[0].1.micro.f1, rows[1].1.micro.f1);
    outcome(all >= one, format!("micro F1 k=1 {one:.4}, k=all {all:.4}"))
}

fn harness(db: &AnalyzerDb) -> Outcome {
    let ks = [TopK::N(1), TopK::N(2), TopK::N(3), TopK::All];
    let rows = score_against_gold(
        &read("raw.txt"),
        &read("ref.txt"),
        &gold_annotations(),
        db,
        &AnnotatorConfig::default(),
        &ks,
        ScoreOptions::default(),
    );
    match rows {
        Ok(rows) => {
            let table = top_k_table(&rows);
            let pass = rows.len() == 4 && table.lines().count() == 5;
            outcome(pass, "harness runs on the bundled fixture; full-scale figures need the external annotated corpus")
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn throughput(db: &AnalyzerDb) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut words: Vec<&str> = db.surfaces().collect();
    words.sort_unstable();
    let pairs: Vec<WordAlignmentPair> = (0..5000)
        .map(|_| {
            let t = *words.choose(&mut rng).unwrap();
            let s = if rng.random_bool(0.5) { perturb(&mut rng, t, 2) } else { words.choose(&mut rng).unwrap().to_string() };
            WordAlignmentPair::from_words(&[s.as_str()], &[t])
        })
        .collect();
    let start = Instant::now();
    let out = Annotator::new(db, AnnotatorConfig::default()).annotate_pairs(&pairs);
    let elapsed = start.elapsed();
    outcome(out.len() == 5000 && elapsed < Duration::from_secs(60), format!("5000 pairs in {elapsed:.2?}"))
}

fn main() -> ExitCode {
    let db = AnalyzerDb::bundled();
    let checks: [Check; 8] = [
        ("worked example tags", Box::new(|| red_car(&db))),
        ("shared analysis pairs", Box::new(|| shared_pairs(&db))),
        ("shortest path matches exhaustive oracle", Box::new(|| shortest_paths(&db))),
        ("word alignment recovers gold pairings", Box::new(|| alignment_recovery(&db))),
        ("hand-scored metrics and correlation", Box::new(metric_fixture)),
        ("more analyses never lower micro F1", Box::new(|| monotone_k(&db))),
        ("gold-file scoring harness", Box::new(|| harness(&db))),
        ("throughput with all analyses", Box::new(|| throughput(&db))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("{} criterion {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{}/{} criteria passed", checks.len() - failed, checks.len());
    let strict = std::env::var("ERRTAG_STRICT_ACCEPTANCE").is_ok_and(|v| v == "1");
    if failed == 0 || !strict {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
