use errtag::alignment::TokenSequence;
use errtag::annotator::AnnotatorConfig;
use errtag::metrics::{
    compare_systems, diagnose_remaining, evaluate_system, pearson, rank_compare, reference_tags, score_tags, tag_counts,
    MetricsError, ScoreOptions, TagCounts,
};
use errtag::morphology::AnalyzerDb;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");

fn read(name: &str) -> Vec<TokenSequence> {
    std::fs::read_to_string(format!("{FIXTURES}/{name}"))
        .unwrap()
        .lines()
        .map(TokenSequence::new)
        .collect()
}

fn seqs(lines: &[&str]) -> Vec<TokenSequence> {
    lines.iter().map(|l| TokenSequence::new(l)).collect()
}

#[test]
fn fixture_hypothesis_counts() {
    let db = AnalyzerDb::bundled();
    let cfg = AnnotatorConfig::default();
    let raw = read("raw.txt");
    let gold = reference_tags(&raw, &read("ref.txt"), &db, &cfg).unwrap();
    let pred = reference_tags(&raw, &read("hyp.txt"), &db, &cfg).unwrap();
    let counts = tag_counts(&gold, &pred, ScoreOptions::default()).unwrap();
    let c = |tp, fp, fn_| TagCounts { tp, fp, fn_ };
    // hand trace of hyp.txt against gold.tsv
    let expected = [
        ("OT", c(1, 0, 0)),
        ("SW", c(0, 0, 1)),
        ("XF", c(0, 0, 1)),
        ("XG", c(2, 0, 1)),
        ("PM", c(0, 0, 2)),
        ("ON", c(0, 0, 1)),
        ("OR", c(0, 1, 0)),
        ("OW", c(1, 0, 0)),
        ("OG", c(1, 0, 0)),
        ("XT", c(0, 0, 1)),
        ("OH", c(1, 0, 1)),
        ("SP", c(1, 0, 0)),
    ];
    assert_eq!(counts.len(), expected.len());
    for (tag, want) in expected {
        assert_eq!(counts[tag], want, "{tag}");
    }
    let report = score_tags(&gold, &pred, ScoreOptions::default()).unwrap();
    // pooled tp=7 fp=1 fn=8
    let (p, r) = (7.0 / 8.0, 7.0 / 15.0);
    assert!((report.micro.f1 - 2.0 * p * r / (p + r)).abs() < 1e-12);
}

#[test]
fn red_car_partial_fix() {
    let db = AnalyzerDb::bundled();
    let cfg = AnnotatorConfig::default();
    let raw = seqs(&["بالسياره أحمر"]);
    let gold = reference_tags(&raw, &seqs(&["في السيارة الحمراء"]), &db, &cfg).unwrap();
    let pred = reference_tags(&raw, &seqs(&["بالسيارة أحمر"]), &db, &cfg).unwrap();
    let counts = tag_counts(&gold, &pred, ScoreOptions::default()).unwrap();
    assert_eq!(counts["OT"].tp, 1);
    assert_eq!(counts["SW"].fn_, 1);
    assert_eq!(counts["XF"].fn_, 1);
    assert_eq!(counts["XG"].fn_, 1);

    let remaining = diagnose_remaining(&seqs(&["بالسيارة أحمر"]), &seqs(&["في السيارة الحمراء"]), &db, &cfg).unwrap();
    let tags: Vec<String> = remaining[0].iter().map(|a| a.tag.to_string()).collect();
    assert_eq!(tags, vec!["SW", "XF+XG"]);
}

#[test]
fn perfect_and_empty_systems() {
    let db = AnalyzerDb::bundled();
    let cfg = AnnotatorConfig::default();
    let (raw, reference) = (read("raw.txt"), read("ref.txt"));
    let opts = ScoreOptions::default();
    let perfect = evaluate_system(&raw, &reference, &reference, &db, &cfg, opts).unwrap();
    assert_eq!((perfect.micro.f1, perfect.macro_avg.f1, perfect.weighted.f1), (1.0, 1.0, 1.0));
    let idle = evaluate_system(&raw, &reference, &raw, &db, &cfg, opts).unwrap();
    assert!(idle.rows.iter().all(|r| r.recall == 0.0));
    assert_eq!(idle.micro.recall, 0.0);
}

#[test]
fn remaining_errors() {
    let db = AnalyzerDb::bundled();
    let cfg = AnnotatorConfig::default();
    let reference = read("ref.txt");
    let same = diagnose_remaining(&reference, &reference, &db, &cfg).unwrap();
    assert!(same.iter().flatten().all(|a| a.tag.is_unchanged()));
    let missing = diagnose_remaining(&seqs(&["ذهب البيت"]), &seqs(&["ذهب إلى البيت"]), &db, &cfg).unwrap();
    let tags: Vec<String> = missing[0].iter().map(|a| a.tag.to_string()).collect();
    assert_eq!(tags, vec!["UC", "XM", "UC"]);
}

#[test]
fn two_system_comparison() {
    let db = AnalyzerDb::bundled();
    let cfg = AnnotatorConfig::default();
    let raw = seqs(&["البنت جميل", "الطلاب ذهبو", "قاال المعلم"]);
    let reference = seqs(&["البنت جميلة", "الطلاب ذهبوا", "قال المعلم"]);
    let half = seqs(&["البنت جميلة", "الطلاب ذهبو", "قاال المعلم"]);
    let hyps = vec![("ref".to_string(), reference.clone()), ("half".to_string(), half), ("copy".to_string(), reference.clone())];
    let cmp = compare_systems(&raw, &reference, &hyps, &db, &cfg, ScoreOptions::default()).unwrap();
    // gold: XG, OW, OG once each; "half" fixes XG only
    assert_eq!(cmp.tags().iter().map(|t| t.0.as_str()).collect::<Vec<_>>(), vec!["OG", "OW", "XG"]);
    assert_eq!(cmp.f1(1, "XG"), 1.0);
    assert_eq!(cmp.f1(1, "OW"), 0.0);
    let half = &cmp.systems[1].1;
    // P=1, R=1/3
    assert!((half.micro.f1 - 0.5).abs() < 1e-12);
    assert!((half.macro_avg.f1 - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(cmp.best("OW"), vec![0, 2]);
    for (_, ranks) in cmp.rankings() {
        assert_eq!(ranks, vec![1.5, 3.0, 1.5]);
    }
    assert_eq!(cmp.systems[0].1, cmp.systems[2].1);

    let table = cmp.to_table();
    assert!(table.contains("ref") && table.contains("half"));
    let corr = cmp.correlate(&[60.0, 20.0, 60.0]).unwrap();
    assert!(corr.iter().all(|c| (c.pearson - 1.0).abs() < 1e-12 && c.avg_rank_diff == 0.0));
}

#[test]
fn comparison_needs_aligned_corpora() {
    let db = AnalyzerDb::bundled();
    let raw = seqs(&["a", "b"]);
    let hyps = vec![("short".to_string(), seqs(&["a"]))];
    assert!(matches!(
        compare_systems(&raw, &raw, &hyps, &db, &AnnotatorConfig::default(), ScoreOptions::default()),
        Err(MetricsError::CoverageMismatch { .. })
    ));
}

#[test]
fn correlation_helpers() {
    let xs = [0.2, 0.4, 0.9];
    assert!((pearson(&xs, &xs).unwrap() - 1.0).abs() < 1e-12);
    let (r, d) = rank_compare(&xs, &xs).unwrap();
    assert_eq!((r, d), (1.0, 0.0));
}

#[test]
fn symmetric_under_swap() {
    let db = AnalyzerDb::bundled();
    let cfg = AnnotatorConfig::default();
    let raw = read("raw.txt");
    let gold = reference_tags(&raw, &read("ref.txt"), &db, &cfg).unwrap();
    let pred = reference_tags(&raw, &read("hyp.txt"), &db, &cfg).unwrap();
    let ab = score_tags(&gold, &pred, ScoreOptions::default()).unwrap();
    let ba = score_tags(&pred, &gold, ScoreOptions::default()).unwrap();
    assert!((ab.micro.precision - ba.micro.recall).abs() < 1e-12);
    assert!((ab.micro.recall - ba.micro.precision).abs() < 1e-12);
    let (lo, hi) = ab
        .rows
        .iter()
        .filter(|r| r.support > 0)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r.f1), hi.max(r.f1)));
    assert!(lo <= ab.weighted.f1 && ab.weighted.f1 <= hi);
}
