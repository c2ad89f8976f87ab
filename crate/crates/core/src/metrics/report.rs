use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::{pearson, rank_compare, ranks, MetricsError, TagCounts};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TagScore {
    pub tag: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Average {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Per-tag scores (ordered by support, then tag) and aggregates. Macro
/// averages run over tags with gold support; weighted averages weight by
/// support. With no gold tags and no predictions every aggregate is 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub rows: Vec<TagScore>,
    pub micro: Average,
    pub macro_avg: Average,
    pub weighted: Average,
    pub support: usize,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

impl EvaluationReport {
    pub fn from_counts(counts: &BTreeMap<String, TagCounts>) -> Self {
        let mut rows: Vec<TagScore> = counts
            .iter()
            .filter(|(_, c)| c.tp + c.fp + c.fn_ > 0)
            .map(|(tag, c)| {
                let precision = ratio(c.tp, c.tp + c.fp);
                let recall = ratio(c.tp, c.support());
                TagScore {
                    tag: tag.clone(),
                    precision,
                    recall,
                    f1: f1(precision, recall),
                    support: c.support(),
                    tp: c.tp,
                    fp: c.fp,
                    fn_: c.fn_,
                }
            })
            .collect();
        rows.sort_by(|a, b| b.support.cmp(&a.support).then_with(|| a.tag.cmp(&b.tag)));

        let (tp, fp, fn_) = rows.iter().fold((0, 0, 0), |(a, b, c), r| (a + r.tp, b + r.fp, c + r.fn_));
        let support = tp + fn_;
        if tp + fp + fn_ == 0 {
            let perfect = Average { precision: 1.0, recall: 1.0, f1: 1.0 };
            return EvaluationReport { rows, micro: perfect, macro_avg: perfect, weighted: perfect, support };
        }
        let (p, r) = (ratio(tp, tp + fp), ratio(tp, support));
        let micro = Average { precision: p, recall: r, f1: f1(p, r) };

        let supported: Vec<&TagScore> = rows.iter().filter(|r| r.support > 0).collect();
        let mean = |get: fn(&TagScore) -> f64| {
            if supported.is_empty() {
                0.0
            } else {
                supported.iter().map(|r| get(r)).sum::<f64>() / supported.len() as f64
            }
        };
        let weighted_mean = |get: fn(&TagScore) -> f64| {
            if support == 0 {
                0.0
            } else {
                supported.iter().map(|r| get(r) * r.support as f64).sum::<f64>() / support as f64
            }
        };
        let macro_avg = Average { precision: mean(|r| r.precision), recall: mean(|r| r.recall), f1: mean(|r| r.f1) };
        let weighted = Average {
            precision: weighted_mean(|r| r.precision),
            recall: weighted_mean(|r| r.recall),
            f1: weighted_mean(|r| r.f1),
        };
        EvaluationReport { rows, micro, macro_avg, weighted, support }
    }

    pub fn row(&self, tag: &str) -> Option<&TagScore> {
        self.rows.iter().find(|r| r.tag == tag)
    }

    fn aggregates(&self) -> [(&'static str, Average); 3] {
        [("micro avg", self.micro), ("macro avg", self.macro_avg), ("weighted avg", self.weighted)]
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("tag\tprecision\trecall\tf1\tsupport\n");
        for r in &self.rows {
            let _ = writeln!(out, "{}\t{:.4}\t{:.4}\t{:.4}\t{}", r.tag, r.precision, r.recall, r.f1, r.support);
        }
        for (name, a) in self.aggregates() {
            let _ = writeln!(out, "{name}\t{:.4}\t{:.4}\t{:.4}\t{}", a.precision, a.recall, a.f1, self.support);
        }
        out
    }

    pub fn to_table(&self) -> String {
        let width = self.rows.iter().map(|r| r.tag.len()).max().unwrap_or(0).max("weighted avg".len());
        let mut out = format!("{:<width$}  {:>9}  {:>6}  {:>8}  {:>7}\n", "", "precision", "recall", "f1-score", "support");
        let mut line = |tag: &str, a: Average, support: usize| {
            let _ = writeln!(
                out,
                "{tag:<width$}  {:>9.3}  {:>6.3}  {:>8.3}  {support:>7}",
                a.precision, a.recall, a.f1
            );
        };
        for r in &self.rows {
            line(&r.tag, Average { precision: r.precision, recall: r.recall, f1: r.f1 }, r.support);
        }
        for (name, a) in self.aggregates() {
            line(name, a, self.support);
        }
        out
    }

    /// One JSON object per line: the tag rows, then the three averages.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&serde_json::to_string(r).expect("plain data"));
            out.push('\n');
        }
        for (name, a) in self.aggregates() {
            let v = serde_json::json!({
                "tag": name,
                "precision": a.precision,
                "recall": a.recall,
                "f1": a.f1,
                "support": self.support,
            });
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub metric: String,
    pub pearson: f64,
    pub rank_pearson: f64,
    pub avg_rank_diff: f64,
}

/// Reports for several systems scored against the same gold tags.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub systems: Vec<(String, EvaluationReport)>,
}

impl Comparison {
    pub fn new(systems: Vec<(String, EvaluationReport)>) -> Self {
        Comparison { systems }
    }

    /// Every tag seen by any system, by gold support then tag.
    pub fn tags(&self) -> Vec<(String, usize)> {
        let mut support: BTreeMap<&str, usize> = BTreeMap::new();
        for (_, report) in &self.systems {
            for r in &report.rows {
                let s = support.entry(&r.tag).or_insert(0);
                *s = (*s).max(r.support);
            }
        }
        let mut tags: Vec<(String, usize)> = support.into_iter().map(|(t, s)| (t.to_string(), s)).collect();
        tags.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        tags
    }

    pub fn f1(&self, system: usize, tag: &str) -> f64 {
        self.systems[system].1.row(tag).map_or(0.0, |r| r.f1)
    }

    /// Systems reaching the highest F1 on `tag`.
    pub fn best(&self, tag: &str) -> Vec<usize> {
        let scores: Vec<f64> = (0..self.systems.len()).map(|i| self.f1(i, tag)).collect();
        let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (0..scores.len()).filter(|&i| scores[i] == top).collect()
    }

    fn metric(&self, name: &str) -> Vec<f64> {
        self.systems
            .iter()
            .map(|(_, r)| match name {
                "micro" => r.micro.f1,
                "macro" => r.macro_avg.f1,
                _ => r.weighted.f1,
            })
            .collect()
    }

    /// Ranks of the systems under micro, macro and weighted F1.
    pub fn rankings(&self) -> [(&'static str, Vec<f64>); 3] {
        ["micro", "macro", "weighted"].map(|m| (m, ranks(&self.metric(m))))
    }

    /// Correlate each aggregate F1 with external per-system scores.
    pub fn correlate(&self, external: &[f64]) -> Result<Vec<CorrelationRow>, MetricsError> {
        if external.len() != self.systems.len() {
            return Err(MetricsError::DegenerateInput(format!(
                "{} external scores for {} systems",
                external.len(),
                self.systems.len()
            )));
        }
        ["micro", "macro", "weighted"]
            .into_iter()
            .map(|m| {
                let ours = self.metric(m);
                let (rank_pearson, avg_rank_diff) = rank_compare(external, &ours)?;
                Ok(CorrelationRow { metric: m.to_string(), pearson: pearson(external, &ours)?, rank_pearson, avg_rank_diff })
            })
            .collect()
    }

    /// Per-tag F1 per system; `*` marks the best system(s) for each tag.
    pub fn to_table(&self) -> String {
        let tags = self.tags();
        let width = tags.iter().map(|t| t.0.len()).max().unwrap_or(0).max("weighted avg".len());
        let col = self.systems.iter().map(|(n, _)| n.chars().count()).max().unwrap_or(0).max(10);
        let mut out = format!("{:<width$}  {:>7}", "tag", "support");
        for (name, _) in &self.systems {
            let _ = write!(out, "  {name:>col$}");
        }
        out.push('\n');
        let many = self.systems.len() > 1;
        for (tag, support) in &tags {
            let _ = write!(out, "{tag:<width$}  {support:>7}");
            let best = self.best(tag);
            for i in 0..self.systems.len() {
                let mark = if many && best.contains(&i) { "*" } else { " " };
                let cell = format!("{:.3}{mark}", self.f1(i, tag));
                let _ = write!(out, "  {cell:>col$}");
            }
            out.push('\n');
        }
        for (m, label) in [("micro", "micro avg"), ("macro", "macro avg"), ("weighted", "weighted avg")] {
            let values = self.metric(m);
            let rank = ranks(&values);
            let _ = write!(out, "{label:<width$}  {:>7}", "");
            for (v, r) in values.iter().zip(&rank) {
                let cell = format!("{v:.3} ({r})");
                let _ = write!(out, "  {cell:>col$}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("tag\tsupport");
        for (name, _) in &self.systems {
            let _ = write!(out, "\t{name}");
        }
        out.push('\n');
        for (tag, support) in self.tags() {
            let _ = write!(out, "{tag}\t{support}");
            for i in 0..self.systems.len() {
                let _ = write!(out, "\t{:.4}", self.f1(i, &tag));
            }
            out.push('\n');
        }
        for (m, label) in [("micro", "micro avg"), ("macro", "macro avg"), ("weighted", "weighted avg")] {
            let _ = write!(out, "{label}\t");
            for v in self.metric(m) {
                let _ = write!(out, "\t{v:.4}");
            }
            out.push('\n');
        }
        out
    }
}
