//! Detection and suggestion-quality metrics.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::affix::Dictionary;
use crate::exec::Execution;
use crate::suggest::Suggester;
use crate::text::normalize;

/// A percentage held in tenths and truncated, never rounded, so that a
/// printed rate never overstates the counts behind it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Percent(u64);

impl Percent {
    /// `None` when the denominator is zero.
    pub fn ratio(num: usize, den: usize) -> Option<Percent> {
        (den > 0).then(|| Percent(1000 * num as u64 / den as u64))
    }

    pub fn from_tenths(tenths: u64) -> Percent {
        Percent(tenths)
    }

    pub fn tenths(self) -> u64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 10.0
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0 / 10, self.0 % 10)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalReport {
    pub tp: usize,
    pub fn_: usize,
    pub tn: usize,
    pub fp: usize,
    pub tp_rate: Option<Percent>,
    pub tn_rate: Option<Percent>,
    pub first_accuracy: Option<Percent>,
    pub mrr: Option<f64>,
}

impl EvalReport {
    pub fn from_counts(tp: usize, fn_: usize, tn: usize, fp: usize) -> Self {
        EvalReport {
            tp,
            fn_,
            tn,
            fp,
            tp_rate: Percent::ratio(tp, tp + fn_),
            tn_rate: Percent::ratio(tn, tn + fp),
            first_accuracy: None,
            mrr: None,
        }
    }

    pub fn with_suggestions(mut self, s: &SuggestionEval) -> Self {
        self.first_accuracy = s.first_accuracy;
        self.mrr = s.mrr;
        self
    }
}

/// Counts recognized correct words and rejected incorrect words.
pub fn eval_detection(dict: &Dictionary, correct: &[String], incorrect: &[String]) -> EvalReport {
    eval_detection_with(dict, correct, incorrect, Execution::default())
}

pub fn eval_detection_with(
    dict: &Dictionary,
    correct: &[String],
    incorrect: &[String],
    execution: Execution,
) -> EvalReport {
    let count = |words: &[String]| {
        execution
            .map(words, |w| dict.recognize(w))
            .into_iter()
            .filter(|&r| r)
            .count()
    };
    let tp = count(correct);
    let fp = count(incorrect);
    EvalReport::from_counts(tp, correct.len() - tp, incorrect.len() - fp, fp)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuggestionEval {
    /// 1-based rank of the gold word per evaluated case.
    pub ranks: Vec<Option<usize>>,
    /// Cases whose misspelling the dictionary already accepts.
    pub skipped: Vec<(String, String)>,
    pub first_accuracy: Option<Percent>,
    pub mrr: Option<f64>,
}

impl SuggestionEval {
    pub fn from_ranks(ranks: Vec<Option<usize>>) -> Self {
        let (first_accuracy, mrr) = rank_metrics(&ranks);
        SuggestionEval {
            ranks,
            skipped: Vec::new(),
            first_accuracy,
            mrr,
        }
    }
}

/// First-rank accuracy and mean reciprocal rank; an absent gold scores 0.
pub fn rank_metrics(ranks: &[Option<usize>]) -> (Option<Percent>, Option<f64>) {
    if ranks.is_empty() {
        return (None, None);
    }
    let first = ranks.iter().filter(|r| **r == Some(1)).count();
    let sum: f64 = ranks.iter().map(|r| r.map_or(0.0, |k| 1.0 / k as f64)).sum();
    (Percent::ratio(first, ranks.len()), Some(sum / ranks.len() as f64))
}

/// Ranks each gold word among the top `k` suggestions for its misspelling.
pub fn eval_suggestions(suggester: &Suggester<'_>, cases: &[(String, String)], k: usize) -> SuggestionEval {
    let dict = suggester.dictionary();
    let (kept, skipped): (Vec<_>, Vec<_>) = cases.iter().cloned().partition(|(w, _)| !dict.recognize(w));
    let words: Vec<String> = kept.iter().map(|(w, _)| w.clone()).collect();
    let ranks = suggester
        .suggest_many(&words, k)
        .into_iter()
        .zip(&kept)
        .map(|(s, (_, gold))| s.iter().position(|c| c.candidate == *gold).map(|p| p + 1))
        .collect();
    SuggestionEval {
        skipped,
        ..SuggestionEval::from_ranks(ranks)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cases line {line}: {message}")]
pub struct CaseError {
    pub line: usize,
    pub message: String,
}

/// One word per line, normalized, blank lines and repeats dropped.
pub fn read_word_list(text: &str) -> Vec<String> {
    let mut seen = HashSet::new();
    text.lines()
        .map(|l| normalize(l.trim()))
        .filter(|w| !w.is_empty() && seen.insert(w.clone()))
        .collect()
}

/// "misspelled TAB gold" lines.
pub fn parse_cases(text: &str) -> Result<Vec<(String, String)>, CaseError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        match fields.as_slice() {
            [w, g] if !w.is_empty() && !g.is_empty() => out.push((normalize(w), normalize(g))),
            _ => {
                return Err(CaseError {
                    line: i + 1,
                    message: "expected two tab-separated fields".into(),
                })
            }
        }
    }
    Ok(out)
}

fn opt<T: fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn mrr_str(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"))
}

const HEADER: [&str; 9] = ["System", "TP", "FN", "TP %", "TN", "FP", "TN %", "1st %", "MRR"];

fn cells(name: &str, r: &EvalReport) -> [String; 9] {
    [
        name.to_string(),
        r.tp.to_string(),
        r.fn_.to_string(),
        opt(r.tp_rate),
        r.tn.to_string(),
        r.fp.to_string(),
        opt(r.tn_rate),
        opt(r.first_accuracy),
        mrr_str(r.mrr),
    ]
}

/// Aligned text table, one row per named report.
pub fn render_table(rows: &[(&str, &EvalReport)]) -> String {
    let body: Vec<[String; 9]> = rows.iter().map(|(n, r)| cells(n, r)).collect();
    let mut widths: Vec<usize> = HEADER.iter().map(|h| h.chars().count()).collect();
    for row in &body {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cols: Vec<&str>| {
        let mut s = String::new();
        for (i, (c, w)) in cols.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            let pad = w - c.chars().count();
            if i == 0 {
                s.push_str(c);
                s.push_str(&" ".repeat(pad));
            } else {
                s.push_str(&" ".repeat(pad));
                s.push_str(c);
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(HEADER.to_vec());
    for row in &body {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

pub fn render_tsv(rows: &[(&str, &EvalReport)]) -> String {
    let mut out = String::from("system\ttp\tfn\ttp_rate\ttn\tfp\ttn_rate\tfirst_accuracy\tmrr\n");
    for (n, r) in rows {
        out.push_str(&cells(n, r).join("\t"));
        out.push('\n');
    }
    out
}
