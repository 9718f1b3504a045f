//! Error-pair extraction from original and corrected documents.
//!
//! Sentences are aligned with a length-based dynamic program plus a bonus for
//! shared long tokens, then each aligned pair is diffed token by token.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::exec::Execution;
use crate::text::{self, TokenKind};

pub const TERMINATORS: &[char] = &['.', '?', '!', '।', '\n'];

/// Length ratio of corrected to original text.
const LEN_RATIO: f64 = 1.0;
/// Variance of the length difference per character.
const LEN_VARIANCE: f64 = 6.8;
const PRIOR_1_1: f64 = 0.89;
const PRIOR_2_1: f64 = 0.089;
/// Unmatched sentences are allowed only so that every input is alignable.
const PRIOR_1_0: f64 = 0.0099;
const ANCHOR_MIN_GRAPHEMES: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinerError {
    #[error("the {0} document has no sentences")]
    EmptyDocument(&'static str),
}

/// Splits on sentence terminators; each terminator stays with its sentence.
pub fn split_sentences(doc: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in doc.char_indices() {
        if TERMINATORS.contains(&c) {
            push_sentence(&mut out, &doc[start..i + c.len_utf8()]);
            start = i + c.len_utf8();
        }
    }
    push_sentence(&mut out, &doc[start..]);
    out
}

fn push_sentence(out: &mut Vec<String>, s: &str) {
    let s = s.trim();
    if !s.is_empty() && s.chars().any(|c| !TERMINATORS.contains(&c)) {
        out.push(s.to_string());
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentencePair {
    pub original: String,
    pub corrected: String,
    /// Negated bead cost; higher is better.
    pub alignment_score: f64,
    /// Sentence indices covered on each side.
    pub source: Range<usize>,
    pub target: Range<usize>,
}

/// Per-sentence inputs to the bead cost, computed once.
struct Profile {
    chars: usize,
    anchors: BTreeSet<String>,
}

impl Profile {
    fn new(sentence: &str) -> Self {
        Profile {
            chars: sentence.chars().count(),
            anchors: text::tokenize(sentence)
                .into_iter()
                .filter(|t| t.kind == TokenKind::Word && text::segment_lossy(t.surface).len() >= ANCHOR_MIN_GRAPHEMES)
                .map(|t| t.surface.to_string())
                .collect(),
        }
    }
}

fn bead_cost(orig: &[Profile], corr: &[Profile], prior: f64) -> f64 {
    let l1 = orig.iter().map(|p| p.chars).sum::<usize>() as f64;
    let l2 = corr.iter().map(|p| p.chars).sum::<usize>() as f64;
    let mean = (l1 + l2 / LEN_RATIO) / 2.0;
    let p_len = if mean == 0.0 {
        1.0
    } else {
        let delta = (l2 - l1 * LEN_RATIO) / (mean * LEN_VARIANCE).sqrt();
        libm::erfc(delta.abs() / std::f64::consts::SQRT_2).max(1e-300)
    };
    -prior.ln() - p_len.ln() - anchors(orig, corr) as f64
}

/// Distinct long tokens shared by the two sides.
fn anchors(orig: &[Profile], corr: &[Profile]) -> usize {
    if orig.is_empty() || corr.is_empty() {
        return 0;
    }
    let a: BTreeSet<&String> = orig.iter().flat_map(|p| &p.anchors).collect();
    let b: BTreeSet<&String> = corr.iter().flat_map(|p| &p.anchors).collect();
    a.intersection(&b).count()
}

/// Monotone sentence alignment over 1:1, 2:1 and 1:2 beads. A sentence with
/// no counterpart is folded into the neighbouring bead, so both sides of
/// every pair are non-empty.
pub fn align(original_doc: &str, corrected_doc: &str) -> Result<Vec<SentencePair>, MinerError> {
    let orig = split_sentences(original_doc);
    let corr = split_sentences(corrected_doc);
    if orig.is_empty() {
        return Err(MinerError::EmptyDocument("original"));
    }
    if corr.is_empty() {
        return Err(MinerError::EmptyDocument("corrected"));
    }
    let (n, m) = (orig.len(), corr.len());
    let po: Vec<Profile> = orig.iter().map(|s| Profile::new(s)).collect();
    let pc: Vec<Profile> = corr.iter().map(|s| Profile::new(s)).collect();
    const BEADS: [(usize, usize, f64); 5] = [
        (1, 1, PRIOR_1_1),
        (2, 1, PRIOR_2_1),
        (1, 2, PRIOR_2_1),
        (1, 0, PRIOR_1_0),
        (0, 1, PRIOR_1_0),
    ];
    let mut cost = vec![vec![f64::INFINITY; m + 1]; n + 1];
    let mut back = vec![vec![(0usize, 0usize); m + 1]; n + 1];
    cost[0][0] = 0.0;
    for i in 0..=n {
        for j in 0..=m {
            if i == 0 && j == 0 {
                continue;
            }
            for &(di, dj, prior) in &BEADS {
                if di > i || dj > j || !cost[i - di][j - dj].is_finite() {
                    continue;
                }
                let c = cost[i - di][j - dj] + bead_cost(&po[i - di..i], &pc[j - dj..j], prior);
                if c < cost[i][j] {
                    cost[i][j] = c;
                    back[i][j] = (di, dj);
                }
            }
        }
    }
    let mut beads: Vec<(Range<usize>, Range<usize>, f64)> = Vec::new();
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let (di, dj) = back[i][j];
        let c = cost[i][j] - cost[i - di][j - dj];
        beads.push((i - di..i, j - dj..j, c));
        i -= di;
        j -= dj;
    }
    beads.reverse();

    // fold one-sided beads into a neighbour
    let mut merged: Vec<(Range<usize>, Range<usize>, f64)> = Vec::new();
    let mut carry: Option<(Range<usize>, Range<usize>, f64)> = None;
    for (s, t, c) in beads {
        let (s, t, c) = match carry.take() {
            Some((cs, ct, cc)) => (cs.start.min(s.start)..s.end, ct.start.min(t.start)..t.end, c + cc),
            None => (s, t, c),
        };
        if s.is_empty() || t.is_empty() {
            match merged.last_mut() {
                Some(last) => {
                    last.0.end = s.end;
                    last.1.end = t.end;
                    last.2 += c;
                }
                None => carry = Some((s, t, c)),
            }
        } else {
            merged.push((s, t, c));
        }
    }
    if let Some((s, t, c)) = carry {
        // only possible when one side never matched; both are non-empty
        merged.push((s, t, c));
    }

    Ok(merged
        .into_iter()
        .map(|(s, t, c)| SentencePair {
            original: orig[s.clone()].join(" "),
            corrected: corr[t.clone()].join(" "),
            alignment_score: -c,
            source: s,
            target: t,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EditClass {
    Insertion,
    Deletion,
    Substitution,
    Split,
    Join,
}

impl fmt::Display for EditClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EditClass::Insertion => "Insertion",
            EditClass::Deletion => "Deletion",
            EditClass::Substitution => "Substitution",
            EditClass::Split => "Split",
            EditClass::Join => "Join",
        })
    }
}

/// One grapheme-level edit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EditOp {
    Sub(String, String),
    Ins(String),
    Del(String),
}

impl fmt::Display for EditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditOp::Sub(a, b) => write!(f, "{a}→{b}"),
            EditOp::Ins(b) => write!(f, "+{b}"),
            EditOp::Del(a) => write!(f, "-{a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ErrorRecord {
    pub wrong: String,
    pub corrected: String,
    pub class: EditClass,
    /// Present for substitutions.
    pub script: Option<Vec<EditOp>>,
}

impl ErrorRecord {
    fn new(wrong: String, corrected: String, class: EditClass) -> Self {
        ErrorRecord {
            wrong,
            corrected,
            class,
            script: None,
        }
    }

    pub fn script_string(&self) -> String {
        self.script
            .as_ref()
            .map(|s| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .unwrap_or_default()
    }
}

/// Minimum unit-cost edit script between grapheme sequences.
pub fn edit_script(a: &[&str], b: &[&str]) -> Vec<EditOp> {
    let (n, m) = (a.len(), b.len());
    let mut d = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    let mut ops = Vec::new();
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]) {
            if a[i - 1] != b[j - 1] {
                ops.push(EditOp::Sub(a[i - 1].to_string(), b[j - 1].to_string()));
            }
            i -= 1;
            j -= 1;
        } else if i > 0 && d[i][j] == d[i - 1][j] + 1 {
            ops.push(EditOp::Del(a[i - 1].to_string()));
            i -= 1;
        } else {
            ops.push(EditOp::Ins(b[j - 1].to_string()));
            j -= 1;
        }
    }
    ops.reverse();
    ops
}

fn tokens(s: &str) -> Vec<&str> {
    text::tokenize(s).into_iter().map(|t| t.surface).collect()
}

/// Matched index pairs of a longest common subsequence.
fn lcs(a: &[&str], b: &[&str]) -> Vec<(usize, usize)> {
    let (n, m) = (a.len(), b.len());
    let mut l = vec![vec![0u32; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            l[i][j] = if a[i] == b[j] {
                l[i + 1][j + 1] + 1
            } else {
                l[i + 1][j].max(l[i][j + 1])
            };
        }
    }
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        if a[i] == b[j] {
            out.push((i, j));
            i += 1;
            j += 1;
        } else if l[i + 1][j] >= l[i][j + 1] {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

fn substitution(wrong: &str, corrected: &str) -> Vec<ErrorRecord> {
    let a = text::segment_lossy(wrong);
    let b = text::segment_lossy(corrected);
    let script = edit_script(&a, &b);
    let limit = 3usize.max((a.len().max(b.len()) * 2).div_ceil(5));
    if script.len() > limit {
        return vec![
            ErrorRecord::new(wrong.to_string(), String::new(), EditClass::Deletion),
            ErrorRecord::new(String::new(), corrected.to_string(), EditClass::Insertion),
        ];
    }
    vec![ErrorRecord {
        wrong: wrong.to_string(),
        corrected: corrected.to_string(),
        class: EditClass::Substitution,
        script: Some(script),
    }]
}

fn classify(orig: &[&str], corr: &[&str]) -> Vec<ErrorRecord> {
    let join = |t: &[&str]| t.join(" ");
    match (orig.len(), corr.len()) {
        (0, 0) => vec![],
        (0, _) => vec![ErrorRecord::new(String::new(), join(corr), EditClass::Insertion)],
        (_, 0) => vec![ErrorRecord::new(join(orig), String::new(), EditClass::Deletion)],
        (1, 2) if orig[0] == corr.concat() => {
            vec![ErrorRecord::new(orig[0].to_string(), join(corr), EditClass::Split)]
        }
        (m, 1) if m >= 2 && orig.iter().filter(|t| **t != "-").copied().collect::<String>() == corr[0] => {
            vec![ErrorRecord::new(join(orig), corr[0].to_string(), EditClass::Join)]
        }
        (1, 1) => substitution(orig[0], corr[0]),
        (m, n) if m == n => orig.iter().zip(corr).flat_map(|(a, b)| substitution(a, b)).collect(),
        _ => vec![
            ErrorRecord::new(join(orig), String::new(), EditClass::Deletion),
            ErrorRecord::new(String::new(), join(corr), EditClass::Insertion),
        ],
    }
}

/// Token-level differences of one aligned pair.
pub fn diff(pair: &SentencePair) -> Vec<ErrorRecord> {
    let a = tokens(&pair.original);
    let b = tokens(&pair.corrected);
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    for (mi, mj) in lcs(&a, &b).into_iter().chain(std::iter::once((a.len(), b.len()))) {
        out.extend(classify(&a[i..mi], &b[j..mj]));
        i = mi + 1;
        j = mj + 1;
    }
    out
}

/// Aligns two documents and diffs every pair.
pub fn mine(original_doc: &str, corrected_doc: &str) -> Result<Vec<ErrorRecord>, MinerError> {
    Ok(align(original_doc, corrected_doc)?.iter().flat_map(diff).collect())
}

/// Mines many document pairs; results keep input order.
pub fn mine_many(
    docs: &[(String, String)],
    execution: Execution,
) -> Vec<Result<Vec<ErrorRecord>, MinerError>> {
    execution.map(docs, |(o, c)| mine(o, c))
}

/// Differing sub-units of a substituted grapheme pair: the common prefix and
/// suffix are dropped when something remains on both sides.
fn reduce(a: &str, b: &str) -> (String, String) {
    let ac: Vec<char> = a.chars().collect();
    let bc: Vec<char> = b.chars().collect();
    let pre = ac.iter().zip(&bc).take_while(|(x, y)| x == y).count();
    let max_suf = ac.len().min(bc.len()) - pre;
    let suf = ac
        .iter()
        .rev()
        .zip(bc.iter().rev())
        .take(max_suf)
        .take_while(|(x, y)| x == y)
        .count();
    let ra: String = ac[pre..ac.len() - suf].iter().collect();
    let rb: String = bc[pre..bc.len() - suf].iter().collect();
    if ra.is_empty() || rb.is_empty() {
        (a.to_string(), b.to_string())
    } else {
        (ra, rb)
    }
}

/// Substituted grapheme pairs with counts, most frequent first.
pub fn confusion_stats(records: &[ErrorRecord]) -> Vec<((String, String), usize)> {
    let mut counts: HashMap<(String, String), usize> = HashMap::new();
    for r in records.iter().filter(|r| r.class == EditClass::Substitution) {
        for op in r.script.iter().flatten() {
            if let EditOp::Sub(a, b) = op {
                *counts.entry(reduce(a, b)).or_insert(0) += 1;
            }
        }
    }
    let mut out: Vec<_> = counts.into_iter().collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

pub fn records_tsv(records: &[ErrorRecord]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&format!("{}\t{}\t{}\t{}\n", r.wrong, r.corrected, r.class, r.script_string()));
    }
    s
}

pub fn stats_tsv(stats: &[((String, String), usize)]) -> String {
    let mut s = String::new();
    for ((a, b), n) in stats {
        s.push_str(&format!("{a}\t{b}\t{n}\n"));
    }
    s
}
