//! Correction candidates for rejected words.

mod confusion;
mod distance;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::OnceLock;

pub use confusion::{ConfusionError, ConfusionSet, Confusions, GENERIC_COST};
pub use distance::edit_cost;

use crate::affix::Dictionary;
use crate::exec::Execution;
use crate::text::{self, is_extender};

/// Suffixes written joined to the preceding noun even when the writer
/// separated them.
pub const BOUND_SUFFIXES: &[&str] = &["වල", "වලට", "වලින්"];

/// Words pulled from the dictionary for distance-2 scanning.
pub const LEXICON_CAP: usize = 200_000;

/// Where a candidate came from. Declaration order is the tie-break priority
/// when one candidate is produced several ways at the same cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    Confusion,
    ReplacementTable,
    Split,
    Join,
    Edit1,
    Edit2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suggestion {
    /// A split candidate holds both parts separated by one space.
    pub candidate: String,
    pub cost: f64,
    pub source: Source,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub split: f64,
    pub join: f64,
    pub replacement: f64,
    /// Distance-2 search runs only when no candidate is cheaper than this.
    pub edit2_threshold: f64,
    pub edit2_max: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            split: 0.75,
            join: 0.75,
            replacement: 0.5,
            edit2_threshold: 1.25,
            edit2_max: 2.0,
        }
    }
}

pub const DEFAULT_K: usize = 10;

/// Parses "word TAB count" lines. Later lines for the same word add up.
pub fn parse_frequencies(text: &str) -> Result<HashMap<String, u64>, String> {
    let mut out = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, count) = line
            .split_once('\t')
            .ok_or_else(|| format!("frequency line {}: expected word TAB count", i + 1))?;
        let count: u64 = count
            .trim()
            .parse()
            .map_err(|_| format!("frequency line {}: bad count {count:?}", i + 1))?;
        *out.entry(text::normalize(word.trim())).or_insert(0) += count;
    }
    Ok(out)
}

/// A suggestion engine bound to one dictionary and confusion table.
pub struct Suggester<'a> {
    dict: &'a Dictionary,
    confusions: &'a Confusions,
    frequencies: HashMap<String, u64>,
    weights: Weights,
    execution: Execution,
    inventory: Vec<String>,
    /// Expanded words bucketed by grapheme count, built on first use.
    lexicon: OnceLock<Vec<Vec<String>>>,
}

impl<'a> Suggester<'a> {
    pub fn new(dict: &'a Dictionary, confusions: &'a Confusions) -> Self {
        Suggester {
            dict,
            confusions,
            frequencies: HashMap::new(),
            weights: Weights::default(),
            execution: Execution::default(),
            inventory: grapheme_inventory(dict),
            lexicon: OnceLock::new(),
        }
    }

    pub fn with_frequencies(mut self, frequencies: HashMap<String, u64>) -> Self {
        self.frequencies = frequencies;
        self
    }

    pub fn with_weights(mut self, weights: Weights) -> Self {
        self.weights = weights;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn dictionary(&self) -> &Dictionary {
        self.dict
    }

    pub fn frequency(&self, word: &str) -> u64 {
        self.frequencies.get(word).copied().unwrap_or(0)
    }

    /// Graphemes tried for insertion and substitution.
    pub fn inventory(&self) -> &[String] {
        &self.inventory
    }

    /// Up to `k` ranked candidates; empty for recognized words.
    pub fn suggest(&self, word: &str, k: usize) -> Vec<Suggestion> {
        let word = text::normalize(word);
        if word.is_empty() || k == 0 || self.dict.recognize(&word) {
            return Vec::new();
        }
        let graphemes = text::segment_lossy(&word);
        let mut found: HashMap<String, (f64, Source)> = HashMap::new();
        fn offer(found: &mut HashMap<String, (f64, Source)>, cand: String, cost: f64, source: Source) {
            let slot = found.entry(cand).or_insert((cost, source));
            if cost < slot.0 || (cost == slot.0 && source < slot.1) {
                *slot = (cost, source);
            }
        }

        let mut checked: HashSet<String> = HashSet::new();
        for (cand, source) in self.single_edits(&graphemes) {
            if cand == word || !checked.insert(cand.clone()) {
                continue;
            }
            if self.dict.recognize(&cand) {
                let cost = self.distance(&graphemes, &cand);
                offer(&mut found, cand, cost, source);
            }
        }

        for (left, right) in self.splits(&graphemes) {
            offer(&mut found, format!("{left} {right}"), self.weights.split, Source::Split);
        }

        for cand in self.replacements(&word) {
            offer(&mut found, cand, self.weights.replacement, Source::ReplacementTable);
        }

        let cheap = found
            .values()
            .any(|(c, _)| *c < self.weights.edit2_threshold);
        if !cheap {
            for (cand, cost) in self.scan_lexicon(&graphemes) {
                let source = if cost <= GENERIC_COST {
                    Source::Edit1
                } else {
                    Source::Edit2
                };
                offer(&mut found, cand, cost, source);
            }
        }

        let mut out: Vec<Suggestion> = found
            .into_iter()
            .map(|(candidate, (cost, source))| Suggestion {
                candidate,
                cost,
                source,
            })
            .collect();
        out.sort_by(|a, b| self.rank(a, b));
        out.truncate(k);
        out
    }

    fn rank(&self, a: &Suggestion, b: &Suggestion) -> Ordering {
        a.cost
            .total_cmp(&b.cost)
            .then_with(|| self.frequency(&b.candidate).cmp(&self.frequency(&a.candidate)))
            .then_with(|| a.candidate.cmp(&b.candidate))
    }

    fn distance(&self, graphemes: &[&str], cand: &str) -> f64 {
        edit_cost(self.confusions, graphemes, &text::segment_lossy(cand))
    }

    /// Confusion swaps first, then generic one-grapheme edits.
    fn single_edits(&self, g: &[&str]) -> Vec<(String, Source)> {
        let join = |parts: &[&str]| text::normalize(&parts.concat());
        let mut out = Vec::new();
        for i in 0..g.len() {
            for (v, _) in self.confusions.variants(g[i]) {
                let mut t = g.to_vec();
                t[i] = &v;
                out.push((join(&t), Source::Confusion));
            }
        }
        for i in 0..g.len() {
            let mut t = g.to_vec();
            t.remove(i);
            if !t.is_empty() {
                out.push((join(&t), Source::Edit1));
            }
            if i + 1 < g.len() && g[i] != g[i + 1] {
                let mut t = g.to_vec();
                t.swap(i, i + 1);
                out.push((join(&t), Source::Edit1));
            }
            for x in &self.inventory {
                if x != g[i] {
                    let mut t = g.to_vec();
                    t[i] = x;
                    out.push((join(&t), Source::Edit1));
                }
            }
        }
        for i in 0..=g.len() {
            for x in &self.inventory {
                let mut t = g.to_vec();
                t.insert(i, x);
                out.push((join(&t), Source::Edit1));
            }
        }
        out
    }

    fn splits(&self, g: &[&str]) -> Vec<(String, String)> {
        (1..g.len())
            .map(|i| (g[..i].concat(), g[i..].concat()))
            .filter(|(l, r)| self.dict.recognize(l) && self.dict.recognize(r))
            .collect()
    }

    fn replacements(&self, word: &str) -> Vec<String> {
        let mut out = Vec::new();
        for (from, to) in &self.dict.table().replacements {
            if from.is_empty() {
                continue;
            }
            for (pos, _) in word.match_indices(from.as_str()) {
                let cand = text::normalize(&format!(
                    "{}{to}{}",
                    &word[..pos],
                    &word[pos + from.len()..]
                ));
                let ok = !cand.is_empty()
                    && cand.split(' ').all(|part| !part.is_empty() && self.dict.recognize(part));
                if ok && cand != word {
                    out.push(cand);
                }
            }
        }
        out
    }

    fn lexicon(&self) -> &[Vec<String>] {
        self.lexicon.get_or_init(|| {
            let words = match self.dict.expand_base(LEXICON_CAP) {
                Ok(w) => w,
                Err(e) => e.partial,
            };
            let mut buckets: Vec<Vec<String>> = Vec::new();
            for w in words {
                let n = text::segment_lossy(&w).len();
                if buckets.len() <= n {
                    buckets.resize(n + 1, Vec::new());
                }
                buckets[n].push(w);
            }
            buckets
        })
    }

    /// Dictionary words within the distance-2 budget.
    fn scan_lexicon(&self, g: &[&str]) -> Vec<(String, f64)> {
        let lexicon = self.lexicon();
        let lo = g.len().saturating_sub(2);
        let hi = (g.len() + 2).min(lexicon.len().saturating_sub(1));
        let pool: Vec<&String> = (lo..=hi)
            .filter(|&n| n < lexicon.len())
            .flat_map(|n| lexicon[n].iter())
            .collect();
        let max = self.weights.edit2_max;
        self.execution
            .map(&pool, |w| {
                let cost = self.distance(g, w);
                (cost > 0.0 && cost <= max).then(|| ((*w).clone(), cost))
            })
            .into_iter()
            .flatten()
            .collect()
    }

    /// Joined form for two adjacent word tokens when the writer split a word.
    pub fn suggest_join(&self, left: &str, right: &str) -> Option<Suggestion> {
        let left = left.trim_end_matches('-');
        let right = right.trim_start_matches('-');
        if left.is_empty() || right.is_empty() {
            return None;
        }
        let joined = text::normalize(&format!("{left}{right}"));
        if !self.dict.recognize(&joined) {
            return None;
        }
        let bound = BOUND_SUFFIXES.contains(&right);
        if bound || !self.dict.recognize(left) || !self.dict.recognize(right) {
            Some(Suggestion {
                candidate: joined,
                cost: self.weights.join,
                source: Source::Join,
            })
        } else {
            None
        }
    }

    /// Ranked suggestions for many words.
    pub fn suggest_many(&self, words: &[String], k: usize) -> Vec<Vec<Suggestion>> {
        // the inner lexicon scan already uses the pool; build it once up front
        // so workers do not race to initialize it
        if self.execution.is_parallel() {
            let _ = self.lexicon();
        }
        self.execution.map(words, |w| self.suggest(w, k))
    }
}

/// Convenience wrapper building a one-off [`Suggester`].
pub fn generate(dict: &Dictionary, confusions: &Confusions, word: &str, k: usize) -> Vec<Suggestion> {
    Suggester::new(dict, confusions).suggest(word, k)
}

/// Convenience wrapper for [`Suggester::suggest_join`].
pub fn suggest_joins(dict: &Dictionary, left: &str, right: &str) -> Option<Suggestion> {
    let confusions = Confusions::default();
    Suggester::new(dict, &confusions).suggest_join(left, right)
}

fn grapheme_inventory(dict: &Dictionary) -> Vec<String> {
    let mut set: BTreeSet<String> = BTreeSet::new();
    let mut add = |s: &str| {
        for g in text::segment_lossy(s) {
            if g.chars().next().is_some_and(|c| !is_extender(c) && !c.is_whitespace()) {
                set.insert(g.to_string());
            }
        }
    };
    for e in dict.entries() {
        add(&e.stem);
    }
    for r in dict.table().rules() {
        add(&r.append);
    }
    for c in dict.table().alphabet.chars() {
        add(&c.to_string());
    }
    set.into_iter().collect()
}
