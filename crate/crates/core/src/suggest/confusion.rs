use thiserror::Error;

use crate::text::normalize;

/// Generic substitution cost; every set weight must stay below it.
pub const GENERIC_COST: f64 = 1.0;

/// Units that are mutually confusable, with the cost of swapping one for
/// another. Members are sub-grapheme strings: a vowel sign, a consonant, or
/// an independent vowel.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionSet {
    pub members: Vec<String>,
    pub weight: f64,
}

impl ConfusionSet {
    pub fn new<I, S>(weight: f64, members: I) -> Result<Self, String>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out: Vec<String> = Vec::new();
        for m in members {
            let m = normalize(m.as_ref().trim());
            if m.is_empty() {
                return Err("empty member".into());
            }
            if out.contains(&m) {
                return Err(format!("duplicate member {m}"));
            }
            out.push(m);
        }
        if out.len() < 2 {
            return Err("a set needs at least two members".into());
        }
        if !(weight.is_finite() && (0.0..GENERIC_COST).contains(&weight)) {
            return Err(format!("weight {weight} outside [0, {GENERIC_COST})"));
        }
        Ok(ConfusionSet {
            members: out,
            weight,
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("confusion line {line}: {message}")]
pub struct ConfusionError {
    pub line: usize,
    pub message: String,
}

/// An ordered list of confusion sets with grapheme-level lookups.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Confusions {
    sets: Vec<ConfusionSet>,
}

impl Confusions {
    pub fn new(sets: Vec<ConfusionSet>) -> Self {
        Confusions { sets }
    }

    pub fn sets(&self) -> &[ConfusionSet] {
        &self.sets
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Parses "weight TAB member TAB member..." lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ConfusionError> {
        let mut sets = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim_end();
            if line.trim().is_empty() {
                continue;
            }
            let err = |message: String| ConfusionError {
                line: i + 1,
                message,
            };
            let mut fields = line.split('\t').filter(|f| !f.trim().is_empty());
            let weight: f64 = fields
                .next()
                .unwrap_or("")
                .trim()
                .parse()
                .map_err(|_| err("weight is not a number".into()))?;
            sets.push(ConfusionSet::new(weight, fields).map_err(err)?);
        }
        Ok(Confusions { sets })
    }

    /// Cost of replacing grapheme `a` with `b`: 0 if equal, the lowest weight
    /// of a set under which they differ by one member swap, else the generic
    /// cost. This is a metric on graphemes when all weights are at least half
    /// the generic cost.
    pub fn substitution_cost(&self, a: &str, b: &str) -> f64 {
        if a == b {
            return 0.0;
        }
        let mut best = GENERIC_COST;
        for set in &self.sets {
            if set.weight < best && differ_by_swap(set, a, b) {
                best = set.weight;
            }
        }
        best
    }

    /// Every grapheme reachable from `g` by one member swap, with its cost.
    pub fn variants(&self, g: &str) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = Vec::new();
        for set in &self.sets {
            for from in &set.members {
                for (pos, _) in g.match_indices(from.as_str()) {
                    for to in set.members.iter().filter(|m| *m != from) {
                        let v = normalize(&format!("{}{to}{}", &g[..pos], &g[pos + from.len()..]));
                        if v == g {
                            continue;
                        }
                        match out.iter_mut().find(|(s, _)| *s == v) {
                            Some(slot) => slot.1 = slot.1.min(set.weight),
                            None => out.push((v, set.weight)),
                        }
                    }
                }
            }
        }
        out
    }
}

fn differ_by_swap(set: &ConfusionSet, a: &str, b: &str) -> bool {
    set.members.iter().any(|m| {
        a.match_indices(m.as_str()).any(|(p, _)| {
            let (head, tail) = (&a[..p], &a[p + m.len()..]);
            set.members.iter().any(|n| {
                n != m
                    && b.len() == head.len() + n.len() + tail.len()
                    && b.starts_with(head)
                    && b[head.len()..].starts_with(n.as_str())
                    && b.ends_with(tail)
            })
        })
    })
}
