use std::borrow::Cow;
use std::collections::{BTreeSet, HashMap};

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use super::{AffixKind, AffixTable, Flag, Warning};
use crate::text::{self, is_extender, ZWJ};

/// A stem and its flag set. A stem without the needs-affix flag is also a
/// valid word on its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StemEntry {
    pub stem: String,
    pub flags: BTreeSet<Flag>,
}

impl StemEntry {
    pub fn needs_affix(&self) -> bool {
        self.flags.iter().any(Flag::is_needs_affix)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DicError {
    #[error("dic line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("undefined flags: {}", .0.iter().map(|(s, f)| format!("{s}/{f}")).collect::<Vec<_>>().join(", "))]
    UndefinedFlags(Vec<(String, Flag)>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("expansion exceeds limit of {limit} words")]
pub struct ExpandError {
    pub limit: usize,
    /// Words generated before the limit was hit.
    pub partial: BTreeSet<String>,
}

/// How a recognized word decomposes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub stem: String,
    /// Indices into the affix table's rule list.
    pub prefix: Option<usize>,
    pub suffix: Option<usize>,
    /// Byte offset of the infixed negative in the analysed word.
    pub infix_at: Option<usize>,
}

/// Stems plus affix table, immutable once built. Lookups are exact matches
/// on the normalized form.
#[derive(Debug, Clone)]
pub struct Dictionary {
    entries: HashMap<String, StemEntry>,
    order: Vec<String>,
    table: AffixTable,
    suffix_index: HashMap<String, Vec<usize>>,
    prefix_index: HashMap<String, Vec<usize>>,
}

impl Dictionary {
    pub fn new(table: AffixTable) -> Self {
        let mut suffix_index: HashMap<String, Vec<usize>> = HashMap::new();
        let mut prefix_index: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, rule) in table.rules().iter().enumerate() {
            let index = match rule.kind {
                AffixKind::Suffix => &mut suffix_index,
                AffixKind::Prefix => &mut prefix_index,
            };
            index.entry(rule.append.clone()).or_default().push(i);
        }
        Dictionary {
            entries: HashMap::new(),
            order: Vec::new(),
            table,
            suffix_index,
            prefix_index,
        }
    }

    /// Parses `.aff` and `.dic` text together.
    pub fn load(aff: &str, dic: &str) -> Result<(Self, Vec<Warning>), LoadError> {
        let (table, mut warnings) = super::parse_aff(aff)?;
        let (dict, dic_warnings) = parse_dic(dic, table)?;
        warnings.extend(dic_warnings);
        Ok((dict, warnings))
    }

    /// Adds a stem, merging flags with any existing entry.
    pub fn insert(&mut self, stem: &str, flags: impl IntoIterator<Item = Flag>) {
        let stem = text::normalize(stem);
        let entry = match self.entries.get_mut(&stem) {
            Some(e) => e,
            None => {
                self.order.push(stem.clone());
                self.entries.entry(stem.clone()).or_insert(StemEntry {
                    stem,
                    flags: BTreeSet::new(),
                })
            }
        };
        entry.flags.extend(flags);
    }

    pub fn with_negative_infix(mut self, infix: Option<&str>) -> Self {
        self.table.negative_infix = infix.map(text::normalize);
        self
    }

    pub fn negative_infix(&self) -> Option<&str> {
        self.table
            .negative_infix
            .as_deref()
            .filter(|s| !s.is_empty())
    }

    pub fn table(&self) -> &AffixTable {
        &self.table
    }

    pub fn get(&self, stem: &str) -> Option<&StemEntry> {
        self.entries.get(stem)
    }

    /// Entries in first-insertion order.
    pub fn entries(&self) -> impl Iterator<Item = &StemEntry> {
        self.order.iter().map(|s| &self.entries[s])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn has_flag(&self, stem: &str, flag: &Flag) -> bool {
        self.entries.get(stem).is_some_and(|e| e.flags.contains(flag))
    }

    /// True iff `word` is a bare stem, a stem with one prefix and/or one
    /// suffix (both cross-product for the combination), or such a word with
    /// the negative infix inserted at an interior position.
    pub fn recognize(&self, word: &str) -> bool {
        self.analyze(word).is_some()
    }

    pub fn analyze(&self, word: &str) -> Option<Analysis> {
        let word: Cow<'_, str> = if unicode_normalization::is_nfc(word) {
            Cow::Borrowed(word)
        } else {
            Cow::Owned(text::normalize(word))
        };
        if word.is_empty() {
            return None;
        }
        self.analyze_base(&word).or_else(|| self.analyze_infix(&word))
    }

    fn analyze_base(&self, word: &str) -> Option<Analysis> {
        if let Some(entry) = self.entries.get(word) {
            if !entry.needs_affix() {
                return Some(Analysis {
                    stem: word.to_string(),
                    prefix: None,
                    suffix: None,
                    infix_at: None,
                });
            }
        }
        for (s, stem) in self.suffix_splits(word) {
            if self.has_flag(&stem, &self.table.rule(s).flag) {
                return Some(Analysis {
                    stem,
                    prefix: None,
                    suffix: Some(s),
                    infix_at: None,
                });
            }
        }
        for (p, inner) in self.prefix_splits(word) {
            let prule = self.table.rule(p);
            if self.has_flag(&inner, &prule.flag) {
                return Some(Analysis {
                    stem: inner,
                    prefix: Some(p),
                    suffix: None,
                    infix_at: None,
                });
            }
            if !prule.cross_product {
                continue;
            }
            for (s, stem) in self.suffix_splits(&inner) {
                let srule = self.table.rule(s);
                if srule.cross_product
                    && self.has_flag(&stem, &srule.flag)
                    && self.has_flag(&stem, &prule.flag)
                {
                    return Some(Analysis {
                        stem,
                        prefix: Some(p),
                        suffix: Some(s),
                        infix_at: None,
                    });
                }
            }
        }
        None
    }

    fn analyze_infix(&self, word: &str) -> Option<Analysis> {
        let infix = self.negative_infix()?;
        for (i, _) in word.char_indices() {
            let j = i + infix.len();
            if i == 0 || j >= word.len() || !word[i..].starts_with(infix) {
                continue;
            }
            let reduced = format!("{}{}", &word[..i], &word[j..]);
            if !is_insertion_point(&reduced, i) {
                continue;
            }
            if let Some(mut a) = self.analyze_base(&reduced) {
                a.infix_at = Some(i);
                return Some(a);
            }
        }
        None
    }

    /// (rule, stem) pairs with `apply(stem)` equal to `word` after NFC.
    /// Besides literal suffix matches this covers a composed vowel sign
    /// straddling the boundary, e.g. stem ending in ෙ plus suffix ා giving ො.
    fn suffix_splits(&self, word: &str) -> Vec<(usize, String)> {
        let mut out: Vec<(usize, String)> = self
            .suffix_candidates(word)
            .filter_map(|s| self.table.rule(s).unapply(word).map(|stem| (s, stem)))
            .collect();
        for (k, c) in word.char_indices() {
            let parts: Vec<char> = std::iter::once(c).nfd().collect();
            if parts.len() < 2 {
                continue;
            }
            let rest = &word[k + c.len_utf8()..];
            for cut in 1..parts.len() {
                let head: String = word[..k].chars().chain(parts[..cut].iter().copied()).collect();
                let tail: String = parts[cut..].iter().copied().chain(rest.chars()).collect();
                let (head, tail) = (text::normalize(&head), text::normalize(&tail));
                let Some(ids) = self.suffix_index.get(&tail) else {
                    continue;
                };
                let joined = format!("{head}{tail}");
                for &s in ids {
                    let rule = self.table.rule(s);
                    let Some(stem) = rule.unapply(&joined) else {
                        continue;
                    };
                    let stem = text::normalize(&stem);
                    if rule.apply(&stem).is_some_and(|w| text::normalize(&w) == word) {
                        out.push((s, stem));
                    }
                }
            }
        }
        out
    }

    /// Prefix-side counterpart of [`Dictionary::suffix_splits`]; a stripped
    /// stem may leave a dependent sign that composes with the prefix.
    fn prefix_splits(&self, word: &str) -> Vec<(usize, String)> {
        let mut out: Vec<(usize, String)> = self
            .prefix_candidates(word)
            .filter_map(|p| self.table.rule(p).unapply(word).map(|stem| (p, stem)))
            .collect();
        for (k, c) in word.char_indices() {
            let parts: Vec<char> = std::iter::once(c).nfd().collect();
            if parts.len() < 2 {
                continue;
            }
            let rest = &word[k + c.len_utf8()..];
            for cut in 1..parts.len() {
                let head: String = word[..k].chars().chain(parts[..cut].iter().copied()).collect();
                let tail: String = parts[cut..].iter().copied().chain(rest.chars()).collect();
                let head = text::normalize(&head);
                let Some(ids) = self.prefix_index.get(&head) else {
                    continue;
                };
                let joined = format!("{head}{tail}");
                for &p in ids {
                    let rule = self.table.rule(p);
                    let Some(stem) = rule.unapply(&joined) else {
                        continue;
                    };
                    let stem = text::normalize(&stem);
                    if rule.apply(&stem).is_some_and(|w| text::normalize(&w) == word) {
                        out.push((p, stem));
                    }
                }
            }
        }
        out
    }

    fn suffix_candidates<'a>(&'a self, word: &'a str) -> impl Iterator<Item = usize> + 'a {
        word.char_indices()
            .map(|(i, _)| i)
            .chain(std::iter::once(word.len()))
            .filter_map(|i| self.suffix_index.get(&word[i..]))
            .flatten()
            .copied()
    }

    fn prefix_candidates<'a>(&'a self, word: &'a str) -> impl Iterator<Item = usize> + 'a {
        std::iter::once(0)
            .chain(word.char_indices().map(|(i, c)| i + c.len_utf8()))
            .filter_map(|i| self.prefix_index.get(&word[..i]))
            .flatten()
            .copied()
    }

    /// Every word [`Dictionary::recognize`] accepts, by forward generation.
    pub fn expand_all(&self, limit: usize) -> Result<BTreeSet<String>, ExpandError> {
        let base = self.expand_base(limit)?;
        let mut out = base.clone();
        if let Some(infix) = self.negative_infix() {
            for word in &base {
                for i in insertion_points(word) {
                    out.insert(format!("{}{infix}{}", &word[..i], &word[i..]));
                    if out.len() > limit {
                        return Err(ExpandError {
                            limit,
                            partial: out,
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Like [`Dictionary::expand_all`] but without infixed forms.
    pub fn expand_base(&self, limit: usize) -> Result<BTreeSet<String>, ExpandError> {
        let mut out = BTreeSet::new();
        let push = |w: String, out: &mut BTreeSet<String>| {
            let w = if unicode_normalization::is_nfc(&w) {
                w
            } else {
                text::normalize(&w)
            };
            out.insert(w);
            if out.len() > limit {
                Err(())
            } else {
                Ok(())
            }
        };
        let mut run = || -> Result<(), ()> {
            for entry in self.entries() {
                let stem = entry.stem.as_str();
                if !entry.needs_affix() {
                    push(stem.to_string(), &mut out)?;
                }
                let rules: Vec<usize> = entry
                    .flags
                    .iter()
                    .flat_map(|f| self.table.rule_indices(f).iter().copied())
                    .collect();
                for &r in &rules {
                    let rule = self.table.rule(r);
                    if let Some(w) = rule.apply(stem) {
                        push(w, &mut out)?;
                    }
                }
                for &s in &rules {
                    let srule = self.table.rule(s);
                    if srule.kind != AffixKind::Suffix || !srule.cross_product {
                        continue;
                    }
                    let Some(inner) = srule.apply(stem) else {
                        continue;
                    };
                    for &p in &rules {
                        let prule = self.table.rule(p);
                        if prule.kind != AffixKind::Prefix || !prule.cross_product {
                            continue;
                        }
                        if let Some(w) = prule.apply(&inner) {
                            push(w, &mut out)?;
                        }
                    }
                }
            }
            Ok(())
        };
        match run() {
            Ok(()) => Ok(out),
            Err(()) => Err(ExpandError {
                limit,
                partial: out,
            }),
        }
    }
}

/// Byte offset `i` is a place the infix may go: strictly inside the word,
/// not in front of a combining sign and not right after a joiner.
pub(crate) fn is_insertion_point(word: &str, i: usize) -> bool {
    if i == 0 || i >= word.len() || !word.is_char_boundary(i) {
        return false;
    }
    let next = word[i..].chars().next();
    let prev = word[..i].chars().next_back();
    !next.is_some_and(is_extender) && prev != Some(ZWJ)
}

fn insertion_points(word: &str) -> impl Iterator<Item = usize> + '_ {
    word.char_indices()
        .map(|(i, _)| i)
        .filter(move |&i| is_insertion_point(word, i))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoadError {
    #[error(transparent)]
    Aff(#[from] super::AffError),
    #[error(transparent)]
    Dic(#[from] DicError),
}

/// Parses `.dic` text against an already parsed table. Flags must resolve
/// in the table (the needs-affix flag `!` is exempt).
pub fn parse_dic(text: &str, table: AffixTable) -> Result<(Dictionary, Vec<Warning>), DicError> {
    let text = text::normalize(text);
    let mut warnings = Vec::new();
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let declared = match lines.next() {
        None => None,
        Some((i, first)) => match first.trim().parse::<usize>() {
            Ok(n) => Some(n),
            Err(_) => {
                return Err(DicError::Malformed {
                    line: i + 1,
                    message: format!("first line must be the entry count, found {first:?}"),
                })
            }
        },
    };
    let format = table.flag_format;
    let mut dict = Dictionary::new(table);
    let mut undefined = Vec::new();
    let mut count = 0;
    for (i, line) in lines {
        let field = line.split_whitespace().next().unwrap_or("");
        let (stem, flag_field) = match field.split_once('/') {
            Some((s, f)) => (s, f),
            None => (field, ""),
        };
        if stem.is_empty() {
            return Err(DicError::Malformed {
                line: i + 1,
                message: "empty stem".into(),
            });
        }
        let flags = format.split(flag_field).map_err(|message| DicError::Malformed {
            line: i + 1,
            message,
        })?;
        for f in &flags {
            if !f.is_needs_affix() && !dict.table.has_flag(f) {
                undefined.push((stem.to_string(), f.clone()));
            }
        }
        dict.insert(stem, flags);
        count += 1;
    }
    if let Some(n) = declared {
        if n != count {
            warnings.push(Warning {
                line: 1,
                message: format!("declared {n} entries, found {count}"),
            });
        }
    }
    if !undefined.is_empty() {
        return Err(DicError::UndefinedFlags(undefined));
    }
    Ok((dict, warnings))
}

/// Stems whose recognition must not be affected by unrelated queries; used
/// in tests to show lookups leave the dictionary untouched.
#[cfg(test)]
fn snapshot(d: &Dictionary) -> Vec<(String, Vec<Flag>)> {
    d.entries()
        .map(|e| (e.stem.clone(), e.flags.iter().cloned().collect()))
        .collect()
}
