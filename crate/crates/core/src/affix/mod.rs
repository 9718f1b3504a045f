//! Hunspell-subset affix rules and `.aff` parsing.
//!
//! Supported directives: `SET`, `FLAG` (`char`/`UTF-8` or `long`), `TRY`,
//! `REP`, `PFX`, `SFX` and `NEGINFIX` (the infixed-negative string, `0` to
//! disable). Anything else is skipped and reported as a warning.

mod dictionary;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::text::normalize;

pub use dictionary::{parse_dic, Analysis, DicError, Dictionary, ExpandError, LoadError, StemEntry};

/// Default infixed negative marker ("no-").
pub const NEGATIVE_INFIX: &str = "නො";

/// An affix flag name. One character, or two with `FLAG long`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Flag(String);

impl Flag {
    /// Reserved flag marking stems that are not valid without an affix.
    pub const NEEDS_AFFIX: &'static str = "!";

    pub fn new(name: impl Into<String>) -> Self {
        Flag(name.into())
    }

    pub fn needs_affix() -> Self {
        Flag(Self::NEEDS_AFFIX.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_needs_affix(&self) -> bool {
        self.0 == Self::NEEDS_AFFIX
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlagFormat {
    #[default]
    Char,
    Long,
}

impl FlagFormat {
    /// Splits a `.dic` flag field into flags. `!` is always the reserved
    /// needs-affix flag regardless of format.
    pub fn split(self, field: &str) -> Result<Vec<Flag>, String> {
        let mut flags = Vec::new();
        let mut rest = String::new();
        for c in field.chars() {
            if c == '!' {
                flags.push(Flag::needs_affix());
            } else {
                rest.push(c);
            }
        }
        match self {
            FlagFormat::Char => flags.extend(rest.chars().map(|c| Flag(c.to_string()))),
            FlagFormat::Long => {
                let chars: Vec<char> = rest.chars().collect();
                if !chars.len().is_multiple_of(2) {
                    return Err(format!("odd-length long flag field {field:?}"));
                }
                flags.extend(chars.chunks(2).map(|p| Flag(p.iter().collect())));
            }
        }
        Ok(flags)
    }

    fn validate(self, name: &str) -> bool {
        match self {
            FlagFormat::Char => name.chars().count() == 1,
            FlagFormat::Long => name.chars().count() == 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AffixKind {
    Prefix,
    Suffix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum CondItem {
    Any,
    Char(char),
    Class { negated: bool, chars: Vec<char> },
}

impl CondItem {
    fn matches(&self, c: char) -> bool {
        match self {
            CondItem::Any => true,
            CondItem::Char(x) => *x == c,
            CondItem::Class { negated, chars } => chars.contains(&c) != *negated,
        }
    }
}

/// Affix condition: literals, `.` and bracketed classes (`[abc]`, `[^abc]`),
/// anchored at the edge where the affix attaches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    items: Vec<CondItem>,
    source: String,
}

impl Condition {
    pub fn any() -> Self {
        Condition {
            items: Vec::new(),
            source: ".".into(),
        }
    }

    pub fn parse(src: &str) -> Result<Self, String> {
        if src == "." {
            return Ok(Self::any());
        }
        let mut items = Vec::new();
        let mut chars = src.chars();
        while let Some(c) = chars.next() {
            match c {
                '.' => items.push(CondItem::Any),
                '[' => {
                    let mut negated = false;
                    let mut class = Vec::new();
                    let mut closed = false;
                    for (i, d) in chars.by_ref().enumerate() {
                        match d {
                            ']' => {
                                closed = true;
                                break;
                            }
                            '^' if i == 0 => negated = true,
                            _ => class.push(d),
                        }
                    }
                    if !closed {
                        return Err(format!("unterminated character class in condition {src:?}"));
                    }
                    items.push(CondItem::Class {
                        negated,
                        chars: class,
                    });
                }
                ']' => return Err(format!("stray ']' in condition {src:?}")),
                c => items.push(CondItem::Char(c)),
            }
        }
        Ok(Condition {
            items,
            source: src.to_string(),
        })
    }

    pub fn as_str(&self) -> &str {
        &self.source
    }

    /// Right-anchored match, used by suffixes.
    pub fn matches_end(&self, s: &str) -> bool {
        let mut chars = s.chars().rev();
        self.items
            .iter()
            .rev()
            .all(|item| chars.next().is_some_and(|c| item.matches(c)))
    }

    /// Left-anchored match, used by prefixes.
    pub fn matches_start(&self, s: &str) -> bool {
        let mut chars = s.chars();
        self.items
            .iter()
            .all(|item| chars.next().is_some_and(|c| item.matches(c)))
    }
}

/// One strip/append/condition rule under a flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffixRule {
    pub kind: AffixKind,
    pub flag: Flag,
    pub strip: String,
    pub append: String,
    pub condition: Condition,
    pub cross_product: bool,
}

impl AffixRule {
    pub fn suffix(flag: Flag, strip: &str, append: &str, condition: Condition) -> Self {
        AffixRule {
            kind: AffixKind::Suffix,
            flag,
            strip: strip.to_string(),
            append: append.to_string(),
            condition,
            cross_product: true,
        }
    }

    pub fn prefix(flag: Flag, strip: &str, append: &str, condition: Condition) -> Self {
        AffixRule {
            kind: AffixKind::Prefix,
            ..Self::suffix(flag, strip, append, condition)
        }
    }

    /// Applies the rule to `word`. The stripped remainder must be non-empty
    /// and satisfy the condition at the attaching edge.
    pub fn apply(&self, word: &str) -> Option<String> {
        match self.kind {
            AffixKind::Suffix => {
                let rest = word.strip_suffix(self.strip.as_str())?;
                if rest.is_empty() || !self.condition.matches_end(rest) {
                    return None;
                }
                Some(format!("{rest}{}", self.append))
            }
            AffixKind::Prefix => {
                let rest = word.strip_prefix(self.strip.as_str())?;
                if rest.is_empty() || !self.condition.matches_start(rest) {
                    return None;
                }
                Some(format!("{}{rest}", self.append))
            }
        }
    }

    /// Exact inverse of [`AffixRule::apply`]: the form this rule would have
    /// been applied to in order to produce `word`.
    pub fn unapply(&self, word: &str) -> Option<String> {
        match self.kind {
            AffixKind::Suffix => {
                let rest = word.strip_suffix(self.append.as_str())?;
                if rest.is_empty() || !self.condition.matches_end(rest) {
                    return None;
                }
                Some(format!("{rest}{}", self.strip))
            }
            AffixKind::Prefix => {
                let rest = word.strip_prefix(self.append.as_str())?;
                if rest.is_empty() || !self.condition.matches_start(rest) {
                    return None;
                }
                Some(format!("{}{rest}", self.strip))
            }
        }
    }
}

/// Rules keyed by flag plus the suggestion-side tables (REP pairs, TRY
/// alphabet).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffixTable {
    rules: Vec<AffixRule>,
    by_flag: BTreeMap<Flag, Vec<usize>>,
    pub replacements: Vec<(String, String)>,
    pub alphabet: String,
    pub flag_format: FlagFormat,
    /// `None` disables infixed-negative recognition.
    pub negative_infix: Option<String>,
}

impl Default for AffixTable {
    fn default() -> Self {
        AffixTable {
            rules: Vec::new(),
            by_flag: BTreeMap::new(),
            replacements: Vec::new(),
            alphabet: String::new(),
            flag_format: FlagFormat::Char,
            negative_infix: Some(NEGATIVE_INFIX.to_string()),
        }
    }
}

impl AffixTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_rule(&mut self, rule: AffixRule) {
        self.by_flag
            .entry(rule.flag.clone())
            .or_default()
            .push(self.rules.len());
        self.rules.push(rule);
    }

    pub fn rules(&self) -> &[AffixRule] {
        &self.rules
    }

    pub fn rule(&self, index: usize) -> &AffixRule {
        &self.rules[index]
    }

    pub fn rules_for<'a>(&'a self, flag: &Flag) -> impl Iterator<Item = &'a AffixRule> + 'a {
        self.by_flag
            .get(flag)
            .into_iter()
            .flatten()
            .map(|&i| &self.rules[i])
    }

    pub fn rule_indices(&self, flag: &Flag) -> &[usize] {
        self.by_flag.get(flag).map_or(&[], Vec::as_slice)
    }

    pub fn has_flag(&self, flag: &Flag) -> bool {
        self.by_flag.contains_key(flag)
    }

    pub fn flags(&self) -> impl Iterator<Item = &Flag> {
        self.by_flag.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty() && self.replacements.is_empty() && self.alphabet.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("aff line {line}: {message}")]
pub struct AffError {
    pub line: usize,
    pub message: String,
}

/// Non-fatal findings reported alongside a successful parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

struct OpenBlock {
    kind: AffixKind,
    flag: Flag,
    cross_product: bool,
    declared: usize,
    seen: usize,
    header_line: usize,
}

impl OpenBlock {
    fn check_complete(&self) -> Result<(), AffError> {
        if self.seen == self.declared {
            Ok(())
        } else {
            Err(AffError {
                line: self.header_line,
                message: format!(
                    "flag {} declares {} rules but {} follow",
                    self.flag, self.declared, self.seen
                ),
            })
        }
    }
}

fn zero_as_empty(s: &str) -> &str {
    if s == "0" {
        ""
    } else {
        s
    }
}

/// Parses `.aff` text. Returns the table and the list of skipped or
/// questionable lines.
pub fn parse_aff(text: &str) -> Result<(AffixTable, Vec<Warning>), AffError> {
    let text = normalize(text);
    let mut table = AffixTable::new();
    let mut warnings = Vec::new();
    let mut block: Option<OpenBlock> = None;
    let mut rep_remaining: Option<(usize, usize)> = None;

    let err = |line: usize, message: String| AffError { line, message };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let directive = fields[0];

        // an open affix block swallows rule lines of its own kind and flag
        if let Some(open) = block.as_mut() {
            let kind = match directive {
                "PFX" => Some(AffixKind::Prefix),
                "SFX" => Some(AffixKind::Suffix),
                _ => None,
            };
            if open.seen < open.declared && kind.is_some() {
                if kind != Some(open.kind) || fields.get(1) != Some(&open.flag.as_str()) {
                    return Err(err(
                        line_no,
                        format!(
                            "expected rule {} of {} for flag {}",
                            open.seen + 1,
                            open.declared,
                            open.flag
                        ),
                    ));
                }
                if fields.len() < 5 {
                    return Err(err(
                        line_no,
                        format!("affix rule needs 5 fields, found {}", fields.len()),
                    ));
                }
                if fields.len() > 5 {
                    warnings.push(Warning {
                        line: line_no,
                        message: "extra fields after condition ignored".into(),
                    });
                }
                let append = zero_as_empty(fields[3]);
                if append.contains('/') {
                    return Err(err(line_no, "affix continuation classes are not supported".into()));
                }
                let condition = Condition::parse(fields[4]).map_err(|m| err(line_no, m))?;
                table.add_rule(AffixRule {
                    kind: open.kind,
                    flag: open.flag.clone(),
                    strip: zero_as_empty(fields[2]).to_string(),
                    append: append.to_string(),
                    condition,
                    cross_product: open.cross_product,
                });
                open.seen += 1;
                continue;
            }
            open.check_complete()?;
            block = None;
        }

        if let Some((remaining, header)) = rep_remaining {
            if remaining > 0 {
                if directive != "REP" {
                    return Err(err(
                        header,
                        format!("REP block is missing {remaining} replacement lines"),
                    ));
                }
                if fields.len() != 3 {
                    return Err(err(line_no, "REP pair needs exactly 2 fields".into()));
                }
                let from = fields[1].replace('_', " ");
                let to = fields[2].replace('_', " ");
                table.replacements.push((from, to));
                rep_remaining = Some((remaining - 1, header));
                continue;
            }
            rep_remaining = None;
        }

        match directive {
            "SET" => {
                let enc = fields.get(1).copied().unwrap_or("");
                if !enc.eq_ignore_ascii_case("UTF-8") {
                    warnings.push(Warning {
                        line: line_no,
                        message: format!("encoding {enc:?} ignored, input is read as UTF-8"),
                    });
                }
            }
            "FLAG" => match fields.get(1).copied() {
                Some("long") => table.flag_format = FlagFormat::Long,
                Some("UTF-8") | Some("char") => table.flag_format = FlagFormat::Char,
                other => {
                    return Err(err(line_no, format!("unsupported flag format {other:?}")));
                }
            },
            "TRY" => {
                table.alphabet = fields.get(1).copied().unwrap_or("").to_string();
            }
            "NEGINFIX" => {
                let value = fields
                    .get(1)
                    .ok_or_else(|| err(line_no, "NEGINFIX needs a value".into()))?;
                table.negative_infix = if *value == "0" {
                    None
                } else {
                    Some(value.to_string())
                };
            }
            "REP" => {
                if fields.len() != 2 {
                    return Err(err(line_no, "REP pair without a count header".into()));
                }
                let n: usize = fields[1]
                    .parse()
                    .map_err(|_| err(line_no, format!("bad REP count {:?}", fields[1])))?;
                rep_remaining = Some((n, line_no));
            }
            "PFX" | "SFX" => {
                if fields.len() != 4 {
                    return Err(err(
                        line_no,
                        format!(
                            "{directive} header needs flag, cross-product and count (no open block for rule line)"
                        ),
                    ));
                }
                let flag = Flag(fields[1].to_string());
                if !table.flag_format.validate(flag.as_str()) || flag.is_needs_affix() {
                    return Err(err(line_no, format!("invalid flag name {:?}", fields[1])));
                }
                let cross_product = match fields[2] {
                    "Y" => true,
                    "N" => false,
                    other => return Err(err(line_no, format!("cross-product must be Y or N, got {other:?}"))),
                };
                let declared: usize = fields[3]
                    .parse()
                    .map_err(|_| err(line_no, format!("bad rule count {:?}", fields[3])))?;
                block = Some(OpenBlock {
                    kind: if directive == "PFX" {
                        AffixKind::Prefix
                    } else {
                        AffixKind::Suffix
                    },
                    flag,
                    cross_product,
                    declared,
                    seen: 0,
                    header_line: line_no,
                });
            }
            other => warnings.push(Warning {
                line: line_no,
                message: format!("unsupported directive {other} skipped"),
            }),
        }
    }

    if let Some(open) = block {
        open.check_complete()?;
    }
    if let Some((remaining, header)) = rep_remaining {
        if remaining > 0 {
            return Err(err(header, format!("REP block is missing {remaining} replacement lines")));
        }
    }
    Ok((table, warnings))
}
