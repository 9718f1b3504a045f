//! Deterministic rewriting of evident errors.
//!
//! Rules are literal pattern/replacement pairs held in a character trie and
//! applied in one left-to-right pass with leftmost-longest selection. When a
//! replacement together with following input forms another pattern, that
//! match is taken in the same pass (it may start inside text already
//! emitted), so the output never contains a pattern occurrence and a second
//! pass is a no-op. Load-time checks reject rule sets for which this cannot
//! be guaranteed.

use std::collections::{HashMap, HashSet};
use std::ops::Range;

use thiserror::Error;

use crate::text::{self, is_word_char};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scope {
    Anywhere,
    /// Fires only when the match has no word character on either side.
    WholeToken,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub pattern: String,
    pub replacement: String,
    pub scope: Scope,
}

impl RewriteRule {
    pub fn new(pattern: &str, replacement: &str, scope: Scope) -> Self {
        RewriteRule {
            pattern: text::normalize(pattern),
            replacement: text::normalize(replacement),
            scope,
        }
    }
}

/// One rewrite, located in the original text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppliedFix {
    pub span: Range<usize>,
    pub before: String,
    pub after: String,
    /// The last rule applied within the span.
    pub rule_index: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("rule line {line}: {message}")]
pub struct RuleError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
struct Node {
    children: HashMap<char, usize>,
    rule: Option<usize>,
}

/// A validated, ordered rule list.
#[derive(Debug, Clone)]
pub struct RuleSet {
    rules: Vec<RewriteRule>,
    nodes: Vec<Node>,
    max_pattern: usize,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet {
            rules: Vec::new(),
            nodes: vec![Node::default()],
            max_pattern: 0,
        }
    }
}

fn parse_scope(s: &str) -> Option<Scope> {
    match s.trim().to_ascii_lowercase().replace(['-', '_'], "").as_str() {
        "" | "anywhere" => Some(Scope::Anywhere),
        "wholetoken" | "token" => Some(Scope::WholeToken),
        _ => None,
    }
}

/// Expands `\u{XXXX}` escapes so invisible joiners can be written legibly.
fn unescape(field: &str) -> Result<String, String> {
    let mut out = String::new();
    let mut rest = field;
    while let Some(i) = rest.find("\\u{") {
        out.push_str(&rest[..i]);
        let tail = &rest[i + 3..];
        let end = tail.find('}').ok_or("unterminated \\u{ escape")?;
        let c = u32::from_str_radix(&tail[..end], 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| format!("bad escape \\u{{{}}}", &tail[..end]))?;
        out.push(c);
        rest = &tail[end + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

/// Parses "pattern TAB replacement [TAB scope]" lines; `#` lines are comments.
pub fn load_rules(text: &str) -> Result<RuleSet, RuleError> {
    let mut rules = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let err = |message: String| RuleError {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = raw.trim_end_matches('\r').split('\t').collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(err("expected pattern TAB replacement [TAB scope]".into()));
        }
        let pattern = unescape(fields[0]).map_err(err)?;
        let replacement = unescape(fields[1]).map_err(err)?;
        let scope = parse_scope(fields.get(2).copied().unwrap_or(""))
            .ok_or_else(|| err(format!("unknown scope {:?}", fields[2])))?;
        rules.push(RewriteRule::new(&pattern, &replacement, scope));
        lines.push(line_no);
    }
    RuleSet::build(rules, &lines)
}

impl RuleSet {
    /// Validates rules given in order; errors cite 1-based rule positions.
    pub fn new(rules: Vec<RewriteRule>) -> Result<Self, RuleError> {
        let lines: Vec<usize> = (1..=rules.len()).collect();
        Self::build(rules, &lines)
    }

    fn build(rules: Vec<RewriteRule>, lines: &[usize]) -> Result<Self, RuleError> {
        let err = |i: usize, message: String| RuleError {
            line: lines[i],
            message,
        };
        let mut set = RuleSet::default();
        let mut seen: HashMap<&str, usize> = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            if r.pattern.is_empty() {
                return Err(err(i, "empty pattern".into()));
            }
            if r.pattern == r.replacement {
                return Err(err(i, "pattern equals replacement".into()));
            }
            if r.replacement.contains(&r.pattern) {
                return Err(err(i, format!("self-feeding: {:?} contains its own pattern", r.replacement)));
            }
            if let Some(&j) = seen.get(r.pattern.as_str()) {
                return Err(err(i, format!("duplicate pattern {:?} (also line {})", r.pattern, lines[j])));
            }
            seen.insert(&r.pattern, i);
        }
        for (i, r) in rules.iter().enumerate() {
            set.insert(&r.pattern, i);
        }
        set.rules = rules;
        set.check_interactions().map_err(|(i, m)| err(i, m))?;
        Ok(set)
    }

    fn insert(&mut self, pattern: &str, rule: usize) {
        let mut node = 0;
        for c in pattern.chars() {
            node = match self.nodes[node].children.get(&c) {
                Some(&n) => n,
                None => {
                    self.nodes.push(Node::default());
                    let n = self.nodes.len() - 1;
                    self.nodes[node].children.insert(c, n);
                    n
                }
            };
        }
        self.nodes[node].rule = Some(rule);
        self.max_pattern = self.max_pattern.max(pattern.len());
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Rule indices whose patterns are prefixes of `s`, shortest first.
    fn prefixes_of<'s>(&'s self, s: &'s str) -> impl Iterator<Item = (usize, usize)> + 's {
        let mut node = Some(0);
        s.char_indices().map_while(move |(i, c)| {
            let n = node?;
            let next = self.nodes[n].children.get(&c).copied();
            node = next;
            next.map(|m| (i + c.len_utf8(), self.nodes[m].rule))
        })
        .filter_map(|(end, rule)| rule.map(|r| (end, r)))
    }

    fn contains_anywhere_pattern(&self, s: &str) -> bool {
        s.char_indices().any(|(i, _)| {
            self.prefixes_of(&s[i..])
                .any(|(_, r)| self.rules[r].scope == Scope::Anywhere)
        })
    }

    /// Rejects rule sets where a replacement could complete a pattern that
    /// began in earlier output, or where token boundaries could shift.
    fn check_interactions(&self) -> Result<(), (usize, String)> {
        for (i, r) in self.rules.iter().enumerate() {
            for (j, other) in self.rules.iter().enumerate() {
                if i != j && other.replacement.contains(&r.pattern) {
                    return Err((
                        j,
                        format!("replacement {:?} contains the pattern {:?} of another rule", other.replacement, r.pattern),
                    ));
                }
            }
        }

        // nonempty prefixes of each replacement
        let mut by_prefix: HashMap<&str, Vec<usize>> = HashMap::new();
        for (i, r) in self.rules.iter().enumerate() {
            for (k, c) in r.replacement.char_indices() {
                by_prefix.entry(&r.replacement[..k + c.len_utf8()]).or_default().push(i);
            }
        }
        for (pi, p2) in self.rules.iter().enumerate() {
            // p2 = u + q[..k] with u and q[..k] nonempty; u came before a rule
            // whose replacement is q
            for (cut, _) in p2.pattern.char_indices().skip(1) {
                let (u, head) = p2.pattern.split_at(cut);
                let Some(feeders) = by_prefix.get(head) else {
                    continue;
                };
                for &qi in feeders {
                    let q = &self.rules[qi];
                    // a pattern ending exactly where the replacement ends is
                    // caught by the scanner right after the rewrite
                    if head.len() == q.replacement.len() {
                        continue;
                    }
                    if p2.scope == Scope::WholeToken {
                        if let Some(next) = q.replacement[head.len()..].chars().next() {
                            if is_word_char(next) {
                                continue;
                            }
                        }
                    }
                    let up = format!("{u}{}", q.pattern);
                    for (j, _) in q.pattern.char_indices() {
                        let seen = &up[..u.len() + j];
                        if self.contains_anywhere_pattern(seen) {
                            continue;
                        }
                        let preempted = self.prefixes_of(&up).any(|(end, r)| {
                            self.rules[r].scope == Scope::Anywhere && end > u.len() + j
                        });
                        if !preempted {
                            return Err((
                                qi,
                                format!(
                                    "replacement {:?} after {:?} completes pattern {:?} (rule {})",
                                    q.replacement,
                                    u,
                                    p2.pattern,
                                    pi + 1
                                ),
                            ));
                        }
                    }
                }
            }
        }

        if self.rules.iter().any(|r| r.scope == Scope::WholeToken) {
            let class = |c: Option<char>| c.map(is_word_char);
            for (i, r) in self.rules.iter().enumerate() {
                let (p, q) = (&r.pattern, &r.replacement);
                let ok = if q.is_empty() {
                    class(p.chars().next()) == Some(false) && class(p.chars().last()) == Some(false)
                } else {
                    class(p.chars().next()) == class(q.chars().next())
                        && class(p.chars().last()) == class(q.chars().last())
                };
                if !ok {
                    return Err((i, "rule changes the word/non-word class at its edges".into()));
                }
            }
        }
        Ok(())
    }

    fn is_boundary(c: Option<char>) -> bool {
        !c.is_some_and(is_word_char)
    }

    /// Longest valid match at `start` in `out[start..] + rest` that reaches
    /// past the end of `out`, or that ends exactly there when `settle` is set.
    fn match_at(&self, out: &str, start: usize, rest: &str, settle: bool) -> Option<(usize, usize)> {
        let mut best = None;
        let mut node = 0;
        let tail = &out[start..];
        let stream = tail.char_indices().chain(rest.char_indices().map(|(i, c)| (i + tail.len(), c)));
        let mut chars = stream.peekable();
        while let Some((i, c)) = chars.next() {
            let Some(&n) = self.nodes[node].children.get(&c) else {
                break;
            };
            node = n;
            let end = i + c.len_utf8();
            if let Some(r) = self.nodes[n].rule {
                if end > tail.len() || (settle && end == tail.len()) {
                    let ok = match self.rules[r].scope {
                        Scope::Anywhere => true,
                        Scope::WholeToken => {
                            Self::is_boundary(out[..start].chars().last())
                                && Self::is_boundary(chars.peek().map(|&(_, c)| c))
                        }
                    };
                    if ok {
                        best = Some((end, r));
                    }
                }
            }
        }
        best
    }

    /// Rewrites `text` (expected NFC) and reports every change.
    pub fn apply(&self, text: &str) -> (String, Vec<AppliedFix>) {
        struct Pending {
            span: Range<usize>,
            out: Range<usize>,
            after: String,
            rule: usize,
        }
        let mut out = String::with_capacity(text.len());
        let mut fixes: Vec<Pending> = Vec::new();
        let mut pos = 0;
        // where the latest replacement was written, until the next copy;
        // matches ending at the output end must start strictly before it
        let mut last_write: Option<usize> = None;
        while pos < text.len() || last_write.is_some() {
            let rest = &text[pos..];
            let lo = out.len().saturating_sub(self.max_pattern);
            let mut starts = out
                .char_indices()
                .map(|(i, _)| i)
                .skip_while(|&i| i < lo)
                .chain(std::iter::once(out.len()));
            let found = if self.rules.is_empty() {
                None
            } else {
                starts.find_map(|s| {
                    let settle = last_write.is_some_and(|w| s < w);
                    self.match_at(&out, s, rest, settle).map(|(len, r)| (s, len, r))
                })
            };
            let Some((s, len, r)) = found else {
                last_write = None;
                if let Some(c) = rest.chars().next() {
                    out.push(c);
                    pos += c.len_utf8();
                }
                continue;
            };
            let consumed = s + len - out.len();
            let new_pos = pos + consumed;
            // fixes whose output overlaps the rewritten tail merge into one
            let first = fixes
                .iter()
                .position(|f| f.out.end > s || f.out.start >= s)
                .unwrap_or(fixes.len());
            let (out_start, span_start) = match fixes.get(first) {
                Some(f) if f.out.start < s => (f.out.start, f.span.start),
                _ => {
                    let delta = fixes[..first]
                        .last()
                        .map_or(0isize, |f| f.span.end as isize - f.out.end as isize);
                    (s, (s as isize + delta) as usize)
                }
            };
            let replacement = &self.rules[r].replacement;
            let after = format!("{}{}", &out[out_start..s], replacement);
            fixes.truncate(first);
            out.truncate(s);
            out.push_str(replacement);
            fixes.push(Pending {
                span: span_start..new_pos,
                out: out_start..out.len(),
                after,
                rule: r,
            });
            pos = new_pos;
            last_write = Some(s);
        }
        let fixes = fixes
            .into_iter()
            .map(|f| AppliedFix {
                before: text[f.span.clone()].to_string(),
                span: f.span,
                after: f.after,
                rule_index: f.rule,
            })
            .collect();
        (out, fixes)
    }
}

pub fn apply(rules: &RuleSet, text: &str) -> (String, Vec<AppliedFix>) {
    rules.apply(text)
}

/// Rebuilds the output from the original text and the audit list.
pub fn replay(original: &str, fixes: &[AppliedFix]) -> String {
    let mut out = String::with_capacity(original.len());
    let mut at = 0;
    for f in fixes {
        out.push_str(&original[at..f.span.start]);
        out.push_str(&f.after);
        at = f.span.end;
    }
    out.push_str(&original[at..]);
    out
}

/// Audit records as "start TAB end TAB before TAB after TAB rule" lines,
/// with rule numbers counted from 1.
pub fn audit_tsv(fixes: &[AppliedFix]) -> String {
    let mut s = String::new();
    for f in fixes {
        s.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            f.span.start,
            f.span.end,
            f.before,
            f.after,
            f.rule_index + 1
        ));
    }
    s
}

/// Distinct rule indices that fired.
pub fn rules_used(fixes: &[AppliedFix]) -> HashSet<usize> {
    fixes.iter().map(|f| f.rule_index).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(rules: &[(&str, &str, Scope)]) -> RuleSet {
        RuleSet::new(rules.iter().map(|(p, q, s)| RewriteRule::new(p, q, *s)).collect()).unwrap()
    }

    #[test]
    fn load_examples() {
        assert!(load_rules("").unwrap().is_empty());
        assert_eq!(load_rules("# comment\nාා\tා\tAnywhere\n").unwrap().len(), 1);
        let r = load_rules("අපේක්ෂක්ෂා\tඅපේක්ෂා\tWholeToken\n").unwrap();
        assert_eq!(r.rules()[0].scope, Scope::WholeToken);
        let r = load_rules("ක\\u{200D}ා\tකා\n").unwrap();
        assert_eq!(r.rules()[0].pattern, "ක\u{200D}ා");
    }

    #[test]
    fn load_errors_name_the_line() {
        let e = load_rules("# x\nා\tාා\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("self-feeding"));
        let e = load_rules("ාා\tා\nාා\tා\tWholeToken\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("duplicate"));
        assert!(load_rules("\tා\n").is_err());
        assert!(load_rules("ා\tා\n").is_err());
        assert!(load_rules("ා\tක\tsomewhere\n").is_err());
        assert!(load_rules("ා\n").is_err());
    }

    #[test]
    fn cross_rule_feeding_is_rejected() {
        // second replacement contains the first pattern
        assert!(load_rules("ab\tc\nx\tyab\n").is_err());
        // y -> ab right after x would leave xa inside the output
        assert!(load_rules("xa\tz\ny\tab\n").is_err());
        // unless xy is itself rewritten first
        assert!(load_rules("xa\tz\ny\tab\nxy\tw\n").is_ok());
        // a pattern completed at the end of a replacement is settled in place
        let r = load_rules("xa\tz\ny\ta\n").unwrap();
        let (out, fixes) = r.apply("xy");
        assert_eq!(out, "z");
        assert_eq!(fixes.len(), 1);
        assert_eq!((fixes[0].span.clone(), fixes[0].rule_index), (0..2, 0));
    }

    #[test]
    fn no_match_unchanged() {
        let r = set(&[("ාා", "ා", Scope::Anywhere)]);
        assert_eq!(r.apply("මම ගෙදර"), ("මම ගෙදර".to_string(), vec![]));
    }

    #[test]
    fn whole_token_fix() {
        let r = set(&[("අපේක්ෂක්ෂා", "අපේක්ෂා", Scope::WholeToken)]);
        let (out, fixes) = r.apply("මෙය අපේක්ෂක්ෂා කරයි");
        assert_eq!(out, "මෙය අපේක්ෂා කරයි");
        assert_eq!(fixes.len(), 1);
        assert_eq!(fixes[0].before, "අපේක්ෂක්ෂා");
        // not inside a longer word
        let (out, fixes) = r.apply("අපේක්ෂක්ෂාව");
        assert_eq!(out, "අපේක්ෂක්ෂාව");
        assert!(fixes.is_empty());
    }

    #[test]
    fn collapse_duplicate_sign() {
        let r = set(&[("ාා", "ා", Scope::Anywhere)]);
        let (x, y) = ("කම", "ලය");
        let (out, fixes) = r.apply(&format!("{x}ාා{y}"));
        assert_eq!(out, format!("{x}ා{y}"));
        assert_eq!(fixes[0].span, x.len()..x.len() + "ාා".len());
        // a run collapses completely in one pass
        let (out, fixes) = r.apply("කාාාා");
        assert_eq!(out, "කා");
        assert_eq!(fixes.len(), 1);
        assert_eq!(fixes[0].before, "ාාාා");
        assert_eq!(r.apply(&out).0, out);
    }

    #[test]
    fn leftmost_longest() {
        let r = set(&[("ab", "X", Scope::Anywhere), ("abc", "Y", Scope::Anywhere), ("bcd", "Z", Scope::Anywhere)]);
        assert_eq!(r.apply("abcd").0, "Yd");
    }

    #[test]
    fn replay_reconstructs() {
        let r = set(&[("ාා", "ා", Scope::Anywhere), ("්්", "්", Scope::Anywhere)]);
        let t = "කාාාා ක්්ෂ ාා";
        let (out, fixes) = r.apply(t);
        assert_eq!(replay(t, &fixes), out);
        assert!(fixes.windows(2).all(|w| w[0].span.end <= w[1].span.start));
        assert_eq!(audit_tsv(&fixes).lines().count(), fixes.len());
    }
}
