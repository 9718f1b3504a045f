//! Flagging unknown words and rendering the check report.

use std::ops::Range;

use sinspell::text::{self, Token, TokenKind};
use sinspell::Suggester;

/// A replacement offered for a flagged token. Join candidates cover the
/// neighbouring token as well.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub text: String,
    pub span: Range<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    pub span: Range<usize>,
    pub token: String,
    pub candidates: Vec<Candidate>,
}

/// The word token adjacent to `i` in direction `step`, if only hyphens and
/// whitespace separate them.
fn neighbour<'t>(tokens: &'t [Token<'_>], i: usize, forward: bool) -> Option<&'t Token<'t>> {
    let mut j = i;
    loop {
        j = if forward { j + 1 } else { j.checked_sub(1)? };
        let t = tokens.get(j)?;
        match t.kind {
            TokenKind::Word => return Some(t),
            TokenKind::Punctuation if t.surface == "-" => continue,
            _ => return None,
        }
    }
}

/// Unknown word tokens of normalized `text`, in order, with ranked
/// candidates. Join candidates are merged in by cost.
pub fn find_flags(suggester: &Suggester<'_>, text: &str, k: usize) -> Vec<Flag> {
    let tokens = text::tokenize(text);
    let dict = suggester.dictionary();
    let unknown: Vec<usize> = (0..tokens.len())
        .filter(|&i| tokens[i].kind == TokenKind::Word && !dict.recognize(tokens[i].surface))
        .collect();
    let words: Vec<String> = unknown.iter().map(|&i| tokens[i].surface.to_string()).collect();
    let ranked = suggester.suggest_many(&words, k);
    unknown
        .iter()
        .zip(ranked)
        .map(|(&i, suggestions)| {
            let t = &tokens[i];
            let mut scored: Vec<(f64, Candidate)> = Vec::new();
            if let Some(p) = neighbour(&tokens, i, false) {
                if let Some(s) = suggester.suggest_join(p.surface, t.surface) {
                    scored.push((s.cost, Candidate { text: s.candidate, span: p.span.start..t.span.end }));
                }
            }
            if let Some(n) = neighbour(&tokens, i, true) {
                if let Some(s) = suggester.suggest_join(t.surface, n.surface) {
                    scored.push((s.cost, Candidate { text: s.candidate, span: t.span.start..n.span.end }));
                }
            }
            for s in suggestions {
                scored.push((s.cost, Candidate { text: s.candidate, span: t.span.clone() }));
            }
            // stable: equal costs keep join candidates first
            scored.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut candidates: Vec<Candidate> = Vec::new();
            for (_, c) in scored {
                if !candidates.iter().any(|x| x.text == c.text) {
                    candidates.push(c);
                }
            }
            candidates.truncate(k);
            Flag {
                span: t.span.clone(),
                token: t.surface.to_string(),
                candidates,
            }
        })
        .collect()
}

/// "line:col TAB token TAB s1,s2,..." per flag, optionally prefixed with a
/// file name.
pub fn render(text: &str, flags: &[Flag], prefix: Option<&str>) -> String {
    let mut out = String::new();
    for f in flags {
        let (line, col) = text::line_col(text, f.span.start);
        if let Some(p) = prefix {
            out.push_str(p);
            out.push(':');
        }
        let list: Vec<&str> = f.candidates.iter().map(|c| c.text.as_str()).collect();
        out.push_str(&format!("{line}:{col}\t{}\t{}\n", f.token, list.join(",")));
    }
    out
}
