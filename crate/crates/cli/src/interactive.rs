//! Review loop over flagged tokens.
//!
//! Commands at the prompt: a number accepts that candidate, `a<n>` accepts it
//! here and for every later identical token, `s` skips, `e` asks for a manual
//! replacement, `q` keeps the rest unchanged.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};
use std::ops::Range;

use sinspell::text::line_col;

use crate::report::Flag;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SessionEnd {
    Finished,
    Quit,
    /// Input ended mid-session; the text holds the decisions made so far.
    Detached,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Choice {
    Accept(usize),
    AcceptAll(usize),
    Skip,
    Edit,
    Quit,
}

fn parse_choice(line: &str, n: usize) -> Option<Choice> {
    let line = line.trim();
    let pick = |s: &str| s.parse::<usize>().ok().filter(|&k| (1..=n).contains(&k));
    match line {
        "s" => Some(Choice::Skip),
        "e" => Some(Choice::Edit),
        "q" => Some(Choice::Quit),
        _ => match line.strip_prefix('a') {
            Some(rest) => pick(rest).map(Choice::AcceptAll),
            None => pick(line).map(Choice::Accept),
        },
    }
}

fn read_line<R: BufRead>(input: &mut R) -> io::Result<Option<String>> {
    let mut buf = String::new();
    Ok((input.read_line(&mut buf)? > 0).then(|| buf.trim_end_matches(['\r', '\n']).to_string()))
}

/// Splices non-overlapping replacements into `text`.
fn splice(text: &str, edits: &[(Range<usize>, String)]) -> String {
    let mut edits: Vec<&(Range<usize>, String)> = edits.iter().collect();
    edits.sort_by_key(|(r, _)| r.start);
    let mut out = String::with_capacity(text.len());
    let mut pos = 0;
    for (r, s) in edits {
        out.push_str(&text[pos..r.start]);
        out.push_str(s);
        pos = r.end;
    }
    out.push_str(&text[pos..]);
    out
}

/// Walks `flags` in order, prompting on `prompt` and reading answers from
/// `input`. Returns the resulting text and how the session ended.
pub fn run_session<R: BufRead, W: Write>(
    text: &str,
    flags: &[Flag],
    mut input: R,
    mut prompt: W,
) -> io::Result<(String, SessionEnd)> {
    let mut edits: Vec<(Range<usize>, String)> = Vec::new();
    let mut remembered: HashMap<String, String> = HashMap::new();
    let overlaps = |edits: &[(Range<usize>, String)], r: &Range<usize>| {
        edits.iter().any(|(e, _)| e.start < r.end && r.start < e.end)
    };

    for flag in flags {
        if overlaps(&edits, &flag.span) {
            continue;
        }
        if let Some(rep) = remembered.get(&flag.token) {
            edits.push((flag.span.clone(), rep.clone()));
            continue;
        }
        let (line, col) = line_col(text, flag.span.start);
        writeln!(prompt, "{line}:{col}  {}", flag.token)?;
        for (i, c) in flag.candidates.iter().enumerate() {
            writeln!(prompt, "  {}) {}", i + 1, c.text)?;
        }
        loop {
            write!(prompt, "[n] accept, a<n> accept all, s skip, e edit, q quit > ")?;
            prompt.flush()?;
            let Some(answer) = read_line(&mut input)? else {
                return Ok((splice(text, &edits), SessionEnd::Detached));
            };
            match parse_choice(&answer, flag.candidates.len()) {
                Some(choice @ (Choice::Accept(k) | Choice::AcceptAll(k))) => {
                    let c = &flag.candidates[k - 1];
                    if overlaps(&edits, &c.span) {
                        writeln!(prompt, "that candidate overlaps an earlier change")?;
                        continue;
                    }
                    if choice == Choice::AcceptAll(k) && c.span == flag.span {
                        remembered.insert(flag.token.clone(), c.text.clone());
                    }
                    edits.push((c.span.clone(), c.text.clone()));
                }
                Some(Choice::Skip) => {}
                Some(Choice::Edit) => {
                    write!(prompt, "replacement > ")?;
                    prompt.flush()?;
                    let Some(rep) = read_line(&mut input)? else {
                        return Ok((splice(text, &edits), SessionEnd::Detached));
                    };
                    edits.push((flag.span.clone(), rep));
                }
                Some(Choice::Quit) => return Ok((splice(text, &edits), SessionEnd::Quit)),
                None => {
                    writeln!(prompt, "unrecognized choice")?;
                    continue;
                }
            }
            break;
        }
    }
    Ok((splice(text, &edits), SessionEnd::Finished))
}
