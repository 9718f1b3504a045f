//! Unicode foundation: normalization, Sinhala-tailored grapheme segmentation
//! and tokenization of running text.
//!
//! Every text entry point in the crate goes through [`normalize`] once so that
//! dictionary data and user input agree on their byte representation.

use std::fmt;
use std::ops::Range;

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

/// Zero-width joiner, used after the virama to request conjunct rendering.
pub const ZWJ: char = '\u{200D}';
/// Zero-width non-joiner.
pub const ZWNJ: char = '\u{200C}';
/// Sinhala sign al-lakuna (virama).
pub const VIRAMA: char = '\u{0DCA}';

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("invalid UTF-8 at byte offset {offset}")]
    Decode { offset: usize },
    #[error("word starts with combining mark U+{codepoint:04X} at byte offset {offset}")]
    LeadingCombiningMark { offset: usize, codepoint: u32 },
}

/// Canonical composition (NFC). Idempotent, and ZWJ/ZWNJ survive untouched.
pub fn normalize(text: &str) -> String {
    text.nfc().collect()
}

/// Decodes UTF-8 bytes and normalizes them, reporting the first bad offset.
pub fn normalize_bytes(bytes: &[u8]) -> Result<String, TextError> {
    match std::str::from_utf8(bytes) {
        Ok(s) => Ok(normalize(s)),
        Err(e) => Err(TextError::Decode {
            offset: e.valid_up_to(),
        }),
    }
}

/// Sinhala consonants (ka .. fa).
pub fn is_sinhala_consonant(c: char) -> bool {
    matches!(c, '\u{0D9A}'..='\u{0DC6}')
}

/// Independent vowels (a .. au).
pub fn is_sinhala_vowel(c: char) -> bool {
    matches!(c, '\u{0D85}'..='\u{0D96}')
}

/// Codepoints that never start a grapheme: Sinhala dependent signs, the
/// virama, joiners and the common combining-mark blocks.
pub fn is_extender(c: char) -> bool {
    matches!(
        c,
        '\u{0D81}'..='\u{0D83}'
            | '\u{0DCA}'
            | '\u{0DCF}'..='\u{0DDF}'
            | '\u{0DF2}'..='\u{0DF3}'
            | ZWJ
            | ZWNJ
            | '\u{0300}'..='\u{036F}'
            | '\u{1AB0}'..='\u{1AFF}'
            | '\u{1DC0}'..='\u{1DFF}'
            | '\u{20D0}'..='\u{20FF}'
            | '\u{FE00}'..='\u{FE0F}'
            | '\u{FE20}'..='\u{FE2F}'
    )
}

/// Characters that may appear inside a Word token.
pub fn is_word_char(c: char) -> bool {
    is_extender(c) || is_sinhala_consonant(c) || is_sinhala_vowel(c) || c.is_alphabetic()
}

fn is_number_char(c: char) -> bool {
    c.is_numeric()
}

fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{00A1}' | '\u{00A7}' | '\u{00AB}' | '\u{00B6}' | '\u{00B7}' | '\u{00BB}' | '\u{00BF}'
                | '\u{0964}'
                | '\u{0965}'
                | '\u{0DF4}'
                | '\u{2010}'..='\u{2027}'
                | '\u{2030}'..='\u{205E}'
                | '\u{3001}'..='\u{3003}'
        )
}

/// Splits a normalized word into Sinhala-tailored grapheme clusters.
///
/// Dependent vowel signs, the virama and joiners attach to the preceding
/// base; a cluster ending in virama + ZWJ absorbs the following consonant so
/// that conjuncts (yansaya, rakaransaya, touching letters) stay one unit.
pub fn segment(word: &str) -> Result<Vec<&str>, TextError> {
    if let Some(c) = word.chars().next() {
        if is_extender(c) {
            return Err(TextError::LeadingCombiningMark {
                offset: 0,
                codepoint: c as u32,
            });
        }
    }
    Ok(segment_lossy(word))
}

/// Like [`segment`] but total: a leading run of combining marks becomes its
/// own cluster instead of an error. Used on unvetted user input.
pub fn segment_lossy(word: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut chars = word.char_indices().peekable();
    while let Some((start, first)) = chars.next() {
        let mut end = start + first.len_utf8();
        let mut prev2 = None;
        let mut prev1 = Some(first);
        while let Some(&(i, c)) = chars.peek() {
            let joins_conjunct =
                prev2 == Some(VIRAMA) && prev1 == Some(ZWJ) && is_sinhala_consonant(c);
            if is_extender(c) || joins_conjunct {
                chars.next();
                end = i + c.len_utf8();
                prev2 = prev1;
                prev1 = Some(c);
            } else {
                break;
            }
        }
        out.push(&word[start..end]);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Number,
    Punctuation,
    Other,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Word => "Word",
            TokenKind::Number => "Number",
            TokenKind::Punctuation => "Punct",
            TokenKind::Other => "Other",
        };
        f.write_str(s)
    }
}

/// A slice of the source text with its byte span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token<'a> {
    pub surface: &'a str,
    pub span: Range<usize>,
    pub kind: TokenKind,
}

impl Token<'_> {
    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }
}

/// Tokenizes normalized text. Whitespace is not a token; every other byte
/// belongs to exactly one token.
///
/// Hyphens split words (the miner and join suggester reassemble them) and
/// digit runs, with internal `.`/`,` between digits, form Number tokens.
pub fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut iter = text.char_indices().peekable();
    while let Some((start, c)) = iter.next() {
        if c.is_whitespace() {
            continue;
        }
        let mut end = start + c.len_utf8();
        let kind = if is_word_char(c) {
            while let Some(&(i, n)) = iter.peek() {
                if !is_word_char(n) {
                    break;
                }
                iter.next();
                end = i + n.len_utf8();
            }
            TokenKind::Word
        } else if is_number_char(c) {
            while let Some(&(i, n)) = iter.peek() {
                if is_number_char(n) {
                    iter.next();
                    end = i + n.len_utf8();
                } else if matches!(n, '.' | ',') {
                    // a separator only belongs to the number when a digit follows it
                    let after = &text[i + 1..];
                    if after.chars().next().is_some_and(is_number_char) {
                        iter.next();
                        end = i + 1;
                    } else {
                        break;
                    }
                } else {
                    break;
                }
            }
            TokenKind::Number
        } else if is_punctuation(c) {
            TokenKind::Punctuation
        } else {
            TokenKind::Other
        };
        tokens.push(Token {
            surface: &text[start..end],
            span: start..end,
            kind,
        });
    }
    tokens
}

/// 1-based (line, column) of a byte offset, columns counted in characters.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    let col = text[line_start..offset].chars().count() + 1;
    (line, col)
}
