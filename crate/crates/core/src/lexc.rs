//! `.lexc` lexicon parsing and compilation to `.dic`/`.aff` pairs.
//!
//! Stems are the first non-empty surface strings reached from `Root`; every
//! continuation chain hanging off a stem is pre-expanded into one suffix set,
//! and each distinct suffix set becomes one SFX flag. Recognition through the
//! affix engine therefore never needs more than one suffix.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::text::normalize;

pub const ROOT: &str = "Root";
/// Cap on the number of pre-expanded suffix strings per lexicon.
pub const MAX_SUFFIXES: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LexcError {
    #[error("lexc line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("lexc line {line}: entry {entry:?} continues to undefined lexicon {lexicon}")]
    UndefinedLexicon {
        line: usize,
        entry: String,
        lexicon: String,
    },
    #[error("no LEXICON Root")]
    MissingRoot,
    #[error("continuation cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("{0} distinct suffix classes exceed the 676 two-letter flag names")]
    TooManyClasses(usize),
    #[error("lexicon {0} expands to more than {MAX_SUFFIXES} suffix strings")]
    TooLarge(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Continuation {
    /// The `#` terminator.
    End,
    Lexicon(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexcEntry {
    /// Tag side; equals the surface for uncolonized entries.
    pub analysis: String,
    /// Lower side, empty for `0` or pure continuations.
    pub surface: String,
    pub continuation: Continuation,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    pub name: String,
    pub entries: Vec<LexcEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexcSource {
    pub multichar_symbols: Vec<String>,
    pub lexicons: Vec<Lexicon>,
    pub root_name: String,
}

impl LexcSource {
    pub fn lexicon(&self, name: &str) -> Option<&Lexicon> {
        self.lexicons.iter().find(|l| l.name == name)
    }
}

fn strip_comment(line: &str) -> &str {
    let mut prev = None;
    for (i, c) in line.char_indices() {
        if c == '!' && prev != Some('%') {
            return &line[..i];
        }
        prev = Some(c);
    }
    line
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '%' {
            if let Some(n) = chars.next() {
                out.push(n);
            }
        } else {
            out.push(c);
        }
    }
    out
}

fn surface_of(s: &str) -> String {
    let s = s.trim();
    if s == "0" {
        String::new()
    } else {
        unescape(s)
    }
}

fn parse_entry(chunk: &str, line: usize) -> Result<LexcEntry, LexcError> {
    let tokens: Vec<&str> = chunk.split_whitespace().collect();
    let (cont, form) = match tokens.split_last() {
        Some((cont, form)) => (*cont, form.join(" ")),
        None => {
            return Err(LexcError::Syntax {
                line,
                message: "empty entry".into(),
            })
        }
    };
    let continuation = if cont == "#" {
        Continuation::End
    } else {
        Continuation::Lexicon(cont.to_string())
    };
    let (analysis, surface) = match form.split_once(':') {
        Some((a, s)) => (unescape(a.trim()), surface_of(s)),
        None => {
            let s = surface_of(&form);
            (s.clone(), s)
        }
    };
    Ok(LexcEntry {
        analysis,
        surface,
        continuation,
        line,
    })
}

/// Parses lexc text: `!` comments, a `Multichar_Symbols` header, `LEXICON`
/// blocks and `;`-terminated entries.
pub fn parse_lexc(text: &str) -> Result<LexcSource, LexcError> {
    let text = normalize(text);
    let mut multichar_symbols = Vec::new();
    let mut in_symbols = false;
    let mut lexicons: Vec<Lexicon> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let head = words.next().unwrap_or("");
        if head == "Multichar_Symbols" {
            in_symbols = true;
            multichar_symbols.extend(words.map(String::from));
            continue;
        }
        if head == "LEXICON" {
            in_symbols = false;
            let name = words.next().ok_or_else(|| LexcError::Syntax {
                line: line_no,
                message: "LEXICON without a name".into(),
            })?;
            if words.next().is_some() {
                return Err(LexcError::Syntax {
                    line: line_no,
                    message: "trailing text after LEXICON name".into(),
                });
            }
            if lexicons.iter().any(|l| l.name == name) {
                return Err(LexcError::Syntax {
                    line: line_no,
                    message: format!("lexicon {name} defined twice"),
                });
            }
            lexicons.push(Lexicon {
                name: name.to_string(),
                entries: Vec::new(),
            });
            continue;
        }
        if in_symbols {
            multichar_symbols.extend(line.split_whitespace().map(String::from));
            continue;
        }
        let Some(current) = lexicons.last_mut() else {
            return Err(LexcError::Syntax {
                line: line_no,
                message: "entry before any LEXICON".into(),
            });
        };
        if !line.ends_with(';') {
            return Err(LexcError::Syntax {
                line: line_no,
                message: "entry must end with ';'".into(),
            });
        }
        for chunk in line.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            current.entries.push(parse_entry(chunk, line_no)?);
        }
    }

    if !lexicons.iter().any(|l| l.name == ROOT) {
        return Err(LexcError::MissingRoot);
    }
    let names: HashSet<&str> = lexicons.iter().map(|l| l.name.as_str()).collect();
    for lex in &lexicons {
        for e in &lex.entries {
            if let Continuation::Lexicon(target) = &e.continuation {
                if !names.contains(target.as_str()) {
                    let entry = if e.surface.is_empty() {
                        e.analysis.clone()
                    } else {
                        e.surface.clone()
                    };
                    return Err(LexcError::UndefinedLexicon {
                        line: e.line,
                        entry,
                        lexicon: target.clone(),
                    });
                }
            }
        }
    }
    Ok(LexcSource {
        multichar_symbols,
        lexicons,
        root_name: ROOT.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CompileOptions {
    /// Keep infixed-negative recognition on in the emitted `.aff`.
    pub negative_infix: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compiled {
    pub dic: String,
    pub aff: String,
}

/// suffix string -> analyses producing it
type SuffixSet = BTreeMap<String, BTreeSet<String>>;

struct Compiler<'a> {
    src: &'a LexcSource,
    index: HashMap<&'a str, &'a Lexicon>,
    memo: HashMap<&'a str, SuffixSet>,
}

impl<'a> Compiler<'a> {
    fn new(src: &'a LexcSource) -> Self {
        Compiler {
            src,
            index: src.lexicons.iter().map(|l| (l.name.as_str(), l)).collect(),
            memo: HashMap::new(),
        }
    }

    fn check_acyclic(&self) -> Result<(), LexcError> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Active,
            Done,
        }
        fn visit<'a>(
            name: &'a str,
            index: &HashMap<&'a str, &'a Lexicon>,
            marks: &mut HashMap<&'a str, Mark>,
            stack: &mut Vec<&'a str>,
        ) -> Result<(), LexcError> {
            match marks.get(name) {
                Some(Mark::Done) => return Ok(()),
                Some(Mark::Active) => {
                    let start = stack.iter().position(|n| *n == name).unwrap_or(0);
                    let mut cycle: Vec<String> =
                        stack[start..].iter().map(|s| s.to_string()).collect();
                    cycle.push(name.to_string());
                    return Err(LexcError::Cycle(cycle));
                }
                None => {}
            }
            marks.insert(name, Mark::Active);
            stack.push(name);
            for e in &index[name].entries {
                if let Continuation::Lexicon(next) = &e.continuation {
                    visit(next, index, marks, stack)?;
                }
            }
            stack.pop();
            marks.insert(name, Mark::Done);
            Ok(())
        }
        visit(
            self.src.root_name.as_str(),
            &self.index,
            &mut HashMap::new(),
            &mut Vec::new(),
        )
    }

    /// All surface strings from entering `name` to `#`.
    fn suffixes(&mut self, name: &'a str) -> Result<SuffixSet, LexcError> {
        if let Some(s) = self.memo.get(name) {
            return Ok(s.clone());
        }
        let lex = self.index[name];
        let mut out = SuffixSet::new();
        for e in &lex.entries {
            match &e.continuation {
                Continuation::End => {
                    out.entry(e.surface.clone())
                        .or_default()
                        .insert(e.analysis.clone());
                }
                Continuation::Lexicon(next) => {
                    for (s, analyses) in self.suffixes(next)? {
                        let slot = out.entry(format!("{}{s}", e.surface)).or_default();
                        for a in analyses {
                            slot.insert(format!("{}{a}", e.analysis));
                        }
                    }
                }
            }
            if out.len() > MAX_SUFFIXES {
                return Err(LexcError::TooLarge(name.to_string()));
            }
        }
        self.memo.insert(name, out.clone());
        Ok(out)
    }
}

/// Stem -> (continuation lexicons, reachable bare via `#`).
type StemClasses = Vec<(String, BTreeSet<Option<String>>)>;

fn collect_stems(src: &LexcSource) -> StemClasses {
    let index: HashMap<&str, &Lexicon> =
        src.lexicons.iter().map(|l| (l.name.as_str(), l)).collect();
    let mut stems: StemClasses = Vec::new();
    let mut position: HashMap<String, usize> = HashMap::new();
    let mut seen: HashSet<&str> = HashSet::new();
    let mut stack = vec![src.root_name.as_str()];
    // walk empty-surface continuations from Root; the first non-empty
    // surface on each path is a stem
    let mut order = Vec::new();
    while let Some(name) = stack.pop() {
        if !seen.insert(name) {
            continue;
        }
        order.push(name);
        for e in index[name].entries.iter().rev() {
            if e.surface.is_empty() {
                if let Continuation::Lexicon(next) = &e.continuation {
                    stack.push(next.as_str());
                }
            }
        }
    }
    for name in order {
        for e in &index[name].entries {
            if e.surface.is_empty() {
                continue;
            }
            let class = match &e.continuation {
                Continuation::End => None,
                Continuation::Lexicon(next) => Some(next.clone()),
            };
            let slot = *position.entry(e.surface.clone()).or_insert_with(|| {
                stems.push((e.surface.clone(), BTreeSet::new()));
                stems.len() - 1
            });
            stems[slot].1.insert(class);
        }
    }
    stems
}

fn flag_names(n: usize) -> Result<(bool, Vec<String>), LexcError> {
    const LETTERS: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    if n <= LETTERS.len() {
        return Ok((
            false,
            LETTERS[..n].iter().map(|&b| (b as char).to_string()).collect(),
        ));
    }
    if n > LETTERS.len() * LETTERS.len() {
        return Err(LexcError::TooManyClasses(n));
    }
    let names = (0..n)
        .map(|i| {
            let a = LETTERS[i / LETTERS.len()] as char;
            let b = LETTERS[i % LETTERS.len()] as char;
            format!("{a}{b}")
        })
        .collect();
    Ok((true, names))
}

pub fn compile(src: &LexcSource) -> Result<Compiled, LexcError> {
    compile_with(src, CompileOptions::default())
}

/// Compiles a parsed lexicon into `.dic` and `.aff` text. Output is a pure
/// function of the input.
pub fn compile_with(src: &LexcSource, options: CompileOptions) -> Result<Compiled, LexcError> {
    let mut compiler = Compiler::new(src);
    compiler.check_acyclic()?;

    let stems = collect_stems(src);

    // distinct non-empty suffix sets, in first-use order
    let mut classes: Vec<(BTreeSet<String>, BTreeSet<&str>, SuffixSet)> = Vec::new();
    let mut rows: Vec<(&str, BTreeSet<usize>, bool)> = Vec::new();
    for (stem, conts) in &stems {
        let mut flags = BTreeSet::new();
        let mut bare = false;
        for cont in conts {
            let Some(name) = cont else {
                bare = true;
                continue;
            };
            let set = compiler.suffixes(name)?;
            if set.contains_key("") {
                bare = true;
            }
            let key: BTreeSet<String> = set.keys().filter(|s| !s.is_empty()).cloned().collect();
            if key.is_empty() {
                continue;
            }
            let id = match classes.iter().position(|(k, _, _)| *k == key) {
                Some(i) => i,
                None => {
                    classes.push((key, BTreeSet::new(), SuffixSet::new()));
                    classes.len() - 1
                }
            };
            classes[id].1.insert(name.as_str());
            for (s, analyses) in set {
                if !s.is_empty() {
                    classes[id].2.entry(s).or_default().extend(analyses);
                }
            }
            flags.insert(id);
        }
        rows.push((stem.as_str(), flags, bare));
    }

    let (long, names) = flag_names(classes.len())?;

    let mut aff = String::new();
    aff.push_str("# compiled from lexc lexicons\nSET UTF-8\n");
    if long {
        aff.push_str("# more than 26 suffix classes: two-letter flag names\nFLAG long\n");
    }
    if !options.negative_infix {
        aff.push_str("NEGINFIX 0\n");
    }
    for ((suffixes, lexicons, analyses), name) in classes.iter().zip(&names) {
        let lex_list: Vec<&str> = lexicons.iter().copied().collect();
        let _ = writeln!(aff, "\n# {name}: {}", lex_list.join(" "));
        for (s, tags) in analyses {
            let tags: Vec<&str> = tags.iter().map(String::as_str).collect();
            let _ = writeln!(aff, "#   {s} <- {}", tags.join(" "));
        }
        let _ = writeln!(aff, "SFX {name} Y {}", suffixes.len());
        for s in suffixes {
            let _ = writeln!(aff, "SFX {name} 0 {s} .");
        }
    }

    let mut dic = String::new();
    let _ = writeln!(dic, "{}", rows.len());
    for (stem, flags, bare) in &rows {
        let mut field = String::new();
        if !bare {
            field.push('!');
        }
        for id in flags {
            field.push_str(&names[*id]);
        }
        if field.is_empty() {
            let _ = writeln!(dic, "{stem}");
        } else {
            let _ = writeln!(dic, "{stem}/{field}");
        }
    }
    Ok(Compiled { dic, aff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affix::Dictionary;

    pub(crate) const FIG2: &str = "!!!nouns.lexc!!!

Multichar_Symbols N +RT +SG +DF +NOM +CJ +NOM +ACC
LEXICON Root
NounUncountableConsEndStem;

LEXICON NounUncountableConsEndStem

අපේල් NounUncountableConsEnd;
අනුමිතීන් NounUncountableConsEnd;
අසීන් NounUncountableConsEnd;
අර්ශ්ඤ NounUncountableConsEnd;
අසමෝදගමි NounUncountableConsEnd;
අළුකෙහෙල් NounUncountableConsEnd;
ඇපල් NounUncountableConsEnd;
ඉළක් NounUncountableConsEnd;
ඊමේල් NounUncountableConsEnd;
උදුවන් NounUncountableConsEnd;
එඩින් NounUncountableConsEnd;

LEXICON NounUncountableConsEnd

+N+RT+UN+ACC: ඊ #;
+N+RT+UN+NOM: ඊ #;
+N+RT+UN+ACC+CJ: උක් #;
+N+RT+UN+NOM+CJ: උක් #;
+N+RT+UN+ACC+FN: උසී #;
+N+RT+UN+NOM+FN: උසී #;
+N+RT+UN+INT: ඊමලින් #;
+N+RT+UN+ABL: ඊමලින් #;
+N+RT+UN+INT+FN: ඊමලින් #;
+N+RT+UN+ABL+FN: ඊමලින් #;
+N+RT+UN+INT+CJ: ඊමලින් #;
+N+RT+UN+ABL+CJ: ඊමලින් #;
";

    #[test]
    fn minimal_root() {
        let src = parse_lexc("LEXICON Root\nමම #;\n").unwrap();
        assert_eq!(src.lexicons.len(), 1);
        assert_eq!(src.lexicons[0].entries[0].surface, "මම");
        assert_eq!(src.lexicons[0].entries[0].continuation, Continuation::End);
    }

    #[test]
    fn parses_sample_noun_lexicon() {
        let src = parse_lexc(FIG2).unwrap();
        let names: Vec<_> = src.lexicons.iter().map(|l| l.name.as_str()).collect();
        assert_eq!(
            names,
            vec!["Root", "NounUncountableConsEndStem", "NounUncountableConsEnd"]
        );
        assert_eq!(src.lexicons[1].entries.len(), 11);
        assert_eq!(src.lexicons[2].entries.len(), 12);
        assert_eq!(src.multichar_symbols.len(), 8);
        let e = &src.lexicons[1].entries[2];
        assert_eq!(e.surface, "අසීන්");
        assert_eq!(
            e.continuation,
            Continuation::Lexicon("NounUncountableConsEnd".into())
        );
        let s = &src.lexicons[2].entries[0];
        assert_eq!(s.analysis, "+N+RT+UN+ACC");
        assert_eq!(s.surface, "ඊ");
        // Root holds a pure continuation
        assert_eq!(src.lexicons[0].entries[0].surface, "");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_lexc("LEXICON Nouns\nමම #;\n").unwrap_err(),
            LexcError::MissingRoot
        );
        match parse_lexc("LEXICON Root\nමම Missing;\n").unwrap_err() {
            LexcError::UndefinedLexicon {
                line,
                entry,
                lexicon,
            } => {
                assert_eq!(line, 2);
                assert_eq!(entry, "මම");
                assert_eq!(lexicon, "Missing");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_lexc("LEXICON Root\nමම #\n"),
            Err(LexcError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn compile_single_stem_single_suffix() {
        let src = parse_lexc("LEXICON Root\nගම S;\nLEXICON S\nට #;\n").unwrap();
        let out = compile(&src).unwrap();
        assert_eq!(out.dic, "1\nගම/!A\n");
        let sfx: Vec<&str> = out.aff.lines().filter(|l| l.starts_with("SFX")).collect();
        assert_eq!(sfx, vec!["SFX A Y 1", "SFX A 0 ට ."]);
    }

    #[test]
    fn compile_fig2_shares_one_flag() {
        let out = compile(&parse_lexc(FIG2).unwrap()).unwrap();
        let dic_lines: Vec<&str> = out.dic.lines().collect();
        assert_eq!(dic_lines[0], "11");
        assert!(dic_lines[1..].iter().all(|l| l.ends_with("/!A")));
        let rules: Vec<&str> = out
            .aff
            .lines()
            .filter(|l| l.starts_with("SFX A 0"))
            .collect();
        // 12 entries, 4 distinct surfaces
        assert_eq!(rules.len(), 4);
        assert!(out.aff.contains("SFX A Y 4"));
        assert!(out.aff.contains("+N+RT+UN+ABL+CJ"));
    }

    #[test]
    fn zero_surface_makes_bare_form_valid() {
        let src = parse_lexc("LEXICON Root\nගම S;\nLEXICON S\n0 #;\nට #;\n").unwrap();
        let out = compile(&src).unwrap();
        assert_eq!(out.dic, "1\nගම/A\n");
        let (d, _) = Dictionary::load(&out.aff, &out.dic).unwrap();
        assert!(d.recognize("ගම"));
        assert!(d.recognize("ගමට"));
    }

    #[test]
    fn deeper_chains_are_pre_expanded() {
        let src = parse_lexc(
            "LEXICON Root\nපොත Num;\nLEXICON Num\n0 Case;\nක් Case2;\nLEXICON Case\n0 #;\nට #;\nLEXICON Case2\n0 #;\nට #;\n",
        )
        .unwrap();
        let out = compile(&src).unwrap();
        let (d, _) = Dictionary::load(&out.aff, &out.dic).unwrap();
        let words: Vec<String> = d.expand_all(100).unwrap().into_iter().collect();
        assert_eq!(words, vec!["පොත", "පොතක්", "පොතක්ට", "පොතට"]);
    }

    #[test]
    fn cycle_is_reported() {
        let src = parse_lexc("LEXICON Root\nඅ A;\nLEXICON A\nබ B;\nLEXICON B\nච A;\n").unwrap();
        assert_eq!(
            compile(&src).unwrap_err(),
            LexcError::Cycle(vec!["A".into(), "B".into(), "A".into()])
        );
    }

    #[test]
    fn many_classes_use_long_flags() {
        let mut text = String::from("LEXICON Root\n");
        for i in 0..30 {
            text.push_str(&format!("stem{i} C{i};\n"));
        }
        for i in 0..30 {
            text.push_str(&format!("LEXICON C{i}\nx{i} #;\n"));
        }
        let out = compile(&parse_lexc(&text).unwrap()).unwrap();
        assert!(out.aff.contains("FLAG long"));
        assert!(out.dic.contains("stem0/!AA"));
        assert!(out.dic.contains("stem29/!BD"));
        let (d, _) = Dictionary::load(&out.aff, &out.dic).unwrap();
        assert!(d.recognize("stem29x29"));
        assert!(!d.recognize("stem29x28"));
    }

    #[test]
    fn compile_is_deterministic() {
        let src = parse_lexc(FIG2).unwrap();
        assert_eq!(compile(&src).unwrap(), compile(&src).unwrap());
    }

    #[test]
    fn infix_option_controls_directive() {
        let src = parse_lexc("LEXICON Root\nකරනවා #;\n").unwrap();
        let off = compile(&src).unwrap();
        assert!(off.aff.contains("NEGINFIX 0"));
        let on = compile_with(
            &src,
            CompileOptions {
                negative_infix: true,
            },
        )
        .unwrap();
        assert!(!on.aff.contains("NEGINFIX"));
    }
}
