use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use proptest::prelude::*;
use sinspell::autofix::load_rules;
use sinspell::data;

fn sinspell(args: &[&str], stdin: &str, dir: &Path) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sinspell"))
        .args(args)
        .current_dir(dir)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // Commands that never read standard input may exit before the write lands.
    if let Err(e) = child.stdin.take().unwrap().write_all(stdin.as_bytes()) {
        assert_eq!(e.kind(), std::io::ErrorKind::BrokenPipe, "{e}");
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let clean = sinspell(&["check"], "මම ගෙදර යනවා", dir.path());
    assert_eq!(code(&clean), 0, "{}", String::from_utf8_lossy(&clean.stderr));
    assert_eq!(stdout(&clean), "");

    let flagged = sinspell(&["check"], "ගම දරණ", dir.path());
    assert_eq!(code(&flagged), 1);
    assert_eq!(stdout(&flagged).lines().count(), 1);
    assert!(stdout(&flagged).starts_with("1:4\tදරණ\tදරන"), "{}", stdout(&flagged));

    let missing = sinspell(&["check", "--dic", "nope.dic", "--aff", "nope.aff"], "ගම", dir.path());
    assert_eq!(code(&missing), 2);
    assert!(String::from_utf8_lossy(&missing.stderr).contains("nope"));

    let half = sinspell(&["check", "--dic", "nope.dic"], "ගම", dir.path());
    assert_eq!(code(&half), 2);

    let unreadable = sinspell(&["check", "absent.txt"], "", dir.path());
    assert_eq!(code(&unreadable), 2);

    let usage = sinspell(&["check", "--max-suggestions", "x"], "", dir.path());
    assert_eq!(code(&usage), 2);
}

#[test]
fn check_leaves_input_alone_and_prefixes_many_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    fs::write(&a, "ගම\nදරණ\n").unwrap();
    fs::write(&b, "ගම\n").unwrap();
    let o = sinspell(&["check", "a.txt", "b.txt"], "", dir.path());
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("a.txt:2:1\tදරණ\t"));
    assert_eq!(fs::read_to_string(&a).unwrap(), "ගම\nදරණ\n");
    let seq = sinspell(&["check", "--sequential", "a.txt", "b.txt"], "", dir.path());
    assert_eq!(stdout(&seq), stdout(&o));
    assert_eq!(code(&sinspell(&["check", "b.txt"], "", dir.path())), 0);
}

#[test]
fn suggest_codes() {
    let dir = tempfile::tempdir().unwrap();
    let known = sinspell(&["suggest", "දරන"], "", dir.path());
    assert_eq!((code(&known), stdout(&known)), (0, String::new()));
    let unknown = sinspell(&["suggest", "දිගටම", "--max-suggestions", "2"], "", dir.path());
    assert_eq!(code(&unknown), 1);
    let out = stdout(&unknown);
    assert!(out.lines().count() <= 2);
    assert!(out.starts_with("දිගට ම\t"), "{out}");
}

#[test]
fn config_file_fallback() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("sinspell.toml"), "max_suggestions = 1\n").unwrap();
    let sub = dir.path().join("nested");
    fs::create_dir(&sub).unwrap();
    let o = sinspell(&["suggest", "දරණ"], "", &sub);
    assert_eq!(stdout(&o).lines().count(), 1);
    fs::write(dir.path().join("sinspell.toml"), "dictionary_path = \"x.dic\"\naffix_path = \"x.aff\"\n").unwrap();
    assert_eq!(code(&sinspell(&["check"], "ගම", &sub)), 2);
    fs::write(dir.path().join("sinspell.toml"), "bogus = 1\n").unwrap();
    assert_eq!(code(&sinspell(&["check"], "ගම", &sub)), 2);
}

#[test]
fn fix_examples_and_audit() {
    let dir = tempfile::tempdir().unwrap();
    let o = sinspell(&["fix", "--audit", "audit.tsv"], "ඔහු අපේක්ෂක්ෂා කළා. කාාා", dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "ඔහු අපේක්ෂා කළා. කා");
    let audit = fs::read_to_string(dir.path().join("audit.tsv")).unwrap();
    assert_eq!(audit.lines().count(), 2);
    let o = sinspell(&["fix"], "දරණ", dir.path());
    assert_eq!(stdout(&o), "දරන");
    let o = sinspell(&["fix"], "ගම", dir.path());
    assert_eq!((stdout(&o), String::from_utf8(o.stderr).unwrap()), ("ගම".into(), String::new()));
    // ෙ + ා composes to ො
    let o = sinspell(&["fix", "--normalize-only"], "ක\u{0DD9}\u{0DCF}", dir.path());
    assert_eq!(stdout(&o), "ක\u{0DDC}");
}

#[test]
fn compile_mine_eval() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("n.lexc"), data::NOUNS_LEXC).unwrap();
    let o = sinspell(&["compile-lexc", "n.lexc", "-o", "out/nouns"], "", dir.path());
    assert_eq!(code(&o), 2, "output directory does not exist yet");
    fs::create_dir(dir.path().join("out")).unwrap();
    let o = sinspell(&["compile-lexc", "n.lexc", "-o", "out/nouns"], "", dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = sinspell(&["check", "--dic", "out/nouns.dic", "--aff", "out/nouns.aff"], "පොතට කටයුතුවලට", dir.path());
    assert_eq!(code(&o), 0);
    fs::write(dir.path().join("bad.lexc"), "LEXICON Root\nx Missing ;\n").unwrap();
    assert_eq!(code(&sinspell(&["compile-lexc", "bad.lexc", "-o", "bad"], "", dir.path())), 2);

    fs::write(dir.path().join("o.txt"), "මම දරණ ගමට යනවා. එය දිගටම කරන්න.").unwrap();
    fs::write(dir.path().join("c.txt"), "මම දරන ගමට යනවා. එය දිගට ම කරන්න.").unwrap();
    let o = sinspell(&["mine", "o.txt", "c.txt", "--stats", "s.tsv"], "", dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "දරණ\tදරන\tSubstitution\tණ→න\nදිගටම\tදිගට ම\tSplit\t\n");
    assert_eq!(fs::read_to_string(dir.path().join("s.tsv")).unwrap(), "ණ\tන\t1\n");
    fs::write(dir.path().join("e.txt"), "").unwrap();
    assert_eq!(code(&sinspell(&["mine", "o.txt", "e.txt"], "", dir.path())), 2);
    assert_eq!(code(&sinspell(&["mine", "o.txt", "c.txt", "o.txt"], "", dir.path())), 2);

    fs::write(dir.path().join("good.txt"), "ගම\nදරන\nපොත\n").unwrap();
    fs::write(dir.path().join("bad.txt"), "දරණ\nගමා\n").unwrap();
    fs::write(dir.path().join("cases.tsv"), "දරණ\tදරන\nදිගටම\tදිගට ම\nදරන\tදරන\n").unwrap();
    let o = sinspell(
        &["eval", "--correct", "good.txt", "--incorrect", "bad.txt", "--cases", "cases.tsv", "--tsv"],
        "",
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().nth(1).unwrap(), "SinSpell\t3\t0\t100.0\t2\t0\t100.0\t100.0\t1.000");
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipping case"));
    let o = sinspell(&["eval", "--correct", "good.txt"], "", dir.path());
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("SinSpell"));
}

#[test]
fn interactive_without_terminal_reports_like_check() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("in.txt"), "ගම දරණ").unwrap();
    let o = sinspell(&["interactive", "in.txt"], "1\n", dir.path());
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("1:4\tදරණ\tදරන"));
    assert_eq!(fs::read_to_string(dir.path().join("in.txt")).unwrap(), "ගම දරණ");
}

fn seeded_text() -> impl Strategy<Value = String> {
    let rules = load_rules(data::AUTOFIX_RULES).unwrap();
    let mut pieces: Vec<String> = rules.rules().iter().take(30).map(|r| r.pattern.clone()).collect();
    pieces.extend(["ගම", " ", "දරණ", "ා", "\u{200D}", "්", ".", "\n"].map(String::from));
    prop::collection::vec(prop::sample::select(pieces), 0..12).prop_map(|v| v.concat())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fix_is_idempotent_through_the_command(text in seeded_text()) {
        let dir = tempfile::tempdir().unwrap();
        let once = stdout(&sinspell(&["fix"], &text, dir.path()));
        let twice = stdout(&sinspell(&["fix"], &once, dir.path()));
        prop_assert_eq!(once, twice);
    }
}
