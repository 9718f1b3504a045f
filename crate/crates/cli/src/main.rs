use std::fs;
use std::io::{self, BufWriter, IsTerminal, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use sinspell::autofix::{self, audit_tsv};
use sinspell::eval::{self, EvalReport};
use sinspell::lexc::{compile_with, parse_lexc, CompileOptions};
use sinspell::miner::{confusion_stats, mine_many, records_tsv, stats_tsv, ErrorRecord};
use sinspell::text::normalize;
use sinspell::{Execution, Suggester};
use sinspell_cli::{find_flags, render, run_session, Config, Resources, SessionEnd};

const CLEAN: u8 = 0;
const FINDINGS: u8 = 1;
const FAILURE: u8 = 2;

#[derive(Parser)]
#[command(name = "sinspell", version, about = "Sinhala spelling checker, suggester and auto-corrector")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Hunspell-style word list (.dic); needs --aff
    #[arg(long, global = true, value_name = "FILE")]
    dic: Option<PathBuf>,
    /// Affix rules (.aff); needs --dic
    #[arg(long, global = true, value_name = "FILE")]
    aff: Option<PathBuf>,
    /// Confusion sets, "weight TAB member TAB member..."
    #[arg(long, global = true, value_name = "FILE")]
    confusions: Option<PathBuf>,
    /// Rewrite rules for `fix`
    #[arg(long, global = true, value_name = "FILE")]
    rules: Option<PathBuf>,
    /// Word frequencies, "word TAB count", used to break ranking ties
    #[arg(long, global = true, value_name = "FILE")]
    freq: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    max_suggestions: Option<usize>,
    /// Config file; defaults to the nearest sinspell.toml
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Run batch work on one thread
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Report unknown words with suggestions
    Check {
        /// Input files; standard input when none
        files: Vec<PathBuf>,
    },
    /// Rank corrections for one word
    Suggest { word: String },
    /// Apply rewrite rules and print the corrected text
    Fix {
        input: Option<PathBuf>,
        /// Write the corrected text here instead of standard output
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the audit TSV here instead of standard error
        #[arg(long)]
        audit: Option<PathBuf>,
        /// Only normalize the text
        #[arg(long)]
        normalize_only: bool,
    },
    /// Review each flagged word at the terminal
    Interactive {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compile a lexc lexicon into .dic and .aff files
    CompileLexc {
        input: PathBuf,
        /// Output path without extension
        #[arg(short, long)]
        output: PathBuf,
        /// Keep the negative infix enabled in the emitted .aff
        #[arg(long)]
        negative_infix: bool,
    },
    /// Extract error records from original/corrected document pairs
    Mine {
        /// ORIGINAL CORRECTED [ORIGINAL CORRECTED ...]
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
        /// Write confusion statistics here
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Score detection and suggestion quality
    Eval {
        /// Correct words, one per line
        #[arg(long)]
        correct: Option<PathBuf>,
        /// Incorrect words, one per line
        #[arg(long)]
        incorrect: Option<PathBuf>,
        /// "misspelled TAB gold" cases
        #[arg(long)]
        cases: Option<PathBuf>,
        /// Row label
        #[arg(long, default_value = "SinSpell")]
        name: String,
        #[arg(long)]
        tsv: bool,
    },
}

fn read_text(path: Option<&Path>) -> Result<String> {
    let bytes = match path {
        Some(p) => fs::read(p).with_context(|| format!("reading {}", p.display()))?,
        None => {
            let mut buf = Vec::new();
            io::stdin().read_to_end(&mut buf).context("reading standard input")?;
            buf
        }
    };
    let text = String::from_utf8(bytes).map_err(|_| anyhow::anyhow!("input is not UTF-8"))?;
    Ok(normalize(&text))
}

fn write_to(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn load(global: &Global) -> Result<Resources> {
    let file = match &global.config {
        Some(p) => Some(p.clone()),
        None => Config::discover(&std::env::current_dir()?),
    };
    let base = match file {
        Some(p) => Config::from_file(&p)?,
        None => Config::default(),
    };
    let flags = Config {
        dictionary_path: global.dic.clone(),
        affix_path: global.aff.clone(),
        confusion_path: global.confusions.clone(),
        rules_path: global.rules.clone(),
        frequency_path: global.freq.clone(),
        max_suggestions: global.max_suggestions,
    };
    let res = Resources::load(&base.overlay(flags))?;
    for w in &res.warnings {
        eprintln!("sinspell: warning: {w}");
    }
    Ok(res)
}

fn check(s: &Suggester<'_>, k: usize, files: &[PathBuf], execution: Execution) -> Result<u8> {
    if files.is_empty() {
        let text = read_text(None)?;
        let flags = find_flags(s, &text, k);
        write_to(None, &render(&text, &flags, None))?;
        return Ok(if flags.is_empty() { CLEAN } else { FINDINGS });
    }
    let many = files.len() > 1;
    let reports = execution.map(files, |p| -> Result<(String, bool)> {
        let text = read_text(Some(p))?;
        let flags = find_flags(s, &text, k);
        let name = p.display().to_string();
        Ok((render(&text, &flags, many.then_some(name.as_str())), !flags.is_empty()))
    });
    let mut found = false;
    let mut out = BufWriter::new(io::stdout().lock());
    for r in reports {
        let (report, flagged) = r?;
        out.write_all(report.as_bytes())?;
        found |= flagged;
    }
    out.flush()?;
    Ok(if found { FINDINGS } else { CLEAN })
}

fn recovery_path(input: &Path) -> PathBuf {
    let mut name = input.file_name().unwrap_or_default().to_os_string();
    name.push(".recovery");
    input.with_file_name(name)
}

fn interactive(s: &Suggester<'_>, k: usize, input: &Path, output: Option<&Path>) -> Result<u8> {
    let text = read_text(Some(input))?;
    let flags = find_flags(s, &text, k);
    if !io::stdin().is_terminal() {
        write_to(None, &render(&text, &flags, None))?;
        return Ok(if flags.is_empty() { CLEAN } else { FINDINGS });
    }
    let (result, end) = run_session(&text, &flags, io::stdin().lock(), io::stderr().lock())?;
    if end == SessionEnd::Detached {
        let path = recovery_path(input);
        fs::write(&path, &result).with_context(|| format!("writing {}", path.display()))?;
        bail!("session ended early; partial result saved to {}", path.display());
    }
    write_to(output, &result)?;
    Ok(CLEAN)
}

fn run(cli: Cli) -> Result<u8> {
    let res = load(&cli.global)?;
    let execution = if cli.global.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let suggester = Suggester::new(&res.dict, &res.confusions)
        .with_frequencies(res.frequencies.clone())
        .with_execution(execution);
    let k = res.max_suggestions;

    match cli.command {
        Command::Check { files } => check(&suggester, k, &files, execution),
        Command::Suggest { word } => {
            let word = normalize(&word);
            if res.dict.recognize(&word) {
                return Ok(CLEAN);
            }
            let mut out = String::new();
            for s in suggester.suggest(&word, k) {
                out.push_str(&format!("{}\t{:.2}\n", s.candidate, s.cost));
            }
            write_to(None, &out)?;
            Ok(FINDINGS)
        }
        Command::Fix {
            input,
            output,
            audit,
            normalize_only,
        } => {
            let text = read_text(input.as_deref())?;
            if normalize_only {
                write_to(output.as_deref(), &text)?;
                return Ok(CLEAN);
            }
            let (fixed, fixes) = autofix::apply(&res.rules, &text);
            write_to(output.as_deref(), &fixed)?;
            let tsv = audit_tsv(&fixes);
            match audit {
                Some(p) => fs::write(&p, tsv).with_context(|| format!("writing {}", p.display()))?,
                None => eprint!("{tsv}"),
            }
            Ok(CLEAN)
        }
        Command::Interactive { input, output } => interactive(&suggester, k, &input, output.as_deref()),
        Command::CompileLexc {
            input,
            output,
            negative_infix,
        } => {
            let src = parse_lexc(&read_text(Some(&input))?)?;
            let compiled = compile_with(&src, CompileOptions { negative_infix })?;
            let dic = output.with_extension("dic");
            let aff = output.with_extension("aff");
            fs::write(&dic, compiled.dic).with_context(|| format!("writing {}", dic.display()))?;
            fs::write(&aff, compiled.aff).with_context(|| format!("writing {}", aff.display()))?;
            Ok(CLEAN)
        }
        Command::Mine { files, stats } => {
            if files.len() % 2 != 0 {
                bail!("mine takes ORIGINAL CORRECTED pairs");
            }
            let docs = files
                .chunks(2)
                .map(|p| Ok((read_text(Some(&p[0]))?, read_text(Some(&p[1]))?)))
                .collect::<Result<Vec<_>>>()?;
            let mut records: Vec<ErrorRecord> = Vec::new();
            for r in mine_many(&docs, execution) {
                records.extend(r?);
            }
            write_to(None, &records_tsv(&records))?;
            if let Some(p) = stats {
                fs::write(&p, stats_tsv(&confusion_stats(&records)))
                    .with_context(|| format!("writing {}", p.display()))?;
            }
            Ok(CLEAN)
        }
        Command::Eval {
            correct,
            incorrect,
            cases,
            name,
            tsv,
        } => {
            let list = |p: &Option<PathBuf>| -> Result<Vec<String>> {
                Ok(match p {
                    Some(p) => eval::read_word_list(&read_text(Some(p))?),
                    None => Vec::new(),
                })
            };
            let (correct, incorrect) = (list(&correct)?, list(&incorrect)?);
            let mut report: EvalReport = eval::eval_detection_with(&res.dict, &correct, &incorrect, execution);
            if let Some(p) = cases {
                let cases = eval::parse_cases(&read_text(Some(&p))?)?;
                let e = eval::eval_suggestions(&suggester, &cases, k);
                for (w, g) in &e.skipped {
                    eprintln!("sinspell: warning: skipping case {w} -> {g}: the misspelling is a known word");
                }
                report = report.with_suggestions(&e);
            }
            let rows = [(name.as_str(), &report)];
            write_to(None, &if tsv { eval::render_tsv(&rows) } else { eval::render_table(&rows) })?;
            Ok(CLEAN)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { FAILURE } else { CLEAN });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("sinspell: error: {e:#}");
            ExitCode::from(FAILURE)
        }
    }
}
