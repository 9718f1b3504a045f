//! Random affix tables and word lists over a small Sinhala alphabet.

use rand::seq::IndexedRandom;
use rand::Rng;
use sinspell::text::normalize;

pub const CONSONANTS: &[&str] = &["ක", "ග", "ත", "ද", "න", "ප", "ම", "ර", "ල", "ව", "ස"];
pub const SIGNS: &[&str] = &["", "", "ා", "ි", "ු", "ෙ", "ේ", "්"];
const SUFFIXES: &[&str] = &["ා", "ට", "ක්", "ගෙන්", "යි", "ේ", "වල", "ම", "්", "ෟ", "ෙන්"];
const PREFIXES: &[&str] = &["අ", "නො", "අම්", "සු", "දු"];
const STRIPS: &[&str] = &["", "", "", "ා", "ි", "ු", "ෙ"];
const SUFFIX_CONDS: &[&str] = &[".", ".", "[කගතද]", "[^ා]", "ා", "[^්]"];
const PREFIX_CONDS: &[&str] = &[".", ".", "[කගපම]", "[^අ]"];

pub struct GenDict {
    pub aff: String,
    pub dic: String,
    /// Affix strings that make likely near-miss perturbations.
    pub pieces: Vec<String>,
}

fn syllable<R: Rng>(rng: &mut R) -> String {
    format!("{}{}", CONSONANTS.choose(rng).unwrap(), SIGNS.choose(rng).unwrap())
}

pub fn stem<R: Rng>(rng: &mut R) -> String {
    let n = rng.random_range(1..=4);
    normalize(&(0..n).map(|_| syllable(rng)).collect::<String>())
}

fn or_zero(s: &str) -> &str {
    if s.is_empty() {
        "0"
    } else {
        s
    }
}

/// A table with 1-3 prefix flags and 2-4 suffix flags, the first of each
/// kind cross-product, and `stems` dictionary entries.
pub fn generate<R: Rng>(rng: &mut R, infix: bool, stems: usize) -> GenDict {
    let mut aff = String::from("SET UTF-8\n");
    if !infix {
        aff.push_str("NEGINFIX 0\n");
    }
    let mut pieces: Vec<String> = vec!["නො".into()];
    let mut flags = Vec::new();
    let npfx = rng.random_range(1..=3);
    let nsfx = rng.random_range(2..=4);
    for (k, name) in ['P', 'Q', 'R'].iter().take(npfx).enumerate() {
        let n = rng.random_range(1..=3);
        aff.push_str(&format!("PFX {name} {} {n}\n", if k == 0 || rng.random_bool(0.5) { "Y" } else { "N" }));
        for _ in 0..n {
            let append = *PREFIXES.choose(rng).unwrap();
            let strip = if rng.random_bool(0.2) { CONSONANTS.choose(rng).unwrap() } else { "" };
            aff.push_str(&format!("PFX {name} {} {append} {}\n", or_zero(strip), PREFIX_CONDS.choose(rng).unwrap()));
            pieces.push(append.into());
        }
        flags.push(*name);
    }
    for (k, name) in ['A', 'B', 'C', 'D'].iter().take(nsfx).enumerate() {
        let n = rng.random_range(1..=4);
        aff.push_str(&format!("SFX {name} {} {n}\n", if k == 0 || rng.random_bool(0.5) { "Y" } else { "N" }));
        for _ in 0..n {
            let append = *SUFFIXES.choose(rng).unwrap();
            let strip = *STRIPS.choose(rng).unwrap();
            aff.push_str(&format!("SFX {name} {} {append} {}\n", or_zero(strip), SUFFIX_CONDS.choose(rng).unwrap()));
            pieces.push(append.into());
        }
        flags.push(*name);
    }
    let mut dic = format!("{stems}\n");
    for _ in 0..stems {
        let s = stem(rng);
        let chosen: String = flags.iter().filter(|_| rng.random_bool(0.4)).collect();
        let needs = !chosen.is_empty() && rng.random_bool(0.15);
        if chosen.is_empty() {
            dic.push_str(&format!("{s}\n"));
        } else {
            dic.push_str(&format!("{s}/{}{chosen}\n", if needs { "!" } else { "" }));
        }
    }
    GenDict { aff, dic, pieces }
}

/// One or two random character edits, affix additions or infix insertions.
pub fn perturb<R: Rng>(rng: &mut R, word: &str, pieces: &[String]) -> String {
    let mut chars: Vec<char> = word.chars().collect();
    let pool: Vec<char> = CONSONANTS
        .iter()
        .chain(SIGNS)
        .flat_map(|s| s.chars())
        .chain(['ො', 'අ', 'ය'])
        .collect();
    for _ in 0..rng.random_range(1..=2) {
        let n = chars.len();
        match rng.random_range(0..7) {
            0 if n > 1 => {
                chars.remove(rng.random_range(0..n));
            }
            1 => chars.insert(rng.random_range(0..=n), *pool.choose(rng).unwrap()),
            2 if n > 0 => chars[rng.random_range(0..n)] = *pool.choose(rng).unwrap(),
            3 if n > 1 => chars.swap(rng.random_range(0..n - 1), rng.random_range(1..n)),
            4 => chars.extend(pieces.choose(rng).unwrap().chars()),
            5 => {
                let p: Vec<char> = pieces.choose(rng).unwrap().chars().collect();
                chars.splice(0..0, p);
            }
            _ => {
                let at = rng.random_range(0..=n);
                chars.splice(at..at, "නො".chars());
            }
        }
    }
    normalize(&chars.into_iter().collect::<String>())
}
