//! Brute-force lexc path enumeration and random multi-class lexicons.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::Rng;
use sinspell::text::normalize;

/// Brute-force concatenation over every Root-to-`#` path of the raw text,
/// independent of the compiler's stem/class decomposition. Words are compared
/// in NFC since adjacent signs may compose across a morpheme boundary.
pub fn brute_force(text: &str) -> BTreeSet<String> {
    let mut lexicons: Vec<(String, Vec<(String, String)>)> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('!') || line.starts_with("Multichar_Symbols") {
            continue;
        }
        if let Some(name) = line.strip_prefix("LEXICON ") {
            lexicons.push((name.trim().to_string(), Vec::new()));
            continue;
        }
        let body = line.trim_end_matches(';');
        let mut parts: Vec<&str> = body.split_whitespace().collect();
        let cont = parts.pop().unwrap().to_string();
        let form = parts.join(" ");
        let surface = match form.split_once(':') {
            Some((_, s)) => s.trim().to_string(),
            None => form,
        };
        let surface = if surface == "0" { String::new() } else { surface };
        lexicons.last_mut().unwrap().1.push((surface, cont));
    }
    fn walk(
        lexicons: &[(String, Vec<(String, String)>)],
        name: &str,
        prefix: String,
        out: &mut BTreeSet<String>,
    ) {
        let (_, entries) = lexicons.iter().find(|(n, _)| n == name).unwrap();
        for (surface, cont) in entries {
            let word = format!("{prefix}{surface}");
            if cont == "#" {
                if !word.is_empty() {
                    out.insert(normalize(&word));
                }
            } else {
                walk(lexicons, cont, word, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(&lexicons, "Root", String::new(), &mut out);
    out
}

const UNITS: &[&str] = &["ක", "ග", "න", "ණ", "ල", "ා", "ි", "ට", "ම", "ෙ", "ය", "ව"];

fn surface<R: Rng>(rng: &mut R) -> String {
    (0..rng.random_range(1..4)).map(|_| *UNITS.choose(rng).unwrap()).collect()
}

/// Root -> stem lexicon -> 5-7 suffix lexicons, some with a second hop and
/// some with a zero suffix, plus an Extra lexicon reached through an empty
/// entry.
pub fn random_lexicon<R: Rng>(rng: &mut R) -> String {
    let n = rng.random_range(5..8);
    let mut t = String::from("! synthetic\nMultichar_Symbols +N +SG\nLEXICON Root\nStems;\n0 Extra;\n\nLEXICON Stems\n");
    for _ in 0..rng.random_range(1..12) {
        let s = format!("{}{}", ["ක", "ද", "ප"].choose(rng).unwrap(), surface(rng));
        let c = rng.random_range(0..=n);
        if c == n {
            t.push_str(&format!("{s} #;\n"));
        } else {
            t.push_str(&format!("{s} C{c};\n"));
        }
    }
    t.push_str("\nLEXICON Extra\nවිශාල C0;\n");
    for i in 0..n {
        t.push_str(&format!("\nLEXICON C{i}\n"));
        if rng.random_bool(0.5) {
            t.push_str("+N+SG:0 #;\n");
        }
        let next = rng.random_bool(0.6).then(|| rng.random_range(0..n)).filter(|&j| j > i);
        for _ in 0..rng.random_range(1..5) {
            let s = surface(rng);
            // only chain forward so the graph stays acyclic
            match next {
                Some(j) => t.push_str(&format!("+N:{s} C{j};\n")),
                None => t.push_str(&format!("+N:{s} #;\n")),
            }
        }
    }
    t
}
