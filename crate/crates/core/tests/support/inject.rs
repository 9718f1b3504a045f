//! Plants known edits into generated document pairs.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use sinspell::miner::{EditClass, EditOp, ErrorRecord};
use sinspell::suggest::Confusions;
use sinspell::text::segment_lossy;

pub struct Planted {
    pub original: String,
    pub corrected: String,
    pub expected: Vec<ErrorRecord>,
}

fn record(wrong: &str, corrected: &str, class: EditClass, script: Option<Vec<EditOp>>) -> ErrorRecord {
    ErrorRecord {
        wrong: wrong.into(),
        corrected: corrected.into(),
        class,
        script,
    }
}

/// Builds `sentences` sentences of `words` distinct tokens each and plants
/// one edit in every other slot, so each edit sits between untouched tokens.
pub fn plant<R: Rng>(
    rng: &mut R,
    vocab: &[String],
    confusions: &Confusions,
    sentences: usize,
    words: usize,
) -> Planted {
    let mut pool: Vec<String> = vocab
        .iter()
        .filter(|w| segment_lossy(w).len() >= 2)
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    pool.shuffle(rng);
    let mut used: BTreeSet<String> = BTreeSet::new();
    let mut take = |used: &mut BTreeSet<String>| {
        let w = pool.pop().expect("vocabulary too small");
        used.insert(w.clone());
        w
    };

    let (mut orig_doc, mut corr_doc, mut expected) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..sentences {
        let base: Vec<String> = (0..words).map(|_| take(&mut used)).collect();
        let (mut o, mut c) = (Vec::new(), Vec::new());
        for (i, t) in base.iter().enumerate() {
            if i % 2 == 0 || i + 1 == words {
                o.push(t.clone());
                c.push(t.clone());
                continue;
            }
            loop {
                match rng.random_range(0..5) {
                    0 => {
                        let g = segment_lossy(t);
                        let k = rng.random_range(0..g.len());
                        let vars = confusions.variants(g[k]);
                        if vars.is_empty() {
                            continue;
                        }
                        let (v, _) = &vars[rng.random_range(0..vars.len())];
                        let mut parts: Vec<String> = g.iter().map(|s| s.to_string()).collect();
                        parts[k] = v.clone();
                        let wrong = parts.concat();
                        if used.contains(&wrong) || segment_lossy(&wrong).len() != g.len() {
                            continue;
                        }
                        used.insert(wrong.clone());
                        let script = vec![EditOp::Sub(v.clone(), g[k].to_string())];
                        expected.push(record(&wrong, t, EditClass::Substitution, Some(script)));
                        o.push(wrong);
                        c.push(t.clone());
                    }
                    1 => {
                        let u = take(&mut used);
                        let joined = format!("{t}{u}");
                        if !used.insert(joined.clone()) {
                            continue;
                        }
                        expected.push(record(&joined, &format!("{t} {u}"), EditClass::Split, None));
                        o.push(joined);
                        c.push(t.clone());
                        c.push(u);
                    }
                    2 => {
                        let u = take(&mut used);
                        let joined = format!("{t}{u}");
                        if !used.insert(joined.clone()) {
                            continue;
                        }
                        let wrong = if rng.random_bool(0.5) {
                            format!("{t} - {u}")
                        } else {
                            format!("{t} {u}")
                        };
                        expected.push(record(&wrong, &joined, EditClass::Join, None));
                        o.push(wrong);
                        c.push(joined);
                    }
                    3 => {
                        expected.push(record("", t, EditClass::Insertion, None));
                        c.push(t.clone());
                    }
                    _ => {
                        expected.push(record(t, "", EditClass::Deletion, None));
                        o.push(t.clone());
                    }
                }
                break;
            }
        }
        orig_doc.push(format!("{}.", o.join(" ")));
        corr_doc.push(format!("{}.", c.join(" ")));
    }
    Planted {
        original: orig_doc.join(" "),
        corrected: corr_doc.join(" "),
        expected,
    }
}
