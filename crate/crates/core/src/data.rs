//! Bundled seed data: a small dictionary, a sample noun lexicon, confusion
//! sets and autofix rules.

pub const SINHALA_AFF: &str = include_str!("../data/sinhala.aff");
pub const SINHALA_DIC: &str = include_str!("../data/sinhala.dic");
pub const NOUNS_LEXC: &str = include_str!("../data/nouns.lexc");
pub const CONFUSIONS: &str = include_str!("../data/confusions.tsv");
pub const AUTOFIX_RULES: &str = include_str!("../data/autofix.rules");
