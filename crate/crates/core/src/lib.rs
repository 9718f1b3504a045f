//! Morphology-aware spelling toolkit for Sinhala.
//!
//! The pieces line up as a pipeline: [`text`] normalizes and tokenizes,
//! [`affix`] decides whether a word is formable from a stem and affixes,
//! [`suggest`] ranks corrections for rejected words, [`autofix`] rewrites
//! evident errors without asking, [`lexc`] turns morphological lexicons into
//! dictionary/affix pairs, [`miner`] extracts error pairs from original and
//! corrected documents, and [`eval`] scores detection and suggestion quality.

pub mod affix;
pub mod autofix;
pub mod data;
pub mod eval;
pub mod exec;
pub mod lexc;
pub mod miner;
pub mod suggest;
pub mod text;

pub use affix::{parse_aff, parse_dic, AffixRule, AffixTable, Dictionary, Flag};
pub use exec::Execution;
pub use lexc::{compile, parse_lexc, LexcSource};
pub use suggest::{generate, ConfusionSet, Confusions, Suggester, Suggestion};
