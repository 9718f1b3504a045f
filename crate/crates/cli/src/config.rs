//! Resource configuration: command-line flags first, then the nearest
//! `sinspell.toml`, then the bundled data.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use sinspell::autofix::{load_rules, RuleSet};
use sinspell::suggest::{parse_frequencies, DEFAULT_K};
use sinspell::{data, Confusions, Dictionary};

pub const CONFIG_FILE: &str = "sinspell.toml";

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub dictionary_path: Option<PathBuf>,
    pub affix_path: Option<PathBuf>,
    pub confusion_path: Option<PathBuf>,
    pub rules_path: Option<PathBuf>,
    pub frequency_path: Option<PathBuf>,
    pub max_suggestions: Option<usize>,
}

impl Config {
    /// Parses a config file; relative paths resolve against its directory.
    pub fn from_file(path: &Path) -> Result<Config> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg: Config = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [
            &mut cfg.dictionary_path,
            &mut cfg.affix_path,
            &mut cfg.confusion_path,
            &mut cfg.rules_path,
            &mut cfg.frequency_path,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    /// The first `sinspell.toml` in `start` or one of its ancestors.
    pub fn discover(start: &Path) -> Option<PathBuf> {
        start.ancestors().map(|d| d.join(CONFIG_FILE)).find(|p| p.is_file())
    }

    /// Fields set in `over` win.
    pub fn overlay(self, over: Config) -> Config {
        Config {
            dictionary_path: over.dictionary_path.or(self.dictionary_path),
            affix_path: over.affix_path.or(self.affix_path),
            confusion_path: over.confusion_path.or(self.confusion_path),
            rules_path: over.rules_path.or(self.rules_path),
            frequency_path: over.frequency_path.or(self.frequency_path),
            max_suggestions: over.max_suggestions.or(self.max_suggestions),
        }
    }
}

/// Everything a subcommand may need, loaded up front.
pub struct Resources {
    pub dict: Dictionary,
    pub confusions: Confusions,
    pub rules: RuleSet,
    pub frequencies: HashMap<String, u64>,
    pub max_suggestions: usize,
    pub warnings: Vec<String>,
}

fn read(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
}

impl Resources {
    pub fn load(cfg: &Config) -> Result<Resources> {
        let (aff, dic) = match (&cfg.affix_path, &cfg.dictionary_path) {
            (Some(a), Some(d)) => (read(a)?, read(d)?),
            (None, None) => (data::SINHALA_AFF.to_string(), data::SINHALA_DIC.to_string()),
            _ => bail!("--dic and --aff must be given together"),
        };
        let (dict, warns) = Dictionary::load(&aff, &dic).context("loading dictionary")?;
        let confusions = match &cfg.confusion_path {
            Some(p) => Confusions::parse(&read(p)?),
            None => Confusions::parse(data::CONFUSIONS),
        }
        .context("loading confusion sets")?;
        let rules = match &cfg.rules_path {
            Some(p) => load_rules(&read(p)?),
            None => load_rules(data::AUTOFIX_RULES),
        }
        .context("loading rewrite rules")?;
        let frequencies = match &cfg.frequency_path {
            Some(p) => parse_frequencies(&read(p)?).map_err(anyhow::Error::msg).context("loading frequencies")?,
            None => HashMap::new(),
        };
        let max_suggestions = cfg.max_suggestions.unwrap_or(DEFAULT_K);
        if max_suggestions == 0 {
            bail!("max_suggestions must be at least 1");
        }
        Ok(Resources {
            dict,
            confusions,
            rules,
            frequencies,
            max_suggestions,
            warnings: warns.iter().map(ToString::to_string).collect(),
        })
    }
}
