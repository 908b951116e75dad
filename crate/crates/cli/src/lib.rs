//! Command-line front end and HTTP service for the expando engine.

pub mod commands;
pub mod server;

use std::path::Path;

use anyhow::Context;
use expando::grammar::{builtin_rules, GrammarRule};
use expando::lexicon::{parse_lexicon, Lexicon};
use expando::prep::PrepModel;
use expando::seed;

/// Immutable resources shared by every expansion.
pub struct Resources {
    pub lexicon: Lexicon,
    pub model: PrepModel,
    pub rules: Vec<GrammarRule>,
}

impl Resources {
    /// Loads the given files, falling back to the bundled seed data for
    /// either one left out.
    pub fn load(lexicon: Option<&Path>, model: Option<&Path>) -> anyhow::Result<Self> {
        let lexicon = match lexicon {
            Some(p) => parse_lexicon(&read(p)?).with_context(|| format!("reading lexicon {}", p.display()))?,
            None => seed::lexicon(),
        };
        let model = match model {
            Some(p) => PrepModel::parse(&read(p)?).with_context(|| format!("reading model {}", p.display()))?,
            None => seed::prep_model(),
        };
        Ok(Self { lexicon, model, rules: builtin_rules() })
    }
}

pub fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}
