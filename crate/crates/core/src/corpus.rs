//! POS-tagged corpora: one token per line as `surface<TAB>lemma<TAB>pos`,
//! sentences separated by blank lines. A `# text = ...` line inside a
//! sentence block records its original text.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::lexicon::Category;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pos {
    Word(Category),
    Punct,
}

impl Pos {
    pub fn category(self) -> Option<Category> {
        match self {
            Pos::Word(c) => Some(c),
            Pos::Punct => None,
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pos::Word(c) => f.write_str(c.as_str()),
            Pos::Punct => f.write_str("punct"),
        }
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "punct" {
            Ok(Pos::Punct)
        } else {
            s.parse().map(Pos::Word).map_err(|_| format!("unknown part of speech '{s}'"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaggedToken {
    pub surface: String,
    pub lemma: String,
    pub pos: Pos,
}

impl TaggedToken {
    pub fn new(surface: &str, lemma: &str, pos: Pos) -> Self {
        Self { surface: surface.to_string(), lemma: lemma.to_lowercase(), pos }
    }

    pub fn is(&self, category: Category) -> bool {
        self.pos == Pos::Word(category)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct TaggedSentence {
    pub text: Option<String>,
    pub tokens: Vec<TaggedToken>,
}

impl TaggedSentence {
    /// Original text if recorded, else the tokens joined with English
    /// spacing rules.
    pub fn target(&self) -> String {
        self.text.clone().unwrap_or_else(|| detokenize(&self.tokens))
    }
}

pub fn detokenize(tokens: &[TaggedToken]) -> String {
    let mut out = String::new();
    for (i, token) in tokens.iter().enumerate() {
        let attaches = token.pos == Pos::Punct
            || token.surface.starts_with('\'')
            || token.surface.eq_ignore_ascii_case("n't");
        if i > 0 && !attaches {
            out.push(' ');
        }
        out.push_str(&token.surface);
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("line {line}: expected surface<TAB>lemma<TAB>pos")]
    Columns { line: usize },
    #[error("line {line}: {message}")]
    Pos { line: usize, message: String },
}

pub fn parse_corpus(text: &str) -> Result<Vec<TaggedSentence>, CorpusError> {
    let mut sentences = Vec::new();
    let mut current = TaggedSentence::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !current.tokens.is_empty() {
                sentences.push(std::mem::take(&mut current));
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(t) = rest.trim().strip_prefix("text =") {
                current.text = Some(t.trim().to_string());
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(CorpusError::Columns { line: i + 1 });
        }
        let pos = cols[2]
            .trim()
            .parse()
            .map_err(|message| CorpusError::Pos { line: i + 1, message })?;
        current.tokens.push(TaggedToken::new(cols[0].trim(), cols[1].trim(), pos));
    }
    if !current.tokens.is_empty() {
        sentences.push(current);
    }
    Ok(sentences)
}

pub fn write_corpus(sentences: &[TaggedSentence]) -> String {
    let mut out = String::new();
    for (i, s) in sentences.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        if let Some(t) = &s.text {
            out.push_str(&format!("# text = {t}\n"));
        }
        for t in &s.tokens {
            out.push_str(&format!("{}\t{}\t{}\n", t.surface, t.lemma, t.pos));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_detokenize() {
        let text = "She\tshe\tpronoun\nis\tbe\tverb\nn't\tnot\tadverb\nhere\there\tadverb\n.\t.\tpunct\n\n\
                    # text = Go home.\nGo\tgo\tverb\nhome\thome\tnoun\n.\t.\tpunct\n";
        let corpus = parse_corpus(text).unwrap();
        assert_eq!(corpus.len(), 2);
        assert_eq!(corpus[0].target(), "She isn't here.");
        assert_eq!(corpus[1].target(), "Go home.");
        assert_eq!(parse_corpus(&write_corpus(&corpus)).unwrap(), corpus);
    }

    #[test]
    fn bad_lines() {
        assert_eq!(parse_corpus("a\tb\n"), Err(CorpusError::Columns { line: 1 }));
        assert!(matches!(parse_corpus("a\ta\tinterjection\n"), Err(CorpusError::Pos { line: 1, .. })));
    }
}
