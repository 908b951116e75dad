//! Statistical preposition inference.
//!
//! Counts, for every verb lemma and object class, how often the verb is
//! followed by each preposition (or by no preposition) before a noun of that
//! class. Probabilities are always derived from the counts so they stay
//! exact fractions.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{Pos, TaggedSentence, TaggedToken};
use crate::lexicon::{Category, Lexicon, SemanticTag, WordClass};

/// Text used for the no-preposition outcome in model files.
pub const EMPTY: &str = "EMPTY";

/// What follows a verb before its object: a preposition or nothing.
/// `Word` sorts before `Empty`, which is the tie-break order of [`infer`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrepChoice {
    Word(String),
    Empty,
}

impl PrepChoice {
    pub fn word(&self) -> Option<&str> {
        match self {
            PrepChoice::Word(w) => Some(w),
            PrepChoice::Empty => None,
        }
    }

    fn parse(text: &str) -> Self {
        if text == EMPTY {
            PrepChoice::Empty
        } else {
            PrepChoice::Word(text.to_lowercase())
        }
    }
}

impl fmt::Display for PrepChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.word().unwrap_or(EMPTY))
    }
}

type Key = (String, SemanticTag);

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrepModel {
    counts: BTreeMap<Key, BTreeMap<PrepChoice, u64>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PrepModelError {
    #[error("line {line}: expected verb<TAB>tag<TAB>prep<TAB>count")]
    Columns { line: usize },
    #[error("line {line}: unknown semantic tag '{tag}'")]
    Tag { line: usize, tag: String },
    #[error("line {line}: invalid count '{count}'")]
    Count { line: usize, count: String },
}

impl PrepModel {
    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn add(&mut self, verb: &str, tag: SemanticTag, prep: PrepChoice, count: u64) {
        if count == 0 {
            return;
        }
        *self
            .counts
            .entry((verb.to_lowercase(), tag))
            .or_default()
            .entry(prep)
            .or_insert(0) += count;
    }

    pub fn count(&self, verb: &str, tag: SemanticTag, prep: &PrepChoice) -> u64 {
        self.outcomes(verb, tag).and_then(|m| m.get(prep)).copied().unwrap_or(0)
    }

    pub fn total(&self, verb: &str, tag: SemanticTag) -> u64 {
        self.outcomes(verb, tag).map(|m| m.values().sum()).unwrap_or(0)
    }

    /// Probability as an exact fraction `(count, total)`.
    pub fn fraction(&self, verb: &str, tag: SemanticTag, prep: &PrepChoice) -> Option<(u64, u64)> {
        let total = self.total(verb, tag);
        (total > 0).then(|| (self.count(verb, tag, prep), total))
    }

    pub fn probability(&self, verb: &str, tag: SemanticTag, prep: &PrepChoice) -> f64 {
        match self.fraction(verb, tag, prep) {
            Some((c, t)) => c as f64 / t as f64,
            None => 0.0,
        }
    }

    pub fn outcomes(&self, verb: &str, tag: SemanticTag) -> Option<&BTreeMap<PrepChoice, u64>> {
        self.counts.get(&(verb.to_lowercase(), tag))
    }

    /// Every populated (verb, tag) pair.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, SemanticTag)> {
        self.counts.keys().map(|(v, t)| (v.as_str(), *t))
    }

    /// `(verb, tag, prep, count)` rows in sorted order.
    pub fn rows(&self) -> impl Iterator<Item = (&str, SemanticTag, &PrepChoice, u64)> {
        self.counts
            .iter()
            .flat_map(|((v, t), m)| m.iter().map(move |(p, c)| (v.as_str(), *t, p, *c)))
    }

    pub fn merge(&mut self, other: &PrepModel) {
        for (v, t, p, c) in other.rows() {
            self.add(v, t, p.clone(), c);
        }
    }

    pub fn parse(text: &str) -> Result<Self, PrepModelError> {
        let mut model = PrepModel::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let line_no = i + 1;
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            let [verb, tag, prep, count] = cols[..] else {
                return Err(PrepModelError::Columns { line: line_no });
            };
            let tag: SemanticTag = tag
                .parse()
                .map_err(|_| PrepModelError::Tag { line: line_no, tag: tag.to_string() })?;
            let count: u64 = count
                .parse()
                .map_err(|_| PrepModelError::Count { line: line_no, count: count.to_string() })?;
            model.add(verb, tag, PrepChoice::parse(prep), count);
        }
        Ok(model)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (v, t, p, c) in self.rows() {
            out.push_str(&format!("{v}\t{t}\t{p}\t{c}\n"));
        }
        out
    }
}

/// Semantic class of the noun a token realises, if the lexicon knows it.
fn noun_tag(token: &TaggedToken, lex: &Lexicon) -> Option<SemanticTag> {
    if let Some(tag) = lex.get(&token.lemma, Category::Noun).and_then(|e| e.semantic_tag()) {
        return Some(tag);
    }
    lex.lookup(&token.surface)
        .iter()
        .find_map(|m| (m.entry.category() == Category::Noun).then(|| m.entry.semantic_tag()).flatten())
}

/// The outcome for the verb at `i`: the preposition (or `Empty`) and the
/// object class, if the following tokens form prep? det? noun.
fn observe(sentence: &[TaggedToken], i: usize, lex: &Lexicon) -> Option<(PrepChoice, SemanticTag)> {
    let mut j = i + 1;
    let mut prep = PrepChoice::Empty;
    if let Some(t) = sentence.get(j).filter(|t| t.is(Category::Preposition)) {
        prep = PrepChoice::Word(t.lemma.clone());
        j += 1;
    }
    if sentence.get(j).is_some_and(|t| t.is(Category::Determiner)) {
        j += 1;
    }
    let noun = sentence.get(j).filter(|t| t.is(Category::Noun))?;
    Some((prep, noun_tag(noun, lex)?))
}

pub fn train(corpus: &[TaggedSentence], lex: &Lexicon) -> PrepModel {
    let mut model = PrepModel::default();
    for sentence in corpus {
        let tokens = &sentence.tokens;
        for (i, token) in tokens.iter().enumerate() {
            if token.pos != Pos::Word(Category::Verb) {
                continue;
            }
            if let Some((prep, tag)) = observe(tokens, i, lex) {
                model.add(&token.lemma, tag, prep, 1);
            }
        }
    }
    model
}

/// Candidate prepositions for `verb` before an object of class `tag`, most
/// probable first. Ties go to the alphabetically first preposition, with
/// `Empty` last. Unknown pairs yield `[(Empty, 1.0)]`.
pub fn infer(model: &PrepModel, verb: &str, tag: SemanticTag) -> Vec<(PrepChoice, f64)> {
    let Some(outcomes) = model.outcomes(verb, tag) else {
        return vec![(PrepChoice::Empty, 1.0)];
    };
    let total: u64 = outcomes.values().sum();
    let mut ranked: Vec<(&PrepChoice, u64)> = outcomes.iter().map(|(p, c)| (p, *c)).collect();
    ranked.sort_by(|a, b| match b.1.cmp(&a.1) {
        Ordering::Equal => a.0.cmp(b.0),
        other => other,
    });
    ranked.into_iter().map(|(p, c)| (p.clone(), c as f64 / total as f64)).collect()
}

/// Stores the most probable preposition of every (verb, tag) pair the model
/// knows in the verb's entry. `Empty` removes the stored preposition; pairs
/// the model has not seen are left as they are, and so are prepositions the
/// lexicon does not list.
pub fn extend_lexicon(lex: &Lexicon, model: &PrepModel) -> Lexicon {
    if model.is_empty() {
        return lex.clone();
    }
    let entries = lex
        .entries()
        .iter()
        .map(|entry| {
            let mut entry = entry.clone();
            let lemma = entry.lemma.clone();
            if let WordClass::Verb(v) = &mut entry.class {
                for tag in SemanticTag::ALL {
                    if model.outcomes(&lemma, tag).is_none() {
                        continue;
                    }
                    match &infer(model, &lemma, tag)[0].0 {
                        PrepChoice::Empty => {
                            v.prepositions.remove(&tag);
                        }
                        PrepChoice::Word(p) if lex.get(p, Category::Preposition).is_some() => {
                            v.prepositions.insert(tag, p.clone());
                        }
                        PrepChoice::Word(p) => {
                            log::warn!("'{p}' is not a lexicon preposition; {lemma}/{tag} left unchanged");
                        }
                    }
                }
            }
            entry
        })
        .collect();
    Lexicon::new(entries).expect("keys are unchanged")
}
