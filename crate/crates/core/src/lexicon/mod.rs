//! Lexicon data model, indexed lookup and morphological inflection.
//!
//! A [`Lexicon`] is an immutable, sorted collection of [`LexEntry`] values
//! plus an index from every stored surface form (lemma and inflections) to
//! the entries that realise it. Entries carry only the fields that belong to
//! their word class, which is enforced by the [`WordClass`] enum.

mod types;
mod xml;

use std::collections::HashMap;

use thiserror::Error;

pub use types::{
    AdverbInfo, Category, DeterminerForms, FeatureError, FormKind, Gender, LexEntry, NounForms,
    Number, Person, PronounFeatures, SemanticTag, Tense, VerbForms, WordClass,
};
pub use xml::{parse_lexicon, serialize_lexicon, XML_DECLARATION};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("malformed XML at line {line}: {message}")]
    Xml { line: u32, message: String },
    #[error("schema error in entry '{lemma}': {message}")]
    Schema { lemma: String, message: String },
    #[error("duplicate entry ({lemma}, {category})")]
    Duplicate { lemma: String, category: Category },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InflectError {
    #[error("entry '{lemma}' has no {form} form")]
    MissingForm { lemma: String, form: &'static str },
}

/// Grammatical features implied by the surface form a lookup matched.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FormFeatures {
    pub number: Option<Number>,
    pub tense: Option<Tense>,
    pub person: Option<Person>,
}

/// One lookup hit: the entry and the form of it that matched.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Match<'a> {
    pub entry: &'a LexEntry,
    pub form: FormKind,
    pub features: FormFeatures,
}

/// Features requested from [`inflect`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InflectionFeatures {
    pub person: Person,
    pub number: Number,
    pub tense: Tense,
}

impl InflectionFeatures {
    pub fn new(person: Person, number: Number, tense: Tense) -> Self {
        Self { person, number, tense }
    }

    pub fn number(number: Number) -> Self {
        Self { person: Person::Third, number, tense: Tense::Present }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: Vec<LexEntry>,
    index: HashMap<String, Vec<(usize, FormKind)>>,
}

impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Lexicon {
    /// Sorts the entries by (lemma, category) and builds the form index.
    pub fn new(mut entries: Vec<LexEntry>) -> Result<Self, LexiconError> {
        entries.sort_by(|a, b| a.key().cmp(&b.key()));
        for pair in entries.windows(2) {
            if pair[0].key() == pair[1].key() {
                return Err(LexiconError::Duplicate {
                    lemma: pair[0].lemma.clone(),
                    category: pair[0].category(),
                });
            }
        }
        for entry in &entries {
            if entry.lemma.trim().is_empty() {
                return Err(LexiconError::Schema {
                    lemma: entry.lemma.clone(),
                    message: "empty lemma".into(),
                });
            }
        }

        let mut index: HashMap<String, Vec<(usize, FormKind)>> = HashMap::new();
        for (i, entry) in entries.iter().enumerate() {
            for (kind, form) in entry.forms() {
                let hits = index.entry(form.to_lowercase()).or_default();
                // one hit per entry; the first form kind in canonical order wins
                if !hits.iter().any(|&(j, _)| j == i) {
                    hits.push((i, kind));
                }
            }
        }
        Ok(Self { entries, index })
    }

    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<LexEntry> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, lemma: &str, category: Category) -> Option<&LexEntry> {
        let key = (lemma, category);
        self.entries
            .binary_search_by(|e| (e.lemma.as_str(), e.category()).cmp(&key))
            .ok()
            .map(|i| &self.entries[i])
    }

    /// All entries whose lemma or an inflected form equals `token`,
    /// ignoring case. An empty result means the word is unknown.
    pub fn lookup(&self, token: &str) -> Vec<Match<'_>> {
        let key = token.trim().to_lowercase();
        self.index
            .get(&key)
            .map(|hits| {
                hits.iter()
                    .map(|&(i, form)| {
                        let entry = &self.entries[i];
                        Match { entry, form, features: entry.form_features(form) }
                    })
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn contains_form(&self, token: &str) -> bool {
        self.index.contains_key(&token.trim().to_lowercase())
    }

    pub fn by_category(&self, category: Category) -> impl Iterator<Item = &LexEntry> {
        self.entries.iter().filter(move |e| e.category() == category)
    }
}

/// Returns the stored form of `entry` for the requested features.
///
/// Verbs use the present-3s form for third person singular present, the
/// past form for past, and a periphrastic `will` + lemma for the future.
/// Nouns only look at number. Every other class returns its lemma.
pub fn inflect(entry: &LexEntry, features: &InflectionFeatures) -> Result<String, InflectError> {
    let missing = |form: &'static str| InflectError::MissingForm { lemma: entry.lemma.clone(), form };
    match &entry.class {
        WordClass::Verb(v) => match features.tense {
            Tense::Future => Ok(format!("will {}", entry.lemma)),
            Tense::Past => {
                let plural_like =
                    features.number == Number::Plural || features.person == Person::Second;
                match (&v.past_plural, &v.past) {
                    (Some(pl), _) if plural_like => Ok(pl.clone()),
                    (_, Some(past)) => Ok(past.clone()),
                    _ => Err(missing("past")),
                }
            }
            Tense::Present => match (features.person, features.number) {
                (Person::Third, Number::Singular) => {
                    v.present3s.clone().ok_or_else(|| missing("present3s"))
                }
                (Person::First, Number::Singular) => Ok(v
                    .present1s
                    .clone()
                    .or_else(|| v.present_plural.clone())
                    .unwrap_or_else(|| entry.lemma.clone())),
                _ => Ok(v.present_plural.clone().unwrap_or_else(|| entry.lemma.clone())),
            },
        },
        WordClass::Noun(n) => match features.number {
            Number::Singular => Ok(entry.lemma.clone()),
            Number::Plural if n.number == Number::Plural => Ok(entry.lemma.clone()),
            Number::Plural => n.plural.clone().ok_or_else(|| missing("plural")),
        },
        WordClass::Determiner(d) => match features.number {
            Number::Plural => Ok(d.plural.clone().unwrap_or_else(|| entry.lemma.clone())),
            Number::Singular => Ok(entry.lemma.clone()),
        },
        _ => Ok(entry.lemma.clone()),
    }
}
