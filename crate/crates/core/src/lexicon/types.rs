use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use super::FormFeatures;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Noun,
    Pronoun,
    Verb,
    Adjective,
    Adverb,
    Conjunction,
    Determiner,
    Preposition,
    /// Assigned to unknown words at run time; never written to a lexicon file.
    ProperNoun,
}

impl Category {
    pub const ALL: [Category; 9] = [
        Category::Noun,
        Category::Pronoun,
        Category::Verb,
        Category::Adjective,
        Category::Adverb,
        Category::Conjunction,
        Category::Determiner,
        Category::Preposition,
        Category::ProperNoun,
    ];

    /// The categories that may appear in a lexicon file.
    pub const STORED: [Category; 8] = [
        Category::Noun,
        Category::Pronoun,
        Category::Verb,
        Category::Adjective,
        Category::Adverb,
        Category::Conjunction,
        Category::Determiner,
        Category::Preposition,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Noun => "noun",
            Category::Pronoun => "pronoun",
            Category::Verb => "verb",
            Category::Adjective => "adjective",
            Category::Adverb => "adverb",
            Category::Conjunction => "conjunction",
            Category::Determiner => "determiner",
            Category::Preposition => "preposition",
            Category::ProperNoun => "proper_noun",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown category '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SemanticTag {
    Living,
    Foodstuff,
    Place,
    Object,
}

impl SemanticTag {
    pub const ALL: [SemanticTag; 4] =
        [SemanticTag::Living, SemanticTag::Foodstuff, SemanticTag::Place, SemanticTag::Object];

    /// Element order used for verb preposition maps in lexicon files.
    pub const FILE_ORDER: [SemanticTag; 4] =
        [SemanticTag::Object, SemanticTag::Foodstuff, SemanticTag::Living, SemanticTag::Place];

    pub fn as_str(self) -> &'static str {
        match self {
            SemanticTag::Living => "living",
            SemanticTag::Foodstuff => "foodstuff",
            SemanticTag::Place => "place",
            SemanticTag::Object => "object",
        }
    }
}

impl fmt::Display for SemanticTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SemanticTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SemanticTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown semantic tag '{s}'"))
    }
}

macro_rules! keyword_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        #[serde(rename_all = "snake_case")]
        pub enum $name { $($variant),+ }

        impl $name {
            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(format!(concat!("invalid ", stringify!($name), " '{}'"), s)),
                }
            }
        }
    };
}

keyword_enum!(Number { Singular => "singular", Plural => "plural" });
keyword_enum!(Gender { Masculine => "masculine", Feminine => "feminine", Neuter => "neuter" });
keyword_enum!(Tense { Present => "present", Past => "past", Future => "future" });
keyword_enum!(Person { First => "1", Second => "2", Third => "3" });

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NounForms {
    pub number: Number,
    /// Nouns without a stored plural are treated as mass nouns.
    pub plural: Option<String>,
    pub semantic_tag: Option<SemanticTag>,
}

impl Default for NounForms {
    fn default() -> Self {
        Self { number: Number::Singular, plural: None, semantic_tag: None }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerbForms {
    pub present3s: Option<String>,
    pub past: Option<String>,
    pub present_participle: Option<String>,
    pub past_participle: Option<String>,
    /// Suppletive agreement forms ("am", "are", "were"); absent for regular verbs.
    pub present1s: Option<String>,
    pub present_plural: Option<String>,
    pub past_plural: Option<String>,
    /// Preposition that follows the verb for an object of the given class.
    /// A missing tag means no preposition.
    pub prepositions: BTreeMap<SemanticTag, String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PronounFeatures {
    pub person: Option<Person>,
    pub number: Option<Number>,
    pub gender: Option<Gender>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdverbInfo {
    /// Tense a time adverb imposes on the clause.
    pub tense: Option<Tense>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeterminerForms {
    pub plural: Option<String>,
}

/// Category together with the fields that belong to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordClass {
    Noun(NounForms),
    Pronoun(PronounFeatures),
    Verb(VerbForms),
    Adjective,
    Adverb(AdverbInfo),
    Conjunction,
    Determiner(DeterminerForms),
    Preposition,
    ProperNoun,
}

impl WordClass {
    pub fn empty(category: Category) -> Self {
        match category {
            Category::Noun => WordClass::Noun(NounForms::default()),
            Category::Pronoun => WordClass::Pronoun(PronounFeatures::default()),
            Category::Verb => WordClass::Verb(VerbForms::default()),
            Category::Adjective => WordClass::Adjective,
            Category::Adverb => WordClass::Adverb(AdverbInfo::default()),
            Category::Conjunction => WordClass::Conjunction,
            Category::Determiner => WordClass::Determiner(DeterminerForms::default()),
            Category::Preposition => WordClass::Preposition,
            Category::ProperNoun => WordClass::ProperNoun,
        }
    }

    pub fn category(&self) -> Category {
        match self {
            WordClass::Noun(_) => Category::Noun,
            WordClass::Pronoun(_) => Category::Pronoun,
            WordClass::Verb(_) => Category::Verb,
            WordClass::Adjective => Category::Adjective,
            WordClass::Adverb(_) => Category::Adverb,
            WordClass::Conjunction => Category::Conjunction,
            WordClass::Determiner(_) => Category::Determiner,
            WordClass::Preposition => Category::Preposition,
            WordClass::ProperNoun => Category::ProperNoun,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormKind {
    Lemma,
    Plural,
    Present3s,
    Present1s,
    PresentPlural,
    Past,
    PastPlural,
    PastParticiple,
    PresentParticiple,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FeatureError {
    #[error("feature '{0}' does not apply to category {1}")]
    NotApplicable(String, Category),
    #[error("invalid value '{value}' for feature '{feature}'")]
    InvalidValue { feature: String, value: String },
    #[error("feature '{0}' given twice")]
    Repeated(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    pub lemma: String,
    pub class: WordClass,
    /// Identifiers of the source resources the entry was built from.
    pub sources: BTreeSet<String>,
}

impl LexEntry {
    pub fn new(lemma: impl Into<String>, class: WordClass) -> Self {
        Self { lemma: lemma.into(), class, sources: BTreeSet::new() }
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.sources.insert(source.into());
        self
    }

    pub fn category(&self) -> Category {
        self.class.category()
    }

    pub fn key(&self) -> (&str, Category) {
        (&self.lemma, self.category())
    }

    pub fn semantic_tag(&self) -> Option<SemanticTag> {
        match &self.class {
            WordClass::Noun(n) => n.semantic_tag,
            _ => None,
        }
    }

    /// Lemma followed by every stored inflected form, in canonical order.
    pub fn forms(&self) -> Vec<(FormKind, &str)> {
        let mut out = vec![(FormKind::Lemma, self.lemma.as_str())];
        fn push<'a>(out: &mut Vec<(FormKind, &'a str)>, kind: FormKind, form: &'a Option<String>) {
            if let Some(f) = form {
                out.push((kind, f.as_str()));
            }
        }
        match &self.class {
            WordClass::Noun(n) => push(&mut out, FormKind::Plural, &n.plural),
            WordClass::Determiner(d) => push(&mut out, FormKind::Plural, &d.plural),
            WordClass::Verb(v) => {
                push(&mut out, FormKind::Present3s, &v.present3s);
                push(&mut out, FormKind::Present1s, &v.present1s);
                push(&mut out, FormKind::PresentPlural, &v.present_plural);
                push(&mut out, FormKind::Past, &v.past);
                push(&mut out, FormKind::PastPlural, &v.past_plural);
                push(&mut out, FormKind::PastParticiple, &v.past_participle);
                push(&mut out, FormKind::PresentParticiple, &v.present_participle);
            }
            _ => {}
        }
        out
    }

    pub fn form_features(&self, form: FormKind) -> FormFeatures {
        let none = FormFeatures::default();
        match (form, &self.class) {
            (FormKind::Lemma, WordClass::Noun(n)) => FormFeatures { number: Some(n.number), ..none },
            (FormKind::Lemma, WordClass::Pronoun(p)) => {
                FormFeatures { number: p.number, person: p.person, ..none }
            }
            (FormKind::Lemma, WordClass::Verb(_)) => {
                FormFeatures { tense: Some(Tense::Present), ..none }
            }
            (FormKind::Lemma, WordClass::Determiner(d)) if d.plural.is_some() => {
                FormFeatures { number: Some(Number::Singular), ..none }
            }
            (FormKind::Plural, _) => FormFeatures { number: Some(Number::Plural), ..none },
            (FormKind::Present3s, _) => FormFeatures {
                number: Some(Number::Singular),
                tense: Some(Tense::Present),
                person: Some(Person::Third),
            },
            (FormKind::Present1s, _) => FormFeatures {
                number: Some(Number::Singular),
                tense: Some(Tense::Present),
                person: Some(Person::First),
            },
            (FormKind::PresentPlural, _) => {
                FormFeatures { tense: Some(Tense::Present), ..none }
            }
            (FormKind::Past, _) => FormFeatures { tense: Some(Tense::Past), ..none },
            (FormKind::PastPlural, _) => {
                FormFeatures { tense: Some(Tense::Past), number: Some(Number::Plural), ..none }
            }
            _ => none,
        }
    }

    /// Flattened feature structure, keyed by lexicon-file element name and
    /// listed in file order. Sources are not included.
    pub fn features(&self) -> Vec<(&'static str, String)> {
        let mut out: Vec<(&'static str, String)> = Vec::new();
        let mut opt = |name: &'static str, value: Option<String>| {
            if let Some(v) = value {
                out.push((name, v));
            }
        };
        match &self.class {
            WordClass::Noun(n) => {
                opt("number", Some(n.number.to_string()));
                opt("plural", n.plural.clone());
                opt("semantic_tag", n.semantic_tag.map(|t| t.to_string()));
            }
            WordClass::Pronoun(p) => {
                opt("person", p.person.map(|x| x.to_string()));
                opt("number", p.number.map(|x| x.to_string()));
                opt("gender", p.gender.map(|x| x.to_string()));
            }
            WordClass::Verb(v) => {
                opt("present3s", v.present3s.clone());
                opt("past", v.past.clone());
                opt("present_participle", v.present_participle.clone());
                opt("past_participle", v.past_participle.clone());
                opt("present1s", v.present1s.clone());
                opt("present_plural", v.present_plural.clone());
                opt("past_plural", v.past_plural.clone());
                for tag in SemanticTag::FILE_ORDER {
                    opt(tag.as_str(), v.prepositions.get(&tag).cloned());
                }
            }
            WordClass::Adverb(a) => opt("tense", a.tense.map(|t| t.to_string())),
            WordClass::Determiner(d) => opt("plural", d.plural.clone()),
            _ => {}
        }
        out
    }

    /// Rebuilds an entry from a flattened feature structure; the inverse of
    /// [`LexEntry::features`].
    pub fn from_features<I, K, V>(
        lemma: impl Into<String>,
        category: Category,
        features: I,
    ) -> Result<Self, FeatureError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: Into<String>,
    {
        let mut class = WordClass::empty(category);
        let mut seen = BTreeSet::new();
        for (name, value) in features {
            let name = name.as_ref();
            let value: String = value.into();
            if !seen.insert(name.to_string()) {
                return Err(FeatureError::Repeated(name.to_string()));
            }
            set_feature(&mut class, name, value)?;
        }
        Ok(Self::new(lemma, class))
    }
}

fn parse_value<T: FromStr>(feature: &str, value: &str) -> Result<T, FeatureError> {
    value.parse().map_err(|_| FeatureError::InvalidValue {
        feature: feature.to_string(),
        value: value.to_string(),
    })
}

fn set_feature(class: &mut WordClass, name: &str, value: String) -> Result<(), FeatureError> {
    let category = class.category();
    let not_applicable = || FeatureError::NotApplicable(name.to_string(), category);
    match class {
        WordClass::Noun(n) => match name {
            "number" => n.number = parse_value(name, &value)?,
            "plural" => n.plural = Some(value),
            "semantic_tag" => n.semantic_tag = Some(parse_value(name, &value)?),
            _ => return Err(not_applicable()),
        },
        WordClass::Pronoun(p) => match name {
            "person" => p.person = Some(parse_value(name, &value)?),
            "number" => p.number = Some(parse_value(name, &value)?),
            "gender" => p.gender = Some(parse_value(name, &value)?),
            _ => return Err(not_applicable()),
        },
        WordClass::Verb(v) => {
            let slot = match name {
                "present3s" => &mut v.present3s,
                "past" => &mut v.past,
                "present_participle" => &mut v.present_participle,
                "past_participle" => &mut v.past_participle,
                "present1s" => &mut v.present1s,
                "present_plural" => &mut v.present_plural,
                "past_plural" => &mut v.past_plural,
                _ => {
                    let tag: SemanticTag = name.parse().map_err(|_| not_applicable())?;
                    v.prepositions.insert(tag, value);
                    return Ok(());
                }
            };
            *slot = Some(value);
        }
        WordClass::Adverb(a) => match name {
            "tense" => a.tense = Some(parse_value(name, &value)?),
            _ => return Err(not_applicable()),
        },
        WordClass::Determiner(d) => match name {
            "plural" => d.plural = Some(value),
            _ => return Err(not_applicable()),
        },
        _ => return Err(not_applicable()),
    }
    Ok(())
}
