//! The bundled demonstration lexicon, preposition model and corpora.
//!
//! `lexicon.xml` and `prep_model.tsv` are generated from the source files in
//! `data/` by [`rebuild`]; the `seed_is_reproducible` test keeps them in sync.

use crate::builder::{build, BuildConfig, BuildError, BuildReport, Dictionary, SemanticResource};
use crate::corpus::{parse_corpus, TaggedSentence};
use crate::lexicon::{parse_lexicon, Lexicon};
use crate::prep::{extend_lexicon, train, PrepModel};

pub const ENLEX: &str = include_str!("../data/enlex.txt");
pub const NIH: &str = include_str!("../data/nih.txt");
pub const FREELING: &str = include_str!("../data/freeling.txt");
pub const DICTIONARY: &str = include_str!("../data/dictionary.tsv");
pub const SEMANTICS: &str = include_str!("../data/semantics.tsv");
pub const FALLBACK_SEMANTICS: &str = include_str!("../data/fallback_semantics.tsv");
pub const CORPUS: &str = include_str!("../data/corpus.tsv");
pub const GOLDEN_CORPUS: &str = include_str!("../data/golden_corpus.tsv");
pub const LEXICON_XML: &str = include_str!("../data/lexicon.xml");
pub const PREP_MODEL: &str = include_str!("../data/prep_model.tsv");

pub fn lexicon() -> Lexicon {
    parse_lexicon(LEXICON_XML).expect("bundled lexicon is valid")
}

pub fn prep_model() -> PrepModel {
    PrepModel::parse(PREP_MODEL).expect("bundled model is valid")
}

pub fn corpus() -> Vec<TaggedSentence> {
    parse_corpus(CORPUS).expect("bundled corpus is valid")
}

pub fn golden_corpus() -> Vec<TaggedSentence> {
    parse_corpus(GOLDEN_CORPUS).expect("bundled golden corpus is valid")
}

pub fn sources() -> Vec<(String, String)> {
    [("enlex", ENLEX), ("nih", NIH), ("freeling", FREELING)]
        .into_iter()
        .map(|(id, text)| (id.to_string(), text.to_string()))
        .collect()
}

pub struct Rebuilt {
    pub lexicon: Lexicon,
    pub report: BuildReport,
    pub model: PrepModel,
}

/// Builds the lexicon from the bundled sources, trains the preposition
/// model on the bundled corpus and stores the learned prepositions.
pub fn rebuild() -> Result<Rebuilt, BuildError> {
    let dictionary = Dictionary::parse(DICTIONARY)?;
    let semantics = SemanticResource::parse(SEMANTICS)?;
    let fallback = SemanticResource::parse(FALLBACK_SEMANTICS)?;
    let config = BuildConfig {
        sources: sources(),
        dictionary: &dictionary,
        semantics: &semantics,
        fallback_semantics: Some(&fallback),
        priority: None,
    };
    let (base, report) = build(&config)?;
    let model = train(&corpus(), &base);
    Ok(Rebuilt { lexicon: extend_lexicon(&base, &model), report, model })
}

pub const PUBLISHED_COINCIDENCE: &str = include_str!("../data/published_coincidence.tsv");
