//! Lexicon construction from several source lexica: extraction into a
//! common entry format, unification merge, dictionary verification and
//! semantic tagging of nouns.

mod adapters;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::lexicon::{Category, LexEntry, Lexicon, LexiconError, SemanticTag, WordClass};

pub use adapters::{adapter, SourceAdapter, ADAPTERS};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("{source_id} line {line}: {message}")]
    Source { source_id: String, line: usize, message: String },
    #[error("no adapter registered for source '{0}'")]
    UnknownSource(String),
    #[error("{resource} line {line}: {message}")]
    Resource { resource: &'static str, line: usize, message: String },
    #[error("at least one source lexicon is required")]
    NoSources,
    #[error("no entries survived the build")]
    Empty,
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

/// One entry as read from a source, before normalisation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceRecord {
    pub source_id: String,
    pub lemma: String,
    /// `None` for categories the lexicon does not store (interjections,
    /// numerals, proper nouns, ...).
    pub category: Option<Category>,
    pub raw_category: String,
    pub raw_features: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub source_id: String,
    pub lemma: String,
    pub category: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Extraction {
    pub entries: Vec<LexEntry>,
    pub rejected: Vec<Rejection>,
    pub skipped: usize,
}

/// Normalises records into entries. Records of unsupported categories are
/// skipped; records whose inflection rules cannot be expanded are rejected
/// with a reason. Repeated (lemma, category) keys from the same source are
/// unified.
pub fn extract_map(records: &[SourceRecord]) -> Result<Extraction, BuildError> {
    let mut out = Extraction::default();
    let mut per_source: BTreeMap<&str, Vec<LexEntry>> = BTreeMap::new();
    for record in records {
        let adapter =
            adapter(&record.source_id).ok_or_else(|| BuildError::UnknownSource(record.source_id.clone()))?;
        let category = match record.category {
            Some(c) if c != Category::ProperNoun => c,
            _ => {
                out.skipped += 1;
                continue;
            }
        };
        match adapter.expand(record, category) {
            Ok(entry) => per_source.entry(&record.source_id).or_default().push(entry),
            Err(reason) => {
                log::warn!("{}: rejected '{}' ({}): {reason}", record.source_id, record.lemma, record.raw_category);
                out.rejected.push(Rejection {
                    source_id: record.source_id.clone(),
                    lemma: record.lemma.clone(),
                    category: record.raw_category.clone(),
                    reason,
                });
            }
        }
    }
    for (_, entries) in per_source {
        out.entries.extend(merge(&[entries], &[]).entries);
    }
    out.entries.sort_by(|a, b| a.key().cmp(&b.key()));
    Ok(out)
}

/// A feature two sources disagree on, and how it was resolved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub lemma: String,
    pub category: Category,
    pub feature: String,
    pub kept: String,
    pub kept_from: String,
    pub discarded: String,
    pub discarded_from: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Merged {
    pub entries: Vec<LexEntry>,
    pub conflicts: Vec<Conflict>,
}

fn source_label(entry: &LexEntry) -> String {
    entry.sources.iter().cloned().collect::<Vec<_>>().join("+")
}

/// Unifies entries sharing (lemma, category). Features present in any entry
/// are kept; when two entries give different values for the same feature,
/// the entry whose source comes first in `priority` wins. Sources missing
/// from `priority` rank after it, in the order of `sets`.
pub fn merge(sets: &[Vec<LexEntry>], priority: &[String]) -> Merged {
    let rank = |entry: &LexEntry, set: usize| -> usize {
        entry
            .sources
            .iter()
            .filter_map(|s| priority.iter().position(|p| p == s))
            .min()
            .unwrap_or(priority.len() + set)
    };
    let mut groups: BTreeMap<(String, Category), Vec<(usize, &LexEntry)>> = BTreeMap::new();
    for (set_index, set) in sets.iter().enumerate() {
        for entry in set {
            groups
                .entry((entry.lemma.clone(), entry.category()))
                .or_default()
                .push((rank(entry, set_index), entry));
        }
    }

    let mut out = Merged::default();
    for ((lemma, category), mut group) in groups {
        group.sort_by_key(|(r, _)| *r);
        if group.len() == 1 {
            out.entries.push(group[0].1.clone());
            continue;
        }
        let mut features: BTreeMap<&'static str, (String, String)> = BTreeMap::new();
        let mut sources = BTreeSet::new();
        for (_, entry) in &group {
            let from = source_label(entry);
            sources.extend(entry.sources.iter().cloned());
            for (name, value) in entry.features() {
                match features.get(name) {
                    None => {
                        features.insert(name, (value, from.clone()));
                    }
                    Some((kept, _)) if *kept == value => {}
                    Some((kept, kept_from)) => {
                        log::info!("{lemma}/{category}: {name} '{kept}' ({kept_from}) kept over '{value}' ({from})");
                        out.conflicts.push(Conflict {
                            lemma: lemma.clone(),
                            category,
                            feature: name.to_string(),
                            kept: kept.clone(),
                            kept_from: kept_from.clone(),
                            discarded: value,
                            discarded_from: from.clone(),
                        });
                    }
                }
            }
        }
        let mut entry = LexEntry::from_features(
            lemma,
            category,
            features.into_iter().map(|(name, (value, _))| (name, value)),
        )
        .expect("features come from valid entries of the same category");
        entry.sources = sources;
        out.entries.push(entry);
    }
    out
}

/// Dictionary used to check that a lemma exists with a given category.
pub trait DictionaryOracle {
    fn contains(&self, lemma: &str) -> bool;
    fn categories(&self, lemma: &str) -> BTreeSet<Category>;
}

/// Flat-file dictionary: `lemma<TAB>category[,category...]` per line.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dictionary {
    words: BTreeMap<String, BTreeSet<Category>>,
}

impl Dictionary {
    pub fn parse(text: &str) -> Result<Self, BuildError> {
        let mut words: BTreeMap<String, BTreeSet<Category>> = BTreeMap::new();
        for (i, (lemma, value)) in tab_lines(text, "dictionary")? {
            let cats = words.entry(lemma).or_default();
            for name in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let cat = name.parse().map_err(|message| BuildError::Resource {
                    resource: "dictionary",
                    line: i,
                    message,
                })?;
                cats.insert(cat);
            }
        }
        Ok(Self { words })
    }

    /// Accepts every entry of the given list.
    pub fn permissive<'a>(entries: impl IntoIterator<Item = &'a LexEntry>) -> Self {
        let mut words: BTreeMap<String, BTreeSet<Category>> = BTreeMap::new();
        for e in entries {
            words.entry(e.lemma.clone()).or_default().insert(e.category());
        }
        Self { words }
    }
}

impl DictionaryOracle for Dictionary {
    fn contains(&self, lemma: &str) -> bool {
        self.words.contains_key(lemma)
    }

    fn categories(&self, lemma: &str) -> BTreeSet<Category> {
        self.words.get(lemma).cloned().unwrap_or_default()
    }
}

fn tab_lines(text: &str, resource: &'static str) -> Result<Vec<(usize, (String, String))>, BuildError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (lemma, value) = line.split_once('\t').ok_or_else(|| BuildError::Resource {
            resource,
            line: i + 1,
            message: "expected lemma<TAB>value".into(),
        })?;
        out.push((i + 1, (lemma.trim().to_lowercase(), value.trim().to_string())));
    }
    Ok(out)
}

/// Removes the entries whose lemma is missing from the dictionary or whose
/// category the dictionary does not list for that lemma.
pub fn verify(entries: &[LexEntry], oracle: &dyn DictionaryOracle) -> Vec<LexEntry> {
    entries
        .iter()
        .filter(|e| {
            let keep = oracle.contains(&e.lemma) && oracle.categories(&e.lemma).contains(&e.category());
            if !keep {
                log::debug!("verification dropped {}/{}", e.lemma, e.category());
            }
            keep
        })
        .cloned()
        .collect()
}

/// Flat-file map from noun lemma to semantic class: `lemma<TAB>tag`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SemanticResource {
    tags: BTreeMap<String, SemanticTag>,
}

impl SemanticResource {
    pub fn parse(text: &str) -> Result<Self, BuildError> {
        let mut tags = BTreeMap::new();
        for (i, (lemma, value)) in tab_lines(text, "semantic resource")? {
            let tag = value.parse().map_err(|message| BuildError::Resource {
                resource: "semantic resource",
                line: i,
                message,
            })?;
            tags.insert(lemma, tag);
        }
        Ok(Self { tags })
    }

    pub fn get(&self, lemma: &str) -> Option<SemanticTag> {
        self.tags.get(lemma).copied()
    }
}

impl FromIterator<(String, SemanticTag)> for SemanticResource {
    fn from_iter<I: IntoIterator<Item = (String, SemanticTag)>>(iter: I) -> Self {
        Self { tags: iter.into_iter().collect() }
    }
}

/// How many nouns each semantic resource could tag.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SemanticCoverage {
    pub primary: usize,
    pub fallback: usize,
    pub untagged: usize,
}

impl SemanticCoverage {
    pub fn nouns(&self) -> usize {
        self.primary + self.fallback + self.untagged
    }
}

/// Tags nouns from `res`, then from `fallback` for nouns `res` lacks.
/// Nouns found in neither keep their current tag; other entries are
/// returned unchanged.
pub fn add_semantics(
    entries: &[LexEntry],
    res: &SemanticResource,
    fallback: Option<&SemanticResource>,
) -> (Vec<LexEntry>, SemanticCoverage) {
    let mut coverage = SemanticCoverage::default();
    let tagged = entries
        .iter()
        .map(|entry| {
            let mut entry = entry.clone();
            if let WordClass::Noun(n) = &mut entry.class {
                if let Some(tag) = res.get(&entry.lemma) {
                    n.semantic_tag = Some(tag);
                    coverage.primary += 1;
                } else if let Some(tag) = fallback.and_then(|f| f.get(&entry.lemma)) {
                    n.semantic_tag = Some(tag);
                    coverage.fallback += 1;
                } else {
                    coverage.untagged += 1;
                }
            }
            entry
        })
        .collect();
    (tagged, coverage)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CategoryCount {
    pub category: Category,
    pub merged: usize,
    pub verified: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BuildReport {
    pub categories: Vec<CategoryCount>,
    pub extracted: BTreeMap<String, usize>,
    pub skipped: usize,
    pub rejected: Vec<Rejection>,
    pub conflicts: Vec<Conflict>,
    pub semantics: SemanticCoverage,
}

impl BuildReport {
    pub fn verified_total(&self) -> usize {
        self.categories.iter().map(|c| c.verified).sum()
    }
}

/// `category<TAB>merged<TAB>verified`, one line per stored category.
impl fmt::Display for BuildReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.categories {
            writeln!(f, "{}\t{}\t{}", row.category, row.merged, row.verified)?;
        }
        Ok(())
    }
}

/// Inputs to [`build`].
pub struct BuildConfig<'a> {
    /// `(source id, file contents)` pairs; the id selects the adapter.
    pub sources: Vec<(String, String)>,
    pub dictionary: &'a dyn DictionaryOracle,
    pub semantics: &'a SemanticResource,
    pub fallback_semantics: Option<&'a SemanticResource>,
    /// Conflict priority; defaults to the order of `sources`.
    pub priority: Option<Vec<String>>,
}

fn count_by_category(entries: &[LexEntry]) -> BTreeMap<Category, usize> {
    let mut counts = BTreeMap::new();
    for e in entries {
        *counts.entry(e.category()).or_insert(0) += 1;
    }
    counts
}

/// Extracts every source, merges, verifies and tags semantics.
pub fn build(config: &BuildConfig) -> Result<(Lexicon, BuildReport), BuildError> {
    if config.sources.is_empty() {
        return Err(BuildError::NoSources);
    }
    let extracted: Vec<Result<Extraction, BuildError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = config
            .sources
            .iter()
            .map(|(id, text)| {
                scope.spawn(move || {
                    let adapter = adapter(id).ok_or_else(|| BuildError::UnknownSource(id.clone()))?;
                    extract_map(&adapter.read(text)?)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("extraction thread panicked")).collect()
    });

    let mut report = BuildReport::default();
    let mut sets = Vec::new();
    for ((id, _), result) in config.sources.iter().zip(extracted) {
        let extraction = result?;
        report.extracted.insert(id.clone(), extraction.entries.len());
        report.skipped += extraction.skipped;
        report.rejected.extend(extraction.rejected);
        sets.push(extraction.entries);
    }

    let priority = config
        .priority
        .clone()
        .unwrap_or_else(|| config.sources.iter().map(|(id, _)| id.clone()).collect());
    let merged = merge(&sets, &priority);
    report.conflicts = merged.conflicts;
    let verified = verify(&merged.entries, config.dictionary);
    let (tagged, coverage) = add_semantics(&verified, config.semantics, config.fallback_semantics);
    report.semantics = coverage;

    let merged_counts = count_by_category(&merged.entries);
    let verified_counts = count_by_category(&tagged);
    report.categories = Category::STORED
        .iter()
        .map(|&category| CategoryCount {
            category,
            merged: merged_counts.get(&category).copied().unwrap_or(0),
            verified: verified_counts.get(&category).copied().unwrap_or(0),
        })
        .collect();

    if tagged.is_empty() {
        return Err(BuildError::Empty);
    }
    Ok((Lexicon::new(tagged)?, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{NounForms, Number, VerbForms};

    fn verb(past: &str, source: &str) -> LexEntry {
        LexEntry::new("look", WordClass::Verb(VerbForms { past: Some(past.into()), ..Default::default() }))
            .with_source(source)
    }

    fn past_of(entry: &LexEntry) -> &str {
        match &entry.class {
            WordClass::Verb(v) => v.past.as_deref().unwrap(),
            _ => panic!("not a verb"),
        }
    }

    #[test]
    fn priority_decides_conflicts() {
        let a = vec![verb("lookt", "A")];
        let b = vec![verb("looked", "B")];
        for (sets, priority, want) in [
            (vec![a.clone(), b.clone()], vec!["A".to_string(), "B".to_string()], "lookt"),
            (vec![b.clone(), a.clone()], vec!["A".to_string(), "B".to_string()], "lookt"),
            (vec![a.clone(), b.clone()], vec!["B".to_string(), "A".to_string()], "looked"),
            (vec![b.clone(), a.clone()], vec![], "looked"),
        ] {
            let merged = merge(&sets, &priority);
            assert_eq!(merged.entries.len(), 1);
            assert_eq!(past_of(&merged.entries[0]), want);
            assert_eq!(merged.conflicts.len(), 1);
            assert_eq!(merged.conflicts[0].kept, want);
            assert_eq!(merged.entries[0].sources.len(), 2);
        }
    }

    #[test]
    fn merge_unifies_inflection_and_semantics() {
        let inflected = LexEntry::new(
            "picture",
            WordClass::Noun(NounForms { number: Number::Singular, plural: Some("pictures".into()), semantic_tag: None }),
        )
        .with_source("enlex");
        let semantic = LexEntry::new(
            "picture",
            WordClass::Noun(NounForms {
                number: Number::Singular,
                plural: None,
                semantic_tag: Some(SemanticTag::Object),
            }),
        )
        .with_source("other");
        let merged = merge(&[vec![inflected], vec![semantic]], &[]);
        assert!(merged.conflicts.is_empty());
        let WordClass::Noun(n) = &merged.entries[0].class else { panic!() };
        assert_eq!(n.plural.as_deref(), Some("pictures"));
        assert_eq!(n.semantic_tag, Some(SemanticTag::Object));
    }

    #[test]
    fn verify_uses_lemma_and_category() {
        let dict = Dictionary::parse("run\tverb\nlook\tverb,noun\n").unwrap();
        let entries = vec![
            LexEntry::new("run", WordClass::Noun(NounForms::default())),
            LexEntry::new("look", WordClass::Noun(NounForms::default())),
            LexEntry::new("blorf", WordClass::Adjective),
        ];
        let kept = verify(&entries, &dict);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].lemma, "look");
        assert!(Dictionary::parse("x\tinterjection").is_err());
    }

    #[test]
    fn semantics_with_fallback() {
        let nouns: Vec<LexEntry> = ["picture", "mum", "zork"]
            .iter()
            .map(|l| LexEntry::new(*l, WordClass::Noun(NounForms::default())))
            .chain([LexEntry::new("picture", WordClass::Adjective)])
            .collect();
        let res = SemanticResource::parse("picture\tobject\n").unwrap();
        let fallback = SemanticResource::parse("mum\tliving\npicture\tplace\n").unwrap();
        let (tagged, coverage) = add_semantics(&nouns, &res, Some(&fallback));
        let tags: Vec<_> = tagged.iter().map(|e| e.semantic_tag()).collect();
        assert_eq!(tags, [Some(SemanticTag::Object), Some(SemanticTag::Living), None, None]);
        assert_eq!(coverage, SemanticCoverage { primary: 1, fallback: 1, untagged: 1 });
        assert_eq!(tagged[3], nouns[3]);
    }

    #[test]
    fn unregistered_source_is_an_error() {
        let record = SourceRecord {
            source_id: "mystery".into(),
            lemma: "x".into(),
            category: Some(Category::Adjective),
            raw_category: "adj".into(),
            raw_features: BTreeMap::new(),
        };
        assert_eq!(extract_map(&[record]), Err(BuildError::UnknownSource("mystery".into())));
        assert_eq!(extract_map(&[]).unwrap(), Extraction::default());
    }
}
