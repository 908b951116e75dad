//! Readers for the three source lexicon formats.
//!
//! * `enlex`: Alexina-style entries with suffix tables.
//!   ```text
//!   picture	N2 100;Lemma;N;;cat=N;
//!   <table name="N2" rads=".*">
//!    <form suffix="" tag="s"/>
//!    <form suffix="s" tag="p"/>
//!   </table>
//!   ```
//! * `nih`: brace-delimited records with one `key=value` per line.
//!   ```text
//!   {base=she
//!   entry=E0000100
//!   	cat=pron
//!   	person=3
//!   }
//!   ```
//! * `freeling`: `form lemma tag [lemma tag]...` with Penn Treebank tags.

use std::collections::BTreeMap;

use regex::Regex;

use super::{BuildError, SourceRecord};
use crate::lexicon::{Category, LexEntry};

/// Parses a source text and expands its records into entries.
pub trait SourceAdapter: Sync {
    fn id(&self) -> &'static str;
    fn read(&self, text: &str) -> Result<Vec<SourceRecord>, BuildError>;
    /// Turns one record into an entry, or explains why it cannot.
    fn expand(&self, record: &SourceRecord, category: Category) -> Result<LexEntry, String>;
}

pub static ADAPTERS: [&dyn SourceAdapter; 3] = [&EnLex, &Nih, &Freeling];

pub fn adapter(id: &str) -> Option<&'static dyn SourceAdapter> {
    ADAPTERS.iter().copied().find(|a| a.id() == id)
}

fn read_error(source: &str, line: usize, message: impl Into<String>) -> BuildError {
    BuildError::Source { source_id: source.to_string(), line, message: message.into() }
}

fn entry_from(
    record: &SourceRecord,
    category: Category,
    features: Vec<(&str, String)>,
) -> Result<LexEntry, String> {
    LexEntry::from_features(record.lemma.clone(), category, features)
        .map(|e| e.with_source(record.source_id.clone()))
        .map_err(|e| e.to_string())
}

pub struct EnLex;

const SUFFIX_PREFIX: &str = "suffix.";

impl EnLex {
    fn category(code: &str) -> Option<Category> {
        Some(match code.to_ascii_lowercase().as_str() {
            "n" | "nc" => Category::Noun,
            "v" => Category::Verb,
            "adj" => Category::Adjective,
            "adv" => Category::Adverb,
            "pro" | "cln" => Category::Pronoun,
            "det" => Category::Determiner,
            "prep" => Category::Preposition,
            "coo" | "csu" => Category::Conjunction,
            _ => return None,
        })
    }

    fn read_tables(text: &str) -> Result<BTreeMap<String, (String, Vec<(String, String)>)>, BuildError> {
        let mut tables = BTreeMap::new();
        let mut block = String::new();
        let mut start = 0;
        for (i, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if block.is_empty() && !trimmed.starts_with("<table") {
                continue;
            }
            if block.is_empty() {
                start = i + 1;
            }
            block.push_str(line);
            block.push('\n');
            if trimmed.ends_with("</table>") || (trimmed.starts_with("<table") && trimmed.ends_with("/>")) {
                let doc = roxmltree::Document::parse(&block).map_err(|e| {
                    read_error("enlex", start + e.pos().row as usize - 1, e.to_string())
                })?;
                let table = doc.root_element();
                let name = table
                    .attribute("name")
                    .ok_or_else(|| read_error("enlex", start, "table without a name"))?;
                let rads = table.attribute("rads").unwrap_or(".*").to_string();
                let forms = table
                    .children()
                    .filter(|n| n.has_tag_name("form"))
                    .map(|f| {
                        (f.attribute("tag").unwrap_or("").to_string(), f.attribute("suffix").unwrap_or("").to_string())
                    })
                    .collect();
                tables.insert(name.to_string(), (rads, forms));
                block.clear();
            }
        }
        if !block.is_empty() {
            return Err(read_error("enlex", start, "unterminated <table>"));
        }
        Ok(tables)
    }
}

impl SourceAdapter for EnLex {
    fn id(&self) -> &'static str {
        "enlex"
    }

    fn read(&self, text: &str) -> Result<Vec<SourceRecord>, BuildError> {
        let tables = Self::read_tables(text)?;
        let mut records = Vec::new();
        let mut in_table = false;
        for (i, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.starts_with("<table") {
                in_table = !trimmed.ends_with("/>");
                continue;
            }
            if in_table {
                in_table = !trimmed.ends_with("</table>");
                continue;
            }
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (lemma, rest) = line
                .split_once('\t')
                .ok_or_else(|| read_error("enlex", i + 1, "expected lemma<TAB>description"))?;
            let fields: Vec<&str> = rest.split(';').map(str::trim).collect();
            let table = fields[0].split_whitespace().next().unwrap_or("").to_string();
            let code = fields
                .iter()
                .find_map(|f| f.strip_prefix("cat="))
                .or_else(|| fields.get(2).copied())
                .unwrap_or("")
                .to_string();
            let mut raw = BTreeMap::new();
            raw.insert("table".to_string(), table.clone());
            if let Some((rads, forms)) = tables.get(&table) {
                raw.insert("rads".to_string(), rads.clone());
                for (tag, suffix) in forms {
                    raw.insert(format!("{SUFFIX_PREFIX}{tag}"), suffix.clone());
                }
            }
            records.push(SourceRecord {
                source_id: self.id().to_string(),
                lemma: lemma.trim().to_lowercase(),
                category: Self::category(&code),
                raw_category: code,
                raw_features: raw,
            });
        }
        Ok(records)
    }

    fn expand(&self, record: &SourceRecord, category: Category) -> Result<LexEntry, String> {
        let table = &record.raw_features["table"];
        let rads = record
            .raw_features
            .get("rads")
            .ok_or_else(|| format!("unknown inflection table '{table}'"))?;
        let suffixes: Vec<(&str, &str)> = record
            .raw_features
            .iter()
            .filter_map(|(k, v)| k.strip_prefix(SUFFIX_PREFIX).map(|tag| (tag, v.as_str())))
            .collect();
        let canonical = match category {
            Category::Noun => "s",
            Category::Verb => "W",
            _ => return entry_from(record, category, Vec::new()),
        };
        let base_suffix = suffixes
            .iter()
            .find(|(tag, _)| *tag == canonical)
            .map(|(_, s)| *s)
            .ok_or_else(|| format!("table '{table}' has no '{canonical}' form"))?;
        let radical = record
            .lemma
            .strip_suffix(base_suffix)
            .ok_or_else(|| format!("lemma does not end with suffix '{base_suffix}' of table '{table}'"))?;
        let pattern = Regex::new(&format!("^(?:{rads})$")).map_err(|e| format!("bad rads pattern: {e}"))?;
        if !pattern.is_match(radical) {
            return Err(format!("radical '{radical}' does not match table '{table}'"));
        }

        let mut features: Vec<(&str, String)> = Vec::new();
        if category == Category::Noun {
            features.push(("number", "singular".into()));
        }
        for (tag, suffix) in suffixes {
            let form = format!("{radical}{suffix}");
            let name = match (category, tag) {
                (_, t) if t == canonical => continue,
                (Category::Noun, "p") => "plural",
                (Category::Verb, "P3s") => "present3s",
                (Category::Verb, "P1s") => "present1s",
                (Category::Verb, "Ppl") => "present_plural",
                (Category::Verb, "J") => "past",
                (Category::Verb, "Jpl") => "past_plural",
                (Category::Verb, "G") => "present_participle",
                (Category::Verb, "K") => "past_participle",
                _ => return Err(format!("unknown form tag '{tag}' in table '{table}'")),
            };
            features.push((name, form));
        }
        entry_from(record, category, features)
    }
}

pub struct Nih;

impl SourceAdapter for Nih {
    fn id(&self) -> &'static str {
        "nih"
    }

    fn read(&self, text: &str) -> Result<Vec<SourceRecord>, BuildError> {
        let mut records = Vec::new();
        let mut current: Option<(usize, BTreeMap<String, String>)> = None;
        for (i, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('{') {
                if current.is_some() {
                    return Err(read_error("nih", i + 1, "record opened before the previous one closed"));
                }
                let mut fields = BTreeMap::new();
                if let Some((k, v)) = rest.split_once('=') {
                    fields.insert(k.trim().to_string(), v.trim().to_string());
                }
                current = Some((i + 1, fields));
                continue;
            }
            let Some((start, fields)) = current.as_mut() else {
                return Err(read_error("nih", i + 1, "text outside a record"));
            };
            if trimmed == "}" {
                let start = *start;
                let mut fields = std::mem::take(fields);
                current = None;
                let lemma = fields
                    .remove("base")
                    .ok_or_else(|| read_error("nih", start, "record without base"))?;
                let code = fields.remove("cat").unwrap_or_default();
                fields.remove("entry");
                records.push(SourceRecord {
                    source_id: self.id().to_string(),
                    lemma: lemma.to_lowercase(),
                    category: nih_category(&code),
                    raw_category: code,
                    raw_features: fields,
                });
                continue;
            }
            let (k, v) = trimmed
                .split_once('=')
                .ok_or_else(|| read_error("nih", i + 1, "expected key=value"))?;
            fields.insert(k.trim().to_string(), v.trim().to_string());
        }
        if let Some((start, _)) = current {
            return Err(read_error("nih", start, "unterminated record"));
        }
        Ok(records)
    }

    fn expand(&self, record: &SourceRecord, category: Category) -> Result<LexEntry, String> {
        let allowed: &[&str] = match category {
            Category::Pronoun => &["person", "number", "gender"],
            Category::Adverb => &["tense"],
            Category::Determiner => &["plural"],
            Category::Noun => &["plural"],
            Category::Verb => &["present3s", "past", "present_participle", "past_participle"],
            _ => &[],
        };
        let features = allowed
            .iter()
            .filter_map(|name| record.raw_features.get(*name).map(|v| (*name, v.clone())))
            .collect();
        entry_from(record, category, features)
    }
}

fn nih_category(code: &str) -> Option<Category> {
    Some(match code {
        "noun" => Category::Noun,
        "verb" => Category::Verb,
        "adj" => Category::Adjective,
        "adv" => Category::Adverb,
        "conj" => Category::Conjunction,
        "det" => Category::Determiner,
        "prep" => Category::Preposition,
        "pron" => Category::Pronoun,
        _ => return None,
    })
}

pub struct Freeling;

fn penn_category(tag: &str) -> Option<Category> {
    Some(match tag {
        "VB" | "VBP" | "VBZ" | "VBD" | "VBN" | "VBG" => Category::Verb,
        "JJ" => Category::Adjective,
        "RB" => Category::Adverb,
        "NN" | "NNS" => Category::Noun,
        _ => return None,
    })
}

impl SourceAdapter for Freeling {
    fn id(&self) -> &'static str {
        "freeling"
    }

    fn read(&self, text: &str) -> Result<Vec<SourceRecord>, BuildError> {
        // (lemma, category or raw tag) -> tag -> form
        let mut grouped: BTreeMap<(String, Result<Category, String>), BTreeMap<String, String>> =
            BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.is_empty() || cols[0].starts_with('#') {
                continue;
            }
            if cols.len() < 3 || cols.len().is_multiple_of(2) {
                return Err(read_error("freeling", i + 1, "expected form followed by lemma/tag pairs"));
            }
            let form = cols[0].to_lowercase();
            for pair in cols[1..].chunks(2) {
                let (lemma, tag) = (pair[0].to_lowercase(), pair[1]);
                let key = penn_category(tag).ok_or_else(|| tag.to_string());
                grouped
                    .entry((lemma, key))
                    .or_default()
                    .entry(tag.to_string())
                    .or_insert_with(|| form.clone());
            }
        }
        Ok(grouped
            .into_iter()
            .map(|((lemma, key), tags)| SourceRecord {
                source_id: self.id().to_string(),
                lemma,
                raw_category: match &key {
                    Ok(c) => c.as_str().to_string(),
                    Err(tag) => tag.clone(),
                },
                category: key.ok(),
                raw_features: tags,
            })
            .collect())
    }

    fn expand(&self, record: &SourceRecord, category: Category) -> Result<LexEntry, String> {
        let mut features: Vec<(&str, String)> = Vec::new();
        if category == Category::Noun {
            features.push(("number", "singular".into()));
        }
        for (tag, form) in &record.raw_features {
            let name = match (category, tag.as_str()) {
                (Category::Verb, "VBZ") => "present3s",
                (Category::Verb, "VBD") => "past",
                (Category::Verb, "VBN") => "past_participle",
                (Category::Verb, "VBG") => "present_participle",
                (Category::Noun, "NNS") => "plural",
                _ => continue,
            };
            features.push((name, form.clone()));
        }
        entry_from(record, category, features)
    }
}
