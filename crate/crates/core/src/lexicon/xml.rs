//! The lexicon XML file format.
//!
//! ```xml
//! <?xml version="1.0" encoding="UTF-8" standalone="no"?>
//! <lexicon>
//!  <word>
//!   <lemma>picture</lemma>
//!   <category>noun</category>
//!   <number>singular</number>
//!   <plural>pictures</plural>
//!   <semantic_tag>object</semantic_tag>
//!  </word>
//! </lexicon>
//! ```
//!
//! Verbs carry `present3s`, `past`, `present_participle`, `past_participle`
//! and one element per semantic tag naming the preposition that follows the
//! verb (`<object>at</object>`). Extension elements: `present1s`,
//! `present_plural` and `past_plural` on suppletive verbs, `tense` on time
//! adverbs, `person`/`number`/`gender` on pronouns, `plural` on determiners
//! and repeated `source` elements on any word.

use super::{Category, LexEntry, Lexicon, LexiconError};

pub const XML_DECLARATION: &str = r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#;

pub fn parse_lexicon(xml_text: &str) -> Result<Lexicon, LexiconError> {
    let doc = roxmltree::Document::parse(xml_text).map_err(|e| LexiconError::Xml {
        line: e.pos().row,
        message: e.to_string(),
    })?;
    let root = doc.root_element();
    if root.tag_name().name() != "lexicon" {
        return Err(LexiconError::Xml {
            line: doc.text_pos_at(root.range().start).row,
            message: format!("expected root element <lexicon>, found <{}>", root.tag_name().name()),
        });
    }

    let mut entries = Vec::new();
    for word in root.children().filter(|n| n.is_element()) {
        if word.tag_name().name() != "word" {
            return Err(LexiconError::Xml {
                line: doc.text_pos_at(word.range().start).row,
                message: format!("unexpected element <{}>", word.tag_name().name()),
            });
        }
        entries.push(parse_word(&doc, word)?);
    }
    Lexicon::new(entries)
}

fn element_text(
    doc: &roxmltree::Document,
    node: roxmltree::Node,
    lemma: &str,
) -> Result<String, LexiconError> {
    if let Some(child) = node.children().find(|c| c.is_element()) {
        return Err(LexiconError::Schema {
            lemma: lemma.to_string(),
            message: format!(
                "element <{}> at line {} may not contain <{}>",
                node.tag_name().name(),
                doc.text_pos_at(child.range().start).row,
                child.tag_name().name()
            ),
        });
    }
    Ok(node.text().unwrap_or("").trim().to_string())
}

fn parse_word(doc: &roxmltree::Document, word: roxmltree::Node) -> Result<LexEntry, LexiconError> {
    let children: Vec<_> = word.children().filter(|n| n.is_element()).collect();
    let lemma = children
        .iter()
        .find(|n| n.tag_name().name() == "lemma")
        .map(|n| element_text(doc, *n, ""))
        .transpose()?
        .filter(|l| !l.is_empty())
        .ok_or_else(|| LexiconError::Schema {
            lemma: String::new(),
            message: format!(
                "word at line {} has no lemma",
                doc.text_pos_at(word.range().start).row
            ),
        })?;
    let schema = |message: String| LexiconError::Schema { lemma: lemma.clone(), message };

    let category_text = children
        .iter()
        .find(|n| n.tag_name().name() == "category")
        .map(|n| element_text(doc, *n, &lemma))
        .transpose()?
        .ok_or_else(|| schema("missing category".into()))?;
    let category: Category = category_text.parse().map_err(schema)?;
    if category == Category::ProperNoun {
        return Err(schema("proper_noun is not a storable category".into()));
    }

    let mut features = Vec::new();
    let mut sources = Vec::new();
    let mut seen_lemma = false;
    let mut seen_category = false;
    for node in &children {
        let name = node.tag_name().name();
        let text = element_text(doc, *node, &lemma)?;
        match name {
            "lemma" if !seen_lemma => seen_lemma = true,
            "category" if !seen_category => seen_category = true,
            "lemma" | "category" => return Err(schema(format!("<{name}> given twice"))),
            "source" => sources.push(text),
            _ => features.push((name.to_string(), text)),
        }
    }

    let mut entry = LexEntry::from_features(lemma.clone(), category, features)
        .map_err(|e| schema(e.to_string()))?;
    entry.sources.extend(sources);
    Ok(entry)
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            _ => out.push(c),
        }
    }
    out
}

/// Writes entries sorted by (lemma, category) with elements in file order.
pub fn serialize_lexicon(lex: &Lexicon) -> String {
    let mut out = String::new();
    out.push_str(XML_DECLARATION);
    out.push('\n');
    if lex.is_empty() {
        out.push_str("<lexicon></lexicon>\n");
        return out;
    }
    out.push_str("<lexicon>\n");
    for entry in lex.entries() {
        out.push_str(" <word>\n");
        push_element(&mut out, "lemma", &entry.lemma);
        push_element(&mut out, "category", entry.category().as_str());
        for (name, value) in entry.features() {
            push_element(&mut out, name, &value);
        }
        for source in &entry.sources {
            push_element(&mut out, "source", source);
        }
        out.push_str(" </word>\n");
    }
    out.push_str("</lexicon>\n");
    out
}

fn push_element(out: &mut String, name: &str, value: &str) {
    out.push_str("  <");
    out.push_str(name);
    out.push('>');
    out.push_str(&escape(value));
    out.push_str("</");
    out.push_str(name);
    out.push_str(">\n");
}
