use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

/// Error types annotators assign to a generated clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ErrorTag {
    #[serde(rename = "a")]
    Morphological,
    #[serde(rename = "b")]
    Syntactic,
    #[serde(rename = "c")]
    Lexicon,
    #[serde(rename = "d")]
    Grammar,
    #[serde(rename = "e")]
    Target,
    #[serde(rename = "f")]
    Lemmatiser,
}

impl ErrorTag {
    pub const ALL: [ErrorTag; 6] = [
        ErrorTag::Morphological,
        ErrorTag::Syntactic,
        ErrorTag::Lexicon,
        ErrorTag::Grammar,
        ErrorTag::Target,
        ErrorTag::Lemmatiser,
    ];

    pub fn letter(self) -> char {
        (b'a' + self.index() as u8) as char
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn description(self) -> &'static str {
        match self {
            ErrorTag::Morphological => "morphological",
            ErrorTag::Syntactic => "syntactic",
            ErrorTag::Lexicon => "lexicon",
            ErrorTag::Grammar => "grammar",
            ErrorTag::Target => "target",
            ErrorTag::Lemmatiser => "lemmatiser",
        }
    }
}

impl fmt::Display for ErrorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for ErrorTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c @ 'a'..='f'), None) => Ok(Self::ALL[(c as u8 - b'a') as usize]),
            _ => Err(format!("unknown error tag '{s}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnnotatedClause {
    pub text: String,
    pub error: ErrorTag,
    pub rating: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnnotationRecord {
    pub target: String,
    pub clauses: Vec<AnnotatedClause>,
    /// 1-based index into `clauses`.
    pub best_realisation: Option<usize>,
    pub suggestion: Option<String>,
}

#[derive(Debug, Error)]
pub enum AnnotationError {
    #[error("annotation XML: {0}")]
    Xml(#[from] roxmltree::Error),
    #[error("annotation schema: {0}")]
    Schema(String),
}

fn schema(message: impl Into<String>) -> AnnotationError {
    AnnotationError::Schema(message.into())
}

fn own_text(node: roxmltree::Node) -> String {
    let text: Vec<&str> = node.children().filter(|c| c.is_text()).filter_map(|c| c.text()).collect();
    text.concat().split_whitespace().collect::<Vec<_>>().join(" ")
}

fn child<'a, 'i>(node: roxmltree::Node<'a, 'i>, name: &str) -> Option<roxmltree::Node<'a, 'i>> {
    node.children().find(|c| c.has_tag_name(name))
}

fn required_text(node: roxmltree::Node, name: &str) -> Result<String, AnnotationError> {
    child(node, name)
        .map(own_text)
        .ok_or_else(|| schema(format!("<{}> without <{name}>", node.tag_name().name())))
}

fn read_clause(node: roxmltree::Node) -> Result<AnnotatedClause, AnnotationError> {
    let error = required_text(node, "Error")?.parse().map_err(schema)?;
    let rating_text = required_text(node, "Rating")?;
    let rating: u8 = rating_text.parse().map_err(|_| schema(format!("bad rating '{rating_text}'")))?;
    if rating > 5 {
        return Err(schema(format!("rating {rating} outside 0..=5")));
    }
    Ok(AnnotatedClause { text: own_text(node), error, rating })
}

fn read_record(node: roxmltree::Node) -> Result<AnnotationRecord, AnnotationError> {
    let target = required_text(node, "TARGET")?;
    let clauses = match child(node, "Generated_Clauses") {
        Some(g) => g.children().filter(|c| c.has_tag_name("Clause")).map(read_clause).collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    let best_realisation = match child(node, "Best_realisation").map(own_text) {
        None => None,
        Some(t) if t.is_empty() => None,
        Some(t) => {
            let i: usize = t.parse().map_err(|_| schema(format!("bad best realisation '{t}'")))?;
            if i == 0 || i > clauses.len() {
                return Err(schema(format!("best realisation {i} does not index one of {} clauses", clauses.len())));
            }
            Some(i)
        }
    };
    let suggestion = child(node, "Suggestion_for_Generation").map(own_text).filter(|s| !s.is_empty());
    Ok(AnnotationRecord { target, clauses, best_realisation, suggestion })
}

pub fn read_annotations(xml: &str) -> Result<Vec<AnnotationRecord>, AnnotationError> {
    let doc = roxmltree::Document::parse(xml)?;
    let root = doc.root_element();
    if !root.has_tag_name("TAGGING") {
        return Err(schema(format!("root element <{}>, expected <TAGGING>", root.tag_name().name())));
    }
    root.children().filter(|c| c.has_tag_name("CLAUSE")).map(read_record).collect()
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn write_annotations(records: &[AnnotationRecord]) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<TAGGING>\n");
    for r in records {
        out.push_str(" <CLAUSE>\n");
        out.push_str(&format!("  <TARGET>{}</TARGET>\n", escape(&r.target)));
        out.push_str("   <Generated_Clauses>\n");
        for c in &r.clauses {
            out.push_str(&format!(
                "    <Clause>\n     {}\n     <Error>{}</Error>\n     <Rating>{}</Rating>\n    </Clause>\n",
                escape(&c.text),
                c.error,
                c.rating
            ));
        }
        out.push_str("  </Generated_Clauses>\n");
        if let Some(best) = r.best_realisation {
            out.push_str(&format!("  <Best_realisation>{best}</Best_realisation>\n"));
        }
        if let Some(s) = &r.suggestion {
            out.push_str(&format!("  <Suggestion_for_Generation>\n   {}\n  </Suggestion_for_Generation>\n", escape(s)));
        }
        out.push_str(" </CLAUSE>\n");
    }
    out.push_str("</TAGGING>\n");
    out
}

/// One generated clause judged by several annotators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Unit {
    pub target: String,
    pub clause: String,
}

/// Annotators by units; `None` where an annotator did not judge a unit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reliability {
    pub units: Vec<Unit>,
    pub judgments: Vec<Vec<Option<ErrorTag>>>,
}

/// Lines up the files of several annotators by target and clause text.
pub fn reliability(annotators: &[Vec<AnnotationRecord>]) -> Reliability {
    let mut units: Vec<Unit> = Vec::new();
    let mut index: BTreeMap<Unit, usize> = BTreeMap::new();
    for records in annotators {
        for r in records {
            for c in &r.clauses {
                let unit = Unit { target: r.target.clone(), clause: c.text.clone() };
                index.entry(unit.clone()).or_insert_with(|| {
                    units.push(unit);
                    units.len() - 1
                });
            }
        }
    }
    let judgments = annotators
        .iter()
        .map(|records| {
            let mut row = vec![None; units.len()];
            for r in records {
                for c in &r.clauses {
                    let unit = Unit { target: r.target.clone(), clause: c.text.clone() };
                    row[index[&unit]] = Some(c.error);
                }
            }
            row
        })
        .collect();
    Reliability { units, judgments }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Consensus {
    NoBestRealisation,
    BestRealisationOnly,
    Total,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetConsensus {
    pub target: String,
    pub consensus: Consensus,
    /// Clause text most annotators picked as best, if a majority exists.
    pub best: Option<String>,
    /// Arithmetic mean rating of each clause.
    pub mean_ratings: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConsensusReport {
    pub no_best_realisation: usize,
    pub best_realisation_only: usize,
    pub total: usize,
    pub targets: Vec<TargetConsensus>,
}

fn majority<T: Ord + Clone>(votes: &[T], voters: usize) -> Option<T> {
    let mut counts: BTreeMap<&T, usize> = BTreeMap::new();
    for v in votes {
        *counts.entry(v).or_insert(0) += 1;
    }
    counts.into_iter().find(|(_, n)| 2 * n > voters).map(|(v, _)| v.clone())
}

/// Majority-vote consensus per target over best realisation and error tags.
pub fn consensus(annotators: &[Vec<AnnotationRecord>]) -> ConsensusReport {
    let mut by_target: BTreeMap<&str, Vec<&AnnotationRecord>> = BTreeMap::new();
    let mut order: Vec<&str> = Vec::new();
    for records in annotators {
        for r in records {
            let list = by_target.entry(&r.target).or_default();
            if list.is_empty() {
                order.push(&r.target);
            }
            list.push(r);
        }
    }
    let mut report = ConsensusReport::default();
    for target in order {
        let records = &by_target[target];
        let voters = records.len();
        let bests: Vec<String> = records
            .iter()
            .filter_map(|r| r.best_realisation.map(|i| r.clauses[i - 1].text.clone()))
            .collect();
        let best = majority(&bests, voters);

        let mut clauses: Vec<String> = Vec::new();
        let mut errors: BTreeMap<String, Vec<ErrorTag>> = BTreeMap::new();
        let mut ratings: BTreeMap<String, Vec<u8>> = BTreeMap::new();
        for r in records {
            for c in &r.clauses {
                if !errors.contains_key(&c.text) {
                    clauses.push(c.text.clone());
                }
                errors.entry(c.text.clone()).or_default().push(c.error);
                ratings.entry(c.text.clone()).or_default().push(c.rating);
            }
        }
        let errors_agree = clauses.iter().all(|c| majority(&errors[c], errors[c].len()).is_some());
        let consensus = match (&best, errors_agree) {
            (None, _) => Consensus::NoBestRealisation,
            (Some(_), false) => Consensus::BestRealisationOnly,
            (Some(_), true) => Consensus::Total,
        };
        match consensus {
            Consensus::NoBestRealisation => report.no_best_realisation += 1,
            Consensus::BestRealisationOnly => report.best_realisation_only += 1,
            Consensus::Total => report.total += 1,
        }
        let mean_ratings = clauses
            .into_iter()
            .map(|c| {
                let r = &ratings[&c];
                let mean = r.iter().map(|&x| f64::from(x)).sum::<f64>() / r.len() as f64;
                (c, mean)
            })
            .collect();
        report.targets.push(TargetConsensus { target: target.to_string(), consensus, best, mean_ratings });
    }
    report
}
