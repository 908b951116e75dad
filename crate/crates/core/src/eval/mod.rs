//! Corpus regeneration, annotation files and inter-annotator agreement.

mod agreement;
mod annotation;

pub use agreement::*;
pub use annotation::*;

use serde::Serialize;

use crate::corpus::{Pos, TaggedSentence, TaggedToken};
use crate::grammar::GrammarRule;
use crate::lexicon::{Category, Lexicon};
use crate::prep::PrepModel;
use crate::realiser::{expand, ExpandOptions, WH_WORDS};

const ARTICLES: [&str; 3] = ["the", "a", "an"];
const AUXILIARIES: [&str; 2] = ["do", "will"];

/// Turns a tagged sentence into the keyword list a user would have entered.
///
/// Nouns, pronouns and determiners keep their surface form, everything else
/// its lemma. Articles, conjunctions, prepositions right after a verb and
/// `do`/`will` followed by another verb are dropped. In questions a fronted
/// verb is moved back behind the first noun phrase head and `?` is appended.
pub fn extract_keywords(tokens: &[TaggedToken]) -> Vec<String> {
    let question = tokens.last().is_some_and(|t| t.pos == Pos::Punct && t.surface == "?");
    let mut kept: Vec<(String, Category)> = Vec::new();
    let mut previous: Option<Category> = None;
    for (i, token) in tokens.iter().enumerate() {
        let Pos::Word(cat) = token.pos else { continue };
        let surface = token.surface.to_lowercase();
        let keyword = match cat {
            Category::Noun | Category::Pronoun => Some(surface),
            Category::ProperNoun => Some(token.surface.clone()),
            Category::Determiner => (!ARTICLES.contains(&surface.as_str())).then_some(surface),
            Category::Preposition => (previous != Some(Category::Verb)).then(|| token.lemma.clone()),
            Category::Conjunction => None,
            Category::Verb => {
                let auxiliary = AUXILIARIES.contains(&token.lemma.as_str())
                    && tokens[i + 1..].iter().any(|t| t.is(Category::Verb));
                (!auxiliary).then(|| token.lemma.clone())
            }
            Category::Adjective | Category::Adverb => Some(token.lemma.clone()),
        };
        if let Some(k) = keyword {
            kept.push((k, cat));
        }
        previous = Some(cat);
    }
    if question {
        restore_order(&mut kept);
    }
    let mut out: Vec<String> = kept.into_iter().map(|(k, _)| k).collect();
    if question {
        out.push("?".to_string());
    }
    out
}

fn restore_order(kept: &mut Vec<(String, Category)>) {
    let Some(v) = kept.iter().position(|(_, c)| *c == Category::Verb) else { return };
    let fronted = kept[..v].iter().all(|(k, c)| *c == Category::Adverb && WH_WORDS.contains(&k.as_str()));
    if !fronted {
        return;
    }
    let head = kept[v + 1..]
        .iter()
        .position(|(_, c)| matches!(c, Category::Noun | Category::Pronoun | Category::ProperNoun));
    if let Some(offset) = head {
        let verb = kept.remove(v);
        kept.insert(v + offset + 1, verb);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchClass {
    Exact,
    /// Only letter case differs, typically around proper nouns.
    Capitalization,
    NoMatch,
}

#[derive(Debug, Clone, Serialize)]
pub struct SentenceResult {
    pub target: String,
    pub keywords: Vec<String>,
    pub candidates: Vec<String>,
    pub class: MatchClass,
    /// The target was the first candidate.
    pub top1: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct MatchReport {
    pub total: usize,
    pub exact: usize,
    pub capitalization: usize,
    pub no_match: usize,
    pub top1: usize,
    pub sentences: Vec<SentenceResult>,
}

impl MatchReport {
    fn percent(&self, n: usize) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            100.0 * n as f64 / self.total as f64
        }
    }

    pub fn exact_percent(&self) -> f64 {
        self.percent(self.exact)
    }

    pub fn summary(&self) -> String {
        format!(
            "exact {}/{} = {:.2}%; capitalization only {} ({:.2}%); no match {} ({:.2}%); top-1 {}",
            self.exact,
            self.total,
            self.exact_percent(),
            self.capitalization,
            self.percent(self.capitalization),
            self.no_match,
            self.percent(self.no_match),
            self.top1
        )
    }
}

pub fn classify(target: &str, candidates: &[String]) -> MatchClass {
    if candidates.iter().any(|c| c == target) {
        MatchClass::Exact
    } else if candidates.iter().any(|c| c.to_lowercase() == target.to_lowercase()) {
        MatchClass::Capitalization
    } else {
        MatchClass::NoMatch
    }
}

fn regenerate_one(
    sentence: &TaggedSentence,
    lex: &Lexicon,
    model: &PrepModel,
    rules: &[GrammarRule],
    options: &ExpandOptions,
) -> SentenceResult {
    let target = sentence.target();
    let keywords = extract_keywords(&sentence.tokens);
    let candidates: Vec<String> = if keywords.is_empty() {
        Vec::new()
    } else {
        expand(&keywords, lex, model, rules, options).candidates.into_iter().map(|c| c.text).collect()
    };
    let class = classify(&target, &candidates);
    let top1 = candidates.first() == Some(&target);
    SentenceResult { target, keywords, candidates, class, top1 }
}

/// Regenerates every corpus sentence from its keywords and compares the
/// candidates with the original text.
pub fn regenerate_and_match(
    corpus: &[TaggedSentence],
    lex: &Lexicon,
    model: &PrepModel,
    rules: &[GrammarRule],
    options: &ExpandOptions,
) -> MatchReport {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(corpus.len().max(1));
    let chunk = corpus.len().div_ceil(workers).max(1);
    let sentences: Vec<SentenceResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = corpus
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter().map(|s| regenerate_one(s, lex, model, rules, options)).collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("regeneration thread panicked")).collect()
    });

    let mut report = MatchReport { total: sentences.len(), ..Default::default() };
    for s in &sentences {
        match s.class {
            MatchClass::Exact => report.exact += 1,
            MatchClass::Capitalization => report.capitalization += 1,
            MatchClass::NoMatch => report.no_match += 1,
        }
        report.top1 += usize::from(s.top1);
    }
    report.sentences = sentences;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_corpus;

    fn tagged(text: &str) -> Vec<TaggedToken> {
        parse_corpus(text).unwrap().remove(0).tokens
    }

    #[test]
    fn keywords_of_running_example() {
        let t = tagged("She\tshe\tpronoun\nlooks\tlook\tverb\nat\tat\tpreposition\nthe\tthe\tdeterminer\npicture\tpicture\tnoun\n.\t.\tpunct\n");
        assert_eq!(extract_keywords(&t), ["she", "look", "picture"]);
    }

    #[test]
    fn keywords_of_question() {
        let t = tagged("Where\twhere\tadverb\nare\tbe\tverb\nmy\tmy\tdeterminer\nglasses\tglass\tnoun\n?\t?\tpunct\n");
        assert_eq!(extract_keywords(&t), ["where", "my", "glasses", "be", "?"]);
    }

    #[test]
    fn punctuation_only() {
        assert!(extract_keywords(&tagged(".\t.\tpunct\n")).is_empty());
    }

    #[test]
    fn capitalization_class() {
        let got = vec!["I need a new Harry Potter book.".to_string()];
        assert_eq!(classify("I need a new harry potter book.", &got), MatchClass::Capitalization);
        assert_eq!(classify("I need a new Harry Potter book.", &got), MatchClass::Exact);
        assert_eq!(classify("I need a book.", &got), MatchClass::NoMatch);
    }

    #[test]
    fn empty_corpus() {
        let r = regenerate_and_match(&[], &Lexicon::default(), &PrepModel::default(), &[], &ExpandOptions::default());
        assert_eq!((r.total, r.exact, r.capitalization, r.no_match), (0, 0, 0, 0));
        assert_eq!(r.exact_percent(), 0.0);
    }
}
