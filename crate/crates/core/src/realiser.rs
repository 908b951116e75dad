//! Surface realisation: agreement, tense, verb group construction,
//! interrogative and negative word order, contractions, and the full
//! keyword-to-sentence pipeline.

use serde::Serialize;

use crate::grammar::{split_subject_predicate, Binding, GrammarRule, NonTerminal, SyntaxTree};
use crate::lexicon::{
    inflect, Category, Gender, InflectionFeatures, Lexicon, Number, Person, Tense, WordClass,
};
use crate::planner::{main_verb, plan, Mood, Polarity, SentencePlan, TokenInfo};
use crate::prep::PrepModel;

/// Adverbs moved to the front of questions.
pub const WH_WORDS: [&str; 7] = ["where", "when", "why", "how", "how much", "how many", "what"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AgreementFeatures {
    pub person: Person,
    pub number: Number,
    pub gender: Gender,
}

impl Default for AgreementFeatures {
    fn default() -> Self {
        Self { person: Person::First, number: Number::Singular, gender: Gender::Masculine }
    }
}

struct Component {
    person: Person,
    number: Number,
    gender: Option<Gender>,
}

fn component(ns: &SyntaxTree, tokens: &[TokenInfo], lex: &Lexicon) -> Option<Component> {
    for child in ns.children() {
        let SyntaxTree::Leaf { category, binding } = child else { continue };
        let token = match binding {
            Binding::Input(i) => tokens.get(*i),
            _ => None,
        };
        match category {
            Category::Pronoun => {
                let entry = match binding {
                    Binding::Inserted(w) => lex.get(w, Category::Pronoun),
                    _ => token.and_then(|t| t.matched(Category::Pronoun)).map(|m| &m.entry),
                };
                let features = match entry.map(|e| &e.class) {
                    Some(WordClass::Pronoun(p)) => p.clone(),
                    _ => Default::default(),
                };
                let default_person =
                    if matches!(binding, Binding::Inserted(_)) { Person::First } else { Person::Third };
                return Some(Component {
                    person: features.person.unwrap_or(default_person),
                    number: features.number.unwrap_or(Number::Singular),
                    gender: features.gender,
                });
            }
            Category::Noun => {
                let m = token.and_then(|t| t.matched(Category::Noun));
                let number = m
                    .and_then(|m| m.features.number)
                    .or_else(|| match m.map(|m| &m.entry.class) {
                        Some(WordClass::Noun(n)) => Some(n.number),
                        _ => None,
                    })
                    .unwrap_or(Number::Singular);
                return Some(Component { person: Person::Third, number, gender: None });
            }
            Category::ProperNoun => {
                return Some(Component { person: Person::Third, number: Number::Singular, gender: None });
            }
            _ => {}
        }
    }
    None
}

/// Person, number and gender the subject imposes on the verb. A
/// coordinated subject is plural; person is first if any conjunct is first
/// person, else second if any is second, else third; gender is feminine
/// only if every conjunct is.
pub fn derive_agreement(subject: Option<&SyntaxTree>, tokens: &[TokenInfo], lex: &Lexicon) -> AgreementFeatures {
    let Some(subject) = subject else { return AgreementFeatures::default() };
    let coordinated = subject.is(NonTerminal::Cns);
    let conjuncts: Vec<&SyntaxTree> = if coordinated {
        subject.children().iter().filter(|c| c.is(NonTerminal::Ns)).collect()
    } else {
        vec![subject]
    };
    let parts: Vec<Component> = conjuncts.iter().filter_map(|ns| component(ns, tokens, lex)).collect();
    if parts.is_empty() {
        return AgreementFeatures::default();
    }
    let number = if coordinated || parts.iter().any(|p| p.number == Number::Plural) {
        Number::Plural
    } else {
        Number::Singular
    };
    let person = if parts.iter().any(|p| p.person == Person::First) {
        Person::First
    } else if parts.iter().any(|p| p.person == Person::Second) {
        Person::Second
    } else {
        Person::Third
    };
    let gender = if parts.iter().all(|p| p.gender == Some(Gender::Feminine)) {
        Gender::Feminine
    } else if parts.iter().all(|p| p.gender == Some(Gender::Neuter)) {
        Gender::Neuter
    } else {
        Gender::Masculine
    };
    AgreementFeatures { person, number, gender }
}

/// Tense of the first time adverb (or locution) in the tree; failing that,
/// past if the verb keyword was itself a past form; otherwise present.
pub fn derive_tense(tree: &SyntaxTree, tokens: &[TokenInfo]) -> Tense {
    let mut verb_tense = None;
    for (category, binding) in tree.leaves() {
        let Binding::Input(i) = binding else { continue };
        let Some(m) = tokens.get(*i).and_then(|t| t.matched(category)) else { continue };
        match (&m.entry.class, category) {
            (WordClass::Adverb(a), Category::Adverb) if a.tense.is_some() => return a.tense.unwrap(),
            (WordClass::Verb(_), Category::Verb) if verb_tense.is_none() => verb_tense = m.features.tense,
            _ => {}
        }
    }
    match verb_tense {
        Some(Tense::Past) => Tense::Past,
        _ => Tense::Present,
    }
}

/// Contraction list: `words<TAB>contracted`, longest match applied first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contractions {
    entries: Vec<(Vec<String>, String)>,
}

pub const BUNDLED_CONTRACTIONS: &str = include_str!("../data/contractions.tsv");

impl Contractions {
    pub fn parse(text: &str) -> Self {
        let mut entries: Vec<(Vec<String>, String)> = text
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .filter_map(|l| l.split_once('\t'))
            .map(|(from, to)| {
                (from.split_whitespace().map(str::to_lowercase).collect(), to.trim().to_string())
            })
            .collect();
        entries.sort_by_key(|e| std::cmp::Reverse(e.0.len()));
        Self { entries }
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_CONTRACTIONS)
    }

    pub fn contracted_forms(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(_, to)| to.as_str())
    }

    fn apply(&self, words: Vec<RealisedWord>, trace: &mut Vec<String>) -> Vec<RealisedWord> {
        let mut out: Vec<RealisedWord> = Vec::new();
        let mut i = 0;
        'outer: while i < words.len() {
            for (from, to) in &self.entries {
                let n = from.len();
                if i + n <= words.len() && words[i..i + n].iter().zip(from).all(|(w, f)| w.text.to_lowercase() == *f) {
                    let mut merged = words[i].clone();
                    merged.text = to.clone();
                    for w in &words[i + 1..i + n] {
                        merged.inputs.extend(&w.inputs);
                        if w.role == Role::Negation {
                            merged.role = Role::Negation;
                        }
                    }
                    if words[i..i + n].iter().any(|w| w.role == Role::Finite) {
                        merged.role = Role::Finite;
                    }
                    trace.push(format!("contraction: {} -> {to}", from.join(" ")));
                    out.push(merged);
                    i += n;
                    continue 'outer;
                }
            }
            out.push(words[i].clone());
            i += 1;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Subject,
    Finite,
    Verb,
    Negation,
    Wh,
    Other,
}

/// One output word and the keyword indices it realises.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealisedWord {
    pub text: String,
    pub inputs: Vec<usize>,
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub text: String,
    pub score: f64,
    pub words: Vec<RealisedWord>,
    /// Finite verb or auxiliary as inflected, before contraction.
    pub finite: Option<String>,
    pub plan: SentencePlan,
    pub trace: Vec<String>,
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn proper_noun(text: &str) -> String {
    text.split(' ').map(capitalize).collect::<Vec<_>>().join(" ")
}

fn surface(text: &str, category: Category) -> String {
    let lower = text.to_lowercase();
    match category {
        Category::ProperNoun => proper_noun(text),
        _ if lower == "i" => "I".to_string(),
        _ => lower,
    }
}

fn is_wh(word: &str, category: Category) -> bool {
    category == Category::Adverb && WH_WORDS.contains(&word.to_lowercase().as_str())
}

fn render(tree: &SyntaxTree, tokens: &[TokenInfo], role: Role, out: &mut Vec<RealisedWord>) {
    for (category, binding) in tree.leaves() {
        let (text, inputs) = match binding {
            Binding::Input(i) => (surface(&tokens[*i].text, category), vec![*i]),
            Binding::Inserted(w) => (surface(w, category), Vec::new()),
            Binding::Slot => continue,
        };
        let role = if is_wh(&text, category) { Role::Wh } else { role };
        out.push(RealisedWord { text, inputs, role });
    }
}

fn word(text: impl Into<String>, role: Role, inputs: Vec<usize>) -> RealisedWord {
    RealisedWord { text: text.into(), inputs, role }
}

fn do_form(lex: &Lexicon, features: InflectionFeatures) -> String {
    if let Some(entry) = lex.get("do", Category::Verb) {
        if let Ok(form) = inflect(entry, &features) {
            return form;
        }
    }
    match (features.tense, features.person, features.number) {
        (Tense::Past, _, _) => "did".into(),
        (_, Person::Third, Number::Singular) => "does".into(),
        _ => "do".into(),
    }
}

/// Turns a filled plan into text.
pub fn realise(plan: &SentencePlan, tokens: &[TokenInfo], lex: &Lexicon, contractions: Option<&Contractions>) -> Candidate {
    let mut trace = plan.trace.clone();
    let features = plan.features;
    let tense = plan.tense;
    trace.push(format!(
        "agreement: person={} number={} gender={}; tense={tense}",
        features.person, features.number, features.gender
    ));
    let (subject, predicate) = split_subject_predicate(&plan.tree);

    let mut subject_words = Vec::new();
    if let Some(s) = subject {
        render(s, tokens, Role::Subject, &mut subject_words);
    }
    let verb_index = main_verb(&plan.tree);
    let mut rest = Vec::new();
    let mut skipped_verb = false;
    for child in predicate.children() {
        if !skipped_verb && matches!(child, SyntaxTree::Leaf { category: Category::Verb, .. }) {
            skipped_verb = true;
            continue;
        }
        render(child, tokens, Role::Other, &mut rest);
    }

    let negative = plan.sentence_type.polarity == Polarity::Negative;
    let question = plan.sentence_type.mood == Mood::Interrogative;
    let imperative = subject.is_none();

    // words placed before the subject (question inversion) and after it
    let mut front: Vec<RealisedWord> = Vec::new();
    let mut group: Vec<RealisedWord> = Vec::new();
    let mut finite = None;

    let verb_entry = verb_index.and_then(|i| tokens[i].matched(Category::Verb)).map(|m| &m.entry);
    match (verb_index, verb_entry) {
        (Some(vi), Some(entry)) => {
            let base = entry.lemma.clone();
            let is_be = base == "be";
            let inflection = InflectionFeatures::new(features.person, features.number, tense);
            let not = || word("not", Role::Negation, Vec::new());
            if imperative {
                if negative {
                    group.push(word("do", Role::Finite, Vec::new()));
                    group.push(not());
                }
                group.push(word(base.clone(), if negative { Role::Verb } else { Role::Finite }, vec![vi]));
                finite = Some(if negative { "do".to_string() } else { base.clone() });
            } else if tense == Tense::Future {
                let aux = word("will", Role::Finite, Vec::new());
                finite = Some("will".to_string());
                if question { front.push(aux) } else { group.push(aux) }
                if negative {
                    group.push(not());
                }
                group.push(word(base.clone(), Role::Verb, vec![vi]));
            } else if is_be || (!negative && !question) {
                match inflect(entry, &inflection) {
                    Ok(form) => {
                        finite = Some(form.clone());
                        let w = word(form, Role::Finite, vec![vi]);
                        if question { front.push(w) } else { group.push(w) }
                        if negative {
                            group.push(not());
                        }
                    }
                    Err(e) => {
                        trace.push(format!("warning: {e}; rendered as a proper noun"));
                        group.push(word(proper_noun(&tokens[vi].text), Role::Finite, vec![vi]));
                    }
                }
            } else {
                let aux = do_form(lex, inflection);
                trace.push(format!("do-support: {aux}"));
                finite = Some(aux.clone());
                let aux = word(aux, Role::Finite, Vec::new());
                if question { front.push(aux) } else { group.push(aux) }
                if negative {
                    group.push(not());
                }
                group.push(word(base.clone(), Role::Verb, vec![vi]));
            }
        }
        (Some(vi), None) => {
            group.push(word(proper_noun(&tokens[vi].text), Role::Finite, vec![vi]));
        }
        _ => {}
    }

    let mut words = Vec::new();
    if question {
        let mut wh = Vec::new();
        subject_words.retain(|w: &RealisedWord| if w.role == Role::Wh { wh.push(w.clone()); false } else { true });
        rest.retain(|w: &RealisedWord| if w.role == Role::Wh { wh.push(w.clone()); false } else { true });
        if !wh.is_empty() {
            trace.push(format!(
                "wh-fronting: {}",
                wh.iter().map(|w| w.text.as_str()).collect::<Vec<_>>().join(" ")
            ));
        }
        words.extend(wh);
    }
    words.extend(front);
    words.extend(subject_words);
    words.extend(group);
    words.extend(rest);

    if let Some(c) = contractions {
        words = c.apply(words, &mut trace);
    }

    let mut text = words.iter().map(|w| w.text.as_str()).collect::<Vec<_>>().join(" ");
    text = capitalize(&text);
    text.push(if question { '?' } else { '.' });
    trace.push(format!("realised: {text}"));
    Candidate { text, score: plan.score, words, finite, plan: plan.clone(), trace }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpandOptions {
    pub top_k: usize,
    pub contractions: bool,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        Self { top_k: 5, contractions: true }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Expansion {
    pub candidates: Vec<Candidate>,
    pub diagnostics: Vec<String>,
    /// Keywords after sentence-type markers were removed and locutions
    /// joined.
    pub tokens: Vec<TokenInfo>,
}

/// Runs the whole pipeline on one keyword list.
pub fn expand(
    keywords: &[String],
    lex: &Lexicon,
    model: &PrepModel,
    rules: &[GrammarRule],
    options: &ExpandOptions,
) -> Expansion {
    let planning = plan(keywords, lex, model, rules);
    let mut out = Expansion { diagnostics: planning.diagnostics, ..Default::default() };
    let tokens = planning.tokens;
    let plans = planning.plans;

    let contractions = options.contractions.then(Contractions::bundled);
    let mut seen = std::collections::HashSet::new();
    for plan in &plans {
        if out.candidates.len() >= options.top_k {
            break;
        }
        let candidate = realise(plan, &tokens, lex, contractions.as_ref());
        if seen.insert(candidate.text.clone()) {
            out.candidates.push(candidate);
        }
    }
    out.tokens = tokens;
    out
}
