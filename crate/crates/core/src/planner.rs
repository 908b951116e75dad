//! Sentence planning: sentence type, keyword analysis, default subject,
//! and filling of the determiner, conjunction and preposition slots.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::grammar::{parse_with, split_subject_predicate, Binding, GrammarRule, NonTerminal, ParseToken, SyntaxTree};
use crate::lexicon::{Category, FormFeatures, FormKind, LexEntry, Lexicon, Number, SemanticTag, Tense, WordClass};
use crate::prep::{infer, PrepChoice, PrepModel};
use crate::realiser::{derive_agreement, derive_tense, AgreementFeatures};

/// Alternatives below this probability are dropped unless they are the most
/// probable choice.
pub const PREP_THRESHOLD: f64 = 0.2;
pub const DEFAULT_DETERMINER: &str = "the";
pub const DEFAULT_CONJUNCTION: &str = "and";
pub const DEFAULT_SUBJECT: &str = "i";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Affirmative,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mood {
    Declarative,
    Interrogative,
    Imperative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SentenceType {
    pub polarity: Polarity,
    pub mood: Mood,
}

impl fmt::Display for SentenceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.polarity {
            Polarity::Affirmative => "affirmative",
            Polarity::Negative => "negative",
        };
        let m = match self.mood {
            Mood::Declarative => "declarative",
            Mood::Interrogative => "interrogative",
            Mood::Imperative => "imperative",
        };
        write!(f, "{p} {m}")
    }
}

/// Strips `not` and `?` from the keywords and reports what they signalled.
pub fn detect_type(keywords: &[String]) -> (SentenceType, Vec<String>) {
    let mut negative = false;
    let mut question = false;
    let mut rest = Vec::new();
    for k in keywords {
        let k = k.trim();
        if k.eq_ignore_ascii_case("not") {
            negative = true;
        } else if k == "?" {
            question = true;
        } else if let Some(stem) = k.strip_suffix('?') {
            question = true;
            if !stem.trim().is_empty() {
                rest.push(stem.trim().to_string());
            }
        } else if !k.is_empty() {
            rest.push(k.to_string());
        }
    }
    let polarity = if negative { Polarity::Negative } else { Polarity::Affirmative };
    let mood = if question { Mood::Interrogative } else { Mood::Declarative };
    (SentenceType { polarity, mood }, rest)
}

/// A lexicon entry a keyword may stand for, and the form it matched.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TokenMatch {
    #[serde(skip)]
    pub entry: LexEntry,
    pub category: Category,
    #[serde(skip)]
    pub form: FormKind,
    #[serde(skip)]
    pub features: FormFeatures,
}

/// One analysed keyword. Unknown words have no matches and act as proper
/// nouns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TokenInfo {
    pub text: String,
    pub matches: Vec<TokenMatch>,
}

impl TokenInfo {
    pub fn categories(&self) -> Vec<Category> {
        if self.matches.is_empty() {
            return vec![Category::ProperNoun];
        }
        let mut cats: Vec<Category> = self.matches.iter().map(|m| m.category).collect();
        cats.sort();
        cats.dedup();
        cats
    }

    pub fn matched(&self, category: Category) -> Option<&TokenMatch> {
        self.matches.iter().find(|m| m.category == category)
    }

    pub fn is_known(&self) -> bool {
        !self.matches.is_empty()
    }
}

pub fn lookup_token(lex: &Lexicon, text: &str) -> TokenInfo {
    let matches = lex
        .lookup(text)
        .into_iter()
        .map(|m| TokenMatch {
            entry: m.entry.clone(),
            category: m.entry.category(),
            form: m.form,
            features: m.features,
        })
        .collect();
    TokenInfo { text: text.trim().to_string(), matches }
}

/// Longest keyword span joined into one lexicon form.
const MAX_LOCUTION: usize = 4;

/// Looks every keyword up, joining adjacent keywords that together form a
/// multiword lexicon entry ("last night", "how much").
pub fn analyse(keywords: &[String], lex: &Lexicon) -> Vec<TokenInfo> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < keywords.len() {
        let mut taken = 1;
        for len in (2..=MAX_LOCUTION.min(keywords.len() - i)).rev() {
            let joined = keywords[i..i + len].join(" ");
            if lex.contains_form(&joined) {
                taken = len;
                break;
            }
        }
        let text = keywords[i..i + taken].join(" ");
        out.push(lookup_token(lex, &text));
        i += taken;
    }
    out
}

/// Adds a default subject where no tree has one: each predicate-only tree
/// yields a variant with subject "I" followed by the bare imperative.
/// Returns trees paired with whether they are imperative variants.
pub fn insert_subject(trees: &[SyntaxTree]) -> Vec<(SyntaxTree, bool)> {
    let has_subject = |t: &SyntaxTree| split_subject_predicate(t).0.is_some();
    if trees.iter().any(has_subject) {
        return trees.iter().map(|t| (t.clone(), !has_subject(t))).collect();
    }
    let mut out = Vec::new();
    for tree in trees {
        let subject = SyntaxTree::Branch {
            label: NonTerminal::Subject,
            children: vec![SyntaxTree::Branch {
                label: NonTerminal::Ns,
                children: vec![SyntaxTree::Leaf {
                    category: Category::Pronoun,
                    binding: Binding::Inserted(DEFAULT_SUBJECT.to_string()),
                }],
            }],
        };
        let mut children = vec![subject];
        children.extend(tree.children().iter().cloned());
        out.push((SyntaxTree::Branch { label: NonTerminal::Sentence, children }, false));
        out.push((tree.clone(), true));
    }
    out
}

/// The word chosen for one open slot; `None` leaves the slot empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Filler {
    pub category: Category,
    pub word: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SentencePlan {
    pub sentence_type: SentenceType,
    /// Tree with every open slot replaced by its filler; empty fillers stay
    /// as `Slot` leaves and are not realised.
    pub tree: SyntaxTree,
    pub fillers: Vec<Filler>,
    pub features: AgreementFeatures,
    pub tense: Tense,
    pub score: f64,
    /// Position of the source tree in discovery order.
    pub tree_index: usize,
    pub trace: Vec<String>,
}

/// Total order: score descending, then tree discovery order, then fillers.
pub fn compare_plans(a: &SentencePlan, b: &SentencePlan) -> Ordering {
    b.score
        .partial_cmp(&a.score)
        .unwrap_or(Ordering::Equal)
        .then(a.tree_index.cmp(&b.tree_index))
        .then_with(|| a.fillers.cmp(&b.fillers))
}

/// Candidate words for one slot with their probabilities and a trace note.
struct SlotOptions {
    options: Vec<(Option<String>, f64)>,
    note: Option<String>,
}

/// Context needed to fill the slots of one tree.
struct Filling<'a> {
    tokens: &'a [TokenInfo],
    model: &'a PrepModel,
    verb: Option<String>,
    slots: Vec<SlotOptions>,
    factor: f64,
    trace: Vec<String>,
    failed: bool,
}

fn head_noun(ns: &SyntaxTree) -> Option<&SyntaxTree> {
    ns.children().iter().find(|c| matches!(c, SyntaxTree::Leaf { category, .. } if matches!(category, Category::Noun | Category::Pronoun | Category::ProperNoun)))
}

fn input_of(leaf: &SyntaxTree) -> Option<usize> {
    match leaf {
        SyntaxTree::Leaf { binding: Binding::Input(i), .. } => Some(*i),
        _ => None,
    }
}

impl Filling<'_> {
    fn noun_match(&self, ns: &SyntaxTree) -> Option<&TokenMatch> {
        let leaf = head_noun(ns)?;
        let SyntaxTree::Leaf { category: Category::Noun, .. } = leaf else { return None };
        self.tokens.get(input_of(leaf)?)?.matched(Category::Noun)
    }

    fn noun_tag(&self, ns: &SyntaxTree) -> Option<SemanticTag> {
        self.noun_match(ns).and_then(|m| m.entry.semantic_tag())
    }

    fn has_input_determiner(ns: &SyntaxTree) -> bool {
        ns.children()
            .iter()
            .any(|c| matches!(c, SyntaxTree::Leaf { category: Category::Determiner, binding: Binding::Input(_) }))
    }

    fn determiner_for(&self, ns: &SyntaxTree, shares_determiner: bool) -> (Option<String>, Option<String>) {
        if shares_determiner {
            return (None, Some("determiner shared with the first conjunct".into()));
        }
        let Some(m) = self.noun_match(ns) else { return (None, None) };
        let WordClass::Noun(n) = &m.entry.class else { return (None, None) };
        if m.features.number == Some(Number::Plural) {
            return (None, Some(format!("no determiner before plural '{}'", self.text_of(ns))));
        }
        if n.plural.is_none() && n.number == Number::Singular {
            return (None, Some(format!("no determiner before mass noun '{}'", self.text_of(ns))));
        }
        (Some(DEFAULT_DETERMINER.to_string()), None)
    }

    fn text_of(&self, ns: &SyntaxTree) -> String {
        head_noun(ns).and_then(input_of).and_then(|i| self.tokens.get(i)).map(|t| t.text.clone()).unwrap_or_default()
    }

    fn prep_options(&mut self, ns: &SyntaxTree, allow_empty: bool) -> SlotOptions {
        let verb = self.verb.clone().unwrap_or_default();
        let mut note = None;
        let ranked = match self.noun_tag(ns) {
            Some(tag) => infer(self.model, &verb, tag),
            None => {
                note = Some(format!("'{}' has no semantic tag; preposition defaults to EMPTY", self.text_of(ns)));
                vec![(PrepChoice::Empty, 1.0)]
            }
        };
        let options = ranked
            .iter()
            .enumerate()
            .filter(|(i, (_, p))| *i == 0 || *p >= PREP_THRESHOLD)
            .filter(|(_, (c, _))| allow_empty || *c != PrepChoice::Empty)
            .map(|(_, (c, p))| (c.word().map(str::to_string), *p))
            .collect();
        SlotOptions { options, note }
    }

    /// Probability that the verb takes `ns` with no preposition; `None` if
    /// that reading is filtered out.
    fn direct_object_factor(&self, ns: &SyntaxTree) -> Option<f64> {
        let Some(verb) = &self.verb else { return Some(1.0) };
        let ns = if ns.is(NonTerminal::Cns) { ns.children().first()? } else { ns };
        let Some(tag) = self.noun_tag(ns) else { return Some(1.0) };
        if self.model.outcomes(verb, tag).is_none() {
            return Some(1.0);
        }
        let ranked = infer(self.model, verb, tag);
        ranked
            .iter()
            .enumerate()
            .find(|(_, (c, _))| *c == PrepChoice::Empty)
            .filter(|(i, (_, p))| *i == 0 || *p >= PREP_THRESHOLD)
            .map(|(_, (_, p))| *p)
    }

    /// Collects slot options in leaf order.
    fn visit(&mut self, tree: &SyntaxTree, first_complement: bool, shares_determiner: bool) {
        match tree.label() {
            Some(NonTerminal::Ns) => {
                for child in tree.children() {
                    match child {
                        SyntaxTree::Leaf { category: Category::Determiner, binding: Binding::Slot } => {
                            let (word, note) = self.determiner_for(tree, shares_determiner);
                            self.slots.push(SlotOptions { options: vec![(word, 1.0)], note });
                        }
                        _ => self.visit(child, false, false),
                    }
                }
            }
            Some(NonTerminal::Cns) => {
                let children = tree.children();
                let first_has_det = children.first().is_some_and(Self::has_input_determiner);
                for (i, child) in children.iter().enumerate() {
                    match child {
                        SyntaxTree::Leaf { category: Category::Conjunction, binding: Binding::Slot } => {
                            self.slots.push(SlotOptions {
                                options: vec![(Some(DEFAULT_CONJUNCTION.to_string()), 1.0)],
                                note: None,
                            });
                        }
                        _ => self.visit(child, false, i == 2 && first_has_det),
                    }
                }
            }
            Some(NonTerminal::Ps) => {
                let ns = tree.children().iter().find(|c| c.is(NonTerminal::Ns));
                for child in tree.children() {
                    match child {
                        SyntaxTree::Leaf { category: Category::Preposition, binding: Binding::Slot } => {
                            let opts = match ns {
                                Some(ns) => self.prep_options(ns, first_complement),
                                None => SlotOptions { options: Vec::new(), note: None },
                            };
                            if opts.options.is_empty() {
                                self.failed = true;
                                self.trace.push("no admissible preposition".into());
                            }
                            self.slots.push(opts);
                        }
                        _ => self.visit(child, false, false),
                    }
                }
            }
            Some(NonTerminal::Predicate) => {
                let children = tree.children();
                let mut seen_object = false;
                let mut seen_ps = false;
                for child in children {
                    if (child.is(NonTerminal::Ns) || child.is(NonTerminal::Cns)) && !seen_object && !seen_ps {
                        match self.direct_object_factor(child) {
                            Some(p) => {
                                if p < 1.0 {
                                    self.trace.push(format!("direct object without preposition: p={p:.4}"));
                                }
                                self.factor *= p;
                            }
                            None => {
                                self.failed = true;
                                self.trace.push("verb does not take this object without a preposition".into());
                            }
                        }
                    }
                    let first = child.is(NonTerminal::Ps) && !seen_object && !seen_ps;
                    self.visit(child, first, false);
                    seen_object |= child.is(NonTerminal::Ns) || child.is(NonTerminal::Cns);
                    seen_ps |= child.is(NonTerminal::Ps);
                }
            }
            Some(_) => {
                for child in tree.children() {
                    self.visit(child, false, false);
                }
            }
            None => {}
        }
    }
}

/// Replaces the open slots of `tree` with `fillers`, in leaf order.
fn apply_fillers(tree: &SyntaxTree, fillers: &[Filler], next: &mut usize) -> SyntaxTree {
    match tree {
        SyntaxTree::Leaf { category, binding: Binding::Slot } => {
            let filler = &fillers[*next];
            *next += 1;
            let binding = match &filler.word {
                Some(w) => Binding::Inserted(w.clone()),
                None => Binding::Slot,
            };
            SyntaxTree::Leaf { category: *category, binding }
        }
        SyntaxTree::Leaf { .. } => tree.clone(),
        SyntaxTree::Branch { label, children } => SyntaxTree::Branch {
            label: *label,
            children: children.iter().map(|c| apply_fillers(c, fillers, next)).collect(),
        },
    }
}

/// The main verb's input index: first verb leaf of the predicate.
pub fn main_verb(tree: &SyntaxTree) -> Option<usize> {
    let (_, predicate) = split_subject_predicate(tree);
    predicate.children().iter().find_map(|c| match c {
        SyntaxTree::Leaf { category: Category::Verb, binding: Binding::Input(i) } => Some(*i),
        _ => None,
    })
}

/// All plans for one tree, best first. A tree whose prepositions cannot be
/// filled yields no plans.
pub fn fill_extras(
    tree: &SyntaxTree,
    sentence_type: SentenceType,
    tokens: &[TokenInfo],
    lex: &Lexicon,
    model: &PrepModel,
    tree_index: usize,
) -> Vec<SentencePlan> {
    let verb = main_verb(tree)
        .and_then(|i| tokens.get(i))
        .and_then(|t| t.matched(Category::Verb))
        .map(|m| m.entry.lemma.clone());
    let mut filling =
        Filling { tokens, model, verb, slots: Vec::new(), factor: 1.0, trace: Vec::new(), failed: false };
    filling.visit(tree, false, false);
    if filling.failed {
        log::debug!("tree {tree_index} pruned: {}", filling.trace.join("; "));
        return Vec::new();
    }

    let categories = tree.open_slots();
    debug_assert_eq!(categories.len(), filling.slots.len());
    let mut combos: Vec<(Vec<Filler>, f64)> = vec![(Vec::new(), filling.factor)];
    for (slot, category) in filling.slots.iter().zip(&categories) {
        let mut next = Vec::new();
        for (fillers, score) in &combos {
            for (word, p) in &slot.options {
                let mut fillers = fillers.clone();
                fillers.push(Filler { category: *category, word: word.clone() });
                next.push((fillers, score * p));
            }
        }
        combos = next;
    }

    let (subject, _) = split_subject_predicate(tree);
    let features = derive_agreement(subject, tokens, lex);
    let tense = derive_tense(tree, tokens);
    let mut notes: Vec<String> = filling.slots.iter().filter_map(|s| s.note.clone()).collect();
    notes.extend(filling.trace);

    let mut plans: Vec<SentencePlan> = combos
        .into_iter()
        .filter(|(_, score)| *score > 0.0)
        .map(|(fillers, score)| {
            let filled = apply_fillers(tree, &fillers, &mut 0);
            let mut trace = vec![format!("tree {tree_index}: {tree}")];
            trace.extend(notes.iter().cloned());
            for f in &fillers {
                trace.push(format!(
                    "{} slot: {}",
                    f.category,
                    f.word.as_deref().unwrap_or("(empty)")
                ));
            }
            trace.push(format!("score {score:.4}"));
            SentencePlan {
                sentence_type,
                tree: filled,
                fillers,
                features,
                tense,
                score,
                tree_index,
                trace,
            }
        })
        .collect();
    plans.sort_by(compare_plans);
    plans
}

/// Everything the planner produced for one keyword list.
#[derive(Debug, Clone, Default)]
pub struct Planning {
    pub sentence_type: Option<SentenceType>,
    pub tokens: Vec<TokenInfo>,
    pub trees: Vec<SyntaxTree>,
    /// Sorted with [`compare_plans`].
    pub plans: Vec<SentencePlan>,
    pub diagnostics: Vec<String>,
}

/// Detects the sentence type, parses the keywords and fills every tree.
pub fn plan(keywords: &[String], lex: &Lexicon, model: &PrepModel, rules: &[GrammarRule]) -> Planning {
    let mut out = Planning::default();
    let (sentence_type, rest) = detect_type(keywords);
    out.sentence_type = Some(sentence_type);
    if rest.is_empty() {
        out.diagnostics.push("no content words in the input".into());
        return out;
    }
    let tokens = analyse(&rest, lex);
    let parse_tokens: Vec<ParseToken> =
        tokens.iter().map(|t| ParseToken::new(t.text.clone(), t.categories())).collect();
    let trees = parse_with(rules, &parse_tokens);
    if trees.is_empty() {
        let unknown: Vec<&str> = tokens.iter().filter(|t| !t.is_known()).map(|t| t.text.as_str()).collect();
        let shape: Vec<String> = tokens
            .iter()
            .map(|t| {
                let cats: Vec<&str> = t.categories().iter().map(|c| c.as_str()).collect();
                format!("{}:{}", t.text, cats.join("|"))
            })
            .collect();
        out.diagnostics.push(format!("no syntax tree covers the input ({})", shape.join(" ")));
        if !unknown.is_empty() {
            out.diagnostics.push(format!("unknown words treated as proper nouns: {}", unknown.join(", ")));
        }
        out.tokens = tokens;
        return out;
    }

    let mut plans = Vec::new();
    for (index, (tree, imperative)) in insert_subject(&trees).into_iter().enumerate() {
        let mut ty = sentence_type;
        if imperative && ty.mood == Mood::Declarative {
            ty.mood = Mood::Imperative;
        }
        plans.extend(fill_extras(&tree, ty, &tokens, lex, model, index));
    }
    plans.sort_by(compare_plans);
    if plans.is_empty() {
        out.diagnostics.push("no plan could fill the required prepositions".into());
    }
    out.tokens = tokens;
    out.trees = trees;
    out.plans = plans;
    out
}
