//! Strategies, oracles and invariant checks shared by the property suites
//! and the acceptance harness.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use proptest::collection::{btree_map, btree_set, vec};
use proptest::prelude::*;

use expando::builder::{merge, verify, Dictionary};
use expando::eval::{CoincidenceMatrix, ErrorTag};
use expando::grammar::{builtin_rules, GrammarRule, ParseToken, SyntaxTree};
use expando::lexicon::*;
use expando::planner::{detect_type, plan, Mood, Polarity, TokenInfo};
use expando::prep::PrepModel;
use expando::realiser::{derive_agreement, expand, Candidate, ExpandOptions, WH_WORDS};
use expando::seed;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

// ---------------------------------------------------------------- lexicon

pub fn word() -> impl Strategy<Value = String> {
    "[a-z][a-z'&<]{0,7}"
}

fn opt_word() -> impl Strategy<Value = Option<String>> {
    proptest::option::of(word())
}

pub fn tag() -> impl Strategy<Value = SemanticTag> {
    prop::sample::select(SemanticTag::ALL.to_vec())
}

fn number() -> impl Strategy<Value = Number> {
    prop_oneof![Just(Number::Singular), Just(Number::Plural)]
}

pub fn word_class() -> impl Strategy<Value = WordClass> {
    let noun = (number(), opt_word(), proptest::option::of(tag()))
        .prop_map(|(number, plural, semantic_tag)| WordClass::Noun(NounForms { number, plural, semantic_tag }));
    let pronoun = (
        proptest::option::of(prop::sample::select(vec![Person::First, Person::Second, Person::Third])),
        proptest::option::of(number()),
        proptest::option::of(prop::sample::select(vec![Gender::Masculine, Gender::Feminine, Gender::Neuter])),
    )
        .prop_map(|(person, number, gender)| WordClass::Pronoun(PronounFeatures { person, number, gender }));
    let verb = (
        vec(opt_word(), 7),
        btree_map(tag(), word(), 0..3),
    )
        .prop_map(|(f, prepositions)| {
            WordClass::Verb(VerbForms {
                present3s: f[0].clone(),
                past: f[1].clone(),
                present_participle: f[2].clone(),
                past_participle: f[3].clone(),
                present1s: f[4].clone(),
                present_plural: f[5].clone(),
                past_plural: f[6].clone(),
                prepositions,
            })
        });
    let adverb = proptest::option::of(prop::sample::select(vec![Tense::Present, Tense::Past, Tense::Future]))
        .prop_map(|tense| WordClass::Adverb(AdverbInfo { tense }));
    let det = opt_word().prop_map(|plural| WordClass::Determiner(DeterminerForms { plural }));
    prop_oneof![
        noun,
        pronoun,
        verb,
        Just(WordClass::Adjective),
        adverb,
        Just(WordClass::Conjunction),
        det,
        Just(WordClass::Preposition),
    ]
}

fn sources() -> impl Strategy<Value = BTreeSet<String>> {
    btree_set(prop::sample::select(vec!["enlex".to_string(), "nih".into(), "freeling".into()]), 0..3)
}

pub fn entry() -> impl Strategy<Value = LexEntry> {
    (word(), word_class(), sources()).prop_map(|(lemma, class, sources)| LexEntry { lemma, class, sources })
}

fn dedup(entries: Vec<LexEntry>) -> Vec<LexEntry> {
    let mut seen = BTreeSet::new();
    entries.into_iter().filter(|e| seen.insert((e.lemma.clone(), e.category()))).collect()
}

pub fn lexicon() -> impl Strategy<Value = Lexicon> {
    vec(entry(), 0..12).prop_map(|e| Lexicon::new(dedup(e)).expect("deduplicated entries"))
}

// ---------------------------------------------------------------- builder

/// Entry sets over a small lemma pool so that keys collide across sets.
pub fn source_sets() -> impl Strategy<Value = Vec<Vec<LexEntry>>> {
    let small = (
        prop::sample::select(vec!["look", "run", "dream", "house", "glass", "red"]),
        prop::sample::select(vec![Category::Noun, Category::Verb, Category::Adjective]),
        prop::sample::select(vec![None, Some("x"), Some("y")]),
        proptest::option::of(tag()),
    )
        .prop_map(|(lemma, cat, form, tag)| {
            let form = form.map(|f| format!("{lemma}{f}"));
            let class = match cat {
                Category::Noun => WordClass::Noun(NounForms { plural: form, semantic_tag: tag, ..Default::default() }),
                Category::Verb => WordClass::Verb(VerbForms { past: form, ..Default::default() }),
                _ => WordClass::Adjective,
            };
            LexEntry::new(lemma, class)
        });
    vec(vec(small, 0..8), 1..4).prop_map(|sets| {
        sets.into_iter()
            .enumerate()
            .map(|(i, set)| dedup(set).into_iter().map(|e| e.with_source(format!("s{i}"))).collect())
            .collect()
    })
}

fn keys(entries: &[LexEntry]) -> BTreeSet<(String, Category)> {
    entries.iter().map(|e| (e.lemma.clone(), e.category())).collect()
}

pub fn check_builder(sets: &[Vec<LexEntry>], dictionary_mask: &[bool]) -> Check {
    let priority: Vec<String> = (0..sets.len()).map(|i| format!("s{i}")).collect();
    let merged = merge(sets, &priority);
    let all: BTreeSet<_> = sets.iter().flat_map(|s| keys(s)).collect();
    ensure!(keys(&merged.entries) == all, "merge lost or invented keys");

    let mut reversed_sets = sets.to_vec();
    reversed_sets.reverse();
    let reversed = merge(&reversed_sets, &priority);
    ensure!(keys(&reversed.entries) == all, "merge key set depends on input order");
    // with an explicit priority list the input order does not matter at all
    let by_key = |m: &[LexEntry]| -> BTreeMap<(String, Category), WordClass> {
        m.iter().map(|e| ((e.lemma.clone(), e.category()), e.class.clone())).collect()
    };
    ensure!(by_key(&merged.entries) == by_key(&reversed.entries), "priority did not fix the field values");
    ensure!(merge(sets, &priority).entries == merged.entries, "merge is not deterministic");

    let attested: Vec<LexEntry> = merged
        .entries
        .iter()
        .zip(dictionary_mask.iter().cycle())
        .filter(|(_, keep)| **keep)
        .map(|(e, _)| e.clone())
        .collect();
    let dictionary = Dictionary::permissive(&attested);
    let verified = verify(&merged.entries, &dictionary);
    ensure!(verified.iter().all(|e| merged.entries.contains(e)), "verify invented an entry");
    ensure!(keys(&verified) == keys(&attested), "verify kept an unattested entry or dropped an attested one");

    let lex = Lexicon::new(verified).map_err(|e| e.to_string())?;
    let back = parse_lexicon(&serialize_lexicon(&lex)).map_err(|e| e.to_string())?;
    ensure!(back == lex, "built lexicon does not survive a round trip");
    Ok(())
}

// ---------------------------------------------------------------- grammar

pub fn parse_tokens() -> impl Strategy<Value = Vec<ParseToken>> {
    let cats = vec![
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
    vec(btree_set(prop::sample::select(cats), 1..3), 1..8).prop_map(|toks| {
        toks.into_iter().enumerate().map(|(i, c)| ParseToken::new(format!("w{i}"), c)).collect()
    })
}

/// Inner nodes with labels, for the nesting check below.
fn ps_ns_ps(tree: &SyntaxTree, path: &mut Vec<&'static str>) -> bool {
    if let SyntaxTree::Branch { label, children } = tree {
        path.push(label.as_str());
        let n = path.len();
        if n >= 3 && path[n - 3..] == ["PS", "NS", "PS"] {
            return true;
        }
        let found = children.iter().any(|c| ps_ns_ps(c, path));
        path.pop();
        return found;
    }
    false
}

pub fn check_grammar(tokens: &[ParseToken]) -> Check {
    let rules = builtin_rules();
    let trees = expando::grammar::parse_with(&rules, tokens);
    ensure!(trees == expando::grammar::parse_with(&rules, tokens), "parse is not deterministic");
    let expected: Vec<usize> = (0..tokens.len()).collect();
    for t in &trees {
        ensure!(t.bound_inputs() == expected, "leaves {:?} do not reproduce the input in {t}", t.bound_inputs());
        ensure!(!ps_ns_ps(t, &mut Vec::new()), "PS inside NS inside PS in {t}");
        ensure!(t.is(expando::grammar::NonTerminal::Sentence), "root is not SENTENCE in {t}");
    }
    Ok(())
}

// ---------------------------------------------------------------- realiser

pub struct Resources {
    pub lex: Lexicon,
    pub model: PrepModel,
    pub rules: Vec<GrammarRule>,
}

impl Resources {
    pub fn seed() -> Self {
        Self { lex: seed::lexicon(), model: seed::prep_model(), rules: builtin_rules() }
    }

    /// Every lemma and inflected form in the lexicon, plus markers and two
    /// unknown words.
    pub fn vocabulary(&self) -> Vec<String> {
        let mut words: BTreeSet<String> = BTreeSet::new();
        for e in self.lex.entries() {
            for (_, f) in e.forms() {
                words.insert(f.to_string());
            }
        }
        words.extend(["not", "?", "paris", "maria"].map(String::from));
        words.into_iter().collect()
    }
}

pub fn keyword_inputs(vocabulary: Vec<String>) -> impl Strategy<Value = Vec<String>> {
    vec(prop::sample::select(vocabulary), 1..7)
}

/// Keyword lists built from a tiny SVO template, so that most of them parse.
pub fn svo_inputs(res: &Resources) -> impl Strategy<Value = Vec<String>> {
    let of = |cat: Category| -> Vec<String> {
        let mut v: Vec<String> = res.lex.by_category(cat).map(|e| e.lemma.clone()).collect();
        if cat == Category::Noun {
            v.extend(res.lex.by_category(cat).filter_map(|e| match &e.class {
                WordClass::Noun(n) => n.plural.clone(),
                _ => None,
            }));
        }
        v
    };
    let subject = prop::sample::select([of(Category::Pronoun), of(Category::Noun)].concat());
    let verb = prop::sample::select(
        res.lex.entries().iter().filter(|e| e.category() == Category::Verb).flat_map(|e| e.forms().into_iter().map(|(_, f)| f.to_string())).collect::<Vec<_>>(),
    );
    let object = proptest::option::of((
        proptest::option::of(prop::sample::select(of(Category::Determiner))),
        proptest::option::of(prop::sample::select(of(Category::Adjective))),
        prop::sample::select(of(Category::Noun)),
    ));
    let adverb = proptest::option::of(prop::sample::select(of(Category::Adverb)));
    let markers = (any::<bool>(), any::<bool>());
    (proptest::option::of(subject), verb, object, adverb, markers).prop_map(|(s, v, o, a, (neg, q))| {
        let mut out = Vec::new();
        out.extend(s);
        if neg {
            out.push("not".to_string());
        }
        out.push(v);
        if let Some((d, adj, n)) = o {
            out.extend(d);
            out.extend(adj);
            out.push(n);
        }
        out.extend(a);
        if q {
            out.push("?".to_string());
        }
        out
    })
}

fn contraction_pairs() -> Vec<(String, String)> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/contractions.tsv")).unwrap();
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .filter_map(|l| l.split_once('\t'))
        .map(|(a, b)| (a.to_lowercase(), b.trim().to_lowercase()))
        .collect()
}

/// Lowercased words of a sentence with contractions spelled out.
fn spelled_out(text: &str, pairs: &[(String, String)]) -> Vec<String> {
    let body = text.trim_end_matches(['.', '?']).to_lowercase();
    body.split_whitespace()
        .flat_map(|w| {
            let full = pairs.iter().find(|(_, c)| c == w).map_or(w.to_string(), |(f, _)| f.clone());
            full.split_whitespace().map(String::from).collect::<Vec<_>>()
        })
        .collect()
}

fn surface_forms(token: &TokenInfo) -> Vec<Vec<String>> {
    let mut forms: BTreeSet<String> = BTreeSet::from([token.text.to_lowercase()]);
    for m in &token.matches {
        forms.extend(m.entry.forms().into_iter().map(|(_, f)| f.to_lowercase()));
    }
    forms.into_iter().map(|f| f.split_whitespace().map(String::from).collect()).collect()
}

fn find_from(words: &[String], start: usize, forms: &[Vec<String>]) -> Option<usize> {
    (start..words.len()).find(|&i| forms.iter().any(|f| words.len() >= i + f.len() && words[i..i + f.len()] == f[..]))
}

/// Independent inflection of the finite verb from the stored forms.
fn expected_finite(verb: &LexEntry, person: Person, number: Number, tense: Tense) -> Option<String> {
    let WordClass::Verb(v) = &verb.class else { return None };
    let lemma = Some(verb.lemma.clone());
    let plural = number == Number::Plural;
    match tense {
        Tense::Future => Some("will".into()),
        Tense::Past if plural => v.past_plural.clone().or(v.past.clone()),
        Tense::Past if person == Person::Second => v.past_plural.clone().or(v.past.clone()),
        Tense::Past => v.past.clone(),
        Tense::Present if plural || person == Person::Second => v.present_plural.clone().or(lemma),
        Tense::Present if person == Person::First => v.present1s.clone().or(lemma),
        Tense::Present => v.present3s.clone(),
    }
}

fn check_candidate(c: &Candidate, tokens: &[TokenInfo], res: &Resources, negative: bool, question: bool) -> Check {
    let pairs = contraction_pairs();
    let words = spelled_out(&c.text, &pairs);
    let has_not = words.iter().any(|w| w == "not") || c.text.contains("n't");
    ensure!(negative == has_not, "negation marker mismatch in '{}'", c.text);
    ensure!(question == c.text.ends_with('?'), "question marker mismatch in '{}'", c.text);
    ensure!(c.text.ends_with('.') || c.text.ends_with('?'), "no final punctuation in '{}'", c.text);
    ensure!(c.text.chars().next().is_some_and(|ch| !ch.is_lowercase()), "not capitalized: '{}'", c.text);

    // every keyword is present, and keywords that are not moved by question
    // word order appear in input order
    let mut cursor = 0;
    for t in tokens {
        let forms = surface_forms(t);
        ensure!(find_from(&words, 0, &forms).is_some(), "keyword '{}' missing from '{}'", t.text, c.text);
        let movable = question
            && t.matches.iter().any(|m| {
                m.category == Category::Verb || (m.category == Category::Adverb && WH_WORDS.contains(&m.entry.lemma.as_str()))
            });
        if !movable {
            let at = find_from(&words, cursor, &forms)
                .ok_or_else(|| format!("keyword '{}' out of order in '{}'", t.text, c.text))?;
            cursor = at + 1;
        }
    }

    // agreement fixed point
    let plan = &c.plan;
    let (subject, _) = expando::grammar::split_subject_predicate(&plan.tree);
    if let Some(subject) = subject {
        let again = derive_agreement(Some(subject), tokens, &res.lex);
        ensure!(again == plan.features, "agreement changed on re-derivation for '{}'", c.text);
        if let Some(vi) = expando::planner::main_verb(&plan.tree) {
            if let Some(m) = tokens[vi].matched(Category::Verb) {
                let is_be = m.entry.lemma == "be";
                let direct = is_be || plan.tense == Tense::Future || (!negative && !question);
                let expected = if direct {
                    expected_finite(&m.entry, plan.features.person, plan.features.number, plan.tense)
                } else {
                    let d = res.lex.get("do", Category::Verb).expect("seed lexicon has 'do'");
                    expected_finite(d, plan.features.person, plan.features.number, plan.tense)
                };
                ensure!(c.finite == expected, "finite {:?} but expected {:?} in '{}'", c.finite, expected, c.text);
            }
        }
    }
    Ok(())
}

pub fn check_realiser(keywords: &[String], res: &Resources) -> Check {
    let opts = ExpandOptions::default();
    let first = expand(keywords, &res.lex, &res.model, &res.rules, &opts);
    let second = expand(keywords, &res.lex, &res.model, &res.rules, &opts);
    let texts = |e: &expando::realiser::Expansion| -> Vec<(String, f64)> {
        e.candidates.iter().map(|c| (c.text.clone(), c.score)).collect()
    };
    ensure!(texts(&first) == texts(&second), "expand is not deterministic for {keywords:?}");
    ensure!(first.candidates.windows(2).all(|w| w[0].score >= w[1].score), "candidates not sorted for {keywords:?}");
    let unique: BTreeSet<&str> = first.candidates.iter().map(|c| c.text.as_str()).collect();
    ensure!(unique.len() == first.candidates.len(), "duplicate candidate texts for {keywords:?}");

    let (ty, rest) = detect_type(keywords);
    let again = detect_type(&rest);
    ensure!(again.1 == rest && again.0.polarity == Polarity::Affirmative, "detect_type is not stable for {keywords:?}");
    let negative = ty.polarity == Polarity::Negative;
    let question = ty.mood == Mood::Interrogative;
    for c in &first.candidates {
        check_candidate(c, &first.tokens, res, negative, question).map_err(|e| format!("{e} (input {keywords:?})"))?;
    }

    let off = ExpandOptions { contractions: false, ..opts };
    let plain = expand(keywords, &res.lex, &res.model, &res.rules, &off);
    for c in &plain.candidates {
        ensure!(!c.text.contains('\''), "contraction with contractions off: '{}'", c.text);
    }

    let planning = plan(keywords, &res.lex, &res.model, &res.rules);
    for w in planning.plans.windows(2) {
        ensure!(
            expando::planner::compare_plans(&w[0], &w[1]) == std::cmp::Ordering::Less,
            "two plans compare equal or out of order for {keywords:?}"
        );
    }
    let n = planning.tokens.len();
    for p in &planning.plans {
        ensure!(p.tree.bound_inputs() == (0..n).collect::<Vec<_>>(), "plan drops keywords for {keywords:?}");
    }
    let explicit_subject = planning.tokens.first().is_some_and(|t| {
        t.categories() == [Category::Pronoun]
    });
    if explicit_subject {
        for p in &planning.plans {
            let inserted_i = p.tree.leaves().iter().any(|(c, b)| {
                *c == Category::Pronoun && matches!(b, expando::grammar::Binding::Inserted(w) if w == "i")
            });
            ensure!(!inserted_i, "default subject inserted despite explicit subject for {keywords:?}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- agreement

pub fn reliability() -> impl Strategy<Value = Vec<Vec<Option<ErrorTag>>>> {
    (2usize..=5, 1usize..=20).prop_flat_map(|(a, u)| {
        vec(vec(proptest::option::weighted(0.8, prop::sample::select(ErrorTag::ALL.to_vec())), u), a)
    })
}

/// Coincidences by explicit enumeration of ordered pairs of annotators.
pub fn brute_force_coincidence(rows: &[Vec<Option<ErrorTag>>]) -> Vec<Vec<f64>> {
    let mut cells = vec![vec![0.0; 6]; 6];
    let units = rows.iter().map(Vec::len).max().unwrap_or(0);
    for u in 0..units {
        let values: Vec<ErrorTag> = rows.iter().filter_map(|r| r[u]).collect();
        let m = values.len();
        if m < 2 {
            continue;
        }
        for (i, a) in values.iter().enumerate() {
            for (j, b) in values.iter().enumerate() {
                if i != j {
                    cells[a.index()][b.index()] += 1.0 / (m - 1) as f64;
                }
            }
        }
    }
    cells
}

/// Alpha as 1 - Do/De, with both disagreements computed from pair counts.
pub fn alpha_from_disagreement(cells: &[Vec<f64>]) -> Option<f64> {
    let n: f64 = cells.iter().flatten().sum();
    let marg: Vec<f64> = cells.iter().map(|r| r.iter().sum()).collect();
    let k = cells.len();
    let mut observed = 0.0;
    let mut expected = 0.0;
    for c in 0..k {
        for d in 0..k {
            if c != d {
                observed += cells[c][d];
                expected += marg[c] * marg[d];
            }
        }
    }
    let d_o = observed / n;
    let d_e = expected / (n * (n - 1.0));
    (n > 1.0 && d_e > 0.0).then(|| 1.0 - d_o / d_e)
}

pub fn check_coincidence(rows: &[Vec<Option<ErrorTag>>]) -> Check {
    let cm = expando::eval::coincidence(rows);
    let oracle = brute_force_coincidence(rows);
    for c in 0..6 {
        for d in 0..6 {
            ensure!((cm.cells[c][d] - oracle[c][d]).abs() <= 1e-12, "cell ({c},{d}) {} vs oracle {}", cm.cells[c][d], oracle[c][d]);
        }
    }
    ensure!(cm.is_symmetric(1e-9), "coincidence matrix not symmetric");
    let marginal_total: f64 = cm.marginals().iter().sum();
    ensure!((marginal_total - cm.n).abs() < 1e-9, "marginals do not sum to n");
    let alpha = expando::eval::krippendorff_alpha(&cm).ok();
    let reference = alpha_from_disagreement(&oracle);
    match (alpha, reference) {
        (Some(a), Some(r)) => {
            ensure!((a - r).abs() <= 1e-9, "alpha {a} vs Do/De {r}");
            ensure!(a <= 1.0 + 1e-12, "alpha above one");
        }
        (None, None) => {}
        (a, r) => return Err(format!("alpha defined mismatch: {a:?} vs {r:?}")),
    }
    if let Ok(acc) = expando::eval::accuracy(&cm) {
        ensure!((0.0..=1.0 + 1e-12).contains(&acc), "accuracy {acc} outside [0,1]");
        let off: f64 = cm.n - cm.diagonal();
        ensure!((acc == 1.0) == (off.abs() < 1e-12), "accuracy one iff no disagreement");
    }
    Ok(())
}

pub fn published_matrix() -> CoincidenceMatrix {
    CoincidenceMatrix::parse(seed::PUBLISHED_COINCIDENCE).expect("fixture parses")
}

// ---------------------------------------------------------------- golden

/// Keyword lists with their expected top candidate.
pub const GOLDEN: [(&[&str], &str); 8] = [
    (&["something", "be", "not", "right"], "Something isn't right."),
    (&["where", "my", "glasses", "be", "?"], "Where are my glasses?"),
    (&["dinner", "be", "good", "last", "night"], "Dinner was good last night."),
    (&["appreciate", "your", "help", "concern"], "I appreciate your help and concern."),
    (&["i", "live", "yellow", "house"], "I live in the yellow house."),
    (&["how much", "stamps", "be", "these", "days", "?"], "How much are stamps these days?"),
    (&["final", "grades", "be", "available", "after", "class", "today", "?"], "Are final grades available after class today?"),
    (&["she", "not", "look", "picture", "yesterday"], "She did not look at the picture yesterday."),
];

pub fn strings(words: &[&str]) -> Vec<String> {
    words.iter().map(|w| w.to_string()).collect()
}

/// The four training sentences of the running example.
pub const LOOK_CORPUS: &str = "\
I\ti\tpronoun\nlook\tlook\tverb\nthe\tthe\tdeterminer\nbusiness\tbusiness\tnoun\n.\t.\tpunct\n\n\
She\tshe\tpronoun\nlooks\tlook\tverb\nat\tat\tpreposition\nthe\tthe\tdeterminer\npicture\tpicture\tnoun\n.\t.\tpunct\n\n\
You\tyou\tpronoun\nlook\tlook\tverb\nat\tat\tpreposition\nthe\tthe\tdeterminer\ncar\tcar\tnoun\n.\t.\tpunct\n\n\
She\tshe\tpronoun\nlooks\tlook\tverb\nlike\tlike\tpreposition\nher\ther\tdeterminer\nmum\tmum\tnoun\n.\t.\tpunct\n";

/// Cells in twelfths: every weight 1/(m-1) with m <= 5 is a whole number of
/// twelfths, so the oracle is exact integer arithmetic.
pub fn brute_force_twelfths(rows: &[Vec<Option<ErrorTag>>]) -> Vec<Vec<u64>> {
    assert!(rows.len() <= 5);
    let mut cells = vec![vec![0u64; 6]; 6];
    let units = rows.iter().map(Vec::len).max().unwrap_or(0);
    for u in 0..units {
        let values: Vec<ErrorTag> = rows.iter().filter_map(|r| r[u]).collect();
        let m = values.len() as u64;
        if m < 2 {
            continue;
        }
        for (i, a) in values.iter().enumerate() {
            for (j, b) in values.iter().enumerate() {
                if i != j {
                    cells[a.index()][b.index()] += 12 / (m - 1);
                }
            }
        }
    }
    cells
}
