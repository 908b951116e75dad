//! Acceptance report: one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use proptest::strategy::Strategy;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use common::{Check, Resources};
use expando::corpus::parse_corpus;
use expando::eval::{accuracy, krippendorff_alpha, regenerate_and_match};
use expando::grammar::{parse_with, Binding, NonTerminal, ParseToken, SyntaxTree};
use expando::lexicon::{Category, SemanticTag};
use expando::planner::{analyse, detect_type, plan};
use expando::prep::{train, PrepChoice};
use expando::realiser::{expand, ExpandOptions};
use expando::seed;

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run_property<S: Strategy>(cases: u32, strategy: S, check: impl Fn(S::Value) -> Check) -> Check {
    runner(cases)
        .run(&strategy, |v| check(v).map_err(TestCaseError::fail))
        .map_err(|e| e.to_string())
}

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, name: &str, result: Check, elapsed: Duration) {
        match result {
            Ok(()) => println!("PASS  {name}  ({:.3}s)", elapsed.as_secs_f64()),
            Err(why) => {
                self.failed += 1;
                println!("FAIL  {name}  ({:.3}s): {why}", elapsed.as_secs_f64());
            }
        }
    }

    fn timed(&mut self, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Check) {
        let start = Instant::now();
        let mut result = f();
        let elapsed = start.elapsed();
        if let (Ok(()), Some(limit)) = (&result, limit) {
            if elapsed > limit {
                result = Err(format!("took {:.3}s, limit {:.3}s", elapsed.as_secs_f64(), limit.as_secs_f64()));
            }
        }
        self.line(name, result, elapsed);
    }
}

fn prep_exactness() -> Check {
    let corpus = parse_corpus(common::LOOK_CORPUS).map_err(|e| e.to_string())?;
    let model = train(&corpus, &seed::lexicon());
    let checks = [
        ("at", SemanticTag::Object, PrepChoice::Word("at".into()), (2, 3)),
        ("EMPTY", SemanticTag::Object, PrepChoice::Empty, (1, 3)),
        ("like", SemanticTag::Living, PrepChoice::Word("like".into()), (1, 1)),
    ];
    let mut shown = Vec::new();
    for (name, tag, choice, expected) in checks {
        let got = model.fraction("look", tag, &choice);
        if got != Some(expected) {
            return Err(format!("P({name}|look,{tag}) = {got:?}, expected {}/{}", expected.0, expected.1));
        }
        let p = model.probability("look", tag, &choice);
        if (p - expected.0 as f64 / expected.1 as f64).abs() > 1e-9 {
            return Err(format!("P({name}|look,{tag}) = {p}"));
        }
        shown.push(format!("P({name}|look,{tag})={}/{}", expected.0, expected.1));
    }
    println!("      {}", shown.join("  "));
    Ok(())
}

fn golden_suite(res: &Resources) -> Check {
    for (words, target) in common::GOLDEN {
        let e = expand(&common::strings(words), &res.lex, &res.model, &res.rules, &ExpandOptions::default());
        let top = e.candidates.first().map(|c| c.text.as_str());
        if top != Some(target) {
            return Err(format!("{words:?} gave {top:?}, expected {target:?}"));
        }
    }
    Ok(())
}

/// True for the tree whose predicate is `verb PS(prep NS(det noun))`, or
/// `verb NS(det noun)` when `with_ps` is false.
fn is_figure_tree(tree: &SyntaxTree, with_ps: bool) -> bool {
    let (subject, predicate) = expando::grammar::split_subject_predicate(tree);
    let subject_ok = subject.is_some_and(|s| {
        s.is(NonTerminal::Ns) && s.leaves() == [(Category::Pronoun, &Binding::Input(0))]
    });
    let parts = predicate.children();
    let object = |ns: &SyntaxTree| {
        ns.is(NonTerminal::Ns)
            && ns.leaves() == [(Category::Determiner, &Binding::Slot), (Category::Noun, &Binding::Input(2))]
    };
    let rest_ok = match parts {
        [SyntaxTree::Leaf { category: Category::Verb, binding: Binding::Input(1) }, x] if with_ps => {
            x.is(NonTerminal::Ps)
                && matches!(x.children(), [SyntaxTree::Leaf { category: Category::Preposition, binding: Binding::Slot }, ns] if object(ns))
        }
        [SyntaxTree::Leaf { category: Category::Verb, binding: Binding::Input(1) }, ns] if !with_ps => object(ns),
        _ => false,
    };
    subject_ok && rest_ok
}

fn running_example(res: &Resources) -> Check {
    let words = common::strings(&["she", "look", "picture"]);
    let planning = plan(&words, &res.lex, &res.model, &res.rules);
    if !planning.trees.iter().any(|t| is_figure_tree(t, true)) {
        return Err("no tree with the prepositional complement".into());
    }
    if !planning.trees.iter().any(|t| is_figure_tree(t, false)) {
        return Err("no tree with the direct object".into());
    }
    let e = expand(&words, &res.lex, &res.model, &res.rules, &ExpandOptions::default());
    let texts: Vec<&str> = e.candidates.iter().map(|c| c.text.as_str()).collect();
    if texts.first() != Some(&"She looks at the picture.") {
        return Err(format!("first candidate {:?}", texts.first()));
    }
    if !texts.contains(&"She looks the picture.") {
        return Err(format!("'She looks the picture.' missing from {texts:?}"));
    }
    println!("      {}", texts.join(" | "));
    Ok(())
}

fn published_matrix() -> Check {
    let cm = common::published_matrix();
    let alpha = krippendorff_alpha(&cm).map_err(|e| e.to_string())?;
    let acc = accuracy(&cm).map_err(|e| e.to_string())?;
    println!("      alpha={alpha:.4} accuracy={acc:.4} (n={}, diagonal={})", cm.n, cm.diagonal());
    if (alpha - 0.582).abs() > 0.001 {
        return Err(format!("alpha {alpha}"));
    }
    if (acc - 0.691).abs() > 0.001 {
        return Err(format!("accuracy {acc}"));
    }
    Ok(())
}

fn desk_scale(res: &Resources) -> Check {
    let mut problems = Vec::new();
    let mut note = |name: &str, result: Check| {
        match &result {
            Ok(()) => println!("      ok    {name}"),
            Err(e) => println!("      fail  {name}: {e}"),
        }
        if let Err(e) = result {
            problems.push(format!("{name}: {e}"));
        }
    };

    let report = regenerate_and_match(&seed::golden_corpus(), &res.lex, &res.model, &res.rules, &ExpandOptions::default());
    note(
        &format!("golden corpus regeneration: {}", report.summary()),
        if report.exact == report.total && report.total > 0 { Ok(()) } else { Err("not every sentence regenerated".into()) },
    );

    note("builder: merge/verify/round trip on 300 random source sets", run_property(
        300,
        (common::source_sets(), proptest::collection::vec(proptest::bool::ANY, 1..6)),
        |(sets, mask)| common::check_builder(&sets, &mask),
    ));
    note("builder: double build of the seed is identical and matches data/", (|| {
        let a = seed::rebuild().map_err(|e| e.to_string())?;
        let b = seed::rebuild().map_err(|e| e.to_string())?;
        let xml = expando::lexicon::serialize_lexicon(&a.lexicon);
        if xml != expando::lexicon::serialize_lexicon(&b.lexicon) || a.report.to_string() != b.report.to_string() {
            return Err("two builds differ".into());
        }
        if xml != seed::LEXICON_XML {
            return Err("bundled lexicon.xml is stale".into());
        }
        if a.report.verified_total() != a.lexicon.len() {
            return Err("report totals differ from the lexicon size".into());
        }
        Ok(())
    })());

    note("grammar: leaf order, depth bound, determinism on 1000 random token sequences", run_property(
        1000,
        common::parse_tokens(),
        |tokens| common::check_grammar(&tokens),
    ));
    note("grammar: every golden input parses", (|| {
        for (words, _) in common::GOLDEN {
            let (_, rest) = detect_type(&common::strings(words));
            let tokens = analyse(&rest, &res.lex);
            let parse: Vec<ParseToken> =
                tokens.iter().map(|t| ParseToken::new(t.text.clone(), t.categories())).collect();
            if parse_with(&res.rules, &parse).is_empty() {
                return Err(format!("{words:?} has no tree"));
            }
        }
        Ok(())
    })());

    note("realiser invariants on 1000 random keyword lists", run_property(
        1000,
        common::keyword_inputs(res.vocabulary()),
        |words| common::check_realiser(&words, res),
    ));
    note("realiser invariants on 1000 random subject-verb-object keyword lists", run_property(
        1000,
        common::svo_inputs(res),
        |words| common::check_realiser(&words, res),
    ));

    if problems.is_empty() {
        Ok(())
    } else {
        Err(problems.join("; "))
    }
}

fn coincidence_oracle() -> Check {
    run_property(100, common::reliability(), |rows| {
        let cm = expando::eval::coincidence(&rows);
        // with at most five annotators every cell is a whole number of twelfths
        let exact = common::brute_force_twelfths(&rows);
        for c in 0..6 {
            for d in 0..6 {
                let scaled = cm.cells[c][d] * 12.0;
                if scaled.round() as u64 != exact[c][d] || (scaled - scaled.round()).abs() > 1e-9 {
                    return Err(format!("cell ({c},{d}) = {}, oracle {}/12", cm.cells[c][d], exact[c][d]));
                }
            }
        }
        common::check_coincidence(&rows)
    })
}

fn main() {
    let res = Resources::seed();
    let mut report = Report { failed: 0 };
    report.timed("preposition model exactness on the four look sentences", Some(Duration::from_secs(1)), prep_exactness);
    report.timed("golden generation suite, top-ranked and byte-exact", Some(Duration::from_secs(1)), || golden_suite(&res));
    report.timed("running example: both structures, prepositional one first", None, || running_example(&res));
    report.timed("agreement metrics on the published coincidence matrix", Some(Duration::from_millis(100)), published_matrix);
    report.timed("desk-scale substitutes for the corpus-scale figures", None, || desk_scale(&res));
    report.timed("coincidence construction against brute force on 100 random matrices", None, coincidence_oracle);
    println!("{} criteria failed", report.failed);
    if report.failed > 0 {
        std::process::exit(1);
    }
}
