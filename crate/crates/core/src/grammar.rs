//! Clause grammar and depth-first enumeration of syntax trees.
//!
//! Rules, in declaration order:
//!
//! ```text
//! SENTENCE  := SUBJECT PREDICATE | PREDICATE
//! SUBJECT   := NS | CNS
//! NS        := ADVS? determiner[ins] ADJS? noun (ADJS|ADVS)? PS?
//!            | ADVS? pronoun PS?
//!            | ADVS? proper_noun proper_noun* PS?
//! CNS       := NS conjunction[ins] NS
//! PS        := preposition[ins] NS
//! ADJS      := adverb adjective | adjective adverb | adjective
//! ADVS      := adverb
//! PREDICATE := verb (ADJS|ADVS)? PS*
//!            | verb (ADJS|ADVS)? (CNS|NS) PS*
//!            | verb (ADJS|ADVS)? NS NS PS*
//! ```
//!
//! `[ins]` marks an insertable slot: it binds an input word of
//! that category if one is there, and otherwise stays open for the planner.
//! An NS inside a PS takes no PS of its own.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::lexicon::Category;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NonTerminal {
    Sentence,
    Subject,
    Predicate,
    Ns,
    Cns,
    Ps,
    Adjs,
    Advs,
}

impl NonTerminal {
    pub fn as_str(self) -> &'static str {
        match self {
            NonTerminal::Sentence => "SENTENCE",
            NonTerminal::Subject => "SUBJECT",
            NonTerminal::Predicate => "PREDICATE",
            NonTerminal::Ns => "NS",
            NonTerminal::Cns => "CNS",
            NonTerminal::Ps => "PS",
            NonTerminal::Adjs => "ADJS",
            NonTerminal::Advs => "ADVS",
        }
    }
}

impl fmt::Display for NonTerminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    N(NonTerminal),
    T(Category),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    One,
    Optional,
    Many,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleItem {
    pub alternatives: Vec<Symbol>,
    pub quantity: Quantity,
    pub insertable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarRule {
    pub lhs: NonTerminal,
    pub rhs: Vec<RuleItem>,
}

impl fmt::Display for GrammarRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :=", self.lhs)?;
        for item in &self.rhs {
            let names: Vec<String> = item
                .alternatives
                .iter()
                .map(|s| match s {
                    Symbol::N(n) => n.to_string(),
                    Symbol::T(c) => c.to_string(),
                })
                .collect();
            let body = if names.len() > 1 { format!("({})", names.join("|")) } else { names[0].clone() };
            let mark = match (item.insertable, item.quantity) {
                (true, _) => "[ins]",
                (false, Quantity::One) => "",
                (false, Quantity::Optional) => "?",
                (false, Quantity::Many) => "*",
            };
            write!(f, " {body}{mark}")?;
        }
        Ok(())
    }
}

fn one(s: Symbol) -> RuleItem {
    RuleItem { alternatives: vec![s], quantity: Quantity::One, insertable: false }
}

fn opt(alternatives: &[Symbol]) -> RuleItem {
    RuleItem { alternatives: alternatives.to_vec(), quantity: Quantity::Optional, insertable: false }
}

fn many(s: Symbol) -> RuleItem {
    RuleItem { alternatives: vec![s], quantity: Quantity::Many, insertable: false }
}

fn slot(c: Category) -> RuleItem {
    RuleItem { alternatives: vec![Symbol::T(c)], quantity: Quantity::One, insertable: true }
}

fn choice(alternatives: &[Symbol]) -> RuleItem {
    RuleItem { alternatives: alternatives.to_vec(), quantity: Quantity::One, insertable: false }
}

pub fn builtin_rules() -> Vec<GrammarRule> {
    use Category::*;
    use NonTerminal::*;
    use Symbol::{N, T};
    let rule = |lhs, rhs| GrammarRule { lhs, rhs };
    vec![
        rule(Sentence, vec![one(N(Subject)), one(N(Predicate))]),
        rule(Sentence, vec![one(N(Predicate))]),
        rule(Subject, vec![one(N(Ns))]),
        rule(Subject, vec![one(N(Cns))]),
        rule(
            Ns,
            vec![
                opt(&[N(Advs)]),
                slot(Determiner),
                opt(&[N(Adjs)]),
                one(T(Noun)),
                opt(&[N(Adjs), N(Advs)]),
                opt(&[N(Ps)]),
            ],
        ),
        rule(Ns, vec![opt(&[N(Advs)]), one(T(Pronoun)), opt(&[N(Ps)])]),
        rule(Ns, vec![opt(&[N(Advs)]), one(T(ProperNoun)), many(T(ProperNoun)), opt(&[N(Ps)])]),
        rule(Cns, vec![one(N(Ns)), slot(Conjunction), one(N(Ns))]),
        rule(Ps, vec![slot(Preposition), one(N(Ns))]),
        rule(Adjs, vec![one(T(Adverb)), one(T(Adjective))]),
        rule(Adjs, vec![one(T(Adjective)), one(T(Adverb))]),
        rule(Adjs, vec![one(T(Adjective))]),
        rule(Advs, vec![one(T(Adverb))]),
        rule(Predicate, vec![one(T(Verb)), opt(&[N(Adjs), N(Advs)]), many(N(Ps))]),
        rule(
            Predicate,
            vec![one(T(Verb)), opt(&[N(Adjs), N(Advs)]), choice(&[N(Cns), N(Ns)]), many(N(Ps))],
        ),
        rule(
            Predicate,
            vec![one(T(Verb)), opt(&[N(Adjs), N(Advs)]), one(N(Ns)), one(N(Ns)), many(N(Ps))],
        ),
    ]
}

/// What a terminal leaf stands for.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Binding {
    /// The input word at this index.
    Input(usize),
    /// An insertable slot left open by the parser.
    Slot,
    /// A word added by the planner.
    Inserted(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SyntaxTree {
    Branch { label: NonTerminal, children: Vec<SyntaxTree> },
    Leaf { category: Category, binding: Binding },
}

impl SyntaxTree {
    pub fn label(&self) -> Option<NonTerminal> {
        match self {
            SyntaxTree::Branch { label, .. } => Some(*label),
            SyntaxTree::Leaf { .. } => None,
        }
    }

    pub fn children(&self) -> &[SyntaxTree] {
        match self {
            SyntaxTree::Branch { children, .. } => children,
            SyntaxTree::Leaf { .. } => &[],
        }
    }

    pub fn is(&self, nt: NonTerminal) -> bool {
        self.label() == Some(nt)
    }

    /// Terminal leaves in order.
    pub fn leaves(&self) -> Vec<(Category, &Binding)> {
        let mut out = Vec::new();
        self.walk_leaves(&mut |c, b| out.push((c, b)));
        out
    }

    fn walk_leaves<'a>(&'a self, f: &mut impl FnMut(Category, &'a Binding)) {
        match self {
            SyntaxTree::Leaf { category, binding } => f(*category, binding),
            SyntaxTree::Branch { children, .. } => {
                for c in children {
                    c.walk_leaves(f);
                }
            }
        }
    }

    /// Input indices of the bound leaves, in order.
    pub fn bound_inputs(&self) -> Vec<usize> {
        self.leaves()
            .into_iter()
            .filter_map(|(_, b)| match b {
                Binding::Input(i) => Some(*i),
                _ => None,
            })
            .collect()
    }

    /// Categories of the open slots, in order.
    pub fn open_slots(&self) -> Vec<Category> {
        self.leaves().into_iter().filter(|(_, b)| **b == Binding::Slot).map(|(c, _)| c).collect()
    }

    /// Number of nested nonterminal levels, the root counting as one.
    pub fn depth(&self) -> usize {
        match self {
            SyntaxTree::Leaf { .. } => 0,
            SyntaxTree::Branch { children, .. } => 1 + children.iter().map(|c| c.depth()).max().unwrap_or(0),
        }
    }

    /// True if some PS contains an NS that itself contains a PS.
    pub fn has_nested_ps(&self) -> bool {
        fn search(t: &SyntaxTree, in_ps: bool, in_ps_ns: bool) -> bool {
            match t.label() {
                Some(NonTerminal::Ps) if in_ps_ns => true,
                Some(NonTerminal::Ps) => t.children().iter().any(|c| search(c, true, false)),
                Some(NonTerminal::Ns) if in_ps => t.children().iter().any(|c| search(c, false, true)),
                Some(_) => t.children().iter().any(|c| search(c, in_ps, in_ps_ns)),
                None => false,
            }
        }
        search(self, false, false)
    }
}

impl fmt::Display for SyntaxTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyntaxTree::Leaf { category, binding } => match binding {
                Binding::Input(i) => write!(f, "{category}:{i}"),
                Binding::Slot => write!(f, "{category}:_"),
                Binding::Inserted(w) => write!(f, "{category}:+{w}"),
            },
            SyntaxTree::Branch { label, children } => {
                write!(f, "[{label}")?;
                for c in children {
                    write!(f, " {c}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// One input word and the categories it may take.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseToken {
    pub text: String,
    pub categories: BTreeSet<Category>,
}

impl ParseToken {
    pub fn new(text: impl Into<String>, categories: impl IntoIterator<Item = Category>) -> Self {
        Self { text: text.into(), categories: categories.into_iter().collect() }
    }
}

struct Parser<'a> {
    rules: &'a [GrammarRule],
    tokens: &'a [ParseToken],
}

type Partial = (Vec<SyntaxTree>, usize);

impl Parser<'_> {
    fn symbol(&self, symbol: Symbol, pos: usize, in_ps: bool, insertable: bool) -> Vec<(SyntaxTree, usize)> {
        match symbol {
            Symbol::T(category) => {
                let mut out = Vec::new();
                if self.tokens.get(pos).is_some_and(|t| t.categories.contains(&category)) {
                    out.push((SyntaxTree::Leaf { category, binding: Binding::Input(pos) }, pos + 1));
                }
                if insertable {
                    out.push((SyntaxTree::Leaf { category, binding: Binding::Slot }, pos));
                }
                out
            }
            Symbol::N(nt) => {
                let mut out = Vec::new();
                for rule in self.rules.iter().filter(|r| r.lhs == nt) {
                    let child_in_ps = nt == NonTerminal::Ps || (in_ps && nt != NonTerminal::Ns);
                    let ns_in_ps = nt == NonTerminal::Ns && in_ps;
                    for (children, end) in self.items(&rule.rhs, pos, child_in_ps, ns_in_ps) {
                        out.push((SyntaxTree::Branch { label: nt, children }, end));
                    }
                }
                out
            }
        }
    }

    /// Expands a rule body. `in_ps` is passed down to nonterminal children;
    /// `no_ps` drops PS items (the body of an NS inside a PS).
    fn items(&self, items: &[RuleItem], pos: usize, in_ps: bool, no_ps: bool) -> Vec<Partial> {
        let Some((item, rest)) = items.split_first() else {
            return vec![(Vec::new(), pos)];
        };
        let is_ps = item.alternatives == [Symbol::N(NonTerminal::Ps)];
        if no_ps && is_ps {
            return self.items(rest, pos, in_ps, no_ps);
        }
        let mut heads: Vec<Partial> = Vec::new();
        match item.quantity {
            Quantity::One => heads.extend(self.alternatives(item, pos, in_ps).into_iter().map(|(t, e)| (vec![t], e))),
            Quantity::Optional => {
                heads.push((Vec::new(), pos));
                heads.extend(self.alternatives(item, pos, in_ps).into_iter().map(|(t, e)| (vec![t], e)));
            }
            Quantity::Many => {
                let mut frontier: Vec<Partial> = vec![(Vec::new(), pos)];
                while !frontier.is_empty() {
                    heads.extend(frontier.iter().cloned());
                    let mut next = Vec::new();
                    for (trees, end) in &frontier {
                        for (t, e) in self.alternatives(item, *end, in_ps) {
                            // every repeated item must consume input
                            if e > *end {
                                let mut trees = trees.clone();
                                trees.push(t);
                                next.push((trees, e));
                            }
                        }
                    }
                    frontier = next;
                }
            }
        }
        let mut out = Vec::new();
        for (head, end) in heads {
            for (tail, last) in self.items(rest, end, in_ps, no_ps) {
                let mut trees = head.clone();
                trees.extend(tail);
                out.push((trees, last));
            }
        }
        out
    }

    fn alternatives(&self, item: &RuleItem, pos: usize, in_ps: bool) -> Vec<(SyntaxTree, usize)> {
        item.alternatives.iter().flat_map(|s| self.symbol(*s, pos, in_ps, item.insertable)).collect()
    }
}

/// Every SENTENCE tree that binds all tokens in order, in depth-first order
/// with rules tried in declaration order.
pub fn parse_candidates(tokens: &[ParseToken]) -> Vec<SyntaxTree> {
    parse_with(&builtin_rules(), tokens)
}

pub fn parse_with(rules: &[GrammarRule], tokens: &[ParseToken]) -> Vec<SyntaxTree> {
    if tokens.is_empty() {
        return Vec::new();
    }
    let parser = Parser { rules, tokens };
    parser
        .symbol(Symbol::N(NonTerminal::Sentence), 0, false, false)
        .into_iter()
        .filter(|(_, end)| *end == tokens.len())
        .map(|(t, _)| t)
        .collect()
}

/// The subject (if any) and the predicate of a SENTENCE tree.
pub fn split_subject_predicate(tree: &SyntaxTree) -> (Option<&SyntaxTree>, &SyntaxTree) {
    let children = tree.children();
    let subject = children.iter().find(|c| c.is(NonTerminal::Subject));
    let predicate = children
        .iter()
        .find(|c| c.is(NonTerminal::Predicate))
        .unwrap_or(tree);
    (subject.map(|s| s.children().first().unwrap_or(s)), predicate)
}
