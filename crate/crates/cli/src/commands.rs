use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use expando::builder::{build, BuildConfig, Dictionary, SemanticResource};
use expando::corpus::parse_corpus;
use expando::eval::{
    accuracy, coincidence, consensus, krippendorff_alpha, pairwise_metrics, read_annotations, regenerate_and_match,
    reliability, CoincidenceMatrix,
};
use expando::lexicon::{parse_lexicon, serialize_lexicon};
use expando::prep::{extend_lexicon, train};
use expando::realiser::{expand, ExpandOptions};

use crate::{read, write, Resources};

#[derive(Debug, Parser)]
#[command(name = "expando", version, about = "Expand keywords into full sentences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a lexicon from source lexica, a dictionary and semantic classes.
    BuildLexicon(BuildLexicon),
    /// Count verb-preposition-noun patterns in a tagged corpus.
    TrainPrep(TrainPrep),
    /// Print candidate sentences for a keyword list as `score<TAB>text`.
    Expand(Expand),
    /// Regenerate a tagged corpus from its keywords and count matches.
    Evaluate(Evaluate),
    /// Inter-annotator agreement from annotation files or a coincidence matrix.
    Agreement(Agreement),
    /// Serve expansions and lexicon lookups over HTTP.
    Serve(Serve),
}

#[derive(Debug, Args)]
pub struct Resource {
    /// Lexicon XML; the bundled seed lexicon when omitted.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Preposition model TSV; the bundled seed model when omitted.
    #[arg(long)]
    pub model: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildLexicon {
    /// Source lexicon as `id=path`; ids are enlex, nih and freeling.
    #[arg(long = "source", required = true, value_parser = parse_source)]
    pub sources: Vec<(String, PathBuf)>,
    #[arg(long)]
    pub dictionary: PathBuf,
    #[arg(long)]
    pub semantics: PathBuf,
    #[arg(long)]
    pub fallback_semantics: Option<PathBuf>,
    /// Comma-separated source ids, highest priority first.
    #[arg(long, value_delimiter = ',')]
    pub priority: Option<Vec<String>>,
    #[arg(long)]
    pub out: PathBuf,
    /// Where to write the category report; stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainPrep {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub lexicon: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the lexicon with the learned prepositions stored.
    #[arg(long)]
    pub extend_lexicon: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Expand {
    #[command(flatten)]
    pub resources: Resource,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub top_k: u32,
    #[arg(long)]
    pub no_contractions: bool,
    /// Print the planning trace under each candidate.
    #[arg(long)]
    pub trace: bool,
    /// Keywords; quote multiword ones ("how much").
    #[arg(required = true)]
    pub words: Vec<String>,
}

#[derive(Debug, Args)]
pub struct Evaluate {
    #[arg(long)]
    pub corpus: PathBuf,
    #[command(flatten)]
    pub resources: Resource,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub top_k: u32,
    /// JSON report with every sentence.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct AgreementInput {
    /// Directory with one annotation XML file per annotator.
    #[arg(long)]
    pub annotations: Option<PathBuf>,
    /// Tab-separated coincidence matrix.
    #[arg(long)]
    pub coincidence: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Agreement {
    #[command(flatten)]
    pub input: AgreementInput,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Serve {
    #[command(flatten)]
    pub resources: Resource,
    /// Listening port; EXPANDO_PORT takes precedence.
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    /// Allowed CORS origin; any origin when omitted.
    #[arg(long)]
    pub cors_origin: Option<String>,
}

fn parse_source(s: &str) -> Result<(String, PathBuf), String> {
    let (id, path) = s.split_once('=').ok_or("expected id=path")?;
    Ok((id.to_string(), PathBuf::from(path)))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<()> {
    match cli.command {
        Command::BuildLexicon(a) => build_lexicon(a, out),
        Command::TrainPrep(a) => train_prep(a, out),
        Command::Expand(a) => run_expand(a, out),
        Command::Evaluate(a) => evaluate(a, out),
        Command::Agreement(a) => agreement(a, out),
        Command::Serve(a) => crate::server::serve(a),
    }
}

fn build_lexicon(a: BuildLexicon, out: &mut dyn Write) -> anyhow::Result<()> {
    let sources = a
        .sources
        .iter()
        .map(|(id, path)| Ok((id.clone(), read(path)?)))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let dictionary = Dictionary::parse(&read(&a.dictionary)?)?;
    let semantics = SemanticResource::parse(&read(&a.semantics)?)?;
    let fallback = match &a.fallback_semantics {
        Some(p) => Some(SemanticResource::parse(&read(p)?)?),
        None => None,
    };
    let config = BuildConfig {
        sources,
        dictionary: &dictionary,
        semantics: &semantics,
        fallback_semantics: fallback.as_ref(),
        priority: a.priority,
    };
    let (lexicon, report) = build(&config)?;
    write(&a.out, &serialize_lexicon(&lexicon))?;
    for c in &report.conflicts {
        log::info!("{}/{} {}: kept {} from {}, dropped {} from {}", c.lemma, c.category, c.feature, c.kept, c.kept_from, c.discarded, c.discarded_from);
    }
    for r in &report.rejected {
        log::info!("{} rejected {} ({}): {}", r.source_id, r.lemma, r.category, r.reason);
    }
    match &a.report {
        Some(p) => write(p, &report.to_string())?,
        None => write!(out, "{report}")?,
    }
    Ok(())
}

fn train_prep(a: TrainPrep, out: &mut dyn Write) -> anyhow::Result<()> {
    let corpus = parse_corpus(&read(&a.corpus)?).with_context(|| format!("parsing {}", a.corpus.display()))?;
    let lexicon = parse_lexicon(&read(&a.lexicon)?)?;
    let model = train(&corpus, &lexicon);
    write(&a.out, &model.to_tsv())?;
    if let Some(p) = &a.extend_lexicon {
        write(p, &serialize_lexicon(&extend_lexicon(&lexicon, &model)))?;
    }
    writeln!(out, "{} sentences, {} verb/class pairs", corpus.len(), model.pairs().count())?;
    Ok(())
}

fn load(r: &Resource) -> anyhow::Result<Resources> {
    Resources::load(r.lexicon.as_deref(), r.model.as_deref())
}

fn run_expand(a: Expand, out: &mut dyn Write) -> anyhow::Result<()> {
    let res = load(&a.resources)?;
    let options = ExpandOptions { top_k: a.top_k as usize, contractions: !a.no_contractions };
    let e = expand(&a.words, &res.lexicon, &res.model, &res.rules, &options);
    for c in &e.candidates {
        writeln!(out, "{:.4}\t{}", c.score, c.text)?;
        if a.trace {
            for t in &c.trace {
                writeln!(out, "\t  {t}")?;
            }
        }
    }
    for d in &e.diagnostics {
        eprintln!("{d}");
    }
    if e.candidates.is_empty() {
        bail!("no sentence could be generated");
    }
    Ok(())
}

fn evaluate(a: Evaluate, out: &mut dyn Write) -> anyhow::Result<()> {
    let res = load(&a.resources)?;
    let corpus = parse_corpus(&read(&a.corpus)?).with_context(|| format!("parsing {}", a.corpus.display()))?;
    let options = ExpandOptions { top_k: a.top_k as usize, ..Default::default() };
    let report = regenerate_and_match(&corpus, &res.lexicon, &res.model, &res.rules, &options);
    writeln!(out, "{}", report.summary())?;
    if let Some(p) = &a.report {
        write(p, &serde_json::to_string_pretty(&report)?)?;
    }
    Ok(())
}

fn agreement(a: Agreement, out: &mut dyn Write) -> anyhow::Result<()> {
    let metrics = if let Some(dir) = &a.input.annotations {
        let annotators = read_annotation_dir(dir)?;
        let rel = reliability(&annotators);
        let cm = coincidence(&rel.judgments);
        let pairwise = pairwise_metrics(&rel.judgments)?;
        let alpha = krippendorff_alpha(&cm)?;
        let acc = accuracy(&cm)?;
        writeln!(out, "alpha={alpha:.4}\naccuracy={acc:.4}")?;
        writeln!(out, "pairwise alpha\n{}", expando::eval::PairwiseMetrics::render(&pairwise.alpha).trim_end())?;
        writeln!(out, "pairwise accuracy\n{}", expando::eval::PairwiseMetrics::render(&pairwise.accuracy).trim_end())?;
        let cons = consensus(&annotators);
        writeln!(
            out,
            "consensus: total {}, best realisation only {}, no best realisation {}",
            cons.total, cons.best_realisation_only, cons.no_best_realisation
        )?;
        json!({
            "alpha": alpha,
            "accuracy": acc,
            "units": rel.units.len(),
            "annotators": annotators.len(),
            "coincidence": cm,
            "pairwise": pairwise,
            "consensus": cons,
        })
    } else {
        let path = a.input.coincidence.as_deref().expect("clap requires one input");
        let cm = CoincidenceMatrix::parse(&read(path)?)?;
        let alpha = krippendorff_alpha(&cm)?;
        let acc = accuracy(&cm)?;
        writeln!(out, "alpha={alpha:.4}\naccuracy={acc:.4}")?;
        json!({ "alpha": alpha, "accuracy": acc, "coincidence": cm })
    };
    if let Some(p) = &a.out {
        write(p, &serde_json::to_string_pretty(&metrics)?)?;
    }
    Ok(())
}

fn read_annotation_dir(dir: &Path) -> anyhow::Result<Vec<Vec<expando::eval::AnnotationRecord>>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot list {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "xml"))
        .collect();
    files.sort();
    if files.len() < 2 {
        bail!("{} holds {} annotation files, need at least two", dir.display(), files.len());
    }
    files
        .iter()
        .map(|p| read_annotations(&read(p)?).with_context(|| format!("parsing {}", p.display())))
        .collect()
}
