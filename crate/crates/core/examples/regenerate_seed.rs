//! Rewrites data/lexicon.xml and data/prep_model.tsv from the bundled sources.
//! Run from crates/core: `cargo run --example regenerate_seed`.

fn main() {
    let rebuilt = expando::seed::rebuild().expect("seed sources build");
    std::fs::write("data/lexicon.xml", expando::lexicon::serialize_lexicon(&rebuilt.lexicon)).unwrap();
    std::fs::write("data/prep_model.tsv", rebuilt.model.to_tsv()).unwrap();
    print!("{}", rebuilt.report);
}
