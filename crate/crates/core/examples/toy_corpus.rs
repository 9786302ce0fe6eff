//! Runs the extraction loop on the five-document toy corpus shipped with
//! the tests and prints what each iteration attributes.
//!
//! cargo run --example toy_corpus

use std::path::Path;

use quote_bootstrap::bootstrap::{run, BootstrapConfig};
use quote_bootstrap::corpus::{ingest_path, IngestOptions};
use quote_bootstrap::entity::load_aliases;
use quote_bootstrap::output::load_seeds;
use quote_bootstrap::pattern::DEFAULT_MAX_WILDCARD_RUN;
use quote_bootstrap::pipeline::{PrepareOptions, PreparedCorpus};
use quote_bootstrap::quote::QuoteBounds;

fn main() -> quote_bootstrap::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/toy");
    let (docs, _) = ingest_path(&dir.join("corpus.ndjson"), IngestOptions::default())?;
    let (dict, _) = load_aliases(&dir.join("aliases.tsv"), true)?;
    let seeds = load_seeds(&dir.join("seeds.txt"), DEFAULT_MAX_WILDCARD_RUN)?;

    // "Oops" is a one-word quotation, so the length floor has to go down.
    let opts = PrepareOptions {
        bounds: QuoteBounds { min_len: 1, max_len: 300 },
        ..PrepareOptions::default()
    };
    let corpus = PreparedCorpus::build(docs, &dict, &opts);
    let cfg = BootstrapConfig {
        seeds,
        min_support: 1,
        ..BootstrapConfig::default()
    };
    let out = run(&corpus, &cfg)?;

    for it in &out.iterations {
        println!("iteration {}", it.iteration);
        for (cluster, speaker) in &it.attribution {
            println!("  {:?} -> {}", corpus.cluster_text(*cluster), dict.display_name(speaker));
        }
    }
    println!("patterns:");
    for p in &out.patterns {
        println!("  {}  (precision {:.2})", p.pattern, p.precision);
    }
    Ok(())
}
