//! Generates a synthetic corpus, runs the extraction loop from the default
//! seed, and scores the result against the planted pairs. The same corpus is
//! also attributed with the nearest-speaker baseline.
//!
//! cargo run --release --example synthetic_run -- [seed] [shadowed-fraction]

use std::time::Instant;

use quote_bootstrap::bootstrap::{run, BootstrapConfig};
use quote_bootstrap::entity::AliasDictionary;
use quote_bootstrap::eval::{evaluate_texts, nearest_speaker_baseline, Averaging, IgnoreRule};
use quote_bootstrap::pipeline::{PrepareOptions, PreparedCorpus};
use quote_bootstrap::synth::{SynthConfig, SyntheticCorpus};

fn main() -> quote_bootstrap::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let shadowed_fraction = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.0);
    let cfg = SynthConfig {
        seed,
        shadowed_fraction,
        ..SynthConfig::default()
    };
    let synth = SyntheticCorpus::generate(&cfg)?;
    let started = Instant::now();
    let (dict, _) = AliasDictionary::from_rows(synth.aliases.clone(), true);
    let opts = PrepareOptions::default();
    let corpus = PreparedCorpus::build(synth.documents.clone(), &dict, &opts);
    let out = run(&corpus, &BootstrapConfig::default())?;
    println!("ran in {:.2?}, converged: {}", started.elapsed(), out.converged);
    for it in &out.iterations {
        println!(
            "  iteration {}: {} patterns, {} pairs (+{}), {} admitted",
            it.iteration, it.active_patterns, it.pairs, it.new_pairs, it.admitted_patterns
        );
    }
    let truth = synth.truth_rows();
    let texts = |t: &quote_bootstrap::bootstrap::PairTable| -> Vec<_> {
        t.values()
            .map(|r| (corpus.cluster_text(r.cluster).to_string(), r.speaker.clone()))
            .collect()
    };
    let retrieved = texts(&out.table);
    let r = evaluate_texts(&retrieved, &truth, Averaging::Micro, IgnoreRule::default(), opts.grouping);
    println!("bootstrap: precision {:?} recall {:?}", r.precision, r.recall);

    let frequent: Vec<_> = synth
        .pairs
        .iter()
        .filter(|p| p.occurrences >= 3)
        .map(|p| quote_bootstrap::eval::TruthRow {
            quotation: p.quotation.clone(),
            speaker: p.speaker.clone(),
            correct: true,
        })
        .collect();
    let rf = evaluate_texts(&retrieved, &frequent, Averaging::Micro, IgnoreRule::default(), opts.grouping);
    println!("  recall on pairs with >= 3 occurrences: {:?} ({} pairs)", rf.recall, frequent.len());

    let base = nearest_speaker_baseline(&corpus, 15);
    let b = evaluate_texts(&texts(&base), &truth, Averaging::Micro, IgnoreRule::default(), opts.grouping);
    println!("baseline: precision {:?} recall {:?}", b.precision, b.recall);
    for p in out.patterns.iter().take(60) {
        println!("  {:<40} {:.3} {}", p.pattern.to_string(), p.precision, p.stats.support);
    }
    Ok(())
}
