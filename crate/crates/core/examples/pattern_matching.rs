//! Parses patterns from their text form and matches them against an
//! annotated document, both one at a time and all at once through the trie.
//!
//! cargo run --example pattern_matching

use quote_bootstrap::entity::{AliasDictionary, AliasRow};
use quote_bootstrap::corpus::ingest_records;
use quote_bootstrap::corpus::RawRecord;
use quote_bootstrap::pattern::{Pattern, PatternTrie};
use quote_bootstrap::pipeline::{PrepareOptions, PreparedCorpus};

fn main() -> quote_bootstrap::Result<()> {
    let record = RawRecord {
        id: "doc-1".into(),
        site: "example.org".into(),
        date: None,
        content: "\u{201C}We will build the bridge next year\u{201D}, said Mayor Ada Lind. \
                  Later Ada Lind told reporters: \u{201C}The money is already there\u{201D}."
            .into(),
    };
    let (docs, _) = ingest_records([record]);
    let (dict, _) = AliasDictionary::from_rows([AliasRow::new("Ada Lind", "lind", true)], true);
    let corpus = PreparedCorpus::build(docs, &dict, &PrepareOptions::default());

    let patterns = vec![
        Pattern::parse_valid("$Q , said Mayor $S .", 5)?,
        Pattern::parse_valid("Later $S told * : $Q .", 5)?,
        Pattern::parse_valid("$Q , said $S .", 5)?,
    ];
    let units = &corpus.streams[0].units;
    for p in &patterns {
        let found = p.find_iter(units);
        println!("{:<24} {} match(es)", p.to_string(), found.len());
        for m in found {
            println!("    {:?} by {}", corpus.cluster_text(m.cluster), m.speaker.as_str());
        }
    }

    let trie = PatternTrie::new(&patterns);
    println!("trie: {} match(es) in one pass", trie.find_all(units).len());
    Ok(())
}
