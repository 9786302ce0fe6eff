//! Detects speaker mentions with the alias dictionary and resolves a
//! partial last-name mention through a full-name mention in the same text.
//!
//! cargo run --example mention_detection

use quote_bootstrap::corpus::{tokenize, Document};
use quote_bootstrap::entity::{detect_mentions, resolve_mentions, AliasDictionary, AliasRow};

fn main() {
    let rows = [
        AliasRow::new("John McCain", "mccain-john", true),
        AliasRow::new("McCain", "mccain-john", false),
        AliasRow::new("Cindy McCain", "mccain-cindy", true),
        AliasRow::new("McCain", "mccain-cindy", false),
    ];
    let (dict, report) = AliasDictionary::from_rows(rows, true);
    println!("{} aliases loaded, report {report:?}", dict.len());

    for text in [
        "John McCain spoke first. Later McCain added a remark.",
        "McCain was not available for comment.",
        "John McCain and Cindy McCain arrived. McCain waved.",
    ] {
        let doc = Document {
            doc_id: "d".into(),
            site: "example.org".into(),
            published: None,
            text: text.into(),
        };
        let stream = tokenize(&doc);
        let mut mentions = detect_mentions(&stream, &dict);
        resolve_mentions(&mut mentions, &dict);
        println!("{text}");
        for m in &mentions {
            let who = m.resolved.as_ref().map_or("(ambiguous)", |s| s.as_str());
            println!("    {:<14} tokens {:?} -> {who}", m.surface.join(" "), m.token_span);
        }
    }
}
