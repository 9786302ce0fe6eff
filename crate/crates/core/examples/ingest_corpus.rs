//! Ingests NDJSON records and reports what was kept and why the rest was
//! skipped. Pass a file path to ingest a real corpus instead of the inline
//! sample.
//!
//! cargo run --example ingest_corpus -- [corpus.ndjson]

use std::io::Cursor;
use std::path::PathBuf;

use quote_bootstrap::corpus::{ingest, ingest_path, tokenize, IngestOptions};

const SAMPLE: &str = r#"{"id":"a","site":"x.org","date":"2011-01-03","content":"\"It works\", said Ada."}
{"id":"b","site":"y.org","date":"2011-01-03","content":"\"It works\", said Ada."}
{"id":"c","site":"y.org","date":"not a date","content":"Bad date."}
not json at all
{"id":"d","site":"z.org","date":null,"content":"   "}
{"id":"a","site":"z.org","date":null,"content":"Same id, new text."}
"#;

fn main() -> quote_bootstrap::Result<()> {
    let (docs, report) = match std::env::args().nth(1) {
        Some(path) => ingest_path(&PathBuf::from(path), IngestOptions::default())?,
        None => ingest(Cursor::new(SAMPLE), IngestOptions::default())?,
    };
    println!("{report:?}");
    for d in docs.iter().take(5) {
        let stream = tokenize(d);
        println!(
            "{} ({}) {} tokens, quotes balanced: {}",
            d.doc_id,
            d.site,
            stream.tokens.len(),
            stream.quotes_balanced
        );
    }
    Ok(())
}
