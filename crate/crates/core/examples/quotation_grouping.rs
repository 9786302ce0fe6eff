//! Groups quotation variants that share a run of tokens, and shows the
//! effect of the run length and of switching grouping off.
//!
//! cargo run --example quotation_grouping

use quote_bootstrap::quote::{group_sequences, GroupingOptions};

fn main() {
    let quotes = [
        "we will not raise taxes on working families this year or next",
        "We will not raise taxes on working families",
        "not raise taxes on working families this year",
        "the budget is balanced and the books are open",
        "The budget is balanced",
    ];
    let tokens: Vec<Vec<&str>> = quotes.iter().map(|q| q.split_whitespace().collect()).collect();

    for (label, opts) in [
        ("run length 8", GroupingOptions::default()),
        ("run length 4", GroupingOptions { group_len: 4, ..GroupingOptions::default() }),
        ("grouping off", GroupingOptions { enabled: false, ..GroupingOptions::default() }),
    ] {
        let groups = group_sequences(&tokens, opts);
        println!("{label}:");
        for (q, g) in quotes.iter().zip(&groups) {
            println!("  [{g}] {q}");
        }
    }
}
