//! Scores two attribution sets against a small labelled ground truth with
//! micro and macro averaging, and prints CCDF tables.
//!
//! cargo run --example evaluation

use std::collections::BTreeSet;

use quote_bootstrap::cli::render_eval;
use quote_bootstrap::entity::SpeakerId;
use quote_bootstrap::eval::{ccdf, evaluate, Averaging, GroundTruth, IgnoreRule};

fn main() {
    let s = |x: &str| SpeakerId::from(x);
    let gt = GroundTruth::from_labelled([
        ("q1", s("ada"), true),
        ("q2", s("ada"), true),
        ("q3", s("bo"), true),
        ("q4", s("bo"), false),
    ]);
    let systems: [(&str, BTreeSet<(&str, SpeakerId)>); 2] = [
        ("careful", [("q1", s("ada")), ("q3", s("bo"))].into_iter().collect()),
        (
            "eager",
            [("q1", s("ada")), ("q2", s("ada")), ("q3", s("ada")), ("q4", s("bo")), ("q9", s("zed"))]
                .into_iter()
                .collect(),
        ),
    ];
    for (name, y) in &systems {
        let micro = evaluate(y, &gt, Averaging::Micro, IgnoreRule::BothUnknown);
        let macro_ = evaluate(y, &gt, Averaging::Macro, IgnoreRule::BothUnknown);
        println!("== {name}");
        print!("{}", render_eval(&micro, &macro_));
    }
    println!("== occurrences per quotation, CCDF");
    for (k, n) in ccdf(&[1, 1, 2, 5, 1, 3]) {
        println!("{k}\t{n}");
    }
}
