//! Builds the counted word graph for a handful of candidate patterns,
//! generalizes rare tokens at several thresholds, and prints the graph in
//! DOT form.
//!
//! cargo run --example pattern_clustering > graph.dot

use quote_bootstrap::dawg::Dawg;
use quote_bootstrap::pattern::Pattern;

fn main() -> quote_bootstrap::Result<()> {
    let texts = [
        "$Q , said $S .",
        "$Q , said writer $S .",
        "$Q , said Italian writer $S .",
        "$Q , said Bavarian writer $S .",
        "$Q , announced writer $S .",
        "$Q , announced Mayor $S .",
        "$Q , said Mayor $S .",
        "$Q , said Mayor of Rome $S .",
        "$Q , said Mayor of London $S .",
    ];
    let patterns = texts
        .iter()
        .map(|t| t.parse())
        .collect::<quote_bootstrap::Result<Vec<Pattern>>>()?;
    let dawg = Dawg::build(&patterns)?;

    for n_min in [0, 2, 3, 8] {
        eprintln!("n_min = {n_min}:");
        for p in dawg.generalize(n_min, 5) {
            eprintln!("  {p}");
        }
    }
    print!("{}", dawg.to_dot());
    Ok(())
}
