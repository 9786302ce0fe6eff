//! Tabulates explicit coverage as a function of the per-occurrence
//! probability of an explicit mention and the number of occurrences.
//!
//! cargo run --example coverage_curve

use quote_bootstrap::eval::explicit_coverage;

fn main() -> quote_bootstrap::Result<()> {
    let ps = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0];
    print!("{:>4}", "n");
    for p in ps {
        print!("{p:>8.1}");
    }
    println!();
    for n in 2..=12u32 {
        print!("{n:>4}");
        for p in ps {
            print!("{:>8.3}", explicit_coverage(p, n)?.x);
        }
        println!();
    }
    Ok(())
}
