// Timing of ordering, placement and verification on random d-degenerate
// complexes, as CSV.
//
//     cargo run --release --example bench_scaling -- 10000

use std::error::Error;

use minkowski_embed::bench::{run_cell, CSV_HEADER};
use minkowski_embed::scalar::Backend;

fn main() -> Result<(), Box<dyn Error>> {
    let largest = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1000);
    run_example(largest)
}

pub fn run_example(largest: usize) -> Result<(), Box<dyn Error>> {
    println!("{CSV_HEADER}");
    let mut n = 100;
    while n <= largest {
        for d in [4, 10] {
            let row = run_cell(n, d, Backend::Float, 0)?;
            println!("{}", row.to_csv());
            assert!(row.pass);
        }
        n *= 10;
    }
    let row = run_cell(60, 3, Backend::Rational, 0)?;
    println!("{}", row.to_csv());
    Ok(())
}
