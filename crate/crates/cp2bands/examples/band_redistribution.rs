//! Count the levels each band holds on either side of the redistribution and
//! check the transfer rule Delta N = N + 2.
//!
//! Run with: cargo run --release --example band_redistribution

use cp2bands::quantum::{band_spectrum, transfer_count};

fn main() {
    println!(
        "{:>3}  {:>14}  {:>12}  {:>8}  {:>6}",
        "N", "lambda=0.2", "lambda=0.9", "transfer", "N+2"
    );
    for n in [1u32, 2, 4, 6, 10] {
        let before = band_spectrum(n, 0.2, 5.0).expect("three-band regime");
        let after = band_spectrum(n, 0.9, 5.0).expect("two-band regime");
        let delta = transfer_count(&before, &after).expect("3 -> 2 clusters");
        let counts = |v: Vec<usize>| {
            v.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join("/")
        };
        println!(
            "{:>3}  {:>14}  {:>12}  {:>8}  {:>6}",
            n,
            counts(before.cluster_counts()),
            counts(after.cluster_counts()),
            delta,
            n + 2
        );
    }
    println!("\nthe upper group always gains exactly N + 2 levels through the crossing");
}
