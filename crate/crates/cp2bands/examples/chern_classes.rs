//! Measure the Chern classes of the eigen-band bundles and test whether the
//! lower pair can be pulled apart.
//!
//! Run with: cargo run --release --example chern_classes

use cp2bands::chern::{
    chern_class_of_band, indecomposability_test, whitney_sum_check, ChernConfig,
};
use cp2bands::symbol::BandSet;

fn main() {
    // moderate grids keep this example under a minute on one core
    let config = ChernConfig {
        volume_grid: 12,
        ..ChernConfig::default()
    };

    println!("lambda = 0.9: one rank-1 band above a rank-2 band\n");
    let top = chern_class_of_band(0.9, BandSet::single(3), &config).expect("gapped");
    let pair =
        chern_class_of_band(0.9, BandSet::new(&[1, 2]).expect("nonempty"), &config).expect("gapped");
    println!("  top band    C = 1 {:+} x {:+} x^2   {top}", top.a, top.b);
    println!("  lower pair  C = 1 {:+} x {:+} x^2   {pair}", pair.a, pair.b);
    println!(
        "  Whitney product is trivial: {}",
        whitney_sum_check(&[top, pair])
    );
    println!(
        "  lower pair indecomposable:  {}  (1 - x + x^2 has no integer factorization)",
        indecomposability_test(&pair)
    );

    println!("\nlambda = 0.2: three isolated trivial bands\n");
    for band in 1..=3 {
        let class = chern_class_of_band(0.2, BandSet::single(band), &config).expect("gapped");
        println!("  band {band}: {class}");
    }
}
