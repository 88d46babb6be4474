//! Locate the coupling window where consecutive bands touch somewhere on
//! phase space.
//!
//! Run with: cargo run --release --example degeneracy_window

use cp2bands::symbol::{
    degeneracy_lambda_window, min_gap_over_phase_space, BandPair, SearchConfig,
};

fn main() {
    let search = SearchConfig::default();

    println!("minimum band gap over CP^2:");
    println!("{:>8}  {:>14}  {:>14}", "lambda", "gap(1,2)", "gap(2,3)");
    for k in 0..=10 {
        let lambda = k as f64 / 10.0;
        let (g12, _) = min_gap_over_phase_space(lambda, BandPair::new(1), &search).unwrap();
        let (g23, _) = min_gap_over_phase_space(lambda, BandPair::new(2), &search).unwrap();
        println!("{lambda:>8.2}  {g12:>14.6e}  {g23:>14.6e}");
    }

    for pair in [BandPair::new(1), BandPair::new(2)] {
        let windows = degeneracy_lambda_window(pair, 1e-6, 41, &search).unwrap();
        println!(
            "\nbands ({}, {}) are degenerate somewhere for lambda in {:?}",
            pair.lower(),
            pair.upper(),
            windows
                .iter()
                .map(|(lo, hi)| format!("[{lo:.4}, {hi:.4}]"))
                .collect::<Vec<_>>()
        );
    }

    let (gap, point) = min_gap_over_phase_space(0.55, BandPair::new(2), &search).unwrap();
    let z = point.coords();
    println!("\nexample degeneracy point at lambda = 0.55 (gap {gap:.2e}):");
    println!(
        "  [Z] ~ ({:.4}{:+.4}i, {:.4}{:+.4}i, {:.4}{:+.4}i)",
        z[0].re, z[0].im, z[1].re, z[1].im, z[2].re, z[2].im
    );
    println!("  occupations (|Z1|^2, |Z2|^2, |Z3|^2) = ({:.4}, {:.4}, {:.4})",
        z[0].norm_sqr(), z[1].norm_sqr(), z[2].norm_sqr());
}
