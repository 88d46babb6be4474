//! Predict band populations from topology alone and confront them with
//! exact diagonalization.
//!
//! Run with: cargo run --release --example level_counts

use cp2bands::chern::ChernClass;
use cp2bands::index::{chern_character, polyad_character, predicted_count, todd_cp2, wedge};
use cp2bands::quantum::band_spectrum;

fn main() {
    let line = ChernClass::new(1, 1, 0).unwrap();
    let orth = ChernClass::new(2, -1, 1).unwrap();

    println!("ingredients for the level-count formula at N = 4:");
    println!("  Ch(line bundle)  = {}", chern_character(&line));
    println!("  Ch(coupled pair) = {}", chern_character(&orth));
    println!("  Ch(polyad)       = {}", polyad_character(4));
    println!("  Todd(CP^2)       = {}", todd_cp2());
    let product = wedge(
        &wedge(&chern_character(&line), &polyad_character(4)),
        &todd_cp2(),
    );
    println!("  product          = {}  -> count = x^2 coefficient", product);

    println!(
        "\n{:>3}  {:>9} {:>9}  {:>9} {:>9}",
        "N", "pred Line", "obs Line", "pred Orth", "obs Orth"
    );
    for n in 1..=8u32 {
        let two = band_spectrum(n, 0.9, 5.0).expect("two-band regime");
        let counts = two.cluster_counts();
        println!(
            "{:>3}  {:>9} {:>9}  {:>9} {:>9}",
            n,
            predicted_count(&line, n).unwrap(),
            counts[1],
            predicted_count(&orth, n).unwrap(),
            counts[0],
        );
    }
    println!("\ncounts are quadratic in N with leading coefficient r/2");
}
