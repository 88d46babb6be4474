//! Print the O(3) and T_d branching of both bands for the low polyads.
//!
//! Run with: cargo run --release --example symmetry_tables

use cp2bands::symmetry::{band_o3_content, band_td_content, Band};

fn main() {
    println!(
        "{:>3} {:>6} {:>5}  {:<24} O(3) content",
        "N", "band", "dim", "T_d content"
    );
    for n in 1..=5u32 {
        for band in [Band::Line, Band::Orth] {
            let td = band_td_content(band, n).expect("integral multiplicities");
            let o3: Vec<String> = band_o3_content(band, n)
                .iter()
                .map(|ir| ir.to_string())
                .collect();
            println!(
                "{:>3} {:>6} {:>5}  {:<24} {}",
                n,
                band.to_string(),
                td.total_dimension(),
                td.to_string(),
                o3.join(",")
            );
        }
    }
}
