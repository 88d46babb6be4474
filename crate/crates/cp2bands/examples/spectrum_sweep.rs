//! Sweep the coupling parameter and watch three level groups reorganize into
//! two.
//!
//! Run with: cargo run --release --example spectrum_sweep

use cp2bands::quantum::sweep;

fn main() {
    let n = 4;
    let grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let spectra = sweep(n, &grid, 5.0).expect("valid sweep");

    println!("polyad N = {n}: 3 N0 = {} levels per lambda", spectra[0].energies.len());
    println!("{:>8}  {:<16}  band edges", "lambda", "clusters");
    for bs in &spectra {
        let counts: Vec<String> = bs.cluster_counts().iter().map(|c| c.to_string()).collect();
        let edges: Vec<String> = bs
            .clusters
            .iter()
            .map(|&(s, c)| format!("[{:+.3}, {:+.3}]", bs.energies[s], bs.energies[s + c - 1]))
            .collect();
        let flag = if bs.ambiguous { "  (bands in contact)" } else { "" };
        println!(
            "{:>8.2}  {:<16}  {}{}",
            bs.lambda,
            counts.join("/"),
            edges.join(" "),
            flag
        );
    }
}
