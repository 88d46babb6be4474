//! Polyad Hilbert spaces of three degenerate oscillator modes.
//!
//! A polyad is the degenerate multiplet of harmonic-oscillator states with a
//! fixed total quantum number N; its dimension is (N+1)(N+2)/2. This module
//! enumerates the occupation basis and represents the bilinear operators
//! a_i^+ a_j restricted to one polyad.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyadError {
    #[error("mode index {0} out of range 1..=3")]
    ModeOutOfRange(usize),
}

/// Number of occupation triples (n1, n2, n3) with n1 + n2 + n3 = N.
pub fn polyad_dimension(n: u32) -> usize {
    let n = n as usize;
    (n + 1) * (n + 2) / 2
}

/// Ordered occupation-number basis of the N-quantum polyad.
///
/// States are sorted lexicographically descending in (n1, n2, n3), so the
/// first state is (N, 0, 0) and the last is (0, 0, N). The ordering is fixed
/// to make every downstream matrix reproducible.
#[derive(Debug, Clone)]
pub struct PolyadBasis {
    pub n: u32,
    pub states: Vec<[u32; 3]>,
    index: HashMap<[u32; 3], usize>,
}

impl PolyadBasis {
    pub fn new(n: u32) -> Self {
        let mut states = Vec::with_capacity(polyad_dimension(n));
        for n1 in (0..=n).rev() {
            for n2 in (0..=(n - n1)).rev() {
                states.push([n1, n2, n - n1 - n2]);
            }
        }
        let index = states
            .iter()
            .enumerate()
            .map(|(pos, &s)| (s, pos))
            .collect();
        PolyadBasis { n, states, index }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Position of an occupation triple in the basis, if it belongs to it.
    pub fn position(&self, state: [u32; 3]) -> Option<usize> {
        self.index.get(&state).copied()
    }

    /// Matrix of a_i^+ a_j on this polyad (1-based mode indices).
    ///
    /// The entry between out-state m and in-state s is sqrt((s_i + 1) * s_j)
    /// where m is s with one quantum moved from mode j to mode i; for i = j
    /// the matrix is diagonal with entries s_i. Total quanta are conserved,
    /// so the operator maps the polyad to itself.
    pub fn ladder_matrix(&self, i: usize, j: usize) -> Result<DMatrix<Complex64>, PolyadError> {
        if !(1..=3).contains(&i) {
            return Err(PolyadError::ModeOutOfRange(i));
        }
        if !(1..=3).contains(&j) {
            return Err(PolyadError::ModeOutOfRange(j));
        }
        let (i, j) = (i - 1, j - 1);
        let dim = self.dim();
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (col, s) in self.states.iter().enumerate() {
            if i == j {
                m[(col, col)] = Complex64::new(s[i] as f64, 0.0);
                continue;
            }
            if s[j] == 0 {
                continue;
            }
            let mut out = *s;
            out[j] -= 1;
            out[i] += 1;
            let row = self.position(out).expect("moved state stays in polyad");
            let amp = (((s[i] + 1) * s[j]) as f64).sqrt();
            m[(row, col)] = Complex64::new(amp, 0.0);
        }
        Ok(m)
    }
}
