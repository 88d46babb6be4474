//! SU(3) > O(3) > T_d branching of the Line and Orth bands.
//!
//! The electronic triplet carries L = 1, the N-quantum polyad carries
//! L = N, N-2, ..., so the band contents follow from Clebsch-Gordan
//! bookkeeping; subduction to the tetrahedral group goes through character
//! orthogonality against the hard-coded T_d table.

use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SymmetryError {
    #[error("non-integral multiplicity {value} for {irrep} in the subduction of L={l} (character-table bug)")]
    NonIntegralMultiplicity { irrep: TdIrrep, l: u32, value: f64 },
}

/// Inversion behavior of an O(3) irreducible representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Gerade,
    Ungerade,
}

impl Parity {
    fn sign(self) -> f64 {
        match self {
            Parity::Gerade => 1.0,
            Parity::Ungerade => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Parity::Gerade => "g",
            Parity::Ungerade => "u",
        }
    }
}

/// An O(3) irreducible representation D^{L, g/u} of dimension 2L + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct O3Irrep {
    pub l: u32,
    pub parity: Parity,
}

impl O3Irrep {
    pub fn new(l: u32, parity: Parity) -> Self {
        O3Irrep { l, parity }
    }

    pub fn dimension(&self) -> usize {
        2 * self.l as usize + 1
    }
}

impl fmt::Display for O3Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.l, self.parity.label())
    }
}

/// Irreducible representations of the tetrahedral group T_d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TdIrrep {
    A1,
    A2,
    E,
    F1,
    F2,
}

impl TdIrrep {
    pub const ALL: [TdIrrep; 5] = [TdIrrep::A1, TdIrrep::A2, TdIrrep::E, TdIrrep::F1, TdIrrep::F2];

    pub fn dimension(&self) -> usize {
        match self {
            TdIrrep::A1 | TdIrrep::A2 => 1,
            TdIrrep::E => 2,
            TdIrrep::F1 | TdIrrep::F2 => 3,
        }
    }

    /// Character row over the classes (E, 8C3, 3C2, 6S4, 6sigma_d).
    pub fn characters(&self) -> [f64; 5] {
        match self {
            TdIrrep::A1 => [1.0, 1.0, 1.0, 1.0, 1.0],
            TdIrrep::A2 => [1.0, 1.0, 1.0, -1.0, -1.0],
            TdIrrep::E => [2.0, -1.0, 2.0, 0.0, 0.0],
            TdIrrep::F1 => [3.0, 0.0, -1.0, 1.0, -1.0],
            TdIrrep::F2 => [3.0, 0.0, -1.0, -1.0, 1.0],
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            TdIrrep::A1 => "A1",
            TdIrrep::A2 => "A2",
            TdIrrep::E => "E",
            TdIrrep::F1 => "F1",
            TdIrrep::F2 => "F2",
        }
    }
}

impl fmt::Display for TdIrrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Conjugacy class of T_d with its rotation metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TdClass {
    Identity,
    C3,
    C2,
    S4,
    SigmaD,
}

impl TdClass {
    pub const ALL: [TdClass; 5] = [
        TdClass::Identity,
        TdClass::C3,
        TdClass::C2,
        TdClass::S4,
        TdClass::SigmaD,
    ];

    pub fn size(&self) -> usize {
        match self {
            TdClass::Identity => 1,
            TdClass::C3 => 8,
            TdClass::C2 => 3,
            TdClass::S4 | TdClass::SigmaD => 6,
        }
    }

    /// (rotation angle in radians, improper flag)
    pub fn rotation(&self) -> (f64, bool) {
        use std::f64::consts::PI;
        match self {
            TdClass::Identity => (0.0, false),
            TdClass::C3 => (2.0 * PI / 3.0, false),
            TdClass::C2 => (PI, false),
            TdClass::S4 => (PI / 2.0, true),
            TdClass::SigmaD => (PI, true),
        }
    }

    fn index(&self) -> usize {
        match self {
            TdClass::Identity => 0,
            TdClass::C3 => 1,
            TdClass::C2 => 2,
            TdClass::S4 => 3,
            TdClass::SigmaD => 4,
        }
    }
}

/// Which of the two SU(3) bands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Band {
    Line,
    Orth,
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Band::Line => "Line",
            Band::Orth => "Orth",
        })
    }
}

/// A multiset of T_d irreducible representations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IrrepMultiset {
    counts: BTreeMap<TdIrrep, u32>,
}

impl IrrepMultiset {
    pub fn add(&mut self, irrep: TdIrrep, multiplicity: u32) {
        if multiplicity > 0 {
            *self.counts.entry(irrep).or_insert(0) += multiplicity;
        }
    }

    pub fn multiplicity(&self, irrep: TdIrrep) -> u32 {
        self.counts.get(&irrep).copied().unwrap_or(0)
    }

    pub fn total_dimension(&self) -> usize {
        self.counts
            .iter()
            .map(|(ir, &c)| ir.dimension() * c as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TdIrrep, u32)> + '_ {
        self.counts.iter().map(|(&ir, &c)| (ir, c))
    }
}

impl FromIterator<(TdIrrep, u32)> for IrrepMultiset {
    fn from_iter<T: IntoIterator<Item = (TdIrrep, u32)>>(iter: T) -> Self {
        let mut set = IrrepMultiset::default();
        for (ir, c) in iter {
            set.add(ir, c);
        }
        set
    }
}

impl fmt::Display for IrrepMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .counts
            .iter()
            .map(|(ir, &c)| {
                if c == 1 {
                    ir.label().to_string()
                } else {
                    format!("{c}{ir}")
                }
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// L values of the N-quantum polyad of three oscillators: N, N-2, ..., 1 or 0.
pub fn polyad_o3_content(n: u32) -> Vec<u32> {
    (0..=n).rev().step_by(2).collect()
}

/// The band parity read off the branching tables: gerade for odd N,
/// ungerade for even N, uniform across the band.
pub fn band_parity(n: u32) -> Parity {
    if n % 2 == 1 {
        Parity::Gerade
    } else {
        Parity::Ungerade
    }
}

/// O(3) content of a band on polyad N.
///
/// Line carries L = N+1, N-1, ..., 1 or 0. Orth is what remains of
/// (L=1) x polyad content after the Line part is removed; the subtraction is
/// done explicitly and comes out as L = 1..N, each once.
pub fn band_o3_content(band: Band, n: u32) -> Vec<O3Irrep> {
    assert!(n >= 1, "bands need at least one vibrational quantum");
    let parity = band_parity(n);
    let line: Vec<u32> = (0..=(n + 1)).rev().step_by(2).collect();
    let ls: Vec<u32> = match band {
        Band::Line => line,
        Band::Orth => {
            // multiset (L=1) x polyad, minus the Line content
            let mut product: BTreeMap<u32, i64> = BTreeMap::new();
            for l in polyad_o3_content(n) {
                if l == 0 {
                    *product.entry(1).or_insert(0) += 1;
                } else {
                    for out in [l - 1, l, l + 1] {
                        *product.entry(out).or_insert(0) += 1;
                    }
                }
            }
            for l in line {
                let slot = product.entry(l).or_insert(0);
                *slot -= 1;
                assert!(*slot >= 0, "Line content must embed in the product");
            }
            product
                .into_iter()
                .flat_map(|(l, c)| std::iter::repeat_n(l, c as usize))
                .collect()
        }
    };
    let mut ls = ls;
    ls.sort_unstable();
    ls.into_iter().map(|l| O3Irrep::new(l, parity)).collect()
}

/// Character of D^{L, g/u} on a T_d conjugacy class:
/// chi^L(theta) = sin((2L+1) theta/2) / sin(theta/2), with the parity sign
/// on improper classes.
pub fn o3_character_on_td_class(irrep: O3Irrep, class: TdClass) -> f64 {
    let (theta, improper) = class.rotation();
    let chi = if theta.abs() < 1e-12 {
        (2 * irrep.l + 1) as f64
    } else {
        let half = 0.5 * theta;
        ((2 * irrep.l + 1) as f64 * half).sin() / half.sin()
    };
    if improper {
        irrep.parity.sign() * chi
    } else {
        chi
    }
}

/// Reduction of an O(3) irreducible representation to T_d by character
/// orthogonality: n(Gamma) = (1/24) sum |class| chi_Gamma chi^L.
pub fn subduce_o3_to_td(irrep: O3Irrep) -> Result<IrrepMultiset, SymmetryError> {
    let chi_l: Vec<f64> = TdClass::ALL
        .iter()
        .map(|&cl| o3_character_on_td_class(irrep, cl))
        .collect();
    let mut out = IrrepMultiset::default();
    for gamma in TdIrrep::ALL {
        let chars = gamma.characters();
        let mut acc = 0.0;
        for class in TdClass::ALL {
            let k = class.index();
            acc += class.size() as f64 * chars[k] * chi_l[k];
        }
        let value = acc / 24.0;
        let rounded = value.round();
        if (value - rounded).abs() > 1e-9 || rounded < -0.5 {
            return Err(SymmetryError::NonIntegralMultiplicity {
                irrep: gamma,
                l: irrep.l,
                value,
            });
        }
        out.add(gamma, rounded as u32);
    }
    Ok(out)
}

/// T_d content of a band: union of the subductions of its O(3) content.
pub fn band_td_content(band: Band, n: u32) -> Result<IrrepMultiset, SymmetryError> {
    let mut out = IrrepMultiset::default();
    for irrep in band_o3_content(band, n) {
        for (gamma, c) in subduce_o3_to_td(irrep)?.iter() {
            out.add(gamma, c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyad::PolyadBasis;
    use crate::quantum::{weyl_line_dimension, weyl_orth_dimension};
    
    use num_complex::Complex64;

    fn o3(l: u32, parity: Parity) -> O3Irrep {
        O3Irrep::new(l, parity)
    }

    fn multiset(entries: &[(TdIrrep, u32)]) -> IrrepMultiset {
        entries.iter().copied().collect()
    }

    /// Independent oracle: diagonalize L^2 built from the ladder operators
    /// and read off the angular-momentum multiplets.
    fn l_values_from_l_squared(n: u32) -> Vec<u32> {
        let basis = PolyadBasis::new(n);
        let dim = basis.dim();
        let lad = |i: usize, j: usize| basis.ladder_matrix(i, j).unwrap();
        let i = Complex64::i();
        let lx = (lad(2, 3) - lad(3, 2)) * (-i);
        let ly = (lad(3, 1) - lad(1, 3)) * (-i);
        let lz = (lad(1, 2) - lad(2, 1)) * (-i);
        let l2 = &lx * &lx + &ly * &ly + &lz * &lz;
        let herm_dev = (&l2 - &l2.adjoint()).map(|z| z.norm()).max();
        assert!(herm_dev < 1e-12);
        let mut evals: Vec<f64> = l2.symmetric_eigenvalues().iter().copied().collect();
        evals.sort_by(f64::total_cmp);

        let mut ls = Vec::new();
        let mut k = 0;
        while k < dim {
            let l = (0.5 * ((1.0 + 4.0 * evals[k]).sqrt() - 1.0)).round() as u32;
            let degeneracy = 2 * l as usize + 1;
            for offset in 0..degeneracy {
                let expect = (l * (l + 1)) as f64;
                assert!(
                    (evals[k + offset] - expect).abs() < 1e-8,
                    "N={n}: eigenvalue {} does not sit in the L={l} multiplet",
                    evals[k + offset]
                );
            }
            ls.push(l);
            k += degeneracy;
        }
        ls.sort_unstable();
        ls
    }

    #[test]
    fn polyad_o3_content_matches_l_squared_oracle() {
        for n in 0..=8 {
            let mut expected = polyad_o3_content(n);
            expected.sort_unstable();
            assert_eq!(expected, l_values_from_l_squared(n), "N={n}");
        }
        assert_eq!(polyad_o3_content(0), vec![0]);
        assert_eq!(polyad_o3_content(2), vec![2, 0]);
        assert_eq!(polyad_o3_content(3), vec![3, 1]);
        let dim: usize = polyad_o3_content(3).iter().map(|&l| 2 * l as usize + 1).sum();
        assert_eq!(dim, 10);
    }

    #[test]
    fn character_values() {
        assert_eq!(
            o3_character_on_td_class(o3(1, Parity::Gerade), TdClass::C2),
            -1.0
        );
        assert_eq!(
            o3_character_on_td_class(o3(2, Parity::Ungerade), TdClass::SigmaD),
            -1.0
        );
        for class in TdClass::ALL {
            assert!(
                (o3_character_on_td_class(o3(0, Parity::Gerade), class) - 1.0).abs() < 1e-12
            );
        }
        // identity class carries the dimension
        assert_eq!(
            o3_character_on_td_class(o3(7, Parity::Gerade), TdClass::Identity),
            15.0
        );
    }

    #[test]
    fn character_table_orthogonality() {
        // rows of the T_d table are orthonormal under the class weights
        for a in TdIrrep::ALL {
            for b in TdIrrep::ALL {
                let mut acc = 0.0;
                for class in TdClass::ALL {
                    let k = class.index();
                    acc += class.size() as f64 * a.characters()[k] * b.characters()[k];
                }
                let expect = if a == b { 24.0 } else { 0.0 };
                assert!((acc - expect).abs() < 1e-12, "{a} . {b} = {acc}");
            }
        }
    }

    #[test]
    fn subduction_examples() {
        let f1 = subduce_o3_to_td(o3(1, Parity::Gerade)).unwrap();
        assert_eq!(f1, multiset(&[(TdIrrep::F1, 1)]));

        let l3u = subduce_o3_to_td(o3(3, Parity::Ungerade)).unwrap();
        assert_eq!(
            l3u,
            multiset(&[(TdIrrep::A1, 1), (TdIrrep::F1, 1), (TdIrrep::F2, 1)])
        );

        let l0 = subduce_o3_to_td(o3(0, Parity::Gerade)).unwrap();
        assert_eq!(l0, multiset(&[(TdIrrep::A1, 1)]));
    }

    #[test]
    fn subduction_preserves_dimension() {
        for l in 0..=15 {
            for parity in [Parity::Gerade, Parity::Ungerade] {
                let sub = subduce_o3_to_td(o3(l, parity)).unwrap();
                assert_eq!(sub.total_dimension(), 2 * l as usize + 1, "L={l}");
            }
        }
    }

    #[test]
    fn band_o3_contents() {
        use Parity::*;
        assert_eq!(
            band_o3_content(Band::Line, 3),
            vec![o3(0, Gerade), o3(2, Gerade), o3(4, Gerade)]
        );
        assert_eq!(
            band_o3_content(Band::Orth, 2),
            vec![o3(1, Ungerade), o3(2, Ungerade)]
        );
        let orth5 = band_o3_content(Band::Orth, 5);
        assert_eq!(
            orth5,
            (1..=5).map(|l| o3(l, Gerade)).collect::<Vec<_>>()
        );
        let dim: usize = orth5.iter().map(O3Irrep::dimension).sum();
        assert_eq!(dim, 35);
    }

    #[test]
    fn orth_band_is_l_one_through_n() {
        // the Clebsch-Gordan subtraction lands on {1..N}, each once
        for n in 1..=12 {
            let orth = band_o3_content(Band::Orth, n);
            let expect: Vec<O3Irrep> = (1..=n).map(|l| o3(l, band_parity(n))).collect();
            assert_eq!(orth, expect, "N={n}");
        }
    }

    #[test]
    fn band_dimensions_bookkeeping() {
        for n in 1..=12 {
            let line: usize = band_o3_content(Band::Line, n)
                .iter()
                .map(O3Irrep::dimension)
                .sum();
            assert_eq!(line, weyl_line_dimension(n), "Line N={n}");
            let orth: usize = band_o3_content(Band::Orth, n)
                .iter()
                .map(O3Irrep::dimension)
                .sum();
            assert_eq!(orth, weyl_orth_dimension(n), "Orth N={n}");

            assert_eq!(
                band_td_content(Band::Line, n).unwrap().total_dimension(),
                weyl_line_dimension(n)
            );
            assert_eq!(
                band_td_content(Band::Orth, n).unwrap().total_dimension(),
                weyl_orth_dimension(n)
            );
        }
    }

    #[test]
    fn bands_exhaust_the_electronic_times_polyad_product() {
        for n in 1..=12u32 {
            let mut combined: BTreeMap<u32, i64> = BTreeMap::new();
            for ir in band_o3_content(Band::Line, n) {
                *combined.entry(ir.l).or_insert(0) += 1;
            }
            for ir in band_o3_content(Band::Orth, n) {
                *combined.entry(ir.l).or_insert(0) += 1;
            }
            let mut product: BTreeMap<u32, i64> = BTreeMap::new();
            for l in polyad_o3_content(n) {
                if l == 0 {
                    *product.entry(1).or_insert(0) += 1;
                } else {
                    for out in [l - 1, l, l + 1] {
                        *product.entry(out).or_insert(0) += 1;
                    }
                }
            }
            assert_eq!(combined, product, "N={n}");
        }
    }

    type TableRow = (Band, u32, Vec<(TdIrrep, u32)>, Vec<u32>);

    #[test]
    fn branching_table_golden() {
        use Band::*;
        use TdIrrep::*;
        // T_d content of both bands for the first five polyads. The Line
        // N=5 cell is the arithmetically consistent one (3 A1): the nominal
        // source prints 2 A1, which contradicts its own O(3) row and the
        // Weyl dimension 28.
        let cases: Vec<TableRow> = vec![
            (Line, 1, vec![(A1, 1), (E, 1), (F2, 1)], vec![0, 2]),
            (Orth, 1, vec![(F1, 1)], vec![1]),
            (Line, 2, vec![(A1, 1), (F1, 1), (F2, 2)], vec![1, 3]),
            (Orth, 2, vec![(E, 1), (F1, 1), (F2, 1)], vec![1, 2]),
            (
                Line,
                3,
                vec![(A1, 2), (E, 2), (F1, 1), (F2, 2)],
                vec![0, 2, 4],
            ),
            (
                Orth,
                3,
                vec![(A2, 1), (E, 1), (F1, 2), (F2, 2)],
                vec![1, 2, 3],
            ),
            (
                Line,
                4,
                vec![(A1, 1), (E, 1), (F1, 2), (F2, 4)],
                vec![1, 3, 5],
            ),
            (
                Orth,
                4,
                vec![(A1, 1), (A2, 1), (E, 2), (F1, 3), (F2, 3)],
                vec![1, 2, 3, 4],
            ),
            (
                Line,
                5,
                vec![(A1, 3), (A2, 1), (E, 3), (F1, 2), (F2, 4)],
                vec![0, 2, 4, 6],
            ),
            (
                Orth,
                5,
                vec![(A1, 1), (A2, 1), (E, 3), (F1, 5), (F2, 4)],
                vec![1, 2, 3, 4, 5],
            ),
        ];
        for (band, n, td, ls) in cases {
            let got_td = band_td_content(band, n).unwrap();
            assert_eq!(got_td, multiset(&td), "{band} N={n}: got {got_td}");
            let got_o3 = band_o3_content(band, n);
            let expect_o3: Vec<O3Irrep> =
                ls.into_iter().map(|l| o3(l, band_parity(n))).collect();
            assert_eq!(got_o3, expect_o3, "{band} N={n} O(3) content");
        }
    }
}
