//! The classical matrix symbol H_lambda([Z]) on CP^2 and its band structure.
//!
//! H_lambda = (1 - lambda) * diag(-1, 0, 1) + lambda * |Z><Z| interpolates
//! between a pure electronic splitting and an SU(3)-invariant vibronic
//! coupling. Everything here is a pure function of (lambda, [Z]); points of
//! CP^2 are carried as unit representatives and all outputs are invariant
//! under a global phase of Z.

use crate::herm3::{self, CMat3};
use nalgebra::Vector3;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

/// Normalization slack accepted on phase-point representatives.
pub const NORM_TOL: f64 = 1e-12;

/// Gap below which a band subset no longer defines a projector.
pub const GAP_CLOSED_TOL: f64 = 1e-9;

/// Characteristic-polynomial discriminant below which a point is flagged
/// degenerate, independent of eigenvalue ordering noise.
pub const DISCRIMINANT_TOL: f64 = 1e-18;

#[derive(Debug, Error, PartialEq)]
pub enum SymbolError {
    #[error("phase point is not normalized: |Z|^2 = {0}")]
    NotNormalized(f64),
    #[error("lambda {0} outside [0, 1]")]
    LambdaOutOfRange(f64),
    #[error("band subset {bands:?} touches its complement at this point (gap {gap:e})")]
    GapClosed { bands: BandSet, gap: f64 },
    #[error("empty band subset")]
    EmptyBandSet,
}

/// A representative Z of a ray [Z] in CP^2, kept at unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    z: [Complex64; 3],
}

impl PhasePoint {
    /// Normalizes the given homogeneous triple. Errors only on the zero vector.
    pub fn new(z: [Complex64; 3]) -> Result<Self, SymbolError> {
        let norm2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        if norm2 <= 0.0 || !norm2.is_finite() {
            return Err(SymbolError::NotNormalized(norm2));
        }
        let inv = 1.0 / norm2.sqrt();
        Ok(PhasePoint {
            z: [z[0] * inv, z[1] * inv, z[2] * inv],
        })
    }

    /// A unit triple taken as-is; checked against `NORM_TOL`.
    pub fn from_unit(z: [Complex64; 3]) -> Result<Self, SymbolError> {
        let norm2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(SymbolError::NotNormalized(norm2));
        }
        Ok(PhasePoint { z })
    }

    pub fn coords(&self) -> &[Complex64; 3] {
        &self.z
    }
}

/// Affine-chart coordinates on CP^2: homogeneous slot `chart` is set to 1 and
/// `w` fills the remaining two slots in cyclic order.
#[derive(Debug, Clone, Copy)]
pub struct ChartPoint {
    pub chart: usize,
    pub w: [Complex64; 2],
}

impl ChartPoint {
    pub fn new(chart: usize, w: [Complex64; 2]) -> Self {
        assert!((1..=3).contains(&chart), "chart index must be 1..=3");
        ChartPoint { chart, w }
    }
}

/// Embedding of a chart point as a normalized homogeneous triple.
pub fn chart_embed(p: &ChartPoint) -> PhasePoint {
    let one = Complex64::new(1.0, 0.0);
    let z = match p.chart {
        1 => [one, p.w[0], p.w[1]],
        2 => [p.w[1], one, p.w[0]],
        3 => [p.w[0], p.w[1], one],
        _ => unreachable!("chart index validated on construction"),
    };
    PhasePoint::new(z).expect("finite chart coordinates embed to a nonzero triple")
}

/// The 3x3 Hermitian symbol at one phase-space point.
#[derive(Debug, Clone, Copy)]
pub struct SymbolMatrix {
    pub m: CMat3,
    pub lambda: f64,
}

/// Which of the three bands (1 = lowest) a projector spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandSet {
    mask: u8,
}

impl BandSet {
    pub fn new(bands: &[usize]) -> Result<Self, SymbolError> {
        let mut mask = 0u8;
        for &b in bands {
            assert!((1..=3).contains(&b), "band index must be 1..=3");
            mask |= 1 << (b - 1);
        }
        if mask == 0 {
            return Err(SymbolError::EmptyBandSet);
        }
        Ok(BandSet { mask })
    }

    pub fn single(band: usize) -> Self {
        Self::new(&[band]).expect("nonempty")
    }

    pub fn contains(&self, band: usize) -> bool {
        self.mask & (1 << (band - 1)) != 0
    }

    pub fn rank(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn complement(&self) -> Option<BandSet> {
        let mask = !self.mask & 0b111;
        (mask != 0).then_some(BandSet { mask })
    }

    pub fn bands(&self) -> Vec<usize> {
        (1..=3).filter(|&b| self.contains(b)).collect()
    }

    /// Smallest spectral gap separating this subset from its complement.
    /// Infinite for the full set.
    pub fn boundary_gap(&self, evals: &[f64; 3]) -> f64 {
        let mut gap = f64::INFINITY;
        for k in 1..=2 {
            if self.contains(k) != self.contains(k + 1) {
                gap = gap.min(evals[k] - evals[k - 1]);
            }
        }
        gap
    }
}

impl std::fmt::Display for BandSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v: Vec<String> = self.bands().iter().map(|b| b.to_string()).collect();
        write!(f, "{{{}}}", v.join(","))
    }
}

fn check_lambda(lambda: f64) -> Result<(), SymbolError> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(SymbolError::LambdaOutOfRange(lambda));
    }
    Ok(())
}

/// H_lambda([Z]) = (1 - lambda) diag(-1, 0, 1) + lambda |Z><Z|.
pub fn symbol_matrix(lambda: f64, p: &PhasePoint) -> Result<SymbolMatrix, SymbolError> {
    check_lambda(lambda)?;
    let z = p.coords();
    let mut m = CMat3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = z[i] * z[j].conj() * lambda;
        }
    }
    m[(0, 0)] -= Complex64::new(1.0 - lambda, 0.0);
    m[(2, 2)] += Complex64::new(1.0 - lambda, 0.0);
    Ok(SymbolMatrix { m, lambda })
}

/// Sorted eigenvalues E1 <= E2 <= E3 of the symbol at (lambda, p).
pub fn symbol_spectrum(lambda: f64, p: &PhasePoint) -> Result<[f64; 3], SymbolError> {
    Ok(herm3::eigvals(&symbol_matrix(lambda, p)?.m))
}

/// E_{k+1} - E_k for pair = (k, k+1), k in {1, 2}.
pub fn gap(lambda: f64, p: &PhasePoint, pair: BandPair) -> Result<f64, SymbolError> {
    let e = symbol_spectrum(lambda, p)?;
    Ok(e[pair.upper() - 1] - e[pair.lower() - 1])
}

/// A pair of consecutive bands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandPair {
    Lower,
    Upper,
}

impl BandPair {
    pub fn new(k: usize) -> Self {
        match k {
            1 => BandPair::Lower,
            2 => BandPair::Upper,
            _ => panic!("band pair index must be 1 or 2"),
        }
    }

    pub fn lower(&self) -> usize {
        match self {
            BandPair::Lower => 1,
            BandPair::Upper => 2,
        }
    }

    pub fn upper(&self) -> usize {
        self.lower() + 1
    }
}

/// Discriminant of the characteristic polynomial, prod_{i<j} (E_i - E_j)^2,
/// computed from matrix invariants without an eigensolve. Vanishes exactly at
/// degeneracies and is independent of eigenvalue ordering.
pub fn discriminant(m: &CMat3) -> f64 {
    // For the traceless part b with p2 = tr(b^2)/2 and q = det(b):
    // disc = 4 p2^3 - 27 q^2.
    let third = 1.0 / 3.0;
    let shift = (m[(0, 0)].re + m[(1, 1)].re + m[(2, 2)].re) * third;
    let d0 = m[(0, 0)].re - shift;
    let d1 = m[(1, 1)].re - shift;
    let d2 = m[(2, 2)].re - shift;
    let off = m[(0, 1)].norm_sqr() + m[(0, 2)].norm_sqr() + m[(1, 2)].norm_sqr();
    let p2 = (d0 * d0 + d1 * d1 + d2 * d2) / 2.0 + off;
    let det_b = d0 * (d1 * d2 - m[(1, 2)].norm_sqr()) - d1 * m[(0, 2)].norm_sqr()
        - d2 * m[(0, 1)].norm_sqr()
        + 2.0 * (m[(0, 1)] * m[(1, 2)] * m[(0, 2)].conj()).re;
    4.0 * p2 * p2 * p2 - 27.0 * det_b * det_b
}

/// Orthogonal projector onto the span of the selected bands.
///
/// Built from spectral polynomials in the symbol matrix, so it needs no
/// eigenvectors and is phase-invariant by construction. Requires the subset
/// to be gapped from its complement (`GAP_CLOSED_TOL`).
pub fn band_projector(lambda: f64, p: &PhasePoint, bands: BandSet) -> Result<CMat3, SymbolError> {
    let sm = symbol_matrix(lambda, p)?;
    projector_of_matrix(&sm.m, bands)
}

/// Projector onto a band subset of an arbitrary Hermitian 3x3 matrix.
pub fn projector_of_matrix(m: &CMat3, bands: BandSet) -> Result<CMat3, SymbolError> {
    let evals = herm3::eigvals(m);
    let gap = bands.boundary_gap(&evals);
    if gap <= GAP_CLOSED_TOL {
        return Err(SymbolError::GapClosed { bands, gap });
    }
    Ok(match bands.rank() {
        3 => CMat3::identity(),
        1 => {
            let k = bands.bands()[0] - 1;
            rank1_projector(m, &evals, k)
        }
        2 => {
            let k = bands.complement().expect("rank 2 has a complement").bands()[0] - 1;
            CMat3::identity() - rank1_projector(m, &evals, k)
        }
        _ => unreachable!("rank is 1..=3"),
    })
}

/// P_k = prod_{j != k} (m - E_j) / (E_k - E_j); well-conditioned whenever
/// band k is gapped from the other two.
fn rank1_projector(m: &CMat3, evals: &[f64; 3], k: usize) -> CMat3 {
    let others: Vec<usize> = (0..3).filter(|&j| j != k).collect();
    let id = CMat3::identity();
    let f0 = m - id * Complex64::new(evals[others[0]], 0.0);
    let f1 = m - id * Complex64::new(evals[others[1]], 0.0);
    let denom = (evals[k] - evals[others[0]]) * (evals[k] - evals[others[1]]);
    (f0 * f1) / Complex64::new(denom, 0.0)
}

/// Grid + refinement controls for the phase-space gap search.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct SearchConfig {
    /// Grid points per axis on each of the three affine charts.
    pub grid_per_axis: usize,
    /// Coordinate-descent sweeps refining the best grid cell.
    pub refine_sweeps: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_per_axis: 16,
            refine_sweeps: 64,
        }
    }
}

/// Compactified chart coordinates: w_k = tan(t_k) e^{i phi_k}; the embedding
/// stays valid for t outside [0, pi/2) because tan is smooth through the
/// pole once the triple is renormalized.
fn chart_point(chart: usize, x: &[f64; 4]) -> PhasePoint {
    let w0 = Complex64::from_polar(x[0].tan(), x[1]);
    let w1 = Complex64::from_polar(x[2].tan(), x[3]);
    chart_embed(&ChartPoint::new(chart, [w0, w1]))
}

/// Golden-section minimum of g(s) over [lo, hi].
fn golden_line_min(g: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let golden = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - golden * (hi - lo);
    let mut d = lo + golden * (hi - lo);
    let mut fc = g(c);
    let mut fd = g(d);
    for _ in 0..40 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - golden * (hi - lo);
            fc = g(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + golden * (hi - lo);
            fd = g(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Derivative-free descent of `f` from `start`: per sweep, a golden-section
/// line search along each coordinate followed by a pattern move along the
/// sweep's net displacement. Descending on the squared objective keeps the
/// landscape smooth at conical zeros, and the pattern move tracks curved
/// valleys that stall a purely axis-aligned search. The bracket radius
/// shrinks only when a sweep brings no improvement.
fn pattern_descent(
    f: &dyn Fn(&[f64; 4]) -> f64,
    start: [f64; 4],
    radius0: [f64; 4],
    sweeps: usize,
) -> (f64, [f64; 4]) {
    let sq = |x: &[f64; 4]| {
        let v = f(x);
        v * v
    };
    let mut x = start;
    let mut best = sq(&x);
    let mut radius = radius0;
    for _ in 0..sweeps {
        let sweep_start = x;
        let mut improved = false;
        for axis in 0..4 {
            let g = |t: f64| {
                let mut y = x;
                y[axis] = t;
                sq(&y)
            };
            let (t, ft) = golden_line_min(&g, x[axis] - radius[axis], x[axis] + radius[axis]);
            if ft < best * (1.0 - 1e-12) {
                improved = true;
            }
            if ft < best {
                best = ft;
                x[axis] = t;
            }
        }

        // pattern move: extrapolate along the net displacement of the sweep
        let d = [
            x[0] - sweep_start[0],
            x[1] - sweep_start[1],
            x[2] - sweep_start[2],
            x[3] - sweep_start[3],
        ];
        if d.iter().any(|&v| v != 0.0) {
            let g = |s: f64| {
                let y = [
                    x[0] + s * d[0],
                    x[1] + s * d[1],
                    x[2] + s * d[2],
                    x[3] + s * d[3],
                ];
                sq(&y)
            };
            let (s, fs) = golden_line_min(&g, -1.0, 3.0);
            if fs < best {
                if fs < best * (1.0 - 1e-12) {
                    improved = true;
                }
                best = fs;
                for (xi, di) in x.iter_mut().zip(&d) {
                    *xi += s * di;
                }
            }
        }

        if !improved {
            for r in &mut radius {
                *r *= 0.25;
            }
        }
    }
    (best.sqrt(), x)
}

/// Minimum of the band gap over CP^2, with the argmin representative.
///
/// Scans midpoint grids on all three affine charts, keeps the best few
/// mutually separated cells, and refines each by coordinate-wise
/// golden-section descent on the squared gap. Deterministic for a fixed
/// config.
pub fn min_gap_over_phase_space(
    lambda: f64,
    pair: BandPair,
    search: &SearchConfig,
) -> Result<(f64, PhasePoint), SymbolError> {
    check_lambda(lambda)?;
    let n = search.grid_per_axis.max(2);
    let ht = FRAC_PI_2 / n as f64;
    let hphi = 2.0 * PI / n as f64;

    let eval = |chart: usize, x: &[f64; 4]| -> f64 {
        let p = chart_point(chart, x);
        gap(lambda, &p, pair).expect("lambda validated")
    };

    // best grid cells, kept apart so multistart explores distinct basins
    const STARTS: usize = 3;
    let mut candidates: Vec<(f64, usize, [f64; 4])> = Vec::new();
    let separated = |a: &[f64; 4], b: &[f64; 4]| {
        let dphi = |p: f64, q: f64| {
            let d = (p - q).rem_euclid(2.0 * PI);
            d.min(2.0 * PI - d)
        };
        (a[0] - b[0]).abs() > 3.0 * ht
            || dphi(a[1], b[1]) > 3.0 * hphi
            || (a[2] - b[2]).abs() > 3.0 * ht
            || dphi(a[3], b[3]) > 3.0 * hphi
    };
    for chart in 1..=3 {
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    for i3 in 0..n {
                        let x = [
                            (i0 as f64 + 0.5) * ht,
                            (i1 as f64 + 0.5) * hphi,
                            (i2 as f64 + 0.5) * ht,
                            (i3 as f64 + 0.5) * hphi,
                        ];
                        let g = eval(chart, &x);
                        if let Some(slot) = candidates
                            .iter_mut()
                            .find(|(_, c, y)| *c == chart && !separated(y, &x))
                        {
                            if g < slot.0 {
                                *slot = (g, chart, x);
                            }
                            continue;
                        }
                        candidates.push((g, chart, x));
                        candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
                        candidates.truncate(8 * STARTS);
                    }
                }
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    candidates.truncate(STARTS);

    // refine in the chart's Cartesian coordinates (Re w, Im w): the polar
    // grid coordinates are singular at w = 0 and descent stalls there
    let cartesian_point = |chart: usize, x: &[f64; 4]| -> PhasePoint {
        let w0 = Complex64::new(x[0], x[1]);
        let w1 = Complex64::new(x[2], x[3]);
        chart_embed(&ChartPoint::new(chart, [w0, w1]))
    };
    let mut best: Option<(f64, usize, [f64; 4])> = None;
    for (_, chart, tphi) in candidates {
        let w0 = Complex64::from_polar(tphi[0].tan(), tphi[1]);
        let w1 = Complex64::from_polar(tphi[2].tan(), tphi[3]);
        let start = [w0.re, w0.im, w1.re, w1.im];
        // local cell size in the w plane: radial stretch of tan plus the
        // tangential arc, floored to the cell size at the chart center
        let cell = |t: f64| {
            let sec2 = 1.0 + t.tan() * t.tan();
            (sec2 * ht).max(t.tan().abs() * hphi).max(ht)
        };
        let radius = [cell(tphi[0]), cell(tphi[0]), cell(tphi[2]), cell(tphi[2])];
        let f = |x: &[f64; 4]| {
            gap(lambda, &cartesian_point(chart, x), pair).expect("lambda validated")
        };
        let (g, x) = pattern_descent(&f, start, radius, search.refine_sweeps);
        if best.as_ref().is_none_or(|(gb, _, _)| g < *gb) {
            best = Some((g, chart, x));
        }
    }
    let (g_best, chart, x) = best.expect("at least one candidate cell");
    Ok((g_best, cartesian_point(chart, &x)))
}

/// Local refinement of the pair gap from a seed ray, in the Cartesian
/// coordinates of the affine chart where the seed is best conditioned.
/// Used to continue a located degeneracy to nearby lambda values, where the
/// funnel is too narrow for the global grid.
pub fn refine_min_gap(
    lambda: f64,
    pair: BandPair,
    seed: &PhasePoint,
    search: &SearchConfig,
) -> Result<(f64, PhasePoint), SymbolError> {
    check_lambda(lambda)?;
    let z = seed.coords();
    let pivot = (0..3)
        .max_by(|&a, &b| z[a].norm_sqr().total_cmp(&z[b].norm_sqr()))
        .expect("three slots");
    // chart layouts match chart_embed: chart k puts 1 in slot k
    let (chart, w) = match pivot {
        0 => (1, [z[1] / z[0], z[2] / z[0]]),
        1 => (2, [z[2] / z[1], z[0] / z[1]]),
        _ => (3, [z[0] / z[2], z[1] / z[2]]),
    };
    let start = [w[0].re, w[0].im, w[1].re, w[1].im];
    let f = |x: &[f64; 4]| {
        let p = chart_embed(&ChartPoint::new(
            chart,
            [Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3])],
        ));
        gap(lambda, &p, pair).expect("lambda validated")
    };
    let radius = [0.1; 4];
    let (g, x) = pattern_descent(&f, start, radius, search.refine_sweeps);
    let refined = chart_embed(&ChartPoint::new(
        chart,
        [Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3])],
    ));
    Ok((g, refined))
}

/// Maximal lambda-intervals where the pair's phase-space gap stays below tol.
///
/// Scans a uniform grid of `resolution` points over [0, 1] and bisects the
/// interval endpoints down to width 1e-3. Each query combines the global
/// grid search with a refinement seeded by the previously located
/// degeneracy, so the surface is tracked even where its basin is narrower
/// than the grid.
pub fn degeneracy_lambda_window(
    pair: BandPair,
    tol: f64,
    resolution: usize,
    search: &SearchConfig,
) -> Result<Vec<(f64, f64)>, SymbolError> {
    assert!(tol > 0.0, "tolerance must be positive");
    assert!(resolution >= 2, "need at least two scan points");
    let grid: Vec<f64> = (0..resolution)
        .map(|i| i as f64 / (resolution - 1) as f64)
        .collect();
    let last_hit = std::cell::RefCell::new(None::<PhasePoint>);
    let degenerate = |lambda: f64| -> Result<bool, SymbolError> {
        let (mut g, mut argmin) = min_gap_over_phase_space(lambda, pair, search)?;
        let seed = *last_hit.borrow();
        if g > tol {
            if let Some(seed) = seed {
                let (g2, p2) = refine_min_gap(lambda, pair, &seed, search)?;
                if g2 < g {
                    g = g2;
                    argmin = p2;
                }
            }
        }
        if g <= tol {
            *last_hit.borrow_mut() = Some(argmin);
        }
        Ok(g <= tol)
    };
    let flags: Vec<bool> = grid
        .iter()
        .map(|&l| degenerate(l))
        .collect::<Result<_, _>>()?;

    let refine = |mut inside: f64, mut outside: f64| -> Result<f64, SymbolError> {
        while (inside - outside).abs() > 1e-3 {
            let mid = 0.5 * (inside + outside);
            if degenerate(mid)? {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        Ok(0.5 * (inside + outside))
    };

    let mut windows = Vec::new();
    let mut i = 0;
    while i < grid.len() {
        if !flags[i] {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < grid.len() && flags[j + 1] {
            j += 1;
        }
        let lo = if i == 0 {
            grid[0]
        } else {
            refine(grid[i], grid[i - 1])?
        };
        let hi = if j == grid.len() - 1 {
            grid[j]
        } else {
            refine(grid[j], grid[j + 1])?
        };
        windows.push((lo, hi));
        i = j + 1;
    }
    Ok(windows)
}

/// Euclidean embedding distance between ray representatives, minimized over
/// the global phase: d = sqrt(2 - 2 |<z, z'>|).
pub fn ray_distance(a: &PhasePoint, b: &PhasePoint) -> f64 {
    let za = Vector3::from_row_slice(a.coords());
    let zb = Vector3::from_row_slice(b.coords());
    let overlap: Complex64 = za.dotc(&zb);
    (2.0 - 2.0 * overlap.norm().min(1.0)).max(0.0).sqrt()
}
