//! Topological invariants of eigen-band bundles over CP^2.
//!
//! The first Chern class A of a band subset is measured by integrating the
//! projector curvature over an embedded projective line, cross-checked by a
//! plaquette winding sum that is integer-quantized by construction. The
//! second Chern character is a 4D curvature integral over one affine chart.
//! B is recovered from (A, integral of ch2) as B = (A^2 - 2 ch2) / 2.
//!
//! Orientation is fixed once: (t, phi) ordering on the line and the
//! coordinate order (t1, phi1, t2, phi2) in the epsilon contraction, chosen
//! so the lambda = 1 line bundle comes out with A = +1 and ch2 = +1/2. The
//! same constants must then give the complementary band A = -1, ch2 = -1/2
//! and an all-zero rank-3 total; the calibration test locks all three.

use crate::herm3::{self, CMat3};
use crate::symbol::{
    min_gap_over_phase_space, symbol_matrix, projector_of_matrix, BandPair, BandSet, PhasePoint,
    SearchConfig, SymbolError,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

/// Band subsets must clear this phase-space gap before an invariant is
/// integrated.
pub const GLOBAL_GAP_TOL: f64 = 1e-6;

/// A raw invariant estimate farther than this from its quantized value is
/// rejected.
pub const RESIDUAL_THRESHOLD: f64 = 0.05;

/// Overlap determinants smaller than this abort the plaquette sum.
pub const VORTEX_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum ChernError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error("band subset {bands} is not gapped at lambda = {lambda} (min gap {gap:e})")]
    GapClosed {
        bands: String,
        lambda: f64,
        gap: f64,
    },
    #[error("invariant did not quantize: residual {residual} at grid {grid:?} after doubling")]
    TopologyUnresolved { residual: f64, grid: (usize, usize) },
    #[error("overlap determinant modulus {modulus:e} below {VORTEX_TOL:e} at plaquette ({i}, {j}); refine the grid")]
    VortexOnPlaquette { i: usize, j: usize, modulus: f64 },
    #[error("inconsistent invariants: {0}")]
    InconsistentInvariants(String),
}

/// Total Chern class data 1 + A x + B x^2 of a rank-r bundle over CP^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernClass {
    pub r: u32,
    pub a: i64,
    pub b: i64,
}

impl ChernClass {
    pub fn new(r: u32, a: i64, b: i64) -> Result<Self, ChernError> {
        if r == 0 || r > 3 {
            return Err(ChernError::InconsistentInvariants(format!(
                "rank {r} outside 1..=3"
            )));
        }
        if r == 1 && b != 0 {
            return Err(ChernError::InconsistentInvariants(format!(
                "rank-1 bundle with B = {b} (must be 0)"
            )));
        }
        Ok(ChernClass { r, a, b })
    }
}

impl std::fmt::Display for ChernClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(r={}, A={}, B={})", self.r, self.a, self.b)
    }
}

/// Numerical-to-integer bridge: a raw integral, its quantized value, and the
/// distance between them.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct InvariantEstimate {
    pub raw: f64,
    /// Nearest integer for first Chern numbers, nearest half-integer for the
    /// second Chern character.
    pub rounded: f64,
    pub residual: f64,
    pub grid: (usize, usize),
}

impl InvariantEstimate {
    fn quantize(raw: f64, denominator: f64, grid: (usize, usize)) -> Self {
        let rounded = (raw * denominator).round() / denominator;
        InvariantEstimate {
            raw,
            rounded,
            residual: (raw - rounded).abs(),
            grid,
        }
    }
}

/// An embedded projective line {[cos(t/2) u + sin(t/2) e^{i phi} v]} spanned
/// by an orthonormal pair (u, v).
#[derive(Debug, Clone, Copy)]
pub struct ProjectiveLine {
    u: [Complex64; 3],
    v: [Complex64; 3],
}

impl ProjectiveLine {
    /// Orthonormalizes (u, v) by Gram-Schmidt; panics on a degenerate span.
    pub fn new(u: [Complex64; 3], v: [Complex64; 3]) -> Self {
        let norm =
            |w: &[Complex64; 3]| -> f64 { w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() };
        let nu = norm(&u);
        assert!(nu > 1e-12, "degenerate line span");
        let u = [u[0] / nu, u[1] / nu, u[2] / nu];
        let overlap: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
        let mut v = [
            v[0] - u[0] * overlap,
            v[1] - u[1] * overlap,
            v[2] - u[2] * overlap,
        ];
        let nv = norm(&v);
        assert!(nv > 1e-12, "degenerate line span");
        for c in &mut v {
            *c /= nv;
        }
        ProjectiveLine { u, v }
    }

    pub fn point(&self, t: f64, phi: f64) -> PhasePoint {
        let a = Complex64::new((0.5 * t).cos(), 0.0);
        let b = Complex64::from_polar((0.5 * t).sin(), phi);
        PhasePoint::new([
            a * self.u[0] + b * self.v[0],
            a * self.u[1] + b * self.v[1],
            a * self.u[2] + b * self.v[2],
        ])
        .expect("unit combination of an orthonormal pair")
    }
}

impl Default for ProjectiveLine {
    /// The line {[cos(t/2), sin(t/2) e^{i phi}, 0]}.
    fn default() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        ProjectiveLine {
            u: [one, zero, zero],
            v: [zero, one, zero],
        }
    }
}

/// Grid and tolerance controls for the invariant integrals.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ChernConfig {
    /// (t, phi) resolution on the projective line.
    pub line_grid: (usize, usize),
    /// Points per axis of the 4D chart grid (doubled once internally).
    pub volume_grid: usize,
    /// Quantization residual accepted for a valid estimate.
    pub residual_threshold: f64,
    /// Search used for the global gap precheck.
    pub search: SearchConfig,
}

impl Default for ChernConfig {
    fn default() -> Self {
        ChernConfig {
            line_grid: (128, 256),
            volume_grid: 24,
            residual_threshold: RESIDUAL_THRESHOLD,
            search: SearchConfig::default(),
        }
    }
}

fn projector_at(lambda: f64, p: &PhasePoint, bands: BandSet) -> Result<CMat3, ChernError> {
    Ok(projector_of_matrix(&symbol_matrix(lambda, p)?.m, bands)?)
}

/// Raw curvature integral (1/2pi i) tr(P [dP, dP]) over the line at a fixed
/// grid, before any quantization.
pub fn first_chern_raw(
    lambda: f64,
    bands: BandSet,
    line: &ProjectiveLine,
    grid: (usize, usize),
) -> Result<f64, ChernError> {
    let (nt, nphi) = grid;
    assert!(nt >= 4 && nphi >= 4, "line grid too coarse");
    let ht = PI / nt as f64;
    let hphi = 2.0 * PI / nphi as f64;

    // projectors on the (t, phi) grid, with ghost rows one step outside
    // [0, pi]; the parametrization is smooth there so central differences
    // need no special casing
    let mut grid_p = Vec::with_capacity((nt + 2) * nphi);
    for i in -1..=(nt as i64) {
        let t = (i as f64 + 0.5) * ht;
        for j in 0..nphi {
            let phi = j as f64 * hphi;
            let point = line.point(t, phi);
            grid_p.push(projector_at(lambda, &point, bands).map_err(|e| match e {
                ChernError::Symbol(SymbolError::GapClosed { gap, .. }) => ChernError::GapClosed {
                    bands: bands.to_string(),
                    lambda,
                    gap,
                },
                other => other,
            })?);
        }
    }
    let idx = |i: usize, j: usize| (i + 1) * nphi + j;

    let mut flux = 0.0;
    for i in 0..nt {
        for j in 0..nphi {
            let p = &grid_p[idx(i, j)];
            let dt = (grid_p[idx(i + 1, j)] - grid_p[idx(i - 1, j)]) / Complex64::from(2.0 * ht);
            let jp = (j + 1) % nphi;
            let jm = (j + nphi - 1) % nphi;
            let dphi = (grid_p[idx(i, jp)] - grid_p[idx(i, jm)]) / Complex64::from(2.0 * hphi);
            let comm = dt * dphi - dphi * dt;
            let tr = (p * comm).diagonal().sum();
            flux += tr.im * ht * hphi;
        }
    }
    Ok(flux / (2.0 * PI))
}

/// Minimum boundary gap of the band subset over the line: grid scan followed
/// by golden-section descent, so transversal crossings between grid points
/// are not missed.
pub fn min_gap_on_line(
    lambda: f64,
    bands: BandSet,
    line: &ProjectiveLine,
    grid: (usize, usize),
) -> Result<f64, ChernError> {
    let (nt, nphi) = grid;
    let ht = PI / nt as f64;
    let hphi = 2.0 * PI / nphi as f64;
    let eval = |t: f64, phi: f64| -> Result<f64, ChernError> {
        let m = symbol_matrix(lambda, &line.point(t, phi))?.m;
        Ok(bands.boundary_gap(&herm3::eigvals(&m)))
    };

    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..nt {
        let t = (i as f64 + 0.5) * ht;
        for j in 0..nphi {
            let phi = j as f64 * hphi;
            let g = eval(t, phi)?;
            if g < best.0 {
                best = (g, t, phi);
            }
        }
    }

    let golden = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut g_best, mut t, mut phi) = best;
    let mut radius = [ht, hphi];
    for _ in 0..24 {
        for axis in 0..2 {
            let center = if axis == 0 { t } else { phi };
            let mut a = center - radius[axis];
            let mut b = center + radius[axis];
            let probe = |x: f64, t: f64, phi: f64| -> Result<f64, ChernError> {
                if axis == 0 {
                    eval(x, phi)
                } else {
                    eval(t, x)
                }
            };
            let mut c = b - golden * (b - a);
            let mut d = a + golden * (b - a);
            let mut fc = probe(c, t, phi)?;
            let mut fd = probe(d, t, phi)?;
            for _ in 0..32 {
                if fc < fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - golden * (b - a);
                    fc = probe(c, t, phi)?;
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + golden * (b - a);
                    fd = probe(d, t, phi)?;
                }
            }
            let (x, fx) = if fc < fd { (c, fc) } else { (d, fd) };
            if fx < g_best {
                g_best = fx;
                if axis == 0 {
                    t = x;
                } else {
                    phi = x;
                }
            }
        }
        for r in &mut radius {
            *r *= 0.5;
        }
    }
    Ok(g_best)
}

fn line_gap_precheck(
    lambda: f64,
    bands: BandSet,
    line: &ProjectiveLine,
    grid: (usize, usize),
) -> Result<(), ChernError> {
    let min_gap = min_gap_on_line(lambda, bands, line, grid)?;
    if min_gap <= GLOBAL_GAP_TOL {
        return Err(ChernError::GapClosed {
            bands: bands.to_string(),
            lambda,
            gap: min_gap,
        });
    }
    Ok(())
}

/// First Chern number of the band subset paired with the given line, by the
/// gauge-free curvature integral. Doubles the grid once if the first estimate
/// does not quantize.
pub fn first_chern_on_line(
    lambda: f64,
    bands: BandSet,
    line: &ProjectiveLine,
    config: &ChernConfig,
) -> Result<InvariantEstimate, ChernError> {
    line_gap_precheck(lambda, bands, line, config.line_grid)?;
    let mut grid = config.line_grid;
    let mut est = InvariantEstimate::quantize(
        first_chern_raw(lambda, bands, line, grid)?,
        1.0,
        grid,
    );
    if est.residual >= config.residual_threshold {
        grid = (grid.0 * 2, grid.1 * 2);
        est = InvariantEstimate::quantize(
            first_chern_raw(lambda, bands, line, grid)?,
            1.0,
            grid,
        );
        if est.residual >= config.residual_threshold {
            return Err(ChernError::TopologyUnresolved {
                residual: est.residual,
                grid,
            });
        }
    }
    Ok(est)
}

/// Deterministic per-site gauge twist used by the invariance test: a unitary
/// built from hashed phases and rotations.
fn gauge_twist(i: usize, j: usize, rank: usize, seed: u64) -> nalgebra::DMatrix<Complex64> {
    let hash = |k: u64| -> f64 {
        let mut x = seed
            .wrapping_mul(0x9e3779b97f4a7c15)
            .wrapping_add((i as u64) << 32)
            .wrapping_add((j as u64) << 16)
            .wrapping_add(k);
        x ^= x >> 30;
        x = x.wrapping_mul(0xbf58476d1ce4e5b9);
        x ^= x >> 27;
        (x as f64 / u64::MAX as f64) * 2.0 * PI
    };
    let mut u = nalgebra::DMatrix::<Complex64>::identity(rank, rank);
    for d in 0..rank {
        u[(d, d)] = Complex64::from_polar(1.0, hash(d as u64));
    }
    for a in 0..rank {
        for b in (a + 1)..rank {
            let angle = hash(100 + (a * 3 + b) as u64);
            let (s, c) = angle.sin_cos();
            let mut g = nalgebra::DMatrix::<Complex64>::identity(rank, rank);
            g[(a, a)] = Complex64::from(c);
            g[(b, b)] = Complex64::from(c);
            g[(a, b)] = Complex64::from(s);
            g[(b, a)] = Complex64::from(-s);
            u *= g;
        }
    }
    u
}

fn plaquette_winding(
    lambda: f64,
    bands: BandSet,
    line: &ProjectiveLine,
    grid: (usize, usize),
    gauge_seed: Option<u64>,
) -> Result<f64, ChernError> {
    let (nt, nphi) = grid;
    let rank = bands.rank();
    let selected = bands.bands();

    // eigenvector frames on the closed lattice, poles included
    let mut frames: Vec<nalgebra::DMatrix<Complex64>> = Vec::with_capacity((nt + 1) * nphi);
    for i in 0..=nt {
        let t = i as f64 * PI / nt as f64;
        for j in 0..nphi {
            let phi = j as f64 * 2.0 * PI / nphi as f64;
            let m = symbol_matrix(lambda, &line.point(t, phi))?.m;
            let (evals, vecs) = herm3::eigh(&m);
            let gap = bands.boundary_gap(&evals);
            if gap <= GLOBAL_GAP_TOL {
                return Err(ChernError::GapClosed {
                    bands: bands.to_string(),
                    lambda,
                    gap,
                });
            }
            let mut frame = nalgebra::DMatrix::<Complex64>::zeros(3, rank);
            for (col, &band) in selected.iter().enumerate() {
                frame.set_column(col, &vecs.column(band - 1));
            }
            if let Some(seed) = gauge_seed {
                frame *= gauge_twist(i, j, rank, seed);
            }
            frames.push(frame);
        }
    }
    let idx = |i: usize, j: usize| i * nphi + (j % nphi);
    let link = |a: usize, b: usize| -> Complex64 {
        (frames[a].adjoint() * &frames[b]).determinant()
    };

    let mut total = 0.0;
    for i in 0..nt {
        for j in 0..nphi {
            let u1 = link(idx(i, j), idx(i + 1, j));
            let u2 = link(idx(i + 1, j), idx(i + 1, j + 1));
            let u3 = link(idx(i + 1, j + 1), idx(i, j + 1));
            let u4 = link(idx(i, j + 1), idx(i, j));
            for u in [u1, u2, u3, u4] {
                if u.norm() < VORTEX_TOL {
                    return Err(ChernError::VortexOnPlaquette {
                        i,
                        j,
                        modulus: u.norm(),
                    });
                }
            }
            total += (u1 * u2 * u3 * u4).arg();
        }
    }
    Ok(total / (2.0 * PI))
}

/// First Chern number by the lattice plaquette method: winding of overlap
/// determinants, integer-quantized by construction.
pub fn first_chern_plaquette(
    lambda: f64,
    bands: BandSet,
    line: &ProjectiveLine,
    config: &ChernConfig,
) -> Result<InvariantEstimate, ChernError> {
    line_gap_precheck(lambda, bands, line, config.line_grid)?;
    let raw = plaquette_winding(lambda, bands, line, config.line_grid, None)?;
    Ok(InvariantEstimate::quantize(raw, 1.0, config.line_grid))
}

/// Signed permutations of (0, 1, 2, 3) for the epsilon contraction.
const EPS4: [([usize; 4], f64); 24] = [
    ([0, 1, 2, 3], 1.0),
    ([0, 1, 3, 2], -1.0),
    ([0, 2, 1, 3], -1.0),
    ([0, 2, 3, 1], 1.0),
    ([0, 3, 1, 2], 1.0),
    ([0, 3, 2, 1], -1.0),
    ([1, 0, 2, 3], -1.0),
    ([1, 0, 3, 2], 1.0),
    ([1, 2, 0, 3], 1.0),
    ([1, 2, 3, 0], -1.0),
    ([1, 3, 0, 2], -1.0),
    ([1, 3, 2, 0], 1.0),
    ([2, 0, 1, 3], 1.0),
    ([2, 0, 3, 1], -1.0),
    ([2, 1, 0, 3], -1.0),
    ([2, 1, 3, 0], 1.0),
    ([2, 3, 0, 1], 1.0),
    ([2, 3, 1, 0], -1.0),
    ([3, 0, 1, 2], -1.0),
    ([3, 0, 2, 1], 1.0),
    ([3, 1, 0, 2], 1.0),
    ([3, 1, 2, 0], -1.0),
    ([3, 2, 0, 1], -1.0),
    ([3, 2, 1, 0], 1.0),
];

/// tr(X Y) without forming the product.
fn trace_prod(x: &CMat3, y: &CMat3) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for i in 0..3 {
        for j in 0..3 {
            acc += x[(i, j)] * y[(j, i)];
        }
    }
    acc
}

/// One slab of chart projectors at fixed t1: layout [phi1][t2 + ghosts][phi2].
struct Slab {
    data: Vec<CMat3>,
    n: usize,
}

impl Slab {
    fn build(lambda: f64, bands: BandSet, i0: i64, n: usize) -> Result<Slab, ChernError> {
        let ht = FRAC_PI_2 / n as f64;
        let hphi = 2.0 * PI / n as f64;
        let t1 = (i0 as f64 + 0.5) * ht;
        let tan1 = t1.tan();
        let mut data = Vec::with_capacity(n * (n + 2) * n);
        for i1 in 0..n {
            let w1 = Complex64::from_polar(tan1, i1 as f64 * hphi);
            for i2 in -1..=(n as i64) {
                let tan2 = ((i2 as f64 + 0.5) * ht).tan();
                for i3 in 0..n {
                    let w2 = Complex64::from_polar(tan2, i3 as f64 * hphi);
                    let p = PhasePoint::new([Complex64::from(1.0), w1, w2])
                        .expect("chart triple is nonzero");
                    let m = symbol_matrix(lambda, &p)?.m;
                    data.push(projector_of_matrix(&m, bands).map_err(|e| match e {
                        SymbolError::GapClosed { gap, .. } => ChernError::GapClosed {
                            bands: bands.to_string(),
                            lambda,
                            gap,
                        },
                        other => ChernError::Symbol(other),
                    })?);
                }
            }
        }
        Ok(Slab { data, n })
    }

    /// i2 in -1..=n (ghost layers included); i1, i3 wrap.
    fn at(&self, i1: usize, i2: i64, i3: usize) -> &CMat3 {
        let n = self.n;
        let row = (i2 + 1) as usize;
        &self.data[(i1 % n) * (n + 2) * n + row * n + (i3 % n)]
    }
}

/// Raw integral of ch2 = -(1/8 pi^2) eps^{mnrs} tr(P dP dP dP dP) over one
/// affine chart at a fixed per-axis grid.
pub fn second_chern_raw(lambda: f64, bands: BandSet, grid: usize) -> Result<f64, ChernError> {
    let n = grid;
    assert!(n >= 4, "volume grid too coarse");
    let ht = FRAC_PI_2 / n as f64;
    let hphi = 2.0 * PI / n as f64;
    let cell = ht * hphi * ht * hphi;

    let mut prev = Slab::build(lambda, bands, -1, n)?;
    let mut cur = Slab::build(lambda, bands, 0, n)?;
    let mut total = 0.0;

    for i0 in 0..n {
        let next = Slab::build(lambda, bands, i0 as i64 + 1, n)?;
        for i1 in 0..n {
            for i2 in 0..n as i64 {
                for i3 in 0..n {
                    let p = cur.at(i1, i2, i3);
                    let inv2ht = 1.0 / (2.0 * ht);
                    let inv2hphi = 1.0 / (2.0 * hphi);
                    let d = [
                        (next.at(i1, i2, i3) - prev.at(i1, i2, i3)) * Complex64::from(inv2ht),
                        (cur.at(i1 + 1, i2, i3) - cur.at(i1 + n - 1, i2, i3))
                            * Complex64::from(inv2hphi),
                        (cur.at(i1, i2 + 1, i3) - cur.at(i1, i2 - 1, i3))
                            * Complex64::from(inv2ht),
                        (cur.at(i1, i2, i3 + 1) - cur.at(i1, i2, i3 + n - 1))
                            * Complex64::from(inv2hphi),
                    ];
                    // pair products D_a D_b and P D_a D_b, reused across the
                    // 24 signed permutations
                    let mut pairs = [[CMat3::zeros(); 4]; 4];
                    let mut ppairs = [[CMat3::zeros(); 4]; 4];
                    for a in 0..4 {
                        for b in 0..4 {
                            if a != b {
                                pairs[a][b] = d[a] * d[b];
                                ppairs[a][b] = p * pairs[a][b];
                            }
                        }
                    }
                    let mut contracted = Complex64::ZERO;
                    for (perm, sign) in EPS4 {
                        let term =
                            trace_prod(&ppairs[perm[0]][perm[1]], &pairs[perm[2]][perm[3]]);
                        contracted += term * Complex64::from(sign);
                    }
                    total += contracted.re * cell;
                }
            }
        }
        prev = cur;
        cur = next;
    }
    Ok(-total / (8.0 * PI * PI))
}

fn global_gap_precheck(
    lambda: f64,
    bands: BandSet,
    search: &SearchConfig,
) -> Result<(), ChernError> {
    let mut pairs = Vec::new();
    if bands.contains(1) != bands.contains(2) {
        pairs.push(BandPair::new(1));
    }
    if bands.contains(2) != bands.contains(3) {
        pairs.push(BandPair::new(2));
    }
    for pair in pairs {
        let (gap, _) = min_gap_over_phase_space(lambda, pair, search)?;
        if gap <= GLOBAL_GAP_TOL {
            return Err(ChernError::GapClosed {
                bands: bands.to_string(),
                lambda,
                gap,
            });
        }
    }
    Ok(())
}

/// Integral of the second Chern character over CP^2, a half-integer.
///
/// Computes the 4D integral at `volume_grid`, always re-computes at the
/// doubled grid, and returns the fine estimate quantized to half-integers.
pub fn second_chern_character(
    lambda: f64,
    bands: BandSet,
    config: &ChernConfig,
) -> Result<InvariantEstimate, ChernError> {
    global_gap_precheck(lambda, bands, &config.search)?;
    let coarse = second_chern_raw(lambda, bands, config.volume_grid)?;
    let fine_grid = 2 * config.volume_grid;
    let fine = second_chern_raw(lambda, bands, fine_grid)?;
    let _ = coarse;
    let est = InvariantEstimate::quantize(fine, 2.0, (fine_grid, fine_grid));
    if est.residual >= config.residual_threshold {
        return Err(ChernError::TopologyUnresolved {
            residual: est.residual,
            grid: (fine_grid, fine_grid),
        });
    }
    Ok(est)
}

/// Full invariant readout for a band subset: rank, A (two independent
/// methods that must agree), and B from the ch2 integral.
pub fn chern_class_of_band(
    lambda: f64,
    bands: BandSet,
    config: &ChernConfig,
) -> Result<ChernClass, ChernError> {
    let line = ProjectiveLine::default();
    let est_line = first_chern_on_line(lambda, bands, &line, config)?;
    let est_plaq = first_chern_plaquette(lambda, bands, &line, config)?;
    if est_line.rounded != est_plaq.rounded {
        return Err(ChernError::InconsistentInvariants(format!(
            "curvature integral gives A = {} but plaquette winding gives {}",
            est_line.rounded, est_plaq.rounded
        )));
    }
    let a = est_line.rounded as i64;

    let est_ch2 = second_chern_character(lambda, bands, config)?;
    let twice_ch2 = (2.0 * est_ch2.rounded).round() as i64;
    if (a * a - twice_ch2) % 2 != 0 {
        return Err(ChernError::InconsistentInvariants(format!(
            "A = {a} and 2 ch2 = {twice_ch2} leave a non-integral B"
        )));
    }
    let b = (a * a - twice_ch2) / 2;
    ChernClass::new(bands.rank() as u32, a, b)
}

/// True iff the truncated product of all total Chern classes is 1, i.e. the
/// bands assemble into a trivial bundle.
pub fn whitney_sum_check(classes: &[ChernClass]) -> bool {
    use crate::index::{wedge, TruncatedPoly};
    let product = classes.iter().fold(TruncatedPoly::one(), |acc, c| {
        wedge(&acc, &TruncatedPoly::from_integers(1, c.a, c.b))
    });
    product == TruncatedPoly::one()
}

/// True iff a rank-2 class cannot split as (1 + A1 x)(1 + A2 x) over the
/// integers, i.e. the two bands are topologically coupled.
pub fn indecomposability_test(c: &ChernClass) -> bool {
    assert_eq!(c.r, 2, "indecomposability test applies to rank-2 classes");
    // integer roots of t^2 - A t + B
    let disc = c.a * c.a - 4 * c.b;
    if disc < 0 {
        return true;
    }
    let s = (disc as f64).sqrt().round() as i64;
    let s = [s - 1, s, s + 1]
        .into_iter()
        .find(|&x| x >= 0 && x * x == disc);
    match s {
        Some(s) => (c.a + s) % 2 != 0,
        None => true,
    }
}
