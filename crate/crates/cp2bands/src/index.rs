//! Exact characteristic-class arithmetic and the level-count formula.
//!
//! Everything lives in the ring Q[x]/(x^3): total Chern classes, Chern
//! characters, the Todd class of CP^2, and the polyad character exp(Nx). The
//! number of quantum levels in a band is the x^2 coefficient of
//! Ch(F) ^ Ch(Polyad) ^ Todd(CP^2), which collapses to a quadratic in N.
//! All coefficients are exact rationals so integrality failures are errors,
//! never rounding accidents.

use crate::chern::ChernClass;
use num_rational::Rational64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndexError {
    #[error("level count came out non-integral: {0} (invalid Chern data)")]
    NonIntegralCount(Rational64),
}

/// A polynomial c0 + c1 x + c2 x^2 with x^3 = 0, exact coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedPoly {
    pub c0: Rational64,
    pub c1: Rational64,
    pub c2: Rational64,
}

impl TruncatedPoly {
    pub fn new(c0: Rational64, c1: Rational64, c2: Rational64) -> Self {
        TruncatedPoly { c0, c1, c2 }
    }

    pub fn from_integers(c0: i64, c1: i64, c2: i64) -> Self {
        TruncatedPoly {
            c0: Rational64::from_integer(c0),
            c1: Rational64::from_integer(c1),
            c2: Rational64::from_integer(c2),
        }
    }

    pub fn one() -> Self {
        Self::from_integers(1, 0, 0)
    }
}

impl std::fmt::Display for TruncatedPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} + {} x + {} x^2", self.c0, self.c1, self.c2)
    }
}

/// Product in Q[x]/(x^3).
pub fn wedge(a: &TruncatedPoly, b: &TruncatedPoly) -> TruncatedPoly {
    TruncatedPoly {
        c0: a.c0 * b.c0,
        c1: a.c0 * b.c1 + a.c1 * b.c0,
        c2: a.c0 * b.c2 + a.c1 * b.c1 + a.c2 * b.c0,
    }
}

/// Ch(F) = r + A x + (A^2 - 2B)/2 x^2 from the total Chern class data.
pub fn chern_character(c: &ChernClass) -> TruncatedPoly {
    let r = Rational64::from_integer(c.r as i64);
    let a = Rational64::from_integer(c.a);
    let b = Rational64::from_integer(c.b);
    TruncatedPoly {
        c0: r,
        c1: a,
        c2: (a * a - Rational64::from_integer(2) * b) / 2,
    }
}

/// Ch(Polyad) = exp(Nx) truncated: 1 + N x + N^2/2 x^2.
pub fn polyad_character(n: u32) -> TruncatedPoly {
    let n = Rational64::from_integer(n as i64);
    TruncatedPoly {
        c0: Rational64::from_integer(1),
        c1: n,
        c2: n * n / 2,
    }
}

/// Todd(CP^2) = 1 + 3/2 x + x^2.
pub fn todd_cp2() -> TruncatedPoly {
    TruncatedPoly {
        c0: Rational64::from_integer(1),
        c1: Rational64::new(3, 2),
        c2: Rational64::from_integer(1),
    }
}

/// The x^2 coefficient of ch ^ Ch(Polyad) ^ Todd(CP^2), which must be an
/// integer for valid Chern data.
pub fn count_from_character(ch: &TruncatedPoly, n: u32) -> Result<i64, IndexError> {
    let product = wedge(&wedge(ch, &polyad_character(n)), &todd_cp2());
    if !product.c2.is_integer() {
        return Err(IndexError::NonIntegralCount(product.c2));
    }
    Ok(product.c2.to_integer())
}

/// Exact number of quantum levels the index formula assigns to a band with
/// the given Chern class on polyad N.
///
/// Evaluated by x^2 extraction and checked against the closed quadratic
/// r/2 N^2 + (3r/2 + A) N + (r + 3A/2 + A^2/2 - B); the two routes must
/// agree identically.
pub fn predicted_count(c: &ChernClass, n: u32) -> Result<i64, IndexError> {
    let extracted = count_from_character(&chern_character(c), n)?;

    let r = Rational64::from_integer(c.r as i64);
    let a = Rational64::from_integer(c.a);
    let b = Rational64::from_integer(c.b);
    let nn = Rational64::from_integer(n as i64);
    let three_half = Rational64::new(3, 2);
    let closed = r / 2 * nn * nn
        + (three_half * r + a) * nn
        + (r + three_half * a + a * a / 2 - b);
    debug_assert!(closed.is_integer());
    assert_eq!(
        Rational64::from_integer(extracted),
        closed,
        "x^2 extraction disagrees with the closed quadratic"
    );
    Ok(extracted)
}
