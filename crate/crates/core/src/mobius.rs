//! 2×2 real unimodular matrices acting by Möbius transformations on the
//! upper half-plane and its boundary ℝ ∪ {∞}.
//!
//! Points are carried by [`Point`], which distinguishes the ideal point ∞,
//! boundary reals and interior points of the upper half-plane. Residuals are
//! measured in the chordal metric of the Riemann sphere so that ∞ needs no
//! special casing.

use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the closed upper half-plane ℍ ∪ ℝ ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Point {
    Infinity,
    Real(f64),
    Interior(Complex64),
}

impl Point {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    /// Finite value as a complex number; `None` at ∞.
    pub fn to_complex(&self) -> Option<Complex64> {
        match *self {
            Point::Infinity => None,
            Point::Real(x) => Some(Complex64::new(x, 0.0)),
            Point::Interior(z) => Some(z),
        }
    }

    pub fn real(&self) -> Option<f64> {
        self.to_complex().map(|z| z.re)
    }

    /// Chordal distance on the Riemann sphere (bounded by 2).
    pub fn chordal_distance(&self, other: &Point) -> f64 {
        match (self.to_complex(), other.to_complex()) {
            (None, None) => 0.0,
            (Some(z), None) | (None, Some(z)) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
            (Some(z), Some(w)) => 2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt(),
        }
    }
}

impl From<f64> for Point {
    fn from(x: f64) -> Self {
        if x.is_infinite() {
            Point::Infinity
        } else {
            Point::Real(x)
        }
    }
}

/// A real 2×2 matrix with unit determinant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnimodularMatrix {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl UnimodularMatrix {
    pub const IDENTITY: UnimodularMatrix = UnimodularMatrix {
        m11: 1.0,
        m12: 0.0,
        m21: 0.0,
        m22: 1.0,
    };

    /// Checked constructor: the determinant must be 1 up to `1e-12`, scaled
    /// by the size of the entries.
    pub fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Result<Self> {
        let m = UnimodularMatrix::new_unchecked(m11, m12, m21, m22);
        let scale = 1f64.max(m.max_abs_entry().powi(2));
        if !((m.det() - 1.0).abs() <= 1e-12 * scale) {
            return Err(Error::InvalidArgument(format!(
                "determinant {} is not 1",
                m.det()
            )));
        }
        Ok(m)
    }

    pub const fn new_unchecked(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        UnimodularMatrix { m11, m12, m21, m22 }
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn inverse(&self) -> Self {
        UnimodularMatrix::new_unchecked(self.m22, -self.m12, -self.m21, self.m11)
    }

    pub fn neg(&self) -> Self {
        UnimodularMatrix::new_unchecked(-self.m11, -self.m12, -self.m21, -self.m22)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.m11
            .abs()
            .max(self.m12.abs())
            .max(self.m21.abs())
            .max(self.m22.abs())
    }

    /// Entrywise distance to `±I`, whichever is closer.
    pub fn distance_to_scalar(&self) -> f64 {
        let to = |s: f64| {
            (self.m11 - s)
                .abs()
                .max(self.m12.abs())
                .max(self.m21.abs())
                .max((self.m22 - s).abs())
        };
        to(1.0).min(to(-1.0))
    }

    /// `z ↦ (m11 z + m12)/(m21 z + m22)`, with ∞ ↦ m11/m21 and pole ↦ ∞.
    pub fn apply(&self, z: Point) -> Point {
        match z {
            Point::Infinity => {
                if self.m21 == 0.0 {
                    Point::Infinity
                } else {
                    Point::Real(self.m11 / self.m21)
                }
            }
            Point::Real(x) => {
                let den = self.m21 * x + self.m22;
                if den == 0.0 {
                    Point::Infinity
                } else {
                    Point::Real((self.m11 * x + self.m12) / den)
                }
            }
            Point::Interior(w) => {
                let den = w * self.m21 + self.m22;
                Point::Interior((w * self.m11 + self.m12) / den)
            }
        }
    }

    pub fn apply_real(&self, x: f64) -> Point {
        self.apply(Point::from(x))
    }
}

impl Mul for UnimodularMatrix {
    type Output = UnimodularMatrix;

    fn mul(self, r: UnimodularMatrix) -> UnimodularMatrix {
        UnimodularMatrix::new_unchecked(
            self.m11 * r.m11 + self.m12 * r.m21,
            self.m11 * r.m12 + self.m12 * r.m22,
            self.m21 * r.m11 + self.m22 * r.m21,
            self.m21 * r.m12 + self.m22 * r.m22,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsometryKind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// Isometry type with its rotation angle (elliptic) or translation length
/// (hyperbolic).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryClass {
    pub kind: IsometryKind,
    pub magnitude: f64,
}

/// Classify by trace.
///
/// An elliptic matrix conjugate to rotation by `φ` in SL(2,ℝ) has trace
/// `2cos φ` and rotates ℍ by `θ = 2φ ∈ (0, 2π)`; the signed trace is used so
/// that the angle of `CBA` is the cone angle. Exactly `|tr| = 2` is
/// parabolic; a trace strictly inside the `tol` band around ±2 is reported
/// as [`Error::AmbiguousClass`].
pub fn classify(m: &UnimodularMatrix, tol: f64) -> Result<IsometryClass> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let tr = m.trace();
    let gap = tr.abs() - 2.0;
    if m.distance_to_scalar() <= tol {
        return Ok(IsometryClass {
            kind: IsometryKind::Identity,
            magnitude: 0.0,
        });
    }
    if gap == 0.0 {
        return Ok(IsometryClass {
            kind: IsometryKind::Parabolic,
            magnitude: 0.0,
        });
    }
    if gap.abs() < tol {
        return Err(Error::AmbiguousClass { trace: tr });
    }
    if gap > 0.0 {
        Ok(IsometryClass {
            kind: IsometryKind::Hyperbolic,
            magnitude: 2.0 * (tr.abs() / 2.0).acosh(),
        })
    } else {
        Ok(IsometryClass {
            kind: IsometryKind::Elliptic,
            magnitude: 2.0 * (tr / 2.0).acos(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointKind {
    OnePointBoundary,
    TwoPointsBoundary,
    OneInteriorPoint,
    AllPoints,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointSet {
    pub kind: FixedPointKind,
    pub points: Vec<Point>,
}

impl FixedPointSet {
    /// Largest chordal residual `d(M p, p)` over the listed points.
    pub fn max_residual(&self, m: &UnimodularMatrix) -> f64 {
        self.points
            .iter()
            .map(|p| m.apply(*p).chordal_distance(p))
            .fold(0.0, f64::max)
    }
}

/// Fixed points of `M`: roots of `m21 z² + (m22 − m11) z − m12 = 0`.
///
/// Traces with `||tr| − 2| ≤ tol` are treated as parabolic. Elliptic
/// matrices yield the root in ℍ. Hyperbolic roots are listed as
/// `[z₊, z₋]` with `z± = ((m11 − m22) ± √(tr² − 4)) / (2 m21)`.
pub fn fixed_points(m: &UnimodularMatrix, tol: f64) -> FixedPointSet {
    if m.distance_to_scalar() <= tol {
        return FixedPointSet {
            kind: FixedPointKind::AllPoints,
            points: Vec::new(),
        };
    }
    let tr = m.trace();
    let s = m.m11 - m.m22;
    let parabolic = (tr.abs() - 2.0).abs() <= tol;

    if m.m21 == 0.0 {
        // ∞ is fixed; so is m12/(m22 - m11) when the diagonal differs.
        if parabolic || s == 0.0 {
            return FixedPointSet {
                kind: FixedPointKind::OnePointBoundary,
                points: vec![Point::Infinity],
            };
        }
        return FixedPointSet {
            kind: FixedPointKind::TwoPointsBoundary,
            points: vec![Point::Infinity, Point::Real(m.m12 / (m.m22 - m.m11))],
        };
    }
    if parabolic {
        return FixedPointSet {
            kind: FixedPointKind::OnePointBoundary,
            points: vec![Point::Real(s / (2.0 * m.m21))],
        };
    }
    if tr.abs() < 2.0 {
        let im = (4.0 - tr * tr).sqrt() / (2.0 * m.m21.abs());
        return FixedPointSet {
            kind: FixedPointKind::OneInteriorPoint,
            points: vec![Point::Interior(Complex64::new(s / (2.0 * m.m21), im))],
        };
    }
    let root = (tr * tr - 4.0).sqrt();
    // Cancellation-free pair: the root without cancellation, then the other
    // from the product of roots −m12/m21.
    let (plus, minus) = if s >= 0.0 {
        let p = (s + root) / (2.0 * m.m21);
        (p, -2.0 * m.m12 / (s + root))
    } else {
        let q = (s - root) / (2.0 * m.m21);
        (-2.0 * m.m12 / (s - root), q)
    };
    FixedPointSet {
        kind: FixedPointKind::TwoPointsBoundary,
        points: vec![Point::Real(plus), Point::Real(minus)],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

/// Sign of `(tr M − 2 m22) / m21`, which is twice the real part of the
/// interior fixed point of an elliptic `M`.
pub fn elliptic_real_part_sign(m: &UnimodularMatrix) -> Result<Sign> {
    let tr = m.trace();
    if !(tr.abs() < 2.0) {
        return Err(Error::NotElliptic { trace: tr });
    }
    if m.m21 == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(Sign::of((tr - 2.0 * m.m22) / m.m21))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn a_matrix(a: f64) -> UnimodularMatrix {
        UnimodularMatrix::new(1.0, 0.0, a, 1.0).unwrap()
    }

    #[test]
    fn apply_conventions() {
        let id = UnimodularMatrix::IDENTITY;
        assert_eq!(id.apply_real(0.7), Point::Real(0.7));
        assert_eq!(a_matrix(3.0).apply(Point::Infinity), Point::Real(1.0 / 3.0));
        let c = UnimodularMatrix::new(1.0, -3.0, 0.0, 1.0).unwrap();
        assert_eq!(c.apply_real(0.0), Point::Real(-3.0));
        // pole goes to ∞
        assert_eq!(a_matrix(2.0).apply_real(-0.5), Point::Infinity);
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(UnimodularMatrix::new(2.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn classify_examples() {
        let p = classify(&a_matrix(3.0), 1e-9).unwrap();
        assert_eq!(p.kind, IsometryKind::Parabolic);

        // tr = -7: translation length 2·arccosh(3.5) = 2·log(3.5 + √11.25)
        let h = UnimodularMatrix::new(-7.0, 1.0, -1.0, 0.0).unwrap();
        let c = classify(&h, 1e-9).unwrap();
        assert_eq!(c.kind, IsometryKind::Hyperbolic);
        assert_relative_eq!(c.magnitude, 2.0 * (3.5 + 11.25f64.sqrt()).ln(), epsilon = 1e-12);
        assert_relative_eq!(c.magnitude, 3.849_694_600_476_828, epsilon = 1e-12);

        let e = UnimodularMatrix::new(0.0, -1.0, 1.0, 0.0).unwrap();
        let c = classify(&e, 1e-9).unwrap();
        assert_eq!(c.kind, IsometryKind::Elliptic);
        assert_relative_eq!(c.magnitude, std::f64::consts::PI, epsilon = 1e-15);

        assert_eq!(
            classify(&UnimodularMatrix::IDENTITY.neg(), 1e-9).unwrap().kind,
            IsometryKind::Identity
        );
    }

    #[test]
    fn classify_ambiguous_band() {
        // trace 2 + 1e-11, not the identity
        let eps = 1e-11;
        let m = UnimodularMatrix::new_unchecked(1.0 + eps, 1.0, eps / (1.0 + eps), 1.0);
        assert!(matches!(classify(&m, 1e-9), Err(Error::AmbiguousClass { .. })));
        assert!(classify(&m, 1e-12).is_ok());
        assert!(classify(&m, 0.0).is_err());
    }

    #[test]
    fn fixed_points_examples() {
        let fa = fixed_points(&a_matrix(3.0), 1e-9);
        assert_eq!(fa.kind, FixedPointKind::OnePointBoundary);
        assert_eq!(fa.points, vec![Point::Real(0.0)]);

        // CBA at (3,3,3): roots of -3z² - 6z - 3 = 0
        let cba = UnimodularMatrix::new(4.0, 3.0, -3.0, -2.0).unwrap();
        let f = fixed_points(&cba, 1e-9);
        assert_eq!(f.kind, FixedPointKind::OnePointBoundary);
        assert_eq!(f.points, vec![Point::Real(-1.0)]);

        // BA at (a,b) = (3,3)
        let ba = UnimodularMatrix::new(-5.0, -3.0, -3.0, -2.0).unwrap();
        let f = fixed_points(&ba, 1e-9);
        assert_eq!(f.kind, FixedPointKind::TwoPointsBoundary);
        assert!(f.max_residual(&ba) < 1e-10);

        let c = UnimodularMatrix::new(1.0, -3.0, 0.0, 1.0).unwrap();
        assert_eq!(fixed_points(&c, 1e-9).points, vec![Point::Infinity]);
        let d = UnimodularMatrix::new(2.0, 1.0, 0.0, 0.5).unwrap();
        let f = fixed_points(&d, 1e-9);
        assert_eq!(f.points, vec![Point::Infinity, Point::Real(1.0 / (0.5 - 2.0))]);
        assert!(f.max_residual(&d) < 1e-12);

        assert_eq!(
            fixed_points(&UnimodularMatrix::IDENTITY, 1e-9).kind,
            FixedPointKind::AllPoints
        );
    }

    #[test]
    fn elliptic_fixed_point_in_upper_half_plane() {
        let r = UnimodularMatrix::new(0.0, -1.0, 1.0, 0.0).unwrap();
        let f = fixed_points(&r, 1e-9);
        assert_eq!(f.points, vec![Point::Interior(Complex64::new(0.0, 1.0))]);
        // negative m21 still yields Im > 0
        let f = fixed_points(&r.inverse(), 1e-9);
        assert_eq!(f.points, vec![Point::Interior(Complex64::new(0.0, 1.0))]);
    }

    #[test]
    fn real_part_sign() {
        let r = UnimodularMatrix::new(0.0, -1.0, 1.0, 0.0).unwrap();
        assert_eq!(elliptic_real_part_sign(&r).unwrap(), Sign::Zero);
        assert!(matches!(
            elliptic_real_part_sign(&a_matrix(3.0)),
            Err(Error::NotElliptic { .. })
        ));
    }

    #[test]
    fn chordal_distance_at_infinity() {
        assert_eq!(Point::Infinity.chordal_distance(&Point::Infinity), 0.0);
        assert_relative_eq!(Point::Real(0.0).chordal_distance(&Point::Infinity), 2.0);
        assert!(Point::Real(1e12).chordal_distance(&Point::Infinity) < 1e-11);
    }
}
