//! The `(a, b, c)` parametrization of the relative character variety of the
//! four-holed sphere with three cusps and one generalized boundary.
//!
//! The representation sends the peripheral generators to parabolics fixing
//! `0`, `1` and `∞`:
//!
//! ```text
//! A = [[1, 0], [a, 1]],  B = [[1+b, -b], [b, 1-b]],  C = [[1, -c], [0, 1]]
//! ```
//!
//! and the fourth boundary `δ = γβα` has trace `κ = 2 + abc − ab − bc − ca`.

mod hyperbolization;
mod inequality;

pub use hyperbolization::{
    build_polygon, cba_fixed_point, polygon_certificate, CbaFixedPoint, Polygon, PolygonCertificate,
};
pub use inequality::{inequality_report, InequalityReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mobius::UnimodularMatrix;

/// Coordinates `(a, b, c)` with the cached level value `κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub kappa: f64,
}

impl ParamTriple {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        ParamTriple {
            a,
            b,
            c,
            kappa: kappa_of(a, b, c),
        }
    }

    /// Solve the level equation for `c`.
    pub fn on_level(a: f64, b: f64, kappa: f64, tol: f64) -> Result<Self> {
        c_from_level(a, b, kappa, tol).map(|c| ParamTriple::new(a, b, c))
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// `(ab, bc, ca)`: the values attached to `αβ`, `βγ` and `γα`.
    pub fn products(&self) -> [f64; 3] {
        [self.a * self.b, self.b * self.c, self.c * self.a]
    }

    pub fn min_coord(&self) -> f64 {
        self.a.min(self.b).min(self.c)
    }

    /// Magnitude of the terms of the level polynomial; the natural scale
    /// for the rounding error of `κ`.
    pub fn kappa_scale(&self) -> f64 {
        let [p, q, r] = self.products();
        2.0 + (self.a * self.b * self.c).abs() + p.abs() + q.abs() + r.abs()
    }

    /// Energy `E = abc`, decreased by reduction moves.
    pub fn energy(&self) -> f64 {
        self.a * self.b * self.c
    }
}

/// A triple on the geometric branch: `a, b, c > 1` and `κ > −2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GeometricPoint(ParamTriple);

impl GeometricPoint {
    pub fn new(p: ParamTriple) -> Result<Self> {
        let not_geometric = || Error::NotGeometric {
            a: p.a,
            b: p.b,
            c: p.c,
        };
        if !(p.a > 1.0 && p.b > 1.0 && p.c > 1.0 && p.kappa > -2.0) {
            return Err(not_geometric());
        }
        // consequence of the branch conditions, checked rather than assumed
        if p.products().iter().any(|&x| !(x > 4.0)) {
            return Err(not_geometric());
        }
        Ok(GeometricPoint(p))
    }

    pub fn from_coords(a: f64, b: f64, c: f64) -> Result<Self> {
        GeometricPoint::new(ParamTriple::new(a, b, c))
    }

    pub fn triple(&self) -> &ParamTriple {
        &self.0
    }
}

impl std::ops::Deref for GeometricPoint {
    type Target = ParamTriple;

    fn deref(&self) -> &ParamTriple {
        &self.0
    }
}

/// The generator images and the two products used throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepresentationMatrices {
    pub a: UnimodularMatrix,
    pub b: UnimodularMatrix,
    pub c: UnimodularMatrix,
    pub ba: UnimodularMatrix,
    pub cba: UnimodularMatrix,
}

pub fn matrices_from_triple(p: &ParamTriple) -> RepresentationMatrices {
    let a = UnimodularMatrix::new_unchecked(1.0, 0.0, p.a, 1.0);
    let b = UnimodularMatrix::new_unchecked(1.0 + p.b, -p.b, p.b, 1.0 - p.b);
    let c = UnimodularMatrix::new_unchecked(1.0, -p.c, 0.0, 1.0);
    let ba = b * a;
    let cba = c * ba;
    RepresentationMatrices { a, b, c, ba, cba }
}

pub fn kappa_of(a: f64, b: f64, c: f64) -> f64 {
    2.0 + a * b * c - a * b - b * c - a * c
}

/// `c = (κ − (2 − ab)) / (ab − a − b)`.
pub fn c_from_level(a: f64, b: f64, kappa: f64, tol: f64) -> Result<f64> {
    let den = a * b - a - b;
    let num = kappa - (2.0 - a * b);
    if den.abs() <= tol {
        if num.abs() <= tol {
            return Err(Error::Indeterminate);
        }
        return Err(Error::OnHyperbola { x: a, y: b });
    }
    Ok(num / den)
}

/// The three components of `{ab − a − b ≠ 0}` over which each level set is
/// a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    /// `ab − a − b > 0` above both asymptotes (`a, b > 1`).
    PosBranchGt1,
    /// `ab − a − b < 0`.
    Neg,
    /// `ab − a − b > 0` below both asymptotes (`a, b < 1`).
    PosBranchLtm1,
}

pub fn component_of(a: f64, b: f64, tol: f64) -> Result<Component> {
    let den = a * b - a - b;
    if den.abs() <= tol {
        return Err(Error::OnHyperbola { x: a, y: b });
    }
    if den < 0.0 {
        Ok(Component::Neg)
    } else if a > 1.0 {
        // (a-1)(b-1) > 1 forces a and b to the same side of 1
        Ok(Component::PosBranchGt1)
    } else {
        Ok(Component::PosBranchLtm1)
    }
}

/// Translation length of the hyperbolic element with trace `2 − product`.
pub fn simple_length(product: f64) -> Result<f64> {
    if !(product > 4.0) {
        return Err(Error::NotHyperbolic { product });
    }
    Ok(2.0 * ((product - 2.0) / 2.0).acosh())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    ConePoint,
    Cusp,
    GeodesicBoundary,
}

/// What the fourth boundary `δ` is for a given level `κ = tr CBA`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub kind: BoundaryKind,
    /// Cone angle θ with `κ = 2cos(θ/2)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    /// Boundary length ℓ with `κ = 2cosh(ℓ/2)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
}

impl BoundaryData {
    /// Square of the generalized boundary length: `−θ²` for a cone point
    /// (length `iθ`), `0` for a cusp, `ℓ²` for a geodesic.
    pub fn length_squared(&self) -> f64 {
        match self.kind {
            BoundaryKind::ConePoint => -self.angle.unwrap_or(0.0).powi(2),
            BoundaryKind::Cusp => 0.0,
            BoundaryKind::GeodesicBoundary => self.length.unwrap_or(0.0).powi(2),
        }
    }

    /// θ for cone points, 0 for a cusp.
    pub fn cone_angle(&self) -> Option<f64> {
        match self.kind {
            BoundaryKind::ConePoint => self.angle,
            BoundaryKind::Cusp => Some(0.0),
            BoundaryKind::GeodesicBoundary => None,
        }
    }
}

pub fn boundary_data(kappa: f64, tol: f64) -> Result<BoundaryData> {
    if (kappa + 2.0).abs() <= tol {
        return Err(Error::DegenerateTwoPi);
    }
    if !(kappa > -2.0) {
        return Err(Error::OutOfRange { kappa });
    }
    if (kappa - 2.0).abs() <= tol {
        return Ok(BoundaryData {
            kind: BoundaryKind::Cusp,
            angle: None,
            length: None,
        });
    }
    if kappa < 2.0 {
        Ok(BoundaryData {
            kind: BoundaryKind::ConePoint,
            angle: Some(2.0 * (kappa / 2.0).acos()),
            length: None,
        })
    } else {
        Ok(BoundaryData {
            kind: BoundaryKind::GeodesicBoundary,
            angle: None,
            length: Some(2.0 * (kappa / 2.0).acosh()),
        })
    }
}

/// Penner λ-lengths of the three sides of the ideal triangle `0, 1, ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaLengths {
    pub edge_0_inf: f64,
    pub edge_0_1: f64,
    pub edge_1_inf: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspGeometry {
    /// Prong areas at the cusps `0, 1, ∞`.
    pub prong_areas: [f64; 3],
    pub lambda_lengths: LambdaLengths,
}

/// Prongs cut from the triangle `0, 1, ∞` by the unit-area cusp regions
/// have areas `1/a, 1/b, 1/c`; the side `(0, ∞)` has λ-length `log(ac)`,
/// and the other two sides `log(ab)`, `log(bc)` by the same argument.
pub fn cusp_geometry(p: &ParamTriple) -> Result<CuspGeometry> {
    if !(p.a > 0.0 && p.b > 0.0 && p.c > 0.0) {
        return Err(Error::InvalidArgument("cusp geometry needs a, b, c > 0".into()));
    }
    Ok(CuspGeometry {
        prong_areas: [1.0 / p.a, 1.0 / p.b, 1.0 / p.c],
        lambda_lengths: LambdaLengths {
            edge_0_inf: (p.a * p.c).ln(),
            edge_0_1: (p.a * p.b).ln(),
            edge_1_inf: (p.b * p.c).ln(),
        },
    })
}

/// The two singular points of the level function.
pub fn singular_point_near(p: &ParamTriple, tol: f64) -> Option<[f64; 3]> {
    [[0.0, 0.0, 0.0], [2.0, 2.0, 2.0]]
        .into_iter()
        .find(|s| p.coords().iter().zip(s).all(|(x, y)| (x - y).abs() <= tol))
}
