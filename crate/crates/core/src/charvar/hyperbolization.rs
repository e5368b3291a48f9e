//! Certificate that a representation is the holonomy of a hyperbolic metric
//! with one cone point: the fixed point of `CBA` and a convex fundamental
//! hexagon whose sides are paired by `A`, `B` and `C`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{boundary_data, GeometricPoint, ParamTriple};
use crate::error::{Error, Result};
use crate::mcg::{reduce_to_domain, InvolutionWord};
use crate::mobius::{classify, fixed_points, FixedPointSet, IsometryKind, Point, UnimodularMatrix};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CbaFixedPoint {
    pub matrix: UnimodularMatrix,
    pub kind: IsometryKind,
    pub fixed: FixedPointSet,
    pub residual: f64,
    /// Whether `a + b − ab < 0`, `b > 2` and `−2 < κ < 2` all hold.
    pub sign_hypotheses: bool,
    /// `(κ − 2 + 2b) / (a + b − ab)`, the sign expression for `Re z`.
    pub sign_expression: Option<f64>,
    /// Set under the hypotheses: whether the sign expression is negative.
    pub real_part_negative: Option<bool>,
}

impl CbaFixedPoint {
    pub fn interior_point(&self) -> Option<Complex64> {
        match self.fixed.points.as_slice() {
            [Point::Interior(z)] => Some(*z),
            _ => None,
        }
    }
}

/// `CBA = [[1 + b − ab − ca − cb + abc, −b − c + bc], [a + b − ab, 1 − b]]`.
fn cba_closed_form(p: &ParamTriple) -> UnimodularMatrix {
    let (a, b, c) = (p.a, p.b, p.c);
    UnimodularMatrix::new_unchecked(
        1.0 + b - a * b - c * a - c * b + a * b * c,
        -b - c + b * c,
        a + b - a * b,
        1.0 - b,
    )
}

pub fn cba_fixed_point(p: &ParamTriple, tol: &Tolerances) -> Result<CbaFixedPoint> {
    let matrix = cba_closed_form(p);
    if matrix.distance_to_scalar() <= tol.classify {
        return Err(Error::DegenerateMinusIdentity);
    }
    let kind = match classify(&matrix, tol.classify) {
        Ok(c) => c.kind,
        // inside the band the fixed-point solver treats it as parabolic
        Err(Error::AmbiguousClass { .. }) => IsometryKind::Parabolic,
        Err(e) => return Err(e),
    };
    let fixed = fixed_points(&matrix, tol.classify);
    let residual = fixed.max_residual(&matrix);

    let den = p.a + p.b - p.a * p.b;
    let sign_hypotheses = den < 0.0 && p.b > 2.0 && p.kappa > -2.0 && p.kappa < 2.0;
    let sign_expression = (den != 0.0).then(|| (p.kappa - 2.0 + 2.0 * p.b) / den);
    let real_part_negative = if sign_hypotheses {
        sign_expression.map(|v| v < 0.0)
    } else {
        None
    };
    Ok(CbaFixedPoint {
        matrix,
        kind,
        fixed,
        residual,
        sign_hypotheses,
        sign_expression,
        real_part_negative,
    })
}

/// A geodesic of ℍ: a vertical line `Re z = x` or a half-circle centred on ℝ.
#[derive(Debug, Clone, Copy)]
enum Geodesic {
    Vertical(f64),
    Circle { center: f64, radius_sq: f64 },
}

impl Geodesic {
    fn through(u: Point, w: Point) -> Geodesic {
        match (u.to_complex(), w.to_complex()) {
            (None, Some(z)) | (Some(z), None) => Geodesic::Vertical(z.re),
            (None, None) => Geodesic::Vertical(f64::NAN),
            (Some(p), Some(q)) => {
                let dx = p.re - q.re;
                if dx.abs() <= 1e-14 * p.re.abs().max(q.re.abs()).max(1.0) {
                    Geodesic::Vertical(0.5 * (p.re + q.re))
                } else {
                    let center = (p.norm_sqr() - q.norm_sqr()) / (2.0 * dx);
                    Geodesic::Circle {
                        center,
                        radius_sq: (p - center).norm_sqr(),
                    }
                }
            }
        }
    }

    /// Signed side of `z`, normalized to be scale free; `None` on the line
    /// at ∞.
    fn side(&self, z: Point) -> Option<f64> {
        match (*self, z.to_complex()) {
            (Geodesic::Vertical(_), None) => None,
            (Geodesic::Circle { .. }, None) => Some(1.0),
            (Geodesic::Vertical(x), Some(w)) => Some((w.re - x) / w.re.abs().max(x.abs()).max(1.0)),
            (Geodesic::Circle { center, radius_sq }, Some(w)) => {
                Some(((w - center).norm_sqr() - radius_sq) / radius_sq.max(1.0))
            }
        }
    }
}

/// Unit tangent at the interior point `v` of the geodesic towards `target`.
fn tangent_towards(v: Complex64, target: Point) -> Complex64 {
    let t = match target.to_complex() {
        None => return Complex64::new(0.0, 1.0),
        Some(t) => t,
    };
    match Geodesic::through(Point::Interior(v), target) {
        Geodesic::Vertical(_) => Complex64::new(0.0, (t.im - v.im).signum()),
        Geodesic::Circle { center, .. } => {
            let radius = v - center;
            let dir = Complex64::new(-radius.im, radius.re);
            let (phi_v, phi_t) = (radius.arg(), (t - center).arg());
            let d = if phi_t > phi_v { dir } else { -dir };
            d / d.norm()
        }
    }
}

fn interior_angle(v: Complex64, prev: Point, next: Point) -> f64 {
    let t1 = tangent_towards(v, prev);
    let t2 = tangent_towards(v, next);
    (t2 / t1).arg().abs()
}

/// The hexagon `∞, z, 0, A(z), 1, C⁻¹(z)` built from the interior fixed
/// point `z` of `CBA`, before validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    pub triple: ParamTriple,
    pub vertices: Vec<Point>,
    /// Interior angles at `z`, `A(z)`, `C⁻¹(z)`.
    pub finite_angles: [f64; 3],
    pub angle_sum: f64,
    pub convex: bool,
    /// Smallest normalized distance of a vertex from the line of a side it
    /// does not lie on; positive iff convex.
    pub convexity_margin: f64,
    pub max_pairing_residual: f64,
    pub side_pairings_ok: bool,
}

const SIDES: usize = 6;

/// Construct and measure the hexagon for a triple with `|κ| < 2`.
pub fn build_polygon(p: &ParamTriple, tol: &Tolerances) -> Result<Polygon> {
    if !(p.kappa > -2.0 && p.kappa < 2.0) {
        return Err(Error::NotConeCase { kappa: p.kappa });
    }
    let cba = cba_fixed_point(p, tol)?;
    let z = cba
        .interior_point()
        .ok_or_else(|| Error::CertificateFailed(format!("CBA is {:?}, not elliptic", cba.kind)))?;
    let m = super::matrices_from_triple(p);
    let zi = Point::Interior(z);
    let az = m.a.apply(zi);
    let cz = m.c.inverse().apply(zi);
    let vertices = vec![Point::Infinity, zi, Point::Real(0.0), az, Point::Real(1.0), cz];

    let finite_angles = [
        interior_angle(z, vertices[0], vertices[2]),
        interior_angle(az.to_complex().unwrap_or_default(), vertices[2], vertices[4]),
        interior_angle(cz.to_complex().unwrap_or_default(), vertices[4], vertices[0]),
    ];
    let angle_sum = finite_angles.iter().sum();

    // every other vertex strictly on one side of each side's geodesic
    let mut convex = finite_angles.iter().all(|&t| t > 0.0 && t < std::f64::consts::PI);
    let mut convexity_margin = f64::INFINITY;
    for i in 0..SIDES {
        let (u, w) = (vertices[i], vertices[(i + 1) % SIDES]);
        let g = Geodesic::through(u, w);
        let sides: Vec<f64> = (0..SIDES)
            .filter(|&j| j != i && j != (i + 1) % SIDES)
            .filter_map(|j| g.side(vertices[j]))
            .collect();
        let all_pos = sides.iter().all(|&s| s > 0.0);
        let all_neg = sides.iter().all(|&s| s < 0.0);
        convex &= all_pos || all_neg;
        let margin = sides.iter().map(|s| s.abs()).fold(f64::INFINITY, f64::min);
        convexity_margin = convexity_margin.min(if all_pos || all_neg { margin } else { -margin });
    }

    // C⁻¹: [∞, z] → [∞, C⁻¹z];  A: [z, 0] → [A z, 0];  B: [A z, 1] → [C⁻¹z, 1]
    let pairings = [
        (
            m.c.inverse(),
            [vertices[0], vertices[1]],
            [vertices[0], vertices[5]],
        ),
        (m.a, [vertices[1], vertices[2]], [vertices[3], vertices[2]]),
        (m.b, [vertices[3], vertices[4]], [vertices[5], vertices[4]]),
    ];
    let max_pairing_residual = pairings
        .iter()
        .flat_map(|(g, from, to)| {
            from.iter()
                .zip(to)
                .map(move |(s, t)| g.apply(*s).chordal_distance(t))
        })
        .fold(0.0, f64::max);
    let side_pairings_ok = max_pairing_residual <= 1e-9;

    Ok(Polygon {
        triple: *p,
        vertices,
        finite_angles,
        angle_sum,
        convex,
        convexity_margin,
        max_pairing_residual,
        side_pairings_ok,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonCertificate {
    /// Word taking the input to the closure of the fundamental domain.
    pub reduction: InvolutionWord,
    pub polygon: Polygon,
    /// Cone angle θ with `κ = 2cos(θ/2)`.
    pub cone_angle: f64,
    /// `|angle_sum − θ|`; derived check, not part of the existence argument.
    pub angle_defect: f64,
}

/// Reduce to the closure of the fundamental domain, build the hexagon there
/// and validate convexity and the side pairings.
pub fn polygon_certificate(p: &GeometricPoint, tol: &Tolerances) -> Result<PolygonCertificate> {
    if !(p.kappa > -2.0 && p.kappa < 2.0) {
        return Err(Error::NotConeCase { kappa: p.kappa });
    }
    let trace = reduce_to_domain(p, 10_000, tol)?;
    let polygon = build_polygon(&trace.end, tol)?;
    if !polygon.convex {
        return Err(Error::CertificateFailed(format!(
            "hexagon not convex (margin {:e})",
            polygon.convexity_margin
        )));
    }
    if !polygon.side_pairings_ok {
        return Err(Error::CertificateFailed(format!(
            "side pairing residual {:e}",
            polygon.max_pairing_residual
        )));
    }
    let cone_angle = boundary_data(p.kappa, tol.classify)?
        .angle
        .ok_or(Error::NotConeCase { kappa: p.kappa })?;
    Ok(PolygonCertificate {
        reduction: trace.word,
        angle_defect: (polygon.angle_sum - cone_angle).abs(),
        polygon,
        cone_angle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charvar::matrices_from_triple;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn sym_kappa0() -> ParamTriple {
        let s = 1.0 + 3f64.sqrt();
        ParamTriple::new(s, s, s)
    }

    #[test]
    fn closed_form_matches_product() {
        for (a, b, c) in [(3.0, 3.0, 3.0), (1.7, 4.2, 9.1), (6.0, 1.5, 6.0)] {
            let p = ParamTriple::new(a, b, c);
            let prod = matrices_from_triple(&p).cba;
            let cf = cba_closed_form(&p);
            for (x, y) in [
                (prod.m11, cf.m11),
                (prod.m12, cf.m12),
                (prod.m21, cf.m21),
                (prod.m22, cf.m22),
            ] {
                assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn parabolic_at_three() {
        let f = cba_fixed_point(&ParamTriple::new(3.0, 3.0, 3.0), &Tolerances::default()).unwrap();
        assert_eq!(f.kind, IsometryKind::Parabolic);
        assert_eq!(f.fixed.points, vec![Point::Real(-1.0)]);
    }

    #[test]
    fn elliptic_at_kappa_zero() {
        let f = cba_fixed_point(&sym_kappa0(), &Tolerances::default()).unwrap();
        assert_eq!(f.kind, IsometryKind::Elliptic);
        assert!(f.residual < 1e-10);
        assert!(f.sign_hypotheses);
        assert_eq!(f.real_part_negative, Some(true));
        // (κ - 2 + 2b)/(a + b - ab) = 2√3 / -2
        assert_relative_eq!(f.sign_expression.unwrap(), -3f64.sqrt(), epsilon = 1e-12);
        // the expression is twice the real part of the fixed point
        assert_relative_eq!(
            f.interior_point().unwrap().re,
            -3f64.sqrt() / 2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn minus_identity_rejected() {
        assert_eq!(
            cba_fixed_point(&ParamTriple::new(2.0, 2.0, 2.0), &Tolerances::default()),
            Err(Error::DegenerateMinusIdentity)
        );
    }

    #[test]
    fn hexagon_at_kappa_zero() {
        let p = GeometricPoint::new(sym_kappa0()).unwrap();
        let cert = polygon_certificate(&p, &Tolerances::default()).unwrap();
        assert!(cert.reduction.is_empty());
        assert!(cert.polygon.convex);
        assert!(cert.polygon.side_pairings_ok);
        assert_relative_eq!(cert.cone_angle, PI, epsilon = 1e-14);
        assert!(cert.angle_defect < 1e-9);
        // three-fold symmetry: equal angles π/3
        for t in cert.polygon.finite_angles {
            assert_relative_eq!(t, PI / 3.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn hexagon_outside_domain_is_reduced_first() {
        // I_b image of the κ = 0 symmetric point
        let s = 1.0 + 3f64.sqrt();
        let p = GeometricPoint::from_coords(s * (s - 1.0), s / (s - 1.0), s * (s - 1.0)).unwrap();
        let cert = polygon_certificate(&p, &Tolerances::default()).unwrap();
        assert_eq!(cert.reduction.len(), 1);
        assert!(cert.angle_defect < 1e-9);
    }

    #[test]
    fn cone_range_enforced() {
        let p = GeometricPoint::from_coords(3.0, 3.0, 3.0).unwrap();
        assert!(matches!(
            polygon_certificate(&p, &Tolerances::default()),
            Err(Error::NotConeCase { .. })
        ));
        assert!(matches!(
            build_polygon(&ParamTriple::new(2.0, 2.0, 2.0), &Tolerances::default()),
            Err(Error::NotConeCase { .. })
        ));
    }
}
