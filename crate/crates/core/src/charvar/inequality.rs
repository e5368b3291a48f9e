use serde::{Deserialize, Serialize};

use super::{boundary_data, simple_length, BoundaryKind, GeometricPoint};
use crate::error::Result;

/// The product bound `ab, bc, ca > 4`, the collar-type bound
/// `(ab − 4)(bc − 4) ≥ 4(κ + 2)` and its length form
/// `sinh(ℓ_αβ/4)·sinh(ℓ_βγ/4) ≥ cos(θ/4)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub products: [f64; 3],
    pub collar_lhs: f64,
    pub collar_rhs: f64,
    pub conecollar_lhs: f64,
    pub conecollar_rhs: f64,
    pub all_pass: bool,
}

impl InequalityReport {
    pub fn collar_slack(&self) -> f64 {
        self.collar_lhs - self.collar_rhs
    }

    pub fn conecollar_slack(&self) -> f64 {
        self.conecollar_lhs - self.conecollar_rhs
    }
}

/// Right-hand side of the length inequality: `cos(θ/4)` for a cone point,
/// `1` at a cusp, and `cosh(ℓ_δ/4)` (θ = iℓ_δ) past the cusp.
fn conecollar_bound(kappa: f64, tol: f64) -> Result<f64> {
    let bd = boundary_data(kappa, tol)?;
    Ok(match bd.kind {
        BoundaryKind::ConePoint => (bd.angle.unwrap_or(0.0) / 4.0).cos(),
        BoundaryKind::Cusp => 1.0,
        BoundaryKind::GeodesicBoundary => (bd.length.unwrap_or(0.0) / 4.0).cosh(),
    })
}

pub fn inequality_report(p: &GeometricPoint, tol: f64) -> Result<InequalityReport> {
    let products = p.products();
    let [ab, bc, _] = products;
    let collar_lhs = (ab - 4.0) * (bc - 4.0);
    let collar_rhs = 4.0 * (p.kappa + 2.0);

    let l_ab = simple_length(ab)?;
    let l_bc = simple_length(bc)?;
    let conecollar_lhs = (l_ab / 4.0).sinh() * (l_bc / 4.0).sinh();
    let conecollar_rhs = conecollar_bound(p.kappa, tol)?;

    let slack = |rhs: f64| 1e-12 * rhs.abs().max(1.0);
    let all_pass = products.iter().all(|&x| x > 4.0)
        && collar_lhs >= collar_rhs - slack(collar_rhs)
        && conecollar_lhs >= conecollar_rhs - slack(conecollar_rhs);

    Ok(InequalityReport {
        products,
        collar_lhs,
        collar_rhs,
        conecollar_lhs,
        conecollar_rhs,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn symmetric_three() {
        let p = GeometricPoint::from_coords(3.0, 3.0, 3.0).unwrap();
        let r = inequality_report(&p, 1e-9).unwrap();
        assert_eq!(r.collar_lhs, 25.0);
        assert_eq!(r.collar_rhs, 16.0);
        assert_eq!(r.conecollar_rhs, 1.0);
        assert!(r.all_pass);
    }

    #[test]
    fn equality_on_b_equals_two() {
        let s = 1.0 + 3f64.sqrt();
        let p = GeometricPoint::from_coords(s, 2.0, s).unwrap();
        let r = inequality_report(&p, 1e-9).unwrap();
        assert!((r.collar_lhs - r.collar_rhs).abs() <= 1e-12 * r.collar_rhs);
        // sqrt(16 - 8√3)/4 = (√3 - 1)/2
        let expected = (3f64.sqrt() - 1.0) / 2.0;
        assert_relative_eq!(r.conecollar_lhs, expected, epsilon = 1e-12);
        assert_relative_eq!(r.conecollar_rhs, expected, epsilon = 1e-12);
        assert_relative_eq!(expected, 0.366_025_403_784_438_6, epsilon = 1e-15);
        assert!(r.all_pass);
    }

    #[test]
    fn geodesic_boundary_uses_cosh() {
        // κ(4,4,4) = 2 + 64 - 48 = 18
        let p = GeometricPoint::from_coords(4.0, 4.0, 4.0).unwrap();
        let r = inequality_report(&p, 1e-9).unwrap();
        assert_relative_eq!(r.conecollar_rhs, (20f64).sqrt() / 2.0, epsilon = 1e-12);
        assert!(r.all_pass);
    }
}
