//! Weil–Petersson geometry in the `(a, b, c)` coordinates.
//!
//! On a level set of `κ` the symplectic form is
//! `da∧db/(ab − a − b) = db∧dc/(bc − b − c) = dc∧da/(ca − c − a)`.
//! Integrating it over the fundamental domain `{a, b, c > 2}` gives a
//! quarter of the volume of the moduli space.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::charvar::{boundary_data, c_from_level, simple_length, BoundaryData, BoundaryKind, ParamTriple};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::quadrature::{integrate, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordinatePair {
    Ab,
    Bc,
    Ca,
}

impl CoordinatePair {
    pub const ALL: [CoordinatePair; 3] = [CoordinatePair::Ab, CoordinatePair::Bc, CoordinatePair::Ca];

    fn select(self, p: &ParamTriple) -> (f64, f64) {
        match self {
            CoordinatePair::Ab => (p.a, p.b),
            CoordinatePair::Bc => (p.b, p.c),
            CoordinatePair::Ca => (p.c, p.a),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticDensity {
    pub pair: CoordinatePair,
    pub value: f64,
}

/// `1/(xy − x − y)` for the chosen pair.
pub fn wp_density(p: &ParamTriple, pair: CoordinatePair, tol: f64) -> Result<SymplecticDensity> {
    let (x, y) = pair.select(p);
    let den = x * y - x - y;
    if den.abs() <= tol {
        return Err(Error::OnHyperbola { x, y });
    }
    Ok(SymplecticDensity {
        pair,
        value: 1.0 / den,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticConsistency {
    pub step: f64,
    /// Relative mismatch between the `bc` form and the `ab` form.
    pub bc_vs_ab: f64,
    /// Relative mismatch between the `ca` form and the `ab` form.
    pub ca_vs_ab: f64,
    pub discrepancy: f64,
}

/// Pull the `bc` and `ca` forms back to the `(a, b)` chart, where `c` is
/// the implicit function fixed by `κ`, and compare with the `ab` form.
/// Partial derivatives of `c` are central differences with step `h`.
pub fn symplectic_consistency(p: &ParamTriple, h: f64, tol: f64) -> Result<SymplecticConsistency> {
    for pair in CoordinatePair::ALL {
        wp_density(p, pair, tol)?;
    }
    let (a, b, c, k) = (p.a, p.b, p.c, p.kappa);
    let level = |x: f64, y: f64| c_from_level(x, y, k, tol);
    let dc_da = (level(a + h, b)? - level(a - h, b)?) / (2.0 * h);
    let dc_db = (level(a, b + h)? - level(a, b - h)?) / (2.0 * h);

    let ab = 1.0 / (a * b - a - b);
    // db∧dc = −∂c/∂a da∧db,  dc∧da = −∂c/∂b da∧db
    let bc = -dc_da / (b * c - b - c);
    let ca = -dc_db / (c * a - c - a);
    let rel = |x: f64| (x - ab).abs() / ab.abs();
    let (bc_vs_ab, ca_vs_ab) = (rel(bc), rel(ca));
    Ok(SymplecticConsistency {
        step: h,
        bc_vs_ab,
        ca_vs_ab,
        discrepancy: bc_vs_ab.max(ca_vs_ab),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub steps: Vec<f64>,
    pub discrepancies: Vec<f64>,
    /// `log2` of successive error ratios, for the `bc` and then the `ca`
    /// comparison; close to 2 for a second-order scheme.
    pub observed_orders: Vec<f64>,
}

impl Refinement {
    pub fn is_second_order(&self, slack: f64) -> bool {
        !self.observed_orders.is_empty() && self.observed_orders.iter().all(|o| (o - 2.0).abs() <= slack)
    }
}

/// [`symplectic_consistency`] at `h0`, `h0/2`, `h0/4`.
pub fn symplectic_refinement(p: &ParamTriple, h0: f64, tol: f64) -> Result<Refinement> {
    let steps = vec![h0, h0 / 2.0, h0 / 4.0];
    let runs = steps
        .iter()
        .map(|&h| symplectic_consistency(p, h, tol))
        .collect::<Result<Vec<_>>>()?;
    let orders = |err: fn(&SymplecticConsistency) -> f64| -> Vec<f64> {
        runs.windows(2)
            .map(|w| (err(&w[0]) / err(&w[1])).log2())
            .collect()
    };
    let mut observed_orders = orders(|s| s.bc_vs_ab);
    observed_orders.extend(orders(|s| s.ca_vs_ab));
    Ok(Refinement {
        steps,
        discrepancies: runs.iter().map(|s| s.discrepancy).collect(),
        observed_orders,
    })
}

/// Length and twist of the curve `αβ`, whose holonomy `BA` has trace
/// `2 − ab`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FnCoordinates {
    pub length: f64,
    /// `log|α⁺/α⁻|`.
    pub twist: f64,
    /// `√((ab − 2)² − 4) = 2 sinh(ℓ/2)`.
    pub delta: f64,
    /// Endpoints of the axis of `BA`.
    pub alpha_plus: f64,
    pub alpha_minus: f64,
}

pub fn fenchel_nielsen(a: f64, b: f64) -> Result<FnCoordinates> {
    let ab = a * b;
    let length = simple_length(ab)?;
    let delta = ((ab - 2.0).powi(2) - 4.0).sqrt();
    let den = a + b - ab;
    if den == 0.0 {
        return Err(Error::OnHyperbola { x: a, y: b });
    }
    // roots of den·z² + (ab − 2b)·z − b = 0
    let alpha_plus = (2.0 * b - ab + delta) / (2.0 * den);
    let alpha_minus = (2.0 * b - ab - delta) / (2.0 * den);
    if alpha_plus == alpha_minus || alpha_plus == 0.0 || alpha_minus == 0.0 {
        return Err(Error::DegenerateAxis);
    }
    Ok(FnCoordinates {
        length,
        twist: (alpha_plus / alpha_minus).abs().ln(),
        delta,
        alpha_plus,
        alpha_minus,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DarbouxCheck {
    pub step: f64,
    /// `|det ∂(ℓ, τ)/∂(a, b)|` by central differences.
    pub abs_jacobian: f64,
    /// `1/|ab − a − b|`.
    pub reference: f64,
    pub rel_err: f64,
    /// `abs_jacobian / reference`.
    pub ratio: f64,
}

/// Compares `dℓ∧dτ` against the `ab` form of the symplectic density.
/// The step is not clamped; a large `h` shows up in `rel_err`.
pub fn darboux_check(a: f64, b: f64, h: f64) -> Result<DarbouxCheck> {
    fenchel_nielsen(a, b)?;
    let at = |x: f64, y: f64| fenchel_nielsen(x, y).map(|f| (f.length, f.twist));
    let (la_p, ta_p) = at(a + h, b)?;
    let (la_m, ta_m) = at(a - h, b)?;
    let (lb_p, tb_p) = at(a, b + h)?;
    let (lb_m, tb_m) = at(a, b - h)?;
    let d = 2.0 * h;
    let jac = (la_p - la_m) / d * (tb_p - tb_m) / d - (lb_p - lb_m) / d * (ta_p - ta_m) / d;
    let abs_jacobian = jac.abs();
    let reference = 1.0 / (a * b - a - b).abs();
    Ok(DarbouxCheck {
        step: h,
        abs_jacobian,
        reference,
        rel_err: (abs_jacobian - reference).abs() / reference,
        ratio: abs_jacobian / reference,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeResult {
    pub kappa: f64,
    pub value: f64,
    pub abs_error_estimate: f64,
    pub reference: f64,
    pub reference_source: String,
    pub abs_diff: f64,
    pub boundary: BoundaryData,
}

/// `log((v² + Kv + K)/v²)/(v + 1)`.
fn radial_integrand(v: f64, k: f64) -> f64 {
    let num = if v > 1.0 {
        (k * (v + 1.0) / (v * v)).ln_1p()
    } else {
        (v * v + k * v + k).ln() - 2.0 * v.ln()
    };
    num / (v + 1.0)
}

/// Closed form of the domain volume and a label for where it comes from.
fn domain_reference(bd: &BoundaryData) -> (f64, &'static str) {
    let value = (4.0 * PI * PI + bd.length_squared()) / 8.0;
    let source = match bd.kind {
        BoundaryKind::Cusp => "pi^2/2",
        BoundaryKind::ConePoint => "V0(0,0,0,i*theta)/4 = (4pi^2 - theta^2)/8",
        BoundaryKind::GeodesicBoundary => {
            "Do-Norbury/Nakanishi-Naatanen polynomial V0(0,0,0,l)/4 = (4pi^2 + l^2)/8"
        }
    };
    (value, source)
}

fn level_boundary(kappa: f64) -> Result<BoundaryData> {
    if !(kappa > -2.0) {
        return Err(Error::OutOfRange { kappa });
    }
    boundary_data(kappa, 1e-12).map_err(|e| match e {
        Error::DegenerateTwoPi => Error::OutOfRange { kappa },
        other => other,
    })
}

/// WP volume of `{a, b, c > 2}` on the level `κ`.
///
/// With `u = a − 2`, `v = b − 2` the region is `u, v > 0`, `uv < K`,
/// `K = κ + 2`; doing the `u` integral leaves
/// `∫₀^∞ log((v² + Kv + K)/v²)/(v + 1) dv`, computed on `t ∈ [0, 1]`
/// after `v = t/(1 − t)`.
pub fn domain_volume(kappa: f64, quad: &QuadratureConfig, exec: Execution) -> Result<VolumeResult> {
    let boundary = level_boundary(kappa)?;
    let k = kappa + 2.0;
    let f = move |t: f64| {
        if t >= 1.0 {
            return k;
        }
        let s = 1.0 - t;
        radial_integrand(t / s, k) / (s * s)
    };
    let q = integrate(f, 0.0, 1.0, quad, exec)?;
    let (reference, source) = domain_reference(&boundary);
    Ok(VolumeResult {
        kappa,
        value: q.value,
        abs_error_estimate: q.abs_error,
        reference,
        reference_source: source.to_string(),
        abs_diff: (q.value - reference).abs(),
        boundary,
    })
}

/// Four copies of the fundamental domain.
pub fn moduli_volume(kappa: f64, quad: &QuadratureConfig, exec: Execution) -> Result<VolumeResult> {
    let d = domain_volume(kappa, quad, exec)?;
    let reference = 4.0 * d.reference;
    let reference_source = match d.boundary.kind {
        BoundaryKind::Cusp => "2pi^2".to_string(),
        _ => format!("4 * {}", d.reference_source),
    };
    Ok(VolumeResult {
        value: 4.0 * d.value,
        abs_error_estimate: 4.0 * d.abs_error_estimate,
        abs_diff: (4.0 * d.value - reference).abs(),
        reference,
        reference_source,
        ..d
    })
}

/// [`domain_volume`] for every `κ`, parallel over the list.
pub fn volume_table(kappas: &[f64], quad: &QuadratureConfig, exec: Execution) -> Vec<Result<VolumeResult>> {
    exec.map(kappas, |&k| domain_volume(k, quad, exec))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumePolynomial {
    /// Four-holed sphere, four lengths.
    V0,
    /// Two-holed torus, two lengths.
    V1,
    /// One-holed torus, one length.
    V1OneHole,
}

impl VolumePolynomial {
    pub fn arity(self) -> usize {
        match self {
            VolumePolynomial::V0 => 4,
            VolumePolynomial::V1 => 2,
            VolumePolynomial::V1OneHole => 1,
        }
    }
}

/// Evaluate a volume polynomial; imaginary lengths `iθ` encode cone angles.
pub fn volume_polynomial(which: VolumePolynomial, lengths: &[Complex64]) -> Result<Complex64> {
    if lengths.len() != which.arity() {
        return Err(Error::InvalidArgument(format!(
            "{which:?} takes {} lengths, got {}",
            which.arity(),
            lengths.len()
        )));
    }
    let four_pi2 = Complex64::from(4.0 * PI * PI);
    let sum_sq: Complex64 = lengths.iter().map(|l| l * l).sum();
    Ok(match which {
        VolumePolynomial::V0 => 0.5 * (four_pi2 + sum_sq),
        VolumePolynomial::V1 => (four_pi2 + sum_sq) * (3.0 * four_pi2 + sum_sq) / 192.0,
        VolumePolynomial::V1OneHole => (four_pi2 + sum_sq) / 24.0,
    })
}

/// `∂V₁(l₁, l₂)/∂l₁ = (l₁/96)(16π² + 2l₁² + 2l₂²)`.
pub fn v1_derivative(l1: Complex64, l2: Complex64) -> Complex64 {
    l1 / 96.0 * (16.0 * PI * PI + 2.0 * l1 * l1 + 2.0 * l2 * l2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeRelation {
    pub samples: Vec<f64>,
    /// `∂V₁/∂l₁(2πi, l₂) / V₁(l₂)` per sample.
    pub ratios: Vec<Complex64>,
    pub constant: bool,
    pub constant_value: Complex64,
    /// The constant `2πi/4`, half-way off from direct differentiation.
    pub alternative_constant: Complex64,
    pub matches_alternative: bool,
}

pub fn derivative_relation_check(l2_samples: &[f64]) -> Result<DerivativeRelation> {
    if l2_samples.is_empty() {
        return Err(Error::InvalidArgument("need at least one l2 sample".into()));
    }
    let l1 = Complex64::new(0.0, 2.0 * PI);
    let ratios = l2_samples
        .iter()
        .map(|&l2| {
            let l2 = Complex64::from(l2);
            Ok(v1_derivative(l1, l2) / volume_polynomial(VolumePolynomial::V1OneHole, &[l2])?)
        })
        .collect::<Result<Vec<_>>>()?;
    let first = ratios[0];
    let constant = ratios
        .iter()
        .all(|r| (r - first).norm() <= 1e-9 * first.norm().max(1.0));
    let alternative_constant = Complex64::new(0.0, 2.0 * PI / 4.0);
    Ok(DerivativeRelation {
        samples: l2_samples.to_vec(),
        constant,
        constant_value: first,
        alternative_constant,
        matches_alternative: (first - alternative_constant).norm() <= 1e-9 * first.norm(),
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn quad() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn density_examples() {
        let p = ParamTriple::new(3.0, 3.0, 3.0);
        assert_relative_eq!(
            wp_density(&p, CoordinatePair::Ab, 1e-12).unwrap().value,
            1.0 / 3.0
        );
        let s = 1.0 + 3f64.sqrt();
        let q = ParamTriple::new(s, s, s);
        let vals: Vec<f64> = CoordinatePair::ALL
            .iter()
            .map(|&pr| wp_density(&q, pr, 1e-12).unwrap().value)
            .collect();
        assert_eq!(vals[0], vals[1]);
        assert_eq!(vals[1], vals[2]);
        let r = ParamTriple::new(4.0, 4.0 / 3.0, 5.0);
        assert!(matches!(
            wp_density(&r, CoordinatePair::Ab, 1e-12),
            Err(Error::OnHyperbola { .. })
        ));
    }

    #[test]
    fn consistency_at_three() {
        let p = ParamTriple::new(3.0, 3.0, 3.0);
        assert!(symplectic_consistency(&p, 1e-5, 1e-12).unwrap().discrepancy < 1e-6);
        let r = symplectic_refinement(&ParamTriple::new(2.5, 3.5, 4.0), 0.05, 1e-12).unwrap();
        assert!(r.is_second_order(0.2), "{r:?}");
        let on = ParamTriple::new(4.0, 4.0 / 3.0, 5.0);
        assert!(symplectic_consistency(&on, 1e-5, 1e-12).is_err());
    }

    #[test]
    fn fn_coordinates_at_three() {
        let f = fenchel_nielsen(3.0, 3.0).unwrap();
        assert_relative_eq!(f.delta, 45f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(f.length, simple_length(9.0).unwrap(), epsilon = 1e-14);
        assert_relative_eq!(f.length, 3.849_694_600_476_827_6, epsilon = 1e-12);
        assert_relative_eq!(2.0 * (f.length / 2.0).cosh(), 7.0, epsilon = 1e-12);
        assert_relative_eq!(f.delta, 2.0 * (f.length / 2.0).sinh(), epsilon = 1e-12);
        // −2 log φ
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert_relative_eq!(f.twist, -2.0 * golden.ln(), epsilon = 1e-12);
        assert_relative_eq!(f.alpha_plus, 1.0 - golden, epsilon = 1e-12);
        assert_relative_eq!(f.alpha_minus, golden, epsilon = 1e-12);
        assert!(matches!(
            fenchel_nielsen(2.0, 2.0),
            Err(Error::NotHyperbolic { .. })
        ));
    }

    #[test]
    fn axis_endpoints_are_fixed_by_ba() {
        let m = crate::charvar::matrices_from_triple(&ParamTriple::new(2.5, 4.0, 3.0)).ba;
        let f = fenchel_nielsen(2.5, 4.0).unwrap();
        for z in [f.alpha_plus, f.alpha_minus] {
            let w = m.apply_real(z).real().unwrap();
            assert!((w - z).abs() < 1e-12);
        }
    }

    #[test]
    fn darboux_values() {
        // the length–twist Jacobian is 2/|ab − a − b|, twice the reference
        let d = darboux_check(3.0, 3.0, 1e-5).unwrap();
        assert_relative_eq!(d.reference, 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(d.abs_jacobian, 2.0 / 3.0, max_relative = 1e-8);
        assert_relative_eq!(d.ratio, 2.0, max_relative = 1e-8);
        assert_relative_eq!(darboux_check(4.0, 2.0, 1e-5).unwrap().reference, 0.5);
        let coarse = darboux_check(3.0, 3.0, 0.5).unwrap();
        assert!(coarse.rel_err.is_finite());
        assert!((coarse.abs_jacobian - d.abs_jacobian).abs() > 1e-6);
    }

    #[test]
    fn volume_at_cusp() {
        let v = domain_volume(2.0, &quad(), Execution::Parallel).unwrap();
        assert_relative_eq!(v.reference, PI * PI / 2.0);
        assert_eq!(v.reference_source, "pi^2/2");
        assert!(v.abs_diff < 1e-9, "{v:?}");
        assert_relative_eq!(v.value, 4.934_802_200_544_679, epsilon = 1e-9);
        let m = moduli_volume(2.0, &quad(), Execution::Sequential).unwrap();
        assert_relative_eq!(m.reference, 2.0 * PI * PI);
        assert!(m.abs_diff < 4e-9);
    }

    #[test]
    fn volume_cone_and_geodesic() {
        let v = domain_volume(0.0, &quad(), Execution::Parallel).unwrap();
        assert_relative_eq!(v.reference, 3.0 * PI * PI / 8.0, epsilon = 1e-15);
        assert_relative_eq!(v.value, 3.701_101_650_408_509, epsilon = 1e-9);
        let m = moduli_volume(0.0, &quad(), Execution::Parallel).unwrap();
        assert_relative_eq!(m.reference, 1.5 * PI * PI, epsilon = 1e-14);
        let g = domain_volume(3.0, &quad(), Execution::Parallel).unwrap();
        assert!(g.abs_diff < 1e-9);
        assert_eq!(g.boundary.kind, BoundaryKind::GeodesicBoundary);
    }

    #[test]
    fn volume_near_degenerate() {
        let v = domain_volume(-2.0 + 1e-6, &quad(), Execution::Parallel).unwrap();
        assert_relative_eq!(v.value, 0.003_141_092_784_447_835, max_relative = 1e-8);
        let w = domain_volume(-2.0 + 1e-10, &quad(), Execution::Parallel).unwrap();
        assert!(w.value > 0.0 && w.value < v.value / 10.0);
        assert!(matches!(
            domain_volume(-2.0, &quad(), Execution::Parallel),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            moduli_volume(-3.0, &quad(), Execution::Parallel),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn polynomials() {
        let z = Complex64::from(0.0);
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        let v = volume_polynomial(VolumePolynomial::V0, &[z, z, z, z]).unwrap();
        assert_relative_eq!(v.re, 2.0 * PI * PI);
        assert_eq!(
            volume_polynomial(VolumePolynomial::V0, &[z, z, z, two_pi_i]).unwrap(),
            z
        );
        let l2 = Complex64::from(1.5);
        let v1 = volume_polynomial(VolumePolynomial::V1, &[two_pi_i, l2]).unwrap();
        let expected = 1.5 * 1.5 * (8.0 * PI * PI + 1.5 * 1.5) / 192.0;
        assert_relative_eq!(v1.re, expected, epsilon = 1e-13);
        assert!(v1.im.abs() < 1e-13);
        let at_zero = volume_polynomial(VolumePolynomial::V1, &[two_pi_i, z]).unwrap();
        assert_eq!(at_zero, z);
        assert!(volume_polynomial(VolumePolynomial::V1, &[z]).is_err());
    }

    #[test]
    fn derivative_relation() {
        let r = derivative_relation_check(&[0.0, 1.0, 2.0]).unwrap();
        assert!(r.constant);
        assert_relative_eq!(r.constant_value.im, PI, epsilon = 1e-12);
        assert!(r.constant_value.re.abs() < 1e-12);
        assert!(!r.matches_alternative);
        assert!(derivative_relation_check(&[7.0]).unwrap().constant);
        assert!(derivative_relation_check(&[]).is_err());
    }
}
