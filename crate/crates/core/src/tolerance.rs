use serde::{Deserialize, Serialize};

/// The one tolerance record shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Band around |tr| = 2 separating parabolic from elliptic/hyperbolic.
    pub classify: f64,
    /// Fixed-point and side-pairing residuals.
    pub residual: f64,
    /// Relative tolerance for algebraic identities.
    pub identity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            classify: 1e-9,
            residual: 1e-10,
            identity: 1e-12,
        }
    }
}

/// Relative difference scaled by `max(1, |x|, |y|)`.
pub fn rel_diff(x: f64, y: f64) -> f64 {
    (x - y).abs() / 1f64.max(x.abs()).max(y.abs())
}
