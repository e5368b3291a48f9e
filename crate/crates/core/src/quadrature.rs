//! Adaptive Gauss–Kronrod (7/15) quadrature on a finite interval.
//!
//! The interval is cut into equal panels that are refined independently
//! (in parallel when enabled); each panel bisects its worst subinterval
//! until its error share is met.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::Execution;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes 1, 3, 5 and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Upper bound on bisections summed over all panels.
    pub max_subdivisions: usize,
    pub panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_subdivisions: 4000,
            panels: 16,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tolerance(self, abs_tol: f64, rel_tol: f64) -> Self {
        QuadratureConfig {
            abs_tol,
            rel_tol,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod rule with the embedded 7-point Gauss estimate.
fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> QuadratureResult {
    let mut heap = BinaryHeap::new();
    let first = gk15(f, lo, hi);
    let (mut value, mut error) = (first.value, first.error);
    heap.push(first);
    let mut subdivisions = 0;
    while error > abs_tol.max(rel_tol * value.abs()) && subdivisions < max_subdivisions {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // interval exhausted in floating point
            heap.push(worst);
            break;
        }
        let left = gk15(f, worst.lo, mid);
        let right = gk15(f, mid, worst.hi);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
    // recompute sums to shed accumulated cancellation
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    QuadratureResult {
        value,
        abs_error: error,
        evaluations: 15 * (2 * subdivisions + 1),
        subdivisions,
    }
}

/// `∫_lo^hi f`. Fails with [`Error::QuadratureNotConverged`] if the total
/// error estimate exceeds `max(abs_tol, rel_tol·|value|)`.
pub fn integrate<F>(
    f: F,
    lo: f64,
    hi: f64,
    cfg: &QuadratureConfig,
    exec: Execution,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    if !(lo.is_finite() && hi.is_finite()) || cfg.panels == 0 {
        return Err(Error::InvalidArgument(
            "quadrature needs a finite interval and at least one panel".into(),
        ));
    }
    let n = cfg.panels;
    let width = (hi - lo) / n as f64;
    let share_abs = cfg.abs_tol / n as f64;
    let per_panel = (cfg.max_subdivisions / n).max(1);
    let parts = exec.map_range(n, |i| {
        let a = lo + width * i as f64;
        let b = if i + 1 == n { hi } else { a + width };
        adapt(&f, a, b, share_abs, cfg.rel_tol, per_panel)
    });
    let result = parts.iter().fold(
        QuadratureResult {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
            subdivisions: 0,
        },
        |acc, p| QuadratureResult {
            value: acc.value + p.value,
            abs_error: acc.abs_error + p.abs_error,
            evaluations: acc.evaluations + p.evaluations,
            subdivisions: acc.subdivisions + p.subdivisions,
        },
    );
    if result.abs_error > cfg.abs_tol.max(cfg.rel_tol * result.value.abs()) {
        return Err(Error::QuadratureNotConverged {
            estimate: result.abs_error,
            subdivisions: result.subdivisions,
        });
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let r = integrate(
            |x| x.powi(5) - 3.0 * x,
            0.0,
            2.0,
            &QuadratureConfig::default(),
            Execution::Sequential,
        )
        .unwrap();
        assert!((r.value - (64.0 / 6.0 - 6.0)).abs() < 1e-13);
    }

    #[test]
    fn log_singularity() {
        // ∫_0^1 ln x dx = -1
        let r = integrate(
            |x| x.ln(),
            0.0,
            1.0,
            &QuadratureConfig::default(),
            Execution::Parallel,
        )
        .unwrap();
        assert!((r.value + 1.0).abs() < 1e-11, "{r:?}");
    }

    #[test]
    fn oscillatory() {
        let r = integrate(
            |x| (10.0 * x).sin(),
            0.0,
            PI,
            &QuadratureConfig::default(),
            Execution::Sequential,
        )
        .unwrap();
        assert!(r.value.abs() < 1e-12);
        let r = integrate(
            |x| x.sin(),
            0.0,
            PI,
            &QuadratureConfig::default(),
            Execution::Sequential,
        )
        .unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadratureConfig {
            max_subdivisions: 1,
            panels: 1,
            ..QuadratureConfig::default()
        };
        assert!(matches!(
            integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, &cfg, Execution::Sequential),
            Err(Error::QuadratureNotConverged { .. })
        ));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let f = |x: f64| (1.0 + x * x).ln() / (1.0 + x);
        let cfg = QuadratureConfig::default();
        let s = integrate(f, 0.0, 3.0, &cfg, Execution::Sequential).unwrap();
        let p = integrate(f, 0.0, 3.0, &cfg, Execution::Parallel).unwrap();
        assert_eq!(s.value, p.value);
    }
}
