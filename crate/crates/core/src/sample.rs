//! Seeded samplers for property checks and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charvar::{GeometricPoint, ParamTriple};
use crate::mcg::{Involution, InvolutionWord};
use crate::mobius::UnimodularMatrix;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `1 + e^u` with `u` uniform, so that both sides of 2 are well covered.
fn above_one<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    1.0 + rng.gen_range(lo..hi).exp()
}

/// Any real triple in `[−10, 10]³`.
pub fn triple<R: Rng>(rng: &mut R) -> ParamTriple {
    ParamTriple::new(
        rng.gen_range(-10.0..10.0),
        rng.gen_range(-10.0..10.0),
        rng.gen_range(-10.0..10.0),
    )
}

/// A point of the geometric component, coordinates in about `(1.1, 13)`.
pub fn geometric<R: Rng>(rng: &mut R) -> GeometricPoint {
    loop {
        let (a, b, c) = (
            above_one(rng, -2.0, 2.5),
            above_one(rng, -2.0, 2.5),
            above_one(rng, -2.0, 2.5),
        );
        if let Ok(p) = GeometricPoint::from_coords(a, b, c) {
            return p;
        }
    }
}

/// A point of `Δ = {min(a, b, c) > 2}`.
pub fn in_domain<R: Rng>(rng: &mut R) -> GeometricPoint {
    loop {
        let mut draw = || 2.0 + rng.gen_range(-3.0..2.0f64).exp();
        let (a, b, c) = (draw(), draw(), draw());
        if let Ok(p) = GeometricPoint::from_coords(a, b, c) {
            return p;
        }
    }
}

/// A geometric point with `κ` in `(−1.9, 1.9)`: the cone-point case.
pub fn cone_point<R: Rng>(rng: &mut R) -> GeometricPoint {
    loop {
        let kappa = rng.gen_range(-1.9..1.9);
        let a = above_one(rng, -1.5, 1.5);
        let b = above_one(rng, -1.5, 1.5);
        let den = a * b - a - b;
        if den <= 1e-3 {
            continue;
        }
        let c = (kappa - 2.0 + a * b) / den;
        if let Ok(p) = GeometricPoint::from_coords(a, b, c) {
            return p;
        }
    }
}

/// A uniformly random reduced word of the given length.
pub fn reduced_word<R: Rng>(rng: &mut R, len: usize) -> InvolutionWord {
    let mut letters: Vec<Involution> = Vec::with_capacity(len);
    for _ in 0..len {
        let choices: Vec<Involution> = Involution::ALL
            .into_iter()
            .filter(|i| letters.last() != Some(i))
            .collect();
        letters.push(choices[rng.gen_range(0..choices.len())]);
    }
    InvolutionWord::new(letters).expect("adjacent letters differ by construction")
}

/// A unit-determinant matrix with entries of order one.
pub fn unimodular<R: Rng>(rng: &mut R) -> UnimodularMatrix {
    loop {
        let m11: f64 = rng.gen_range(-3.0..3.0);
        if m11.abs() < 0.2 {
            continue;
        }
        let m12 = rng.gen_range(-3.0..3.0);
        let m21 = rng.gen_range(-3.0..3.0);
        let m22 = (1.0 + m12 * m21) / m11;
        return UnimodularMatrix::new_unchecked(m11, m12, m21, m22);
    }
}

/// An elliptic matrix with `|tr| ≤ 1.98` and `|m21| ≥ 0.1`.
pub fn elliptic<R: Rng>(rng: &mut R) -> UnimodularMatrix {
    loop {
        let tr: f64 = rng.gen_range(-1.98..1.98);
        let m11 = rng.gen_range(-3.0..3.0);
        let m22 = tr - m11;
        let m21: f64 = rng.gen_range(-3.0..3.0);
        if m21.abs() < 0.1 {
            continue;
        }
        let m12 = (m11 * m22 - 1.0) / m21;
        return UnimodularMatrix::new_unchecked(m11, m12, m21, m22);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_valid() {
        let mut r1 = rng(7);
        let mut r2 = rng(7);
        for _ in 0..200 {
            let p = geometric(&mut r1);
            assert_eq!(p, geometric(&mut r2));
            let q = cone_point(&mut r1);
            assert!(q.kappa > -2.0 && q.kappa < 2.0);
            let _ = cone_point(&mut r2);
            let d = in_domain(&mut r1);
            assert!(d.min_coord() > 2.0);
            let _ = in_domain(&mut r2);
            let m = unimodular(&mut r1);
            assert!((m.det() - 1.0).abs() < 1e-12);
            let _ = unimodular(&mut r2);
            let e = elliptic(&mut r1);
            assert!(e.trace().abs() < 2.0 && (e.det() - 1.0).abs() < 1e-10);
            let _ = elliptic(&mut r2);
        }
        assert_eq!(reduced_word(&mut r1, 9).len(), 9);
    }
}
