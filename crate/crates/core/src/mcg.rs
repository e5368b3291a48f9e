//! Mapping-class dynamics on the `(a, b, c)` coordinates.
//!
//! The three involutions
//!
//! ```text
//! I_a: (a, b, c) ↦ (a/(a−1), b(a−1), c(a−1))
//! I_b: (a, b, c) ↦ (a(b−1), b/(b−1), c(b−1))
//! I_c: (a, b, c) ↦ (a(c−1), b(c−1), c/(c−1))
//! ```
//!
//! preserve `κ` and generate a copy of `ℤ/2 ∗ ℤ/2 ∗ ℤ/2` acting on the
//! geometric branch with fundamental domain `Δ = {min(a, b, c) > 2}`.
//! Words act right to left, as function composition.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::charvar::{matrices_from_triple, GeometricPoint, ParamTriple, RepresentationMatrices};
use crate::error::{Error, Result};
use crate::mobius::{Point, UnimodularMatrix};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Involution {
    Ia,
    Ib,
    Ic,
}

impl Involution {
    pub const ALL: [Involution; 3] = [Involution::Ia, Involution::Ib, Involution::Ic];

    /// Index of the pivot coordinate in `(a, b, c)`.
    pub fn pivot_index(self) -> usize {
        match self {
            Involution::Ia => 0,
            Involution::Ib => 1,
            Involution::Ic => 2,
        }
    }

    pub fn pivot(self, p: &ParamTriple) -> f64 {
        p.coords()[self.pivot_index()]
    }
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Involution::Ia => "Ia",
            Involution::Ib => "Ib",
            Involution::Ic => "Ic",
        })
    }
}

impl FromStr for Involution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Ia" | "a" => Ok(Involution::Ia),
            "Ib" | "b" => Ok(Involution::Ib),
            "Ic" | "c" => Ok(Involution::Ic),
            other => Err(Error::InvalidArgument(format!("unknown involution {other:?}"))),
        }
    }
}

pub fn apply_involution(i: Involution, p: &ParamTriple, tol: f64) -> Result<ParamTriple> {
    let x = i.pivot(p);
    if (x - 1.0).abs() <= tol {
        return Err(Error::PivotAtOne {
            axis: i,
            prefix_len: 0,
        });
    }
    let m = x - 1.0;
    let (a, b, c) = (p.a, p.b, p.c);
    Ok(match i {
        Involution::Ia => ParamTriple::new(a / m, b * m, c * m),
        Involution::Ib => ParamTriple::new(a * m, b / m, c * m),
        Involution::Ic => ParamTriple::new(a * m, b * m, c / m),
    })
}

/// A reduced word in the free product of three copies of `ℤ/2`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct InvolutionWord(Vec<Involution>);

impl InvolutionWord {
    pub fn new(letters: Vec<Involution>) -> Result<Self> {
        if let Some(pos) = letters.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::NotReduced { position: pos + 1 });
        }
        Ok(InvolutionWord(letters))
    }

    pub fn empty() -> Self {
        InvolutionWord(Vec::new())
    }

    pub fn letters(&self) -> &[Involution] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every reduced word of length at most `max_len`, shortest first.
    pub fn all_reduced(max_len: usize) -> Vec<InvolutionWord> {
        let mut out = vec![InvolutionWord::empty()];
        let mut layer = vec![InvolutionWord::empty()];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|w| {
                    Involution::ALL
                        .iter()
                        .filter(move |&&i| w.0.first() != Some(&i))
                        .map(move |&i| {
                            let mut letters = Vec::with_capacity(w.len() + 1);
                            letters.push(i);
                            letters.extend_from_slice(&w.0);
                            InvolutionWord(letters)
                        })
                })
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }
}

impl<'de> Deserialize<'de> for InvolutionWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let letters = Vec::<Involution>::deserialize(d)?;
        InvolutionWord::new(letters).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for InvolutionWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Apply `w`, rightmost letter first.
pub fn apply_word(w: &InvolutionWord, p: &ParamTriple, tol: f64) -> Result<ParamTriple> {
    let mut q = *p;
    for (applied, &i) in w.0.iter().rev().enumerate() {
        q = apply_involution(i, &q, tol).map_err(|e| match e {
            Error::PivotAtOne { axis, .. } => Error::PivotAtOne {
                axis,
                prefix_len: applied,
            },
            other => other,
        })?;
    }
    Ok(q)
}

pub fn in_fundamental_domain(p: &ParamTriple) -> bool {
    p.min_coord() > 2.0
}

/// Membership in the closure of `Δ`, with `tol` slack for rounding.
pub fn in_domain_closure(p: &ParamTriple, tol: f64) -> bool {
    p.min_coord() >= 2.0 - tol
}

/// Witness of a greedy descent of `E = abc` into the closure of `Δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub start: ParamTriple,
    pub word: InvolutionWord,
    pub end: ParamTriple,
    /// `E` at the start and after every move.
    pub energies: Vec<f64>,
}

/// Greedy energy descent. Each step applies, among the involutions whose
/// pivot lies in `(1, 2)`, the one with the smallest resulting energy
/// `abc·(pivot − 1)`; ties go to the earlier axis.
pub fn reduce_to_domain(p: &GeometricPoint, max_steps: usize, tol: &Tolerances) -> Result<ReductionTrace> {
    let start = *p.triple();
    let mut q = start;
    let mut applied: Vec<Involution> = Vec::new();
    let mut energies = vec![q.energy()];
    while !in_domain_closure(&q, tol.identity) {
        if applied.len() >= max_steps {
            return Err(Error::MaxStepsExceeded { max_steps });
        }
        let e = q.energy();
        let best = Involution::ALL
            .iter()
            .filter_map(|&i| {
                let x = i.pivot(&q);
                (x > 1.0 && x < 2.0).then_some((i, e * (x - 1.0)))
            })
            .min_by(|l, r| l.1.total_cmp(&r.1));
        let Some((i, _)) = best else {
            // some coordinate <= 1: left the geometric branch
            return Err(Error::NotGeometric {
                a: q.a,
                b: q.b,
                c: q.c,
            });
        };
        q = apply_involution(i, &q, tol.identity)?;
        applied.push(i);
        energies.push(q.energy());
    }
    applied.reverse();
    Ok(ReductionTrace {
        start,
        word: InvolutionWord::new(applied)?,
        end: q,
        energies,
    })
}

/// A letter of the free group on `α, β, γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    Alpha,
    AlphaInv,
    Beta,
    BetaInv,
    Gamma,
    GammaInv,
}

impl Generator {
    pub fn inverse(self) -> Generator {
        use Generator::*;
        match self {
            Alpha => AlphaInv,
            AlphaInv => Alpha,
            Beta => BetaInv,
            BetaInv => Beta,
            Gamma => GammaInv,
            GammaInv => Gamma,
        }
    }

    fn symbol(self) -> char {
        use Generator::*;
        match self {
            Alpha => 'a',
            AlphaInv => 'A',
            Beta => 'b',
            BetaInv => 'B',
            Gamma => 'c',
            GammaInv => 'C',
        }
    }

    fn matrix(self, m: &RepresentationMatrices) -> UnimodularMatrix {
        use Generator::*;
        match self {
            Alpha => m.a,
            AlphaInv => m.a.inverse(),
            Beta => m.b,
            BetaInv => m.b.inverse(),
            Gamma => m.c,
            GammaInv => m.c.inverse(),
        }
    }
}

/// A freely reduced word in `α^±1, β^±1, γ^±1`. Text form uses `a b c` for
/// the generators and `A B C` for their inverses, read left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FreeWord(Vec<Generator>);

impl FreeWord {
    /// Freely reduces the input.
    pub fn new(letters: impl IntoIterator<Item = Generator>) -> Self {
        let mut out: Vec<Generator> = Vec::new();
        for g in letters {
            if out.last() == Some(&g.inverse()) {
                out.pop();
            } else {
                out.push(g);
            }
        }
        FreeWord(out)
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|g| g.inverse()).collect())
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        FreeWord::new(self.0.iter().chain(&other.0).copied())
    }

    /// `u g u⁻¹`.
    pub fn conjugate(g: Generator, u: &FreeWord) -> FreeWord {
        u.concat(&FreeWord(vec![g])).concat(&u.inverse())
    }

    /// `ρ(w)`: the product of the letter images in reading order.
    pub fn eval(&self, m: &RepresentationMatrices) -> UnimodularMatrix {
        self.0
            .iter()
            .fold(UnimodularMatrix::IDENTITY, |acc, g| acc * g.matrix(m))
    }

    /// Whether the word is `u g u⁻¹` for a single letter `g`.
    pub fn is_conjugate_of_letter(&self) -> bool {
        let n = self.0.len();
        if n.is_multiple_of(2) {
            return false;
        }
        (0..n / 2).all(|i| self.0[i] == self.0[n - 1 - i].inverse())
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let s: String = self.0.iter().map(|g| g.symbol()).collect();
        f.write_str(&s)
    }
}

impl FromStr for FreeWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use Generator::*;
        s.chars()
            .filter(|c| !c.is_whitespace() && *c != '1')
            .map(|c| match c {
                'a' => Ok(Alpha),
                'A' => Ok(AlphaInv),
                'b' => Ok(Beta),
                'B' => Ok(BetaInv),
                'c' => Ok(Gamma),
                'C' => Ok(GammaInv),
                other => Err(Error::InvalidArgument(format!("bad letter {other:?} in word"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(FreeWord::new)
    }
}

impl Serialize for FreeWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FreeWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An automorphism given by the images of `α, β, γ`, each a conjugate of a
/// generator or its inverse so that all images stay parabolic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Automorphism {
    pub image_alpha: FreeWord,
    pub image_beta: FreeWord,
    pub image_gamma: FreeWord,
}

impl Automorphism {
    pub fn new(image_alpha: FreeWord, image_beta: FreeWord, image_gamma: FreeWord) -> Result<Self> {
        if ![&image_alpha, &image_beta, &image_gamma]
            .iter()
            .all(|w| w.is_conjugate_of_letter())
        {
            return Err(Error::NotPeripheral);
        }
        Ok(Automorphism {
            image_alpha,
            image_beta,
            image_gamma,
        })
    }

    fn from_strs(a: &str, b: &str, c: &str) -> Self {
        Automorphism::new(a.parse().unwrap(), b.parse().unwrap(), c.parse().unwrap())
            .expect("built-in automorphism is peripheral")
    }

    pub fn identity() -> Self {
        Automorphism::from_strs("a", "b", "c")
    }

    /// `α ↦ α⁻¹, β ↦ β⁻¹, γ ↦ α γ⁻¹ α⁻¹`; induces `I_a`.
    pub fn phi_alpha() -> Self {
        Automorphism::from_strs("A", "B", "aCA")
    }

    /// `α ↦ α⁻¹, β ↦ α⁻¹β⁻¹α, γ ↦ (βα)⁻¹ γ⁻¹ (βα)`; induces `I_b`.
    pub fn phi_beta() -> Self {
        Automorphism::from_strs("A", "ABa", "ABCba")
    }

    /// `α ↦ α⁻¹, β ↦ γ β⁻¹ γ⁻¹, γ ↦ γ⁻¹`; induces `I_c`.
    pub fn phi_gamma() -> Self {
        Automorphism::from_strs("A", "cBC", "C")
    }

    pub fn named(name: &str) -> Result<Self> {
        match name {
            "identity" | "id" => Ok(Automorphism::identity()),
            "phi_alpha" => Ok(Automorphism::phi_alpha()),
            "phi_beta" => Ok(Automorphism::phi_beta()),
            "phi_gamma" => Ok(Automorphism::phi_gamma()),
            other => Err(Error::InvalidArgument(format!("unknown automorphism {other:?}"))),
        }
    }
}

/// Intermediate values of [`induced_map`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InducedMap {
    pub images: [UnimodularMatrix; 3],
    /// `f(α)⁺, f(β)⁺, f(γ)⁺`.
    pub fixed_points: [Point; 3],
    /// `f(γ)(f(α)⁺)`.
    pub gamma_image_at_alpha_fixed: Point,
    pub result: ParamTriple,
}

fn parabolic_fixed_point(m: &UnimodularMatrix, tol: f64) -> Result<Point> {
    let tr = m.trace();
    let scale = 1f64.max(m.max_abs_entry().powi(2));
    if (tr.abs() - 2.0).abs() > tol * scale {
        return Err(Error::NonParabolicImage { trace: tr });
    }
    if m.m21 == 0.0 {
        return Ok(Point::Infinity);
    }
    Ok(Point::Real((m.m11 - m.m22) / (2.0 * m.m21)))
}

/// Coefficients of the projective map sending `(p0, p1, p∞)` to `(0, 1, ∞)`.
fn normalizer(p0: Point, p1: Point, pinf: Point) -> UnimodularMatrix {
    let (x0, x1, xi) = (p0.real(), p1.real(), pinf.real());
    // F(x) = (x − p0)(p1 − p∞) / ((x − p∞)(p1 − p0)), with limits at ∞;
    // the determinant is not normalized, only the action is used.
    match (x0, x1, xi) {
        (Some(x0), Some(x1), Some(xi)) => {
            UnimodularMatrix::new_unchecked(x1 - xi, -x0 * (x1 - xi), x1 - x0, -xi * (x1 - x0))
        }
        (Some(x0), Some(x1), None) => UnimodularMatrix::new_unchecked(1.0, -x0, 0.0, x1 - x0),
        (None, Some(x1), Some(xi)) => UnimodularMatrix::new_unchecked(0.0, x1 - xi, 1.0, -xi),
        (Some(x0), None, Some(xi)) => UnimodularMatrix::new_unchecked(1.0, -x0, 1.0, -xi),
        _ => UnimodularMatrix::new_unchecked(f64::NAN, f64::NAN, f64::NAN, f64::NAN),
    }
}

fn as_real(p: Point) -> f64 {
    match p {
        Point::Infinity => f64::INFINITY,
        Point::Real(x) => x,
        Point::Interior(z) => z.re,
    }
}

/// The map `(a, b, c) ↦ (a′, b′, c′)` induced by `f` through the fixed
/// points of the parabolic images, normalized by the cross-ratio map `F`
/// sending `f(α)⁺, f(β)⁺, f(γ)⁺` to `0, 1, ∞`:
///
/// `a′ = 1/F(f(α)(f(γ)⁺))`, `b′ = 1/(F(f(β)(f(γ)⁺)) − 1)`,
/// `c′ = −F(f(γ)(f(α)⁺))`.
pub fn induced_map_detailed(f: &Automorphism, p: &ParamTriple, tol: &Tolerances) -> Result<InducedMap> {
    let m = matrices_from_triple(p);
    let images = [
        f.image_alpha.eval(&m),
        f.image_beta.eval(&m),
        f.image_gamma.eval(&m),
    ];
    let fp = [
        parabolic_fixed_point(&images[0], tol.classify)?,
        parabolic_fixed_point(&images[1], tol.classify)?,
        parabolic_fixed_point(&images[2], tol.classify)?,
    ];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if fp[i].chordal_distance(&fp[j]) <= tol.residual {
            return Err(Error::CoincidentFixedPoints);
        }
    }
    let norm = normalizer(fp[0], fp[1], fp[2]);
    let big_f = |x: Point| as_real(norm.apply(x));

    let gamma_at_alpha = images[2].apply(fp[0]);
    let a = 1.0 / big_f(images[0].apply(fp[2]));
    let b = 1.0 / (big_f(images[1].apply(fp[2])) - 1.0);
    let c = -big_f(gamma_at_alpha);
    Ok(InducedMap {
        images,
        fixed_points: fp,
        gamma_image_at_alpha_fixed: gamma_at_alpha,
        result: ParamTriple::new(a, b, c),
    })
}

pub fn induced_map(f: &Automorphism, p: &ParamTriple, tol: &Tolerances) -> Result<ParamTriple> {
    induced_map_detailed(f, p, tol).map(|m| m.result)
}

/// Intersection of a fixed plane `{x = 2}` with the level set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedCurve {
    pub plane: Involution,
    /// `K` in `(x − 2)(y − 2) = K` for the two remaining coordinates.
    pub hyperbola_constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixedLocusIntersection {
    /// `κ > −2`: three pairwise disjoint hyperbolae.
    Hyperbolae {
        curves: [FixedCurve; 3],
        samples_per_curve: usize,
        max_level_residual: f64,
        max_fixed_residual: f64,
        /// Smallest `|x − 2|` over sampled points of one curve, for the
        /// coordinates whose planes carry the other two curves.
        min_separation: f64,
        disjoint: bool,
    },
    /// `κ = −2`: the lines `{a = 2}, {b = 2}, {c = 2}` meet at `(2, 2, 2)`.
    ConcurrentLines { concurrency: [f64; 3] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedLocusReport {
    pub kappa: f64,
    pub intersections: FixedLocusIntersection,
}

/// Point on the plane of `axis` whose other coordinates are `(x, y)`.
fn on_plane(axis: Involution, x: f64, y: f64) -> ParamTriple {
    match axis {
        Involution::Ia => ParamTriple::new(2.0, x, y),
        Involution::Ib => ParamTriple::new(x, 2.0, y),
        Involution::Ic => ParamTriple::new(x, y, 2.0),
    }
}

/// Sample points `(x, y)` of `(x − 2)(y − 2) = K` with `x, y > 1`.
fn hyperbola_samples(k: f64, n: usize) -> Vec<(f64, f64)> {
    let upper = n.div_ceil(2).max(1);
    let mut pts: Vec<(f64, f64)> = (0..upper)
        .map(|i| {
            let s = -3.0 + 6.0 * i as f64 / (upper.max(2) - 1) as f64;
            let t = 10f64.powf(s);
            (2.0 + t, 2.0 + k / t)
        })
        .collect();
    // lower branch t ∈ (−1, −K) exists iff K < 1
    if k < 1.0 {
        let lower = n - upper;
        pts.extend((1..=lower).map(|i| {
            let t = -1.0 + (1.0 - k) * i as f64 / (lower + 1) as f64;
            (2.0 + t, 2.0 + k / t)
        }));
    }
    pts
}

pub fn fixed_locus_report(kappa: f64, samples: usize, tol: &Tolerances) -> Result<FixedLocusReport> {
    if (kappa + 2.0).abs() <= tol.classify {
        return Ok(FixedLocusReport {
            kappa,
            intersections: FixedLocusIntersection::ConcurrentLines {
                concurrency: [2.0, 2.0, 2.0],
            },
        });
    }
    if !(kappa > -2.0) {
        return Err(Error::OutOfRange { kappa });
    }
    let k = kappa + 2.0;
    let curves = Involution::ALL.map(|plane| FixedCurve {
        plane,
        hyperbola_constant: k,
    });
    let mut max_level_residual: f64 = 0.0;
    let mut max_fixed_residual: f64 = 0.0;
    let mut min_separation = f64::INFINITY;
    let mut count = 0;
    for curve in &curves {
        let pts = hyperbola_samples(k, samples);
        count = pts.len();
        for (x, y) in pts {
            let p = on_plane(curve.plane, x, y);
            max_level_residual = max_level_residual.max((p.kappa - kappa).abs() / p.kappa_scale());
            let q = apply_involution(curve.plane, &p, tol.identity)?;
            let moved = p
                .coords()
                .iter()
                .zip(q.coords())
                .map(|(u, v)| (u - v).abs() / u.abs().max(1.0))
                .fold(0.0, f64::max);
            max_fixed_residual = max_fixed_residual.max(moved);
            // off the other two planes
            for other in Involution::ALL.iter().filter(|&&o| o != curve.plane) {
                min_separation = min_separation.min((other.pivot(&p) - 2.0).abs());
            }
        }
    }
    Ok(FixedLocusReport {
        kappa,
        intersections: FixedLocusIntersection::Hyperbolae {
            curves,
            samples_per_curve: count,
            max_level_residual,
            max_fixed_residual,
            min_separation,
            disjoint: min_separation > 0.0,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const TOL: f64 = 1e-12;

    fn t(a: f64, b: f64, c: f64) -> ParamTriple {
        ParamTriple::new(a, b, c)
    }

    #[test]
    fn involution_examples() {
        let p = apply_involution(Involution::Ib, &t(3.0, 3.0, 3.0), TOL).unwrap();
        assert_eq!(p.coords(), [6.0, 1.5, 6.0]);
        let back = apply_involution(Involution::Ib, &p, TOL).unwrap();
        assert_eq!(back.coords(), [3.0, 3.0, 3.0]);
        let fixed = apply_involution(Involution::Ib, &t(5.5, 2.0, 0.3), TOL).unwrap();
        assert_eq!(fixed.coords(), [5.5, 2.0, 0.3]);
        assert_eq!(
            apply_involution(Involution::Ia, &t(1.0, 3.0, 3.0), TOL),
            Err(Error::PivotAtOne {
                axis: Involution::Ia,
                prefix_len: 0
            })
        );
    }

    #[test]
    fn word_examples() {
        let p = t(3.0, 3.0, 3.0);
        assert_eq!(apply_word(&InvolutionWord::empty(), &p, TOL).unwrap(), p);
        let w = InvolutionWord::new(vec![Involution::Ia, Involution::Ib]).unwrap();
        let q = apply_word(&w, &p, TOL).unwrap();
        assert_relative_eq!(q.a, 1.2, epsilon = 1e-14);
        assert_relative_eq!(q.b, 7.5, epsilon = 1e-14);
        assert_relative_eq!(q.c, 30.0, epsilon = 1e-13);
        assert!((q.kappa - 2.0).abs() <= 1e-12 * q.kappa_scale());
        assert_eq!(
            InvolutionWord::new(vec![Involution::Ib, Involution::Ib]),
            Err(Error::NotReduced { position: 1 })
        );
    }

    #[test]
    fn word_reports_failing_prefix() {
        // Ib sends (3, 2, 3) to itself, then Ia meets a = 1? use (3, 1.5, 1.5): Ib gives (1.5, 3, 0.75)
        let w = InvolutionWord::new(vec![Involution::Ic, Involution::Ib]).unwrap();
        let p = t(3.0, 1.5, 4.0);
        // after Ib: c = 4 * 0.5 = 2 -> Ic fine; build a real failure instead
        assert!(apply_word(&w, &p, TOL).is_ok());
        let p = t(3.0, 1.5, 2.0);
        // Ib: c becomes 1 -> Ic pivot at one after 1 letter
        assert_eq!(
            apply_word(&w, &p, TOL),
            Err(Error::PivotAtOne {
                axis: Involution::Ic,
                prefix_len: 1
            })
        );
    }

    #[test]
    fn reduced_word_count() {
        // 1 + 3 + 6 + 12 + 24
        assert_eq!(InvolutionWord::all_reduced(4).len(), 46);
        assert!(InvolutionWord::all_reduced(4)
            .iter()
            .all(|w| InvolutionWord::new(w.letters().to_vec()).is_ok()));
    }

    #[test]
    fn domain_membership() {
        assert!(in_fundamental_domain(&t(3.0, 3.0, 3.0)));
        assert!(!in_fundamental_domain(&t(6.0, 1.5, 6.0)));
        assert!(!in_fundamental_domain(&t(2.0, 3.0, 3.0)));
        assert!(in_domain_closure(&t(2.0, 3.0, 3.0), 0.0));
    }

    #[test]
    fn reduction_examples() {
        let tol = Tolerances::default();
        let r = reduce_to_domain(&GeometricPoint::from_coords(6.0, 1.5, 6.0).unwrap(), 200, &tol).unwrap();
        assert_eq!(r.word.letters(), &[Involution::Ib]);
        assert_eq!(r.end.coords(), [3.0, 3.0, 3.0]);

        let r = reduce_to_domain(&GeometricPoint::from_coords(3.0, 3.0, 3.0).unwrap(), 200, &tol).unwrap();
        assert!(r.word.is_empty());
        assert_eq!(r.energies, vec![27.0]);

        let r = reduce_to_domain(&GeometricPoint::from_coords(1.2, 7.5, 30.0).unwrap(), 200, &tol).unwrap();
        assert_eq!(r.word.letters(), &[Involution::Ib, Involution::Ia]);
        for (x, y) in r.end.coords().iter().zip([3.0, 3.0, 3.0]) {
            assert_relative_eq!(*x, y, epsilon = 1e-12);
        }
        assert!(r.energies.windows(2).all(|w| w[1] < w[0]));
        let replay = apply_word(&r.word, &r.start, TOL).unwrap();
        assert_eq!(replay, r.end);
    }

    #[test]
    fn reduction_step_limit() {
        let tol = Tolerances::default();
        let p = GeometricPoint::from_coords(1.2, 7.5, 30.0).unwrap();
        assert_eq!(
            reduce_to_domain(&p, 1, &tol),
            Err(Error::MaxStepsExceeded { max_steps: 1 })
        );
    }

    #[test]
    fn free_words() {
        let w: FreeWord = "aAbB".parse().unwrap();
        assert!(w.letters().is_empty());
        let w: FreeWord = "ABCba".parse().unwrap();
        assert_eq!(w.to_string(), "ABCba");
        assert!(w.is_conjugate_of_letter());
        assert!(!"ab".parse::<FreeWord>().unwrap().is_conjugate_of_letter());
        assert_eq!(
            FreeWord::conjugate(Generator::GammaInv, &"AB".parse().unwrap()).to_string(),
            "ABCba"
        );
        assert!("axb".parse::<FreeWord>().is_err());
        assert!(
            Automorphism::new("ab".parse().unwrap(), "b".parse().unwrap(), "c".parse().unwrap()).is_err()
        );
    }

    #[test]
    fn word_evaluation_is_a_homomorphism() {
        let m = matrices_from_triple(&t(2.5, 3.5, 4.5));
        let u: FreeWord = "abC".parse().unwrap();
        let v: FreeWord = "cBa".parse().unwrap();
        let lhs = u.concat(&v).eval(&m);
        let rhs = u.eval(&m) * v.eval(&m);
        assert!((lhs.m11 - rhs.m11).abs() < 1e-9);
        // δ = γβα evaluates to CBA
        let delta: FreeWord = "cba".parse().unwrap();
        assert_eq!(delta.eval(&m), m.cba);
    }

    #[test]
    fn induced_examples() {
        let tol = Tolerances::default();
        let p = t(3.0, 3.0, 3.0);
        let q = induced_map(&Automorphism::phi_beta(), &p, &tol).unwrap();
        for (x, y) in q.coords().iter().zip([6.0, 1.5, 6.0]) {
            assert_relative_eq!(*x, y, epsilon = 1e-12);
        }
        let id = induced_map(&Automorphism::identity(), &p, &tol).unwrap();
        for (x, y) in id.coords().iter().zip(p.coords()) {
            assert_relative_eq!(*x, y, epsilon = 1e-13);
        }
    }

    #[test]
    fn induced_matches_involutions() {
        let tol = Tolerances::default();
        let p = t(2.5, 3.25, 4.75);
        for (f, i) in [
            (Automorphism::phi_alpha(), Involution::Ia),
            (Automorphism::phi_beta(), Involution::Ib),
            (Automorphism::phi_gamma(), Involution::Ic),
        ] {
            let q = induced_map(&f, &p, &tol).unwrap();
            let r = apply_involution(i, &p, TOL).unwrap();
            for (x, y) in q.coords().iter().zip(r.coords()) {
                assert_relative_eq!(*x, y, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn induced_fixed_points_of_phi_beta() {
        // f(α)⁺ = 0, f(β)⁺ = 1/(1-a), f(γ)⁺ = (1-b)/(ab - a - b)
        let tol = Tolerances::default();
        let (a, b, c) = (2.5, 4.0, 3.5);
        let d = induced_map_detailed(&Automorphism::phi_beta(), &t(a, b, c), &tol).unwrap();
        assert_relative_eq!(as_real(d.fixed_points[0]), 0.0, epsilon = 1e-14);
        assert_relative_eq!(as_real(d.fixed_points[1]), 1.0 / (1.0 - a), epsilon = 1e-12);
        assert_relative_eq!(
            as_real(d.fixed_points[2]),
            (1.0 - b) / (a * b - a - b),
            epsilon = 1e-12
        );
    }

    #[test]
    fn induced_rejects_coincident() {
        // a γ-image equal to α collides with f(α)⁺
        let f = Automorphism::new("a".parse().unwrap(), "b".parse().unwrap(), "a".parse().unwrap()).unwrap();
        assert_eq!(
            induced_map(&f, &t(3.0, 3.0, 3.0), &Tolerances::default()),
            Err(Error::CoincidentFixedPoints)
        );
    }

    #[test]
    fn fixed_locus() {
        let tol = Tolerances::default();
        let r = fixed_locus_report(-2.0, 100, &tol).unwrap();
        assert_eq!(
            r.intersections,
            FixedLocusIntersection::ConcurrentLines {
                concurrency: [2.0, 2.0, 2.0]
            }
        );
        assert!(matches!(
            fixed_locus_report(-3.0, 10, &tol),
            Err(Error::OutOfRange { .. })
        ));
        let r = fixed_locus_report(2.0, 1000, &tol).unwrap();
        let FixedLocusIntersection::Hyperbolae {
            curves,
            disjoint,
            max_level_residual,
            max_fixed_residual,
            ..
        } = r.intersections
        else {
            panic!("expected hyperbolae");
        };
        assert_eq!(curves[2].hyperbola_constant, 4.0);
        assert!(disjoint);
        assert!(max_level_residual < 1e-14);
        assert!(max_fixed_residual < 1e-14);
    }

    #[test]
    fn fixed_locus_lower_branch() {
        let r = fixed_locus_report(-1.5, 1000, &Tolerances::default()).unwrap();
        let FixedLocusIntersection::Hyperbolae {
            samples_per_curve,
            disjoint,
            ..
        } = r.intersections
        else {
            panic!("expected hyperbolae");
        };
        assert_eq!(samples_per_curve, 1000);
        assert!(disjoint);
    }
}
