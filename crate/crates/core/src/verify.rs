//! Property suites and the acceptance checks.
//!
//! Every check draws its samples from its own seeded stream, so results do
//! not depend on which other checks run.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::charvar::{
    self, c_from_level, cba_fixed_point, inequality_report, kappa_of, matrices_from_triple,
    polygon_certificate, GeometricPoint, ParamTriple,
};
use crate::error::{Error, Result};
use crate::growth::{bowditch_check, expand_tree, length_census, FeMode, StartEdge};
use crate::mcg::{
    apply_involution, apply_word, fixed_locus_report, in_domain_closure, induced_map, induced_map_detailed,
    reduce_to_domain, Automorphism, FixedLocusIntersection, Involution, InvolutionWord,
};
use crate::mobius::{classify, elliptic_real_part_sign, fixed_points, Point, Sign};
use crate::par::Execution;
use crate::quadrature::QuadratureConfig;
use crate::sample;
use crate::tolerance::{rel_diff, Tolerances};
use crate::volume::{
    darboux_check, derivative_relation_check, domain_volume, moduli_volume, symplectic_consistency,
    symplectic_refinement, volume_polynomial, VolumePolynomial,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Mobius,
    Charvar,
    Mcg,
    Growth,
    Volume,
    Acceptance,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = [
        "mobius",
        "charvar",
        "mcg",
        "growth",
        "volume",
        "acceptance",
        "all",
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = *self as usize;
        f.write_str(Suite::NAMES[i])
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "mobius" => Suite::Mobius,
            "charvar" => Suite::Charvar,
            "mcg" => Suite::Mcg,
            "growth" => Suite::Growth,
            "volume" => Suite::Volume,
            "acceptance" => Suite::Acceptance,
            "all" => Suite::All,
            other => return Err(Error::InvalidArgument(format!("unknown suite {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {} {}: {}", self.id, self.title, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub tol: Tolerances,
    pub quad: QuadratureConfig,
    pub exec: Execution,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 20_240_601,
            tol: Tolerances::default(),
            quad: QuadratureConfig::default(),
            exec: Execution::default(),
        }
    }
}

impl VerifyConfig {
    fn rng(&self, stream: u64) -> sample::SampleRng {
        sample::rng(self.seed.wrapping_mul(0x9E37_79B9).wrapping_add(stream))
    }
}

fn check(id: &str, title: &str, body: impl FnOnce() -> Result<(bool, String)>) -> CheckOutcome {
    let (passed, detail) = body().unwrap_or_else(|e| (false, format!("error [{}]: {e}", e.code())));
    CheckOutcome {
        id: id.to_string(),
        title: title.to_string(),
        passed,
        detail,
    }
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

fn coord_diff(p: &ParamTriple, q: &ParamTriple) -> f64 {
    max_of(p.coords().iter().zip(q.coords()).map(|(x, y)| rel_diff(*x, y)))
}

fn collect<T>(v: Vec<Result<T>>) -> Result<Vec<T>> {
    v.into_iter().collect()
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    let checks = match suite {
        Suite::Mobius => mobius_suite(cfg),
        Suite::Charvar => charvar_suite(cfg),
        Suite::Mcg => mcg_suite(cfg),
        Suite::Growth => growth_suite(cfg),
        Suite::Volume => volume_suite(cfg),
        Suite::Acceptance => acceptance(cfg),
        Suite::All => [
            mobius_suite(cfg),
            charvar_suite(cfg),
            mcg_suite(cfg),
            growth_suite(cfg),
            volume_suite(cfg),
            acceptance(cfg),
        ]
        .concat(),
    };
    let passed = checks.iter().all(|c| c.passed);
    SuiteReport {
        suite,
        seed: cfg.seed,
        checks,
        passed,
    }
}

pub fn acceptance(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    vec![
        ac1(cfg),
        ac2(cfg),
        ac3(cfg),
        ac4(cfg),
        ac5(cfg),
        ac6(cfg),
        ac7(cfg),
        ac8(cfg),
        ac9(cfg),
        ac10(cfg),
        ac11(cfg),
    ]
}

pub fn ac1(cfg: &VerifyConfig) -> CheckOutcome {
    check("AC1", "kappa anchors and tr CBA", || {
        let k3 = kappa_of(3.0, 3.0, 3.0);
        let k2 = kappa_of(2.0, 2.0, 2.0);
        let mut r = cfg.rng(1);
        let pts: Vec<ParamTriple> = (0..10_000).map(|_| sample::triple(&mut r)).collect();
        let worst = max_of(cfg.exec.map(&pts, |p| {
            (matrices_from_triple(p).cba.trace() - p.kappa).abs() / p.kappa_scale()
        }));
        Ok((
            k3 == 2.0 && k2 == -2.0 && worst <= 1e-12,
            format!("kappa(3,3,3) = {k3}, kappa(2,2,2) = {k2}, max |tr CBA - kappa|/scale = {worst:.2e} over 10000 triples"),
        ))
    })
}

/// `f(γ)(0)` for `φ_β` in closed form.
fn phi_beta_gamma_at_zero(a: f64, b: f64, c: f64) -> f64 {
    (-b * b * c + 2.0 * b * c - c) / (a * b * b * c - 2.0 * a * b * c + a * c - b * b * c + b * c - 1.0)
}

pub fn ac2(cfg: &VerifyConfig) -> CheckOutcome {
    check("AC2", "induced map of phi_beta equals I_b", || {
        let tol = cfg.tol;
        let mut r = cfg.rng(2);
        let pts: Vec<GeometricPoint> = (0..1000).map(|_| sample::geometric(&mut r)).collect();
        let f = Automorphism::phi_beta();
        let rows = collect(cfg.exec.map(&pts, |p| {
            let d = induced_map_detailed(&f, p, &tol)?;
            let ib = apply_involution(Involution::Ib, p, tol.identity)?;
            let g = match d.gamma_image_at_alpha_fixed {
                Point::Real(x) => x,
                other => return Err(Error::CertificateFailed(format!("f(gamma)(0) = {other:?}"))),
            };
            Ok((
                coord_diff(&d.result, &ib),
                rel_diff(g, phi_beta_gamma_at_zero(p.a, p.b, p.c)),
            ))
        }))?;
        let map_err = max_of(rows.iter().map(|r| r.0));
        let rat_err = max_of(rows.iter().map(|r| r.1));
        Ok((
            map_err <= 1e-9 && rat_err <= 1e-9,
            format!("max rel diff vs I_b = {map_err:.2e}, f(gamma)(0) vs rational = {rat_err:.2e} over 1000 points"),
        ))
    })
}

/// Bit `i` set when coordinate `i` is below 2.
fn below_two_mask(p: &ParamTriple) -> u8 {
    p.coords()
        .iter()
        .enumerate()
        .filter(|(_, &x)| x < 2.0)
        .fold(0, |m, (i, _)| m | (1 << i))
}

pub fn ac3(cfg: &VerifyConfig) -> CheckOutcome {
    check("AC3", "group action", || {
        let tol = cfg.tol;
        let mut r = cfg.rng(3);
        let words = InvolutionWord::all_reduced(8);
        let bases: Vec<GeometricPoint> = (0..10).map(|_| sample::geometric(&mut r)).collect();
        let kappa_err = max_of(collect(cfg.exec.map(&bases, |p| {
            words
                .iter()
                .map(|w| {
                    let q = apply_word(w, p, tol.identity)?;
                    Ok((q.kappa - p.kappa).abs() / q.kappa_scale())
                })
                .collect::<Result<Vec<f64>>>()
                .map(max_of)
        }))?);

        let pts: Vec<GeometricPoint> = (0..1000).map(|_| sample::geometric(&mut r)).collect();
        let mut square_err: f64 = 0.0;
        for p in &pts {
            for i in Involution::ALL {
                let q = apply_involution(i, &apply_involution(i, p, tol.identity)?, tol.identity)?;
                square_err = square_err.max(coord_diff(p, &q));
            }
        }

        let dom: Vec<GeometricPoint> = (0..1000).map(|_| sample::in_domain(&mut r)).collect();
        let mut disjoint = true;
        for p in &dom {
            disjoint &= below_two_mask(p) == 0;
            for i in Involution::ALL {
                let q = apply_involution(i, p, tol.identity)?;
                disjoint &= below_two_mask(&q) == 1 << i.pivot_index();
            }
        }
        Ok((
            kappa_err <= 1e-12 && square_err <= 1e-12 && disjoint,
            format!(
                "{} words x 10 points: max kappa drift/scale = {kappa_err:.2e}; max |I^2 p - p| = {square_err:.2e}; domain and images disjoint on 1000 samples: {disjoint}",
                words.len()
            ),
        ))
    })
}

pub fn ac4(cfg: &VerifyConfig) -> CheckOutcome {
    check("AC4", "product, collar and cone-collar inequalities", || {
        let tol = cfg.tol;
        let mut r = cfg.rng(4);
        let mut pts: Vec<GeometricPoint> = (0..10_000).map(|_| sample::geometric(&mut r)).collect();
        pts.extend((0..10_000).map(|_| sample::cone_point(&mut r)));
        let reps = collect(cfg.exec.map(&pts, |p| inequality_report(p, tol.classify)))?;
        let failures = reps.iter().filter(|x| !x.all_pass).count();
        let cone = pts.iter().filter(|p| p.kappa.abs() < 2.0).count();
        let min_collar = reps
            .iter()
            .map(|x| x.collar_slack())
            .fold(f64::INFINITY, f64::min);

        let mut eq_err: f64 = 0.0;
        for _ in 0..200 {
            let a: f64 = rand::Rng::gen_range(&mut r, 2.2..3.9);
            let c: f64 = rand::Rng::gen_range(&mut r, 2.2..3.9);
            let p = GeometricPoint::from_coords(a, 2.0, c)?;
            let x = inequality_report(&p, tol.classify)?;
            eq_err = eq_err
                .max((x.collar_lhs - x.collar_rhs).abs() / x.collar_rhs)
                .max((x.conecollar_lhs - x.conecollar_rhs).abs() / x.conecollar_rhs);
        }
        Ok((
            failures == 0 && eq_err <= 1e-12,
            format!(
                "{failures} failures over {} points ({cone} with |kappa| < 2), min collar slack {min_collar:.3e}; b = 2 equality rel err {eq_err:.2e}",
                pts.len()
            ),
        ))
    })
}

pub fn ac5(cfg: &VerifyConfig) -> CheckOutcome {
    check("AC5", "volume anchor at kappa = 2", || {
        let t0 = Instant::now();
        let d = domain_volume(2.0, &cfg.quad, cfg.exec)?;
        let m = moduli_volume(2.0, &cfg.quad, cfg.exec)?;
        let secs = t0.elapsed().as_secs_f64();
        Ok((
            d.abs_diff < 1e-4 && m.abs_diff < 4e-4 && secs < 10.0,
            format!(
                "domain {:.12} vs pi^2/2 (diff {:.1e}); moduli {:.12} vs 2pi^2 (diff {:.1e}); {secs:.3} s",
                d.value, d.abs_diff, m.value, m.abs_diff
            ),
        ))
    })
}

pub fn ac6(cfg: &VerifyConfig) -> CheckOutcome {
    check("AC6", "volume family", || {
        let kappas = [-1.5, -1.0, 0.0, 1.0, 2.5, 3.0];
        let rows = collect(
            kappas
                .iter()
                .map(|&k| domain_volume(k, &cfg.quad, cfg.exec))
                .collect(),
        )?;
        let worst = max_of(rows.iter().map(|v| v.abs_diff));
        let parts: Vec<String> = rows
            .iter()
            .map(|v| format!("k={}: {:.1e}", v.kappa, v.abs_diff))
            .collect();
        Ok((
            worst < 1e-3,
            format!("abs diff vs closed form: {}", parts.join(", ")),
        ))
    })
}

pub fn ac7(cfg: &VerifyConfig) -> CheckOutcome {
    check("AC7", "symplectic consistency and Darboux", || {
        let tol = cfg.tol;
        let mut r = cfg.rng(7);
        let mut pts = vec![ParamTriple::new(3.0, 3.0, 3.0)];
        pts.extend((0..99).map(|_| *sample::geometric(&mut r).triple()));
        let rows = collect(cfg.exec.map(&pts, |p| {
            let s = symplectic_consistency(p, 1e-5, tol.identity)?;
            let rf = symplectic_refinement(p, 1e-3, tol.identity)?;
            Ok((s.discrepancy, rf))
        }))?;
        let disc = max_of(rows.iter().map(|x| x.0));
        let order_ok = rows.iter().all(|x| x.1.is_second_order(0.25));
        let orders: Vec<f64> = rows.iter().flat_map(|x| x.1.observed_orders.clone()).collect();
        let (omin, omax) = orders
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &o| {
                (lo.min(o), hi.max(o))
            });
        let symplectic_ok = disc < 1e-6 && order_ok;

        let mut ab = Vec::new();
        while ab.len() < 100 {
            let p = sample::geometric(&mut r);
            if p.a * p.b > 4.2 {
                ab.push((p.a, p.b));
            }
        }
        let dx = collect(cfg.exec.map(&ab, |&(a, b)| darboux_check(a, b, 1e-5)))?;
        let worst = max_of(dx.iter().map(|d| d.rel_err));
        let (rmin, rmax) = dx.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| {
            (lo.min(d.ratio), hi.max(d.ratio))
        });
        let darboux_ok = worst < 1e-5;
        Ok((
            symplectic_ok && darboux_ok,
            format!(
                "symplectic: max discrepancy {disc:.2e} at h=1e-5, observed orders in [{omin:.3}, {omax:.3}] ({}); darboux: max rel err {worst:.3e}, |J|/reference in [{rmin:.9}, {rmax:.9}] ({})",
                if symplectic_ok { "ok" } else { "failed" },
                if darboux_ok { "ok" } else { "failed" },
            ),
        ))
    })
}

pub fn ac8(cfg: &VerifyConfig) -> CheckOutcome {
    check("AC8", "Fibonacci growth on depth-15 trees", || {
        let mut r = cfg.rng(8);
        let mut roots = vec![GeometricPoint::from_coords(3.0, 3.0, 3.0)?];
        roots.extend((0..10).map(|_| sample::in_domain(&mut r)));
        let mut ok = true;
        let (mut nodes, mut transfer, mut defect, mut slack) = (0, 0f64, 0f64, f64::INFINITY);
        for root in &roots {
            let tree = expand_tree(root, StartEdge::default(), 15, cfg.exec)?;
            let g = bowditch_check(&tree, FeMode::Normalized, cfg.exec);
            ok &= g.bowditch_ok && g.lower_bound_ok && g.transfer_residual_max <= 1e-12;
            nodes += g.nodes_checked;
            transfer = transfer.max(g.transfer_residual_max);
            defect = defect.max(g.defect_max);
            slack = slack.min(g.lower_bound_min_slack);
        }
        Ok((
            ok,
            format!(
                "{nodes} created regions on 11 trees: transfer residual {transfer:.2e}, max defect {defect:.6} < log 4, min lower-bound slack {slack:.3e}"
            ),
        ))
    })
}

pub fn ac9(cfg: &VerifyConfig) -> CheckOutcome {
    check("AC9", "reduction to the fundamental domain", || {
        let tol = cfg.tol;
        let mut r = cfg.rng(9);
        // half generic points, half images of domain points under random words
        let mut pts: Vec<(GeometricPoint, Option<ParamTriple>)> =
            (0..500).map(|_| (sample::geometric(&mut r), None)).collect();
        while pts.len() < 1000 {
            let base = sample::in_domain(&mut r);
            let len = rand::Rng::gen_range(&mut r, 1..=12);
            let w = sample::reduced_word(&mut r, len);
            let q = apply_word(&w, &base, tol.identity)?;
            // beyond this, 1/(x − 1) for the small coordinates loses the
            // digits needed to recover the base point
            if q.coords().iter().any(|&x| x > 1e4) {
                continue;
            }
            pts.push((GeometricPoint::new(q)?, Some(*base.triple())));
        }
        let rows = collect(cfg.exec.map(&pts, |(p, base)| {
            let t = reduce_to_domain(p, 200, &tol)?;
            let decreasing = t.energies.windows(2).all(|w| w[1] < w[0]);
            let replay = coord_diff(&apply_word(&t.word, &t.start, tol.identity)?, &t.end);
            let recovered = base.map_or(0.0, |b| coord_diff(&b, &t.end));
            Ok((
                t.word.len(),
                decreasing,
                in_domain_closure(&t.end, tol.identity),
                replay,
                recovered,
            ))
        }))?;
        let max_steps = rows.iter().map(|x| x.0).max().unwrap_or(0);
        let ok_desc = rows.iter().all(|x| x.1 && x.2);
        let replay = max_of(rows.iter().map(|x| x.3));
        let recovered = max_of(rows.iter().map(|x| x.4));
        Ok((
            max_steps < 200 && ok_desc && replay <= 1e-9 && recovered <= 1e-9,
            format!(
                "{} points: max steps {max_steps}, energies decreasing and endpoint in closure: {ok_desc}, replay diff {replay:.2e}, orbit representative recovered to {recovered:.2e}",
                rows.len()
            ),
        ))
    })
}

pub fn ac10(cfg: &VerifyConfig) -> CheckOutcome {
    check("AC10", "hyperbolization certificate", || {
        let tol = cfg.tol;
        let mut r = cfg.rng(10);
        let s = 1.0 + 3f64.sqrt();
        let mut pts = vec![GeometricPoint::from_coords(s, s, s)?];
        pts.extend((0..19).map(|_| sample::cone_point(&mut r)));
        let rows = collect(cfg.exec.map(&pts, |p| {
            let cert = polygon_certificate(p, &tol)?;
            let mut residual: f64 = 0.0;
            let mut sign_ok = true;
            let mut in_region = 0;
            for q in [*p.triple(), cert.polygon.triple] {
                let f = cba_fixed_point(&q, &tol)?;
                residual = residual.max(f.residual);
                if f.sign_hypotheses {
                    in_region += 1;
                    let direct = f.interior_point().map(|z| z.re < 0.0);
                    sign_ok &= f.real_part_negative == Some(true) && direct == Some(true);
                }
            }
            Ok((residual, sign_ok, in_region, cert))
        }))?;
        let residual = max_of(rows.iter().map(|x| x.0));
        let sign_ok = rows.iter().all(|x| x.1);
        let in_region: usize = rows.iter().map(|x| x.2).sum();
        let pairing = max_of(rows.iter().map(|x| x.3.polygon.max_pairing_residual));
        let convex = rows
            .iter()
            .all(|x| x.3.polygon.convex && x.3.polygon.side_pairings_ok);
        let angle = max_of(rows.iter().map(|x| x.3.angle_defect));
        Ok((
            residual < 1e-10 && sign_ok && convex && pairing <= 1e-9 && angle <= 1e-6,
            format!(
                "20 triples: CBA residual {residual:.2e}; sign predicate held on {in_region} hypothesis cases: {sign_ok}; convex with pairings: {convex} (residual {pairing:.2e}); |angle sum - theta| {angle:.2e} (derived property)"
            ),
        ))
    })
}

pub fn ac11(_cfg: &VerifyConfig) -> CheckOutcome {
    check("AC11", "derivative relation", || {
        let d = derivative_relation_check(&[0.0, 0.5, 1.0, 2.0, 5.0])?;
        let pi_i = num_complex::Complex64::new(0.0, std::f64::consts::PI);
        let close = (d.constant_value - pi_i).norm() <= 1e-9 * std::f64::consts::PI;
        Ok((
            d.constant && close,
            format!(
                "ratios constant: {}; constant = {:.15}i (pi i); 2 pi i/4 = {:.15}i differs by a factor {:.1}",
                d.constant,
                d.constant_value.im,
                d.alternative_constant.im,
                d.constant_value.im / d.alternative_constant.im
            ),
        ))
    })
}

fn mobius_suite(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let tol = cfg.tol;
    vec![
        check("mobius.trace_cyclic", "tr(MN) = tr(NM)", || {
            let mut r = cfg.rng(101);
            let mut worst: f64 = 0.0;
            for _ in 0..10_000 {
                let (m, n) = (sample::unimodular(&mut r), sample::unimodular(&mut r));
                let scale = 4.0 * m.max_abs_entry() * n.max_abs_entry();
                worst = worst.max(((m * n).trace() - (n * m).trace()).abs() / scale);
            }
            Ok((worst <= 1e-12, format!("max scaled diff {worst:.2e}")))
        }),
        check("mobius.fixed_point_residual", "fixed points are fixed", || {
            let mut r = cfg.rng(102);
            let mut worst: f64 = 0.0;
            for _ in 0..10_000 {
                let m = sample::unimodular(&mut r);
                worst = worst.max(fixed_points(&m, tol.classify).max_residual(&m));
            }
            Ok((worst <= tol.residual, format!("max residual {worst:.2e}")))
        }),
        check("mobius.classify_inverse", "classify(M) = classify(M^-1)", || {
            let mut r = cfg.rng(103);
            let mut ok = true;
            for _ in 0..10_000 {
                let m = sample::unimodular(&mut r);
                match (classify(&m, tol.classify), classify(&m.inverse(), tol.classify)) {
                    (Ok(x), Ok(y)) => ok &= x.kind == y.kind && rel_diff(x.magnitude, y.magnitude) <= 1e-12,
                    (Err(_), Err(_)) => {}
                    _ => ok = false,
                }
            }
            Ok((ok, "10000 random matrices".into()))
        }),
        check(
            "mobius.elliptic_sign",
            "sign formula matches the fixed point",
            || {
                let mut r = cfg.rng(104);
                let mut bad = 0;
                for _ in 0..1000 {
                    let m = sample::elliptic(&mut r);
                    let s = elliptic_real_part_sign(&m)?;
                    let direct = match fixed_points(&m, tol.classify).points.first() {
                        Some(Point::Interior(z)) => Sign::of(z.re),
                        _ => return Err(Error::CertificateFailed("no interior fixed point".into())),
                    };
                    bad += usize::from(s != direct);
                }
                Ok((bad == 0, format!("{bad} mismatches over 1000 elliptic matrices")))
            },
        ),
    ]
}

fn charvar_suite(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let tol = cfg.tol;
    vec![
        check(
            "charvar.pair_traces",
            "tr BA = 2 - ab, tr AC = 2 - ac, tr BC = 2 - bc",
            || {
                let mut r = cfg.rng(201);
                let mut worst: f64 = 0.0;
                for _ in 0..10_000 {
                    let p = sample::triple(&mut r);
                    let m = matrices_from_triple(&p);
                    let [ab, bc, ca] = p.products();
                    for (tr, prod) in [
                        ((m.ba).trace(), ab),
                        ((m.a * m.c).trace(), ca),
                        ((m.b * m.c).trace(), bc),
                    ] {
                        worst = worst.max((tr - (2.0 - prod)).abs() / (2.0 + prod.abs()));
                    }
                }
                Ok((worst <= 1e-12, format!("max scaled diff {worst:.2e}")))
            },
        ),
        check("charvar.level_roundtrip", "c_from_level recovers kappa", || {
            let mut r = cfg.rng(202);
            let mut worst: f64 = 0.0;
            let mut n = 0;
            while n < 10_000 {
                let p = sample::triple(&mut r);
                let k = rand::Rng::gen_range(&mut r, -1.99..20.0);
                if (p.a * p.b - p.a - p.b).abs() < 1e-3 {
                    continue;
                }
                let q = ParamTriple::new(p.a, p.b, c_from_level(p.a, p.b, k, tol.identity)?);
                worst = worst.max((q.kappa - k).abs() / q.kappa_scale());
                n += 1;
            }
            Ok((worst <= 1e-10, format!("max scaled diff {worst:.2e}")))
        }),
        check(
            "charvar.product_minimum",
            "ab - 4 = (a-2)^2/(a-1) on b = a/(a-1)",
            || {
                let mut worst: f64 = 0.0;
                for i in 0..1000 {
                    let a = 1.01 + 0.05 * i as f64;
                    let b = a / (a - 1.0);
                    let lhs = a * b - 4.0;
                    let rhs = (a - 2.0).powi(2) / (a - 1.0);
                    worst = worst.max((lhs - rhs).abs() / (a * b).max(1.0));
                }
                Ok((worst <= 1e-12, format!("max scaled diff {worst:.2e}")))
            },
        ),
        check("charvar.cba_sign", "CBA fixed point and sign formula", || {
            let mut r = cfg.rng(204);
            let (mut residual, mut hyp, mut bad) = (0f64, 0, 0);
            for _ in 0..1000 {
                let p = sample::cone_point(&mut r);
                let f = cba_fixed_point(&p, &tol)?;
                residual = residual.max(f.residual);
                if f.sign_hypotheses {
                    hyp += 1;
                    let direct = f.interior_point().map(|z| z.re < 0.0);
                    bad += usize::from(f.real_part_negative != Some(true) || direct != Some(true));
                }
            }
            Ok((
                residual <= tol.residual && bad == 0,
                format!(
                    "max residual {residual:.2e}; {hyp} points in the hypothesis region, {bad} sign failures"
                ),
            ))
        }),
        check(
            "charvar.components",
            "level sets are graphs over three components",
            || {
                let ok = charvar::component_of(3.0, 3.0, tol.identity)? == charvar::Component::PosBranchGt1
                    && charvar::component_of(0.5, 0.5, tol.identity)? == charvar::Component::Neg
                    && charvar::component_of(-2.0, -2.0, tol.identity)? == charvar::Component::PosBranchLtm1;
                Ok((ok, "(3,3), (0.5,0.5), (-2,-2)".into()))
            },
        ),
    ]
}

fn mcg_suite(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let tol = cfg.tol;
    vec![
        check(
            "mcg.free_product",
            "reduced words of length <= 6 give distinct points",
            || {
                let p = ParamTriple::new(2.3, 3.7, 5.1);
                let words = InvolutionWord::all_reduced(6);
                let images = collect(words.iter().map(|w| apply_word(w, &p, tol.identity)).collect())?;
                let mut sep = f64::INFINITY;
                for i in 0..images.len() {
                    for j in 0..i {
                        sep = sep.min(coord_diff(&images[i], &images[j]));
                    }
                }
                Ok((
                    sep > 1e-6,
                    format!("{} words, min separation {sep:.3e}", words.len()),
                ))
            },
        ),
        check(
            "mcg.induced_alpha_gamma",
            "phi_alpha and phi_gamma induce I_a and I_c",
            || {
                let mut r = cfg.rng(302);
                let mut worst: f64 = 0.0;
                for _ in 0..1000 {
                    let p = sample::geometric(&mut r);
                    for (f, i) in [
                        (Automorphism::phi_alpha(), Involution::Ia),
                        (Automorphism::phi_gamma(), Involution::Ic),
                    ] {
                        let q = induced_map(&f, &p, &tol)?;
                        worst = worst.max(coord_diff(&q, &apply_involution(i, &p, tol.identity)?));
                    }
                }
                Ok((worst <= 1e-9, format!("max rel diff {worst:.2e}")))
            },
        ),
        check(
            "mcg.fixed_locus",
            "fixed hyperbolae are disjoint at kappa = 0",
            || {
                let rep = fixed_locus_report(0.0, 1000, &tol)?;
                match rep.intersections {
                    FixedLocusIntersection::Hyperbolae {
                        disjoint,
                        min_separation,
                        max_level_residual,
                        ..
                    } => Ok((
                        disjoint && max_level_residual <= 1e-12,
                        format!(
                            "min separation {min_separation:.3e}, level residual {max_level_residual:.2e}"
                        ),
                    )),
                    other => Ok((false, format!("unexpected {other:?}"))),
                }
            },
        ),
    ]
}

fn growth_suite(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let tol = cfg.tol;
    vec![
        check(
            "growth.pruning",
            "census agrees with exhaustive depth-12 expansion",
            || {
                let root = GeometricPoint::from_coords(3.0, 3.0, 3.0)?;
                let bound = 200f64.ln();
                let census = length_census(&root, bound, &tol)?;
                let deepest = census.rows.iter().map(|r| r.depth_first_seen).max().unwrap_or(0);
                let mut exhaustive: Vec<f64> = root
                    .products()
                    .iter()
                    .map(|x| x.ln())
                    .filter(|&f| f <= bound)
                    .collect();
                let mut frontier = vec![(*root.triple(), None::<Involution>)];
                for _ in 0..12 {
                    let mut next = Vec::new();
                    for (p, back) in frontier {
                        for i in Involution::ALL.into_iter().filter(|&i| Some(i) != back) {
                            let q = apply_involution(i, &p, tol.identity)?;
                            let f = q.products()[crate::growth::replaced_slot(i)].ln();
                            if f <= bound {
                                exhaustive.push(f);
                            }
                            next.push((q, Some(i)));
                        }
                    }
                    frontier = next;
                }
                exhaustive.sort_by(f64::total_cmp);
                let from_census: Vec<f64> = census
                    .rows
                    .iter()
                    .flat_map(|r| std::iter::repeat_n(r.f, r.multiplicity))
                    .collect();
                let same = exhaustive.len() == from_census.len()
                    && exhaustive
                        .iter()
                        .zip(&from_census)
                        .all(|(x, y)| rel_diff(*x, *y) <= 1e-9);
                Ok((
                    same && deepest < 12,
                    format!(
                        "{} regions with f <= log 200, deepest at depth {deepest}",
                        from_census.len()
                    ),
                ))
            },
        ),
        check(
            "growth.length_roundtrip",
            "census values map to simple lengths",
            || {
                let root = GeometricPoint::from_coords(2.5, 3.5, 4.5)?;
                let census = length_census(&root, 9.0, &tol)?;
                let worst = max_of(
                    census
                        .rows
                        .iter()
                        .map(|r| rel_diff(2.0 + 2.0 * (r.length / 2.0).cosh(), r.value)),
                );
                Ok((
                    worst <= 1e-10,
                    format!("{} distinct values, max rel diff {worst:.2e}", census.rows.len()),
                ))
            },
        ),
        check("growth.census_monotone", "N(L) is nondecreasing", || {
            let root = GeometricPoint::from_coords(3.0, 3.0, 3.0)?;
            let counts = collect(
                (0..40)
                    .map(|i| length_census(&root, 2.3 + 0.15 * i as f64, &tol).map(|c| c.count()))
                    .collect(),
            )?;
            let ok = counts.windows(2).all(|w| w[0] <= w[1]);
            Ok((
                ok,
                format!("N from {} to {}", counts[0], counts[counts.len() - 1]),
            ))
        }),
    ]
}

fn volume_suite(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    vec![
        check(
            "volume.tolerance_halving",
            "halving the tolerance stays within the error estimate",
            || {
                let loose = cfg.quad.with_tolerance(1e-7, 1e-7);
                let tight = loose.with_tolerance(5e-8, 5e-8);
                let mut ok = true;
                let mut worst: f64 = 0.0;
                for k in [-1.5, 0.0, 2.0, 3.0] {
                    let a = domain_volume(k, &loose, cfg.exec)?;
                    let b = domain_volume(k, &tight, cfg.exec)?;
                    let change = (a.value - b.value).abs();
                    ok &= change <= a.abs_error_estimate;
                    worst = worst.max(change / a.abs_error_estimate.max(f64::MIN_POSITIVE));
                }
                Ok((ok, format!("max change/estimate {worst:.3}")))
            },
        ),
        check("volume.monotone", "domain volume increases with kappa", || {
            let ks: Vec<f64> = (0..=24).map(|i| -1.95 + 0.2475 * i as f64).collect();
            let vals = collect(
                ks.iter()
                    .map(|&k| domain_volume(k, &cfg.quad, cfg.exec).map(|v| v.value))
                    .collect(),
            )?;
            let ok = vals.windows(2).all(|w| w[1] > w[0]);
            Ok((ok, format!("{} levels in (-2, 4]", ks.len())))
        }),
        check(
            "volume.polynomials",
            "V0 vanishes at 2 pi i, V1 does not reduce to the torus volume",
            || {
                use num_complex::Complex64;
                let z = Complex64::from(0.0);
                let tpi = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
                let v0 = volume_polynomial(VolumePolynomial::V0, &[z, z, z, tpi])?;
                let v1 = volume_polynomial(VolumePolynomial::V1, &[tpi, z])?;
                let torus = volume_polynomial(VolumePolynomial::V1OneHole, &[z])?;
                Ok((
                    v0 == z && v1 != torus && torus != z,
                    format!("V0(0,0,0,2pi i) = {v0}, V1(2pi i, 0) = {v1}, V1(0) = {torus}"),
                ))
            },
        ),
        check(
            "volume.execution_modes",
            "sequential and parallel quadrature agree",
            || {
                let s = domain_volume(0.5, &cfg.quad, Execution::Sequential)?;
                let p = domain_volume(0.5, &cfg.quad, Execution::Parallel)?;
                Ok((s.value == p.value, format!("{} vs {}", s.value, p.value)))
            },
        ),
    ]
}
