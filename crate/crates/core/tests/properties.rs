use approx::assert_relative_eq;
use conesphere::charvar::{c_from_level, matrices_from_triple, GeometricPoint, ParamTriple};
use conesphere::mcg::{
    apply_involution, apply_word, in_domain_closure, reduce_to_domain, Involution, InvolutionWord,
};
use conesphere::mobius::{classify, elliptic_real_part_sign, fixed_points, Sign, UnimodularMatrix};
use conesphere::tolerance::rel_diff;
use conesphere::Tolerances;
use proptest::prelude::*;

fn unimodular() -> impl Strategy<Value = UnimodularMatrix> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
        .prop_filter("m11 away from 0", |(m11, _, _)| m11.abs() > 0.2)
        .prop_map(|(m11, m12, m21)| UnimodularMatrix::new_unchecked(m11, m12, m21, (1.0 + m12 * m21) / m11))
}

fn elliptic() -> impl Strategy<Value = UnimodularMatrix> {
    (
        -1.98..1.98f64,
        -3.0..3.0f64,
        prop_oneof![-3.0..-0.1f64, 0.1..3.0f64],
    )
        .prop_map(|(tr, m11, m21)| {
            let m22 = tr - m11;
            UnimodularMatrix::new_unchecked(m11, (m11 * m22 - 1.0) / m21, m21, m22)
        })
}

/// Geometric points with `κ` spread over cone points, the cusp and
/// geodesic boundary.
fn geometric() -> impl Strategy<Value = GeometricPoint> {
    (1.05..12.0f64, 1.05..12.0f64, -1.95..12.0f64).prop_filter_map("geometric", |(a, b, k)| {
        let c = c_from_level(a, b, k, 1e-9).ok()?;
        GeometricPoint::from_coords(a, b, c).ok()
    })
}

fn involution() -> impl Strategy<Value = Involution> {
    prop::sample::select(Involution::ALL.to_vec())
}

fn reduced_word() -> impl Strategy<Value = InvolutionWord> {
    prop::collection::vec(involution(), 0..8).prop_map(|mut v| {
        v.dedup();
        InvolutionWord::new(v).unwrap()
    })
}

fn coord_diff(p: &ParamTriple, q: &ParamTriple) -> f64 {
    p.coords()
        .iter()
        .zip(q.coords())
        .map(|(x, y)| rel_diff(*x, y))
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn trace_is_cyclic(m in unimodular(), n in unimodular()) {
        let scale = 1f64.max(m.max_abs_entry() * n.max_abs_entry());
        prop_assert!(((m * n).trace() - (n * m).trace()).abs() <= 1e-13 * scale);
    }

    #[test]
    fn inverse_has_same_class(m in unimodular()) {
        let tol = 1e-9;
        prop_assert_eq!(
            classify(&m, tol).map(|c| c.kind).ok(),
            classify(&m.inverse(), tol).map(|c| c.kind).ok()
        );
    }

    #[test]
    fn fixed_points_are_fixed(m in unimodular()) {
        let fp = fixed_points(&m, 1e-12);
        prop_assert!(fp.max_residual(&m) <= 1e-8);
    }

    #[test]
    fn elliptic_sign_matches_fixed_point(m in elliptic()) {
        let z = fixed_points(&m, 1e-12).points[0].to_complex().unwrap();
        let s = elliptic_real_part_sign(&m).unwrap();
        prop_assume!(z.re.abs() > 1e-9);
        prop_assert_eq!(s, Sign::of(z.re));
    }

    #[test]
    fn generators_are_parabolic(p in geometric()) {
        let m = matrices_from_triple(&p);
        for g in [m.a, m.b, m.c] {
            prop_assert!((g.trace() - 2.0).abs() <= 1e-12 * (1.0 + p.kappa_scale()));
            prop_assert!((g.det() - 1.0).abs() <= 1e-12 * (1.0 + p.kappa_scale()));
        }
        prop_assert!((m.cba.trace() - p.kappa).abs() <= 1e-12 * p.kappa_scale());
    }

    #[test]
    fn involutions_square_to_identity(p in geometric(), i in involution()) {
        let q = apply_involution(i, &p, 1e-12).unwrap();
        let back = apply_involution(i, &q, 1e-12).unwrap();
        prop_assert!(coord_diff(&back, &p) <= 1e-12);
    }

    #[test]
    fn involutions_preserve_kappa(p in geometric(), i in involution()) {
        let q = apply_involution(i, &p, 1e-12).unwrap();
        prop_assert!((q.kappa - p.kappa).abs() <= 1e-12 * p.kappa_scale().max(q.kappa_scale()));
        prop_assert!(GeometricPoint::new(q).is_ok());
    }

    #[test]
    fn words_preserve_kappa(p in geometric(), w in reduced_word()) {
        let q = apply_word(&w, &p, 1e-12).unwrap();
        prop_assume!(q.coords().iter().all(|&x| x < 1e6));
        prop_assert!((q.kappa - p.kappa).abs() <= 1e-9 * q.kappa_scale());
    }

    #[test]
    fn reduction_descends_into_the_domain(p in geometric()) {
        let t = reduce_to_domain(&p, 500, &Tolerances::default()).unwrap();
        prop_assert!(in_domain_closure(&t.end, 1e-12));
        prop_assert!(t.energies.windows(2).all(|w| w[1] < w[0]));
        prop_assert_eq!(t.energies.len(), t.word.len() + 1);
        let replay = apply_word(&t.word, &t.start, 1e-12).unwrap();
        prop_assert!(coord_diff(&replay, &t.end) <= 1e-9);
        prop_assert!((t.end.kappa - p.kappa).abs() <= 1e-9 * p.kappa_scale());
    }

    #[test]
    fn reduction_fixes_domain_points(a in 2.01..20.0f64, b in 2.01..20.0f64, c in 2.01..20.0f64) {
        let p = GeometricPoint::from_coords(a, b, c).unwrap();
        let t = reduce_to_domain(&p, 10, &Tolerances::default()).unwrap();
        prop_assert!(t.word.is_empty());
        prop_assert_eq!(t.end, *p.triple());
    }
}

#[test]
fn reduced_words_reject_repeats() {
    assert!(InvolutionWord::new(vec![Involution::Ia, Involution::Ia]).is_err());
    assert_relative_eq!(
        apply_involution(Involution::Ib, &ParamTriple::new(6.0, 1.5, 6.0), 1e-12)
            .unwrap()
            .a,
        3.0
    );
}
