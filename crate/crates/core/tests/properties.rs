//! Property tests for the metric, configuration validation, the word
//! problem, and pullback functoriality.

use num_complex::Complex64;
use proptest::prelude::*;

use holomotion::braid::{is_trivial_braid, is_trivial_mapping_class, BraidWord};
use holomotion::corpus;
use holomotion::expr::parse_expr;
use holomotion::motion::{eval_motion, pullback};
use holomotion::sphere::{chordal_distance, make_configuration, SpherePoint};
use holomotion::Tolerances;

fn sphere_point() -> impl Strategy<Value = SpherePoint> {
    prop_oneof![
        9 => (-50.0..50.0f64, -50.0..50.0f64).prop_map(|(re, im)| SpherePoint::finite(re, im)),
        1 => Just(SpherePoint::Infinity),
    ]
}

proptest! {
    #[test]
    fn chordal_triangle_inequality(a in sphere_point(), b in sphere_point(), c in sphere_point()) {
        let ab = chordal_distance(a, b);
        let bc = chordal_distance(b, c);
        let ac = chordal_distance(a, c);
        prop_assert!(ac <= ab + bc + 1e-12);
    }

    #[test]
    fn chordal_symmetric_and_bounded(a in sphere_point(), b in sphere_point()) {
        let ab = chordal_distance(a, b);
        let ba = chordal_distance(b, a);
        prop_assert!((ab - ba).abs() < 1e-15);
        prop_assert!((0.0..=2.0 + 1e-12).contains(&ab));
    }

    #[test]
    fn configuration_accepts_iff_separated(
        pts in proptest::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 0..5)
    ) {
        let tol = Tolerances::default();
        let mut points = vec![SpherePoint::finite(0.0, 0.0), SpherePoint::finite(1.0, 0.0)];
        points.extend(pts.iter().map(|&(re, im)| SpherePoint::finite(re, im)));
        // brute-force the acceptance criterion
        let mut expect_ok = true;
        let complexes: Vec<Complex64> = points
            .iter()
            .map(|p| p.as_complex().unwrap())
            .collect();
        for i in 0..complexes.len() {
            for j in (i + 1)..complexes.len() {
                if chordal_distance(
                    SpherePoint::Finite(complexes[i]),
                    SpherePoint::Finite(complexes[j]),
                ) <= tol.eps_sep
                {
                    expect_ok = false;
                }
            }
        }
        let got = make_configuration(&points, &tol);
        prop_assert_eq!(got.is_ok(), expect_ok);
    }
}

fn braid_letters(max_strands: usize, max_len: usize) -> impl Strategy<Value = (usize, Vec<i32>)> {
    (2..=max_strands).prop_flat_map(move |m| {
        let letter =
            (1..m as i32, proptest::bool::ANY).prop_map(|(g, neg)| if neg { -g } else { g });
        proptest::collection::vec(letter, 0..=max_len).prop_map(move |ls| (m, ls))
    })
}

proptest! {
    #[test]
    fn word_times_inverse_is_trivial((m, letters) in braid_letters(6, 20)) {
        let w = BraidWord::new(m, letters).unwrap();
        let ww = w.concat(&w.inverse()).unwrap();
        prop_assert!(is_trivial_braid(&ww));
    }

    #[test]
    fn quotient_verdict_survives_conjugation_and_twists(
        (m, letters) in braid_letters(6, 14),
        conj in proptest::collection::vec((1..5i32, proptest::bool::ANY), 0..8)
    ) {
        let w = BraidWord::new(m, letters).unwrap();
        let conj_letters: Vec<i32> = conj
            .into_iter()
            .map(|(g, neg)| {
                let g = ((g - 1) % (m as i32 - 1)) + 1;
                if neg { -g } else { g }
            })
            .collect();
        let c = BraidWord::new(m, conj_letters).unwrap();
        let conjugated = c.concat(&w).unwrap().concat(&c.inverse()).unwrap();
        prop_assert_eq!(is_trivial_mapping_class(&w), is_trivial_mapping_class(&conjugated));
        let twisted = w.concat(&BraidWord::full_twist(m)).unwrap();
        prop_assert_eq!(is_trivial_mapping_class(&w), is_trivial_mapping_class(&twisted));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn pullback_is_functorial_on_samples(r in 0.05..0.9f64, angle in 0.0..std::f64::consts::TAU) {
        let tol = Tolerances::default();
        let fam = corpus::winding(&tol).unwrap();
        let pulled = corpus::winding_squared(&tol).unwrap();
        let f = parse_expr("lambda^2").unwrap();
        let z = Complex64::from_polar(r, angle);
        if pulled.domain().contains(z) {
            let lhs = eval_motion(&pulled, z, &tol).unwrap();
            let rhs = eval_motion(&fam, f.eval(z), &tol).unwrap();
            prop_assert!(lhs.distance(&rhs) < 1e-10);
        }
    }

    #[test]
    fn pullback_of_identity_map_is_pointwise_equal(r in 0.05..0.95f64, angle in 0.0..std::f64::consts::TAU) {
        let tol = Tolerances::default();
        let fam = corpus::wiggle(&tol).unwrap();
        let f = parse_expr("lambda").unwrap();
        let pb = pullback(&fam, &f, fam.domain().clone(), &tol).unwrap();
        let z = Complex64::from_polar(r, angle);
        if fam.domain().contains(z) {
            let a = eval_motion(&fam, z, &tol).unwrap();
            let b = eval_motion(&pb, z, &tol).unwrap();
            prop_assert!(a.distance(&b) < 1e-14);
        }
    }
}
