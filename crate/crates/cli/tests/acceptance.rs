//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its evidence. Run with `cargo test -p holomotion-cli --test acceptance --
//! --nocapture` to see the lines.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use holomotion::braid::{
    self, braid_from_tracks, is_trivial_braid, is_trivial_mapping_class, linking_number, BraidWord,
};
use holomotion::continuation::continue_strands;
use holomotion::corpus;
use holomotion::cover::{forgetful, lift_path, universal_motion_eval, PunctureRef};
use holomotion::extend::{
    build_continuous_motion, extend_motion_inductive, solve_new_strand,
    verify_forgetful_compatibility, GridSpec,
};
use holomotion::fixedpoint::{
    fixed_point_iterate, verify_unique_fixed_point, FixedPointProblem, GridFn, ScaledIdentity,
    ZeroOperator,
};
use holomotion::motion::{eval_via_continuation, validate_motion, MotionFamily, StrandSpec};
use holomotion::sphere::{chordal_distance, SpherePoint};
use holomotion::{Error, Tolerances};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn announce(criterion: usize, detail: &str, start: Instant) {
    println!(
        "ACCEPTANCE {criterion}: PASS - {detail} ({:.1}s)",
        start.elapsed().as_secs_f64()
    );
}

fn acceptance_grid_spec() -> GridSpec {
    GridSpec {
        max_resolution: 128,
        param_samples: 6,
        flow_steps: 256,
    }
}

/// Criterion 1: over the whole corpus, the continuous-motion construction
/// succeeds exactly when the monodromy is trivial.
#[test]
fn criterion_1_equivalence_over_corpus() {
    let start = Instant::now();
    let tol = Tolerances::default();
    let corpus = corpus::theorem_a_corpus(&tol).unwrap();
    assert!(corpus.len() >= 12, "corpus has only {}", corpus.len());
    let mut disagreements = Vec::new();
    for (name, family, expected_trivial) in &corpus {
        let trivial = braid::is_trivial_monodromy(family, &tol).unwrap();
        assert_eq!(
            trivial, *expected_trivial,
            "{name}: expected trivial={expected_trivial}"
        );
        let built = build_continuous_motion(family, &acceptance_grid_spec(), &tol);
        let succeeded = built.is_ok();
        if succeeded != trivial {
            disagreements.push(format!(
                "{name}: trivial={trivial} but construction {}",
                if succeeded { "succeeded" } else { "failed" }
            ));
        }
        if !trivial {
            assert!(
                matches!(built, Err(Error::NontrivialMonodromy { .. })),
                "{name}: wrong obstruction"
            );
        }
    }
    assert!(disagreements.is_empty(), "{disagreements:?}");
    announce(
        1,
        &format!(
            "construction succeeded iff monodromy trivial on all {} families",
            corpus.len()
        ),
        start,
    );
}

/// Criterion 2: exact monodromy oracles for the named families.
#[test]
fn criterion_2_monodromy_oracles() {
    let start = Instant::now();
    let tol = Tolerances::default();

    let winding = corpus::winding(&tol).unwrap();
    let looppath = winding.domain().generator(0).unwrap().clone();
    let tracks = continue_strands(&winding, &looppath, &tol).unwrap();
    let word = braid_from_tracks(&tracks, &tol).unwrap();
    assert_eq!(word.letters(), &[1, 1], "winding word: {word}");
    assert_eq!(word.exponent_sum(), 2);
    assert_eq!(linking_number(&tracks, 0, 2, &tol).unwrap(), 1);

    let wiggle = corpus::wiggle(&tol).unwrap();
    let classes = braid::monodromy(&wiggle, &tol).unwrap();
    assert_eq!(classes.len(), 1);
    assert!(classes[0].word().is_empty());
    assert!(classes[0].is_trivial());

    for family in [
        corpus::identity_disk(&tol).unwrap(),
        corpus::identity_two(&tol).unwrap(),
    ] {
        let classes = braid::monodromy(&family, &tol).unwrap();
        assert!(classes.is_empty());
    }
    announce(
        2,
        "winding word s1 s1 (exponent 2, linking 1), wiggle empty, disk generator lists empty",
        start,
    );
}

fn random_word(rng: &mut ChaCha8Rng, m: usize, max_len: usize) -> BraidWord {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<i32> = (0..len)
        .map(|_| {
            let g = rng.gen_range(1..m as i32);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect();
    BraidWord::new(m, letters).unwrap()
}

/// Criterion 3: the word-problem suite at the stated scale.
#[test]
fn criterion_3_word_problem_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1234);

    // 10^3 random words of length <= 20 on m <= 6 strands
    for _ in 0..1000 {
        let m = rng.gen_range(2..=6usize);
        let w = random_word(&mut rng, m, 20);
        let ww = w.concat(&w.inverse()).unwrap();
        assert!(is_trivial_braid(&ww), "w w^-1 not trivial for {w}");
    }

    // braid relations and far commutation on every index combination
    for m in 3..=6usize {
        for i in 1..(m - 1) as i32 {
            let rel = BraidWord::new(m, vec![i, i + 1, i, -(i + 1), -i, -(i + 1)]).unwrap();
            assert!(is_trivial_braid(&rel));
        }
        for i in 1..=(m - 1) as i32 {
            for j in 1..=(m - 1) as i32 {
                if (i - j).abs() >= 2 {
                    let comm = BraidWord::new(m, vec![i, j, -i, -j]).unwrap();
                    assert!(is_trivial_braid(&comm));
                }
            }
        }
    }

    // the full twist: trivial on the sphere, nontrivial in the disk
    for m in 2..=6usize {
        let twist = BraidWord::full_twist(m);
        assert!(is_trivial_mapping_class(&twist), "m={m}");
        assert!(!is_trivial_braid(&twist), "m={m}");
    }

    // conjugation- and twist-invariance of the quotient verdict
    for _ in 0..1000 {
        let m = rng.gen_range(2..=6usize);
        let w = random_word(&mut rng, m, 20);
        let conj = random_word(&mut rng, m, 10);
        let conjugated = conj.concat(&w).unwrap().concat(&conj.inverse()).unwrap();
        assert_eq!(
            is_trivial_mapping_class(&w),
            is_trivial_mapping_class(&conjugated)
        );
        let twist = BraidWord::full_twist(m);
        let twisted = if rng.gen_bool(0.5) {
            w.concat(&twist).unwrap()
        } else {
            w.concat(&twist.inverse()).unwrap()
        };
        assert_eq!(
            is_trivial_mapping_class(&w),
            is_trivial_mapping_class(&twisted)
        );
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}, budget 1 min");
    announce(
        3,
        "1000 cancellations, all braid relations, twist quotient, 1000 invariance checks",
        start,
    );
}

/// A far constant puncture that stays clear of every strand track of the
/// family, to build extended families for the forgetful checks.
fn far_extension(family: &MotionFamily, tol: &Tolerances) -> Option<MotionFamily> {
    let candidates = [
        c(-2.5, -2.0),
        c(3.5, 1.5),
        c(-3.0, 2.5),
        c(0.0, -3.5),
        c(4.5, 0.0),
    ];
    let mut tracks_points: Vec<Complex64> = family.base().punctures().to_vec();
    for looppath in family.domain().generators() {
        let tracks = continue_strands(family, looppath, tol).ok()?;
        for i in 0..tracks.strand_count() {
            tracks_points.extend_from_slice(tracks.positions(i));
        }
    }
    let zeta = candidates
        .into_iter()
        .find(|&z| tracks_points.iter().all(|&p| (p - z).norm() > 0.5))?;
    let base = family.base().with_appended(zeta, tol).ok()?;
    let mut strands = family.strands().to_vec();
    strands.push(StrandSpec::ClosedForm(holomotion::expr::Expr::constant(
        zeta,
    )));
    MotionFamily::new(family.domain().clone(), base, strands, tol).ok()
}

/// Criterion 4: covering-model identities over all corpus paths.
#[test]
fn criterion_4_covering_identities() {
    let start = Instant::now();
    let tol = Tolerances::default();
    let corpus = corpus::theorem_a_corpus(&tol).unwrap();
    let mut paths_checked = 0usize;
    for (name, family, _) in &corpus {
        let x0 = family.domain().basepoint();
        // corpus paths: every generator loop plus two open routes
        let mut paths = family.domain().generators().to_vec();
        let margin = tol.eps_bd.max(4.0 * tol.circle_radius);
        for lambda in holomotion::motion::domain_samples(family.domain(), 2, margin) {
            paths.push(family.domain().route(x0, lambda, &tol).unwrap());
        }
        for path in &paths {
            // covering identity: endpoint coordinates of the lift match the
            // independent endpoint evaluation
            let pt = lift_path(family, path, &tol).unwrap();
            let direct = eval_via_continuation(family, path.end(), &tol).unwrap();
            for i in 0..family.strand_count() {
                let lifted = universal_motion_eval(&pt, PunctureRef::Finite(i)).unwrap();
                let expected = SpherePoint::Finite(direct.get(i).unwrap());
                let d = chordal_distance(lifted, expected);
                assert!(d <= 1e-10, "{name}: covering identity off by {d:.3e}");
            }
            assert!(universal_motion_eval(&pt, PunctureRef::Infinity)
                .unwrap()
                .is_infinity());

            // lift uniqueness: same path, same start, doubled density
            let mut tol2 = tol.clone();
            tol2.initial_path_samples *= 2;
            let pt2 = lift_path(family, path, &tol2).unwrap();
            assert!(pt.same_point(&pt2, &tol), "{name}: lift uniqueness");
            assert_eq!(
                pt.word().free_reduce().letters(),
                pt2.word().free_reduce().letters(),
                "{name}: lifted words differ"
            );
            paths_checked += 1;
        }

        // forgetful compatibility on the extended family
        if let Some(extended) = far_extension(family, &tol) {
            for path in &paths {
                let lifted_ext = lift_path(&extended, path, &tol).unwrap();
                let lifted_orig = lift_path(family, path, &tol).unwrap();
                let forgotten = forgetful(&lifted_ext).unwrap();
                assert!(
                    forgotten.same_point(&lifted_orig, &tol),
                    "{name}: forgetful/lift mismatch"
                );
            }
        } else {
            panic!("{name}: no far extension point found");
        }
    }
    announce(
        4,
        &format!(
            "covering identity, lift uniqueness, forgetful compatibility on {paths_checked} paths"
        ),
        start,
    );
}

/// Criterion 5: the one-point extension and the two-stage inductive driver.
#[test]
fn criterion_5_one_point_and_inductive_extension() {
    let start = Instant::now();
    let tol = Tolerances::default();
    let wiggle = corpus::wiggle(&tol).unwrap();

    let solved = solve_new_strand(&wiggle, SpherePoint::finite(0.25, 0.0), 2, 7, &tol).unwrap();
    assert!(solved.margin >= 0.05, "margin {}", solved.margin);
    let report = validate_motion(&solved.extended, 150, &tol).unwrap();
    let worst = report
        .holomorphy_residuals
        .iter()
        .copied()
        .fold(0.0f64, f64::max);
    assert!(worst < 1e-8, "holomorphy residual {worst:.3e}");
    assert!(braid::is_trivial_monodromy(&solved.extended, &tol).unwrap());
    verify_forgetful_compatibility(&wiggle, &solved.extended, &tol).unwrap();

    let points = [
        SpherePoint::finite(0.25, 0.0),
        SpherePoint::finite(-0.5, 0.0),
    ];
    let (extended, stages) = extend_motion_inductive(&wiggle, &points, &[2, 4], 7, &tol).unwrap();
    assert_eq!(stages.len(), 2);
    assert_eq!(extended.strand_count(), 5);
    assert!(stages
        .iter()
        .all(|s| s.forgetful_checked && s.margin >= tol.margin_min));

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}, budget 2 min");
    announce(
        5,
        &format!(
            "new strand margin {:.3}, residual {:.1e}, extended monodromy trivial, 2 stages",
            solved.margin, worst
        ),
        start,
    );
}

/// Criterion 6: continuous-motion quality bounds on the trivial corpus.
#[test]
fn criterion_6_continuous_motion_quality() {
    let start = Instant::now();
    let tol = Tolerances::default();
    let corpus = corpus::theorem_a_corpus(&tol).unwrap();
    let mut families = 0usize;
    let mut samples_checked = 0usize;
    for (name, family, expected_trivial) in &corpus {
        if !expected_trivial {
            continue;
        }
        let grid = build_continuous_motion(family, &acceptance_grid_spec(), &tol)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        for s in &grid.samples {
            assert!(
                s.strand_error < 1e-6,
                "{name}: strand error {}",
                s.strand_error
            );
            assert!(s.jacobian_min > 0.0, "{name}: jacobian {}", s.jacobian_min);
            assert!(s.beltrami_sup < 1.0, "{name}: beltrami {}", s.beltrami_sup);
            // the Beltrami diagnostic varies continuously along the tree
            if let Some(p) = s.parent {
                let jump = (s.beltrami_sup - grid.samples[p].beltrami_sup).abs();
                assert!(jump < 0.1, "{name}: beltrami jump {jump}");
            }
            samples_checked += 1;
        }
        families += 1;
    }
    assert!(families >= 6);
    announce(
        6,
        &format!("{samples_checked} grid samples over {families} trivial families within bounds"),
        start,
    );
}

/// Criterion 7: the fixed-point interface against closed-form fixed points.
#[test]
fn criterion_7_fixed_point_interface() {
    let start = Instant::now();
    let tol = 1e-10;
    let target = c(0.3, -0.2);

    let zero = ZeroOperator;
    let problem = FixedPointProblem {
        target,
        operator: &zero,
        tol,
        max_iterations: 50,
    };
    let out = fixed_point_iterate(&problem, &GridFn::constant(c(5.0, 5.0), 32)).unwrap();
    for v in &out.solution.values {
        assert!((v - target).norm() < tol);
    }

    let half = ScaledIdentity(0.5);
    let problem = FixedPointProblem {
        target,
        operator: &half,
        tol,
        max_iterations: 200,
    };
    let out = fixed_point_iterate(&problem, &GridFn::constant(c(0.0, 0.0), 32)).unwrap();
    for v in &out.solution.values {
        assert!(
            (v - target * 2.0).norm() < 100.0 * tol,
            "off by {}",
            (v - target * 2.0).norm()
        );
    }
    assert!(out.residual < tol);

    let initials = [
        GridFn::constant(c(0.0, 0.0), 32),
        GridFn::constant(c(10.0, -3.0), 32),
        GridFn::constant(c(-7.0, 7.0), 32),
    ];
    let probe = verify_unique_fixed_point(&problem, &initials).unwrap();
    assert!(
        probe.agrees,
        "uniqueness probe spread {}",
        probe.max_pairwise
    );
    assert!(probe.max_pairwise < 10.0 * tol);

    announce(
        7,
        "zero and half-identity operators reach closed-form fixed points; 3-initial probe agrees",
        start,
    );
}

/// Criterion 8: repeated CLI runs with a fixed seed produce byte-identical
/// reports.
#[test]
fn criterion_8_deterministic_reports() {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_holomotion");
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/winding.motion");
    let mut dirs: Vec<PathBuf> = Vec::new();
    for run in 0..2 {
        let out = std::env::temp_dir().join(format!(
            "holomotion-acceptance-det-{run}-{}",
            std::process::id()
        ));
        let _ = std::fs::remove_dir_all(&out);
        std::fs::create_dir_all(&out).unwrap();
        let status = Command::new(bin)
            .args(["report", "--seed", "17", "--input"])
            .arg(&fixture)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        dirs.push(out);
    }
    let mut compared = 0;
    for entry in std::fs::read_dir(&dirs[0]).unwrap() {
        let name = entry.unwrap().file_name();
        let a = std::fs::read(dirs[0].join(&name)).unwrap();
        let b = std::fs::read(dirs[1].join(&name)).unwrap();
        assert_eq!(a, b, "{name:?} differs between identical runs");
        compared += 1;
    }
    assert!(compared >= 2);
    announce(
        8,
        &format!("{compared} report files byte-identical across runs"),
        start,
    );
}
