//! The covering model: points of the Teichmüller-type space of a finite
//! configuration are homotopy classes of paths in the configuration space
//! from the base configuration, stored as a reduced braid word plus the end
//! configuration. Path lifting, deck transformations, the forgetful map, and
//! evaluation of the universal motion all live here.

use num_complex::Complex64;

use crate::braid::{self, BraidWord, MappingClass};
use crate::continuation;
use crate::motion::{self, MotionFamily};
use crate::path::Path;
use crate::sphere::{Configuration, SpherePoint};
use crate::{Error, Result, Tolerances};

/// A point of the covering space over the configuration space: the homotopy
/// class of a path from the base configuration, as (reduced word, endpoint).
#[derive(Clone, Debug)]
pub struct CoverPoint {
    base: Configuration,
    word: BraidWord,
    end: Configuration,
    /// Strand labels sorted by the projection order at the path start; fixes
    /// the dialect the word is written in.
    base_order: Vec<usize>,
    /// Projection rotation used for the word.
    rotation: f64,
}

impl CoverPoint {
    /// The basepoint of the cover over a configuration.
    pub fn basepoint(base: Configuration, rotation: f64) -> CoverPoint {
        let base_order = projection_order(base.punctures(), rotation);
        CoverPoint {
            word: BraidWord::empty(base.len()),
            end: base.clone(),
            base,
            base_order,
            rotation,
        }
    }

    pub fn base(&self) -> &Configuration {
        &self.base
    }

    pub fn word(&self) -> &BraidWord {
        &self.word
    }

    pub fn end(&self) -> &Configuration {
        &self.end
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    /// Equality in the cover: same fiber data, same endpoint. Words are
    /// compared through the sphere quotient, which on realizable words (the
    /// frozen strands never link) coincides with disk equality.
    pub fn same_point(&self, other: &CoverPoint, tol: &Tolerances) -> bool {
        if self.base.len() != other.base.len() {
            return false;
        }
        if self.base.distance(&other.base) > tol.eps_eq {
            return false;
        }
        if self.end.distance(&other.end) > 1e-10 {
            return false;
        }
        MappingClass::new(self.word.clone()).same_class(&MappingClass::new(other.word.clone()))
    }
}

fn projection_order(punctures: &[Complex64], rotation: f64) -> Vec<usize> {
    braid::projection_order(punctures, rotation)
}

/// Lift a path starting at the basepoint to the cover: continue the strands,
/// extract the braid word, and record the end configuration.
pub fn lift_path(family: &MotionFamily, path: &Path, tol: &Tolerances) -> Result<CoverPoint> {
    let x0 = family.domain().basepoint();
    if (path.start() - x0).norm() > 1e-9 {
        return Err(Error::OutsideDomain {
            lambda: path.start(),
        });
    }
    let tracks = continuation::continue_strands(family, path, tol)?;
    let extraction = braid::extract_braid(&tracks, tol)?;
    let end = tracks.end_configuration(tol)?;
    Ok(CoverPoint {
        base: family.base().clone(),
        word: extraction.word,
        end,
        base_order: extraction.initial_order,
        rotation: extraction.rotation,
    })
}

/// The deck transformation attached to a generator loop: the mapping class of
/// the lifted loop's word. Agrees with the monodromy entry by construction.
pub fn deck_transform(
    family: &MotionFamily,
    generator: usize,
    tol: &Tolerances,
) -> Result<MappingClass> {
    let looppath = family.domain().generator(generator)?.clone();
    let pt = lift_path(family, &looppath, tol)?;
    Ok(MappingClass::new(pt.word))
}

/// The forgetful map: drop the last puncture. The end configuration loses its
/// final entry; the word maps by the delete-a-strand homomorphism (letters
/// involving the deleted strand's position are removed, higher generator
/// indices shift down).
pub fn forgetful(pt: &CoverPoint) -> Result<CoverPoint> {
    let m = pt.base.len();
    if m <= 2 {
        return Err(Error::IndexOutOfRange { index: 2, len: m });
    }
    let label = m - 1;
    // 1-based position of the forgotten strand at the path start
    let mut pos = pt
        .base_order
        .iter()
        .position(|&l| l == label)
        .expect("label present")
        + 1;
    let mut letters = Vec::with_capacity(pt.word.len());
    for &l in pt.word.letters() {
        let i = l.unsigned_abs() as usize;
        if i == pos {
            pos = i + 1;
        } else if i + 1 == pos {
            pos = i;
        } else if i > pos {
            letters.push(l.signum() * (i as i32 - 1));
        } else {
            letters.push(l);
        }
    }
    let base = pt.base.drop_last()?;
    let end = pt.end.drop_last()?;
    let base_order: Vec<usize> = pt
        .base_order
        .iter()
        .copied()
        .filter(|&l| l != label)
        .collect();
    Ok(CoverPoint {
        word: BraidWord::new(m - 1, letters)?.free_reduce(),
        base,
        end,
        base_order,
        rotation: pt.rotation,
    })
}

/// Which puncture the universal motion is evaluated at.
#[derive(Clone, Copy, Debug)]
pub enum PunctureRef {
    Finite(usize),
    Infinity,
}

/// Evaluate the universal motion at a cover point: the coordinate of the end
/// configuration. The frozen punctures return 0 and 1 exactly; infinity
/// returns infinity.
pub fn universal_motion_eval(pt: &CoverPoint, puncture: PunctureRef) -> Result<SpherePoint> {
    match puncture {
        PunctureRef::Infinity => Ok(SpherePoint::Infinity),
        PunctureRef::Finite(i) => Ok(SpherePoint::Finite(pt.end.get(i)?)),
    }
}

/// Certificate of path independence at one probe parameter.
#[derive(Clone, Debug)]
pub struct ProbeCertificate {
    pub lambda: Complex64,
    /// Chordal distance between the two lifted end configurations.
    pub end_distance: f64,
    /// Whether the two lifted words agree as sphere classes.
    pub class_agree: bool,
}

/// A motion family lifted to a single-valued map into the cover.
#[derive(Clone, Debug)]
pub struct LiftedMap {
    family: MotionFamily,
    deck: Vec<MappingClass>,
    probes: Vec<ProbeCertificate>,
}

impl LiftedMap {
    pub fn family(&self) -> &MotionFamily {
        &self.family
    }

    /// Deck words of the generators (all trivial when the lift exists).
    pub fn deck(&self) -> &[MappingClass] {
        &self.deck
    }

    pub fn probes(&self) -> &[ProbeCertificate] {
        &self.probes
    }

    /// Lift the family at one parameter along an in-domain route.
    pub fn at(&self, lambda: Complex64, tol: &Tolerances) -> Result<CoverPoint> {
        let route = self
            .family
            .domain()
            .route(self.family.domain().basepoint(), lambda, tol)?;
        lift_path(&self.family, &route, tol)
    }
}

const PROBE_COUNT: usize = 16;

/// Lift the family to a single-valued map into the cover. Succeeds exactly
/// when the monodromy is trivial; path independence is then certified on a
/// probe set (two homotopy-distinct routes per probe when the domain has
/// generators, two different routes otherwise).
pub fn lift_map(family: &MotionFamily, tol: &Tolerances) -> Result<LiftedMap> {
    let deck = braid::monodromy(family, tol)?;
    for (g, class) in deck.iter().enumerate() {
        if !class.is_trivial() {
            return Err(Error::NontrivialMonodromy { generator: g });
        }
    }

    let x0 = family.domain().basepoint();
    let margin = tol.eps_bd.max(4.0 * tol.circle_radius);
    let probes = motion::domain_samples(family.domain(), PROBE_COUNT, margin);
    let generators = family.domain().generators();
    let mut certificates = Vec::with_capacity(probes.len());
    for (k, lambda) in probes.into_iter().enumerate() {
        let direct = family.domain().route(x0, lambda, tol)?;
        let second = if generators.is_empty() {
            // simply connected: any two routes are homotopic; perturb through a
            // midpoint off the straight chord
            let mid = (x0 + lambda) / 2.0;
            let offset = (lambda - x0) * Complex64::new(0.0, 0.2);
            let via = if family.domain().boundary_distance(mid + offset) > tol.eps_bd {
                mid + offset
            } else {
                mid - offset
            };
            Path::segment(x0, via).then(&Path::segment(via, lambda))?
        } else {
            let g = generators[k % generators.len()].clone();
            g.then(&direct)?
        };
        let p1 = lift_path(family, &direct, tol)?;
        let p2 = lift_path(family, &second, tol)?;
        let end_distance = p1.end.distance(&p2.end);
        let class_agree =
            MappingClass::new(p1.word.clone()).same_class(&MappingClass::new(p2.word.clone()));
        if end_distance > 1e-10 || !class_agree {
            return Err(Error::ValidationFailure {
                axiom: crate::error::MotionAxiom::SingleValuedness,
                detail: format!(
                    "lift is path dependent at probe {k} (end distance {end_distance:.3e})"
                ),
                witness: Some(lambda),
            });
        }
        certificates.push(ProbeCertificate {
            lambda,
            end_distance,
            class_agree,
        });
    }
    Ok(LiftedMap {
        family: family.clone(),
        deck,
        probes: certificates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::expr::parse_expr;
    use crate::motion::{eval_motion, MotionFamily, StrandSpec};
    use crate::sphere::{chordal_distance, make_configuration};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// The winding family with one extra constant strand far to the left.
    fn winding_extended(tol: &Tolerances) -> MotionFamily {
        let fam = corpus::winding(tol).unwrap();
        let base = make_configuration(
            &[
                SpherePoint::finite(0.0, 0.0),
                SpherePoint::finite(1.0, 0.0),
                SpherePoint::finite(0.5, 0.0),
                SpherePoint::finite(-0.75, 0.0),
            ],
            tol,
        )
        .unwrap();
        let strands = vec![
            fam.strands()[0].clone(),
            StrandSpec::ClosedForm(parse_expr("-3/4").unwrap()),
        ];
        MotionFamily::new(fam.domain().clone(), base, strands, tol).unwrap()
    }

    #[test]
    fn constant_path_lifts_to_the_basepoint() {
        let tol = Tolerances::default();
        let fam = corpus::winding(&tol).unwrap();
        let x0 = fam.domain().basepoint();
        let path = Path::segment(x0, x0);
        let pt = lift_path(&fam, &path, &tol).unwrap();
        assert!(pt.word().is_empty());
        assert!(pt.end().distance(fam.base()) < 1e-12);
    }

    #[test]
    fn generator_loop_lifts_to_nontrivial_deck_element() {
        let tol = Tolerances::default();
        let fam = corpus::winding(&tol).unwrap();
        let looppath = fam.domain().generator(0).unwrap().clone();
        let pt = lift_path(&fam, &looppath, &tol).unwrap();
        assert_eq!(pt.word().letters(), &[1, 1]);
        // same fiber point over the base configuration, nontrivial word
        assert!(pt.end().distance(fam.base()) < 1e-9);
        assert!(!MappingClass::new(pt.word().clone()).is_trivial());
    }

    #[test]
    fn path_then_reverse_lifts_to_basepoint() {
        let tol = Tolerances::default();
        let fam = corpus::winding(&tol).unwrap();
        let x0 = fam.domain().basepoint();
        let out = fam.domain().route(x0, c(-0.3, 0.4), &tol).unwrap();
        let both = out.then(&out.reversed()).unwrap();
        let pt = lift_path(&fam, &both, &tol).unwrap();
        assert!(braid::is_trivial_braid(pt.word()));
        assert!(pt.end().distance(fam.base()) < 1e-9);
    }

    #[test]
    fn covering_identity_endpoint_evaluation() {
        let tol = Tolerances::default();
        let fam = corpus::wiggle(&tol).unwrap();
        let x0 = fam.domain().basepoint();
        for target in [c(0.25, 0.3), c(-0.4, -0.2), c(0.7, 0.1)] {
            let route = fam.domain().route(x0, target, &tol).unwrap();
            let pt = lift_path(&fam, &route, &tol).unwrap();
            let direct = eval_motion(&fam, target, &tol).unwrap();
            for i in 0..fam.strand_count() {
                let lifted = universal_motion_eval(&pt, PunctureRef::Finite(i)).unwrap();
                let expected = SpherePoint::Finite(direct.get(i).unwrap());
                assert!(chordal_distance(lifted, expected) < 1e-10);
            }
        }
    }

    #[test]
    fn universal_motion_fixes_anchors() {
        let tol = Tolerances::default();
        let fam = corpus::wiggle(&tol).unwrap();
        let pt = CoverPoint::basepoint(fam.base().clone(), 0.0);
        let zero = universal_motion_eval(&pt, PunctureRef::Finite(0)).unwrap();
        let one = universal_motion_eval(&pt, PunctureRef::Finite(1)).unwrap();
        let inf = universal_motion_eval(&pt, PunctureRef::Infinity).unwrap();
        assert_eq!(zero.as_complex().unwrap(), c(0.0, 0.0));
        assert_eq!(one.as_complex().unwrap(), c(1.0, 0.0));
        assert!(inf.is_infinity());
    }

    #[test]
    fn half_loop_lift_evaluates_moving_puncture() {
        let tol = Tolerances::default();
        let fam = corpus::winding(&tol).unwrap();
        // upper half of the generator circle: ends at lambda = -1/2, where the
        // moving puncture sits at -1/2
        let half = Path::new(vec![crate::path::PathPiece::Arc {
            center: c(0.0, 0.0),
            radius: 0.5,
            start_angle: 0.0,
            sweep: std::f64::consts::PI,
        }])
        .unwrap();
        let pt = lift_path(&fam, &half, &tol).unwrap();
        let moved = universal_motion_eval(&pt, PunctureRef::Finite(2)).unwrap();
        assert!(
            chordal_distance(moved, SpherePoint::finite(-0.5, 0.0)) < 1e-10,
            "got {moved}"
        );
    }

    #[test]
    fn lift_uniqueness_same_path_same_start() {
        let tol = Tolerances::default();
        let fam = corpus::root_pair_winding(&tol).unwrap();
        let looppath = fam.domain().generator(0).unwrap().clone();
        let p1 = lift_path(&fam, &looppath, &tol).unwrap();
        let mut tol2 = tol.clone();
        tol2.initial_path_samples *= 2;
        let p2 = lift_path(&fam, &looppath, &tol2).unwrap();
        assert!(p1.same_point(&p2, &tol));
        assert_eq!(
            p1.word().free_reduce().letters(),
            p2.word().free_reduce().letters()
        );
    }

    #[test]
    fn deck_transform_matches_monodromy() {
        let tol = Tolerances::default();
        for fam in [
            corpus::winding(&tol).unwrap(),
            corpus::wiggle(&tol).unwrap(),
            corpus::exchange_family(&tol).unwrap(),
        ] {
            let classes = braid::monodromy(&fam, &tol).unwrap();
            for g in 0..fam.domain().generators().len() {
                let deck = deck_transform(&fam, g, &tol).unwrap();
                assert!(deck.same_class(&classes[g]));
            }
        }
    }

    #[test]
    fn forgetful_drops_silent_strand() {
        let tol = Tolerances::default();
        let ext = winding_extended(&tol);
        let orig = corpus::winding(&tol).unwrap();
        let looppath = orig.domain().generator(0).unwrap().clone();
        let lifted_ext = lift_path(&ext, &looppath, &tol).unwrap();
        let lifted_orig = lift_path(&orig, &looppath, &tol).unwrap();
        let forgotten = forgetful(&lifted_ext).unwrap();
        assert!(forgotten.same_point(&lifted_orig, &tol));
        assert_eq!(
            forgotten.word().letters(),
            lifted_orig.word().letters(),
            "extended word {} forgot to {}, expected {}",
            lifted_ext.word(),
            forgotten.word(),
            lifted_orig.word()
        );
    }

    #[test]
    fn forgetful_removes_crossings_with_deleted_strand() {
        let tol = Tolerances::default();
        // word of crossings only with the last strand: position 3 among
        // [0, 1/2, 1] + appended strand ordered last
        let base = make_configuration(
            &[
                SpherePoint::finite(0.0, 0.0),
                SpherePoint::finite(1.0, 0.0),
                SpherePoint::finite(0.5, 0.0),
                SpherePoint::finite(1.5, 0.0),
            ],
            &tol,
        )
        .unwrap();
        let pt = CoverPoint {
            base: base.clone(),
            word: BraidWord::new(4, vec![3, 3, -3, 3]).unwrap(),
            end: base,
            base_order: vec![0, 2, 1, 3],
            rotation: 0.0,
        };
        let forgotten = forgetful(&pt).unwrap();
        assert!(forgotten.word().is_empty());
    }

    #[test]
    fn lift_map_exists_iff_monodromy_trivial() {
        let tol = Tolerances::default();
        let lifted = lift_map(&corpus::wiggle(&tol).unwrap(), &tol).unwrap();
        assert!(lifted.deck().iter().all(|d| d.is_trivial()));
        assert_eq!(lifted.probes().len(), PROBE_COUNT);
        for p in lifted.probes() {
            assert!(p.class_agree && p.end_distance <= 1e-10);
        }

        match lift_map(&corpus::winding(&tol).unwrap(), &tol) {
            Err(Error::NontrivialMonodromy { generator: 0 }) => {}
            other => panic!("expected nontrivial monodromy, got {other:?}"),
        }
    }

    #[test]
    fn lift_map_on_identity_has_empty_words() {
        let tol = Tolerances::default();
        let lifted = lift_map(&corpus::identity_disk(&tol).unwrap(), &tol).unwrap();
        for probe in lifted.probes() {
            let pt = lifted.at(probe.lambda, &tol).unwrap();
            assert!(pt.word().is_empty());
        }
    }
}
