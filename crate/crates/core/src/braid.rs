//! Braid words from strand tracks, the word problem, mapping classes of the
//! punctured sphere, and the monodromy of a motion family.
//!
//! The word problem is decided exactly, in integer arithmetic, through the
//! action of braid words on free-group generators (one generator per
//! puncture): a braid is trivial precisely when it fixes every generator.
//! Mapping classes of the sphere are handled through the quotient of the disk
//! braid group by the boundary twist: a word is trivial as a sphere class
//! exactly when its exponent sum is a multiple `t` of `m(m-1)` and the word
//! times the `-t`-th power of the full twist is trivial as a disk braid.

use num_complex::Complex64;
use serde::Serialize;

use crate::continuation::{self, StrandTracks};
use crate::error::MotionAxiom;
use crate::motion::MotionFamily;
use crate::sphere::chordal_finite;
use crate::{Error, Result, Tolerances};

/// A signed word in the Artin generators of the braid group on `strands`
/// strands. Letter `+g` is the positive crossing of the strands at positions
/// `g, g+1` in the real-part order; `-g` its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<BraidWord> {
        if strands < 2 {
            return Err(Error::IndexOutOfRange {
                index: strands,
                len: 2,
            });
        }
        for &l in &letters {
            let g = l.unsigned_abs() as usize;
            if l == 0 || g > strands - 1 {
                return Err(Error::IndexOutOfRange {
                    index: g,
                    len: strands - 1,
                });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn empty(strands: usize) -> BraidWord {
        BraidWord {
            strands,
            letters: Vec::new(),
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|&l| l.signum() as i64).sum()
    }

    /// Cancel adjacent inverse letters.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<i32> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord {
            strands: self.strands,
            letters: out,
        }
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::IndexOutOfRange {
                index: other.strands,
                len: self.strands,
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord {
            strands: self.strands,
            letters,
        })
    }

    /// The full twist `Delta^2` on `strands` strands (exponent sum
    /// `strands * (strands - 1)`), the generator of the center.
    pub fn full_twist(strands: usize) -> BraidWord {
        let mut half = Vec::new();
        for k in 1..strands {
            for g in (1..=k).rev() {
                half.push(g as i32);
            }
        }
        let mut letters = half.clone();
        letters.extend_from_slice(&half);
        BraidWord { strands, letters }
    }

    /// Net permutation of strand positions (position -> position).
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let g = l.unsigned_abs() as usize;
            perm.swap(g - 1, g);
        }
        perm
    }

    pub fn is_pure(&self) -> bool {
        self.permutation().iter().enumerate().all(|(i, &p)| i == p)
    }
}

impl std::fmt::Display for BraidWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for &l in &self.letters {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if l > 0 {
                write!(f, "s{l}")?;
            } else {
                write!(f, "s{}^-1", -l)?;
            }
        }
        Ok(())
    }
}

impl BraidWord {
    /// Parse the whitespace-separated token format (`"s1 s2^-1"`).
    pub fn from_tokens(strands: usize, src: &str) -> Result<BraidWord> {
        let mut letters = Vec::new();
        for tok in src.split_whitespace() {
            let bad = || Error::Parse {
                line: 1,
                col: 1,
                message: format!("malformed braid token `{tok}`"),
            };
            let rest = tok.strip_prefix('s').ok_or_else(bad)?;
            let (num, sign) = match rest.strip_suffix("^-1") {
                Some(n) => (n, -1),
                None => (rest, 1),
            };
            let g: i32 = num.parse().map_err(|_| bad())?;
            letters.push(sign * g);
        }
        BraidWord::new(strands, letters)
    }
}

// ---------------------------------------------------------------------------
// Word problem: action on free-group generators
// ---------------------------------------------------------------------------

/// Reduced free-group words over generators `1..=m` (sign = inverse).
mod freegroup {
    /// Push with cancellation.
    fn push(out: &mut Vec<i32>, s: i32) {
        if out.last() == Some(&-s) {
            out.pop();
        } else {
            out.push(s);
        }
    }

    /// Image of a reduced word under the automorphism of one braid letter.
    ///
    /// For the positive generator `g`: `x_g -> x_g x_{g+1} x_g^{-1}`,
    /// `x_{g+1} -> x_g`; for its inverse: `x_g -> x_{g+1}`,
    /// `x_{g+1} -> x_{g+1}^{-1} x_g x_{g+1}`.
    pub fn apply_letter(letter: i32, word: &[i32]) -> Vec<i32> {
        let g = letter.unsigned_abs() as i32;
        let mut out = Vec::with_capacity(word.len() * 2);
        for &s in word {
            let a = s.abs();
            let positive = s > 0;
            if letter > 0 {
                if a == g {
                    if positive {
                        push(&mut out, g);
                        push(&mut out, g + 1);
                        push(&mut out, -g);
                    } else {
                        push(&mut out, g);
                        push(&mut out, -(g + 1));
                        push(&mut out, -g);
                    }
                } else if a == g + 1 {
                    push(&mut out, if positive { g } else { -g });
                } else {
                    push(&mut out, s);
                }
            } else if a == g {
                push(&mut out, if positive { g + 1 } else { -(g + 1) });
            } else if a == g + 1 {
                if positive {
                    push(&mut out, -(g + 1));
                    push(&mut out, g);
                    push(&mut out, g + 1);
                } else {
                    push(&mut out, -(g + 1));
                    push(&mut out, -g);
                    push(&mut out, g + 1);
                }
            } else {
                push(&mut out, s);
            }
        }
        out
    }
}

/// Image of the free generator `x_gen` (1-based) under the automorphism of a
/// braid word, as a reduced free-group word.
pub fn puncture_loop_image(word: &BraidWord, gen: usize) -> Vec<i32> {
    let mut u = vec![gen as i32];
    for &l in word.letters().iter().rev() {
        u = freegroup::apply_letter(l, &u);
    }
    u
}

/// Exact word problem in the disk braid group: a braid is trivial if and only
/// if it fixes every free-group generator of the punctured disk.
pub fn is_trivial_braid(word: &BraidWord) -> bool {
    let reduced = word.free_reduce();
    if reduced.is_empty() {
        return true;
    }
    if reduced.exponent_sum() != 0 || !reduced.is_pure() {
        return false;
    }
    (1..=reduced.strands()).all(|g| puncture_loop_image(&reduced, g) == vec![g as i32])
}

/// A braid word read as a mapping class of the `(m+1)`-punctured sphere (the
/// `m` finite punctures plus infinity, each fixed).
#[derive(Clone, Debug)]
pub struct MappingClass {
    word: BraidWord,
}

impl MappingClass {
    pub fn new(word: BraidWord) -> MappingClass {
        MappingClass {
            word: word.free_reduce(),
        }
    }

    pub fn word(&self) -> &BraidWord {
        &self.word
    }

    /// Punctures of the sphere this class acts on.
    pub fn puncture_count(&self) -> usize {
        self.word.strands() + 1
    }

    /// Triviality in the sphere mapping class group: the kernel of the
    /// disk-to-sphere quotient is generated by the boundary twist, so the
    /// exponent sum must be `t * m(m-1)` for an integer `t` and the word times
    /// the `-t`-th power of the full twist must be trivial as a disk braid.
    pub fn is_trivial(&self) -> bool {
        is_trivial_mapping_class(&self.word)
    }

    /// Whether two words represent the same sphere class.
    pub fn same_class(&self, other: &MappingClass) -> bool {
        if self.word.strands() != other.word.strands() {
            return false;
        }
        let w = self
            .word
            .concat(&other.word.inverse())
            .expect("same strand count");
        is_trivial_mapping_class(&w)
    }
}

/// See [`MappingClass::is_trivial`].
pub fn is_trivial_mapping_class(word: &BraidWord) -> bool {
    let m = word.strands() as i64;
    let q = m * (m - 1);
    let e = word.exponent_sum();
    if e.rem_euclid(q) != 0 {
        return false;
    }
    let t = e / q;
    let mut candidate = word.free_reduce();
    let twist = BraidWord::full_twist(word.strands());
    let factor = if t >= 0 { twist.inverse() } else { twist };
    for _ in 0..t.unsigned_abs() {
        candidate = candidate.concat(&factor).expect("same strand count");
    }
    is_trivial_braid(&candidate)
}

// ---------------------------------------------------------------------------
// Crossing extraction
// ---------------------------------------------------------------------------

/// One detected crossing of adjacent strands in the projection order.
#[derive(Clone, Debug, Serialize)]
pub struct Crossing {
    /// Path time of the crossing.
    pub t: f64,
    /// 1-based position of the exchanged pair in the order at that moment.
    pub position: usize,
    /// +1 when the left strand passes under (smaller imaginary part).
    pub sign: i8,
    /// Strand labels involved (configuration indices).
    pub strands: (usize, usize),
}

/// Braid word plus the projection data that produced it.
#[derive(Clone, Debug)]
pub struct BraidExtraction {
    pub word: BraidWord,
    /// Rotation angle applied to make the real-part projection generic.
    pub rotation: f64,
    /// Strand labels sorted by the projection order at the path start.
    pub initial_order: Vec<usize>,
    pub crossings: Vec<Crossing>,
}

const ROTATION_LADDER: usize = 12;
// Small enough to never reorder a base configuration, large enough to clear
// sample-level real-part ties.
const ROTATION_STEP: f64 = 7.754_321e-4;
// Per-strand projection offset relative to the track scale.
const PROJECTION_OFFSET: f64 = 1e-7;
const SUBDIVISION_DEPTH: usize = 40;

/// Extract the braid word of strand tracks via the real-part projection; a
/// deterministic rotation ladder makes degenerate projections generic, and
/// the angle actually used is reported.
pub fn extract_braid(tracks: &StrandTracks, tol: &Tolerances) -> Result<BraidExtraction> {
    let mut last = Error::DegenerateCrossing {
        detail: "no attempt".to_string(),
    };
    for k in 0..ROTATION_LADDER {
        let theta = k as f64 * ROTATION_STEP;
        match extract_with_rotation(tracks, theta, tol) {
            Ok(e) => return Ok(e),
            Err(e @ Error::DegenerateCrossing { .. }) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// The braid word of the tracks (the heading of [`extract_braid`]).
pub fn braid_from_tracks(tracks: &StrandTracks, tol: &Tolerances) -> Result<BraidWord> {
    Ok(extract_braid(tracks, tol)?.word)
}

/// Projection of one strand position: the rotated real part plus a tiny
/// per-strand offset (imaginary part kept for crossing signs). The offsets
/// break exactly simultaneous crossings of symmetric tracks; they sit far
/// below every separation, so any incidences they create cancel freely.
fn project(z: Complex64, strand: usize, rot: Complex64, offset_unit: f64) -> Complex64 {
    let w = z * rot;
    Complex64::new(w.re + (strand + 1) as f64 * offset_unit, w.im)
}

/// The strand labels sorted by the projection order used for extraction.
pub(crate) fn projection_order(points: &[Complex64], theta: f64) -> Vec<usize> {
    let rot = Complex64::from_polar(1.0, theta);
    let scale = points.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    let offset_unit = PROJECTION_OFFSET * scale;
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        project(points[a], a, rot, offset_unit)
            .re
            .partial_cmp(&project(points[b], b, rot, offset_unit).re)
            .unwrap()
    });
    order
}

pub(crate) fn extract_with_rotation(
    tracks: &StrandTracks,
    theta: f64,
    tol: &Tolerances,
) -> Result<BraidExtraction> {
    let m = tracks.strand_count();
    if m < 2 {
        return Err(Error::IndexOutOfRange { index: m, len: 2 });
    }
    let rot = Complex64::from_polar(1.0, theta);
    let times = tracks.times().to_vec();
    let scale = (0..m)
        .flat_map(|i| tracks.positions(i).iter())
        .map(|z| z.norm())
        .fold(1.0f64, f64::max);
    let offset_unit = PROJECTION_OFFSET * scale;
    let columns: Vec<Vec<Complex64>> = (0..times.len())
        .map(|s| {
            (0..m)
                .map(|i| project(tracks.positions(i)[s], i, rot, offset_unit))
                .collect()
        })
        .collect();

    let tie = 1e-11 * scale;

    // stored samples must order strictly by real part
    for col in &columns {
        let mut re: Vec<f64> = col.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for w in re.windows(2) {
            if (w[1] - w[0]).abs() < tie {
                return Err(Error::DegenerateCrossing {
                    detail: format!("equal real parts under rotation {theta}"),
                });
            }
        }
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| columns[0][a].re.partial_cmp(&columns[0][b].re).unwrap());
    let initial_order = order.clone();

    let mut word = Vec::new();
    let mut crossings = Vec::new();
    for s in 0..times.len() - 1 {
        process_interval(
            tracks,
            (rot, offset_unit),
            (times[s], &columns[s]),
            (times[s + 1], &columns[s + 1]),
            &mut order,
            &mut word,
            &mut crossings,
            SUBDIVISION_DEPTH,
            tie,
            tol,
        )?;
    }

    let word = BraidWord::new(m, word)?.free_reduce();
    Ok(BraidExtraction {
        word,
        rotation: theta,
        initial_order,
        crossings,
    })
}

/// Pairs whose real-part order flips across the interval, with interpolated
/// crossing times.
fn interval_events(
    t0: f64,
    col0: &[Complex64],
    t1: f64,
    col1: &[Complex64],
) -> Vec<(f64, usize, usize)> {
    let m = col0.len();
    let mut events = Vec::new();
    for a in 0..m {
        for b in (a + 1)..m {
            let d0 = col0[a].re - col0[b].re;
            let d1 = col1[a].re - col1[b].re;
            if d0.signum() != d1.signum() {
                let frac = d0 / (d0 - d1);
                let t = t0 + (t1 - t0) * frac;
                events.push((t, a, b));
            }
        }
    }
    events.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    events
}

#[allow(clippy::too_many_arguments)]
fn process_interval(
    tracks: &StrandTracks,
    projection: (Complex64, f64),
    lo: (f64, &[Complex64]),
    hi: (f64, &[Complex64]),
    order: &mut Vec<usize>,
    word: &mut Vec<i32>,
    crossings: &mut Vec<Crossing>,
    depth: usize,
    tie: f64,
    tol: &Tolerances,
) -> Result<()> {
    let (t0, col0) = lo;
    let (t1, col1) = hi;
    let events = interval_events(t0, col0, t1, col1);
    if events.is_empty() {
        return Ok(());
    }

    // dry run: every event must exchange strands adjacent in the order at its
    // moment, and signs must be resolvable
    let resolvable = {
        let mut ord = order.clone();
        let mut ok = true;
        for &(t, a, b) in &events {
            let pa = ord.iter().position(|&x| x == a).unwrap();
            let pb = ord.iter().position(|&x| x == b).unwrap();
            if pa.abs_diff(pb) != 1 {
                ok = false;
                break;
            }
            let w = (t - t0) / (t1 - t0);
            let ia = col0[a].im * (1.0 - w) + col1[a].im * w;
            let ib = col0[b].im * (1.0 - w) + col1[b].im * w;
            if (ia - ib).abs() < tie {
                ok = false;
                break;
            }
            ord.swap(pa, pb);
        }
        ok
    };

    if !resolvable {
        if depth == 0 {
            return Err(Error::DegenerateCrossing {
                detail: format!("unresolvable crossing cluster near t = {t0}"),
            });
        }
        let (rot, offset_unit) = projection;
        let tm = (t0 + t1) / 2.0;
        let mid: Vec<Complex64> = (0..col0.len())
            .map(|i| {
                tracks
                    .position_at(i, tm, tol)
                    .map(|z| project(z, i, rot, offset_unit))
            })
            .collect::<Result<_>>()?;
        process_interval(
            tracks,
            projection,
            (t0, col0),
            (tm, &mid),
            order,
            word,
            crossings,
            depth - 1,
            tie,
            tol,
        )?;
        return process_interval(
            tracks,
            projection,
            (tm, &mid),
            (t1, col1),
            order,
            word,
            crossings,
            depth - 1,
            tie,
            tol,
        );
    }

    for (t, a, b) in events {
        let pa = order.iter().position(|&x| x == a).unwrap();
        let pb = order.iter().position(|&x| x == b).unwrap();
        let (left_pos, left, right) = if pa < pb { (pa, a, b) } else { (pb, b, a) };
        let w = (t - t0) / (t1 - t0);
        let im_left = col0[left].im * (1.0 - w) + col1[left].im * w;
        let im_right = col0[right].im * (1.0 - w) + col1[right].im * w;
        // positive crossing: the left strand passes under (smaller Im)
        let sign: i8 = if im_left < im_right { 1 } else { -1 };
        let gen = (left_pos + 1) as i32;
        word.push(sign as i32 * gen);
        crossings.push(Crossing {
            t,
            position: left_pos + 1,
            sign,
            strands: (left, right),
        });
        order.swap(left_pos, left_pos + 1);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Monodromy
// ---------------------------------------------------------------------------

/// Monodromy data for every generator of the domain.
#[derive(Clone, Debug)]
pub struct MonodromyOutcome {
    pub classes: Vec<MappingClass>,
    /// Rotation angle shared by all extractions.
    pub rotation: f64,
    /// The continued tracks, for diagrams and reports.
    pub tracks: Vec<StrandTracks>,
}

/// Compute the monodromy: continuation along every generator loop, braid
/// extraction with one shared projection, and class construction. The result
/// order matches the generator order.
pub fn monodromy_detailed(family: &MotionFamily, tol: &Tolerances) -> Result<MonodromyOutcome> {
    let mut tracks = Vec::new();
    for (g, looppath) in family.domain().generators().iter().enumerate() {
        let t = continuation::continue_strands(family, looppath, tol)?;
        // a motion strand must return to its base value around a loop
        for i in 0..t.strand_count() {
            let start = t.positions(i)[0];
            let end = *t.positions(i).last().unwrap();
            if chordal_finite(start, end) > tol.eps_sep {
                return Err(Error::ValidationFailure {
                    axiom: MotionAxiom::SingleValuedness,
                    detail: format!("strand {i} does not close up around generator {g}"),
                    witness: Some(looppath.start()),
                });
            }
        }
        tracks.push(t);
    }

    let mut rotation = 0.0;
    let mut classes: Option<Vec<MappingClass>> = None;
    'ladder: for k in 0..ROTATION_LADDER {
        let theta = k as f64 * ROTATION_STEP;
        let mut acc = Vec::with_capacity(tracks.len());
        for t in &tracks {
            match extract_with_rotation(t, theta, tol) {
                Ok(e) => acc.push(MappingClass::new(e.word)),
                Err(Error::DegenerateCrossing { .. }) => continue 'ladder,
                Err(e) => return Err(e),
            }
        }
        rotation = theta;
        classes = Some(acc);
        break;
    }
    let classes = classes.ok_or(Error::DegenerateCrossing {
        detail: "no generic projection found".to_string(),
    })?;
    Ok(MonodromyOutcome {
        classes,
        rotation,
        tracks,
    })
}

/// The monodromy homomorphism as one mapping class per generator.
pub fn monodromy(family: &MotionFamily, tol: &Tolerances) -> Result<Vec<MappingClass>> {
    Ok(monodromy_detailed(family, tol)?.classes)
}

/// Whether every generator maps to the identity mapping class.
pub fn is_trivial_monodromy(family: &MotionFamily, tol: &Tolerances) -> Result<bool> {
    Ok(monodromy(family, tol)?.iter().all(|c| c.is_trivial()))
}

/// Half the signed crossing count of strands `i` and `j` over closed tracks,
/// computed as the winding of their difference.
pub fn linking_number(tracks: &StrandTracks, i: usize, j: usize, tol: &Tolerances) -> Result<i64> {
    if !tracks.path().is_closed() {
        return Err(Error::NotClosed);
    }
    let m = tracks.strand_count();
    if i >= m || j >= m || i == j {
        return Err(Error::IndexOutOfRange {
            index: i.max(j),
            len: m,
        });
    }
    let a = tracks.positions(i);
    let b = tracks.positions(j);
    let mut total = 0.0f64;
    for s in 0..a.len() - 1 {
        let d0 = a[s] - b[s];
        let d1 = a[s + 1] - b[s + 1];
        if d0.norm() < tol.eps_track / 2.0 || d1.norm() < tol.eps_track / 2.0 {
            return Err(Error::TooClose {
                dist: d0.norm().min(d1.norm()),
            });
        }
        total += (d1 / d0).arg();
    }
    let turns = total / std::f64::consts::TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() > 0.01 {
        return Err(Error::DegenerateCrossing {
            detail: format!("linking number {turns} is not near an integer"),
        });
    }
    Ok(rounded as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::path::Path;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn word(strands: usize, letters: &[i32]) -> BraidWord {
        BraidWord::new(strands, letters.to_vec()).unwrap()
    }

    #[test]
    fn free_cancellation_is_trivial() {
        assert!(is_trivial_braid(&word(3, &[1, -1])));
        assert!(is_trivial_braid(&word(3, &[])));
    }

    #[test]
    fn squared_generator_is_nontrivial() {
        assert!(!is_trivial_braid(&word(3, &[1, 1])));
    }

    #[test]
    fn braid_relation_holds_in_the_action() {
        // s1 s2 s1 (s2 s1 s2)^-1 is trivial
        let w = word(3, &[1, 2, 1, -2, -1, -2]);
        assert!(is_trivial_braid(&w));
        // far commutation on 4 strands
        let w = word(4, &[1, 3, -1, -3]);
        assert!(is_trivial_braid(&w));
        // and the relation genuinely needs the relation, not free reduction
        assert!(!w.free_reduce().is_empty());
    }

    #[test]
    fn braid_relations_all_indices_up_to_seven() {
        for m in 3..=7usize {
            for i in 1..(m - 1) {
                let g = i as i32;
                let w = word(m, &[g, g + 1, g, -(g + 1), -g, -(g + 1)]);
                assert!(
                    is_trivial_braid(&w),
                    "braid relation failed at m={m}, i={i}"
                );
            }
            for i in 1..=(m - 1) {
                for j in 1..=(m - 1) {
                    if (i as i32 - j as i32).abs() >= 2 {
                        let w = word(m, &[i as i32, j as i32, -(i as i32), -(j as i32)]);
                        assert!(is_trivial_braid(&w), "commutation failed at m={m}, {i},{j}");
                    }
                }
            }
        }
    }

    #[test]
    fn random_words_cancel_with_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let m = rng.gen_range(2..=6usize);
            let len = rng.gen_range(0..=20usize);
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
            let w = word(m, &letters);
            let ww = w.concat(&w.inverse()).unwrap();
            assert!(is_trivial_braid(&ww));
            if !w.free_reduce().is_empty() {
                // a reduced nonempty word should rarely be trivial; check the
                // decision is at least consistent with the class test
                let t1 = is_trivial_braid(&w);
                let t2 = is_trivial_braid(&w.free_reduce());
                assert_eq!(t1, t2);
            }
        }
    }

    #[test]
    fn full_twist_is_central_and_nontrivial() {
        for m in 2..=5usize {
            let twist = BraidWord::full_twist(m);
            assert_eq!(twist.exponent_sum(), (m * (m - 1)) as i64);
            assert!(!is_trivial_braid(&twist), "m={m}");
            assert!(twist.is_pure());
            // centrality: commutes with every generator
            for g in 1..m as i32 {
                let lhs = twist.concat(&word(m, &[g])).unwrap();
                let rhs = word(m, &[g]).concat(&twist).unwrap();
                let commutator = lhs.concat(&rhs.inverse()).unwrap();
                assert!(is_trivial_braid(&commutator));
            }
        }
    }

    #[test]
    fn sphere_quotient_kills_exactly_the_twist_powers() {
        for m in 2..=5usize {
            let twist = BraidWord::full_twist(m);
            assert!(is_trivial_mapping_class(&twist), "m={m}");
            let double = twist.concat(&twist).unwrap();
            assert!(is_trivial_mapping_class(&double));
            assert!(is_trivial_mapping_class(&twist.inverse()));
        }
        // sigma_1^2 on 3 strands: exponent sum 2, not divisible by 6
        assert!(!is_trivial_mapping_class(&word(3, &[1, 1])));
        // empty word
        assert!(is_trivial_mapping_class(&word(3, &[])));
    }

    #[test]
    fn quotient_verdict_is_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let m = rng.gen_range(2..=6usize);
            let mut sample = |len: usize| -> BraidWord {
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
                word(m, &letters)
            };
            let w = sample(12);
            let conj = sample(8);
            let conjugated = conj.concat(&w).unwrap().concat(&conj.inverse()).unwrap();
            assert_eq!(
                is_trivial_mapping_class(&w),
                is_trivial_mapping_class(&conjugated)
            );
            // twist invariance
            let twisted = w.concat(&BraidWord::full_twist(m)).unwrap();
            assert_eq!(
                is_trivial_mapping_class(&w),
                is_trivial_mapping_class(&twisted)
            );
        }
    }

    #[test]
    fn constant_tracks_give_empty_word() {
        let tol = Tolerances::default();
        let fam = corpus::identity_punctured(&tol).unwrap();
        let looppath = fam.domain().generator(0).unwrap().clone();
        let tracks = continuation::continue_strands(&fam, &looppath, &tol).unwrap();
        let w = braid_from_tracks(&tracks, &tol).unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn winding_family_word_is_sigma1_squared() {
        let tol = Tolerances::default();
        let fam = corpus::winding(&tol).unwrap();
        let looppath = fam.domain().generator(0).unwrap().clone();
        let tracks = continuation::continue_strands(&fam, &looppath, &tol).unwrap();
        let w = braid_from_tracks(&tracks, &tol).unwrap();
        assert_eq!(w.letters(), &[1, 1], "got {w}");
        assert_eq!(w.exponent_sum(), 2);
    }

    #[test]
    fn half_turn_exchange_is_one_letter() {
        let tol = Tolerances::default();
        // synthetic tracks: strands at 0 and 1 frozen, strands at 1/4 and 3/4
        // exchanging by a counterclockwise half-turn around their midpoint
        let path = Path::segment(c(0.0, 0.0), c(1.0, 0.0));
        let n = 64;
        let times: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
        let mid = c(0.5, 0.0);
        let r = 0.25;
        let mut p2 = Vec::new();
        let mut p3 = Vec::new();
        for &t in &times {
            let ang = std::f64::consts::PI * t;
            p2.push(mid - Complex64::from_polar(r, ang));
            p3.push(mid + Complex64::from_polar(r, ang));
        }
        let positions = vec![
            vec![c(0.0, 0.0); times.len()],
            vec![c(1.0, 0.0); times.len()],
            p2,
            p3,
        ];
        let tracks = StrandTracks::from_samples(path, times, positions, &tol).unwrap();
        let w = braid_from_tracks(&tracks, &tol).unwrap();
        assert_eq!(w.letters().len(), 1, "got {w}");
        assert_eq!(w.letters()[0].abs(), 2); // middle pair of four strands
    }

    #[test]
    fn monodromy_of_disk_family_is_empty() {
        let tol = Tolerances::default();
        let fam = corpus::identity_disk(&tol).unwrap();
        let classes = monodromy(&fam, &tol).unwrap();
        assert!(classes.is_empty());
        assert!(is_trivial_monodromy(&fam, &tol).unwrap());
    }

    #[test]
    fn monodromy_verdicts_on_named_families() {
        let tol = Tolerances::default();
        assert!(!is_trivial_monodromy(&corpus::winding(&tol).unwrap(), &tol).unwrap());
        assert!(is_trivial_monodromy(&corpus::wiggle(&tol).unwrap(), &tol).unwrap());
        assert!(!is_trivial_monodromy(&corpus::around_one(&tol).unwrap(), &tol).unwrap());
    }

    #[test]
    fn wiggle_word_reduces_to_empty() {
        let tol = Tolerances::default();
        let fam = corpus::wiggle(&tol).unwrap();
        let out = monodromy_detailed(&fam, &tol).unwrap();
        assert!(out.classes[0].word().is_empty());
    }

    #[test]
    fn exchange_family_has_both_mechanisms() {
        let tol = Tolerances::default();
        let fam = corpus::exchange_family(&tol).unwrap();
        let out = monodromy_detailed(&fam, &tol).unwrap();
        assert_eq!(out.classes.len(), 2);
        assert!(!out.classes[0].is_trivial());
        assert!(!out.classes[1].is_trivial());
        // generator 0: the strand based at 0.45 pushes around the frozen 0
        let t0 = &out.tracks[0];
        assert_eq!(linking_number(t0, 0, 2, &tol).unwrap(), 1);
        assert_eq!(linking_number(t0, 2, 3, &tol).unwrap(), 0);
        // generator 1: the two moving strands twist around each other
        let t1 = &out.tracks[1];
        assert_eq!(linking_number(t1, 2, 3, &tol).unwrap(), 1);
        assert_eq!(linking_number(t1, 0, 2, &tol).unwrap(), 0);
    }

    #[test]
    fn linking_numbers_of_winding_family() {
        let tol = Tolerances::default();
        let fam = corpus::winding(&tol).unwrap();
        let looppath = fam.domain().generator(0).unwrap().clone();
        let tracks = continuation::continue_strands(&fam, &looppath, &tol).unwrap();
        assert_eq!(linking_number(&tracks, 0, 2, &tol).unwrap(), 1);
        assert_eq!(linking_number(&tracks, 1, 2, &tol).unwrap(), 0);
        let doubled = looppath.then(&looppath).unwrap();
        let tracks2 = continuation::continue_strands(&fam, &doubled, &tol).unwrap();
        assert_eq!(linking_number(&tracks2, 0, 2, &tol).unwrap(), 2);
    }

    #[test]
    fn monodromy_is_homomorphic_on_concatenations() {
        let tol = Tolerances::default();
        let fam = corpus::exchange_family(&tol).unwrap();
        let g0 = fam.domain().generator(0).unwrap().clone();
        let g1 = fam.domain().generator(1).unwrap().clone();
        let both = g0.then(&g1).unwrap();
        let w0 = braid_from_tracks(
            &continuation::continue_strands(&fam, &g0, &tol).unwrap(),
            &tol,
        )
        .unwrap();
        let w1 = braid_from_tracks(
            &continuation::continue_strands(&fam, &g1, &tol).unwrap(),
            &tol,
        )
        .unwrap();
        let w01 = braid_from_tracks(
            &continuation::continue_strands(&fam, &both, &tol).unwrap(),
            &tol,
        )
        .unwrap();
        let product = w0.concat(&w1).unwrap().concat(&w01.inverse()).unwrap();
        assert!(is_trivial_mapping_class(&product), "got {product}");
    }

    #[test]
    fn loop_then_reverse_is_trivial() {
        let tol = Tolerances::default();
        for fam in [
            corpus::winding(&tol).unwrap(),
            corpus::exchange_family(&tol).unwrap(),
        ] {
            for g in fam.domain().generators() {
                let there_back = g.then(&g.reversed()).unwrap();
                let tracks = continuation::continue_strands(&fam, &there_back, &tol).unwrap();
                let w = braid_from_tracks(&tracks, &tol).unwrap();
                assert!(is_trivial_braid(&w), "got {w}");
            }
        }
    }

    #[test]
    fn strand_permutation_around_loop_is_rejected() {
        let tol = Tolerances::default();
        // roots of z^2 - lambda/4 swap when the parameter circles 0 once, so
        // the labeled strands are not single-valued over the punctured disk
        let fam = corpus::square_root_pair(&tol).unwrap();
        match monodromy(&fam, &tol) {
            Err(Error::ValidationFailure { axiom, .. }) => {
                assert_eq!(axiom, crate::error::MotionAxiom::SingleValuedness)
            }
            other => panic!("expected single-valuedness failure, got {other:?}"),
        }
    }

    #[test]
    fn sampling_density_does_not_change_classes() {
        let tol = Tolerances::default();
        let fam = corpus::root_pair_winding(&tol).unwrap();
        let coarse = monodromy(&fam, &tol).unwrap();
        let mut tol2 = tol.clone();
        tol2.initial_path_samples *= 2;
        let fine = monodromy(&fam, &tol2).unwrap();
        assert_eq!(coarse.len(), fine.len());
        for (a, b) in coarse.iter().zip(fine.iter()) {
            assert!(a.same_class(b));
        }
    }

    #[test]
    fn crossing_signs_agree_with_linking_numbers() {
        // two independent routes to the same data: signed crossings between a
        // pair of strands from the projection sweep, and the winding of their
        // difference by the argument principle
        let tol = Tolerances::default();
        for fam in [
            corpus::winding(&tol).unwrap(),
            corpus::root_pair_winding(&tol).unwrap(),
            corpus::exchange_family(&tol).unwrap(),
            corpus::around_one(&tol).unwrap(),
        ] {
            for looppath in fam.domain().generators() {
                let tracks = continuation::continue_strands(&fam, looppath, &tol).unwrap();
                let extraction = extract_braid(&tracks, &tol).unwrap();
                let m = tracks.strand_count();
                for i in 0..m {
                    for j in (i + 1)..m {
                        let signed: i64 = extraction
                            .crossings
                            .iter()
                            .filter(|c| {
                                (c.strands.0 == i && c.strands.1 == j)
                                    || (c.strands.0 == j && c.strands.1 == i)
                            })
                            .map(|c| c.sign as i64)
                            .sum();
                        let lk = linking_number(&tracks, i, j, &tol).unwrap();
                        assert_eq!(signed, 2 * lk, "pair ({i},{j})");
                    }
                }
                // total exponent sum of a pure braid is twice the total linking
                let total: i64 = extraction.crossings.iter().map(|c| c.sign as i64).sum();
                assert_eq!(total, extraction.word.exponent_sum());
            }
        }
    }

    #[test]
    fn word_tokens_round_trip() {
        let w = word(4, &[1, -2, 3, 3, -1]);
        let text = w.to_string();
        assert_eq!(text, "s1 s2^-1 s3 s3 s1^-1");
        let back = BraidWord::from_tokens(4, &text).unwrap();
        assert_eq!(w, back);
    }
}
