//! Extensions of motions.
//!
//! Three constructions: a continuous motion of the whole sphere when the
//! monodromy is trivial (grid maps transported by a time-dependent field of
//! compactly supported bumps, one per strand); a one-point extension solver
//! that finds a new holomorphic strand through a prescribed puncture by
//! maximizing a separation margin over a polynomial ansatz; and the inductive
//! driver that adds a list of punctures stage by stage, rechecking the motion
//! axioms, monodromy triviality, and forgetful compatibility at every stage.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::braid;
use crate::continuation::{self, StrandTracks};
use crate::cover;
use crate::expr::Expr;
use crate::motion::{self, MotionFamily, StrandSpec};
use crate::path::Path;
use crate::sphere::{chordal_finite, SpherePoint};
use crate::{Error, Result, Tolerances};

// ---------------------------------------------------------------------------
// Continuous motion grids
// ---------------------------------------------------------------------------

/// Size controls for the continuous-motion construction.
#[derive(Clone, Debug)]
pub struct GridSpec {
    /// Cap on grid nodes per axis.
    pub max_resolution: usize,
    /// Number of parameter samples besides the basepoint.
    pub param_samples: usize,
    /// Runge-Kutta steps per spanning-tree edge.
    pub flow_steps: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            max_resolution: 128,
            param_samples: 8,
            flow_steps: 256,
        }
    }
}

/// The grid map at one parameter sample.
#[derive(Clone, Debug, Serialize)]
pub struct GridMotionSample {
    pub parameter: (f64, f64),
    /// Row-major images of the grid nodes.
    pub images: Vec<(f64, f64)>,
    /// Minimum cell Jacobian estimate (orientation test included).
    pub jacobian_min: f64,
    /// Grid estimate of `sup |df/dzbar / df/dz|`.
    pub beltrami_sup: f64,
    /// Max chordal deviation of transported strand markers from the strand
    /// values at this parameter.
    pub strand_error: f64,
    /// Parent sample in the spanning tree (none for the basepoint).
    pub parent: Option<usize>,
}

/// A continuous motion of the sphere sampled on a rectangular grid along a
/// basepoint-rooted spanning tree of parameter samples. Points outside the
/// grid box never move (the fields are compactly supported), so a
/// neighborhood of infinity is fixed exactly.
#[derive(Clone, Debug, Serialize)]
pub struct ContinuousMotionGrid {
    pub origin: (f64, f64),
    pub step: f64,
    pub nx: usize,
    pub ny: usize,
    pub tube_radius: f64,
    pub samples: Vec<GridMotionSample>,
    /// Sup grid-map disagreement over re-flowed non-tree edges, when any
    /// close pairs existed to compare.
    pub cross_edge_consistency: Option<f64>,
}

struct EdgeData {
    child_node: usize,
    tracks: StrandTracks,
}

fn euclid_min_separation(values: &[Complex64]) -> f64 {
    let mut min = f64::INFINITY;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            min = min.min((values[i] - values[j]).norm());
        }
    }
    min
}

/// Build the continuous motion. Requires trivial monodromy (the monodromy is
/// checked first and reported as the obstruction when nontrivial).
pub fn build_continuous_motion(
    family: &MotionFamily,
    spec: &GridSpec,
    tol: &Tolerances,
) -> Result<ContinuousMotionGrid> {
    let classes = braid::monodromy(family, tol)?;
    for (g, class) in classes.iter().enumerate() {
        if !class.is_trivial() {
            return Err(Error::NontrivialMonodromy { generator: g });
        }
    }

    let domain = family.domain();
    let x0 = domain.basepoint();
    let m = family.strand_count();

    // parameter samples and a basepoint-rooted spanning tree with in-domain
    // straight edges
    let margin = tol.eps_bd.max(4.0 * tol.circle_radius);
    let candidates = motion::domain_samples(domain, spec.param_samples, margin);
    let mut nodes: Vec<Complex64> = vec![x0];
    let mut parents: Vec<Option<usize>> = vec![None];
    let mut pending: Vec<Complex64> = candidates;
    let mut progressed = true;
    while progressed && !pending.is_empty() {
        progressed = false;
        let mut rest = Vec::new();
        'cand: for &cand in &pending {
            let mut order: Vec<usize> = (0..nodes.len()).collect();
            order.sort_by(|&a, &b| {
                (nodes[a] - cand)
                    .norm()
                    .partial_cmp(&(nodes[b] - cand).norm())
                    .unwrap()
            });
            for &anchor in &order {
                if segment_in_domain(domain, nodes[anchor], cand, tol) {
                    nodes.push(cand);
                    parents.push(Some(anchor));
                    progressed = true;
                    continue 'cand;
                }
            }
            rest.push(cand);
        }
        pending = rest;
    }

    // continue strands along every tree edge, reusing parent end positions
    let mut node_positions: Vec<Option<Vec<Complex64>>> = vec![None; nodes.len()];
    node_positions[0] = Some(family.base().punctures().to_vec());
    let order = bfs_order(&parents);
    let mut edges: Vec<Option<EdgeData>> = Vec::new();
    for _ in 0..nodes.len() {
        edges.push(None);
    }
    let mut max_modulus: f64 = family
        .base()
        .punctures()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let mut min_sep_euclid = euclid_min_separation(family.base().punctures());
    for &n in &order {
        let Some(parent) = parents[n] else { continue };
        let start = node_positions[parent]
            .clone()
            .expect("parent visited first");
        let seg = Path::segment(nodes[parent], nodes[n]);
        let tracks = continuation::continue_strands_from(family, &seg, &start, tol)?;
        for i in 0..m {
            for &z in tracks.positions(i) {
                max_modulus = max_modulus.max(z.norm());
            }
        }
        for s in 0..tracks.times().len() {
            let col: Vec<Complex64> = (0..m).map(|i| tracks.positions(i)[s]).collect();
            min_sep_euclid = min_sep_euclid.min(euclid_min_separation(&col));
        }
        node_positions[n] = Some(tracks.end_positions());
        edges[n] = Some(EdgeData {
            child_node: n,
            tracks,
        });
    }

    // grid geometry: the box covers the action region (tracks plus tubes);
    // everything outside stays pointwise fixed, so a neighborhood of infinity
    // is fixed exactly
    let tube_radius = tol.eps_tube.min(0.5 * min_sep_euclid);
    let half_width = max_modulus + (3.0 * tube_radius).max(0.3);
    let desired_step = (min_sep_euclid / 6.0).min(tube_radius / 2.0);
    let res = (((2.0 * half_width) / desired_step).ceil() as usize + 1).max(8);
    let res = res.min(spec.max_resolution);
    let step = 2.0 * half_width / (res - 1) as f64;
    if min_sep_euclid < 4.0 * step {
        return Err(Error::TubeCollapse {
            separation: min_sep_euclid,
            grid_step: step,
        });
    }
    let origin = Complex64::new(-half_width, -half_width);
    let (nx, ny) = (res, res);

    // base sample: the identity grid with identity tangents
    let identity_grid: Vec<Complex64> = (0..ny)
        .flat_map(|j| {
            (0..nx).map(move |i| {
                Complex64::new(-half_width + step * i as f64, -half_width + step * j as f64)
            })
        })
        .collect();
    let base_state = FlowState {
        grid: identity_grid,
        tangents: vec![[1.0, 0.0, 0.0, 1.0]; nx * ny],
        markers: family.base().punctures().to_vec(),
    };

    let mut sample_states: Vec<Option<FlowState>> = vec![None; nodes.len()];

    let mut samples: Vec<GridMotionSample> = Vec::with_capacity(nodes.len());
    let (jac0, bel0) = grid_quality(&base_state, nx, ny);
    samples.push(GridMotionSample {
        parameter: (x0.re, x0.im),
        images: base_state.grid.iter().map(|z| (z.re, z.im)).collect(),
        jacobian_min: jac0,
        beltrami_sup: bel0,
        strand_error: 0.0,
        parent: None,
    });
    sample_states[0] = Some(base_state);

    let mut node_to_sample: Vec<usize> = vec![usize::MAX; nodes.len()];
    node_to_sample[0] = 0;

    // per-step strand travel cap: keeps the Beltrami diagnostic continuous
    // between adjacent parameter samples
    let travel_cap = 0.075 * tube_radius;

    for &n in &order {
        let Some(parent) = parents[n] else { continue };
        let edge = edges[n].as_ref().expect("edge exists");
        debug_assert_eq!(edge.child_node, n);

        // subdivide the edge so each sub-step transports strands by at most
        // the travel cap; every subdivision point becomes a parameter sample
        let travel = (0..m)
            .map(|i| {
                edge.tracks
                    .positions(i)
                    .windows(2)
                    .map(|w| (w[1] - w[0]).norm())
                    .sum::<f64>()
            })
            .fold(0.0f64, f64::max);
        let subs = ((travel / travel_cap).ceil() as usize).max(1);
        let sub_steps = (spec.flow_steps / subs).max(32);

        let mut state = sample_states[parent].clone().expect("parent state");
        let mut positions = node_positions[parent].clone().expect("parent positions");
        let mut parent_sample = node_to_sample[parent];
        for piece in 0..subs {
            let a = nodes[parent] + (nodes[n] - nodes[parent]) * (piece as f64 / subs as f64);
            let b = nodes[parent] + (nodes[n] - nodes[parent]) * ((piece + 1) as f64 / subs as f64);
            let sub_tracks =
                continuation::continue_strands_from(family, &Path::segment(a, b), &positions, tol)?;
            let (next_state, strand_error) =
                flow_edge(family, &sub_tracks, state, tube_radius, sub_steps, tol)?;
            let (jac, bel) = grid_quality(&next_state, nx, ny);
            if jac <= 0.0 {
                return Err(Error::FlowBlowup {
                    detail: format!("non-positive Jacobian {jac:.3e} at node {n}"),
                });
            }
            samples.push(GridMotionSample {
                parameter: (b.re, b.im),
                images: next_state.grid.iter().map(|z| (z.re, z.im)).collect(),
                jacobian_min: jac,
                beltrami_sup: bel,
                strand_error,
                parent: Some(parent_sample),
            });
            parent_sample = samples.len() - 1;
            positions = sub_tracks.end_positions();
            state = next_state;
        }
        node_to_sample[n] = parent_sample;
        sample_states[n] = Some(state);
    }

    // cross-edge consistency: re-flow up to three close non-tree pairs and
    // compare against the stored grids (reported, not enforced)
    let mut cross: Option<f64> = None;
    let mut checked = 0;
    'outer: for a in 1..nodes.len() {
        for b in (a + 1)..nodes.len() {
            if checked >= 3 {
                break 'outer;
            }
            if parents[b] == Some(a) || parents[a] == Some(b) {
                continue;
            }
            if node_to_sample[a] == usize::MAX || node_to_sample[b] == usize::MAX {
                continue;
            }
            if (nodes[a] - nodes[b]).norm() > 0.5 {
                continue;
            }
            if !segment_in_domain(domain, nodes[a], nodes[b], tol) {
                continue;
            }
            let seg = Path::segment(nodes[a], nodes[b]);
            let start = node_positions[a].clone().expect("visited");
            let Ok(tracks) = continuation::continue_strands_from(family, &seg, &start, tol) else {
                continue;
            };
            let state_a = sample_states[a].clone().expect("state");
            if let Ok((state_b2, _)) =
                flow_edge(family, &tracks, state_a, tube_radius, spec.flow_steps, tol)
            {
                let grid_b = &sample_states[b].as_ref().expect("state").grid;
                let sup = grid_b
                    .iter()
                    .zip(state_b2.grid.iter())
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0f64, f64::max);
                cross = Some(cross.map_or(sup, |c: f64| c.max(sup)));
                checked += 1;
            }
        }
    }

    Ok(ContinuousMotionGrid {
        origin: (origin.re, origin.im),
        step,
        nx,
        ny,
        tube_radius,
        samples,
        cross_edge_consistency: cross,
    })
}

fn bfs_order(parents: &[Option<usize>]) -> Vec<usize> {
    let n = parents.len();
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    visited[0] = true;
    let mut frontier = vec![0usize];
    while let Some(v) = frontier.pop() {
        for (i, p) in parents.iter().enumerate() {
            if !visited[i] && *p == Some(v) {
                visited[i] = true;
                order.push(i);
                frontier.push(i);
            }
        }
    }
    order
}

fn segment_in_domain(
    domain: &crate::domain::ParameterDomain,
    a: Complex64,
    b: Complex64,
    tol: &Tolerances,
) -> bool {
    const STEPS: usize = 64;
    for k in 0..=STEPS {
        let t = k as f64 / STEPS as f64;
        if domain.boundary_distance(a + (b - a) * t) < tol.eps_bd / 2.0 {
            return false;
        }
    }
    true
}

/// C1 bump profile, 1 at the center, 0 outside the unit disk.
fn bump(s2: f64) -> f64 {
    if s2 >= 1.0 {
        0.0
    } else {
        let u = 1.0 - s2;
        u * u
    }
}

/// Precomputed parameter-derivatives of the closed-form strands (root
/// strands differentiate implicitly at the tracked position).
fn strand_derivatives(family: &MotionFamily) -> Vec<Option<crate::expr::Expr>> {
    family
        .strands()
        .iter()
        .map(|s| match s {
            StrandSpec::ClosedForm(e) => Some(e.derivative()),
            StrandSpec::AlgebraicRoot { .. } => None,
        })
        .collect()
}

/// Strand velocities at a path time (derivative of position along the path).
fn strand_velocities(
    family: &MotionFamily,
    derivs: &[Option<crate::expr::Expr>],
    tracks: &StrandTracks,
    t: f64,
    tol: &Tolerances,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let m = family.strand_count();
    let lambda = tracks.path().point(t);
    let dlambda = tracks.path().velocity(t);
    let mut pos = Vec::with_capacity(m);
    let mut vel = Vec::with_capacity(m);
    for i in 0..m {
        let p = tracks.position_at(i, t, tol)?;
        let v = if i < 2 {
            Complex64::new(0.0, 0.0)
        } else {
            match (&family.strands()[i - 2], &derivs[i - 2]) {
                (_, Some(d)) => d.eval(lambda) * dlambda,
                (StrandSpec::AlgebraicRoot { coeffs, .. }, None) => {
                    let dz = motion::poly_dz(coeffs, lambda, p);
                    if dz.norm() < 1e-14 {
                        return Err(Error::FlowBlowup {
                            detail: "vanishing root derivative".to_string(),
                        });
                    }
                    -motion::poly_dlambda(coeffs, lambda, p) / dz * dlambda
                }
                (StrandSpec::ClosedForm(_), None) => unreachable!(),
            }
        };
        pos.push(p);
        vel.push(v);
    }
    Ok((pos, vel))
}

struct StageField {
    pos: Vec<Complex64>,
    vel: Vec<Complex64>,
    radius: f64,
}

/// A grid node plus the accumulated derivative of the transported map at it,
/// carried as a real 2x2 matrix `[du/dx, du/dy; dv/dx, dv/dy]`.
#[derive(Clone, Copy)]
struct NodeState {
    z: Complex64,
    j: [f64; 4],
}

fn mat_mul(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

fn mat_scale_add(a: [f64; 4], b: [f64; 4], s: f64) -> [f64; 4] {
    [
        a[0] + s * b[0],
        a[1] + s * b[1],
        a[2] + s * b[2],
        a[3] + s * b[3],
    ]
}

impl StageField {
    fn velocity(&self, z: Complex64) -> Complex64 {
        let mut v = Complex64::new(0.0, 0.0);
        let r2 = self.radius * self.radius;
        for (p, w) in self.pos.iter().zip(self.vel.iter()) {
            let d = z - p;
            let s2 = d.norm_sqr() / r2;
            if s2 < 1.0 {
                v += w * bump(s2);
            }
        }
        v
    }

    /// Velocity and its spatial gradient (real 2x2 matrix), for the tangent
    /// flow.
    fn velocity_and_gradient(&self, z: Complex64) -> (Complex64, [f64; 4]) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut g = [0.0f64; 4];
        let r2 = self.radius * self.radius;
        for (p, w) in self.pos.iter().zip(self.vel.iter()) {
            let d = z - p;
            let s2 = d.norm_sqr() / r2;
            if s2 < 1.0 {
                v += w * bump(s2);
                // d(bump)/du = -2(1-u); grad u = 2(z-p)/r^2
                let dpsi = -2.0 * (1.0 - s2);
                let gx = 2.0 * d.re / r2;
                let gy = 2.0 * d.im / r2;
                g[0] += w.re * dpsi * gx;
                g[1] += w.re * dpsi * gy;
                g[2] += w.im * dpsi * gx;
                g[3] += w.im * dpsi * gy;
            }
        }
        (v, g)
    }
}

fn stage_field(
    family: &MotionFamily,
    derivs: &[Option<crate::expr::Expr>],
    tracks: &StrandTracks,
    t: f64,
    tube_cap: f64,
    tol: &Tolerances,
) -> Result<StageField> {
    let (pos, vel) = strand_velocities(family, derivs, tracks, t, tol)?;
    let sep = euclid_min_separation(&pos);
    Ok(StageField {
        pos,
        vel,
        radius: tube_cap.min(0.5 * sep),
    })
}

/// Grid nodes with accumulated tangent matrices, plus the strand markers.
#[derive(Clone)]
struct FlowState {
    grid: Vec<Complex64>,
    /// Derivative of the composite map at each node (tangent flow).
    tangents: Vec<[f64; 4]>,
    markers: Vec<Complex64>,
}

/// Transport a state along one tree edge with the classical fourth-order
/// integrator, evolving each node's tangent matrix by the variational
/// equation; retries with a halved step on accuracy failure.
fn flow_edge(
    family: &MotionFamily,
    tracks: &StrandTracks,
    state: FlowState,
    tube_radius: f64,
    flow_steps: usize,
    tol: &Tolerances,
) -> Result<(FlowState, f64)> {
    let mut steps = flow_steps.max(16);
    for _attempt in 0..3 {
        match flow_edge_once(family, tracks, &state, tube_radius, steps, tol) {
            Ok(out) => return Ok(out),
            Err(Error::FlowBlowup { .. }) => {
                steps *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    flow_edge_once(family, tracks, &state, tube_radius, steps, tol)
}

fn flow_edge_once(
    family: &MotionFamily,
    tracks: &StrandTracks,
    state: &FlowState,
    tube_radius: f64,
    steps: usize,
    tol: &Tolerances,
) -> Result<(FlowState, f64)> {
    let m = family.strand_count();
    let h = 1.0 / steps as f64;
    let derivs = strand_derivatives(family);
    let mut nodes: Vec<NodeState> = state
        .grid
        .iter()
        .zip(state.tangents.iter())
        .map(|(&z, &j)| NodeState { z, j })
        .collect();
    let mut markers = state.markers.clone();
    for k in 0..steps {
        let t0 = k as f64 * h;
        let f0 = stage_field(family, &derivs, tracks, t0, tube_radius, tol)?;
        let f1 = stage_field(family, &derivs, tracks, t0 + h / 2.0, tube_radius, tol)?;
        let f2 = stage_field(family, &derivs, tracks, t0 + h, tube_radius, tol)?;
        for node in nodes.iter_mut() {
            // coupled RK4 for position and tangent: dz/dt = v(t, z),
            // dJ/dt = Dv(t, z) J
            let (v1, g1) = f0.velocity_and_gradient(node.z);
            let kz1 = v1;
            let kj1 = mat_mul(g1, node.j);

            let (v2, g2) = f1.velocity_and_gradient(node.z + kz1 * (h / 2.0));
            let kz2 = v2;
            let kj2 = mat_mul(g2, mat_scale_add(node.j, kj1, h / 2.0));

            let (v3, g3) = f1.velocity_and_gradient(node.z + kz2 * (h / 2.0));
            let kz3 = v3;
            let kj3 = mat_mul(g3, mat_scale_add(node.j, kj2, h / 2.0));

            let (v4, g4) = f2.velocity_and_gradient(node.z + kz3 * h);
            let kz4 = v4;
            let kj4 = mat_mul(g4, mat_scale_add(node.j, kj3, h));

            node.z += (kz1 + (kz2 + kz3) * 2.0 + kz4) * (h / 6.0);
            for idx in 0..4 {
                node.j[idx] += (kj1[idx] + 2.0 * (kj2[idx] + kj3[idx]) + kj4[idx]) * (h / 6.0);
            }
            if !node.z.re.is_finite() || !node.z.im.is_finite() || node.z.norm() > 1e9 {
                return Err(Error::FlowBlowup {
                    detail: "state escaped during integration".to_string(),
                });
            }
        }
        for z in markers.iter_mut() {
            let k1 = f0.velocity(*z);
            let k2 = f1.velocity(*z + k1 * (h / 2.0));
            let k3 = f1.velocity(*z + k2 * (h / 2.0));
            let k4 = f2.velocity(*z + k3 * h);
            *z += (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
        }
    }
    let mut strand_error = 0.0f64;
    for i in 0..m {
        let target = *tracks.positions(i).last().unwrap();
        strand_error = strand_error.max(chordal_finite(markers[i], target));
    }
    if strand_error >= 1e-6 {
        return Err(Error::FlowBlowup {
            detail: format!("strand transport error {strand_error:.3e}"),
        });
    }
    Ok((
        FlowState {
            grid: nodes.iter().map(|n| n.z).collect(),
            tangents: nodes.iter().map(|n| n.j).collect(),
            markers,
        },
        strand_error,
    ))
}

/// Minimum Jacobian over every cell (the determinant of the transported
/// tangent matrix, taken at all four cell corners) and the Beltrami sup over
/// the nodes.
fn grid_quality(state: &FlowState, nx: usize, ny: usize) -> (f64, f64) {
    let det = |j: &[f64; 4]| j[0] * j[3] - j[1] * j[2];
    let mut jac_min = f64::INFINITY;
    for jj in 0..ny - 1 {
        for ii in 0..nx - 1 {
            for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                jac_min = jac_min.min(det(&state.tangents[(jj + dj) * nx + ii + di]));
            }
        }
    }
    let mut bel_sup = 0.0f64;
    for t in &state.tangents {
        let [a, b, c, d] = *t;
        let fz = Complex64::new(a + d, c - b) / 2.0;
        let fzbar = Complex64::new(a - d, c + b) / 2.0;
        if fz.norm() > 1e-12 {
            bel_sup = bel_sup.max((fzbar / fz).norm());
        }
    }
    (jac_min, bel_sup)
}

// ---------------------------------------------------------------------------
// One-point extension solver
// ---------------------------------------------------------------------------

/// A solved new strand with its certified margin and the extended family.
#[derive(Clone, Debug)]
pub struct NewStrand {
    pub spec: StrandSpec,
    /// Min Euclidean distance from the new strand to every other strand (and
    /// to the admissible-modulus boundary) over the sample set.
    pub margin: f64,
    pub degree: usize,
    pub extended: MotionFamily,
}

/// The polynomial ansatz `zeta + (lambda - x0) * sum c_k lambda^k`; the value
/// constraint at the basepoint is eliminated analytically.
#[derive(Clone, Debug)]
pub struct StrandAnsatz {
    pub zeta: Complex64,
    pub basepoint: Complex64,
    pub coeffs: Vec<Complex64>,
}

impl StrandAnsatz {
    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        let mut poly = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            poly = poly * lambda + c;
        }
        self.zeta + (lambda - self.basepoint) * poly
    }

    /// Lower the ansatz to an expression tree.
    pub fn to_expr(&self) -> Expr {
        let mut poly = Expr::constant(Complex64::new(0.0, 0.0));
        for c in self.coeffs.iter().rev() {
            poly = Expr::Add(
                Box::new(Expr::Mul(Box::new(poly), Box::new(Expr::Lambda))),
                Box::new(Expr::constant(*c)),
            );
        }
        Expr::Add(
            Box::new(Expr::constant(self.zeta)),
            Box::new(Expr::Mul(
                Box::new(Expr::Sub(
                    Box::new(Expr::Lambda),
                    Box::new(Expr::constant(self.basepoint)),
                )),
                Box::new(poly),
            )),
        )
    }
}

struct MarginSamples {
    /// (parameter, existing strand values).
    samples: Vec<(Complex64, Vec<Complex64>)>,
    /// Modulus cap from the chordal floor against infinity.
    max_modulus: f64,
}

impl MarginSamples {
    fn margin_of(&self, ansatz: &StrandAnsatz) -> f64 {
        let mut margin = f64::INFINITY;
        for (lambda, values) in &self.samples {
            let h = ansatz.eval(*lambda);
            if !h.re.is_finite() || !h.im.is_finite() {
                return f64::NEG_INFINITY;
            }
            for v in values {
                margin = margin.min((h - v).norm());
            }
            margin = margin.min(self.max_modulus - h.norm());
        }
        margin
    }
}

fn collect_margin_samples(
    family: &MotionFamily,
    budget: usize,
    tol: &Tolerances,
) -> Result<MarginSamples> {
    let margin_bd = tol.eps_bd.max(4.0 * tol.circle_radius);
    let mut samples = Vec::new();
    let interior = motion::domain_samples(family.domain(), budget, margin_bd);
    for lambda in interior {
        let values = motion::strand_values_at(family, lambda, tol)?;
        samples.push((lambda, values));
    }
    for looppath in family.domain().generators() {
        let tracks = continuation::continue_strands(family, looppath, tol)?;
        const LOOP_SAMPLES: usize = 128;
        for k in 0..=LOOP_SAMPLES {
            let t = k as f64 / LOOP_SAMPLES as f64;
            let lambda = looppath.point(t);
            let mut values = Vec::with_capacity(family.strand_count());
            for i in 0..family.strand_count() {
                values.push(tracks.position_at(i, t, tol)?);
            }
            samples.push((lambda, values));
        }
    }
    let max_modulus = ((2.0 / tol.infinity_floor).powi(2) - 1.0).sqrt();
    Ok(MarginSamples {
        samples,
        max_modulus,
    })
}

/// Nelder-Mead minimization over real coordinate vectors.
fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    scale: f64,
    iterations: usize,
) -> Vec<f64> {
    let n = start.len();
    if n == 0 {
        return start.to_vec();
    }
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    for k in 0..n {
        let mut v = start.to_vec();
        v[k] += scale;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    for _ in 0..iterations {
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let best = idx[0];
        let worst = idx[n];
        let second_worst = idx[n - 1];
        if (values[worst] - values[best]).abs() < 1e-12 {
            break;
        }
        let mut centroid = vec![0.0; n];
        for &i in idx.iter().take(n) {
            for (c, x) in centroid.iter_mut().zip(simplex[i].iter()) {
                *c += x / n as f64;
            }
        }
        let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
            a.iter()
                .zip(b.iter())
                .map(|(x, y)| x + t * (y - x))
                .collect()
        };
        let reflected = lerp(&centroid, &simplex[worst], -1.0);
        let fr = f(&reflected);
        if fr < values[best] {
            let expanded = lerp(&centroid, &simplex[worst], -2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
        } else if fr < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = fr;
        } else {
            let contracted = lerp(&centroid, &simplex[worst], 0.5);
            let fc = f(&contracted);
            if fc < values[worst] {
                simplex[worst] = contracted;
                values[worst] = fc;
            } else {
                let best_point = simplex[best].clone();
                for i in 0..=n {
                    if i != best {
                        simplex[i] = lerp(&best_point, &simplex[i], 0.5);
                        values[i] = f(&simplex[i]);
                    }
                }
            }
        }
    }
    let mut best = 0;
    for i in 1..=n {
        if values[i] < values[best] {
            best = i;
        }
    }
    simplex[best].clone()
}

fn coeffs_from_vec(x: &[f64]) -> Vec<Complex64> {
    x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

const MULTI_STARTS: usize = 16;

/// Solve for a new holomorphic strand through `zeta_new`: maximize the
/// separation margin of a polynomial ansatz over low-discrepancy samples and
/// the generator loops, then recheck the extended family's axioms and
/// monodromy. Failure to find a strand is solver incompleteness, never a
/// refutation of extendability.
pub fn solve_new_strand(
    family: &MotionFamily,
    zeta_new: SpherePoint,
    degree: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<NewStrand> {
    let SpherePoint::Finite(zeta) = zeta_new else {
        return Err(Error::InvalidNewPoint {
            reason: "the new puncture must be finite".to_string(),
        });
    };
    for (i, &p) in family.base().punctures().iter().enumerate() {
        if chordal_finite(zeta, p) <= tol.eps_sep {
            return Err(Error::InvalidNewPoint {
                reason: format!("coincides with base puncture {i}"),
            });
        }
    }
    if !braid::is_trivial_monodromy(family, tol)? {
        return Err(Error::NontrivialMonodromy { generator: 0 });
    }

    let budget = if family.has_algebraic_roots() {
        100
    } else {
        200
    };
    let data = collect_margin_samples(family, budget, tol)?;
    if data.max_modulus - zeta.norm() <= tol.eps_sep {
        return Err(Error::InvalidNewPoint {
            reason: "too close to infinity for the configured floor".to_string(),
        });
    }
    let degree = degree.max(1);
    let x0 = family.domain().basepoint();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<(f64, StrandAnsatz)> = Vec::new();
    for start_idx in 0..MULTI_STARTS {
        let start: Vec<f64> = if start_idx == 0 {
            vec![0.0; 2 * degree]
        } else {
            (0..2 * degree).map(|_| rng.gen_range(-0.2..0.2)).collect()
        };
        let objective = |x: &[f64]| -> f64 {
            let ansatz = StrandAnsatz {
                zeta,
                basepoint: x0,
                coeffs: coeffs_from_vec(x),
            };
            -data.margin_of(&ansatz)
        };
        let solution = nelder_mead(&objective, &start, 0.05, 200 * degree);
        let ansatz = StrandAnsatz {
            zeta,
            basepoint: x0,
            coeffs: coeffs_from_vec(&solution),
        };
        let margin = data.margin_of(&ansatz);
        candidates.push((margin, ansatz));
    }
    // prefer larger margins; on ties prefer smaller coefficients (the
    // simplest strand)
    candidates.sort_by(|a, b| {
        let (ma, mb) = (a.0, b.0);
        if (ma - mb).abs() > 1e-9 {
            mb.partial_cmp(&ma).unwrap()
        } else {
            let na: f64 = a.1.coeffs.iter().map(|c| c.norm_sqr()).sum();
            let nb: f64 = b.1.coeffs.iter().map(|c| c.norm_sqr()).sum();
            na.partial_cmp(&nb).unwrap()
        }
    });

    let best_margin = candidates.first().map(|c| c.0).unwrap_or(f64::NEG_INFINITY);
    let mut extended_obstruction: Option<Error> = None;
    for (margin, ansatz) in candidates {
        if margin < tol.margin_min {
            break;
        }
        let spec = StrandSpec::ClosedForm(ansatz.to_expr());
        let base = family.base().with_appended(zeta, tol)?;
        let mut strands = family.strands().to_vec();
        strands.push(spec.clone());
        let extended = MotionFamily::new(family.domain().clone(), base, strands, tol)?;
        if motion::validate_motion(&extended, 100, tol).is_err() {
            continue;
        }
        match braid::monodromy(&extended, tol) {
            Ok(classes) => {
                if let Some(g) = classes.iter().position(|c| !c.is_trivial()) {
                    extended_obstruction =
                        Some(Error::NontrivialExtendedMonodromy { generator: g });
                    continue;
                }
            }
            Err(_) => continue,
        }
        return Ok(NewStrand {
            spec,
            margin,
            degree,
            extended,
        });
    }
    Err(extended_obstruction.unwrap_or(Error::NoStrandFound {
        degree,
        best_margin,
    }))
}

// ---------------------------------------------------------------------------
// Inductive driver
// ---------------------------------------------------------------------------

/// Log entry for one stage of the inductive extension.
#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub point: (f64, f64),
    pub degree: usize,
    pub margin: f64,
    pub forgetful_checked: bool,
}

/// Add the listed punctures one at a time: each stage solves a new strand,
/// revalidates the axioms, rechecks triviality of the extended monodromy, and
/// verifies forgetful compatibility against the previous stage through the
/// covering model.
pub fn extend_motion_inductive(
    family: &MotionFamily,
    new_points: &[SpherePoint],
    degree_schedule: &[usize],
    seed: u64,
    tol: &Tolerances,
) -> Result<(MotionFamily, Vec<StageReport>)> {
    let schedule: Vec<usize> = if degree_schedule.is_empty() {
        vec![2, 4, 8]
    } else {
        degree_schedule.to_vec()
    };
    let mut current = family.clone();
    let mut reports = Vec::new();
    for (stage, &zeta) in new_points.iter().enumerate() {
        let fail = |cause: Error| Error::StageFailure {
            stage,
            cause: Box::new(cause),
        };
        let mut solved: Option<NewStrand> = None;
        let mut last_err: Option<Error> = None;
        for (di, &d) in schedule.iter().enumerate() {
            match solve_new_strand(&current, zeta, d, seed + stage as u64, tol) {
                Ok(s) => {
                    solved = Some(s);
                    break;
                }
                Err(e @ Error::NoStrandFound { .. })
                | Err(e @ Error::NontrivialExtendedMonodromy { .. }) => {
                    last_err = Some(e);
                    if di + 1 == schedule.len() {
                        break;
                    }
                }
                Err(e) => return Err(fail(e)),
            }
        }
        let solved = match solved {
            Some(s) => s,
            None => return Err(fail(last_err.expect("schedule nonempty"))),
        };

        // forgetful compatibility against the previous stage
        verify_forgetful_compatibility(&current, &solved.extended, tol).map_err(fail)?;

        reports.push(StageReport {
            point: match zeta {
                SpherePoint::Finite(z) => (z.re, z.im),
                SpherePoint::Infinity => (f64::INFINITY, f64::INFINITY),
            },
            degree: solved.degree,
            margin: solved.margin,
            forgetful_checked: true,
        });
        current = solved.extended;
    }
    Ok((current, reports))
}

/// The forgetful map applied to lifts of the extended family must reproduce
/// lifts of the original family, over every generator loop and one open probe
/// path.
pub fn verify_forgetful_compatibility(
    original: &MotionFamily,
    extended: &MotionFamily,
    tol: &Tolerances,
) -> Result<()> {
    let mut probes: Vec<Path> = original.domain().generators().to_vec();
    let margin = tol.eps_bd.max(4.0 * tol.circle_radius);
    if let Some(&lambda) = motion::domain_samples(original.domain(), 1, margin).first() {
        probes.push(
            original
                .domain()
                .route(original.domain().basepoint(), lambda, tol)?,
        );
    }
    for (k, path) in probes.iter().enumerate() {
        let lifted_ext = cover::lift_path(extended, path, tol)?;
        let lifted_orig = cover::lift_path(original, path, tol)?;
        let forgotten = cover::forgetful(&lifted_ext)?;
        if !forgotten.same_point(&lifted_orig, tol) {
            return Err(Error::ValidationFailure {
                axiom: crate::error::MotionAxiom::SingleValuedness,
                detail: format!("forgetful map does not reproduce the original lift on probe {k}"),
                witness: Some(path.end()),
            });
        }
    }
    Ok(())
}
