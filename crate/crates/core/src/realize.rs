//! Realization of equator graphs as ideal polyhedra.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::ads::ein_from_lr;
use crate::circle::{mobius_from_triples, CirclePoint};
use crate::circle_map::DiscreteCircleMap;
use crate::eqgraph::{ChordKind, EquatorGraph};
use crate::error::{Error, Result};
use crate::hull::{convex_hull_points, EdgeKind, IdealPolyhedron};
use crate::lamination::{Leaf, PolyhedralLamination};
use crate::lm;
use crate::quake::{Chirality, EarthquakeMap};
use crate::real::q_to_f64;

#[derive(Clone, Debug)]
pub struct RealizeOptions {
    /// Largest accepted absolute residual.
    pub tol: f64,
    /// Number of solver starts before giving up.
    pub starts: usize,
    pub seed: u64,
    pub patience: usize,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions { tol: 1e-10, starts: 12, seed: 0, patience: 200 }
    }
}

#[derive(Clone, Debug)]
pub struct Realization {
    /// `ξL_i ↦ ξR_i`.
    pub map: DiscreteCircleMap,
    /// Left and right coordinates in vertex order.
    pub left: Vec<CirclePoint>,
    pub right: Vec<CirclePoint>,
    pub polyhedron: IdealPolyhedron,
    pub residual: f64,
    /// Largest deviation between hull dihedral angles and the graph weights.
    pub angle_error: f64,
    pub starts_used: usize,
}

/// Faces cut out of the `k`-gon by non-crossing chords, each in cyclic order.
pub fn faces_from_chords(k: usize, chords: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
    let mut faces = vec![(0..k).collect::<Vec<usize>>()];
    for &(i, j) in chords {
        let f = faces
            .iter()
            .position(|f| f.contains(&i) && f.contains(&j))
            .ok_or_else(|| Error::InvalidGraph(format!("chord ({i}, {j}) crosses another")))?;
        let face = faces.swap_remove(f);
        let (pi, pj) = (face.iter().position(|&v| v == i).unwrap(), face.iter().position(|&v| v == j).unwrap());
        let (lo, hi) = (pi.min(pj), pi.max(pj));
        if hi - lo == 1 || (lo == 0 && hi == face.len() - 1) {
            return Err(Error::InvalidGraph(format!("chord ({i}, {j}) is parallel to an existing edge")));
        }
        let inner = face[lo..=hi].to_vec();
        let mut outer = face[hi..].to_vec();
        outer.extend_from_slice(&face[..=lo]);
        outer.sort();
        faces.push(inner);
        faces.push(outer);
    }
    faces.sort();
    Ok(faces)
}

/// Whether `y` comes before `z` going counterclockwise from `x`.
fn between(k: usize, x: usize, y: usize, z: usize) -> bool {
    (y + k - x) % k < (z + k - x) % k
}

#[derive(Clone, Debug)]
struct Term {
    q: [usize; 4],
    sign: f64,
    target: f64,
}

#[derive(Clone, Debug)]
struct Model {
    terms: Vec<Term>,
}

fn other_vertex(face: &[usize], a: usize, b: usize) -> usize {
    *face.iter().find(|&&v| v != a && v != b).expect("faces have three vertices")
}

impl Model {
    fn new(g: &EquatorGraph) -> Result<Self> {
        let k = g.k();
        let chords = |kind: ChordKind| g.chords.iter().filter(|c| c.kind == kind).map(|c| (c.i, c.j)).collect::<Vec<_>>();
        let fut = faces_from_chords(k, &chords(ChordKind::Plus))?;
        let past = faces_from_chords(k, &chords(ChordKind::Minus))?;
        let find = |faces: &[Vec<usize>], a: usize, b: usize| -> Vec<usize> {
            faces.iter().enumerate().filter(|(_, f)| f.contains(&a) && f.contains(&b)).map(|(i, _)| i).collect()
        };
        let mut terms = Vec::new();
        for i in 0..k {
            let (a, b) = (i, (i + 1) % k);
            let (f, p) = (find(&fut, a, b), find(&past, a, b));
            let (mut c, mut d) = (other_vertex(&fut[f[0]], a, b), other_vertex(&past[p[0]], a, b));
            let mut c_future = true;
            if !between(k, b, c, d) {
                (c, d) = (d, c);
                c_future = false;
            }
            terms.push(Term { q: [a, b, c, d], sign: if c_future { 1.0 } else { -1.0 }, target: q_to_f64(&g.equator[i]) });
        }
        for ch in &g.chords {
            let faces = if ch.kind == ChordKind::Plus { &fut } else { &past };
            let (a, b) = (ch.i.min(ch.j), ch.i.max(ch.j));
            let fs = find(faces, a, b);
            let (mut c, mut d) = (other_vertex(&faces[fs[0]], a, b), other_vertex(&faces[fs[1]], a, b));
            if !between(k, a, c, b) {
                (c, d) = (d, c);
            }
            let sign = if ch.kind == ChordKind::Plus { -1.0 } else { 1.0 };
            terms.push(Term { q: [a, b, c, d], sign, target: q_to_f64(&ch.w) });
        }
        for f in fut.iter().chain(&past) {
            for &v in &f[3..] {
                terms.push(Term { q: [f[0], f[1], f[2], v], sign: 2.0, target: 0.0 });
            }
        }
        Ok(Model { terms })
    }

    fn residuals(&self, l: &[f64], r: &[f64]) -> Vec<f64> {
        self.terms
            .iter()
            .map(|t| {
                let s = (sigma(l, t.q) - sigma(r, t.q)) / 2.0;
                t.sign * s - t.target
            })
            .collect()
    }
}

fn lift(t: f64) -> [f64; 2] {
    [(PI * t).sin(), (PI * t).cos()]
}

fn sigma(t: &[f64], q: [usize; 4]) -> f64 {
    let [a, b, c, d] = q.map(|i| lift(t[i]));
    let w = |x: [f64; 2], y: [f64; 2]| x[0] * y[1] - x[1] * y[0];
    (w(a, d) * w(b, c) / (w(b, d) * w(a, c))).abs().ln()
}

/// Positions on three arcs between pinned vertices, as log-gaps relative to each arc's first gap.
struct Segments {
    segs: Vec<(usize, usize, Vec<usize>)>,
}

impl Segments {
    fn new(k: usize, pins: [usize; 3]) -> Self {
        let segs = (0..3)
            .map(|s| {
                let (a, b) = (pins[s], pins[(s + 1) % 3]);
                let idx = (1..(b + k - a) % k).map(|j| (a + j) % k).collect();
                (a, b, idx)
            })
            .collect();
        Segments { segs }
    }

    fn params(&self, pos: &[f64]) -> Vec<f64> {
        let mut p = Vec::new();
        for (a, b, idx) in &self.segs {
            let pts: Vec<f64> = std::iter::once(pos[*a]).chain(idx.iter().map(|&i| pos[i])).chain(std::iter::once(pos[*b])).collect();
            let gaps: Vec<f64> = pts.windows(2).map(|w| (w[1] - w[0]).rem_euclid(1.0).ln()).collect();
            p.extend(gaps[1..].iter().map(|g| g - gaps[0]));
        }
        p
    }

    fn positions(&self, p: &[f64], base: &[f64]) -> Vec<f64> {
        let mut out = base.to_vec();
        let mut at = 0;
        for (a, b, idx) in &self.segs {
            let m = idx.len();
            let lg: Vec<f64> = std::iter::once(0.0).chain(p[at..at + m].iter().copied()).collect();
            at += m;
            let mx = lg.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let w: Vec<f64> = lg.iter().map(|x| (x - mx).exp()).collect();
            let z: f64 = w.iter().sum();
            let len = (base[*b] - base[*a]).rem_euclid(1.0);
            let mut acc = 0.0;
            for (i, wi) in idx.iter().zip(&w) {
                acc += wi / z;
                out[*i] = (base[*a] + len * acc).rem_euclid(1.0);
            }
        }
        out
    }
}

fn gauge(pos: &[f64], pins: [usize; 3]) -> Result<Vec<f64>> {
    let pts: Vec<CirclePoint> = pos.iter().map(|&t| CirclePoint::from_turns_f64(t)).collect();
    let dst = [0.0, 0.25, 0.5].map(CirclePoint::from_turns_f64);
    let m = mobius_from_triples([&pts[pins[0]], &pts[pins[1]], &pts[pins[2]]], [&dst[0], &dst[1], &dst[2]])?;
    Ok(pts.iter().map(|p| m.apply(p).turns_f64()).collect())
}

fn warm_start(g: &EquatorGraph, pins: [usize; 3]) -> Result<(Vec<f64>, Vec<f64>)> {
    let k = g.k();
    let t0: Vec<f64> = (0..k).map(|i| i as f64 / k as f64).collect();
    let at = |i: usize| CirclePoint::from_turns_f64(t0[i]);
    let leaves = g
        .chords
        .iter()
        .filter(|c| c.kind == ChordKind::Plus)
        .map(|c| Leaf::new(at(c.i), at(c.j), 2.0 * q_to_f64(&c.w)))
        .collect::<Result<Vec<_>>>()?;
    let e = EarthquakeMap::new(PolyhedralLamination::new_unchecked(leaves, true), Chirality::Right, CirclePoint::from_turns_f64(0.5 / k as f64))?;
    let r0: Vec<f64> = (0..k).map(|i| crate::circle_map::CircleMap::eval(&e, &at(i)).map(|p| p.turns_f64())).collect::<Result<_>>()?;
    Ok((gauge(&t0, pins)?, gauge(&r0, pins)?))
}

fn check_combinatorics(g: &EquatorGraph, p: &IdealPolyhedron) -> Result<f64> {
    if p.flat || !p.equator_is_cycle() {
        return Err(Error::CombinatoricsMismatch("equator differs from the vertex cycle".into()));
    }
    let k = g.k();
    let norm = |i: usize, j: usize| (i.min(j), i.max(j));
    for (kind, ek) in [(ChordKind::Plus, EdgeKind::BendFuture), (ChordKind::Minus, EdgeKind::BendPast)] {
        let want: BTreeSet<(usize, usize)> = g.chords.iter().filter(|c| c.kind == kind).map(|c| norm(c.i, c.j)).collect();
        let got: BTreeSet<(usize, usize)> = p.edges.iter().filter(|e| e.kind == ek).map(|e| (e.i, e.j)).collect();
        if want != got {
            return Err(Error::CombinatoricsMismatch(format!("{} chords {want:?} but hull has {got:?}", kind.name())));
        }
    }
    let mut err: f64 = 0.0;
    for e in &p.edges {
        let a = e.angle.ok_or(Error::DegenerateEdge(e.i, e.j))?;
        let target = if e.kind == EdgeKind::Equator {
            let i = if (e.j + k - e.i) % k == 1 { e.i } else { e.j };
            q_to_f64(&g.equator[i])
        } else {
            let c = g.chords.iter().find(|c| norm(c.i, c.j) == (e.i, e.j)).unwrap();
            q_to_f64(&c.w)
        };
        err = err.max((a - target).abs());
    }
    Ok(err)
}

/// Finds boundary points whose convex hull has the graph's combinatorics and dihedral angles.
pub fn realize(g: &EquatorGraph, opts: &RealizeOptions) -> Result<Realization> {
    let report = g.check_conditions();
    if !report.passes() {
        return Err(Error::InvalidGraph(format!("conditions fail: {:?}", report.structure)));
    }
    let k = g.k();
    if k < 4 {
        return Err(Error::InvalidGraph("at least four vertices are needed".into()));
    }
    if let Some(c) = g.chords.iter().find(|c| (c.j + k - c.i) % k == 1 || (c.i + k - c.j) % k == 1) {
        return Err(Error::InvalidGraph(format!("chord ({}, {}) joins adjacent vertices", c.i, c.j)));
    }
    let model = Model::new(g)?;
    let pins = [0, k / 3, (2 * k) / 3];
    let seg = Segments::new(k, pins);
    let (l0, r0) = warm_start(g, pins)?;
    let nl = k - 3;
    let f = |p: &[f64]| model.residuals(&seg.positions(&p[..nl], &l0), &seg.positions(&p[nl..], &r0));
    let p0: Vec<f64> = seg.params(&l0).into_iter().chain(seg.params(&r0)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<lm::Fit> = None;
    let mut used = 0;
    for attempt in 0..opts.starts.max(1) {
        used = attempt + 1;
        let start: Vec<f64> = if attempt == 0 {
            p0.clone()
        } else {
            let noise = Normal::new(0.0, 0.3 * attempt as f64).unwrap();
            p0.iter().map(|x| x + noise.sample(&mut rng)).collect()
        };
        let fit = lm::minimize(&f, start, opts.patience);
        let better = best.as_ref().is_none_or(|b| fit.residual < b.residual);
        if better {
            best = Some(fit);
        }
        if best.as_ref().unwrap().residual < opts.tol {
            break;
        }
    }
    let best = best.unwrap();
    if !(best.residual < opts.tol) {
        return Err(Error::NonConvergence { residual: best.residual });
    }
    let (l, r) = (seg.positions(&best.x[..nl], &l0), seg.positions(&best.x[nl..], &r0));
    let pts: Vec<_> = l.iter().zip(&r).map(|(&a, &b)| ein_from_lr(CirclePoint::from_turns_f64(a), CirclePoint::from_turns_f64(b))).collect();
    let map = DiscreteCircleMap::new(pts.iter().map(|p| (p.l.clone(), p.r.clone())).collect())?;
    let polyhedron = convex_hull_points(&pts)?;
    let angle_error = check_combinatorics(g, &polyhedron)?;
    let (left, right) = pts.iter().map(|p| (p.l.clone(), p.r.clone())).unzip();
    Ok(Realization { map, left, right, polyhedron, residual: best.residual, angle_error, starts_used: used })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faces_of_a_fan() {
        let f = faces_from_chords(6, &[(0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(f, vec![vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 4], vec![0, 4, 5]]);
        let q = faces_from_chords(6, &[(1, 4)]).unwrap();
        assert_eq!(q, vec![vec![0, 1, 4, 5], vec![1, 2, 3, 4]]);
        assert!(faces_from_chords(4, &[(0, 2), (1, 3)]).is_err());
    }

    #[test]
    fn segment_parameters_round_trip() {
        let pos = [0.0, 0.1, 0.25, 0.3, 0.45, 0.5, 0.7, 0.9];
        let s = Segments::new(8, [0, 2, 5]);
        let p = s.params(&pos);
        assert_eq!(p.len(), 5);
        let back = s.positions(&p, &pos);
        for (a, b) in pos.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
