//! Ideal polyhedra spanned by acausal boundary configurations.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ads::{consistent_lift, disjoint_spacelike_plane, ein_from_lr, form, hyperplane_normal, norm4, scale4, EinPoint, SpacelikePlane, Vec4};
use crate::circle::CirclePoint;
use crate::circle_map::DiscreteCircleMap;
use crate::eqgraph::{Chord, ChordKind, EquatorGraph, Vertex, VertexType};
use crate::lamination::{Leaf, PolyhedralLamination};
use crate::real::{qi, Q};
use crate::error::{Error, Result};
use crate::hull3::{hull3, Hull3};

/// Dihedral angles below this are merged into one face.
pub const COPLANAR_ANGLE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Equator,
    BendFuture,
    BendPast,
}

#[derive(Clone, Debug)]
pub struct Face {
    /// Vertex indices in cyclic order.
    pub vertices: Vec<usize>,
    /// Outward normal, unit when the face is spacelike.
    pub normal: Vec4,
    pub future: bool,
    pub lightlike: bool,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub faces: [usize; 2],
    pub kind: EdgeKind,
    /// Exterior dihedral angle; negative on the equator, absent at lightlike faces.
    pub angle: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct IdealPolyhedron {
    pub vertices: Vec<EinPoint>,
    pub lifts: Vec<Vec4>,
    pub chart: SpacelikePlane,
    pub faces: Vec<Face>,
    pub edges: Vec<Edge>,
    pub flat: bool,
}

fn time_field(x: &Vec4) -> Vec4 {
    [-x[1], x[0], 0.0, 0.0]
}

fn make_face(vertices: Vec<usize>, lifts: &[Vec4]) -> Face {
    let k = vertices.len();
    let pick = [vertices[0], vertices[k / 3], vertices[(2 * k) / 3]];
    let mut n = hyperplane_normal(&[lifts[pick[0]], lifts[pick[1]], lifts[pick[2]]]);
    let other = (0..lifts.len())
        .filter(|i| !vertices.contains(i))
        .max_by(|&a, &b| form(&n, &lifts[a]).abs().total_cmp(&form(&n, &lifts[b]).abs()));
    if let Some(o) = other {
        if form(&n, &lifts[o]) > 0.0 {
            n = scale4(&n, -1.0);
        }
    }
    orient_face(vertices, n, lifts)
}

fn orient_face(vertices: Vec<usize>, n: Vec4, lifts: &[Vec4]) -> Face {
    let q = form(&n, &n);
    let e = norm4(&n);
    let lightlike = q > -1e-9 * e * e;
    let normal = if lightlike { scale4(&n, 1.0 / e) } else { scale4(&n, 1.0 / (-q).sqrt()) };
    let bary = vertices.iter().fold([0.0; 4], |acc, &i| crate::ads::add4(&acc, &lifts[i]));
    let future = form(&normal, &time_field(&bary)) > 0.0;
    Face { vertices, normal, future, lightlike }
}

fn pair_angle(f: &Face, g: &Face) -> Option<f64> {
    if f.lightlike || g.lightlike {
        return None;
    }
    let a = form(&f.normal, &g.normal).abs().max(1.0).acosh();
    Some(if f.future == g.future { a } else { -a })
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
}

fn affine_coordinates(lifts: &[Vec4], n: &Vec4) -> Vec<[f64; 3]> {
    let mut basis: Vec<Vec4> = Vec::new();
    for k in 0..4 {
        let mut e = [0.0; 4];
        e[k] = 1.0;
        let mut b = crate::ads::add4(&e, &scale4(n, form(&e, n)));
        for c in &basis {
            let d: f64 = (0..4).map(|i| b[i] * c[i]).sum();
            b = crate::ads::sub4(&b, &scale4(c, d));
        }
        let len = norm4(&b);
        if len > 1e-6 && basis.len() < 3 {
            basis.push(scale4(&b, 1.0 / len));
        }
    }
    lifts
        .iter()
        .map(|v| {
            let h = form(v, n);
            [form(v, &basis[0]) / h, form(v, &basis[1]) / h, form(v, &basis[2]) / h]
        })
        .collect()
}

fn is_rank_deficient(lifts: &[Vec4]) -> bool {
    let m = nalgebra::DMatrix::from_fn(lifts.len(), 4, |i, j| lifts[i][j] / norm4(&lifts[i]));
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    lifts.len() < 4 || min <= 1e-10 * max
}

fn flat_polyhedron(vertices: Vec<EinPoint>, lifts: Vec<Vec4>, chart: SpacelikePlane) -> IdealPolyhedron {
    let k = vertices.len();
    let all: Vec<usize> = (0..k).collect();
    let n = hyperplane_normal(&[lifts[0], lifts[k / 3], lifts[(2 * k) / 3]]);
    let f = orient_face(all.clone(), n, &lifts);
    let (fut, past) = if f.future {
        (f.clone(), orient_face(all, scale4(&f.normal, -1.0), &lifts))
    } else {
        (orient_face(all, scale4(&f.normal, -1.0), &lifts), f.clone())
    };
    let edges = (0..k)
        .map(|i| Edge { i: i.min((i + 1) % k), j: i.max((i + 1) % k), faces: [0, 1], kind: EdgeKind::Equator, angle: Some(0.0) })
        .collect();
    IdealPolyhedron { vertices, lifts, chart, faces: vec![fut, past], edges, flat: true }
}

/// Ideal polyhedron spanned by the graph of an order-preserving map.
pub fn convex_hull(u: &DiscreteCircleMap) -> Result<IdealPolyhedron> {
    let pts: Vec<EinPoint> = u.pairs().map(|(x, y)| ein_from_lr(x.clone(), y.clone())).collect();
    convex_hull_points(&pts)
}

/// Ideal polyhedron spanned by boundary points given in cyclic order.
pub fn convex_hull_points(points: &[EinPoint]) -> Result<IdealPolyhedron> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints { need: 3, got: points.len() });
    }
    consistent_lift(points)?;
    let chart = disjoint_spacelike_plane(points).map_err(|e| Error::NotAcausal(e.to_string()))?;
    let lifts = consistent_lift(points)?;
    let vertices = points.to_vec();
    if is_rank_deficient(&lifts) {
        return Ok(flat_polyhedron(vertices, lifts, chart));
    }
    let tris = match hull3(&affine_coordinates(&lifts, &chart.n), 1e-13) {
        Hull3::Flat => return Ok(flat_polyhedron(vertices, lifts, chart)),
        Hull3::Solid(t) => t,
    };
    let used: BTreeSet<usize> = tris.iter().flatten().copied().collect();
    if used.len() != points.len() {
        return Err(Error::DegenerateInput("some points are not extreme".into()));
    }
    let tri_faces: Vec<Face> = tris.iter().map(|t| {
        let mut v = t.to_vec();
        v.sort();
        make_face(v, &lifts)
    }).collect();
    let mut owners: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (f, t) in tris.iter().enumerate() {
        for e in 0..3 {
            let (a, b) = (t[e], t[(e + 1) % 3]);
            owners.entry((a.min(b), a.max(b))).or_default().push(f);
        }
    }
    let mut dsu = Dsu((0..tris.len()).collect());
    for fs in owners.values() {
        if let [f, g] = fs[..] {
            let (a, b) = (&tri_faces[f], &tri_faces[g]);
            if a.future == b.future && pair_angle(a, b).is_some_and(|x| x.abs() < COPLANAR_ANGLE) {
                let (rf, rg) = (dsu.find(f), dsu.find(g));
                dsu.0[rf] = rg;
            }
        }
    }
    let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (f, t) in tris.iter().enumerate() {
        groups.entry(dsu.find(f)).or_default().extend(t.iter().copied());
    }
    let roots: Vec<usize> = groups.keys().copied().collect();
    let mut faces: Vec<Face> = groups.into_values().map(|vs| make_face(vs.into_iter().collect(), &lifts)).collect();
    let mut order: Vec<usize> = (0..faces.len()).collect();
    order.sort_by(|&a, &b| faces[a].vertices.cmp(&faces[b].vertices));
    let rank: BTreeMap<usize, usize> = order.iter().enumerate().map(|(r, &f)| (roots[f], r)).collect();
    faces = order.iter().map(|&f| faces[f].clone()).collect();
    let mut edges = Vec::new();
    for (&(i, j), fs) in &owners {
        if fs.len() != 2 {
            return Err(Error::DegenerateInput(format!("edge ({i}, {j}) is not shared by two faces")));
        }
        let (f, g) = (rank[&dsu.find(fs[0])], rank[&dsu.find(fs[1])]);
        if f == g {
            continue;
        }
        let (a, b) = (&faces[f], &faces[g]);
        let kind = match (a.future, b.future) {
            (true, true) => EdgeKind::BendFuture,
            (false, false) => EdgeKind::BendPast,
            _ => EdgeKind::Equator,
        };
        edges.push(Edge { i, j, faces: [f.min(g), f.max(g)], kind, angle: pair_angle(a, b) });
    }
    Ok(IdealPolyhedron { vertices, lifts, chart, faces, edges, flat: false })
}

impl IdealPolyhedron {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Whether the equatorial edges are exactly the consecutive pairs.
    pub fn equator_is_cycle(&self) -> bool {
        let k = self.len();
        let eq: BTreeSet<(usize, usize)> =
            self.edges.iter().filter(|e| e.kind == EdgeKind::Equator).map(|e| (e.i, e.j)).collect();
        let cyc: BTreeSet<(usize, usize)> = (0..k).map(|i| (i.min((i + 1) % k), i.max((i + 1) % k))).collect();
        eq == cyc
    }

    /// Vertex positions in the affine chart.
    pub fn chart_coordinates(&self) -> Vec<[f64; 3]> {
        affine_coordinates(&self.lifts, &self.chart.n)
    }

    pub fn faces_on(&self, future: bool) -> impl Iterator<Item = (usize, &Face)> {
        self.faces.iter().enumerate().filter(move |(_, f)| f.future == future)
    }
}

/// Exterior dihedral angle of every edge.
pub fn dihedral_angles(p: &IdealPolyhedron) -> Result<Vec<(usize, usize, f64)>> {
    p.edges
        .iter()
        .map(|e| e.angle.map(|a| (e.i, e.j, a)).ok_or(Error::DegenerateEdge(e.i, e.j)))
        .collect()
}

/// One boundary component developed onto the circle.
#[derive(Clone, Debug)]
pub struct PleatedBoundary {
    pub future: bool,
    /// Developed position of every vertex.
    pub positions: Vec<CirclePoint>,
    /// Bending lamination, leaf `n` joining the vertex pair `edges[n]`.
    pub lamination: PolyhedralLamination,
    pub edges: Vec<(usize, usize)>,
    /// `ξL_i ↦ positions[i]`.
    pub dev: DiscreteCircleMap,
}

/// Shear between the faces through `c` and `d` across the edge `ab`.
fn shear(lifts: &[Vec4], a: usize, b: usize, c: usize, d: usize) -> f64 {
    let f = |i: usize, j: usize| form(&lifts[i], &lifts[j]);
    0.5 * ((f(a, d) * f(b, c)) / (f(b, d) * f(a, c))).abs().ln()
}

/// The point `d` across the edge `ab` from `c`, at shear `s`.
fn place(a: [f64; 2], b: [f64; 2], c: [f64; 2], s: f64) -> [f64; 2] {
    let mut m = [a[1], -a[0], b[1], -b[0]];
    let mc = [m[0] * c[0] + m[1] * c[1], m[2] * c[0] + m[3] * c[1]];
    let k = -mc[1] / mc[0];
    m[0] *= k;
    m[1] *= k;
    let y = [s.exp(), 1.0];
    let det = m[0] * m[3] - m[1] * m[2];
    [(m[3] * y[0] - m[1] * y[1]) / det, (-m[2] * y[0] + m[0] * y[1]) / det]
}

/// Develops the future or past boundary, placing the lowest face at its left coordinates.
pub fn develop_boundary(p: &IdealPolyhedron, future: bool) -> Result<PleatedBoundary> {
    let side = if future { "future" } else { "past" };
    let faces: Vec<usize> = p.faces_on(future).map(|(i, _)| i).collect();
    let bends: Vec<&Edge> = p
        .edges
        .iter()
        .filter(|e| e.kind == if future { EdgeKind::BendFuture } else { EdgeKind::BendPast })
        .collect();
    if faces.is_empty() || bends.len() + 1 != faces.len() {
        return Err(Error::NonTreeAdjacency(side.into()));
    }
    let mut pos: Vec<Option<[f64; 2]>> = vec![None; p.len()];
    let root = faces[0];
    for &v in &p.faces[root].vertices {
        pos[v] = Some(p.vertices[v].l.homogeneous());
    }
    let mut seen = BTreeSet::from([root]);
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(f) = queue.pop_front() {
        for e in bends.iter().filter(|e| e.faces.contains(&f)) {
            let g = if e.faces[0] == f { e.faces[1] } else { e.faces[0] };
            if !seen.insert(g) {
                continue;
            }
            let c = *p.faces[f].vertices.iter().find(|&&v| v != e.i && v != e.j).expect("faces have three vertices");
            let (a, b, hc) = (pos[e.i].unwrap(), pos[e.j].unwrap(), pos[c].unwrap());
            for &d in p.faces[g].vertices.iter().filter(|&&v| v != e.i && v != e.j) {
                pos[d] = Some(place(a, b, hc, shear(&p.lifts, e.i, e.j, c, d)));
            }
            queue.push_back(g);
        }
    }
    if seen.len() != faces.len() || pos.iter().any(|x| x.is_none()) {
        return Err(Error::NonTreeAdjacency(side.into()));
    }
    let positions: Vec<CirclePoint> = pos.into_iter().map(|h| {
        let h = h.unwrap();
        CirclePoint::from_homogeneous(h[0], h[1])
    }).collect();
    let mut leaves = Vec::with_capacity(bends.len());
    for e in &bends {
        let w = e.angle.ok_or(Error::DegenerateEdge(e.i, e.j))?.abs();
        leaves.push(Leaf::new(positions[e.i].clone(), positions[e.j].clone(), w)?);
    }
    let dev = DiscreteCircleMap::new(p.vertices.iter().map(|v| v.l.clone()).zip(positions.iter().cloned()).collect())?;
    Ok(PleatedBoundary {
        future,
        positions,
        lamination: PolyhedralLamination::new_unchecked(leaves, true),
        edges: bends.iter().map(|e| (e.i, e.j)).collect(),
        dev,
    })
}

#[derive(Clone, Debug)]
pub struct Bending {
    pub minus: PleatedBoundary,
    pub plus: PleatedBoundary,
}

/// Bending laminations of the past and future boundary components.
pub fn bending_laminations(p: &IdealPolyhedron) -> Result<Bending> {
    Ok(Bending { minus: develop_boundary(p, false)?, plus: develop_boundary(p, true)? })
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (i, x) in u.iter().enumerate() {
        css += x;
        let t = (css - 1.0) / (i + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

fn combine(lifts: &[Vec4], vs: &[usize], w: &[f64]) -> Vec4 {
    vs.iter().zip(w).fold([0.0; 4], |acc, (&v, x)| crate::ads::add4(&acc, &scale4(&lifts[v], *x)))
}

/// Squared cosine between two face points and its gradient in barycentric coordinates.
fn cosine_and_gradient(p: &IdealPolyhedron, f: &[usize], g: &[usize], x: &[f64]) -> Option<(f64, Vec<f64>)> {
    let (al, be) = (&x[..f.len()], &x[f.len()..]);
    let (u, v) = (combine(&p.lifts, f, al), combine(&p.lifts, g, be));
    let (uv, uu, vv) = (form(&u, &v), form(&u, &u), form(&v, &v));
    if uu > -1e-300 || vv > -1e-300 || uv == 0.0 {
        return (uu < 0.0 && vv < 0.0).then(|| (0.0, vec![0.0; x.len()]));
    }
    let r = uv * uv / (uu * vv);
    let part = |vs: &[usize], own: &Vec4, other: &Vec4, own_sq: f64| -> Vec<f64> {
        vs.iter().map(|&i| r * (2.0 * form(&p.lifts[i], other) / uv - 2.0 * form(&p.lifts[i], own) / own_sq)).collect()
    };
    let mut grad = part(f, &u, &v, uu);
    grad.extend(part(g, &v, &u, vv));
    Some((r, grad))
}

fn starts(n: usize) -> Vec<Vec<f64>> {
    let mut s = vec![vec![1.0 / n as f64; n]];
    for i in 0..n {
        let mut v = vec![0.0; n];
        v[i] = 0.5;
        v[(i + 1) % n] = 0.5;
        s.push(v);
    }
    s
}

fn minimize_pair(p: &IdealPolyhedron, f: usize, g: usize) -> f64 {
    let (fv, gv) = (&p.faces[f].vertices, &p.faces[g].vertices);
    let (nf, ng) = (fv.len(), gv.len());
    let (bf, bg) = (vec![1.0 / nf as f64; nf], vec![1.0 / ng as f64; ng]);
    let inits = starts(nf).into_iter().map(|a| (a, bg.clone())).chain(starts(ng).into_iter().skip(1).map(|b| (bf.clone(), b)));
    let mut best = f64::INFINITY;
    for (sa, sb) in inits {
        let mut x: Vec<f64> = sa.iter().chain(&sb).copied().collect();
        let Some((mut fx, mut grad)) = cosine_and_gradient(p, fv, gv, &x) else { continue };
        let mut step = 0.1;
        for _ in 0..2000 {
            if fx < 1e-30 {
                break;
            }
            let mut moved = false;
            while step > 1e-14 {
                let y: Vec<f64> = x.iter().zip(&grad).map(|(a, g)| a - step * g).collect();
                let mut y2 = project_simplex(&y[..nf]);
                y2.extend(project_simplex(&y[nf..]));
                match cosine_and_gradient(p, fv, gv, &y2) {
                    Some((fy, gy)) if fy < fx => {
                        moved = fx - fy > 1e-14 * fx;
                        (x, fx, grad) = (y2, fy, gy);
                        step *= 2.0;
                        break;
                    }
                    _ => step *= 0.5,
                }
            }
            if !moved {
                break;
            }
        }
        best = best.min(fx);
    }
    best
}

/// Largest timelike distance between a past and a future face point.
pub fn width(p: &IdealPolyhedron) -> f64 {
    if p.flat {
        return 0.0;
    }
    let past: Vec<usize> = p.faces_on(false).map(|(i, _)| i).collect();
    let fut: Vec<usize> = p.faces_on(true).map(|(i, _)| i).collect();
    let pairs: Vec<(usize, usize)> = past.iter().flat_map(|&a| fut.iter().map(move |&b| (a, b))).collect();
    let m = pairs.into_par_iter().map(|(a, b)| minimize_pair(p, a, b)).reduce(|| f64::INFINITY, f64::min);
    m.max(0.0).sqrt().min(1.0).acos()
}

/// The equator graph of a polyhedron, with dihedral angles as weights.
pub fn graph_from_polyhedron(p: &IdealPolyhedron) -> Result<EquatorGraph> {
    if !p.equator_is_cycle() {
        return Err(Error::CombinatoricsMismatch("equator is not the vertex cycle".into()));
    }
    let to_q = |x: f64| Q::from_float(x).expect("finite angle");
    let mut chords = Vec::new();
    for e in p.edges.iter().filter(|e| e.kind != EdgeKind::Equator) {
        let a = e.angle.ok_or(Error::DegenerateEdge(e.i, e.j))?;
        let kind = if e.kind == EdgeKind::BendFuture { ChordKind::Plus } else { ChordKind::Minus };
        chords.push(Chord { i: e.i, j: e.j, kind, w: to_q(a) });
    }
    let sign = |i: usize| if i % 2 == 0 { 1 } else { -1 };
    let defect: Q = chords.iter().map(|c| &c.w * qi(sign(c.i) + sign(c.j))).sum();
    if p.len() % 2 == 0 && !defect.is_zero() {
        if let Some(c) = chords.iter_mut().find(|c| c.i % 2 == c.j % 2) {
            c.w -= defect / qi(2 * sign(c.i));
        }
    }
    let k = p.len();
    let equator: Vec<Q> = (0..k)
        .map(|i| {
            let e = p.edges.iter().find(|e| (e.i, e.j) == (i.min((i + 1) % k), i.max((i + 1) % k))).unwrap();
            to_q(e.angle.unwrap_or(0.0))
        })
        .collect();
    let vertices = (0..k).map(|i| Vertex { pos: p.vertices[i].l.clone(), ty: VertexType::Untyped }).collect();
    let mut g = EquatorGraph { vertices, equator: equator.clone(), chords };
    g.resolve_equator_toward(Some(&equator))?;
    Ok(g)
}

#[derive(Clone, Debug, Serialize)]
pub struct HullDiagnostics {
    pub vertices: usize,
    pub faces_future: usize,
    pub faces_past: usize,
    pub edges: Vec<(usize, usize, EdgeKind, Option<f64>)>,
    pub vertex_angle_sums: Vec<f64>,
    pub chart_margin: f64,
    pub flat: bool,
    pub width: f64,
}

pub fn hull_diagnostics(p: &IdealPolyhedron) -> HullDiagnostics {
    let mut sums = vec![0.0; p.len()];
    for e in &p.edges {
        let a = e.angle.unwrap_or(f64::NAN);
        sums[e.i] += a;
        sums[e.j] += a;
    }
    HullDiagnostics {
        vertices: p.len(),
        faces_future: p.faces_on(true).count(),
        faces_past: p.faces_on(false).count(),
        edges: p.edges.iter().map(|e| (e.i, e.j, e.kind, e.angle)).collect(),
        vertex_angle_sums: sums,
        chart_margin: crate::ads::chart_margin(&p.chart, &p.lifts),
        flat: p.flat,
        width: width(p),
    }
}
