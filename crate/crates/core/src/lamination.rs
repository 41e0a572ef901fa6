//! Finite measured laminations of the hyperbolic plane.

use std::cmp::Ordering;
use std::f64::consts::PI;

use ordered_float::OrderedFloat;
use pathfinding::prelude::{kuhn_munkres_min, Matrix};

use crate::circle::{
    circle_distance_turns, common_perpendicular_length, geodesic_relation, ideal_side, in_open_arc, minkowski,
    position_cmp, segment_side, CirclePoint, Geodesic, GeodesicRelation, HypPoint, Side,
};
use crate::circle_map::{is_cyclically_ordered, CircleMap};
use crate::error::{Error, Result};
use crate::real::{Real, Q};

#[derive(Clone, Debug)]
pub struct Leaf {
    pub g: Geodesic,
    pub w: Real,
}

impl Leaf {
    pub fn new(a: CirclePoint, b: CirclePoint, w: impl Into<Real>) -> Result<Self> {
        Ok(Leaf { g: Geodesic::new(a, b)?, w: w.into() })
    }
}

#[derive(Clone, Debug, Default)]
pub struct PolyhedralLamination {
    pub leaves: Vec<Leaf>,
    /// Whether distinct leaves may share an endpoint.
    pub allow_shared: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub crossing: Vec<(usize, usize)>,
    pub shared: Vec<(usize, usize)>,
    pub duplicate: Vec<(usize, usize)>,
    pub nonpositive: Vec<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.crossing.is_empty() && self.shared.is_empty() && self.duplicate.is_empty() && self.nonpositive.is_empty()
    }
}

/// Geodesic segment or ray in the hyperbolic plane.
#[derive(Clone, Debug)]
pub enum GeodesicSegment {
    Segment(HypPoint, HypPoint),
    Ray(HypPoint, CirclePoint),
}

impl PolyhedralLamination {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Validated constructor.
    pub fn new(leaves: Vec<Leaf>, allow_shared: bool) -> Result<Self> {
        let lam = PolyhedralLamination { leaves, allow_shared };
        let r = lam.validate();
        if !r.is_valid() {
            return Err(Error::InvalidLamination(describe(&r)));
        }
        Ok(lam)
    }

    pub fn new_unchecked(leaves: Vec<Leaf>, allow_shared: bool) -> Self {
        PolyhedralLamination { leaves, allow_shared }
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        for (i, l) in self.leaves.iter().enumerate() {
            if !l.w.is_positive() {
                r.nonpositive.push(i);
            }
            for (j, m) in self.leaves.iter().enumerate().skip(i + 1) {
                if l.g.same_as(&m.g) {
                    r.duplicate.push((i, j));
                    continue;
                }
                match geodesic_relation(&l.g, &m.g) {
                    GeodesicRelation::Cross => r.crossing.push((i, j)),
                    GeodesicRelation::SharedEndpoint if !self.allow_shared => r.shared.push((i, j)),
                    _ => {}
                }
            }
        }
        r
    }

    pub fn total_weight(&self) -> Real {
        self.leaves.iter().map(|l| l.w.clone()).sum()
    }

    pub fn scaled(&self, k: &Q) -> Self {
        let leaves = self.leaves.iter().map(|l| Leaf { g: l.g.clone(), w: l.w.scale(k) }).collect();
        PolyhedralLamination { leaves, allow_shared: self.allow_shared }
    }

    /// Distinct leaf endpoints in counterclockwise order from turn 0.
    pub fn endpoints(&self) -> Vec<CirclePoint> {
        sorted_unique(self.leaves.iter().flat_map(|l| [l.g.a.clone(), l.g.b.clone()]))
    }

    pub fn intersection_with_geodesic(&self, g: &Geodesic) -> Result<Real> {
        let mut total = Real::zero();
        for l in &self.leaves {
            if l.g.has_endpoint(&g.a) || l.g.has_endpoint(&g.b) {
                return Err(Error::EndpointCollision);
            }
            if geodesic_relation(&l.g, g) == GeodesicRelation::Cross {
                total = total + l.w.clone();
            }
        }
        Ok(total)
    }

    pub fn intersection_with_segment(&self, s: &GeodesicSegment) -> Real {
        self.leaves
            .iter()
            .filter(|l| {
                let (p, q) = match s {
                    GeodesicSegment::Segment(x, y) => (segment_side(&l.g, x), segment_side(&l.g, y)),
                    GeodesicSegment::Ray(x, y) => (segment_side(&l.g, x), ideal_side(&l.g, y)),
                };
                p != Side::On && q != Side::On && p != q
            })
            .map(|l| l.w.clone())
            .sum()
    }

    /// Leaves meeting the open disk of radius `n` around `o`.
    pub fn truncate(&self, o: &HypPoint, n: f64) -> Self {
        let leaves = self.leaves.iter().filter(|l| l.g.distance_to(o) < n).cloned().collect();
        PolyhedralLamination { leaves, allow_shared: self.allow_shared }
    }

    pub fn pushforward<M: CircleMap + ?Sized>(&self, u: &M) -> Result<Self> {
        let ends = self.endpoints();
        let images = ends.iter().map(|x| u.eval(x)).collect::<Result<Vec<_>>>()?;
        if images.len() >= 3 && !is_cyclically_ordered(&images) {
            let mut rev = images.clone();
            rev.reverse();
            if is_cyclically_ordered(&rev) {
                return Err(Error::OrientationMismatch("map reverses the cyclic order".into()));
            }
        }
        let image_of = |x: &CirclePoint| -> CirclePoint {
            let i = ends.iter().position(|e| e.same(x)).expect("endpoint listed");
            images[i].clone()
        };
        let leaves = self
            .leaves
            .iter()
            .map(|l| Ok(Leaf { g: Geodesic::new(image_of(&l.g.a), image_of(&l.g.b))?, w: l.w.clone() }))
            .collect::<Result<Vec<_>>>()?;
        let out = PolyhedralLamination { leaves, allow_shared: self.allow_shared };
        if let Some(&(i, j)) = out.validate().crossing.first() {
            return Err(Error::ImageCrosses(i, j));
        }
        Ok(out)
    }

    /// Weight of leaves with one endpoint in each of two closed arcs.
    pub fn box_mass(&self, arc1: (&CirclePoint, &CirclePoint), arc2: (&CirclePoint, &CirclePoint)) -> Real {
        let inside = |x: &CirclePoint, (a, b): (&CirclePoint, &CirclePoint)| x.same(a) || x.same(b) || in_open_arc(x, a, b);
        self.leaves
            .iter()
            .filter(|l| {
                (inside(&l.g.a, arc1) && inside(&l.g.b, arc2)) || (inside(&l.g.b, arc1) && inside(&l.g.a, arc2))
            })
            .map(|l| l.w.clone())
            .sum()
    }
}

fn describe(r: &ValidationReport) -> String {
    let mut parts = vec![];
    if !r.crossing.is_empty() {
        parts.push(format!("crossing leaves {:?}", r.crossing));
    }
    if !r.shared.is_empty() {
        parts.push(format!("shared endpoints {:?}", r.shared));
    }
    if !r.duplicate.is_empty() {
        parts.push(format!("duplicate leaves {:?}", r.duplicate));
    }
    if !r.nonpositive.is_empty() {
        parts.push(format!("nonpositive weights {:?}", r.nonpositive));
    }
    parts.join("; ")
}

pub(crate) fn sorted_unique(it: impl Iterator<Item = CirclePoint>) -> Vec<CirclePoint> {
    let mut v: Vec<CirclePoint> = it.collect();
    v.sort_by(position_cmp);
    v.dedup_by(|a, b| a.same(b));
    if v.len() > 1 && v[0].same(v.last().unwrap()) {
        v.pop();
    }
    v
}

/// `Λ = Σ weight × (number of crossings with the circle C(o,n))`.
pub fn total_weight_lambda(minus: &PolyhedralLamination, plus: &PolyhedralLamination, o: &HypPoint, n: f64) -> Real {
    minus
        .leaves
        .iter()
        .chain(plus.leaves.iter())
        .filter(|l| l.g.distance_to(o) < n)
        .map(|l| l.w.clone() + l.w.clone())
        .sum()
}

/// Whether every geodesic joining two distinct complementary intervals of
/// the combined endpoint set crosses a leaf of one of the laminations.
pub fn weak_fill_check(minus: &PolyhedralLamination, plus: &PolyhedralLamination) -> bool {
    let all: Vec<&Leaf> = minus.leaves.iter().chain(plus.leaves.iter()).collect();
    let ends = sorted_unique(all.iter().flat_map(|l| [l.g.a.clone(), l.g.b.clone()]));
    let m = ends.len();
    if m < 3 {
        return false;
    }
    let idx = |x: &CirclePoint| ends.iter().position(|e| e.same(x)).unwrap();
    let chords: Vec<(usize, usize)> = all.iter().map(|l| (idx(&l.g.a), idx(&l.g.b))).collect();
    // gap i lies between ends[i] and ends[i+1]; a chord crosses the geodesic
    // joining gaps i < j iff exactly one endpoint lies in i+1..=j.
    for i in 0..m {
        for j in i + 1..m {
            let within = |x: usize| x > i && x <= j;
            if !chords.iter().any(|&(a, b)| within(a) != within(b)) {
                return false;
            }
        }
    }
    true
}

/// Box masses for the pairings `[a,b]×[c,d]` and `[b,c]×[d,a]`, summed over both laminations.
pub fn reciprocal_bound(
    minus: &PolyhedralLamination,
    plus: &PolyhedralLamination,
    a: &CirclePoint,
    b: &CirclePoint,
    c: &CirclePoint,
    d: &CirclePoint,
) -> Result<(Real, Real)> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i].same(pts[j]) {
                return Err(Error::CoincidentPoints);
            }
        }
    }
    let m1 = minus.box_mass((a, b), (c, d)) + plus.box_mass((a, b), (c, d));
    let m2 = minus.box_mass((b, c), (d, a)) + plus.box_mass((b, c), (d, a));
    Ok((m1, m2))
}

/// Distance between leaves (zero when they meet at infinity or cross).
pub fn leaf_distance(g1: &Geodesic, g2: &Geodesic) -> f64 {
    common_perpendicular_length(g1, g2).unwrap_or(0.0)
}

/// The point at signed distance `t` from `p` along the geodesic toward `q`.
pub fn point_along(p: &HypPoint, q: &HypPoint, t: f64) -> HypPoint {
    let d = p.distance(q);
    let c = d.cosh();
    let s = d.sinh();
    let v: Vec<f64> = (0..3).map(|i| (q.0[i] - c * p.0[i]) / s).collect();
    HypPoint([
        t.cosh() * p.0[0] + t.sinh() * v[0],
        t.cosh() * p.0[1] + t.sinh() * v[1],
        t.cosh() * p.0[2] + t.sinh() * v[2],
    ])
}

/// Feet of the common perpendicular of two disjoint geodesics.
pub fn perpendicular_feet(g1: &Geodesic, g2: &Geodesic) -> Option<(HypPoint, HypPoint)> {
    if geodesic_relation(g1, g2) != GeodesicRelation::Disjoint {
        return None;
    }
    let (n1, n2) = (g1.pole(), g2.pole());
    let c = minkowski(&n1, &n2);
    let f1 = [n2[0] - c * n1[0], n2[1] - c * n1[1], n2[2] - c * n1[2]];
    let f2 = [n1[0] - c * n2[0], n1[1] - c * n2[1], n1[2] - c * n2[2]];
    Some((HypPoint::new(f1).ok()?, HypPoint::new(f2).ok()?))
}

const CHAIN_NODE_CAP: usize = 200_000;

/// Lower and upper estimates of the largest weight crossed by a unit segment.
pub fn boundedness_bounds(lam: &PolyhedralLamination) -> (f64, f64) {
    let w: Vec<f64> = lam.leaves.iter().map(|l| l.w.to_f64()).collect();
    let n = w.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mut lower = w.iter().cloned().fold(0.0, f64::max);
    for i in 0..n {
        for j in i + 1..n {
            let Some((p, q)) = perpendicular_feet(&lam.leaves[i].g, &lam.leaves[j].g) else { continue };
            let d = p.distance(&q);
            for center in [d / 2.0, 0.0, d] {
                let a = point_along(&p, &q, center - 0.5);
                let b = point_along(&p, &q, center + 0.5);
                let x = lam.intersection_with_segment(&GeodesicSegment::Segment(a, b)).to_f64();
                lower = lower.max(x);
            }
        }
    }
    let dist: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { leaf_distance(&lam.leaves[i].g, &lam.leaves[j].g) }).collect()).collect();
    let mut best = lower;
    let mut visited = 0usize;
    let mut capped = false;
    for s in 0..n {
        let mut path = vec![s];
        chain_dfs(lam, &w, &dist, &mut path, 1.0, w[s], &mut best, &mut visited, &mut capped);
        if capped {
            break;
        }
    }
    let upper = if capped { w.iter().sum() } else { best };
    (lower, upper.max(lower))
}

/// Whether leaf `mid` separates `a` from `b` (endpoints shared with `mid` ignored).
fn separates(mid: &Geodesic, a: &Geodesic, b: &Geodesic) -> bool {
    let side = |g: &Geodesic| {
        [&g.a, &g.b].iter().map(|x| ideal_side(mid, x)).find(|s| *s != Side::On).unwrap_or(Side::On)
    };
    let (sa, sb) = (side(a), side(b));
    sa != Side::On && sb != Side::On && sa != sb
}

#[allow(clippy::too_many_arguments)]
fn chain_dfs(
    lam: &PolyhedralLamination,
    w: &[f64],
    dist: &[Vec<f64>],
    path: &mut Vec<usize>,
    budget: f64,
    acc: f64,
    best: &mut f64,
    visited: &mut usize,
    capped: &mut bool,
) {
    *visited += 1;
    if *visited > CHAIN_NODE_CAP {
        *capped = true;
        return;
    }
    *best = best.max(acc);
    let cur = *path.last().unwrap();
    for j in 0..w.len() {
        if path.contains(&j) || dist[cur][j] > budget {
            continue;
        }
        if path.len() >= 2 {
            let prev = path[path.len() - 2];
            if !separates(&lam.leaves[cur].g, &lam.leaves[prev].g, &lam.leaves[j].g) {
                continue;
            }
        }
        path.push(j);
        chain_dfs(lam, w, dist, path, budget - dist[cur][j], acc + w[j], best, visited, capped);
        path.pop();
        if *capped {
            return;
        }
    }
}

/// Endpoint displacement in radians, minimized over the two pairings.
fn endpoint_distance(g: &Geodesic, h: &Geodesic) -> f64 {
    let straight = circle_distance_turns(&g.a, &h.a) + circle_distance_turns(&g.b, &h.b);
    let swapped = circle_distance_turns(&g.a, &h.b) + circle_distance_turns(&g.b, &h.a);
    2.0 * PI * straight.min(swapped)
}

/// Matching distance: matched leaves cost `min(w, w′)·(endpoint displacement) + |w − w′|`,
/// unmatched leaves cost their weight.
pub fn lamination_distance(l1: &PolyhedralLamination, l2: &PolyhedralLamination) -> f64 {
    let (n1, n2) = (l1.len(), l2.len());
    let n = n1 + n2;
    if n == 0 {
        return 0.0;
    }
    let w1: Vec<f64> = l1.leaves.iter().map(|l| l.w.to_f64()).collect();
    let w2: Vec<f64> = l2.leaves.iter().map(|l| l.w.to_f64()).collect();
    let mut rows = vec![vec![OrderedFloat(0.0); n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            let v = match (i < n1, j < n2) {
                (true, true) => {
                    w1[i].min(w2[j]) * endpoint_distance(&l1.leaves[i].g, &l2.leaves[j].g) + (w1[i] - w2[j]).abs()
                }
                (true, false) => w1[i],
                (false, true) => w2[j],
                (false, false) => 0.0,
            };
            *c = OrderedFloat(v);
        }
    }
    let m = Matrix::from_rows(rows).expect("square cost matrix");
    kuhn_munkres_min(&m).0.into_inner().max(0.0)
}

/// Leaves sorted by endpoints, for canonical comparisons.
pub fn canonical_leaves(lam: &PolyhedralLamination) -> Vec<Leaf> {
    let mut v: Vec<Leaf> = lam
        .leaves
        .iter()
        .map(|l| {
            if position_cmp(&l.g.a, &l.g.b) == Ordering::Greater {
                Leaf { g: l.g.reversed(), w: l.w.clone() }
            } else {
                l.clone()
            }
        })
        .collect();
    v.sort_by(|x, y| position_cmp(&x.g.a, &y.g.a).then_with(|| position_cmp(&x.g.b, &y.g.b)));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::MobiusMap;
    use crate::real::{q, qi};

    fn aff(n: i64) -> CirclePoint {
        CirclePoint::from_affine(qi(n))
    }

    fn t(n: i64, d: i64) -> CirclePoint {
        CirclePoint::from_turns(q(n, d))
    }

    fn leaf(a: CirclePoint, b: CirclePoint, w: Q) -> Leaf {
        Leaf::new(a, b, w).unwrap()
    }

    #[test]
    fn validation() {
        let single = PolyhedralLamination::new_unchecked(vec![leaf(aff(0), aff(1), qi(1))], false);
        assert!(single.validate().is_valid());
        let crossing = PolyhedralLamination::new_unchecked(
            vec![leaf(aff(0), CirclePoint::infinity(), qi(1)), leaf(aff(-1), aff(1), qi(1))],
            false,
        );
        assert_eq!(crossing.validate().crossing, vec![(0, 1)]);
        let nested =
            PolyhedralLamination::new_unchecked(vec![leaf(aff(0), aff(3), qi(1)), leaf(aff(1), aff(2), qi(1))], false);
        assert!(nested.validate().is_valid());
    }

    #[test]
    fn geodesic_intersections() {
        let lam = PolyhedralLamination::new(vec![leaf(aff(0), CirclePoint::infinity(), qi(2))], false).unwrap();
        let g = Geodesic::new(aff(-1), aff(1)).unwrap();
        assert_eq!(lam.intersection_with_geodesic(&g).unwrap(), Real::Exact(qi(2)));
        let g = Geodesic::new(aff(1), aff(2)).unwrap();
        assert_eq!(lam.intersection_with_geodesic(&g).unwrap(), Real::Exact(qi(0)));
        let lam =
            PolyhedralLamination::new(vec![leaf(aff(0), aff(4), qi(1)), leaf(aff(1), aff(3), q(1, 2))], false).unwrap();
        let g = Geodesic::new(aff(2), aff(5)).unwrap();
        assert_eq!(lam.intersection_with_geodesic(&g).unwrap(), Real::Exact(q(3, 2)));
        let g = Geodesic::new(aff(0), aff(5)).unwrap();
        assert_eq!(lam.intersection_with_geodesic(&g), Err(Error::EndpointCollision));
    }

    #[test]
    fn segment_intersections() {
        let lam = PolyhedralLamination::new(vec![leaf(t(0, 1), t(1, 2), qi(3))], false).unwrap();
        let a = HypPoint::from_disk(0.0, 0.3).unwrap();
        let b = HypPoint::from_disk(0.2, 0.5).unwrap();
        assert_eq!(lam.intersection_with_segment(&GeodesicSegment::Segment(a, b)).to_f64(), 0.0);
        let c = HypPoint::from_disk(0.0, -0.3).unwrap();
        assert_eq!(lam.intersection_with_segment(&GeodesicSegment::Segment(a, c)).to_f64(), 3.0);
        assert_eq!(lam.intersection_with_segment(&GeodesicSegment::Ray(a, t(3, 4))).to_f64(), 3.0);
    }

    /// Leaves orthogonal to the real diameter, crossing it at hyperbolic distances `xs`.
    pub(crate) fn stack(xs: &[f64]) -> PolyhedralLamination {
        let leaves = xs
            .iter()
            .map(|&x| {
                // the geodesic orthogonal to the diameter at distance x has endpoints at angle ±acos(tanh x)
                let a = x.tanh().acos() / (2.0 * PI);
                leaf_f(CirclePoint::from_turns_f64(-a), CirclePoint::from_turns_f64(a), 1.0)
            })
            .collect();
        PolyhedralLamination::new(leaves, false).unwrap()
    }

    fn leaf_f(a: CirclePoint, b: CirclePoint, w: f64) -> Leaf {
        Leaf::new(a, b, w).unwrap()
    }

    #[test]
    fn stacked_leaves_are_crossed_by_one_unit_segment() {
        let lam = stack(&[0.0, 0.1, 0.2, 0.3, 0.4]);
        let o = HypPoint::origin();
        let far = HypPoint::from_polar(&t(0, 1), 0.45);
        let before = HypPoint::from_polar(&t(1, 2), 0.05);
        assert!((before.distance(&far) - 0.5).abs() < 1e-12);
        assert_eq!(lam.intersection_with_segment(&GeodesicSegment::Segment(before, far)).to_f64(), 5.0);
        let (lo, hi) = boundedness_bounds(&lam);
        assert!(lo >= 5.0 && hi >= lo, "{lo} {hi}");
        assert!((lam.leaves[1].g.distance_to(&o) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn boundedness_examples() {
        let one = PolyhedralLamination::new(vec![leaf(t(0, 1), t(1, 3), q(5, 2))], false).unwrap();
        assert_eq!(boundedness_bounds(&one), (2.5, 2.5));
        let two = stack(&[0.0, 2.0]);
        assert_eq!(boundedness_bounds(&two), (1.0, 1.0));
    }

    #[test]
    fn truncation() {
        let lam = stack(&[0.0, 2.0]);
        let o = HypPoint::origin();
        assert_eq!(lam.truncate(&o, 1.0).len(), 1);
        assert_eq!(lam.truncate(&o, 0.5).len(), 1);
        assert_eq!(lam.truncate(&o, 3.0).len(), 2);
        let d = lam.leaves[1].g.distance_to(&o);
        assert_eq!(lam.truncate(&o, d).len(), 1);
    }

    #[test]
    fn lambda_totals() {
        let o = HypPoint::origin();
        let a = PolyhedralLamination::new(vec![leaf(t(0, 1), t(1, 2), qi(1))], false).unwrap();
        let b = PolyhedralLamination::new(vec![leaf(t(1, 4), t(3, 4), qi(1))], false).unwrap();
        assert_eq!(total_weight_lambda(&a, &b, &o, 1.0), Real::Exact(qi(4)));
        let e = PolyhedralLamination::empty();
        assert_eq!(total_weight_lambda(&e, &e, &o, 1.0), Real::Exact(qi(0)));
        let c = PolyhedralLamination::new(vec![leaf(t(0, 1), t(1, 2), q(3, 2))], false).unwrap();
        assert_eq!(total_weight_lambda(&c, &e, &o, 1.0), Real::Exact(qi(3)));
    }

    #[test]
    fn weak_filling() {
        let minus = PolyhedralLamination::new(vec![leaf(t(1, 4), t(3, 4), qi(1))], false).unwrap();
        let plus = PolyhedralLamination::new(vec![leaf(t(0, 1), t(1, 2), qi(1))], false).unwrap();
        assert!(weak_fill_check(&minus, &plus));
        assert!(!weak_fill_check(&PolyhedralLamination::empty(), &plus));
        let parallel =
            PolyhedralLamination::new(vec![leaf(t(0, 1), t(1, 8), qi(1)), leaf(t(1, 2), t(5, 8), qi(1))], false)
                .unwrap();
        assert!(!weak_fill_check(&PolyhedralLamination::empty(), &parallel));
    }

    #[test]
    fn reciprocal_masses() {
        let minus = PolyhedralLamination::new(vec![leaf(t(1, 4), t(3, 4), qi(1))], false).unwrap();
        let plus = PolyhedralLamination::new(vec![leaf(t(0, 1), t(1, 2), qi(2))], false).unwrap();
        let (a, b, c, d) = (t(0, 1), t(1, 4), t(1, 2), t(3, 4));
        // [a,b]x[c,d] holds both diagonals; [b,c]x[d,a] also holds both
        let (m1, m2) = reciprocal_bound(&minus, &plus, &a, &b, &c, &d).unwrap();
        assert_eq!((m1, m2), (Real::Exact(qi(3)), Real::Exact(qi(3))));
        let (a, b, c, d) = (t(1, 16), t(3, 16), t(9, 16), t(11, 16));
        // open boxes around the endpoints catch nothing
        let (m1, m2) = reciprocal_bound(&minus, &plus, &a, &b, &c, &d).unwrap();
        assert_eq!((m1.to_f64(), m2.to_f64()), (0.0, 3.0));
        let e = PolyhedralLamination::empty();
        let (m1, m2) = reciprocal_bound(&e, &e, &a, &b, &c, &d).unwrap();
        assert_eq!((m1.to_f64(), m2.to_f64()), (0.0, 0.0));
        assert_eq!(reciprocal_bound(&e, &e, &a, &a, &c, &d), Err(Error::CoincidentPoints));
    }

    #[test]
    fn pushforward_by_mobius() {
        let lam =
            PolyhedralLamination::new(vec![leaf(aff(0), aff(1), qi(1)), leaf(aff(2), aff(3), qi(2))], false).unwrap();
        let m = MobiusMap::new(2.0, 1.0, 1.0, 3.0).unwrap();
        let img = lam.pushforward(&m).unwrap();
        let before = common_perpendicular_length(&lam.leaves[0].g, &lam.leaves[1].g).unwrap();
        let after = common_perpendicular_length(&img.leaves[0].g, &img.leaves[1].g).unwrap();
        assert!((before - after).abs() < 1e-9);
        let flip = |x: &CirclePoint| Ok(CirclePoint::from_homogeneous(-x.homogeneous()[0], x.homogeneous()[1]));
        assert!(matches!(lam.pushforward(&flip), Err(Error::OrientationMismatch(_))));
    }

    #[test]
    fn distances() {
        let lam =
            PolyhedralLamination::new(vec![leaf(t(0, 1), t(1, 3), qi(1)), leaf(t(1, 2), t(3, 4), qi(2))], false)
                .unwrap();
        assert!(lamination_distance(&lam, &lam).abs() < 1e-15);
        let mut other = lam.clone();
        other.leaves[1].w = Real::Exact(q(9, 4));
        assert!((lamination_distance(&lam, &other) - 0.25).abs() < 1e-12);
        assert!((lamination_distance(&other, &lam) - 0.25).abs() < 1e-12);
        // one leaf of weight 1/2 rotated by α turns: matched cost w·2π·2α, capped by 2w unmatched
        let w = 0.5;
        for (alpha, expected) in [(0.01, 0.5 * 2.0 * PI * 0.02), (0.2, 1.0)] {
            let a = PolyhedralLamination::new(vec![leaf_f(t(0, 1), t(1, 3), w)], false).unwrap();
            let b = PolyhedralLamination::new(
                vec![leaf_f(CirclePoint::from_turns_f64(alpha), CirclePoint::from_turns_f64(1.0 / 3.0 + alpha), w)],
                false,
            )
            .unwrap();
            assert!((lamination_distance(&a, &b) - expected).abs() < 1e-9, "{alpha}");
        }
    }
}
