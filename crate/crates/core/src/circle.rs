//! The projective line as the ideal boundary of the hyperbolic plane.
//!
//! A [`CirclePoint`] always carries a binary64 homogeneous representative
//! `(p : q)` (the affine coordinate is `p / q`, infinity is `(1 : 0)`), plus
//! optional exact data: rational turns, and/or rational homogeneous
//! coordinates. Order predicates and cross-ratios use the exact data whenever
//! every participating point has it.
//!
//! Turns `t ∈ [0, 1)` map to the affine coordinate `tan(π t)`; in the
//! hyperboloid model used here they are also the disk angle divided by `2π`.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::real::{q_to_f64, qi, Real, Q};

const EPS: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct CirclePoint {
    /// Unit representative with canonical sign (`p > 0`, or `p = 0, q > 0`).
    h: [f64; 2],
    turns: Option<Q>,
    proj: Option<(Q, Q)>,
}

fn canonical(p: f64, q: f64) -> [f64; 2] {
    let n = p.hypot(q);
    let (mut p, mut q) = (p / n, q / n);
    if p < 0.0 || (p == 0.0 && q < 0.0) {
        p = -p;
        q = -q;
    }
    [p, q]
}

fn reduce_turns(t: &Q) -> Q {
    let f = t.floor();
    t - f
}

impl CirclePoint {
    pub fn from_turns(t: Q) -> Self {
        let t = reduce_turns(&t);
        let four = &t * qi(4);
        let proj = if four.is_integer() {
            Some(match four.to_integer().to_string().as_str() {
                "0" => (Q::zero(), Q::one()),
                "1" => (Q::one(), Q::one()),
                "2" => (Q::one(), Q::zero()),
                _ => (-Q::one(), Q::one()),
            })
        } else {
            None
        };
        let a = PI * q_to_f64(&t);
        CirclePoint { h: canonical(a.sin(), a.cos()), turns: Some(t), proj }
    }

    pub fn from_turns_f64(t: f64) -> Self {
        let a = PI * t.rem_euclid(1.0);
        CirclePoint { h: canonical(a.sin(), a.cos()), turns: None, proj: None }
    }

    /// The point with affine coordinate `x`.
    pub fn from_affine(x: Q) -> Self {
        Self::from_proj(x, Q::one())
    }

    pub fn infinity() -> Self {
        Self::from_proj(Q::one(), Q::zero())
    }

    /// Exact homogeneous coordinates `(p : q)`; panics if both are zero.
    pub fn from_proj(p: Q, q: Q) -> Self {
        assert!(!(p.is_zero() && q.is_zero()), "(0 : 0) is not a point");
        let h = canonical(q_to_f64(&p), q_to_f64(&q));
        let turns = if q.is_zero() {
            Some(Q::new(1.into(), 2.into()))
        } else {
            let x = &p / &q;
            if x.is_zero() {
                Some(Q::zero())
            } else if x == Q::one() {
                Some(Q::new(1.into(), 4.into()))
            } else if x == -Q::one() {
                Some(Q::new(3.into(), 4.into()))
            } else {
                None
            }
        };
        CirclePoint { h, turns, proj: Some((p, q)) }
    }

    pub fn from_homogeneous(p: f64, q: f64) -> Self {
        CirclePoint { h: canonical(p, q), turns: None, proj: None }
    }

    pub fn from_affine_f64(x: f64) -> Self {
        Self::from_homogeneous(x, 1.0)
    }

    pub fn homogeneous(&self) -> [f64; 2] {
        self.h
    }

    pub fn exact_turns(&self) -> Option<&Q> {
        self.turns.as_ref()
    }

    pub fn exact_proj(&self) -> Option<&(Q, Q)> {
        self.proj.as_ref()
    }

    /// Position in turns, in `[0, 1)`.
    pub fn turns_f64(&self) -> f64 {
        if let Some(t) = &self.turns {
            return q_to_f64(t);
        }
        let t = self.h[0].atan2(self.h[1]) / PI;
        let t = t.rem_euclid(1.0);
        if t >= 1.0 {
            0.0
        } else {
            t
        }
    }

    /// Affine coordinate (may be infinite).
    pub fn affine_f64(&self) -> f64 {
        if self.h[1] == 0.0 {
            f64::INFINITY
        } else {
            self.h[0] / self.h[1]
        }
    }

    /// Point of the unit circle in the Poincaré disk model.
    pub fn disk(&self) -> [f64; 2] {
        let a = 2.0 * PI * self.turns_f64();
        [a.cos(), a.sin()]
    }

    /// Null vector of signature (2,1) space representing this ideal point.
    pub fn null_vector(&self) -> [f64; 3] {
        let [p, q] = self.h;
        [(p * p + q * q) / 2.0, (q * q - p * p) / 2.0, p * q]
    }

    /// Drops exact data.
    pub fn to_float(&self) -> Self {
        CirclePoint { h: self.h, turns: None, proj: None }
    }

    /// Moves the point by `dt` turns, exactly when both are exact.
    pub fn shifted(&self, dt: &Q) -> Self {
        match &self.turns {
            Some(t) => CirclePoint::from_turns(t + dt),
            None => CirclePoint::from_turns_f64(self.turns_f64() + q_to_f64(dt)),
        }
    }

    /// Equality as points of the projective line.
    pub fn same(&self, other: &CirclePoint) -> bool {
        match mode(&[self, other]) {
            Mode::Turns => self.turns == other.turns,
            Mode::Proj => {
                let (a, b) = self.proj.as_ref().unwrap();
                let (c, d) = other.proj.as_ref().unwrap();
                a * d == b * c
            }
            Mode::Float => wedge_f(self.h, other.h).abs() < EPS,
        }
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.turns {
            Some(t) => write!(f, "{}", crate::real::format_q(t)),
            None => write!(f, "{}", self.turns_f64()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Mode {
    Turns,
    Proj,
    Float,
}

fn mode(points: &[&CirclePoint]) -> Mode {
    if points.iter().all(|p| p.turns.is_some()) {
        Mode::Turns
    } else if points.iter().all(|p| p.proj.is_some()) {
        Mode::Proj
    } else {
        Mode::Float
    }
}

/// Monotone key along the circle for exact projective points.
fn proj_key(p: &CirclePoint) -> (u8, Q) {
    let (a, b) = p.proj.as_ref().unwrap();
    if b.is_zero() {
        return (1, Q::zero());
    }
    let x = a / b;
    if x.is_negative() {
        (2, x)
    } else {
        (0, x)
    }
}

fn key_cmp(a: &CirclePoint, b: &CirclePoint, m: Mode) -> Ordering {
    match m {
        Mode::Turns => a.turns.as_ref().unwrap().cmp(b.turns.as_ref().unwrap()),
        Mode::Proj => proj_key(a).cmp(&proj_key(b)),
        Mode::Float => {
            if wedge_f(a.h, b.h).abs() < EPS {
                Ordering::Equal
            } else {
                a.turns_f64().partial_cmp(&b.turns_f64()).unwrap_or(Ordering::Equal)
            }
        }
    }
}

/// Orders points by position in turns (exact where possible).
pub fn position_cmp(a: &CirclePoint, b: &CirclePoint) -> Ordering {
    key_cmp(a, b, mode(&[a, b]))
}

/// Orientation of a triple: `1` when `a, b, c` are strictly counterclockwise,
/// `-1` when clockwise, `0` when two of them coincide.
pub fn orientation(a: &CirclePoint, b: &CirclePoint, c: &CirclePoint) -> i32 {
    let m = mode(&[a, b, c]);
    if m == Mode::Float {
        // Sign of the product of pairwise wedges is the cyclic orientation.
        let (x, y, z) = (wedge_f(a.h, b.h), wedge_f(b.h, c.h), wedge_f(c.h, a.h));
        if x.abs() < EPS || y.abs() < EPS || z.abs() < EPS {
            return 0;
        }
    }
    let ab = key_cmp(a, b, m);
    let bc = key_cmp(b, c, m);
    let ca = key_cmp(c, a, m);
    if ab == Ordering::Equal || bc == Ordering::Equal || ca == Ordering::Equal {
        return 0;
    }
    // a<b<c, b<c<a, c<a<b are the counterclockwise arrangements.
    let lt = |o: Ordering| o == Ordering::Less;
    let ccw = (lt(ab) && lt(bc)) || (lt(bc) && lt(ca)) || (lt(ca) && lt(ab));
    if ccw {
        1
    } else {
        -1
    }
}

/// True when `x` lies in the open counterclockwise arc from `a` to `b`.
pub fn in_open_arc(x: &CirclePoint, a: &CirclePoint, b: &CirclePoint) -> bool {
    orientation(a, x, b) == 1
}

/// Counterclockwise angular length from `a` to `b`, in turns, in `[0, 1)`.
pub fn arc_turns(a: &CirclePoint, b: &CirclePoint) -> f64 {
    (b.turns_f64() - a.turns_f64()).rem_euclid(1.0)
}

/// Shortest angular distance in turns.
pub fn circle_distance_turns(a: &CirclePoint, b: &CirclePoint) -> f64 {
    let d = arc_turns(a, b);
    d.min(1.0 - d)
}

/// Sorts points counterclockwise starting from turn 0.
pub fn sort_cyclic(points: &mut [CirclePoint]) {
    points.sort_by(position_cmp);
}

pub(crate) fn wedge_f(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn wedge_q(a: &(Q, Q), b: &(Q, Q)) -> Q {
    &a.0 * &b.1 - &a.1 * &b.0
}

/// `cr(a,b,c,d) = ((a−b)(c−d)) / ((a−d)(c−b))`, with value `−1` on `(−1, 0, 1, ∞)`.
pub fn cross_ratio(a: &CirclePoint, b: &CirclePoint, c: &CirclePoint, d: &CirclePoint) -> Result<Real> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i].same(pts[j]) {
                return Err(Error::CoincidentPoints);
            }
        }
    }
    if let (Some(pa), Some(pb), Some(pc), Some(pd)) = (&a.proj, &b.proj, &c.proj, &d.proj) {
        let num = wedge_q(pa, pb) * wedge_q(pc, pd);
        let den = wedge_q(pa, pd) * wedge_q(pc, pb);
        return Ok(Real::Exact(num / den));
    }
    Ok(Real::Float(cross_ratio_f64(a, b, c, d)))
}

pub(crate) fn cross_ratio_f64(a: &CirclePoint, b: &CirclePoint, c: &CirclePoint, d: &CirclePoint) -> f64 {
    (wedge_f(a.h, b.h) * wedge_f(c.h, d.h)) / (wedge_f(a.h, d.h) * wedge_f(c.h, b.h))
}

/// Whether the quadruple is in `ε`-symmetric position.
pub fn is_symmetric(a: &CirclePoint, b: &CirclePoint, c: &CirclePoint, d: &CirclePoint, eps: &Real) -> Result<bool> {
    let cr = cross_ratio(a, b, c, d)?;
    let one = Real::Exact(Q::one());
    let lo = -(&one + eps);
    let hi = &(-one) + eps;
    Ok(cr >= lo && cr <= hi)
}

/// An orientation-preserving Möbius transformation, stored as a row-major
/// `SL(2,R)` matrix (identified with its negative).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusMap {
    pub m: [f64; 4],
}

impl MobiusMap {
    pub fn identity() -> Self {
        MobiusMap { m: [1.0, 0.0, 0.0, 1.0] }
    }

    /// Normalizes to determinant one; fails on non-positive determinant.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::OrientationMismatch(format!("determinant {det} is not positive")));
        }
        let s = det.sqrt();
        Ok(MobiusMap { m: [a / s, b / s, c / s, d / s] })
    }

    pub fn det(&self) -> f64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn apply_h(&self, h: [f64; 2]) -> [f64; 2] {
        [self.m[0] * h[0] + self.m[1] * h[1], self.m[2] * h[0] + self.m[3] * h[1]]
    }

    pub fn apply(&self, x: &CirclePoint) -> CirclePoint {
        let [p, q] = self.apply_h(x.h);
        CirclePoint::from_homogeneous(p, q)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        MobiusMap { m: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h] }
    }

    pub fn inverse(&self) -> MobiusMap {
        let [a, b, c, d] = self.m;
        let det = self.det();
        MobiusMap { m: [d / det, -b / det, -c / det, a / det] }
    }

    /// Distance to another map in PSL(2,R), up to sign.
    pub fn distance(&self, other: &MobiusMap) -> f64 {
        let plus = self.m.iter().zip(other.m.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let minus = self.m.iter().zip(other.m.iter()).map(|(a, b)| (a + b).abs()).fold(0.0, f64::max);
        plus.min(minus)
    }

    /// Fixed points of a hyperbolic element, as homogeneous vectors.
    pub fn fixed_points(&self) -> Vec<CirclePoint> {
        let [a, b, c, d] = self.m;
        // c x^2 + (d - a) x - b = 0 in homogeneous form.
        if c.abs() < 1e-14 {
            let mut out = vec![CirclePoint::from_homogeneous(1.0, 0.0)];
            if (d - a).abs() > 1e-14 {
                out.push(CirclePoint::from_affine_f64(b / (d - a)));
            }
            return out;
        }
        let disc = (d - a) * (d - a) + 4.0 * b * c;
        if disc < 0.0 {
            return vec![];
        }
        let s = disc.sqrt();
        vec![
            CirclePoint::from_affine_f64((a - d + s) / (2.0 * c)),
            CirclePoint::from_affine_f64((a - d - s) / (2.0 * c)),
        ]
    }
}

/// Matrix sending `0 = (0:1)`, `∞ = (1:0)`, `1 = (1:1)` to the three points,
/// with unit determinant magnitude and the sign of the determinant returned.
fn standard_frame(p: [&CirclePoint; 3]) -> Result<([f64; 4], f64)> {
    let (a, b, c) = (p[0].h, p[1].h, p[2].h);
    // columns: image of ∞ is b, image of 0 is a; scale so (1,1) lands on c.
    let det = b[0] * a[1] - a[0] * b[1];
    if det.abs() < EPS {
        return Err(Error::DegenerateTriple);
    }
    let s = (c[0] * a[1] - a[0] * c[1]) / det;
    let t = (b[0] * c[1] - c[0] * b[1]) / det;
    if s.abs() < EPS || t.abs() < EPS {
        return Err(Error::DegenerateTriple);
    }
    let m = [b[0] * s, a[0] * t, b[1] * s, a[1] * t];
    let d = m[0] * m[3] - m[1] * m[2];
    let k = d.abs().sqrt();
    Ok(([m[0] / k, m[1] / k, m[2] / k, m[3] / k], d.signum()))
}

/// The orientation-preserving Möbius map sending `src[i]` to `dst[i]`.
pub fn mobius_from_triples(src: [&CirclePoint; 3], dst: [&CirclePoint; 3]) -> Result<MobiusMap> {
    let (a, sa) = standard_frame(src)?;
    let (b, sb) = standard_frame(dst)?;
    if sa != sb {
        return Err(Error::OrientationMismatch("triples have opposite cyclic orientation".into()));
    }
    let ma = MobiusMap { m: a };
    let mb = MobiusMap { m: b };
    let r = mb.compose(&ma.inverse());
    MobiusMap::new(r.m[0], r.m[1], r.m[2], r.m[3])
}

/// Signature (2,1) form `−x0 y0 + x1 y1 + x2 y2`.
pub fn minkowski(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    -x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

fn lorentz_cross(x: &[f64; 3], y: &[f64; 3]) -> [f64; 3] {
    let c = [x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]];
    [-c[0], c[1], c[2]]
}

/// A point of the hyperboloid model, `⟨x,x⟩ = −1`, `x0 > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HypPoint(pub [f64; 3]);

impl HypPoint {
    pub fn origin() -> Self {
        HypPoint([1.0, 0.0, 0.0])
    }

    /// Normalizes a timelike vector onto the upper sheet.
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let n = minkowski(&v, &v);
        if !(n < 0.0) {
            return Err(Error::DegenerateInput("vector is not timelike".into()));
        }
        let s = (-n).sqrt() * v[0].signum();
        Ok(HypPoint([v[0] / s, v[1] / s, v[2] / s]))
    }

    /// From Poincaré disk coordinates.
    pub fn from_disk(x: f64, y: f64) -> Result<Self> {
        let r2 = x * x + y * y;
        if r2 >= 1.0 {
            return Err(Error::DegenerateInput("point outside the disk".into()));
        }
        let k = 1.0 / (1.0 - r2);
        Ok(HypPoint([(1.0 + r2) * k, 2.0 * x * k, 2.0 * y * k]))
    }

    /// The point at distance `r` from the origin toward the ideal point `toward`.
    pub fn from_polar(toward: &CirclePoint, r: f64) -> Self {
        let [c, s] = toward.disk();
        HypPoint([r.cosh(), r.sinh() * c, r.sinh() * s])
    }

    pub fn to_disk(&self) -> [f64; 2] {
        let k = 1.0 + self.0[0];
        [self.0[1] / k, self.0[2] / k]
    }

    pub fn distance(&self, other: &HypPoint) -> f64 {
        (-minkowski(&self.0, &other.0)).max(1.0).acosh()
    }
}

/// Complete geodesic given by an ordered pair of distinct endpoints; the
/// order only matters for translations and sides.
#[derive(Clone, Debug)]
pub struct Geodesic {
    pub a: CirclePoint,
    pub b: CirclePoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeodesicRelation {
    Cross,
    Disjoint,
    SharedEndpoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    On,
}

impl Geodesic {
    pub fn new(a: CirclePoint, b: CirclePoint) -> Result<Self> {
        if a.same(&b) {
            return Err(Error::CoincidentPoints);
        }
        Ok(Geodesic { a, b })
    }

    pub fn reversed(&self) -> Self {
        Geodesic { a: self.b.clone(), b: self.a.clone() }
    }

    /// Unit spacelike pole; the left side of `a → b` is where `⟨pole, x⟩ > 0`.
    pub fn pole(&self) -> [f64; 3] {
        let g = lorentz_cross(&self.a.null_vector(), &self.b.null_vector());
        let n = minkowski(&g, &g).sqrt();
        [g[0] / n, g[1] / n, g[2] / n]
    }

    pub fn has_endpoint(&self, x: &CirclePoint) -> bool {
        self.a.same(x) || self.b.same(x)
    }

    pub fn same_as(&self, other: &Geodesic) -> bool {
        (self.a.same(&other.a) && self.b.same(&other.b)) || (self.a.same(&other.b) && self.b.same(&other.a))
    }

    /// Distance from a point to this geodesic.
    pub fn distance_to(&self, x: &HypPoint) -> f64 {
        minkowski(&self.pole(), &x.0).abs().asinh()
    }

    /// Whether `x` lies strictly between the endpoints in the counterclockwise arc `a → b`.
    pub fn separates(&self, x: &CirclePoint, y: &CirclePoint) -> bool {
        if self.has_endpoint(x) || self.has_endpoint(y) {
            return false;
        }
        in_open_arc(x, &self.a, &self.b) != in_open_arc(y, &self.a, &self.b)
    }
}

pub fn geodesic_relation(g1: &Geodesic, g2: &Geodesic) -> GeodesicRelation {
    if g1.has_endpoint(&g2.a) || g1.has_endpoint(&g2.b) {
        return GeodesicRelation::SharedEndpoint;
    }
    if g1.separates(&g2.a, &g2.b) {
        GeodesicRelation::Cross
    } else {
        GeodesicRelation::Disjoint
    }
}

pub fn common_perpendicular_length(g1: &Geodesic, g2: &Geodesic) -> Result<f64> {
    if geodesic_relation(g1, g2) != GeodesicRelation::Disjoint {
        return Err(Error::NotDisjoint);
    }
    let det = |x: &CirclePoint, y: &CirclePoint| x.h[0] * y.h[1] - x.h[1] * y.h[0];
    let (a, b, c, d) = (&g1.a, &g1.b, &g2.a, &g2.b);
    let r = ((det(a, c) * det(b, d)) / (det(a, d) * det(b, c))).abs();
    let r = if r < 1.0 { 1.0 / r } else { r };
    let s = r.sqrt();
    Ok(((s + 1.0) / (s - 1.0)).ln())
}

/// Hyperbolic translation along `g` by `w`, toward `g.b` when `w > 0`.
pub fn translation_along(g: &Geodesic, w: f64) -> MobiusMap {
    let (a, b) = (g.a.h, g.b.h);
    // columns: ∞ ↦ b, 0 ↦ a
    let mut c = [b[0], a[0], b[1], a[1]];
    let det = c[0] * c[3] - c[1] * c[2];
    if det < 0.0 {
        c[0] = -c[0];
        c[2] = -c[2];
    }
    let cm = MobiusMap::new(c[0], c[1], c[2], c[3]).expect("distinct endpoints");
    let e = (w / 2.0).exp();
    let d = MobiusMap { m: [e, 0.0, 0.0, 1.0 / e] };
    cm.compose(&d).compose(&cm.inverse())
}

/// Angle at `o` between the rays toward `a` and `b`.
pub fn visual_distance(o: &HypPoint, a: &CirclePoint, b: &CirclePoint) -> f64 {
    let tangent = |n: [f64; 3]| {
        let k = minkowski(&n, &o.0);
        [n[0] + k * o.0[0], n[1] + k * o.0[1], n[2] + k * o.0[2]]
    };
    let va = tangent(a.null_vector());
    let vb = tangent(b.null_vector());
    let na = minkowski(&va, &va).sqrt();
    let nb = minkowski(&vb, &vb).sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (minkowski(&va, &vb) / (na * nb)).clamp(-1.0, 1.0).acos()
}

pub fn segment_side(g: &Geodesic, x: &HypPoint) -> Side {
    side_of_vector(g, &x.0)
}

/// Side of an ideal point (`On` for the geodesic's own endpoints).
pub fn ideal_side(g: &Geodesic, x: &CirclePoint) -> Side {
    if g.has_endpoint(x) {
        return Side::On;
    }
    if in_open_arc(x, &g.b, &g.a) {
        Side::Left
    } else {
        Side::Right
    }
}

fn side_of_vector(g: &Geodesic, v: &[f64; 3]) -> Side {
    let s = minkowski(&g.pole(), v);
    if s.abs() < EPS {
        Side::On
    } else if s > 0.0 {
        Side::Left
    } else {
        Side::Right
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::q;

    fn aff(n: i64) -> CirclePoint {
        CirclePoint::from_affine(qi(n))
    }

    #[test]
    fn symmetric_quadruple_is_minus_one_exactly() {
        let cr = cross_ratio(&aff(-1), &aff(0), &aff(1), &CirclePoint::infinity()).unwrap();
        assert_eq!(cr.exact().unwrap(), &qi(-1));
    }

    #[test]
    fn hand_evaluated_cross_ratio() {
        let cr = cross_ratio(&aff(0), &aff(1), &aff(2), &aff(3)).unwrap();
        assert_eq!(cr.exact().unwrap(), &q(-1, 3));
        assert_eq!(cross_ratio(&aff(0), &aff(0), &aff(2), &aff(3)), Err(Error::CoincidentPoints));
    }

    #[test]
    fn symmetric_position_tests() {
        let half = Real::Exact(q(1, 2));
        assert!(is_symmetric(&aff(-1), &aff(0), &aff(1), &CirclePoint::infinity(), &half).unwrap());
        assert!(!is_symmetric(&aff(0), &aff(1), &aff(2), &aff(3), &half).unwrap());
    }

    #[test]
    fn turns_and_affine_agree() {
        let a = CirclePoint::from_turns(q(1, 4));
        assert!(a.same(&aff(1)));
        assert!(CirclePoint::from_turns(q(1, 2)).same(&CirclePoint::infinity()));
        assert!(CirclePoint::from_turns(q(3, 4)).same(&aff(-1)));
        let f = CirclePoint::from_turns_f64(0.125);
        assert!((f.affine_f64() - (PI / 8.0).tan()).abs() < 1e-15);
        assert!((aff(-1).turns_f64() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn mobius_from_triples_examples() {
        let (z, o, inf) = (aff(0), aff(1), CirclePoint::infinity());
        let id = mobius_from_triples([&z, &o, &inf], [&z, &o, &inf]).unwrap();
        assert!(id.distance(&MobiusMap::identity()) < 1e-12);
        let t = mobius_from_triples([&z, &o, &inf], [&aff(1), &aff(2), &inf]).unwrap();
        assert!(t.distance(&MobiusMap::new(1.0, 1.0, 0.0, 1.0).unwrap()) < 1e-12);
        let src = [aff(-1), aff(0), aff(1)];
        let dst = [aff(0), aff(1), inf.clone()];
        let m = mobius_from_triples([&src[0], &src[1], &src[2]], [&dst[0], &dst[1], &dst[2]]).unwrap();
        for (s, d) in src.iter().zip(dst.iter()) {
            assert!(wedge_f(m.apply(s).homogeneous(), d.homogeneous()).abs() < 1e-10);
        }
        assert!(matches!(
            mobius_from_triples([&z, &o, &inf], [&o, &z, &inf]),
            Err(Error::OrientationMismatch(_))
        ));
        assert_eq!(mobius_from_triples([&z, &z, &inf], [&z, &o, &inf]), Err(Error::DegenerateTriple));
    }

    #[test]
    fn relations() {
        let g = |a: CirclePoint, b: CirclePoint| Geodesic::new(a, b).unwrap();
        assert_eq!(
            geodesic_relation(&g(aff(0), CirclePoint::infinity()), &g(aff(-1), aff(1))),
            GeodesicRelation::Cross
        );
        assert_eq!(geodesic_relation(&g(aff(0), aff(1)), &g(aff(2), aff(3))), GeodesicRelation::Disjoint);
        assert_eq!(geodesic_relation(&g(aff(0), aff(1)), &g(aff(1), aff(2))), GeodesicRelation::SharedEndpoint);
    }

    #[test]
    fn rhombus_perpendicular() {
        let h1 = Geodesic::new(aff(-1), aff(0)).unwrap();
        let h2 = Geodesic::new(aff(1), CirclePoint::infinity()).unwrap();
        let l = common_perpendicular_length(&h1, &h2).unwrap();
        assert!((l - 2.0 * 1f64.asinh()).abs() < 1e-12);
        assert!((l - 1.762747).abs() < 1e-6);
    }

    #[test]
    fn perpendicular_matches_minimization() {
        let g1 = Geodesic::new(aff(0), aff(1)).unwrap();
        let g2 = Geodesic::new(aff(2), aff(3)).unwrap();
        // brute force over points of both geodesics in the upper half-plane
        let point = |a: f64, b: f64, s: f64| {
            let c = (a + b) / 2.0;
            let r = (b - a) / 2.0;
            let th = std::f64::consts::PI * s;
            (c + r * th.cos(), r * th.sin())
        };
        let dist = |p: (f64, f64), q: (f64, f64)| {
            let d2 = (p.0 - q.0).powi(2) + (p.1 - q.1).powi(2);
            (1.0 + d2 / (2.0 * p.1 * q.1)).acosh()
        };
        let mut best = f64::INFINITY;
        let n = 2000;
        for i in 1..n {
            for j in 1..n {
                let (s, t) = (i as f64 / n as f64, j as f64 / n as f64);
                best = best.min(dist(point(0.0, 1.0, s), point(2.0, 3.0, t)));
            }
        }
        let l = common_perpendicular_length(&g1, &g2).unwrap();
        assert!((l - best).abs() < 1e-5, "{l} vs {best}");
    }

    #[test]
    fn translation_examples() {
        let g = Geodesic::new(aff(0), CirclePoint::infinity()).unwrap();
        let w = 0.7;
        let t = translation_along(&g, w);
        assert!(t.distance(&MobiusMap { m: [(w / 2.0).exp(), 0.0, 0.0, (-w / 2.0).exp()] }) < 1e-12);
        assert!((t.apply(&aff(1)).affine_f64() - w.exp()).abs() < 1e-12);
        assert!(translation_along(&g, 0.0).distance(&MobiusMap::identity()) < 1e-12);
        let g2 = Geodesic::new(aff(2), aff(-3)).unwrap();
        let t2 = translation_along(&g2, 1.3);
        assert!(t2.apply(&g2.a).same(&g2.a) && t2.apply(&g2.b).same(&g2.b));
        let fps = t2.fixed_points();
        assert_eq!(fps.len(), 2);
        assert!(fps.iter().all(|p| g2.has_endpoint(p)));
    }

    #[test]
    fn visual_distance_examples() {
        let o = HypPoint::origin();
        let a = CirclePoint::from_turns(qi(0));
        let b = CirclePoint::from_turns(q(1, 4));
        assert!((visual_distance(&o, &a, &b) - PI / 2.0).abs() < 1e-12);
        assert!(visual_distance(&o, &a, &a).abs() < 1e-7);
        let a = CirclePoint::from_turns_f64(0.0);
        let b = CirclePoint::from_turns_f64(0.45);
        let mut last = visual_distance(&o, &a, &b);
        for k in 1..10 {
            let p = HypPoint::from_polar(&a, k as f64 * 0.5);
            let v = visual_distance(&p, &a, &b);
            assert!(v > last && v <= PI);
            last = v;
        }
    }

    #[test]
    fn sides() {
        let g = Geodesic::new(aff(0), CirclePoint::infinity()).unwrap();
        let o = HypPoint::origin();
        let s = segment_side(&g, &o);
        assert_eq!(s, Side::On);
        let up = HypPoint::from_disk(0.0, 0.5).unwrap();
        let s = segment_side(&g, &up);
        assert_ne!(s, Side::On);
        let flipped = segment_side(&g.reversed(), &up);
        assert_ne!(flipped, s);
        assert_ne!(flipped, Side::On);
        // left of 0 → ∞ is the negative half-line, turn 3/4
        assert_eq!(ideal_side(&g, &aff(-1)), Side::Left);
        assert_eq!(segment_side(&g, &HypPoint::from_disk(0.0, -0.5).unwrap()), Side::Left);
    }
}
