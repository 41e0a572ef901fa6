//! Projective model of anti-de Sitter space in signature (2,2).
//!
//! A vector `x = (x1, x2, x3, x4)` corresponds to the matrix
//! `[[x1 − x3, −x2 + x4], [x2 + x4, x1 + x3]]` whose determinant is `−q(x)`.
//! Boundary points are rank-one matrices `u vᵀ`; the column space `u` is the
//! left coordinate and the row space `v` the right one.

use std::f64::consts::PI;

use num_traits::Zero;

use crate::circle::{CirclePoint, MobiusMap};
use crate::error::{Error, Result};
use crate::real::Q;

pub type Vec4 = [f64; 4];

pub fn form(x: &Vec4, y: &Vec4) -> f64 {
    -x[0] * y[0] - x[1] * y[1] + x[2] * y[2] + x[3] * y[3]
}

pub fn form_q(x: &[Q; 4], y: &[Q; 4]) -> Q {
    -(&x[0] * &y[0]) - &x[1] * &y[1] + &x[2] * &y[2] + &x[3] * &y[3]
}

/// Row-major chart matrix of a vector.
pub fn chart_matrix(x: &Vec4) -> [f64; 4] {
    [x[0] - x[2], -x[1] + x[3], x[1] + x[3], x[0] + x[2]]
}

pub fn from_chart_matrix(m: &[f64; 4]) -> Vec4 {
    [(m[0] + m[3]) / 2.0, (m[2] - m[1]) / 2.0, (m[3] - m[0]) / 2.0, (m[2] + m[1]) / 2.0]
}

fn from_chart_matrix_q(m: [Q; 4]) -> [Q; 4] {
    let two = Q::from_integer(2.into());
    [
        (&m[0] + &m[3]) / &two,
        (&m[2] - &m[1]) / &two,
        (&m[3] - &m[0]) / &two,
        (&m[2] + &m[1]) / &two,
    ]
}

pub fn scale4(x: &Vec4, s: f64) -> Vec4 {
    [x[0] * s, x[1] * s, x[2] * s, x[3] * s]
}

pub fn add4(x: &Vec4, y: &Vec4) -> Vec4 {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]]
}

pub fn sub4(x: &Vec4, y: &Vec4) -> Vec4 {
    [x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]]
}

pub fn norm4(x: &Vec4) -> f64 {
    x.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// `u vᵀ` as a vector.
pub fn rank_one(u: [f64; 2], v: [f64; 2]) -> Vec4 {
    from_chart_matrix(&[u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1]])
}

/// A point of the boundary torus `RP¹ × RP¹`.
#[derive(Clone, Debug)]
pub struct EinPoint {
    pub l: CirclePoint,
    pub r: CirclePoint,
    v: Vec4,
}

impl EinPoint {
    /// Null representative built from the canonical homogeneous pairs.
    pub fn vector(&self) -> Vec4 {
        self.v
    }

    /// Exact null representative when both coordinates have exact projective data.
    pub fn exact_vector(&self) -> Option<[Q; 4]> {
        let (a, b) = self.l.exact_proj()?;
        let (c, d) = self.r.exact_proj()?;
        Some(from_chart_matrix_q([a * c, a * d, b * c, b * d]))
    }
}

pub fn ein_from_lr(l: CirclePoint, r: CirclePoint) -> EinPoint {
    let v = rank_one(l.homogeneous(), r.homogeneous());
    EinPoint { l, r, v }
}

pub fn left_projection(p: &EinPoint) -> CirclePoint {
    p.l.clone()
}

pub fn right_projection(p: &EinPoint) -> CirclePoint {
    p.r.clone()
}

/// Factors a null vector into its column and row classes.
pub fn projective_to_ein(x: &Vec4) -> Result<EinPoint> {
    let n = norm4(x);
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    let m = chart_matrix(&scale4(x, 1.0 / n));
    let det = m[0] * m[3] - m[1] * m[2];
    if det.abs() > 1e-10 {
        return Err(Error::NotNull);
    }
    let (c0, c1) = ([m[0], m[2]], [m[1], m[3]]);
    let col = if c0[0].hypot(c0[1]) >= c1[0].hypot(c1[1]) { c0 } else { c1 };
    let (r0, r1) = ([m[0], m[1]], [m[2], m[3]]);
    let row = if r0[0].hypot(r0[1]) >= r1[0].hypot(r1[1]) { r0 } else { r1 };
    Ok(ein_from_lr(CirclePoint::from_homogeneous(col[0], col[1]), CirclePoint::from_homogeneous(row[0], row[1])))
}

/// A point of AdS, `⟨x,x⟩ = −1`, identified with its negative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdSPoint(pub Vec4);

impl AdSPoint {
    pub fn new(x: Vec4) -> Result<Self> {
        let q = form(&x, &x);
        if !(q < 0.0) {
            return Err(Error::DegenerateInput("vector is not timelike".into()));
        }
        let mut y = scale4(&x, 1.0 / (-q).sqrt());
        if let Some(f) = y.iter().find(|a| **a != 0.0) {
            if *f < 0.0 {
                y = scale4(&y, -1.0);
            }
        }
        Ok(AdSPoint(y))
    }
}

/// Length of the timelike geodesic between two points, with the sign
/// ambiguity resolved into `[0, π/2]`; `None` when spacelike related.
pub fn timelike_distance(x: &AdSPoint, y: &AdSPoint) -> Option<f64> {
    let c = form(&x.0, &y.0).abs();
    if c > 1.0 + 1e-12 {
        return None;
    }
    Some(c.min(1.0).acos())
}

/// A linear map of `R^{2,2}`, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry {
    pub m: [[f64; 4]; 4],
}

impl Isometry {
    pub fn apply(&self, x: &Vec4) -> Vec4 {
        let mut y = [0.0; 4];
        for (i, row) in self.m.iter().enumerate() {
            y[i] = row.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
        }
        y
    }

    pub fn apply_ein(&self, p: &EinPoint) -> Result<EinPoint> {
        projective_to_ein(&self.apply(&p.vector()))
    }
}

/// The isometry `M ↦ mL M mRᵀ`, acting by `(mL, mR)` on the boundary.
pub fn isometry_from_pair(ml: &MobiusMap, mr: &MobiusMap) -> Isometry {
    let mul = |a: &[f64; 4], b: &[f64; 4]| {
        [a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]]
    };
    let rt = [mr.m[0], mr.m[2], mr.m[1], mr.m[3]];
    let mut m = [[0.0; 4]; 4];
    for j in 0..4 {
        let mut e = [0.0; 4];
        e[j] = 1.0;
        let img = from_chart_matrix(&mul(&mul(&ml.m, &chart_matrix(&e)), &rt));
        for (i, row) in m.iter_mut().enumerate() {
            row[j] = img[i];
        }
    }
    Isometry { m }
}

/// A spacelike plane, given by its timelike unit normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpacelikePlane {
    pub n: Vec4,
}

fn unit_lift(t: f64) -> [f64; 2] {
    [(PI * t).sin(), (PI * t).cos()]
}

/// Forward step between consecutive coordinates, in turns.
fn step(a: &CirclePoint, b: &CirclePoint) -> f64 {
    if a.same(b) {
        0.0
    } else {
        crate::circle::arc_turns(a, b)
    }
}

/// Null representatives of a cyclic sequence of boundary points with
/// pairwise non-positive products: both coordinates are unwrapped
/// monotonically along the sequence and lifted as `(sin πt, cos πt)`.
pub fn consistent_lift(points: &[EinPoint]) -> Result<Vec<Vec4>> {
    let n = points.len();
    if n == 0 {
        return Ok(vec![]);
    }
    let (mut tl, mut tr) = (points[0].l.turns_f64(), points[0].r.turns_f64());
    let (mut wl, mut wr) = (0.0, 0.0);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 {
            let dl = step(&points[i - 1].l, &points[i].l);
            let dr = step(&points[i - 1].r, &points[i].r);
            tl += dl;
            tr += dr;
            wl += dl;
            wr += dr;
        }
        out.push(rank_one(unit_lift(tl), unit_lift(tr)));
    }
    if n >= 2 {
        wl += step(&points[n - 1].l, &points[0].l);
        wr += step(&points[n - 1].r, &points[0].r);
        if (wl - 1.0).abs() > 1e-9 || (wr - 1.0).abs() > 1e-9 {
            return Err(Error::NotAcausal(format!("sequence winds {wl:.3} times on the left, {wr:.3} on the right")));
        }
    }
    Ok(out)
}

/// A spacelike plane missing every point, certifying an affine chart.
pub fn disjoint_spacelike_plane(points: &[EinPoint]) -> Result<SpacelikePlane> {
    let lifts = consistent_lift(points).map_err(|e| Error::NoChartFound(e.to_string()))?;
    for (i, a) in lifts.iter().enumerate() {
        for (j, b) in lifts.iter().enumerate().skip(i + 1) {
            if form(a, b) > 1e-12 {
                return Err(Error::NoChartFound(format!("points {i} and {j} are causally related")));
            }
        }
    }
    let s = lifts.iter().fold([0.0; 4], |acc, v| sub4(&acc, v));
    let q = form(&s, &s);
    if !(q < 0.0) {
        return Err(Error::NoChartFound("sum of lifts is not timelike".into()));
    }
    let n = scale4(&s, 1.0 / (-q).sqrt());
    if let Some(j) = lifts.iter().position(|v| form(&n, v) <= 0.0) {
        return Err(Error::NoChartFound(format!("point {j} is not on the positive side")));
    }
    Ok(SpacelikePlane { n })
}

/// Smallest `⟨n, v⟩ / |v|` over the lifts.
pub fn chart_margin(plane: &SpacelikePlane, lifts: &[Vec4]) -> f64 {
    lifts.iter().map(|v| form(&plane.n, v) / norm4(v)).fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug)]
pub struct Rhombus {
    /// `(a,b), (a′,b), (a′,b′), (a,b′)` in cyclic order.
    pub points: Vec<EinPoint>,
    pub lightlike_edges: [(usize, usize); 4],
    pub axes: [(usize, usize); 2],
}

pub fn rhombus(a: &CirclePoint, a2: &CirclePoint, b: &CirclePoint, b2: &CirclePoint) -> Result<Rhombus> {
    if a.same(a2) || b.same(b2) {
        return Err(Error::DegenerateInput("rhombus needs a ≠ a′ and b ≠ b′".into()));
    }
    let points = vec![
        ein_from_lr(a.clone(), b.clone()),
        ein_from_lr(a2.clone(), b.clone()),
        ein_from_lr(a2.clone(), b2.clone()),
        ein_from_lr(a.clone(), b2.clone()),
    ];
    Ok(Rhombus { points, lightlike_edges: [(0, 1), (1, 2), (2, 3), (3, 0)], axes: [(0, 2), (1, 3)] })
}

/// The standard rhombus at quarter turns.
pub fn standard_rhombus() -> Rhombus {
    let t = |n: i64| CirclePoint::from_turns(Q::new(n.into(), 4.into()));
    rhombus(&t(0), &t(1), &t(2), &t(3)).expect("distinct quarter turns")
}

/// Whether `q` vanishes exactly on the exact representative.
pub fn is_exactly_null(p: &EinPoint) -> Option<bool> {
    p.exact_vector().map(|v| form_q(&v, &v).is_zero())
}

/// Form-dual normal of the hyperplane spanned by three vectors, via cofactors.
pub fn hyperplane_normal(p: &[Vec4]) -> Vec4 {
    let mut e = [0.0; 4];
    for (j, ej) in e.iter_mut().enumerate() {
        let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
        let m = nalgebra::Matrix3::from_fn(|r, c| p[r][cols[c]]);
        *ej = if j % 2 == 0 { m.determinant() } else { -m.determinant() };
    }
    [-e[0], -e[1], e[2], e[3]]
}
