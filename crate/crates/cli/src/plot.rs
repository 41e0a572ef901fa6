use std::f64::consts::PI;

use adsbend_core::circle::CirclePoint;
use adsbend_core::circle_map::DiscreteCircleMap;
use adsbend_core::hull::{EdgeKind, IdealPolyhedron};
use adsbend_core::lamination::PolyhedralLamination;
use svg::node::element::{Circle, Group, Line, Polyline, Rectangle, Text};
use svg::Document;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

fn fmt(x: f64) -> String {
    format!("{x:.3}")
}

fn document() -> Document {
    Document::new()
        .set("viewBox", (0, 0, SIZE, SIZE))
        .set("width", SIZE)
        .set("height", SIZE)
        .add(Rectangle::new().set("width", SIZE).set("height", SIZE).set("fill", "white"))
}

fn disk_xy(p: [f64; 2]) -> (f64, f64) {
    let r = SIZE / 2.0 - MARGIN;
    (SIZE / 2.0 + r * p[0], SIZE / 2.0 - r * p[1])
}

fn boundary_point(x: &CirclePoint) -> [f64; 2] {
    let a = 2.0 * PI * x.turns_f64();
    [a.cos(), a.sin()]
}

/// Samples the geodesic as a Klein chord mapped to the Poincaré disk.
fn geodesic_points(a: &CirclePoint, b: &CirclePoint) -> String {
    let (p, q) = (boundary_point(a), boundary_point(b));
    (0..=64)
        .map(|i| {
            let s = i as f64 / 64.0;
            let k = [p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])];
            let n2 = (k[0] * k[0] + k[1] * k[1]).min(1.0);
            let f = 1.0 / (1.0 + (1.0 - n2).sqrt());
            let (x, y) = disk_xy([k[0] * f, k[1] * f]);
            format!("{},{}", fmt(x), fmt(y))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn leaves(lam: &PolyhedralLamination, color: &str) -> Group {
    let max = lam.leaves.iter().map(|l| l.w.to_f64()).fold(0.0, f64::max).max(1e-12);
    lam.leaves.iter().fold(Group::new(), |g, l| {
        let width = 0.8 + 3.2 * l.w.to_f64() / max;
        g.add(
            Polyline::new()
                .set("points", geodesic_points(&l.g.a, &l.g.b))
                .set("fill", "none")
                .set("stroke", color)
                .set("stroke-width", fmt(width)),
        )
    })
}

pub fn laminations(first: &PolyhedralLamination, second: Option<&PolyhedralLamination>) -> String {
    let (cx, cy) = disk_xy([0.0, 0.0]);
    let mut doc = document().add(
        Circle::new()
            .set("cx", fmt(cx))
            .set("cy", fmt(cy))
            .set("r", fmt(SIZE / 2.0 - MARGIN))
            .set("fill", "none")
            .set("stroke", "black"),
    );
    doc = doc.add(leaves(first, "#c0392b"));
    if let Some(s) = second {
        doc = doc.add(leaves(s, "#2471a3"));
    }
    doc.to_string()
}

fn torus_xy(l: f64, r: f64) -> (f64, f64) {
    let side = SIZE - 2.0 * MARGIN;
    (MARGIN + side * l, SIZE - MARGIN - side * r)
}

/// The graph of the map on the square of left and right coordinates, with the rulings through each point.
pub fn torus(m: &DiscreteCircleMap) -> String {
    let side = SIZE - 2.0 * MARGIN;
    let mut doc = document().add(
        Rectangle::new()
            .set("x", MARGIN)
            .set("y", MARGIN)
            .set("width", side)
            .set("height", side)
            .set("fill", "none")
            .set("stroke", "black"),
    );
    let pts: Vec<(f64, f64)> = m.pairs().map(|(x, v)| (x.turns_f64(), v.turns_f64())).collect();
    let mut rulings = Group::new().set("stroke", "#bbbbbb").set("stroke-width", "0.6");
    for &(l, r) in &pts {
        let (x0, y0) = torus_xy(l, 0.0);
        let (_, y1) = torus_xy(l, 1.0);
        rulings = rulings.add(Line::new().set("x1", fmt(x0)).set("y1", fmt(y0)).set("x2", fmt(x0)).set("y2", fmt(y1)));
        let (a, yr) = torus_xy(0.0, r);
        let (b, _) = torus_xy(1.0, r);
        rulings = rulings.add(Line::new().set("x1", fmt(a)).set("y1", fmt(yr)).set("x2", fmt(b)).set("y2", fmt(yr)));
    }
    doc = doc.add(rulings);
    let n = pts.len();
    let mut curve = Group::new().set("stroke", "#c0392b").set("stroke-width", "1.5");
    for i in 0..n {
        let (l0, r0) = pts[i];
        let (mut l1, mut r1) = pts[(i + 1) % n];
        if l1 < l0 {
            l1 += 1.0;
        }
        if r1 < r0 {
            r1 += 1.0;
        }
        for shift in [(0.0, 0.0), (-1.0, 0.0), (0.0, -1.0), (-1.0, -1.0)] {
            let (a, b) = torus_xy(l0 + shift.0, r0 + shift.1);
            let (c, d) = torus_xy(l1 + shift.0, r1 + shift.1);
            if (a.max(c) > MARGIN) && (b.min(d) < SIZE - MARGIN) {
                curve = curve.add(Line::new().set("x1", fmt(a)).set("y1", fmt(b)).set("x2", fmt(c)).set("y2", fmt(d)));
            }
        }
    }
    let clip = svg::node::element::ClipPath::new()
        .set("id", "square")
        .add(Rectangle::new().set("x", MARGIN).set("y", MARGIN).set("width", side).set("height", side));
    doc = doc.add(svg::node::element::Definitions::new().add(clip)).add(curve.set("clip-path", "url(#square)"));
    for &(l, r) in &pts {
        let (x, y) = torus_xy(l, r);
        doc = doc.add(Circle::new().set("cx", fmt(x)).set("cy", fmt(y)).set("r", 2.5).set("fill", "black"));
    }
    doc.add(Text::new("left").set("x", SIZE / 2.0).set("y", SIZE - 6.0).set("font-size", 12))
        .add(Text::new("right").set("x", 4.0).set("y", SIZE / 2.0).set("font-size", 12))
        .to_string()
}

/// Edges of the polyhedron under a fixed oblique projection of the affine chart.
pub fn wireframe(p: &IdealPolyhedron) -> String {
    let pts = p.chart_coordinates();
    let (ca, sa, cb, sb) = (0.5f64.cos(), 0.5f64.sin(), 0.35f64.cos(), 0.35f64.sin());
    let proj: Vec<[f64; 2]> = pts
        .iter()
        .map(|v| {
            let x = ca * v[0] - sa * v[1];
            let y = sa * v[0] + ca * v[1];
            [x, cb * v[2] - sb * y]
        })
        .collect();
    let span = proj.iter().flat_map(|q| [q[0].abs(), q[1].abs()]).fold(1e-12, f64::max);
    let scale = (SIZE / 2.0 - MARGIN) / span;
    let at = |q: [f64; 2]| (SIZE / 2.0 + scale * q[0], SIZE / 2.0 - scale * q[1]);
    let mut doc = document();
    for e in &p.edges {
        let (color, width) = match e.kind {
            EdgeKind::Equator => ("black", 1.8),
            EdgeKind::BendFuture => ("#c0392b", 1.2),
            EdgeKind::BendPast => ("#2471a3", 1.2),
        };
        let (a, b) = (at(proj[e.i]), at(proj[e.j]));
        doc = doc.add(
            Line::new()
                .set("x1", fmt(a.0))
                .set("y1", fmt(a.1))
                .set("x2", fmt(b.0))
                .set("y2", fmt(b.1))
                .set("stroke", color)
                .set("stroke-width", width),
        );
    }
    for (i, q) in proj.iter().enumerate() {
        let (x, y) = at(*q);
        doc = doc
            .add(Circle::new().set("cx", fmt(x)).set("cy", fmt(y)).set("r", 2.5).set("fill", "black"))
            .add(Text::new(i.to_string()).set("x", fmt(x + 4.0)).set("y", fmt(y - 4.0)).set("font-size", 11));
    }
    doc.to_string()
}
