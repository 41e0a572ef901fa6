//! Incremental convex hull of points in R³.

use std::collections::HashSet;

use robust::{orient3d, Coord3D};

fn c(p: &[f64; 3]) -> Coord3D<f64> {
    Coord3D { x: p[0], y: p[1], z: p[2] }
}

/// Positive when `d` lies on the outer side of the counterclockwise triangle `abc`.
fn above(p: &[[f64; 3]], f: [usize; 3], d: usize) -> f64 {
    -orient3d(c(&p[f[0]]), c(&p[f[1]]), c(&p[f[2]]), c(&p[d]))
}

fn dist2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).powi(2)).sum()
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) enum Hull3 {
    /// Outward counterclockwise triangles.
    Solid(Vec<[usize; 3]>),
    Flat,
}

/// Convex hull after normalizing to the unit box. Points within `tol` of a
/// face plane are treated as lying on it and become vertices.
pub(crate) fn hull3(raw: &[[f64; 3]], tol: f64) -> Hull3 {
    let n = raw.len();
    if n < 4 {
        return Hull3::Flat;
    }
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for q in raw {
        for i in 0..3 {
            lo[i] = lo[i].min(q[i]);
            hi[i] = hi[i].max(q[i]);
        }
    }
    let s = (0..3).map(|i| hi[i] - lo[i]).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let p: Vec<[f64; 3]> = raw.iter().map(|q| [(q[0] - lo[0]) / s, (q[1] - lo[1]) / s, (q[2] - lo[2]) / s]).collect();

    let i0 = 0;
    let i1 = (0..n).max_by(|&a, &b| dist2(&p[i0], &p[a]).total_cmp(&dist2(&p[i0], &p[b]))).unwrap();
    let line = |k: usize| {
        let x = cross(&sub(&p[i1], &p[i0]), &sub(&p[k], &p[i0]));
        x.iter().map(|v| v * v).sum::<f64>()
    };
    let i2 = (0..n).max_by(|&a, &b| line(a).total_cmp(&line(b))).unwrap();
    let vol = |k: usize| above(&p, [i0, i1, i2], k).abs();
    let i3 = (0..n).max_by(|&a, &b| vol(a).total_cmp(&vol(b))).unwrap();
    if vol(i3) <= tol {
        return Hull3::Flat;
    }
    let mut faces: Vec<[usize; 3]> = Vec::new();
    for (f, d) in [([i0, i1, i2], i3), ([i0, i1, i3], i2), ([i0, i2, i3], i1), ([i1, i2, i3], i0)] {
        faces.push(if above(&p, f, d) > 0.0 { [f[0], f[2], f[1]] } else { f });
    }
    for k in 0..n {
        if [i0, i1, i2, i3].contains(&k) {
            continue;
        }
        let visible: Vec<usize> = (0..faces.len()).filter(|&f| above(&p, faces[f], k) > -tol).collect();
        if visible.is_empty() {
            continue;
        }
        let fs = &faces;
        let edges: HashSet<(usize, usize)> =
            visible.iter().flat_map(|&f| (0..3).map(move |e| (fs[f][e], fs[f][(e + 1) % 3]))).collect();
        let horizon: Vec<(usize, usize)> = edges.iter().copied().filter(|&(u, v)| !edges.contains(&(v, u))).collect();
        let keep: HashSet<usize> = visible.into_iter().collect();
        let mut next: Vec<[usize; 3]> = faces.iter().enumerate().filter(|(i, _)| !keep.contains(i)).map(|(_, f)| *f).collect();
        next.extend(horizon.into_iter().map(|(u, v)| [u, v, k]));
        faces = next;
    }
    faces.sort();
    Hull3::Solid(faces)
}
