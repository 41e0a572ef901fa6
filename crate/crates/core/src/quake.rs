//! Discrete earthquakes, the earthquake operator and quasisymmetry estimates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle::{circle_distance_turns, cross_ratio, ideal_side, mobius_from_triples, translation_along, CirclePoint, Geodesic, MobiusMap, Side};
use crate::circle_map::{CircleMap, DiscreteCircleMap};
use crate::error::{Error, Result};
use crate::hull::{bending_laminations, IdealPolyhedron, PleatedBoundary};
use crate::lamination::{Leaf, PolyhedralLamination};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    Left,
    Right,
}

impl Chirality {
    pub fn other(self) -> Self {
        match self {
            Chirality::Left => Chirality::Right,
            Chirality::Right => Chirality::Left,
        }
    }

    fn sign(self) -> f64 {
        match self {
            Chirality::Left => 1.0,
            Chirality::Right => -1.0,
        }
    }
}

impl std::str::FromStr for Chirality {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" | "l" => Ok(Chirality::Left),
            "right" | "r" => Ok(Chirality::Right),
            _ => Err(Error::Parse(format!("unknown chirality {s:?}"))),
        }
    }
}

/// Earthquake along a finite lamination, normalized to fix the stratum of `base`.
#[derive(Clone, Debug)]
pub struct EarthquakeMap {
    pub lamination: PolyhedralLamination,
    pub chirality: Chirality,
    pub base: CirclePoint,
}

fn strictly_separates(g: &Geodesic, x: &CirclePoint, y: &CirclePoint) -> bool {
    g.separates(x, y)
}

impl EarthquakeMap {
    pub fn new(lamination: PolyhedralLamination, chirality: Chirality, base: CirclePoint) -> Result<Self> {
        if lamination.leaves.iter().any(|l| l.g.has_endpoint(&base)) {
            return Err(Error::DegenerateInput("base point is a leaf endpoint".into()));
        }
        Ok(EarthquakeMap { lamination, chirality, base })
    }

    /// Leaves strictly between the base and `x`, nearest first.
    fn separating(&self, x: &CirclePoint) -> Vec<&Leaf> {
        let sep: Vec<&Leaf> = self.lamination.leaves.iter().filter(|l| strictly_separates(&l.g, &self.base, x)).collect();
        let behind = |outer: &Leaf, inner: &Leaf| {
            [&inner.g.a, &inner.g.b].into_iter().any(|p| strictly_separates(&outer.g, &self.base, p))
        };
        let mut keyed: Vec<(usize, &Leaf)> = sep
            .iter()
            .map(|l| (sep.iter().filter(|m| !std::ptr::eq(**m, *l) && behind(m, l)).count(), *l))
            .collect();
        keyed.sort_by_key(|(d, _)| *d);
        keyed.into_iter().map(|(_, l)| l).collect()
    }

    /// The Möbius map applied to the stratum containing `x`.
    pub fn stratum_map(&self, x: &CirclePoint) -> MobiusMap {
        let mut m = MobiusMap::identity();
        for leaf in self.separating(x) {
            let g = if ideal_side(&leaf.g, &self.base) == Side::Left { leaf.g.clone() } else { leaf.g.reversed() };
            m = m.compose(&translation_along(&g, self.chirality.sign() * leaf.w.to_f64()));
        }
        m
    }
}

impl CircleMap for EarthquakeMap {
    fn eval(&self, x: &CirclePoint) -> Result<CirclePoint> {
        Ok(self.stratum_map(x).apply(x))
    }
}

pub fn earthquake_eval(lam: &PolyhedralLamination, chirality: Chirality, base: &CirclePoint, x: &CirclePoint) -> Result<CirclePoint> {
    EarthquakeMap::new(lam.clone(), chirality, base.clone())?.eval(x)
}

/// A base point in the gap after the first endpoint (or `fallback` for an empty lamination).
pub fn default_base(lam: &PolyhedralLamination, fallback: &CirclePoint) -> CirclePoint {
    let mut ends = lam.endpoints();
    if ends.len() < 2 {
        return if ends.first().is_some_and(|e| e.same(fallback)) { fallback.shifted(&crate::real::q(1, 2)) } else { fallback.clone() };
    }
    crate::circle::sort_cyclic(&mut ends);
    midpoint(&ends[0], &ends[1])
}

/// Midpoint of the counterclockwise arc from `a` to `b`.
pub fn midpoint(a: &CirclePoint, b: &CirclePoint) -> CirclePoint {
    match (a.exact_turns(), b.exact_turns()) {
        (Some(x), Some(y)) => {
            let mut d = y - x;
            if d <= crate::real::qi(0) {
                d += crate::real::qi(1);
            }
            a.shifted(&(d / crate::real::qi(2)))
        }
        _ => CirclePoint::from_turns_f64(a.turns_f64() + crate::circle::arc_turns(a, b) / 2.0),
    }
}

/// Largest angular deviation, in radians, after fitting a Möbius map on three of the points.
pub fn mobius_fit_residual(src: &[CirclePoint], dst: &[CirclePoint]) -> f64 {
    let n = src.len();
    if n < 3 {
        return 0.0;
    }
    let idx = [0, n / 3, (2 * n) / 3];
    let m = match mobius_from_triples([&src[idx[0]], &src[idx[1]], &src[idx[2]]], [&dst[idx[0]], &dst[idx[1]], &dst[idx[2]]]) {
        Ok(m) => m,
        Err(_) => return std::f64::consts::PI,
    };
    src.iter()
        .zip(dst)
        .map(|(s, d)| 2.0 * std::f64::consts::PI * circle_distance_turns(&m.apply(s), d))
        .fold(0.0, f64::max)
}

/// Residual of the claim `targets ≈ m ∘ E(sources)` and of the opposite chirality.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProjectionCheck {
    pub chirality: Chirality,
    pub residual: f64,
    pub control: f64,
}

fn check_projection(lam: &PolyhedralLamination, src: &[CirclePoint], dst: &[CirclePoint], chirality: Chirality) -> Result<ProjectionCheck> {
    let base = midpoint(&src[0], &src[1]);
    let run = |c: Chirality| -> Result<f64> {
        let e = EarthquakeMap::new(lam.clone(), c, base.clone())?;
        let img = src.iter().map(|x| e.eval(x)).collect::<Result<Vec<_>>>()?;
        Ok(mobius_fit_residual(&img, dst))
    };
    Ok(ProjectionCheck { chirality, residual: run(chirality)?, control: run(chirality.other())? })
}

/// The four developing maps of a polyhedron compared with earthquakes along its bending laminations.
#[derive(Clone, Debug, Serialize)]
pub struct MessReport {
    pub plus_to_left: ProjectionCheck,
    pub plus_to_right: ProjectionCheck,
    pub minus_to_left: ProjectionCheck,
    pub minus_to_right: ProjectionCheck,
}

impl MessReport {
    pub fn max_residual(&self) -> f64 {
        [self.plus_to_left, self.plus_to_right, self.minus_to_left, self.minus_to_right].iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn min_control(&self) -> f64 {
        [self.plus_to_left, self.plus_to_right, self.minus_to_left, self.minus_to_right].iter().map(|c| c.control).fold(f64::INFINITY, f64::min)
    }
}

pub fn verify_mess_projections(p: &IdealPolyhedron) -> Result<MessReport> {
    let b = bending_laminations(p)?;
    let left: Vec<CirclePoint> = p.vertices.iter().map(|v| v.l.clone()).collect();
    let right: Vec<CirclePoint> = p.vertices.iter().map(|v| v.r.clone()).collect();
    Ok(MessReport {
        plus_to_left: check_projection(&b.plus.lamination, &b.plus.positions, &left, Chirality::Left)?,
        plus_to_right: check_projection(&b.plus.lamination, &b.plus.positions, &right, Chirality::Right)?,
        minus_to_left: check_projection(&b.minus.lamination, &b.minus.positions, &left, Chirality::Right)?,
        minus_to_right: check_projection(&b.minus.lamination, &b.minus.positions, &right, Chirality::Left)?,
    })
}

/// Bending lamination with its leaves moved to the given vertex positions and weights scaled.
fn relocate(pb: &PleatedBoundary, at: &[CirclePoint], factor: f64) -> Result<PolyhedralLamination> {
    let leaves = pb
        .edges
        .iter()
        .zip(&pb.lamination.leaves)
        .map(|(&(i, j), l)| Leaf::new(at[i].clone(), at[j].clone(), l.w.to_f64() * factor))
        .collect::<Result<Vec<_>>>()?;
    Ok(PolyhedralLamination::new_unchecked(leaves, true))
}

/// The left-to-right vertex correspondence against earthquakes along twice the bending laminations.
#[derive(Clone, Debug, Serialize)]
pub struct FixedPointCheck {
    pub plus: ProjectionCheck,
    pub minus: ProjectionCheck,
}

pub fn verify_mess22(p: &IdealPolyhedron) -> Result<FixedPointCheck> {
    let b = bending_laminations(p)?;
    let left: Vec<CirclePoint> = p.vertices.iter().map(|v| v.l.clone()).collect();
    let right: Vec<CirclePoint> = p.vertices.iter().map(|v| v.r.clone()).collect();
    Ok(FixedPointCheck {
        plus: check_projection(&relocate(&b.plus, &right, 2.0)?, &right, &left, Chirality::Left)?,
        minus: check_projection(&relocate(&b.minus, &right, 2.0)?, &right, &left, Chirality::Right)?,
    })
}

/// `x ↦ E_{u_*λ}(u(x))`, with the earthquake normalized at `u(β)`.
pub struct OperatorImage<'a, M: ?Sized> {
    pub quake: EarthquakeMap,
    pub u: &'a M,
}

impl<M: CircleMap + ?Sized> CircleMap for OperatorImage<'_, M> {
    fn eval(&self, x: &CirclePoint) -> Result<CirclePoint> {
        self.quake.eval(&self.u.eval(x)?)
    }
}

pub fn earthquake_operator<'a, M: CircleMap + ?Sized>(
    lam: &PolyhedralLamination,
    u: &'a M,
    chirality: Chirality,
    beta: &CirclePoint,
) -> Result<OperatorImage<'a, M>> {
    let pushed = lam.pushforward(u)?;
    let quake = EarthquakeMap::new(pushed, chirality, u.eval(beta)?)?;
    Ok(OperatorImage { quake, u })
}

/// Largest angular distance, in radians, between `𝓔(λ)(𝓔(λ)(u))` and `𝓔(2λ)(u)` on the samples.
pub fn flow_identity_check<M: CircleMap + ?Sized>(
    lam: &PolyhedralLamination,
    u: &M,
    chirality: Chirality,
    beta: &CirclePoint,
    samples: &[CirclePoint],
) -> Result<f64> {
    let once = earthquake_operator(lam, u, chirality, beta)?;
    let twice = earthquake_operator(lam, &once, chirality, beta)?;
    let double = earthquake_operator(&lam.scaled(&crate::real::qi(2)), u, chirality, beta)?;
    let mut worst: f64 = 0.0;
    for x in samples {
        let d = circle_distance_turns(&twice.eval(x)?, &double.eval(x)?);
        worst = worst.max(2.0 * std::f64::consts::PI * d);
    }
    Ok(worst)
}

/// Discrete quasi-symmetry constant of an order-preserving map.
#[derive(Clone, Debug, Serialize)]
pub struct QSReport {
    pub eps: f64,
    pub k: f64,
    /// Support indices of the extremal symmetric quadruple.
    pub witness: Option<[usize; 4]>,
    pub examined: usize,
    /// Whether the support was subsampled.
    pub sampled: bool,
}

/// Largest support size enumerated exhaustively.
pub const QS_MAX_POINTS: usize = 64;

fn near_minus_one(c: f64, eps: f64) -> bool {
    (c + 1.0).abs() <= eps || (c != 0.0 && (1.0 / c + 1.0).abs() <= eps)
}

pub fn qs_constant(v: &DiscreteCircleMap, eps: f64) -> Result<QSReport> {
    let n = v.len();
    if n < 4 {
        return Err(Error::TooFewPoints { need: 4, got: n });
    }
    let sampled = n > QS_MAX_POINTS;
    let idx: Vec<usize> = if sampled { (0..QS_MAX_POINTS).map(|i| i * n / QS_MAX_POINTS).collect() } else { (0..n).collect() };
    let (x, y) = (v.support(), v.values());
    let m = idx.len();
    let per_first: Vec<Result<(usize, f64, Option<[usize; 4]>)>> = (0..m)
        .into_par_iter()
        .map(|a| {
            let mut count = 0;
            let mut best: (f64, Option<[usize; 4]>) = (1.0, None);
            for b in a + 1..m {
                for c in b + 1..m {
                    for d in c + 1..m {
                        count += 1;
                        let q = [idx[a], idx[b], idx[c], idx[d]];
                        let cr = cross_ratio(&x[q[0]], &x[q[1]], &x[q[2]], &x[q[3]])?.to_f64();
                        if !near_minus_one(cr, eps) {
                            continue;
                        }
                        let img = cross_ratio(&y[q[0]], &y[q[1]], &y[q[2]], &y[q[3]])?.to_f64();
                        if img >= 0.0 {
                            return Err(Error::OrientationViolation(img));
                        }
                        let ratio = (img / cr).abs();
                        let k = ratio.max(1.0 / ratio);
                        if k > best.0 || best.1.is_none() && k >= best.0 {
                            best = (k, Some(q));
                        }
                    }
                }
            }
            Ok((count, best.0, best.1))
        })
        .collect();
    let mut report = QSReport { eps, k: 1.0, witness: None, examined: 0, sampled };
    for r in per_first {
        let (count, k, w) = r?;
        report.examined += count;
        if w.is_some() && (report.witness.is_none() || k > report.k) {
            report.k = k;
            report.witness = w;
        }
    }
    Ok(report)
}

/// Post-composes with the Möbius map sending the values at indices `0`, `n/3`, `2n/3` to `0`, `∞`, `−1`.
pub fn normalize_map(v: &DiscreteCircleMap) -> Result<DiscreteCircleMap> {
    let n = v.len();
    if n < 3 {
        return Err(Error::TooFewPoints { need: 3, got: n });
    }
    let y = v.values();
    let dst = [CirclePoint::from_affine(crate::real::qi(0)), CirclePoint::infinity(), CirclePoint::from_affine(crate::real::qi(-1))];
    let m = mobius_from_triples([&y[0], &y[n / 3], &y[(2 * n) / 3]], [&dst[0], &dst[1], &dst[2]])?;
    let mut out = v.then(&m)?;
    if let Ok(exact) = DiscreteCircleMap::new(
        out.pairs()
            .enumerate()
            .map(|(i, (s, t))| {
                let pin = [0, n / 3, (2 * n) / 3].iter().position(|&j| j == i);
                (s.clone(), pin.map_or_else(|| t.clone(), |p| dst[p].clone()))
            })
            .collect(),
    ) {
        out = exact;
    }
    Ok(out)
}

/// Outcome of the desk-scale fixed-point pipeline.
#[derive(Clone, Debug)]
pub struct FixedPoint {
    /// Graph vertex positions mapped to the right coordinates of the realization.
    pub u_r: DiscreteCircleMap,
    pub residual: f64,
    pub approximation: crate::eqgraph::Approximation,
    pub realization: crate::realize::Realization,
}

fn graph_lamination(g: &crate::eqgraph::EquatorGraph, kind: crate::eqgraph::ChordKind, at: &[CirclePoint], factor: f64) -> Result<PolyhedralLamination> {
    let leaves = g
        .chords
        .iter()
        .filter(|c| c.kind == kind)
        .map(|c| Leaf::new(at[c.i].clone(), at[c.j].clone(), factor * crate::real::q_to_f64(&c.w)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PolyhedralLamination::new_unchecked(leaves, true))
}

/// Approximates `(λr/2, λl/2)` by a graph, realizes it, and compares the two earthquake operators at `u_r`.
pub fn fixed_point(
    lam_l: &PolyhedralLamination,
    lam_r: &PolyhedralLamination,
    o: &crate::circle::HypPoint,
    n: f64,
    k: u64,
    delta: &crate::real::Q,
    opts: &crate::realize::RealizeOptions,
) -> Result<FixedPoint> {
    let half = crate::real::q(1, 2);
    let (minus, plus) = (lam_r.scaled(&half), lam_l.scaled(&half));
    if !crate::lamination::weak_fill_check(&minus.truncate(o, n), &plus.truncate(o, n)) {
        return Err(Error::NotWeaklyFilling);
    }
    let approximation = crate::eqgraph::approximate(&minus, &plus, o, n, k, delta, None)?;
    let g = &approximation.graph;
    let realization = crate::realize::realize(g, opts)?;
    let right = &realization.right;
    let u_r = DiscreteCircleMap::new(g.vertices.iter().map(|v| v.pos.clone()).zip(right.iter().cloned()).collect())?;
    let base = midpoint(&right[0], &right[1]);
    let el = EarthquakeMap::new(graph_lamination(g, crate::eqgraph::ChordKind::Plus, right, 2.0)?, Chirality::Left, base.clone())?;
    let er = EarthquakeMap::new(graph_lamination(g, crate::eqgraph::ChordKind::Minus, right, 2.0)?, Chirality::Right, base)?;
    let il = right.iter().map(|x| el.eval(x)).collect::<Result<Vec<_>>>()?;
    let ir = right.iter().map(|x| er.eval(x)).collect::<Result<Vec<_>>>()?;
    Ok(FixedPoint { u_r, residual: mobius_fit_residual(&il, &ir), approximation, realization })
}
