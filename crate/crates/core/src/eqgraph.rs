//! Weighted equator graphs: a Hamiltonian cycle of negative edges plus
//! positive chords of two types, the combinatorial data of an ideal
//! polyhedron with prescribed exterior dihedral angles.

use std::f64::consts::PI;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::circle::{circle_distance_turns, CirclePoint, HypPoint};
use crate::circle_map::is_cyclically_ordered;
use crate::error::{Error, Result};
use crate::lamination::{lamination_distance, total_weight_lambda, Leaf, PolyhedralLamination};
use crate::real::{q_to_f64, qi, Real, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChordKind {
    Plus,
    Minus,
}

impl ChordKind {
    pub fn other(self) -> Self {
        match self {
            ChordKind::Plus => ChordKind::Minus,
            ChordKind::Minus => ChordKind::Plus,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ChordKind::Plus => "plus",
            ChordKind::Minus => "minus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexType {
    Plus,
    Minus,
    Untyped,
}

impl From<ChordKind> for VertexType {
    fn from(k: ChordKind) -> Self {
        match k {
            ChordKind::Plus => VertexType::Plus,
            ChordKind::Minus => VertexType::Minus,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub pos: CirclePoint,
    pub ty: VertexType,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chord {
    pub i: usize,
    pub j: usize,
    pub kind: ChordKind,
    pub w: Q,
}

/// Vertices in cyclic order; `equator[i]` weighs the edge `(v_i, v_{i+1 mod k})`.
#[derive(Clone, Debug)]
pub struct EquatorGraph {
    pub vertices: Vec<Vertex>,
    pub equator: Vec<Q>,
    pub chords: Vec<Chord>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapSlack {
    pub i: usize,
    pub j: usize,
    pub separation: Q,
    pub slack: Q,
}

#[derive(Clone, Debug, PartialEq)]
pub enum EdgeRef {
    Equator(usize),
    Chord(usize),
}

#[derive(Clone, Debug, Default)]
pub struct ConditionReport {
    pub structure: Vec<String>,
    pub hamiltonian: bool,
    pub sign_violations: Vec<EdgeRef>,
    pub vertex_sums: Vec<Q>,
    pub sum_violations: Vec<usize>,
    pub gap_slacks: Vec<GapSlack>,
    pub gap_violations: Vec<(usize, usize)>,
}

impl ConditionReport {
    pub fn condition1(&self) -> bool {
        self.hamiltonian && self.structure.is_empty()
    }

    pub fn condition2(&self) -> bool {
        self.sign_violations.is_empty()
    }

    pub fn condition3(&self) -> bool {
        self.sum_violations.is_empty()
    }

    pub fn condition4(&self) -> bool {
        self.gap_violations.is_empty()
    }

    pub fn passes(&self) -> bool {
        self.condition1() && self.condition2() && self.condition3() && self.condition4()
    }

    /// Smallest condition-(4) slack, if any pair is checked.
    pub fn min_slack(&self) -> Option<&Q> {
        self.gap_slacks.iter().map(|g| &g.slack).min()
    }
}

/// Strict interleaving of two index pairs on a cycle.
pub fn chords_cross(a: (usize, usize), b: (usize, usize)) -> bool {
    let (lo, hi) = (a.0.min(a.1), a.0.max(a.1));
    if b.0 == a.0 || b.0 == a.1 || b.1 == a.0 || b.1 == a.1 {
        return false;
    }
    let inside = |x: usize| x > lo && x < hi;
    inside(b.0) != inside(b.1)
}

/// Whether gaps `i` and `j` are adjacent on a cycle of `k` gaps.
pub fn gaps_adjacent(i: usize, j: usize, k: usize) -> bool {
    let d = if i > j { i - j } else { j - i };
    d == 1 || d == k - 1
}

impl EquatorGraph {
    pub fn k(&self) -> usize {
        self.vertices.len()
    }

    /// Total chord weight at each vertex.
    pub fn chord_totals(&self) -> Vec<Q> {
        let mut t = vec![Q::zero(); self.k()];
        for c in &self.chords {
            t[c.i] += &c.w;
            t[c.j] += &c.w;
        }
        t
    }

    pub fn vertex_sums(&self) -> Vec<Q> {
        let k = self.k();
        let mut s = self.chord_totals();
        for i in 0..k {
            s[i] += &self.equator[i];
            s[(i + 1) % k] += &self.equator[i];
        }
        s
    }

    /// Total chord weight separating gap `i` from gap `j` (`i < j`).
    pub fn separation(&self, i: usize, j: usize) -> Q {
        let (i, j) = (i.min(j), i.max(j));
        let within = |x: usize| x > i && x <= j;
        self.chords.iter().filter(|c| within(c.i) != within(c.j)).map(|c| c.w.clone()).sum()
    }

    /// Non-adjacent gap pairs `(i, j)` with `i < j`.
    pub fn gap_pairs(&self) -> Vec<(usize, usize)> {
        let k = self.k();
        (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, j)| !gaps_adjacent(i, j, k)).collect()
    }

    pub fn check_conditions(&self) -> ConditionReport {
        let k = self.k();
        let mut r = ConditionReport::default();
        if k < 3 {
            r.structure.push(format!("{k} vertices; at least 3 required"));
        }
        if self.equator.len() != k {
            r.structure.push(format!("{} equator weights for {k} vertices", self.equator.len()));
            return r;
        }
        let pos: Vec<CirclePoint> = self.vertices.iter().map(|v| v.pos.clone()).collect();
        r.hamiltonian = k >= 3 && is_cyclically_ordered(&pos);
        for (n, c) in self.chords.iter().enumerate() {
            if c.i >= k || c.j >= k || c.i == c.j {
                r.structure.push(format!("chord {n} has invalid endpoints ({}, {})", c.i, c.j));
            }
        }
        if !r.structure.is_empty() {
            return r;
        }
        for (a, ca) in self.chords.iter().enumerate() {
            for (b, cb) in self.chords.iter().enumerate().skip(a + 1) {
                if ca.kind == cb.kind && chords_cross((ca.i, ca.j), (cb.i, cb.j)) {
                    r.structure.push(format!("{} chords {a} and {b} cross", ca.kind.name()));
                }
            }
        }
        for (i, w) in self.equator.iter().enumerate() {
            if !w.is_negative() {
                r.sign_violations.push(EdgeRef::Equator(i));
            }
        }
        for (n, c) in self.chords.iter().enumerate() {
            if !c.w.is_positive() {
                r.sign_violations.push(EdgeRef::Chord(n));
            }
        }
        r.vertex_sums = self.vertex_sums();
        r.sum_violations = r.vertex_sums.iter().enumerate().filter(|(_, s)| !s.is_zero()).map(|(i, _)| i).collect();
        r.gap_slacks = self
            .gap_pairs()
            .into_par_iter()
            .map(|(i, j)| {
                let separation = self.separation(i, j);
                let slack = &separation + &self.equator[i] + &self.equator[j];
                GapSlack { i, j, separation, slack }
            })
            .collect();
        r.gap_violations = r.gap_slacks.iter().filter(|g| !g.slack.is_positive()).map(|g| (g.i, g.j)).collect();
        r
    }

    /// Re-solves `x_{i-1} + x_i = −(chord total at v_i)` for the equator weights.
    pub fn resolve_equator(&mut self) -> Result<()> {
        self.resolve_equator_toward(None)
    }

    /// As `resolve_equator`, picking the solution nearest `hint` when it is not unique.
    pub fn resolve_equator_toward(&mut self, hint: Option<&[Q]>) -> Result<()> {
        let k = self.k();
        let c = self.chord_totals();
        // x_i = (−1)^i s + a_i
        let mut a = vec![Q::zero(); k];
        for i in 1..k {
            a[i] = -&c[i] - &a[i - 1];
        }
        let sign = |i: usize| if i % 2 == 0 { Q::one() } else { -Q::one() };
        let s = if k % 2 == 1 {
            (-&c[0] - &a[k - 1]) / qi(2)
        } else {
            if &a[k - 1] + &c[0] != Q::zero() {
                return Err(Error::ParityObstruction("alternating sum of chord totals is nonzero".into()));
            }
            // need (−1)^i s + a_i < 0 for all i
            let lo = (0..k).filter(|i| i % 2 == 1).map(|i| a[i].clone()).max();
            let hi = (0..k).filter(|i| i % 2 == 0).map(|i| -&a[i]).min();
            match (lo, hi) {
                (Some(lo), Some(hi)) if lo < hi => match hint {
                    Some(h) => {
                        let fit: Q = (0..k).map(|i| sign(i) * (&h[i] - &a[i])).sum::<Q>() / qi(k as i64);
                        if fit > lo && fit < hi {
                            fit
                        } else {
                            (lo + hi) / qi(2)
                        }
                    }
                    None => (lo + hi) / qi(2),
                },
                _ => return Err(Error::ParityObstruction("no negative equator solution".into())),
            }
        };
        let x: Vec<Q> = (0..k).map(|i| sign(i) * &s + &a[i]).collect();
        if let Some(i) = x.iter().position(|v| !v.is_negative()) {
            return Err(Error::ParityObstruction(format!("equator weight {i} is not negative")));
        }
        self.equator = x;
        Ok(())
    }

    /// Chord weight and endpoint sets of each vertex type.
    fn incident_kinds(&self) -> Vec<(bool, bool)> {
        let mut v = vec![(false, false); self.k()];
        for c in &self.chords {
            for x in [c.i, c.j] {
                match c.kind {
                    ChordKind::Plus => v[x].0 = true,
                    ChordKind::Minus => v[x].1 = true,
                }
            }
        }
        v
    }
}

/// Provenance of each chord produced by [`build_gamma0`].
#[derive(Clone, Debug, PartialEq)]
pub struct BinMap {
    /// `(lamination kind, leaf index)` per chord.
    pub source: Vec<(ChordKind, usize)>,
    pub unit: Q,
    pub delta_split: Q,
}

fn exact_weight(l: &Leaf) -> Result<Q> {
    l.w.exact().cloned().ok_or(Error::NonRationalWeights)
}

fn exact_turns(p: &CirclePoint) -> Result<Q> {
    p.exact_turns().cloned().ok_or(Error::NonRationalPositions)
}

/// Builds the graph whose chords are the leaves split into copies of
/// weight `Λ/k`, one chord endpoint per vertex.
pub fn build_gamma0(
    minus: &PolyhedralLamination,
    plus: &PolyhedralLamination,
    k: u64,
    delta_split: Option<Q>,
) -> Result<(EquatorGraph, BinMap)> {
    let mut leaves = vec![];
    for (kind, lam) in [(ChordKind::Minus, minus), (ChordKind::Plus, plus)] {
        for (n, l) in lam.leaves.iter().enumerate() {
            let w = exact_weight(l)?;
            let (a, b) = (exact_turns(&l.g.a)?, exact_turns(&l.g.b)?);
            leaves.push((kind, n, a, b, w));
        }
    }
    if k == 0 {
        return Err(Error::BadK { k, reason: "k must be positive".into() });
    }
    let lambda: Q = leaves.iter().map(|l| &l.4 * qi(2)).sum();
    if lambda.is_zero() {
        return Err(Error::BadK { k, reason: "laminations carry no weight".into() });
    }
    let unit = &lambda / qi(k as i64);
    let mut copies = vec![];
    for l in &leaves {
        let m = &l.4 / &unit;
        if !m.is_integer() {
            return Err(Error::BadK { k, reason: format!("leaf weight {} is not a multiple of Λ/k = {}", l.4, unit) });
        }
        copies.push(m.to_integer().to_usize().unwrap_or(0));
    }
    let mut ends: Vec<Q> = leaves.iter().flat_map(|l| [l.2.clone(), l.3.clone()]).collect();
    ends.sort();
    for w in ends.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidLamination("leaves share an endpoint".into()));
        }
    }
    let min_gap = ends
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .chain(std::iter::once(&ends[0] + Q::one() - ends.last().unwrap()))
        .min()
        .unwrap();
    let max_m = copies.iter().copied().max().unwrap_or(1).max(1);
    let mut delta = delta_split.unwrap_or_else(|| Q::new(1.into(), (64 * k).into()));
    while &delta * qi(max_m as i64) >= min_gap {
        delta /= qi(2);
    }
    // copy s of leaf (a, b) joins a + sδ to b + (m−1−s)δ: nested, hence disjoint
    let mut pts: Vec<(Q, usize)> = vec![];
    let mut chord_info = vec![];
    for (l, &m) in leaves.iter().zip(copies.iter()) {
        for s in 0..m {
            let id = chord_info.len();
            let pa = &l.2 + &delta * qi(s as i64);
            let pb = &l.3 + &delta * qi((m - 1 - s) as i64);
            pts.push((reduce(pa), id));
            pts.push((reduce(pb), id));
            chord_info.push((l.0, l.1));
        }
    }
    pts.sort();
    let mut ends_of = vec![vec![]; chord_info.len()];
    let vertices = pts
        .iter()
        .enumerate()
        .map(|(v, (t, id))| {
            ends_of[*id].push(v);
            Vertex { pos: CirclePoint::from_turns(t.clone()), ty: chord_info[*id].0.into() }
        })
        .collect::<Vec<_>>();
    let chords = ends_of
        .iter()
        .zip(chord_info.iter())
        .map(|(e, (kind, _))| Chord { i: e[0].min(e[1]), j: e[0].max(e[1]), kind: *kind, w: unit.clone() })
        .collect();
    let nv = vertices.len();
    let g = EquatorGraph { vertices, equator: vec![-&unit / qi(2); nv], chords };
    Ok((g, BinMap { source: chord_info, unit, delta_split: delta }))
}

fn reduce(t: Q) -> Q {
    let f = t.floor();
    t - f
}

#[derive(Clone, Debug)]
pub struct Coloring {
    pub graph: EquatorGraph,
    /// Smallest visual angle at the disk center between a plus and a minus vertex.
    pub min_separation: Option<f64>,
}

pub fn color_vertices(g: &EquatorGraph) -> Result<Coloring> {
    let kinds = g.incident_kinds();
    let mut out = g.clone();
    for (v, &(p, m)) in kinds.iter().enumerate() {
        out.vertices[v].ty = match (p, m) {
            (true, true) => return Err(Error::MixedVertex(v)),
            (true, false) => VertexType::Plus,
            (false, true) => VertexType::Minus,
            (false, false) => return Err(Error::UncoloredVertex(v)),
        };
    }
    let mut min_sep: Option<f64> = None;
    for a in out.vertices.iter().filter(|v| v.ty == VertexType::Plus) {
        for b in out.vertices.iter().filter(|v| v.ty == VertexType::Minus) {
            let d = 2.0 * PI * circle_distance_turns(&a.pos, &b.pos);
            min_sep = Some(min_sep.map_or(d, |m| m.min(d)));
        }
    }
    Ok(Coloring { graph: out, min_separation: min_sep })
}

#[derive(Clone, Debug, Default)]
pub struct FixReport {
    pub added: Vec<Chord>,
    /// Gap pairs that needed a second chord to keep the equator solvable.
    pub paired: Vec<(usize, usize)>,
}

/// Visual distance from vertex `v` to the nearest chord endpoint of type `kind`.
fn nearest_of_kind(g: &EquatorGraph, v: usize, kind: ChordKind) -> f64 {
    g.chords
        .iter()
        .filter(|c| c.kind == kind)
        .flat_map(|c| [c.i, c.j])
        .map(|x| 2.0 * PI * circle_distance_turns(&g.vertices[v].pos, &g.vertices[x].pos))
        .fold(f64::INFINITY, f64::min)
}

fn pick_kind(g: &EquatorGraph, kinds: &[(bool, bool)], a: usize, b: usize) -> (ChordKind, bool) {
    let single = |v: usize| match kinds[v] {
        (true, false) => Some(ChordKind::Plus),
        (false, true) => Some(ChordKind::Minus),
        _ => None,
    };
    match (single(a), single(b)) {
        (Some(x), Some(y)) if x == y => (x, true),
        _ => {
            let dp = nearest_of_kind(g, a, ChordKind::Plus).min(nearest_of_kind(g, b, ChordKind::Plus));
            let dm = nearest_of_kind(g, a, ChordKind::Minus).min(nearest_of_kind(g, b, ChordKind::Minus));
            (if dm < dp { ChordKind::Minus } else { ChordKind::Plus }, false)
        }
    }
}

fn crosses_same_kind(g: &EquatorGraph, a: usize, b: usize, kind: ChordKind) -> bool {
    g.chords.iter().any(|c| c.kind == kind && chords_cross((c.i, c.j), (a, b)))
}

/// Adds chords of weight `δ` until every non-adjacent gap pair is separated,
/// then re-solves the equator weights.
pub fn fix_condition4(g: &EquatorGraph, delta: &Q) -> Result<(EquatorGraph, FixReport)> {
    let k = g.k();
    let mut out = g.clone();
    let mut report = FixReport::default();
    if !delta.is_positive() {
        if let Some((i, j)) = out.gap_pairs().into_iter().find(|&(i, j)| out.separation(i, j).is_zero()) {
            return Err(Error::DegenerateM(i, j));
        }
        return Ok((out, report));
    }
    while let Some((i, j)) = out.gap_pairs().into_iter().find(|&(i, j)| out.separation(i, j).is_zero()) {
        let kinds = out.incident_kinds();
        let c1 = (i, j);
        let c2 = ((i + 1) % k, (j + 1) % k);
        let (k1, agree1) = pick_kind(&out, &kinds, c1.0, c1.1);
        let (k2, agree2) = pick_kind(&out, &kinds, c2.0, c2.1);
        let mut add = |o: &mut EquatorGraph, (a, b): (usize, usize), kind: ChordKind| {
            let kind = if crosses_same_kind(o, a, b, kind) { kind.other() } else { kind };
            let c = Chord { i: a.min(b), j: a.max(b), kind, w: delta.clone() };
            report.added.push(c.clone());
            o.chords.push(c);
        };
        if k % 2 == 0 && i % 2 == j % 2 {
            // a lone chord would break the alternating-sum balance; the two
            // flanking chords cross each other, so they get opposite types
            add(&mut out, c1, k1);
            add(&mut out, c2, k1.other());
            report.paired.push((i, j));
        } else if agree2 && !agree1 {
            add(&mut out, c2, k2);
        } else {
            add(&mut out, c1, k1);
        }
    }
    if !report.added.is_empty() {
        out.resolve_equator()?;
        for c in &report.added {
            for v in [c.i, c.j] {
                if out.vertices[v].ty == VertexType::Untyped {
                    out.vertices[v].ty = c.kind.into();
                }
            }
        }
    }
    Ok((out, report))
}

/// Smallest separating chord weight over non-adjacent gap pairs.
pub fn min_separation(g: &EquatorGraph) -> Result<Q> {
    let mut best: Option<Q> = None;
    for (i, j) in g.gap_pairs() {
        let s = g.separation(i, j);
        if s.is_zero() {
            return Err(Error::DegenerateM(i, j));
        }
        best = Some(match best {
            Some(b) if b <= s => b,
            _ => s,
        });
    }
    best.ok_or_else(|| Error::InvalidGraph("no non-adjacent gap pairs".into()))
}

fn rational_gcd(a: &Q, b: &Q) -> Q {
    let num = a.numer() * b.denom();
    let num2 = b.numer() * a.denom();
    Q::new(num.gcd(&num2), a.denom() * b.denom())
}

const SPLIT_MAX_VERTICES: usize = 4096;
const SPLIT_ATTEMPTS: usize = 8;

/// Replaces each vertex by a fan of copies carrying one chord piece each,
/// so that every equator weight is `−u/2` with `u` below the smallest separation.
pub fn split_vertices(g: &EquatorGraph) -> Result<EquatorGraph> {
    let pre = g.check_conditions();
    if !(pre.condition1() && pre.condition2() && pre.condition3()) {
        return Err(Error::InvalidGraph("splitting needs a graph passing conditions (1)-(3)".into()));
    }
    let m = min_separation(g)?;
    let half = &m / qi(2);
    if g.equator.iter().all(|x| x.abs() < half) && g.check_conditions().passes() {
        return Ok(g.clone());
    }
    let base = g.chords.iter().skip(1).fold(g.chords[0].w.clone(), |acc, c| rational_gcd(&acc, &c.w));
    let total: Q = g.chords.iter().map(|c| c.w.clone()).sum();
    let mut attempts = 0;
    let mut n: i64 = 1;
    loop {
        let u = &base / qi(n);
        let pieces = (&total * qi(2) / &u).to_integer().to_usize().unwrap_or(usize::MAX);
        if pieces > SPLIT_MAX_VERTICES {
            return Err(Error::SplitFailed(format!("more than {SPLIT_MAX_VERTICES} vertices needed")));
        }
        if u < m {
            let out = split_with_unit(g, &u)?;
            if out.check_conditions().passes() {
                return Ok(out);
            }
            attempts += 1;
            if attempts >= SPLIT_ATTEMPTS {
                return Err(Error::SplitFailed(format!("no admissible unit down to {u}")));
            }
        }
        n += 1;
    }
}

fn split_with_unit(g: &EquatorGraph, u: &Q) -> Result<EquatorGraph> {
    let k = g.k();
    // (vertex, sort key arc to other endpoint, tie-breaks, piece id)
    let mut slots: Vec<Vec<(f64, usize, i64, usize)>> = vec![vec![]; k];
    let mut pieces = vec![];
    for (cid, c) in g.chords.iter().enumerate() {
        let m = (&c.w / u).to_integer().to_usize().unwrap_or(0);
        for s in 0..m {
            let pid = pieces.len();
            pieces.push((cid, c.kind));
            let arc_ij = (g.vertices[c.j].pos.turns_f64() - g.vertices[c.i].pos.turns_f64()).rem_euclid(1.0);
            let kind_key = if c.kind == ChordKind::Plus { 0 } else { 1 };
            slots[c.i].push((-arc_ij, kind_key, s as i64, pid));
            slots[c.j].push((-(1.0 - arc_ij), kind_key, -(s as i64), pid));
        }
    }
    let exact = g.vertices.iter().all(|v| v.pos.exact_turns().is_some());
    let gaps: Vec<f64> = (0..k).map(|i| crate::circle::arc_turns(&g.vertices[i].pos, &g.vertices[(i + 1) % k].pos)).collect();
    let min_gap = gaps.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_fan = slots.iter().map(|s| s.len()).max().unwrap_or(1).max(1);
    let mut eps = Q::new(1.into(), 2.into());
    while q_to_f64(&eps) * (max_fan as f64) >= min_gap / 2.0 {
        eps /= qi(2);
    }
    let mut vertices = vec![];
    let mut ends_of = vec![vec![]; pieces.len()];
    for (v, fan) in slots.iter_mut().enumerate() {
        fan.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        for (s, &(_, _, _, pid)) in fan.iter().enumerate() {
            let shift = &eps * qi(s as i64);
            let pos = if exact {
                g.vertices[v].pos.shifted(&shift)
            } else {
                CirclePoint::from_turns_f64(g.vertices[v].pos.turns_f64() + q_to_f64(&shift))
            };
            ends_of[pid].push(vertices.len());
            vertices.push(Vertex { pos, ty: pieces[pid].1.into() });
        }
    }
    if vertices.len() < 3 {
        return Err(Error::SplitFailed("fewer than 3 vertices after splitting".into()));
    }
    let chords = ends_of
        .iter()
        .zip(pieces.iter())
        .map(|(e, (_, kind))| Chord { i: e[0].min(e[1]), j: e[0].max(e[1]), kind: *kind, w: u.clone() })
        .collect();
    let nv = vertices.len();
    Ok(EquatorGraph { vertices, equator: vec![-u / qi(2); nv], chords })
}

/// Chords of each type as laminations at the vertex positions.
pub fn graph_to_laminations(g: &EquatorGraph) -> (PolyhedralLamination, PolyhedralLamination) {
    let lam = |kind: ChordKind| {
        let leaves = g
            .chords
            .iter()
            .filter(|c| c.kind == kind)
            .map(|c| Leaf {
                g: crate::circle::Geodesic { a: g.vertices[c.i].pos.clone(), b: g.vertices[c.j].pos.clone() },
                w: Real::Exact(c.w.clone()),
            })
            .collect();
        PolyhedralLamination::new_unchecked(leaves, true)
    };
    (lam(ChordKind::Minus), lam(ChordKind::Plus))
}

#[derive(Clone, Debug)]
pub struct Approximation {
    pub graph: EquatorGraph,
    pub lambda: Q,
    pub fix: FixReport,
    pub min_separation: Option<f64>,
    pub distance_minus: f64,
    pub distance_plus: f64,
}

/// truncate → build → color → repair condition (4) → split.
pub fn approximate(
    minus: &PolyhedralLamination,
    plus: &PolyhedralLamination,
    o: &HypPoint,
    n: f64,
    k: u64,
    delta: &Q,
    delta_split: Option<Q>,
) -> Result<Approximation> {
    let (tm, tp) = (minus.truncate(o, n), plus.truncate(o, n));
    let lambda = total_weight_lambda(&tm, &tp, o, n).exact().cloned().ok_or(Error::NonRationalWeights)?;
    let (g0, _) = build_gamma0(&tm, &tp, k, delta_split)?;
    let col = color_vertices(&g0)?;
    let (g1, fix) = fix_condition4(&col.graph, delta)?;
    let g2 = split_vertices(&g1)?;
    let report = g2.check_conditions();
    if !report.passes() {
        return Err(Error::InvalidGraph(format!("pipeline output fails conditions: {:?}", report.gap_violations)));
    }
    let (gm, gp) = graph_to_laminations(&g2);
    Ok(Approximation {
        distance_minus: lamination_distance(&gm, &tm),
        distance_plus: lamination_distance(&gp, &tp),
        graph: g2,
        lambda,
        fix,
        min_separation: col.min_separation,
    })
}

/// The 4-vertex graph with diagonals of weights `a` (plus) and `b` (minus)
/// at quarter turns, equator `−θ/2`.
pub fn square_graph(plus: Q, minus: Q, equator: Q) -> EquatorGraph {
    let vertices = (0..4)
        .map(|i| Vertex {
            pos: CirclePoint::from_turns(Q::new(i.into(), 4.into())),
            ty: if i % 2 == 0 { VertexType::Plus } else { VertexType::Minus },
        })
        .collect();
    EquatorGraph {
        vertices,
        equator: vec![equator; 4],
        chords: vec![
            Chord { i: 0, j: 2, kind: ChordKind::Plus, w: plus },
            Chord { i: 1, j: 3, kind: ChordKind::Minus, w: minus },
        ],
    }
}
