//! JSON file formats.

use serde::{Deserialize, Serialize};

use crate::ads::{ein_from_lr, EinPoint};
use crate::circle::CirclePoint;
use crate::circle_map::DiscreteCircleMap;
use crate::eqgraph::{Chord, ChordKind, EquatorGraph, Vertex, VertexType};
use crate::error::{Error, Result};
use crate::hull::{convex_hull_points, EdgeKind, IdealPolyhedron};
use crate::lamination::{Leaf, PolyhedralLamination};
use crate::real::{format_q, parse_q, Real, Q};

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Exact turns when available, otherwise the shortest round-tripping decimal.
pub fn format_turns(p: &CirclePoint) -> String {
    p.exact_turns().map_or_else(|| format!("{}", p.turns_f64()), format_q)
}

pub fn parse_turns(s: &str) -> Result<CirclePoint> {
    let t = parse_q(s)?;
    Ok(CirclePoint::from_turns(t))
}

pub fn format_real(x: &Real) -> String {
    x.exact().map_or_else(|| format!("{}", x.to_f64()), format_q)
}

fn parse_real(s: &str) -> Result<Real> {
    Ok(Real::Exact(parse_q(s)?))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LeafJson {
    a: String,
    b: String,
    w: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LaminationJson {
    leaves: Vec<LeafJson>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    allow_shared: bool,
}

/// Parses a lamination; unless `allow_invalid`, crossing, duplicate or non-positive leaves are rejected,
/// as are shared endpoints when the file does not set `allow_shared`.
pub fn lamination_from_json(s: &str, allow_invalid: bool) -> Result<PolyhedralLamination> {
    let j: LaminationJson = serde_json::from_str(s).map_err(parse_err)?;
    let leaves = j
        .leaves
        .iter()
        .map(|l| Leaf::new(parse_turns(&l.a)?, parse_turns(&l.b)?, parse_real(&l.w)?))
        .collect::<Result<Vec<_>>>()?;
    if allow_invalid {
        Ok(PolyhedralLamination::new_unchecked(leaves, j.allow_shared))
    } else {
        PolyhedralLamination::new(leaves, j.allow_shared)
    }
}

pub fn lamination_to_json(l: &PolyhedralLamination) -> String {
    let j = LaminationJson {
        leaves: l
            .leaves
            .iter()
            .map(|x| LeafJson { a: format_turns(&x.g.a), b: format_turns(&x.g.b), w: format_real(&x.w) })
            .collect(),
        allow_shared: l.allow_shared,
    };
    serde_json::to_string_pretty(&j).expect("serializable")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexJson {
    pos: String,
    #[serde(rename = "type")]
    ty: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphEdgeJson {
    i: usize,
    j: usize,
    kind: String,
    w: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    vertices: Vec<VertexJson>,
    edges: Vec<GraphEdgeJson>,
}

/// Parses a graph; every consecutive pair needs exactly one equator edge.
pub fn graph_from_json(s: &str) -> Result<EquatorGraph> {
    let j: GraphJson = serde_json::from_str(s).map_err(parse_err)?;
    let k = j.vertices.len();
    let vertices = j
        .vertices
        .iter()
        .map(|v| {
            let ty = match v.ty.as_str() {
                "plus" => VertexType::Plus,
                "minus" => VertexType::Minus,
                "untyped" => VertexType::Untyped,
                other => return Err(Error::Parse(format!("unknown vertex type {other:?}"))),
            };
            Ok(Vertex { pos: parse_turns(&v.pos)?, ty })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut equator: Vec<Option<Q>> = vec![None; k];
    let mut chords = Vec::new();
    for e in &j.edges {
        if e.i >= k || e.j >= k {
            return Err(Error::Parse(format!("edge ({}, {}) out of range", e.i, e.j)));
        }
        let w = parse_q(&e.w)?;
        match e.kind.as_str() {
            "equator" => {
                let i = if (e.i + 1) % k == e.j {
                    e.i
                } else if (e.j + 1) % k == e.i {
                    e.j
                } else {
                    return Err(Error::Parse(format!("equator edge ({}, {}) joins non-consecutive vertices", e.i, e.j)));
                };
                if equator[i].replace(w).is_some() {
                    return Err(Error::Parse(format!("duplicate equator edge at {i}")));
                }
            }
            "plus" => chords.push(Chord { i: e.i, j: e.j, kind: ChordKind::Plus, w }),
            "minus" => chords.push(Chord { i: e.i, j: e.j, kind: ChordKind::Minus, w }),
            other => return Err(Error::Parse(format!("unknown edge kind {other:?}"))),
        }
    }
    let equator = equator
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| Error::Parse(format!("missing equator edge ({i}, {})", (i + 1) % k.max(1)))))
        .collect::<Result<Vec<_>>>()?;
    Ok(EquatorGraph { vertices, equator, chords })
}

pub fn graph_to_json(g: &EquatorGraph) -> String {
    let k = g.k();
    let ty = |t: VertexType| match t {
        VertexType::Plus => "plus",
        VertexType::Minus => "minus",
        VertexType::Untyped => "untyped",
    };
    let mut edges: Vec<GraphEdgeJson> =
        (0..k).map(|i| GraphEdgeJson { i, j: (i + 1) % k, kind: "equator".into(), w: format_q(&g.equator[i]) }).collect();
    edges.extend(g.chords.iter().map(|c| GraphEdgeJson { i: c.i, j: c.j, kind: c.kind.name().into(), w: format_q(&c.w) }));
    let j = GraphJson {
        vertices: g.vertices.iter().map(|v| VertexJson { pos: format_turns(&v.pos), ty: ty(v.ty).into() }).collect(),
        edges,
    };
    serde_json::to_string_pretty(&j).expect("serializable")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointJson {
    x: String,
    v: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapJson {
    points: Vec<PointJson>,
}

pub fn map_from_json(s: &str) -> Result<DiscreteCircleMap> {
    let j: MapJson = serde_json::from_str(s).map_err(parse_err)?;
    DiscreteCircleMap::new(j.points.iter().map(|p| Ok((parse_turns(&p.x)?, parse_turns(&p.v)?))).collect::<Result<Vec<_>>>()?)
}

pub fn map_to_json(m: &DiscreteCircleMap) -> String {
    let j = MapJson { points: m.pairs().map(|(x, v)| PointJson { x: format_turns(x), v: format_turns(v) }).collect() };
    serde_json::to_string_pretty(&j).expect("serializable")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyVertexJson {
    #[serde(rename = "xiL")]
    xi_l: String,
    #[serde(rename = "xiR")]
    xi_r: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FaceJson {
    vertices: Vec<usize>,
    side: String,
    lightlike: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyEdgeJson {
    i: usize,
    j: usize,
    kind: EdgeKind,
    angle: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyJson {
    vertices: Vec<PolyVertexJson>,
    #[serde(default)]
    faces: Vec<FaceJson>,
    #[serde(default)]
    edges: Vec<PolyEdgeJson>,
    #[serde(default)]
    width: Option<f64>,
    #[serde(default)]
    flat: bool,
}

pub fn polyhedron_to_json(p: &IdealPolyhedron, width: Option<f64>) -> String {
    let j = PolyJson {
        vertices: p.vertices.iter().map(|v| PolyVertexJson { xi_l: format_turns(&v.l), xi_r: format_turns(&v.r) }).collect(),
        faces: p
            .faces
            .iter()
            .map(|f| FaceJson { vertices: f.vertices.clone(), side: if f.future { "future" } else { "past" }.into(), lightlike: f.lightlike })
            .collect(),
        edges: p.edges.iter().map(|e| PolyEdgeJson { i: e.i, j: e.j, kind: e.kind, angle: e.angle }).collect(),
        width,
        flat: p.flat,
    };
    serde_json::to_string_pretty(&j).expect("serializable")
}

/// Vertices of a polyhedron file, in cyclic order.
pub fn points_from_json(s: &str) -> Result<Vec<EinPoint>> {
    let j: PolyJson = serde_json::from_str(s).map_err(parse_err)?;
    j.vertices.iter().map(|v| Ok(ein_from_lr(parse_turns(&v.xi_l)?, parse_turns(&v.xi_r)?))).collect()
}

/// Rebuilds the hull from the vertices and checks it against any listed edges.
pub fn polyhedron_from_json(s: &str) -> Result<IdealPolyhedron> {
    let j: PolyJson = serde_json::from_str(s).map_err(parse_err)?;
    let pts = j.vertices.iter().map(|v| Ok(ein_from_lr(parse_turns(&v.xi_l)?, parse_turns(&v.xi_r)?))).collect::<Result<Vec<_>>>()?;
    let p = convex_hull_points(&pts)?;
    if !j.edges.is_empty() {
        let mut want: Vec<(usize, usize, EdgeKind)> = j.edges.iter().map(|e| (e.i.min(e.j), e.i.max(e.j), e.kind)).collect();
        let mut got: Vec<(usize, usize, EdgeKind)> = p.edges.iter().map(|e| (e.i, e.j, e.kind)).collect();
        want.sort();
        got.sort();
        if want != got {
            return Err(Error::CombinatoricsMismatch("listed edges differ from the hull of the vertices".into()));
        }
    }
    Ok(p)
}
