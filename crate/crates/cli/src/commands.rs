use std::path::PathBuf;
use std::sync::OnceLock;

use adsbend_core::circle::{CirclePoint, HypPoint};
use adsbend_core::circle_map::{CircleMap, DiscreteCircleMap, Identity};
use adsbend_core::eqgraph::{approximate, fix_condition4, graph_to_laminations, split_vertices, ConditionReport, EdgeRef, EquatorGraph};
use adsbend_core::hull::{bending_laminations, convex_hull, dihedral_angles, width, IdealPolyhedron};
use adsbend_core::io;
use adsbend_core::lamination::{lamination_distance, weak_fill_check, PolyhedralLamination};
use adsbend_core::quake::{
    default_base, earthquake_eval, earthquake_operator, fixed_point, flow_identity_check, normalize_map, qs_constant,
    verify_mess22, verify_mess_projections, Chirality,
};
use adsbend_core::real::{format_q, parse_q, q_to_f64, Q};
use adsbend_core::realize::{realize, RealizeOptions};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::output::{emit, emit_json, read, Failure, Outcome};
use crate::plot;

#[derive(Parser)]
#[command(name = "adsbend", version, about = "Measured laminations, ideal AdS polyhedra and discrete earthquakes")]
pub struct Cli {
    /// Accept crossing or duplicate leaves in lamination inputs.
    #[arg(long, global = true)]
    allow_invalid: bool,
    #[command(subcommand)]
    command: Command,
}

static ALLOW_INVALID: OnceLock<bool> = OnceLock::new();

#[derive(Subcommand)]
enum Command {
    /// Measured laminations.
    #[command(subcommand)]
    Lam(LamCmd),
    /// Equator graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Ideal polyhedra.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Earthquakes.
    #[command(subcommand)]
    Quake(QuakeCmd),
    /// Quasi-symmetry.
    #[command(subcommand)]
    Qs(QsCmd),
    /// Checks of the projection identities on a polyhedron.
    #[command(subcommand)]
    Mess(MessCmd),
    /// SVG figures.
    #[command(subcommand)]
    Plot(PlotCmd),
}

#[derive(Args)]
struct Out {
    /// Output file (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Truncation {
    /// Truncation radius around the base point.
    #[arg(long, default_value_t = 10.0)]
    n: f64,
    /// Base point in disk coordinates, `x,y`.
    #[arg(long, default_value = "0,0")]
    o: String,
}

impl Truncation {
    fn point(&self) -> Outcome<HypPoint> {
        let parts: Vec<&str> = self.o.split(',').collect();
        let bad = || Failure::usage(format!("--o expects `x,y`, got {:?}", self.o));
        if parts.len() != 2 {
            return Err(bad());
        }
        let x: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let y: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        Ok(HypPoint::from_disk(x, y)?)
    }
}

#[derive(Args)]
struct Solver {
    /// Largest accepted residual.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Iteration patience per start.
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of solver starts.
    #[arg(long, default_value_t = 12)]
    starts: usize,
}

impl Solver {
    fn options(&self) -> RealizeOptions {
        RealizeOptions { tol: self.tol, starts: self.starts, seed: self.seed, patience: self.max_iter }
    }
}

#[derive(Subcommand)]
enum LamCmd {
    /// Reports crossings, duplicates, shared endpoints and non-positive weights.
    Validate { file: PathBuf },
    /// Keeps the leaves meeting the ball of radius n.
    Truncate {
        file: PathBuf,
        #[command(flatten)]
        t: Truncation,
        #[command(flatten)]
        out: Out,
    },
    /// Transport distance between two laminations.
    Distance { a: PathBuf, b: PathBuf },
    /// Whether a pair of laminations weakly fills.
    Fill {
        minus: PathBuf,
        plus: PathBuf,
        #[command(flatten)]
        t: Truncation,
    },
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Approximates a lamination pair by an equator graph.
    Build {
        minus: PathBuf,
        plus: PathBuf,
        #[command(flatten)]
        t: Truncation,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value = "0")]
        delta: String,
        #[arg(long)]
        delta_split: Option<String>,
        #[command(flatten)]
        out: Out,
    },
    /// Checks the four graph conditions.
    Check { file: PathBuf },
    /// Adds chords until every non-adjacent gap pair has positive slack.
    Fix {
        file: PathBuf,
        #[arg(long, default_value = "0")]
        delta: String,
        #[command(flatten)]
        out: Out,
    },
    /// Splits vertices carrying chords of both types.
    Split {
        file: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Writes the chords as a pair of laminations.
    Tolams {
        file: PathBuf,
        #[arg(long)]
        minus_out: PathBuf,
        #[arg(long)]
        plus_out: PathBuf,
    },
}

#[derive(Subcommand)]
enum PolyCmd {
    /// Convex hull of the graph of a map.
    Hull {
        map: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Signed dihedral angles.
    Angles { file: PathBuf },
    /// Largest timelike distance between the boundary components.
    Width { file: PathBuf },
    /// Bending laminations of both boundary components.
    Bend {
        file: PathBuf,
        #[arg(long)]
        minus_out: PathBuf,
        #[arg(long)]
        plus_out: PathBuf,
    },
    /// Finds a polyhedron whose dihedral angles are the graph weights.
    Realize {
        graph: PathBuf,
        #[command(flatten)]
        solver: Solver,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Args)]
struct Side {
    #[arg(long, default_value = "left")]
    side: Chirality,
}

#[derive(Subcommand)]
enum QuakeCmd {
    /// Evaluates the earthquake along a lamination.
    Eval {
        lam: PathBuf,
        #[command(flatten)]
        side: Side,
        /// Base point in turns; defaults to a point off every leaf.
        #[arg(long)]
        base: Option<String>,
        /// Points in turns.
        #[arg(long = "at", num_args = 1.., required_unless_present = "samples")]
        at: Vec<String>,
        /// Evaluate at this many evenly spaced points instead.
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        out: Out,
    },
    /// Applies the earthquake operator to a map.
    Op {
        lam: PathBuf,
        map: PathBuf,
        #[command(flatten)]
        side: Side,
        /// Normalization point in turns; defaults to the first support point off the leaves.
        #[arg(long)]
        beta: Option<String>,
        #[command(flatten)]
        out: Out,
    },
    /// Compares two steps of the operator with one step along twice the lamination.
    Flowcheck {
        lam: PathBuf,
        #[arg(long)]
        map: Option<PathBuf>,
        #[command(flatten)]
        side: Side,
        /// Normalization point in turns; defaults to the first evaluation point off the leaves.
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Finds a map whose left and right earthquakes agree.
    Fixpoint {
        lam_l: PathBuf,
        lam_r: PathBuf,
        #[command(flatten)]
        t: Truncation,
        #[arg(long, default_value_t = 4)]
        k: u64,
        #[arg(long, default_value = "0")]
        delta: String,
        #[command(flatten)]
        solver: Solver,
        /// Also write the map as a map file.
        #[arg(long)]
        map_out: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum QsCmd {
    /// Distortion of symmetric quadruples.
    Constant {
        map: PathBuf,
        #[arg(long, default_value = "1/2")]
        eps: String,
    },
    /// Post-composes so three values land on 0, infinity and -1.
    Normalize {
        map: PathBuf,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum MessCmd {
    /// Bending laminations move the left coordinates to the right ones.
    Check22 {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Developed boundaries project to the left and right coordinates.
    Check23 {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum PlotCmd {
    /// Laminations in the Poincaré disk.
    Lam {
        file: PathBuf,
        /// A second lamination drawn in another color.
        #[arg(long)]
        with: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// A map as a curve on the boundary torus.
    Circle {
        map: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Polyhedron wireframe in the affine chart.
    Poly {
        file: PathBuf,
        #[command(flatten)]
        out: Out,
    },
}

fn lamination(path: &PathBuf) -> Outcome<PolyhedralLamination> {
    Ok(io::lamination_from_json(&read(path)?, *ALLOW_INVALID.get().unwrap_or(&false))?)
}

fn graph(path: &PathBuf) -> Outcome<EquatorGraph> {
    Ok(io::graph_from_json(&read(path)?)?)
}

fn map(path: &PathBuf) -> Outcome<DiscreteCircleMap> {
    Ok(io::map_from_json(&read(path)?)?)
}

fn polyhedron(path: &PathBuf) -> Outcome<IdealPolyhedron> {
    Ok(io::polyhedron_from_json(&read(path)?)?)
}

fn rational(s: &str) -> Outcome<Q> {
    Ok(parse_q(s)?)
}

fn turns(s: &str) -> Outcome<CirclePoint> {
    Ok(io::parse_turns(s)?)
}

fn write_polyhedron(p: &IdealPolyhedron, out: &Out) -> Outcome {
    emit(out.output.as_deref(), &io::polyhedron_to_json(p, Some(width(p))))
}

fn conditions_json(r: &ConditionReport) -> Value {
    let edge = |e: &EdgeRef| match e {
        EdgeRef::Equator(i) => json!({ "equator": i }),
        EdgeRef::Chord(i) => json!({ "chord": i }),
    };
    json!({
        "passes": r.passes(),
        "condition1": r.condition1(),
        "condition2": r.condition2(),
        "condition3": r.condition3(),
        "condition4": r.condition4(),
        "structure": r.structure,
        "sign_violations": r.sign_violations.iter().map(edge).collect::<Vec<_>>(),
        "vertex_sums": r.vertex_sums.iter().map(format_q).collect::<Vec<_>>(),
        "sum_violations": r.sum_violations,
        "gap_violations": r.gap_violations,
        "min_slack": r.min_slack().map(format_q),
    })
}

pub fn run(cli: Cli) -> Outcome {
    ALLOW_INVALID.get_or_init(|| cli.allow_invalid);
    match cli.command {
        Command::Lam(c) => lam(c),
        Command::Graph(c) => graph_cmd(c),
        Command::Poly(c) => poly(c),
        Command::Quake(c) => quake(c),
        Command::Qs(c) => qs(c),
        Command::Mess(c) => mess(c),
        Command::Plot(c) => plot_cmd(c),
    }
}

fn lam(c: LamCmd) -> Outcome {
    match c {
        LamCmd::Validate { file } => {
            let l = io::lamination_from_json(&read(&file)?, true)?;
            let r = l.validate();
            let v = json!({
                "valid": r.is_valid(),
                "leaves": l.len(),
                "crossing": r.crossing,
                "shared": r.shared,
                "duplicate": r.duplicate,
                "nonpositive": r.nonpositive,
            });
            emit_json(None, &v)?;
            if !r.is_valid() {
                return Err(Failure::check("invalid_lamination", "lamination failed validation".into(), v));
            }
            Ok(())
        }
        LamCmd::Truncate { file, t, out } => {
            let l = lamination(&file)?.truncate(&t.point()?, t.n);
            emit(out.output.as_deref(), &io::lamination_to_json(&l))
        }
        LamCmd::Distance { a, b } => emit_json(None, &json!({ "distance": lamination_distance(&lamination(&a)?, &lamination(&b)?) })),
        LamCmd::Fill { minus, plus, t } => {
            let o = t.point()?;
            let (m, p) = (lamination(&minus)?.truncate(&o, t.n), lamination(&plus)?.truncate(&o, t.n));
            emit_json(None, &json!({ "weakly_fills": weak_fill_check(&m, &p) }))
        }
    }
}

fn graph_cmd(c: GraphCmd) -> Outcome {
    match c {
        GraphCmd::Build { minus, plus, t, k, delta, delta_split, out } => {
            let split = delta_split.as_deref().map(rational).transpose()?;
            let a = approximate(&lamination(&minus)?, &lamination(&plus)?, &t.point()?, t.n, k, &rational(&delta)?, split)?;
            emit(out.output.as_deref(), &io::graph_to_json(&a.graph))
        }
        GraphCmd::Check { file } => {
            let r = graph(&file)?.check_conditions();
            let v = conditions_json(&r);
            emit_json(None, &v)?;
            if !r.passes() {
                return Err(Failure::check("invalid_graph", "graph fails the conditions".into(), v));
            }
            Ok(())
        }
        GraphCmd::Fix { file, delta, out } => {
            let (g, _) = fix_condition4(&graph(&file)?, &rational(&delta)?)?;
            emit(out.output.as_deref(), &io::graph_to_json(&g))
        }
        GraphCmd::Split { file, out } => emit(out.output.as_deref(), &io::graph_to_json(&split_vertices(&graph(&file)?)?)),
        GraphCmd::Tolams { file, minus_out, plus_out } => {
            let (m, p) = graph_to_laminations(&graph(&file)?);
            emit(Some(&minus_out), &io::lamination_to_json(&m))?;
            emit(Some(&plus_out), &io::lamination_to_json(&p))
        }
    }
}

fn poly(c: PolyCmd) -> Outcome {
    match c {
        PolyCmd::Hull { map: m, out } => write_polyhedron(&convex_hull(&map(&m)?)?, &out),
        PolyCmd::Angles { file } => {
            let a = dihedral_angles(&polyhedron(&file)?)?;
            let v: Vec<Value> = a.iter().map(|&(i, j, x)| json!({ "i": i, "j": j, "angle": x })).collect();
            emit_json(None, &json!({ "angles": v }))
        }
        PolyCmd::Width { file } => emit_json(None, &json!({ "width": width(&polyhedron(&file)?) })),
        PolyCmd::Bend { file, minus_out, plus_out } => {
            let b = bending_laminations(&polyhedron(&file)?)?;
            emit(Some(&minus_out), &io::lamination_to_json(&b.minus.lamination))?;
            emit(Some(&plus_out), &io::lamination_to_json(&b.plus.lamination))
        }
        PolyCmd::Realize { graph: g, solver, out } => {
            let r = realize(&graph(&g)?, &solver.options())?;
            write_polyhedron(&r.polyhedron, &out)
        }
    }
}

fn evenly_spaced(n: usize) -> Vec<CirclePoint> {
    (0..n).map(|i| CirclePoint::from_turns(Q::new((2 * i as i64 + 1).into(), (2 * n as i64).into()))).collect()
}

fn off_leaves(l: &PolyhedralLamination, xs: &[CirclePoint]) -> Outcome<CirclePoint> {
    let ends = l.endpoints();
    xs.iter()
        .find(|x| !ends.iter().any(|e| e.same(x)))
        .cloned()
        .ok_or_else(|| Failure::usage("every candidate base point is a leaf endpoint; pass --beta".into()))
}

fn quake(c: QuakeCmd) -> Outcome {
    match c {
        QuakeCmd::Eval { lam, side, base, at, samples, out } => {
            let l = lamination(&lam)?;
            let base = match base {
                Some(b) => turns(&b)?,
                None => default_base(&l, &CirclePoint::from_turns(Q::from_integer(0.into()))),
            };
            let xs = match samples {
                Some(n) => evenly_spaced(n),
                None => at.iter().map(|s| turns(s)).collect::<Outcome<Vec<_>>>()?,
            };
            let pairs = xs.iter().map(|x| Ok((x.clone(), earthquake_eval(&l, side.side, &base, x)?))).collect::<Outcome<Vec<_>>>()?;
            let m = if pairs.len() < 3 { DiscreteCircleMap::new_unchecked(pairs) } else { DiscreteCircleMap::new(pairs)? };
            emit(out.output.as_deref(), &io::map_to_json(&m))
        }
        QuakeCmd::Op { lam, map: m, side, beta, out } => {
            let u = map(&m)?;
            let l = lamination(&lam)?;
            let beta = beta.as_deref().map_or_else(|| off_leaves(&l, u.support()), turns)?;
            let op = earthquake_operator(&l, &u, side.side, &beta)?;
            let pairs = u.support().iter().map(|x| Ok((x.clone(), op.eval(x)?))).collect::<Outcome<Vec<_>>>()?;
            emit(out.output.as_deref(), &io::map_to_json(&DiscreteCircleMap::new(pairs)?))
        }
        QuakeCmd::Flowcheck { lam, map: m, side, beta, samples, tol } => {
            let l = lamination(&lam)?;
            let pick = |xs: &[CirclePoint]| beta.as_deref().map_or_else(|| off_leaves(&l, xs), turns);
            let (d, xs) = match m {
                Some(p) => {
                    let u = map(&p)?;
                    let xs = u.support().to_vec();
                    (flow_identity_check(&l, &u, side.side, &pick(&xs)?, &xs)?, xs.len())
                }
                None => {
                    let xs = evenly_spaced(samples.max(1));
                    (flow_identity_check(&l, &Identity, side.side, &pick(&xs)?, &xs)?, xs.len())
                }
            };
            let v = json!({ "deviation": d, "samples": xs, "tol": tol });
            emit_json(None, &v)?;
            if d > tol {
                return Err(Failure::check("flow_identity", format!("deviation {d:e} exceeds {tol:e}"), v));
            }
            Ok(())
        }
        QuakeCmd::Fixpoint { lam_l, lam_r, t, k, delta, solver, map_out, out } => {
            let fp = fixed_point(&lamination(&lam_l)?, &lamination(&lam_r)?, &t.point()?, t.n, k, &rational(&delta)?, &solver.options())?;
            let u_r: Value = serde_json::from_str(&io::map_to_json(&fp.u_r)).expect("own output");
            let v = json!({
                "residual": fp.residual,
                "u_r": u_r,
                "vertices": fp.u_r.len(),
                "lambda": format_q(&fp.approximation.lambda),
                "distance_minus": fp.approximation.distance_minus,
                "distance_plus": fp.approximation.distance_plus,
                "realization_residual": fp.realization.residual,
            });
            if let Some(p) = map_out {
                emit(Some(&p), &io::map_to_json(&fp.u_r))?;
            }
            emit_json(out.output.as_deref(), &v)
        }
    }
}

fn qs(c: QsCmd) -> Outcome {
    match c {
        QsCmd::Constant { map: m, eps } => {
            let r = qs_constant(&map(&m)?, q_to_f64(&rational(&eps)?))?;
            emit_json(None, &serde_json::to_value(&r).expect("serializable"))
        }
        QsCmd::Normalize { map: m, out } => emit(out.output.as_deref(), &io::map_to_json(&normalize_map(&map(&m)?)?)),
    }
}

fn mess(c: MessCmd) -> Outcome {
    let (v, residual, tol) = match c {
        MessCmd::Check22 { file, tol } => {
            let r = verify_mess22(&polyhedron(&file)?)?;
            let worst = r.plus.residual.max(r.minus.residual);
            (serde_json::to_value(&r).expect("serializable"), worst, tol)
        }
        MessCmd::Check23 { file, tol } => {
            let r = verify_mess_projections(&polyhedron(&file)?)?;
            (serde_json::to_value(&r).expect("serializable"), r.max_residual(), tol)
        }
    };
    emit_json(None, &v)?;
    if residual > tol {
        return Err(Failure::check("mess_residual", format!("residual {residual:e} exceeds {tol:e}"), v));
    }
    Ok(())
}

fn plot_cmd(c: PlotCmd) -> Outcome {
    let (svg, out) = match c {
        PlotCmd::Lam { file, with, out } => {
            let first = io::lamination_from_json(&read(&file)?, true)?;
            let second = with.map(|p| Ok::<_, Failure>(io::lamination_from_json(&read(&p)?, true)?)).transpose()?;
            (plot::laminations(&first, second.as_ref()), out)
        }
        PlotCmd::Circle { map: m, out } => (plot::torus(&map(&m)?), out),
        PlotCmd::Poly { file, out } => (plot::wireframe(&polyhedron(&file)?), out),
    };
    emit(out.output.as_deref(), &svg)
}
