use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coincident points")]
    CoincidentPoints,
    #[error("degenerate triple")]
    DegenerateTriple,
    #[error("orientation mismatch: {0}")]
    OrientationMismatch(String),
    #[error("geodesics are not disjoint")]
    NotDisjoint,
    #[error("geodesic endpoint collides with a leaf endpoint")]
    EndpointCollision,
    #[error("map undefined at {0}")]
    UndefinedAtEndpoint(String),
    #[error("image leaves {0} and {1} cross")]
    ImageCrosses(usize, usize),
    #[error("invalid lamination: {0}")]
    InvalidLamination(String),
    #[error("weights must be rational")]
    NonRationalWeights,
    #[error("positions must be rational turns")]
    NonRationalPositions,
    #[error("k = {k} is not admissible: {reason}")]
    BadK { k: u64, reason: String },
    #[error("vertex {0} carries chords of both types; increase k or perturb the input")]
    MixedVertex(usize),
    #[error("vertex {0} has no incident chord")]
    UncoloredVertex(usize),
    #[error("equatorial re-solve infeasible: {0}")]
    ParityObstruction(String),
    #[error("minimal separation m is zero at gap pair ({0}, {1}); run fix_condition4 first")]
    DegenerateM(usize, usize),
    #[error("vertex splitting failed: {0}")]
    SplitFailed(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("vector is not null")]
    NotNull,
    #[error("zero vector")]
    ZeroVector,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("no affine chart found: {0}")]
    NoChartFound(String),
    #[error("configuration is not acausal: {0}")]
    NotAcausal(String),
    #[error("edge ({0}, {1}) is not spacelike")]
    DegenerateEdge(usize, usize),
    #[error("face adjacency on the {0} side is not a tree")]
    NonTreeAdjacency(String),
    #[error("solver did not converge (residual {residual:e})")]
    NonConvergence { residual: f64 },
    #[error("hull combinatorics differ from the graph: {0}")]
    CombinatoricsMismatch(String),
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("orientation violation: image cross-ratio {0} of a symmetric quadruple is not negative")]
    OrientationViolation(f64),
    #[error("laminations do not weakly fill")]
    NotWeaklyFilling,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable snake_case name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::CoincidentPoints => "coincident_points",
            Error::DegenerateTriple => "degenerate_triple",
            Error::OrientationMismatch(_) => "orientation_mismatch",
            Error::NotDisjoint => "not_disjoint",
            Error::EndpointCollision => "endpoint_collision",
            Error::UndefinedAtEndpoint(_) => "undefined_at_endpoint",
            Error::ImageCrosses(..) => "image_crosses",
            Error::InvalidLamination(_) => "invalid_lamination",
            Error::NonRationalWeights => "non_rational_weights",
            Error::NonRationalPositions => "non_rational_positions",
            Error::BadK { .. } => "bad_k",
            Error::MixedVertex(_) => "mixed_vertex",
            Error::UncoloredVertex(_) => "uncolored_vertex",
            Error::ParityObstruction(_) => "parity_obstruction",
            Error::DegenerateM(..) => "degenerate_m",
            Error::SplitFailed(_) => "split_failed",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::NotNull => "not_null",
            Error::ZeroVector => "zero_vector",
            Error::DegenerateInput(_) => "degenerate_input",
            Error::NoChartFound(_) => "no_chart_found",
            Error::NotAcausal(_) => "not_acausal",
            Error::DegenerateEdge(..) => "degenerate_edge",
            Error::NonTreeAdjacency(_) => "non_tree_adjacency",
            Error::NonConvergence { .. } => "non_convergence",
            Error::CombinatoricsMismatch(_) => "combinatorics_mismatch",
            Error::TooFewPoints { .. } => "too_few_points",
            Error::OrientationViolation(_) => "orientation_violation",
            Error::NotWeaklyFilling => "not_weakly_filling",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
