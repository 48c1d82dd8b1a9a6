use thiserror::Error;

/// Errors produced by mesh ingestion, geometry queries and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("face at line {line} has {arity} vertices; only triangles are supported")]
    NonTriangularFace { line: usize, arity: usize },

    #[error("triangle {face} references vertex {index}, but the mesh has {count} vertices")]
    IndexOutOfRange { face: usize, index: usize, count: usize },

    #[error("triangle {face} repeats a vertex index")]
    RepeatedVertex { face: usize },

    #[error("triangle {face} is degenerate (area {area:e} below threshold {threshold:e})")]
    DegenerateTriangle { face: usize, area: f64, threshold: f64 },

    #[error("non-manifold edge ({a}, {b}) is shared by {count} triangles")]
    NonManifoldEdge { a: usize, b: usize, count: usize },

    #[error("inconsistent orientation along edge ({a}, {b})")]
    InconsistentOrientation { a: usize, b: usize },

    #[error("vertex {0} is non-manifold (its triangles do not form a single fan)")]
    NonManifoldVertex(usize),

    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),

    #[error("vertex id {0} out of range")]
    InvalidVertex(usize),

    #[error("edge id {0} out of range")]
    InvalidEdge(usize),

    #[error("vertex {0} lies on the boundary")]
    BoundaryVertex(usize),

    #[error("vertex {0} is an interior vertex")]
    InteriorVertex(usize),

    #[error("edge {0} lies on the boundary")]
    BoundaryEdge(usize),

    #[error("operation requires a closed mesh")]
    OpenMesh,

    #[error("operation requires a closed curve")]
    OpenCurve,

    #[error("curve needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("curve edge {0} has zero length")]
    ZeroLengthEdge(usize),

    #[error("curve turns back on itself at vertex {0} (turning angle pi)")]
    AntiparallelEdges(usize),

    #[error("curve segments {0} and {1} intersect")]
    SelfIntersecting(usize, usize),

    #[error("near-degenerate angle in triangle {face}: cotangent undefined")]
    DegenerateAngle { face: usize },

    #[error("patch is empty")]
    EmptyPatch,

    #[error("patch is not a disk (euler characteristic {chi})")]
    PatchNotDisk { chi: i64 },

    #[error("mesh is not convex: {0}")]
    NotConvex(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite coordinates at iteration {0}")]
    NonFinite(usize),

    #[error("step aborted at iteration {iteration} after {halvings} halvings")]
    StepAborted { iteration: usize, halvings: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
