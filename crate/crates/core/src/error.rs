//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by algebraic and geometric operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("variable count mismatch: {0} vs {1}")]
    VariableCountMismatch(usize, usize),
    #[error("degree overflow: result degree {0} exceeds the supported maximum of 4")]
    DegreeOverflow(u32),
    #[error("polynomial is not plus-or-minus the square of a line (rank {0})")]
    NotRankOne(usize),
    #[error("lines coincide projectively")]
    CoincidentLines,
    #[error("arguments coincide projectively")]
    CoincidentArguments,
    #[error("empty input")]
    EmptyInput,
    #[error("point lies in the degenerate set of the polarity")]
    DegenerateSetMember,
    #[error("the two conics are projectively equal")]
    ProjectivelyEqual,
    #[error("contact exists only at an irrational pencil parameter")]
    IrrationalContact,
    #[error("rank-1 primal: the dual partner is not determined and must be supplied")]
    NeedsDualPartner,
    #[error("row and column selections have different sizes")]
    SizeMismatch,
    #[error("index {0} already belongs to the subset")]
    IndexInSet(usize),
    #[error("a chord of the face vanished identically")]
    ZeroChord,
    #[error("edge identity violated at subset {0}, index {1}")]
    EdgeIdentityViolated(String, usize),
    #[error("face vertex is not in the predicted double-contact family: {0}")]
    InconsistentFace(String),
    #[error("the face pencil basis is degenerate (proportional chords)")]
    DegenerateBasis,
    #[error("no second completion: {0}")]
    NoSecondCompletion(String),
    #[error("prerequisite not met: {0}")]
    PrereqNotMet(String),
    #[error("the three face axes at the open vertex are all identical")]
    AxesIdentical,
    #[error("the concurrency point lies on its polar plane")]
    IncidentPolarPair,
    #[error("edge scaling is inconsistent with the face condition")]
    ScalingInconsistent,
    #[error("slicing plane is tangent to the quadric")]
    TangentPlane,
    #[error("data requires an irrational quantity in exact mode: {0}")]
    IrrationalData(String),
    #[error("point is interior: no real tangent pair")]
    InteriorPoint,
    #[error("degenerate position of the input points")]
    DegeneratePosition,
    #[error("circles are concentric")]
    ConcentricCircles,
    #[error("missing vertex {0} in the configuration")]
    MissingVertex(String),
    #[error("no contact: the pencil has no rank-1 member")]
    NoContact,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
