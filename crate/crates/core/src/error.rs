use thiserror::Error;

use crate::sweep::GeneralPositionReport;
use crate::text::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("empty domain: left endpoint {lo} is not below right endpoint {hi}")]
    EmptyDomain { lo: String, hi: String },
    #[error("root isolation did not converge; the polynomial has a repeated root")]
    NonSquarefree,
    #[error("the curve contains the vertical line x = {x}; shear it explicitly")]
    VerticalLineComponent { x: String },
    #[error("no general position after {attempts} shear attempts: {report}")]
    GeneralPositionFailure {
        attempts: usize,
        report: GeneralPositionReport,
    },
    #[error("negative branch count at fiber {fiber}, rank {rank}: left {left}, right {right}")]
    NegativeBranchCount {
        fiber: usize,
        rank: usize,
        left: i64,
        right: i64,
    },
    #[error("half-branches leaving fiber {fiber} do not match those entering fiber {}", fiber + 1)]
    ConservationViolation { fiber: usize },
    #[error("fiber {fiber} has {count} critical points left for the conservation law")]
    UnresolvedFiber { fiber: usize, count: usize },
    #[error("all y-derivatives vanish up to the degree at a critical point")]
    AllDerivativesVanish,
    #[error("point is not a smooth critical point of the projection")]
    NotSmoothCritical,
    #[error("box sign determination is ambiguous; epsilon must shrink")]
    ShrinkEpsilon,
    #[error("fiber cover has {boxes} boxes for a curve of y-degree {degree}")]
    CoverTooCoarse { boxes: usize, degree: usize },
    #[error("epsilon fell below the floor 2^-40 without resolving fiber {fiber}")]
    EpsilonFloor { fiber: usize },
    #[error("x = {x} lies inside a critical interval")]
    NotRegularValue { x: String },
    #[error("x = {x} is already a sample abscissa")]
    DuplicateAbscissa { x: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
