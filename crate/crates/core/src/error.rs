use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("value table has length {actual}, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("endpoint violation: value on {subset} is {value}, expected {expected}")]
    EndpointViolation {
        subset: String,
        value: String,
        expected: String,
    },
    #[error("monotonicity violation: {smaller} has value {smaller_value} > {larger_value} on {larger}")]
    MonotonicityViolation {
        smaller: String,
        larger: String,
        smaller_value: String,
        larger_value: String,
    },
    #[error("value {value} on {subset} is outside [0, 1]")]
    OutOfRange { subset: String, value: String },
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("point {0:?} not found")]
    PointNotFound(String),
    #[error("malformed document: {0}")]
    Format(String),
    #[error("invalid rational {0:?}")]
    InvalidRational(String),
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(String),

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("cycle detected through vertices {0:?}")]
    CycleDetected(Vec<String>),
    #[error("connecting map mismatch on edge {lesser} <= {greater}: {detail}")]
    MapDomainMismatch {
        lesser: String,
        greater: String,
        detail: String,
    },
    #[error("path dependence from {from} to {to}: paths {first:?} and {second:?} disagree at point {witness}")]
    PathDependence {
        from: String,
        to: String,
        first: Vec<String>,
        second: Vec<String>,
        witness: String,
    },
    #[error("limit has more than {bound} threads")]
    LimitTooLarge { bound: usize },
    #[error("limit of the diagram is empty")]
    EmptyLimit,
    #[error("diagram is not a square: {0}")]
    ShapeMismatch(String),
    #[error("square is not bicommutative: pair ({a}, {b}) has no point of Z over it")]
    NotBicommutative { a: String, b: String },
    #[error("marginals disagree over T at subset {witness}")]
    MarginalMismatch { witness: String },
    #[error("incompatible marginals on edge {lesser} <= {greater} at subset {witness}")]
    IncompatibleMarginals {
        lesser: String,
        greater: String,
        witness: String,
    },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),
    #[error("enumeration exceeds {limit} items")]
    EnumerationTooLarge { limit: usize },
}

impl Error {
    /// Short stable name of the violated rule, used in machine-readable reports.
    pub fn rule(&self) -> &'static str {
        match self {
            Error::InvalidSpace(_) => "space",
            Error::LengthMismatch { .. } => "value-table-length",
            Error::EndpointViolation { .. } => "endpoints",
            Error::MonotonicityViolation { .. } => "monotonicity",
            Error::OutOfRange { .. } => "unit-interval",
            Error::SpaceMismatch(_) => "same-space",
            Error::PointNotFound(_) => "known-point",
            Error::Format(_) => "schema",
            Error::InvalidRational(_) => "rational",
            Error::NonPositiveEpsilon(_) => "positive-epsilon",
            Error::UnknownVertex(_) => "known-vertex",
            Error::InvalidDiagram(_) => "diagram",
            Error::CycleDetected(_) => "acyclic",
            Error::MapDomainMismatch { .. } => "connecting-map",
            Error::PathDependence { .. } => "path-independence",
            Error::LimitTooLarge { .. } => "max-limit-size",
            Error::EmptyLimit => "nonempty-limit",
            Error::ShapeMismatch(_) => "square-shape",
            Error::NotBicommutative { .. } => "bicommutative",
            Error::MarginalMismatch { .. } => "marginals-agree",
            Error::IncompatibleMarginals { .. } => "compatible-marginals",
            Error::PreconditionFailed(_) => "precondition",
            Error::PostconditionFailed(_) => "postcondition",
            Error::EnumerationTooLarge { .. } => "enumeration-limit",
        }
    }

    /// The part of the input the error points at, when it names one.
    pub fn location(&self) -> Option<String> {
        match self {
            Error::LengthMismatch { .. } => Some("values".into()),
            Error::EndpointViolation { subset, .. } | Error::OutOfRange { subset, .. } => Some(subset.clone()),
            Error::MonotonicityViolation { smaller, larger, .. } => Some(format!("{smaller} ⊆ {larger}")),
            Error::PointNotFound(p) => Some(p.clone()),
            Error::UnknownVertex(v) => Some(v.clone()),
            Error::CycleDetected(vs) => Some(vs.join(" -> ")),
            Error::MapDomainMismatch { lesser, greater, .. } => Some(format!("edge {lesser} <= {greater}")),
            Error::PathDependence { from, to, witness, .. } => Some(format!("{to} <= {from} at {witness}")),
            Error::NotBicommutative { a, b } => Some(format!("({a}, {b})")),
            Error::MarginalMismatch { witness } => Some(witness.clone()),
            Error::IncompatibleMarginals { lesser, greater, witness } => {
                Some(format!("edge {lesser} <= {greater} at {witness}"))
            }
            Error::Format(msg) => msg
                .rsplit_once(" at line ")
                .map(|(_, pos)| format!("line {pos}"))
                .or_else(|| msg.split_once(": ").map(|(path, _)| path.to_string())),
            _ => None,
        }
    }
}
