use thiserror::Error;

/// Coarse classification of failures, used by frontends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input violates a mathematical precondition.
    Precondition,
    /// A runtime guard on an asserted (not proven) property tripped.
    Guard,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("divisibility order of the zero class is undefined")]
    ZeroElement,
    #[error("divisibility order of a pure torsion class is unbounded")]
    TorsionElement,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("vertex set {0:?} is not a face of the polytope")]
    NotAFace(Vec<usize>),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("ray generators do not span the ambient space (torus factor)")]
    TorusFactor,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("no linear form evaluates to -1 on all rays of cone {0:?}; the ambient is not Q-Gorenstein there")]
    NotQGorenstein(Vec<usize>),
    #[error("fan does not refine the normal fan of the Newton polytope (not an F-fan)")]
    NotFFan,
    #[error("transversality check failed: maximal cone {cone:?} of Sigma_X has dimension {found}, expected {expected}")]
    Transversality {
        cone: Vec<usize>,
        found: usize,
        expected: usize,
    },
    #[error("simplicial shortcut not applicable: {0}")]
    ShortcutPreconditions(String),
    #[error("Sigma_X membership requires generic coefficients")]
    ExplicitCoefficients,
    #[error("group elements belong to different class groups")]
    GroupMismatch,
    #[error("degree map is not surjective")]
    NotSurjective,
    #[error("grading is not pointed: weight {0} is not positive")]
    NonPointedGrading(String),
    #[error("not a fake weighted projective space: {0}")]
    NotFakeWps(String),
    #[error("anticanonical free part {0} is not positive (not Fano)")]
    NotFano(String),
    #[error("Koszul alternating sum became negative for class {0}")]
    NegativeKoszul(String),
    #[error("point {0:?} is outside the support of Sigma_X")]
    NotInSupport(Vec<String>),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Transversality { .. } | Error::NegativeKoszul(_) => ErrorKind::Guard,
            _ => ErrorKind::Precondition,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
