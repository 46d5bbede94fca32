use thiserror::Error;

use crate::mat2::Mat2;
use crate::preserver::PairFailure;
use crate::scalar::{FieldKind, Scalar};

/// Which structural requirement of the canonical form `λA + h(A)I` a table violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RejectStage {
    /// The image of `E_11` has a nonzero off-diagonal part.
    DiagonalProbe,
    /// The image of `E_11` has equal diagonal entries, so the extracted dilation is zero.
    ZeroDilation,
    /// Some `Φ(A) - λA` is not a multiple of the identity.
    NonScalarResidue,
}

impl RejectStage {
    pub fn code(self) -> &'static str {
        match self {
            RejectStage::DiagonalProbe => "diagonal-probe",
            RejectStage::ZeroDilation => "zero-dilation",
            RejectStage::NonScalarResidue => "non-scalar-residue",
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldKind, right: FieldKind },
    #[error("invalid order {0}")]
    InvalidOrder(u32),
    #[error("matrix does not have rank one")]
    RankNotOne,
    #[error("matrix is not scalar plus nilpotent (discriminant {discriminant})")]
    NotScalarPlusNilpotent { discriminant: Scalar },
    #[error("matrix is not idempotent")]
    NotIdempotent,
    #[error("matrix does not square to zero")]
    NotNilpotent,
    #[error("k = {k} is below the required minimum {min}")]
    KTooSmall { k: u32, min: u32 },
    #[error("eigen-relation fails for the {0} vector")]
    NotAnEigenpair(&'static str),
    #[error("sandwich system has an empty side")]
    EmptySystem,
    #[error("singular system: {0}")]
    SingularSystem(String),
    #[error("lambda = {lambda} is not a root of unity of order {order} (lambda^{order} = {power})")]
    LambdaNotRootOfUnity {
        lambda: Box<Scalar>,
        order: u32,
        power: Box<Scalar>,
    },
    #[error("input not present in map table: {0}")]
    InputNotInTable(Box<Mat2>),
    #[error("duplicate input in map table: {0}")]
    DuplicateInput(Box<Mat2>),
    #[error("probe set incomplete; missing {} input(s)", missing.len())]
    ProbeSetIncomplete { missing: Vec<Mat2> },
    #[error("map is not of the form lambda*A + h(A)*I ({}): residue {residue}", stage.code())]
    NotTheoremForm { stage: RejectStage, residue: Box<Mat2> },
    #[error("preservation check failed at ({}, {})", .0.a, .0.b)]
    PreservationFailed(Box<PairFailure>),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code, used in JSON diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::FieldMismatch { .. } => "FieldMismatch",
            Error::InvalidOrder(_) => "InvalidOrder",
            Error::RankNotOne => "RankNotOne",
            Error::NotScalarPlusNilpotent { .. } => "NotScalarPlusNilpotent",
            Error::NotIdempotent => "NotIdempotent",
            Error::NotNilpotent => "NotNilpotent",
            Error::KTooSmall { .. } => "KTooSmall",
            Error::NotAnEigenpair(_) => "NotAnEigenpair",
            Error::EmptySystem => "EmptySystem",
            Error::SingularSystem(_) => "SingularSystem",
            Error::LambdaNotRootOfUnity { .. } => "LambdaNotRootOfUnity",
            Error::InputNotInTable(_) => "InputNotInTable",
            Error::DuplicateInput(_) => "DuplicateInput",
            Error::ProbeSetIncomplete { .. } => "ProbeSetIncomplete",
            Error::NotTheoremForm { .. } => "NotTheoremForm",
            Error::PreservationFailed(_) => "PreservationFailed",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
