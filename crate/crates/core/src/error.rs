use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields: {left} vs {right}")]
    FieldMismatch { left: String, right: String },
    #[error("{radicand} already has a square root in {field}")]
    AlreadySquare { field: String, radicand: String },
    #[error("cannot adjoin the square root of zero")]
    ZeroRadicand,
    #[error("quadratic extensions of finite fields are not supported ({0})")]
    UnsupportedExtension(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("{0} is not presented as F(i); no Re/Im split")]
    NoImaginaryPresentation(String),
    #[error("{0} has no square root of -1")]
    NoImaginaryUnit(String),
    #[error("{field} is not an ordered real tower: {reason}")]
    NotReal { field: String, reason: String },
    #[error("conjugation level {level} is invalid for a tower of depth {depth}")]
    InvalidLevel { level: usize, depth: usize },
    #[error("conjugation at level {level} moves the radicand of level {moved}; it does not extend to a field map")]
    NonLiftableConjugation { level: usize, moved: usize },
    #[error("{field} does not embed into {target}")]
    NotASubfield { field: String, target: String },
    #[error("field {0} is not finite")]
    FieldNotFinite(String),
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("parameter must be nonzero")]
    ZeroParameter,
    #[error("matrix is not orthogonal: {0}")]
    NotOrthogonal(String),
    #[error("chain edge {edge} does not have unit distance (phi = {phi})")]
    BrokenChain { edge: usize, phi: String },
    #[error("rational chain search exhausted its budget: {0}")]
    SearchExhausted(String),
    #[error("no chain of rational unit steps can reach the target: {0}")]
    RationalChainImpossible(String),
    #[error("point is real (b1 = b2 = 0); the imaginary-chain construction does not apply")]
    PrimaryBranchUnavailable,
    #[error("images do not form an orthonormal frame: {0}")]
    FrameNotOrthonormal(String),
    #[error("extracted map is not a field homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("map is not coordinatewise at {0}")]
    ProductFormViolation(String),
    #[error("image of (i,i) matches neither branch: {0}")]
    BranchUndetermined(String),
    #[error("map does not preserve unit distance: {0}")]
    NotUnitPreserving(String),
    #[error("Lorentz normalization failed: {0}")]
    LorentzNormalizationFailed(String),
    #[error("Lorentz case undetermined: {0}")]
    CaseUndetermined(String),
    #[error("reconstruction disagrees with the input map at {0}")]
    ReconstructionMismatch(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
