use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {0} does not carry weight 0")]
    NotApplicable(usize),
    #[error("index {0} out of range")]
    BadIndex(usize),
    #[error("zigzag is not standard")]
    NotStandard,
    #[error("zigzag admits no standard form: {0}")]
    NotStandardizable(String),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("vertex {0} cannot be blown down")]
    NotContractibleVertex(usize),
    #[error("not a fiber: {0}")]
    NotAFiber(String),
    #[error("center lies on the section")]
    CenterOnSection,
    #[error("component {0} does not exist yet")]
    BadComponent(usize),
    #[error("point T{0}({1}) was already blown up")]
    StaleCenter(usize, String),
    #[error("bad boundary: {0}")]
    BadBoundary(String),
    #[error("inner series has a nonzero constant term")]
    BadComposition,
    #[error("needs a root of degree {k} of {value}")]
    ExtensionRequired { k: u32, value: String },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("descent rule does not apply: {0}")]
    WrongCase(String),
    #[error("arc space at a node has psi = 0")]
    DegenerateAtNode,
    #[error("arc lies in the fiber")]
    ArcInFiber,
    #[error("membership needs primitive {0}-th roots of unity")]
    NeedsRootsOfUnity(u32),
    #[error("spaces lie over different base points")]
    MixedFibers,
    #[error("residual relation is not monomial: {0}")]
    NonabelianResidual(String),
    #[error("only the affine line is supported as a base")]
    BaseUnsupported,
    #[error("wrong presentation kind: {0}")]
    WrongKind(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("group oracle violation: {0}")]
    OracleViolation(String),
    #[error("no fixed vertex within horizon {0}")]
    NoFixedVertexWithinHorizon(usize),
    #[error("generator of length {0} exceeds bound {1}")]
    LengthExceeded(usize, usize),
    #[error("bad path: {0}")]
    BadPath(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable snake_case code used in machine-readable error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotApplicable(_) => "not_applicable",
            Error::BadIndex(_) => "bad_index",
            Error::NotStandard => "not_standard",
            Error::NotStandardizable(_) => "not_standardizable",
            Error::BadInput(_) => "bad_input",
            Error::NotContractibleVertex(_) => "not_contractible_vertex",
            Error::NotAFiber(_) => "not_a_fiber",
            Error::CenterOnSection => "center_on_section",
            Error::BadComponent(_) => "bad_component",
            Error::StaleCenter(..) => "stale_center",
            Error::BadBoundary(_) => "bad_boundary",
            Error::BadComposition => "bad_composition",
            Error::ExtensionRequired { .. } => "extension_required",
            Error::NotInvertible(_) => "not_invertible",
            Error::WrongCase(_) => "wrong_case",
            Error::DegenerateAtNode => "degenerate_at_node",
            Error::ArcInFiber => "arc_in_fiber",
            Error::NeedsRootsOfUnity(_) => "needs_roots_of_unity",
            Error::MixedFibers => "mixed_fibers",
            Error::NonabelianResidual(_) => "nonabelian_residual",
            Error::BaseUnsupported => "base_unsupported",
            Error::WrongKind(_) => "wrong_kind",
            Error::BadParams(_) => "bad_params",
            Error::OracleViolation(_) => "oracle_violation",
            Error::NoFixedVertexWithinHorizon(_) => "no_fixed_vertex_within_horizon",
            Error::LengthExceeded(..) => "length_exceeded",
            Error::BadPath(_) => "bad_path",
            Error::Parse(_) => "parse_error",
        }
    }
}
