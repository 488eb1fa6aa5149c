use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} exceeds the configured cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("dimension must be positive")]
    EmptyDimension,

    #[error("matrix data of length {len} is not a square of a positive integer")]
    NotSquare { len: usize },

    #[error("non-finite value in input")]
    NonFinite,

    #[error("state vector is not normalized (norm squared {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("direction is not a unit vector (norm {norm})")]
    NonUnitDirection { norm: f64 },

    #[error("site {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("observable label must be nonempty")]
    EmptyLabel,

    #[error("product of '{a}' and '{b}' is not Hermitian (deviation {deviation:.3e}); the observables do not commute")]
    NonHermitianProduct { a: String, b: String, deviation: f64 },

    #[error("invalid Pauli string '{0}'")]
    InvalidPauliString(String),

    #[error("a post-selected state is required")]
    MissingPostSelection,

    #[error("post-selection impossible: ABL denominator {total:.3e} vanishes")]
    ZeroDenominator { total: f64 },

    #[error("eigenvalue {eigenvalue} has probability {probability:.3e}; cannot collapse onto it")]
    ZeroProbabilityOutcome { eigenvalue: f64, probability: f64 },

    #[error("{eigenvalue} is not an eigenvalue of '{label}'")]
    NoSuchEigenvalue { label: String, eigenvalue: f64 },

    #[error("observables '{a}' and '{b}' do not commute (commutator norm {norm:.3e})")]
    NonCommuting { a: String, b: String, norm: f64 },

    #[error("Hardy parameters need a, b1, b2 all nonzero")]
    DegenerateHardyParameters,

    #[error("unknown observable '{0}'")]
    UnknownObservable(String),

    #[error("observable '{label}' does not square to the identity")]
    NotInvolution { label: String },

    #[error("label '{0}' refers to two different operators")]
    LabelConflict(String),

    #[error("operator product of set {set} is not +I or -I (deviation {deviation:.3e})")]
    ProductNotSignedIdentity { set: usize, deviation: f64 },

    #[error("operator product of set {set} does not have the state as a +1 or -1 eigenvector")]
    ProductNotStateEigen { set: usize },

    #[error("constraint references unknown variable '{0}'")]
    UnknownVariable(String),

    #[error("constraint {0} repeats a variable")]
    RepeatedVariable(usize),

    #[error("{count} variables exceed the search cap of {max}")]
    TooManyVariables { count: usize, max: usize },

    #[error("{count} directions exceed the search cap of {max}")]
    TooManyDirections { count: usize, max: usize },

    #[error("triad {index} is not pairwise orthogonal")]
    NonOrthogonalTriad { index: usize },

    #[error("triad {index} is malformed: {reason}")]
    InvalidTriad { index: usize, reason: String },

    #[error("invalid hidden-variable model: {0}")]
    InvalidModel(String),

    #[error("unknown label '{0}'")]
    UnknownLabel(String),

    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),

    #[error("schema error: {0}")]
    Schema(String),
}
