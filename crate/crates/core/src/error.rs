use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has odd dimension {0}; a Pfaffian needs an even dimension")]
    OddDimension(usize),
    #[error("matrix is not skew-symmetric (relative residual {residual:e})")]
    NotSkew { residual: f64 },
    #[error("matrix is not symmetric for the symplectic form (relative residual {residual:e})")]
    NotSymmetric { residual: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("symplectic form is degenerate")]
    DegenerateSymplecticForm,
    #[error("hermitian form is degenerate or not hermitian")]
    DegenerateForm,
    #[error("polynomial degree {found} does not match the required degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("eigenvalues collide (separation {separation:e}); the point is not generic")]
    ClusteredSpectrum { separation: f64 },
    #[error("eigenvalue {re}+{im}i has no partner of opposite sign")]
    UnpairedEigenvalue { re: f64, im: f64 },
    #[error("kernel vector is not contained in either block (mixing residual {residual:e})")]
    MixedKernelVector { residual: f64 },
    #[error("Higgs field has trivial kernel")]
    NoKernel,
    #[error("gamma block is singular")]
    SingularGamma,
    #[error("coefficient list does not match the degree pattern: {0}")]
    BadDegreePattern(String),
    #[error("curve is non-reduced (discriminant vanishes identically)")]
    NonReduced,
    #[error("operation requires an involution-carrying group, got {0}")]
    WrongGroup(String),
    #[error("base point is not regular (sheets collide)")]
    NonRegularPoint,
    #[error("residue pairing is degenerate")]
    DegeneratePairing,
    #[error("invalid equivariant lift: {0}")]
    BadLift(String),
    #[error("number of +1 fixed points {m_plus} outside 0..={max}")]
    MOutOfRange { m_plus: i64, max: i64 },
    #[error("degenerate case: {0}")]
    DegenerateCase(String),
    #[error("eigenvalue computation failed to converge")]
    NoConvergence,
}
