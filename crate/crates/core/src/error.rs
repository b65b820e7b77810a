use core::fmt;

/// Errors raised by the simulation core.
///
/// Protocol failures (a post-selection that never succeeds) are data, not
/// errors; they show up in [`StepOutcome`](crate::StepOutcome) and
/// [`IterationTrace`](crate::IterationTrace) instead.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A dimension that is not a power of two in `1..=16`.
    InvalidDimension(usize),
    /// Data length does not match the declared dimension.
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    /// Two operands with incompatible dimensions.
    DimensionMismatch {
        left: usize,
        right: usize,
    },
    /// A Kronecker product would exceed 16 × 16.
    DimensionOverflow(usize),
    /// Qubit orders that are not permutations of the same label set.
    QubitOrderMismatch,
    /// NaN or infinite entry.
    NonFinite,
    /// Pure state whose squared norm differs from 1.
    NotNormalized(f64),
    NotUnitary(f64),
    NotHermitian(f64),
    /// Smallest eigenvalue below the PSD tolerance.
    NotPositive(f64),
    /// Density operator whose trace differs from 1.
    TraceNotOne(f64),
    /// Operator expected to be traceless.
    NotTraceless(f64),
    EpsilonOutOfRange(f64),
    /// The post-selected state has (numerically) zero weight.
    NoPostSelectedState(f64),
    /// Only the `U+` branch has closed perturbative formulas.
    UnsupportedSign,
    /// Iteration depth outside `{2, 3}`.
    InvalidSteps(usize),
    /// The Jacobi eigensolver ran out of sweeps.
    NoConvergence {
        sweeps: usize,
        off_diagonal: f64,
    },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension(d) => write!(f, "dimension {d} is not a power of two in 1..=16"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} entries, found {found}")
            }
            Error::DimensionMismatch { left, right } => {
                write!(f, "incompatible dimensions {left} and {right}")
            }
            Error::DimensionOverflow(d) => write!(f, "product dimension {d} exceeds 16"),
            Error::QubitOrderMismatch => f.write_str("qubit orders are not permutations of the same labels"),
            Error::NonFinite => f.write_str("non-finite entry"),
            Error::NotNormalized(n) => write!(f, "state is not normalized (squared norm {n})"),
            Error::NotUnitary(e) => write!(f, "matrix is not unitary (max deviation {e:e})"),
            Error::NotHermitian(e) => write!(f, "matrix is not Hermitian (max deviation {e:e})"),
            Error::NotPositive(e) => write!(f, "matrix is not positive semidefinite (eigenvalue {e:e})"),
            Error::TraceNotOne(t) => write!(f, "density matrix trace is {t}, expected 1"),
            Error::NotTraceless(t) => write!(f, "operator trace is {t:e}, expected 0"),
            Error::EpsilonOutOfRange(e) => write!(f, "noise weight {e} outside [0, 1)"),
            Error::NoPostSelectedState(p) => {
                write!(f, "no post-selected state (success probability {p:e})")
            }
            Error::UnsupportedSign => f.write_str("perturbation series is only defined for U+"),
            Error::InvalidSteps(s) => write!(f, "iteration depth {s} not in {{2, 3}}"),
            Error::NoConvergence { sweeps, off_diagonal } => {
                write!(f, "Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal {off_diagonal:e})")
            }
        }
    }
}

impl core::error::Error for Error {}
