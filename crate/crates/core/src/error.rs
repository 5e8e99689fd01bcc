use core::fmt;

/// Errors raised by the numerical and combinatorial routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Coefficient list violates `m > 0`, `f_m > 0`, `f_0 != 0`.
    InvalidPolynomial(&'static str),
    /// `f` has a repeated root.
    NonSquarefree,
    /// Newton refinement did not reach the requested precision.
    PrecisionExhausted { digits: u32 },
    /// A root lies within the circle tolerance but `f` is not reciprocal.
    Inconclusive,
    /// Negative powers of the companion matrix need `|f_0| = 1`.
    NotInvertible,
    /// The companion-matrix model of the torus needs `f_m = 1`.
    NotMonic,
    /// The strict output window of `f(σ)` is empty.
    EmptyResult,
    /// A central vector evaluated to a non-real number.
    NotReal { residual: f64 },
    /// `f` has a root of unity among its roots.
    CyclotomicInput,
    /// The input window does not cover the coordinates an operation reads.
    WindowTooSmall { needed_lo: i64, needed_hi: i64 },
    /// Integer rounding of `f(σ)w` left a residual above tolerance.
    NonIntegerResidual { residual: f64 },
    /// A digit lies outside `{0, ..., ceil(β - 1)}`.
    DigitOutOfRange { index: i64, digit: i64 },
    /// Precondition of a splice or construction step does not hold.
    PreconditionViolated(&'static str),
    /// More digits of `e*_β` are needed than are cached.
    EstarExhausted { needed: usize },
    /// A polynomial has no real root greater than one to serve as `β`.
    NoBetaRoot,
    /// The pruned Hofbauer core is empty.
    NotIrreducible,
    /// Cylinder path uses a forbidden transition or unknown state.
    InvalidPath,
    /// Polynomial is not a Salem polynomial.
    NotSalem,
    /// No insertion count in `0..L` met the bound at the given stage.
    InsertionFailed { stage: usize, step: usize, l: usize },
    /// Power iteration or a search loop hit its iteration cap.
    NoConvergence,
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidPolynomial(why) => write!(f, "invalid polynomial: {why}"),
            Error::NonSquarefree => f.write_str("polynomial has a repeated root"),
            Error::PrecisionExhausted { digits } => {
                write!(f, "root refinement stagnated at {digits} digits")
            }
            Error::Inconclusive => {
                f.write_str("root on the unit circle within tolerance but polynomial not reciprocal")
            }
            Error::NotInvertible => f.write_str("companion matrix not invertible over Z (|f_0| != 1)"),
            Error::NotMonic => f.write_str("companion matrix model needs a monic polynomial"),
            Error::EmptyResult => f.write_str("strict output window is empty"),
            Error::NotReal { residual } => {
                write!(f, "central vector is not real (imaginary residual {residual:e})")
            }
            Error::CyclotomicInput => f.write_str("polynomial is cyclotomic"),
            Error::WindowTooSmall { needed_lo, needed_hi } => {
                write!(f, "window must cover [{needed_lo}, {needed_hi}]")
            }
            Error::NonIntegerResidual { residual } => {
                write!(f, "rounding residual {residual:e} exceeds tolerance")
            }
            Error::DigitOutOfRange { index, digit } => {
                write!(f, "digit {digit} at index {index} out of range")
            }
            Error::PreconditionViolated(why) => write!(f, "precondition violated: {why}"),
            Error::EstarExhausted { needed } => {
                write!(f, "need {needed} digits of e*_beta, extend the cache first")
            }
            Error::NoBetaRoot => f.write_str("no real root greater than one"),
            Error::NotIrreducible => f.write_str("pruned chain core is empty"),
            Error::InvalidPath => f.write_str("path violates the chain transitions"),
            Error::NotSalem => f.write_str("polynomial is not a Salem polynomial"),
            Error::InsertionFailed { stage, step, l } => write!(
                f,
                "zero insertion failed at stage {stage}, step {step} with L = {l}"
            ),
            Error::NoConvergence => f.write_str("iteration did not converge"),
        }
    }
}

impl core::error::Error for Error {}
