use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime >= 3")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the table-backed limit {limit}", limit = crate::field::MAX_MODULUS)]
    ModulusTooLarge(u64),
    #[error("residue {residue} is out of range for modulus {modulus}")]
    ResidueOutOfRange { residue: u64, modulus: u64 },
    #[error("polynomial gcd of two zero polynomials is undefined")]
    GcdOfZero,
    #[error("squarefreeness is undefined for {0} polynomials")]
    DegenerateSquarefreeInput(&'static str),
    #[error("curve is not squarefree and so lies outside the moduli family")]
    NotSquarefree,
    #[error("genus {genus} at p = {p}: family size p^{exponent} overflows u64")]
    FamilyTooLarge { genus: u32, p: u64, exponent: u32 },
    #[error("reduction {reduction} needs p coprime to deg f = {degree}, but p = {p} divides it")]
    ReductionUnavailable {
        reduction: &'static str,
        p: u64,
        degree: u64,
    },
    #[error("invalid enumeration plan: {0}")]
    InvalidPlan(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error("checkpoint does not match the requested plan: {0}")]
    CheckpointMismatch(String),
    #[error("Kloosterman parameter {name} must be a nonzero residue mod {modulus}")]
    ZeroKloostermanParameter { name: &'static str, modulus: u64 },
    #[error("imaginary residual {imag:e} exceeds {bound:e} at p = {p}; the sum should be real")]
    ImaginaryResidual { imag: f64, bound: f64, p: u64 },
    #[error("|t| = {t:e} exceeds the Weil bound 2*sqrt(p) = {bound:e} at p = {p} beyond the numerical allowance")]
    WeilBoundExceeded { t: f64, bound: f64, p: u64 },
    #[error("angle {0} lies outside [0, pi]")]
    AngleOutOfRange(f64),
    #[error("empty sample")]
    EmptySample,
    #[error("chi-square needs at least {needed} samples for {bins} bins (got {got})")]
    SampleTooSmall {
        needed: usize,
        bins: usize,
        got: usize,
    },
    #[error("chi-square needs at least 2 bins (got {0})")]
    TooFewBins(usize),
    #[error("angle file line {line}: {reason}")]
    MalformedAngleRow { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
