use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid size {0}: must be a power of two and at least 8")]
    InvalidGrid(usize),
    #[error("size mismatch: expected {expected} values, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("grid mismatch: {0} vs {1}")]
    GridMismatch(usize, usize),
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("spectrum is not Hermitian (relative defect {0:e})")]
    NotHermitian(f64),
    #[error("field has nonzero mean {0:e}")]
    NonzeroMean(f64),
    #[error("empty mask: observation region contains no nodes")]
    EmptyMask,
    #[error("stride 2^{p} does not divide grid size {n}")]
    StrideMismatch { p: u32, n: usize },
    #[error("forcing band [{lo}, {hi}] contains no lattice points or is not resolved on n = {n}")]
    InvalidForcingBand { lo: u32, hi: u32, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("blow-up detected at step {step} (t = {time})")]
    BlowUp { step: u64, time: f64 },
    #[error("Gevrey norm overflow: contribution from |k| = {0} is not finite")]
    GevreyOverflow(f64),
    #[error("clock mismatch: reference t = {reference}, assimilated t = {assimilated}")]
    ClockMismatch { reference: f64, assimilated: f64 },
    #[error("reference field has zero norm")]
    DegenerateReference,
    #[error("error series saturated: non-positive error at t = {0}")]
    SaturatedSeries(f64),
    #[error("not enough samples for fit: need {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("thickness ratio degenerate: masked norm vanishes (ratio {0:e})")]
    DegenerateRatio(f64),
    #[error("overflow evaluating exp({0})")]
    Overflow(f64),
    #[error("malformed {kind} file: {reason}")]
    Format { kind: &'static str, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
