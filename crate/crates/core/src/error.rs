use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid field size {0}: expected a prime power below 65536")]
    InvalidFieldSize(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("q = {q} is not 1 mod p = {p}; the field has no primitive p-th root of unity")]
    NoRootsOfUnity { q: u64, p: u64 },
    #[error("characteristic {0} is not supported for elliptic curves (need char not in {{2, 3}})")]
    BadCharacteristic(u64),
    #[error("polynomial must be nonzero")]
    ZeroPolynomial,
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("polynomial is not irreducible: {0}")]
    NotIrreducible(String),
    #[error("degree must be at least {min}, got {got}")]
    DegreeTooSmall { min: u64, got: u64 },
    #[error("residue symbol undefined: {v} vanishes modulo {h}")]
    SymbolUndefined { v: String, h: String },
    #[error("coefficient {0} is out of range for the field")]
    CoefficientOutOfRange(u64),
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("count overflows: q^n too large for q = {q}, n = {n}")]
    CountOverflow { q: u64, n: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("place {0} has bad reduction")]
    BadPlace(String),
    #[error("no auxiliary place: the partition is not locally arrangeable")]
    NoAuxiliaryPlace,
    #[error("classification is only implemented for p in {{2, 3}}, got p = {0}")]
    UnsupportedTwist(u32),
    #[error("discriminant of the curve vanishes identically")]
    SingularCurve,
    #[error("curve is isotrivial (constant j-invariant)")]
    Isotrivial,
    #[error("enumeration budget exceeded: q^d = {required} > {limit}")]
    BudgetExceeded { required: u128, limit: u128 },
    #[error("degenerate Kummer extension: {0}")]
    DegenerateExtension(String),
    #[error("h_k must be pairwise distinct; {0} repeats")]
    RepeatedCharacter(String),
    #[error("jmax = {jmax} leaves tail mass {tail:e} above the 1e-12 tolerance")]
    TruncationTooSmall { jmax: usize, tail: f64 },
    #[error("place class {0} is not in {{0, 1, 2}}")]
    InvalidClass(u32),
    #[error("internal invariant failed: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
