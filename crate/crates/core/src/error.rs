use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("singular matrix: rank {rank} < {size}")]
    Singular { rank: usize, size: usize },

    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("vector has length {found}, expected ambient dimension {expected}")]
    BadVector { expected: usize, found: usize },

    #[error("subspace is not contained in the enclosing space: basis vector {index} lies outside")]
    NotContained { index: usize },

    #[error("generator {generator} does not preserve the subspace: image of basis vector {index} lies outside")]
    NotInvariant { generator: usize, index: usize },

    #[error("zero vector cannot seed a module")]
    ZeroVector,

    #[error("r = {r} is not allowed: the construction requires r >= 3 (r = 2 collapses e1V to zero)")]
    InvalidR { r: u32 },

    #[error("diameter D = {d} is not allowed: D >= 1 is required")]
    InvalidD { d: u32 },

    #[error("size cap exceeded: r^D = {size} > cap {cap}")]
    SizeCap { size: u128, cap: u128 },

    #[error("index {index} out of range {min}..={max} for {what}")]
    OutOfRange {
        what: &'static str,
        index: i64,
        min: i64,
        max: i64,
    },

    #[error("identity failed during construction: {0}")]
    Construction(String),

    #[error("distance-regularity violation: {0}")]
    DistanceRegularity(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("module is reducible (commutant dimension {commutant_dim})")]
    Reducible { commutant_dim: usize },
}
