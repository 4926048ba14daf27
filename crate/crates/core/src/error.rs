use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("generator index {index} out of range 1..={n}")]
    GeneratorIndex { index: usize, n: usize },

    #[error("incompatible coefficients: {0}")]
    IncompatibleCoefficients(String),

    #[error("operator needs form degree at least 1")]
    ZeroFormDegree,

    #[error("input of jet total {needed} lies outside the cochain window {window}")]
    OutsideWindow { needed: u32, window: u32 },

    #[error("cochain is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("cochain is not expressible in the slice basis: {0}")]
    NotInSlice(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("cochain is not closed: {0}")]
    NotClosed(String),

    #[error("density depends explicitly on the base point")]
    NotTranslationInvariant,

    #[error("parse error: {0}")]
    Parse(String),
}
