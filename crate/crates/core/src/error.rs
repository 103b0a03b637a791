//! Error types shared across the crate.

use thiserror::Error;

/// Errors from constructing truth tables or parsing their text forms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("variable count {0} exceeds the table-backed maximum of {max}", max = crate::table::MAX_VARS)]
    TooManyVariables(u32),
    #[error("expected {expected} table bits for {n} variables, got {got}")]
    WrongLength { n: u32, expected: usize, got: usize },
    #[error("table literal is empty")]
    EmptyLiteral,
    #[error("table literal length {0} is not a power of two")]
    LengthNotPowerOfTwo(usize),
    #[error("invalid character {ch:?} at position {pos} in table literal")]
    BadChar { ch: char, pos: usize },
    #[error("hex literal padding bits must be zero")]
    NonZeroPadding,
}

/// Syntax or range errors from the ANF text parser, with a byte position
/// into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseAnfError {
    pub position: usize,
    pub kind: ParseAnfErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseAnfErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("expected a term ('1', '0' or a product of variables)")]
    ExpectedTerm,
    #[error("expected a variable index after 'x'")]
    ExpectedIndex,
    #[error("variable index {var} out of range 1..={n}")]
    VarOutOfRange { var: u64, n: u32 },
}

/// Violations of the layered normal form invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("a layer structure needs at least one layer")]
    NoLayers,
    #[error("layer {0} is empty")]
    EmptyLayer(usize),
    #[error("variable x{0} appears in more than one factor")]
    DuplicateVariable(u32),
    #[error("variable x{var} out of range 1..={n}")]
    VarOutOfRange { var: u32, n: u32 },
    #[error("variable x{0} is missing from the layers")]
    MissingVariable(u32),
    #[error("the last layer must have at least two variables when n >= 2")]
    LastLayerTooSmall,
    #[error("variable count {0} exceeds the table-backed maximum of {max}", max = crate::table::MAX_VARS)]
    TooManyVariables(u32),
    #[error("malformed structure text: {0}")]
    BadText(String),
}

/// Violations of the layer-size-vector invariants (parts sum to n, every
/// part positive, last part at least two).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositionError {
    #[error("a composition needs at least one part")]
    NoParts,
    #[error("part {0} is zero")]
    ZeroPart(usize),
    #[error("parts sum to {sum}, expected {n}")]
    WrongSum { n: u32, sum: u64 },
    #[error("last part must be at least 2 (got {0})")]
    LastPartTooSmall(u32),
    #[error("variable count must be at least 2 (got {0})")]
    TooFewVariables(u32),
}

/// Out-of-range arguments to the closed-form formulas.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("variable count {n} out of range {min}..={max}")]
    VarCountOutOfRange { n: u32, min: u32, max: u32 },
    #[error("layer number {r} out of range 1..={max} for n = {n}")]
    LayerCountOutOfRange { r: u32, n: u32, max: u32 },
    #[error("layer index {l} out of range 1..={r}")]
    LayerIndexOutOfRange { l: usize, r: usize },
    #[error("scan for n = {n} exceeds the configured cap {cap}")]
    ScanCapExceeded { n: u32, cap: u32 },
    #[error(transparent)]
    Composition(#[from] CompositionError),
}
