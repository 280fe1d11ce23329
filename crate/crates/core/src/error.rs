use crate::circuit::GateKind;

/// Errors produced while building, lowering, simulating or serializing circuits.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid width {width}: {reason}")]
    InvalidWidth { width: usize, reason: &'static str },

    #[error("qubit {qubit} is out of range for a circuit of width {width}")]
    QubitOutOfRange { qubit: usize, width: usize },

    #[error("qubit {qubit} appears more than once in the operand list")]
    OperandCollision { qubit: usize },

    #[error("composite `{name}` expects {expected} operands, got {actual}")]
    ArityMismatch {
        name: String,
        expected: usize,
        actual: usize,
    },

    #[error("no decomposition rule for gate kind {0}")]
    UnsupportedGate(GateKind),

    #[error("gate kind {0} must be lowered before this operation")]
    MustLower(GateKind),

    #[error("gate kind {0} is not a basis-state permutation")]
    NonPermutationGate(GateKind),

    #[error("width {width} exceeds the statevector cap of {cap} qubits")]
    Capacity { width: usize, cap: usize },

    #[error("exhaustive enumeration over {width} qubits exceeds the limit of {limit}")]
    EnumerationLimit { width: usize, limit: usize },

    #[error("widths differ: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },

    #[error("input {value} is outside the supported range [{min}, {max}]")]
    InputRange { value: u64, min: u64, max: u64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid decomposition rule for {kind}: {reason}")]
    InvalidRule { kind: GateKind, reason: String },

    #[error("circuit failed validation: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
