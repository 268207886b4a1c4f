use thiserror::Error;

use crate::circuit::ParseError;

/// Which group-membership test rejected a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Symplectic,
    Orthogonal,
    Commutes,
}

impl std::fmt::Display for Membership {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Membership::Symplectic => "symplectic (S^T J S = J)",
            Membership::Orthogonal => "orthogonal (S^T S = I)",
            Membership::Commutes => "complex-linear (S J = J S)",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |H - H^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary: max |V^dagger V - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not symplectic: max |S^T J S - J| = {deviation:e}")]
    NotSymplectic { deviation: f64 },

    #[error("matrix is not in the image of gamma: max structural deviation = {deviation:e}")]
    NotGammaImage { deviation: f64 },

    #[error("matrix is not in Sp(2N) ∩ O(2N): {failed} check failed with deviation {deviation:e}")]
    NotInIntersection { failed: Membership, deviation: f64 },

    #[error("expected an even dimension, got {0}")]
    OddDimension(usize),

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("linear solve failed at step {step} (t = {time})")]
    InnerSolveDiverged { step: usize, time: f64 },

    #[error("invalid time interval [{t0}, {t1}]: need finite t1 > t0")]
    InvalidInterval { t0: f64, t1: f64 },

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    #[error("qubit target {index} out of range for {n_qubits} qubit(s)")]
    TargetOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit target {0} given more than once")]
    DuplicateTarget(usize),

    #[error("mode {index} out of range for {n_modes} mode(s)")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("mode {0} given more than once")]
    DuplicateMode(usize),

    #[error("gate {gate} is {found}, expected {expected}")]
    KindMismatch { gate: String, expected: &'static str, found: &'static str },

    #[error("gate {gate} takes {expected} target(s), got {found}")]
    ArityMismatch { gate: String, expected: usize, found: usize },

    #[error("gate {gate} takes {expected} parameter(s), got {found}")]
    ParamCount { gate: String, expected: usize, found: usize },

    #[error("unknown gate {0}")]
    UnknownGate(String),

    #[error("gate {gate} (op {op_index}) is symplectic-only and has no complex-backend action")]
    SymplecticGateOnComplexBackend { gate: String, op_index: usize },

    #[error("state has zero norm")]
    ZeroNormState,

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
