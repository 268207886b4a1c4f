//! Circuit IR, text format, execution on both backends and measurement.

mod exec;
mod measure;
mod parse;

use std::fmt;

use crate::error::{Error, Result};
use crate::gates::{Gate, GateCatalog, GateKind};

pub use exec::{
    equivalence_check, random_circuit, run_complex, run_real, ComplexProgram, EquivalenceReport, RealProgram,
};
pub use measure::{measure, measure_parallel, Measurable, MeasurementResult};
pub use parse::{parse_circuit, ParseError, ParseErrorKind, MAX_QUBITS};

/// Whether a gate's targets are qubits of ℂ^(2^n) or modes of ℝ^(2·2^n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetSpace {
    Qubit,
    Mode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacedGate {
    pub gate: Gate,
    pub targets: Vec<usize>,
    pub target_space: TargetSpace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub ops: Vec<PlacedGate>,
    pub measure_at_end: bool,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, ops: Vec::new(), measure_at_end: false }
    }

    /// Complex dimension N = 2^n, also the number of modes.
    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    /// Appends a unitary gate on qubit targets.
    pub fn push_gate(&mut self, name: &str, params: &[f64], targets: &[usize]) -> Result<()> {
        self.push(name, params, targets, TargetSpace::Qubit)
    }

    /// Appends a symplectic-only gate on mode targets.
    pub fn push_sgate(&mut self, name: &str, params: &[f64], modes: &[usize]) -> Result<()> {
        self.push(name, params, modes, TargetSpace::Mode)
    }

    fn push(&mut self, name: &str, params: &[f64], targets: &[usize], space: TargetSpace) -> Result<()> {
        let gate = GateCatalog::global().build(name, params)?;
        let (expected, limit) = match space {
            TargetSpace::Qubit => (GateKind::Unitary, self.n_qubits),
            TargetSpace::Mode => (GateKind::SymplecticOnly, self.dim()),
        };
        if gate.kind() != expected {
            let found = gate.kind().as_str();
            return Err(Error::KindMismatch { gate: gate.name, expected: expected.as_str(), found });
        }
        if targets.len() != gate.arity {
            return Err(Error::ArityMismatch { gate: gate.name, expected: gate.arity, found: targets.len() });
        }
        for (i, &t) in targets.iter().enumerate() {
            if t >= limit {
                return Err(match space {
                    TargetSpace::Qubit => Error::TargetOutOfRange { index: t, n_qubits: self.n_qubits },
                    TargetSpace::Mode => Error::ModeOutOfRange { index: t, n_modes: limit },
                });
            }
            if targets[..i].contains(&t) {
                return Err(match space {
                    TargetSpace::Qubit => Error::DuplicateTarget(t),
                    TargetSpace::Mode => Error::DuplicateMode(t),
                });
            }
        }
        self.ops.push(PlacedGate { gate, targets: targets.to_vec(), target_space: space });
        Ok(())
    }

    pub fn has_symplectic_only(&self) -> bool {
        self.ops.iter().any(|op| op.target_space == TargetSpace::Mode)
    }
}

/// Serializes to the text format accepted by [`parse_circuit`].
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n_qubits)?;
        for op in &self.ops {
            let keyword = match op.target_space {
                TargetSpace::Qubit => "gate",
                TargetSpace::Mode => "sgate",
            };
            write!(f, "{keyword} {}", op.gate)?;
            for t in &op.targets {
                write!(f, " {t}")?;
            }
            writeln!(f)?;
        }
        if self.measure_at_end {
            writeln!(f, "measure")?;
        }
        Ok(())
    }
}
