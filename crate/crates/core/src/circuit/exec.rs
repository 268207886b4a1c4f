use rand::Rng;
use rayon::prelude::*;

use super::{Circuit, TargetSpace};
use crate::duality::{complex_to_real_state, phase_space_action, real_to_complex_state, ComplexState, PhaseState};
use crate::error::{Error, Result};
use crate::gates::{embed_symplectic, embed_unitary, GateCatalog, GateKind};
use crate::matrix::{max_diff_cvec, CMatrix, RMatrix};
use crate::random::{random_state_vector, seeded_rng, SimRng};

/// A circuit lowered to full-system unitaries, one per op.
#[derive(Debug, Clone)]
pub struct ComplexProgram {
    dim: usize,
    steps: Vec<CMatrix>,
}

impl ComplexProgram {
    pub fn compile(c: &Circuit) -> Result<Self> {
        let steps = c
            .ops
            .iter()
            .enumerate()
            .map(|(op_index, op)| match op.target_space {
                TargetSpace::Qubit => embed_unitary(&op.gate, &op.targets, c.n_qubits),
                TargetSpace::Mode => {
                    Err(Error::SymplecticGateOnComplexBackend { gate: op.gate.name.clone(), op_index })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim: c.dim(), steps })
    }

    pub fn run(&self, psi0: &ComplexState) -> Result<ComplexState> {
        if psi0.dim() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: psi0.dim() });
        }
        let psi = self.steps.iter().fold(psi0.amplitudes().clone(), |psi, u| u * psi);
        Ok(ComplexState::new(psi))
    }
}

/// A circuit lowered to full-system real 2N×2N matrices, one per op:
/// the phase-space action of each embedded unitary, or the embedded
/// symplectic-only gate.
#[derive(Debug, Clone)]
pub struct RealProgram {
    dim: usize,
    steps: Vec<RMatrix>,
}

impl RealProgram {
    pub fn compile(c: &Circuit) -> Result<Self> {
        let steps = c
            .ops
            .iter()
            .map(|op| match op.target_space {
                TargetSpace::Qubit => embed_unitary(&op.gate, &op.targets, c.n_qubits).map(|u| phase_space_action(&u)),
                TargetSpace::Mode => embed_symplectic(&op.gate, &op.targets, c.dim()).map(|s| s.into_entries()),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim: c.dim(), steps })
    }

    pub fn run(&self, phi0: &PhaseState) -> Result<PhaseState> {
        if phi0.dim() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: phi0.dim() });
        }
        let x = self.steps.iter().fold(phi0.stacked(), |x, s| s * x);
        PhaseState::from_stacked(&x)
    }

    pub fn steps(&self) -> &[RMatrix] {
        &self.steps
    }
}

/// Runs `c` on ℂᴺ from `psi0`, or |0…0⟩ when `None`.
pub fn run_complex(c: &Circuit, psi0: Option<&ComplexState>) -> Result<ComplexState> {
    let program = ComplexProgram::compile(c)?;
    match psi0 {
        Some(psi) => program.run(psi),
        None => program.run(&ComplexState::basis(c.dim(), 0)),
    }
}

/// Runs `c` on ℝ²ᴺ from `phi0`, or q = e_0, p = 0 when `None`.
pub fn run_real(c: &Circuit, phi0: Option<&PhaseState>) -> Result<PhaseState> {
    let program = RealProgram::compile(c)?;
    match phi0 {
        Some(phi) => program.run(phi),
        None => program.run(&PhaseState::basis(c.dim(), 0)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub max_state_deviation: f64,
    pub per_trial: Vec<f64>,
}

/// Runs both backends from `trials` random normalized states and reports
/// the raw max-norm deviation between the results. Trial `i` draws its
/// initial state from stream `i` of the seeded generator, so the report
/// does not depend on scheduling.
pub fn equivalence_check(c: &Circuit, trials: usize, seed: u64) -> Result<EquivalenceReport> {
    let complex = ComplexProgram::compile(c)?;
    let real = RealProgram::compile(c)?;
    let dim = c.dim();
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = seeded_rng(seed);
            rng.set_stream(trial as u64);
            let psi0 = ComplexState::new(random_state_vector(dim, &mut rng));
            let via_complex = complex.run(&psi0)?;
            let via_real = real_to_complex_state(&real.run(&complex_to_real_state(&psi0))?);
            Ok(max_diff_cvec(via_complex.amplitudes(), via_real.amplitudes()))
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_state_deviation = per_trial.iter().copied().fold(0.0, f64::max);
    Ok(EquivalenceReport { max_state_deviation, per_trial })
}

/// Random circuit of `depth` gates drawn uniformly from `pool`. Rotation
/// angles are uniform in [-π, π); two-qubit gates get two distinct random
/// qubits and are skipped from the pool on one-qubit registers.
pub fn random_circuit(n_qubits: usize, depth: usize, pool: &[&str], rng: &mut SimRng) -> Result<Circuit> {
    let catalog = GateCatalog::global();
    let usable: Vec<_> = pool
        .iter()
        .map(|name| catalog.spec(name).ok_or_else(|| Error::UnknownGate(name.to_string())))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|spec| spec.kind == GateKind::Unitary && spec.arity <= n_qubits)
        .collect();
    if usable.is_empty() {
        return Err(Error::InvalidConfig("no usable unitary gate in pool".into()));
    }
    let mut circuit = Circuit::new(n_qubits);
    for _ in 0..depth {
        let spec = usable[rng.random_range(0..usable.len())];
        let params: Vec<f64> =
            (0..spec.n_params).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
        let mut targets: Vec<usize> = Vec::with_capacity(spec.arity);
        while targets.len() < spec.arity {
            let t = rng.random_range(0..n_qubits);
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        circuit.push_gate(spec.name, &params, &targets)?;
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use crate::matrix::{c, max_diff_rvec};
    use std::f64::consts::{E, FRAC_1_SQRT_2};

    #[test]
    fn empty_circuit_is_identity_on_both_backends() {
        let circ = Circuit::new(2);
        let psi0 = ComplexState::new(random_state_vector(4, &mut seeded_rng(1)));
        assert_eq!(run_complex(&circ, Some(&psi0)).unwrap(), psi0);
        let phi0 = complex_to_real_state(&psi0);
        assert_eq!(run_real(&circ, Some(&phi0)).unwrap(), phi0);
        assert_eq!(equivalence_check(&circ, 5, 0).unwrap().max_state_deviation, 0.0);
    }

    #[test]
    fn bell_state_by_hand() {
        let circ = parse_circuit("qubits 2\ngate H 0\ngate CNOT 0 1\nmeasure").unwrap();
        let psi = run_complex(&circ, None).unwrap();
        let h = FRAC_1_SQRT_2;
        let expected = [c(h, 0.), c(0., 0.), c(0., 0.), c(h, 0.)];
        for (got, want) in psi.amplitudes().iter().zip(expected) {
            assert!((got - want).norm() < 1e-15);
        }
        let phi = run_real(&circ, None).unwrap();
        assert!(max_diff_rvec(&phi.stacked(), &complex_to_real_state(&psi).stacked()) <= 1e-12);
        assert!(equivalence_check(&circ, 20, 3).unwrap().max_state_deviation <= 1e-12);
    }

    #[test]
    fn notp_on_zero() {
        let circ = parse_circuit("qubits 1\ngate NOTP 0").unwrap();
        let psi = run_complex(&circ, None).unwrap();
        assert_eq!(psi.amplitudes().as_slice(), &[c(0., 0.), c(-1., 0.)]);
    }

    #[test]
    fn squeeze_on_real_backend_only() {
        let circ = parse_circuit("qubits 1\nsgate SQUEEZE(1) 0").unwrap();
        let phi = run_real(&circ, None).unwrap();
        assert!((phi.q()[0] - E).abs() < 1e-15);
        assert_eq!(phi.q()[1], 0.0);
        match run_complex(&circ, None) {
            Err(Error::SymplecticGateOnComplexBackend { gate, op_index }) => {
                assert_eq!((gate.as_str(), op_index), ("SQUEEZE", 0));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(equivalence_check(&circ, 3, 0), Err(Error::SymplecticGateOnComplexBackend { .. })));
    }

    #[test]
    fn complex_phase_gates_agree_across_backends() {
        // S, T, Y and RZ have imaginary parts, so they pin the sign of the
        // real-backend action.
        let circ = parse_circuit(
            "qubits 2\ngate H 0\ngate S 0\ngate T 1\ngate Y 1\ngate RZ(0.7) 0\ngate RX(-1.2) 1\ngate CNOT 1 0",
        )
        .unwrap();
        assert!(equivalence_check(&circ, 10, 7).unwrap().max_state_deviation <= 1e-12);
    }

    #[test]
    fn random_circuits_agree() {
        let mut rng = seeded_rng(8);
        for n in 1..=4 {
            let circ = random_circuit(n, 40, &["H", "X", "RZ", "CNOT", "NOTP", "S", "T"], &mut rng).unwrap();
            assert_eq!(circ.ops.len(), 40);
            assert!(equivalence_check(&circ, 4, n as u64).unwrap().max_state_deviation <= 1e-12);
        }
    }

    #[test]
    fn equivalence_report_is_reproducible() {
        let circ = random_circuit(3, 20, &["H", "RZ", "CNOT"], &mut seeded_rng(9)).unwrap();
        let a = equivalence_check(&circ, 16, 42).unwrap();
        let b = equivalence_check(&circ, 16, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.per_trial.len(), 16);
    }

    #[test]
    fn run_checks_initial_state_dimension() {
        let circ = Circuit::new(2);
        assert!(matches!(run_complex(&circ, Some(&ComplexState::basis(2, 0))), Err(Error::DimMismatch { .. })));
        assert!(matches!(run_real(&circ, Some(&PhaseState::basis(8, 0))), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn random_circuit_rejects_unknown_or_empty_pool() {
        let mut rng = seeded_rng(0);
        assert!(matches!(random_circuit(2, 3, &["NOPE"], &mut rng), Err(Error::UnknownGate(_))));
        assert!(random_circuit(1, 3, &["CNOT"], &mut rng).is_err());
    }
}
