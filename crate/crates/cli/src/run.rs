use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sympsim_core::circuit::{measure_parallel, parse_circuit, run_complex, run_real, Circuit, Measurable};
use sympsim_core::duality::{complex_to_real_state, real_to_complex_state, ComplexState, PhaseState};
use sympsim_core::io::{ComplexVectorJson, PhaseVectorJson};
use sympsim_core::matrix::max_diff_cvec;

use crate::failure::{read_input, Failure};
use crate::output::{csv_text, emit, json_line};
use crate::{OutFormat, RunArgs};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum InitialState {
    Complex(ComplexVectorJson),
    Phase(PhaseVectorJson),
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum StateJson {
    Complex(ComplexVectorJson),
    Phase(PhaseVectorJson),
}

#[derive(Debug, Serialize)]
struct RunReport {
    backend: &'static str,
    /// Bitstring (qubit 0 leftmost) → count.
    counts: BTreeMap<String, u64>,
    total_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    state: Option<StateJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    deviation: Option<f64>,
}

fn load_initial(args: &RunArgs, circuit: &Circuit) -> Result<Option<ComplexState>, Failure> {
    let Some(path) = &args.init else { return Ok(None) };
    let text = read_input(path)?;
    let parsed: InitialState =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let psi = match parsed {
        InitialState::Complex(v) => v.to_state(),
        InitialState::Phase(v) => v.to_state().map(|phi| real_to_complex_state(&phi)),
    }
    .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    if psi.dim() != circuit.dim() {
        return Err(Failure::input(format!(
            "{}: state has {} amplitudes, circuit needs {}",
            path.display(),
            psi.dim(),
            circuit.dim()
        )));
    }
    if !psi.amplitudes().iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Failure::input(format!("{}: non-finite amplitude", path.display())));
    }
    Ok(Some(psi))
}

fn sample<S: Measurable>(state: &S, args: &RunArgs, n_qubits: usize) -> Result<(BTreeMap<String, u64>, f64), Failure> {
    if args.shots == 0 {
        return Ok((BTreeMap::new(), state.outcome_weights().iter().sum()));
    }
    let result = measure_parallel(state, args.shots, args.seed.seed).map_err(Failure::runtime)?;
    let counts = result.counts.into_iter().map(|(k, n)| (format!("{k:0n_qubits$b}"), n)).collect();
    Ok((counts, result.total_norm))
}

pub fn cmd_run(args: &RunArgs) -> Result<(), Failure> {
    let text = read_input(&args.input)?;
    let circuit = parse_circuit(&text).map_err(|e| Failure::input(format!("{}: {e}", args.input.display())))?;
    let psi0 = load_initial(args, &circuit)?;

    let mut reports = Vec::new();
    let mut complex_final = None;
    if args.backend.includes_complex() {
        let psi = run_complex(&circuit, psi0.as_ref()).map_err(Failure::runtime)?;
        let (counts, total_norm) = sample(&psi, args, circuit.n_qubits)?;
        let state = args.emit_state.then(|| StateJson::Complex(ComplexVectorJson::from_state(&psi)));
        reports.push(RunReport { backend: "complex", counts, total_norm, state, deviation: None });
        complex_final = Some(psi);
    }
    if args.backend.includes_real() {
        let phi0 = psi0.as_ref().map(complex_to_real_state);
        let phi: PhaseState = run_real(&circuit, phi0.as_ref()).map_err(Failure::runtime)?;
        let (counts, total_norm) = sample(&phi, args, circuit.n_qubits)?;
        let state = args.emit_state.then(|| StateJson::Phase(PhaseVectorJson::from_state(&phi)));
        let deviation =
            complex_final.as_ref().map(|psi| max_diff_cvec(psi.amplitudes(), real_to_complex_state(&phi).amplitudes()));
        reports.push(RunReport { backend: "real", counts, total_norm, state, deviation });
    }
    if let Some(deviation) = reports.last().and_then(|r| r.deviation) {
        reports.iter_mut().for_each(|r| r.deviation = Some(deviation));
    }

    let text = match args.out {
        OutFormat::Json => {
            let mut text = String::new();
            for r in &reports {
                text.push_str(&json_line(r)?);
                text.push('\n');
            }
            text
        }
        OutFormat::Csv => {
            let all = reports.iter().flat_map(|r| [&r.total_norm].into_iter().chain(&r.deviation));
            crate::output::ensure_finite(all, "run report")?;
            csv_text(|w| {
                w.write_record(["backend", "outcome", "count", "total_norm", "deviation"])?;
                for r in &reports {
                    let deviation = r.deviation.map(|d| d.to_string()).unwrap_or_default();
                    for (outcome, count) in &r.counts {
                        w.write_record([
                            r.backend,
                            outcome,
                            &count.to_string(),
                            &r.total_norm.to_string(),
                            &deviation,
                        ])?;
                    }
                }
                Ok(())
            })?
        }
    };
    emit(&text)
}
