use rand::Rng;
use serde::Serialize;
use sympsim_core::circuit::{equivalence_check, random_circuit};
use sympsim_core::duality::{
    complex_to_real_state, decompose_hermitian, gamma, intersection_to_unitary, is_orthogonal, is_symplectic,
    ComplexState,
};
use sympsim_core::dynamics::{evolve_complex, evolve_real_exact};
use sympsim_core::matrix::{max_diff_complex, max_diff_real, max_diff_rvec};
use sympsim_core::random::{haar_unitary, random_hermitian, random_state_vector, seeded_rng, SimRng};
use sympsim_core::Result as CoreResult;

use crate::failure::Failure;
use crate::output::{csv_text, emit, json_line};
use crate::{OutFormat, VerifyArgs};

/// Complex dimensions swept by the matrix properties.
const DIMS: [usize; 8] = [1, 2, 3, 4, 5, 6, 7, 8];
/// Register sizes for the circuit property (complex dimension 2^n).
const CIRCUIT_QUBITS: [usize; 6] = [1, 2, 3, 4, 5, 6];
const CIRCUIT_DEPTH: usize = 50;
const CIRCUIT_POOL: &[&str] = &["H", "X", "Y", "Z", "S", "T", "RX", "RY", "RZ", "ROT", "NOTP", "CNOT"];

#[derive(Debug, Serialize)]
struct DimDeviation {
    /// Complex dimension N.
    n: usize,
    max_deviation: f64,
}

#[derive(Debug, Serialize)]
struct PropertyReport {
    name: &'static str,
    max_deviation: f64,
    pass: bool,
    per_n: Vec<DimDeviation>,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    seed: u64,
    tol: f64,
    trials: usize,
    pass: bool,
    properties: Vec<PropertyReport>,
}

type Trial = fn(usize, &mut SimRng) -> CoreResult<f64>;

#[derive(Clone, Copy)]
struct Property {
    name: &'static str,
    sizes: &'static [usize],
    /// Complex dimension of an instance of the given size.
    dim_of: fn(usize) -> usize,
    trial: Trial,
}

fn homomorphism(n: usize, rng: &mut SimRng) -> CoreResult<f64> {
    let v1 = haar_unitary(n, rng);
    let v2 = haar_unitary(n, rng);
    let lhs = gamma(&(&v1 * &v2), 1e-8)?;
    let rhs = gamma(&v1, 1e-8)?.compose(&gamma(&v2, 1e-8)?)?;
    Ok(max_diff_real(lhs.entries(), rhs.entries()))
}

fn symplecticity(n: usize, rng: &mut SimRng) -> CoreResult<f64> {
    let s = gamma(&haar_unitary(n, rng), 1e-8)?;
    Ok(is_symplectic(s.entries(), 0.0)?.deviation)
}

fn orthogonality(n: usize, rng: &mut SimRng) -> CoreResult<f64> {
    let s = gamma(&haar_unitary(n, rng), 1e-8)?;
    Ok(is_orthogonal(s.entries(), 0.0)?.deviation)
}

fn intersection_round_trip(n: usize, rng: &mut SimRng) -> CoreResult<f64> {
    let v = haar_unitary(n, rng);
    let back = intersection_to_unitary(gamma(&v, 1e-8)?.entries(), 1e-8)?;
    Ok(max_diff_complex(&back, &v))
}

fn evolution_duality(n: usize, rng: &mut SimRng) -> CoreResult<f64> {
    let h = decompose_hermitian(&random_hermitian(n, rng), 1e-12)?;
    let psi0 = ComplexState::new(random_state_vector(n, rng));
    let t = rng.random_range(-10.0..=10.0);
    let via_complex = complex_to_real_state(&evolve_complex(&h, &psi0, t)?);
    let via_real = evolve_real_exact(&h, &complex_to_real_state(&psi0), t)?;
    Ok(max_diff_rvec(&via_complex.stacked(), &via_real.stacked()))
}

fn backend_equivalence(n_qubits: usize, rng: &mut SimRng) -> CoreResult<f64> {
    let circuit = random_circuit(n_qubits, CIRCUIT_DEPTH, CIRCUIT_POOL, rng)?;
    let seed = rng.random();
    Ok(equivalence_check(&circuit, 2, seed)?.max_state_deviation)
}

fn sweep(prop: &Property, stream: u64, args: &VerifyArgs) -> Result<PropertyReport, Failure> {
    let Property { name, sizes, dim_of, trial } = *prop;
    let mut per_n = Vec::new();
    for &size in sizes {
        let mut rng = seeded_rng(args.seed.seed);
        rng.set_stream(stream * 1024 + size as u64);
        let mut worst = 0.0f64;
        for _ in 0..args.trials {
            let d = trial(size, &mut rng).map_err(|e| Failure::runtime(format!("{name}: {e}")))?;
            worst = if d.is_nan() { f64::NAN } else { worst.max(d) };
        }
        per_n.push(DimDeviation { n: dim_of(size), max_deviation: worst });
    }
    let max_deviation = per_n.iter().map(|d| d.max_deviation).fold(0.0, f64::max);
    let pass = per_n.iter().all(|d| d.max_deviation <= args.tol);
    Ok(PropertyReport { name, max_deviation, pass, per_n })
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(Failure::input(format!("--tol must be positive and finite, got {}", args.tol)));
    }
    if args.trials == 0 {
        return Err(Failure::input("--trials must be at least 1"));
    }
    let matrix = |name, trial| Property { name, sizes: &DIMS, dim_of: |n| n, trial };
    let battery = [
        matrix("homomorphism", homomorphism as Trial),
        matrix("symplecticity", symplecticity),
        matrix("orthogonality", orthogonality),
        matrix("intersection_round_trip", intersection_round_trip),
        matrix("evolution_duality", evolution_duality),
        Property {
            name: "backend_equivalence",
            sizes: &CIRCUIT_QUBITS,
            dim_of: |q| 1 << q,
            trial: backend_equivalence,
        },
    ];
    let properties =
        battery.iter().enumerate().map(|(i, prop)| sweep(prop, i as u64, args)).collect::<Result<Vec<_>, _>>()?;
    let pass = properties.iter().all(|p| p.pass);
    let report = VerifyReport { seed: args.seed.seed, tol: args.tol, trials: args.trials, pass, properties };

    for p in &report.properties {
        let per_n: Vec<String> = p.per_n.iter().map(|d| format!("{}:{:.1e}", d.n, d.max_deviation)).collect();
        eprintln!(
            "{:<24} {} max {:.2e}  [{}]",
            p.name,
            if p.pass { "ok  " } else { "FAIL" },
            p.max_deviation,
            per_n.join(" ")
        );
    }

    let text = match args.out {
        OutFormat::Json => json_line(&report)? + "\n",
        OutFormat::Csv => {
            let all = report.properties.iter().flat_map(|p| p.per_n.iter().map(|d| &d.max_deviation));
            crate::output::ensure_finite(all, "verify report")?;
            csv_text(|w| {
                w.write_record(["property", "n", "max_deviation", "tol", "pass"])?;
                for p in &report.properties {
                    for d in &p.per_n {
                        let pass = d.max_deviation <= args.tol;
                        w.write_record([
                            p.name.to_string(),
                            d.n.to_string(),
                            d.max_deviation.to_string(),
                            args.tol.to_string(),
                            pass.to_string(),
                        ])?;
                    }
                }
                Ok(())
            })?
        }
    };
    emit(&text)?;

    match report.properties.iter().find(|p| !p.pass) {
        None => Ok(()),
        Some(p) => Err(Failure::verify(format!(
            "property {} failed: max deviation {:.3e} exceeds tolerance {:.3e}",
            p.name, p.max_deviation, args.tol
        ))),
    }
}
