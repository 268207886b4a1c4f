use std::hint::black_box;
use std::time::Instant;

use serde::Serialize;
use sympsim_core::circuit::{random_circuit, run_complex, run_real, Circuit, MAX_QUBITS};
use sympsim_core::random::seeded_rng;

use crate::failure::Failure;
use crate::output::{csv_text, emit, json_line};
use crate::{BenchArgs, OutFormat};

pub const MIN_WARMUP: usize = 5;
pub const MIN_ITERS: usize = 20;
const POOL: &[&str] = &["H", "X", "RZ", "CNOT", "NOTP"];

#[derive(Debug, Serialize)]
struct Row {
    n: usize,
    depth: usize,
    backend: &'static str,
    median_ns: u64,
    p95_ns: u64,
}

/// Circuit for one grid cell. It depends only on (seed, n, depth), so both
/// backends time the same workload.
fn workload(seed: u64, n: usize, depth: usize) -> Result<Circuit, Failure> {
    let mut rng = seeded_rng(seed);
    rng.set_stream(((n as u64) << 32) | depth as u64);
    random_circuit(n, depth, POOL, &mut rng).map_err(Failure::runtime)
}

fn time_ns(warmup: usize, iters: usize, mut f: impl FnMut() -> Result<(), Failure>) -> Result<Vec<u64>, Failure> {
    for _ in 0..warmup {
        f()?;
    }
    let mut samples = Vec::with_capacity(iters);
    for _ in 0..iters {
        let start = Instant::now();
        f()?;
        samples.push(u64::try_from(start.elapsed().as_nanos()).unwrap_or(u64::MAX));
    }
    samples.sort_unstable();
    Ok(samples)
}

fn median(sorted: &[u64]) -> u64 {
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        sorted[mid - 1] / 2 + sorted[mid] / 2 + (sorted[mid - 1] % 2 + sorted[mid] % 2) / 2
    }
}

/// Nearest-rank 95th percentile.
fn p95(sorted: &[u64]) -> u64 {
    let rank = (sorted.len() * 95).div_ceil(100).max(1);
    sorted[rank - 1]
}

pub fn cmd_bench(args: &BenchArgs) -> Result<(), Failure> {
    if args.warmup < MIN_WARMUP || args.iters < MIN_ITERS {
        return Err(Failure::input(format!("need at least {MIN_WARMUP} warmup and {MIN_ITERS} measured iterations")));
    }
    if let Some(&n) = args.qubits.iter().find(|&&n| n == 0 || n > MAX_QUBITS) {
        return Err(Failure::input(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
    }
    let seed = args.seed.seed;
    let mut rows = Vec::new();
    for &n in &args.qubits {
        for &depth in &args.depths {
            let circuit = workload(seed, n, depth)?;
            let mut cells: Vec<(&'static str, Vec<u64>)> = Vec::new();
            if args.backend.includes_complex() {
                let samples = time_ns(args.warmup, args.iters, || {
                    black_box(run_complex(black_box(&circuit), None).map_err(Failure::runtime)?);
                    Ok(())
                })?;
                cells.push(("complex", samples));
            }
            if args.backend.includes_real() {
                let samples = time_ns(args.warmup, args.iters, || {
                    black_box(run_real(black_box(&circuit), None).map_err(Failure::runtime)?);
                    Ok(())
                })?;
                cells.push(("real", samples));
            }
            for (backend, samples) in cells {
                rows.push(Row { n, depth, backend, median_ns: median(&samples), p95_ns: p95(&samples) });
            }
        }
    }
    let text = match args.out {
        OutFormat::Csv => csv_text(|w| {
            w.write_record(["n", "depth", "backend", "median_ns", "p95_ns"])?;
            for r in &rows {
                w.write_record([
                    r.n.to_string(),
                    r.depth.to_string(),
                    r.backend.to_string(),
                    r.median_ns.to_string(),
                    r.p95_ns.to_string(),
                ])?;
            }
            Ok(())
        })?,
        OutFormat::Json => json_line(&rows)? + "\n",
    };
    emit(&text)
}
