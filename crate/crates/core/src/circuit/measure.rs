//! Computational-basis measurement with the normalized Born rule:
//! outcome k has probability w_k / Σ_j w_j, where w_k = |ψ_k|² = q_k² + p_k².
//!
//! Shot `i` consumes the 64-bit word pair at position 2i of the ChaCha
//! keystream for the master seed. Shots are therefore independent of each
//! other and of how they are split across threads.

use std::collections::BTreeMap;

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::duality::{ComplexState, PhaseState};
use crate::error::{Error, Result};

const SHOTS_PER_CHUNK: u64 = 4096;

/// States that define per-outcome measurement weights.
pub trait Measurable {
    fn outcome_weights(&self) -> Vec<f64>;
}

impl Measurable for ComplexState {
    fn outcome_weights(&self) -> Vec<f64> {
        self.amplitudes().iter().map(|z| z.norm_sqr()).collect()
    }
}

impl Measurable for PhaseState {
    fn outcome_weights(&self) -> Vec<f64> {
        self.mode_weights()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementResult {
    /// Basis index → count, only outcomes that occurred.
    pub counts: BTreeMap<usize, u64>,
    /// Σ_j w_j before normalization; differs from 1 only after
    /// norm-changing (symplectic-only) gates.
    pub total_norm: f64,
    pub shots: u64,
    pub seed: u64,
}

struct Sampler {
    cdf: Vec<f64>,
    last_possible: usize,
}

impl Sampler {
    fn new(weights: &[f64]) -> Result<(Self, f64)> {
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite("state amplitudes".into()));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::ZeroNormState);
        }
        let mut acc = 0.0;
        let cdf = weights
            .iter()
            .map(|w| {
                acc += w;
                acc / total
            })
            .collect();
        let last_possible = weights.iter().rposition(|&w| w > 0.0).expect("total > 0");
        Ok((Self { cdf, last_possible }, total))
    }

    fn sample(&self, u: f64) -> usize {
        self.cdf.partition_point(|&c| c <= u).min(self.last_possible)
    }
}

/// Uniform in [0, 1) from the top 53 bits.
fn unit(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn count_range(sampler: &Sampler, seed: u64, from: u64, to: u64, dim: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(2 * from as u128);
    let mut counts = vec![0u64; dim];
    for _ in from..to {
        counts[sampler.sample(unit(rng.next_u64()))] += 1;
    }
    counts
}

fn collect(counts: Vec<u64>) -> BTreeMap<usize, u64> {
    counts.into_iter().enumerate().filter(|&(_, n)| n > 0).collect()
}

fn prepare<S: Measurable + ?Sized>(state: &S, shots: u64) -> Result<(Sampler, f64, usize)> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let weights = state.outcome_weights();
    let (sampler, total) = Sampler::new(&weights)?;
    Ok((sampler, total, weights.len()))
}

/// Samples `shots` outcomes sequentially.
pub fn measure<S: Measurable + ?Sized>(state: &S, shots: u64, seed: u64) -> Result<MeasurementResult> {
    let (sampler, total_norm, dim) = prepare(state, shots)?;
    let counts = count_range(&sampler, seed, 0, shots, dim);
    Ok(MeasurementResult { counts: collect(counts), total_norm, shots, seed })
}

/// Same distribution and bit-identical counts as [`measure`], with shots
/// sharded across the rayon pool.
pub fn measure_parallel<S: Measurable + ?Sized>(state: &S, shots: u64, seed: u64) -> Result<MeasurementResult> {
    let (sampler, total_norm, dim) = prepare(state, shots)?;
    let chunks = shots.div_ceil(SHOTS_PER_CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let from = k * SHOTS_PER_CHUNK;
            count_range(&sampler, seed, from, (from + SHOTS_PER_CHUNK).min(shots), dim)
        })
        .reduce(
            || vec![0u64; dim],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(MeasurementResult { counts: collect(counts), total_norm, shots, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c;
    use std::f64::consts::{E, FRAC_1_SQRT_2};

    #[test]
    fn basis_state_is_deterministic() {
        let psi = ComplexState::basis(2, 0);
        let r = measure(&psi, 1000, 7).unwrap();
        assert_eq!(r.counts, BTreeMap::from([(0, 1000)]));
        assert_eq!(r.total_norm, 1.0);
        let last = ComplexState::basis(4, 3);
        assert_eq!(measure(&last, 500, 1).unwrap().counts, BTreeMap::from([(3, 500)]));
    }

    #[test]
    fn zero_weight_outcomes_never_occur() {
        let psi = ComplexState::from_slice(&[c(0., 0.), c(FRAC_1_SQRT_2, 0.), c(0., FRAC_1_SQRT_2), c(0., 0.)]);
        let r = measure(&psi, 20_000, 3).unwrap();
        assert!(r.counts.keys().all(|k| *k == 1 || *k == 2));
    }

    #[test]
    fn squeezed_state_weights() {
        // P(0) = e² / (e² + 1)
        let phi = PhaseState::from_slices(&[E, 1.0], &[0.0, 0.0]).unwrap();
        let shots = 100_000u64;
        let r = measure(&phi, shots, 11).unwrap();
        let p0 = E * E / (E * E + 1.0);
        assert!((p0 - 0.8808).abs() < 1e-4);
        let sigma = (shots as f64 * p0 * (1.0 - p0)).sqrt();
        let n0 = *r.counts.get(&0).unwrap_or(&0) as f64;
        assert!((n0 - shots as f64 * p0).abs() <= 3.0 * sigma);
        assert!((r.total_norm - (E * E + 1.0)).abs() < 1e-14);
    }

    #[test]
    fn sequential_and_parallel_are_bit_identical() {
        let phi = PhaseState::from_slices(&[0.3, -0.5, 0.1, 0.7], &[0.2, 0.0, -0.4, 0.1]).unwrap();
        for shots in [1, 4095, 4096, 4097, 50_001] {
            let a = measure(&phi, shots, 99).unwrap();
            let b = measure_parallel(&phi, shots, 99).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.counts.values().sum::<u64>(), shots);
        }
        let other = measure(&phi, 10_000, 100).unwrap();
        assert_ne!(other.counts, measure(&phi, 10_000, 99).unwrap().counts);
    }

    #[test]
    fn error_paths() {
        let zero = ComplexState::from_slice(&[c(0., 0.), c(0., 0.)]);
        assert!(matches!(measure(&zero, 10, 0), Err(Error::ZeroNormState)));
        assert!(matches!(measure(&ComplexState::basis(2, 0), 0, 0), Err(Error::ZeroShots)));
        let nan = PhaseState::from_slices(&[f64::NAN], &[0.0]).unwrap();
        assert!(matches!(measure(&nan, 1, 0), Err(Error::NonFinite(_))));
    }
}
