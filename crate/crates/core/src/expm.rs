//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants (degrees 3, 5, 7, 9 and 13), after Higham (2005).
//!
//! Generic over the scalar so the same routine serves the complex
//! propagator `exp(-iHt)` and the real phase-space generator `exp(tM)`.

use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Result};

const THETA_3: f64 = 1.495_585_217_958_292e-2;
const THETA_5: f64 = 2.539_398_330_063_23e-1;
const THETA_7: f64 = 9.504_178_996_162_932e-1;
const THETA_9: f64 = 2.097_847_961_257_068e0;
const THETA_13: f64 = 5.371_920_351_148_152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17_297_280.0, 8_648_640.0, 1_995_840.0, 277_200.0, 25_200.0, 1_512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

fn norm1<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    m.column_iter().map(|col| col.iter().map(|x| x.clone().modulus()).sum::<f64>()).fold(0.0, f64::max)
}

fn scale<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, s: f64) -> DMatrix<T> {
    m.map(|x| x * T::from_real(s))
}

/// `exp(m)` for a square matrix with finite entries.
pub fn matrix_exponential<T>(m: &DMatrix<T>) -> Result<DMatrix<T>>
where
    T: ComplexField<RealField = f64>,
{
    let n = crate::matrix::ensure_square(m.nrows(), m.ncols())?;
    if !m.iter().all(|x| x.clone().is_finite()) {
        return Err(Error::NonFinite("matrix exponential argument".into()));
    }
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }

    let norm = norm1(m);
    let ident = DMatrix::<T>::identity(n, n);

    let (u, v, squarings) = if norm <= THETA_9 {
        let a2 = m * m;
        if norm <= THETA_3 {
            let (u, v) = odd_even(m, &ident, &[a2], &B3);
            (u, v, 0)
        } else if norm <= THETA_5 {
            let a4 = &a2 * &a2;
            let (u, v) = odd_even(m, &ident, &[a2, a4], &B5);
            (u, v, 0)
        } else if norm <= THETA_7 {
            let a4 = &a2 * &a2;
            let a6 = &a4 * &a2;
            let (u, v) = odd_even(m, &ident, &[a2, a4, a6], &B7);
            (u, v, 0)
        } else {
            let a4 = &a2 * &a2;
            let a6 = &a4 * &a2;
            let a8 = &a6 * &a2;
            let (u, v) = odd_even(m, &ident, &[a2, a4, a6, a8], &B9);
            (u, v, 0)
        }
    } else {
        let s = (norm / THETA_13).log2().ceil().max(0.0) as i32;
        let a = scale(m, 2f64.powi(-s));
        let (u, v) = pade13(&a, &ident);
        (u, v, s)
    };

    // exp(A) ≈ (V - U)^{-1} (V + U)
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).ok_or_else(|| Error::NonFinite("singular Padé denominator".into()))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

/// Odd part `U` and even part `V` of a low-degree Padé numerator.
/// `powers` holds A², A⁴, … up to the degree implied by `b`.
fn odd_even<T>(a: &DMatrix<T>, ident: &DMatrix<T>, powers: &[DMatrix<T>], b: &[f64]) -> (DMatrix<T>, DMatrix<T>)
where
    T: ComplexField<RealField = f64>,
{
    let mut odd = scale(ident, b[1]);
    let mut even = scale(ident, b[0]);
    for (k, pw) in powers.iter().enumerate() {
        odd += scale(pw, b[2 * k + 3]);
        even += scale(pw, b[2 * k + 2]);
    }
    (a * odd, even)
}

fn pade13<T>(a: &DMatrix<T>, ident: &DMatrix<T>) -> (DMatrix<T>, DMatrix<T>)
where
    T: ComplexField<RealField = f64>,
{
    let b = &B13;
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let inner_u = scale(&a6, b[13]) + scale(&a4, b[11]) + scale(&a2, b[9]);
    let outer_u = &a6 * inner_u + scale(&a6, b[7]) + scale(&a4, b[5]) + scale(&a2, b[3]) + scale(ident, b[1]);
    let u = a * outer_u;

    let inner_v = scale(&a6, b[12]) + scale(&a4, b[10]) + scale(&a2, b[8]);
    let v = &a6 * inner_v + scale(&a6, b[6]) + scale(&a4, b[4]) + scale(&a2, b[2]) + scale(ident, b[0]);
    (u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{c, max_diff_complex, max_diff_real, CMatrix, RMatrix};
    use crate::random::{random_hermitian, seeded_rng};
    use num_complex::Complex64;

    /// Truncated Taylor series with scaling by 2^s so the terms decay fast.
    fn taylor_expm(m: &CMatrix, terms: usize) -> CMatrix {
        let n = m.nrows();
        let norm = m.iter().map(|z| z.norm()).sum::<f64>();
        let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
        let a = m.map(|z| z * 2f64.powi(-s));
        let mut term = CMatrix::identity(n, n);
        let mut sum = term.clone();
        for k in 1..terms {
            term = &term * &a / c(k as f64, 0.0);
            sum += &term;
        }
        for _ in 0..s {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn zero_maps_to_identity() {
        let z = CMatrix::zeros(3, 3);
        let e = matrix_exponential(&z).unwrap();
        assert_eq!(e, CMatrix::identity(3, 3));
    }

    #[test]
    fn pauli_x_half_turn_is_minus_identity() {
        // exp(-iπσx) = cos π I - i sin π σx = -I
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(0.0, -std::f64::consts::PI), c(0.0, -std::f64::consts::PI), c(0.0, 0.0)],
        );
        let e = matrix_exponential(&m).unwrap();
        let minus_i = -CMatrix::identity(2, 2);
        assert!(max_diff_complex(&e, &minus_i) < 1e-14);
    }

    #[test]
    fn random_hermitian_propagator_matches_taylor_and_is_unitary() {
        let mut rng = seeded_rng(11);
        for n in [2, 4, 6] {
            let h = random_hermitian(n, &mut rng);
            let m = h.map(|z| z * Complex64::new(0.0, -0.3));
            let e = matrix_exponential(&m).unwrap();
            let reference = taylor_expm(&m, 30);
            assert!(max_diff_complex(&e, &reference) < 1e-10);
            let gram = e.adjoint() * &e;
            assert!(max_diff_complex(&gram, &CMatrix::identity(n, n)) < 1e-12);
        }
    }

    #[test]
    fn every_pade_degree_is_accurate() {
        // Norms straddling each θ threshold exercise all five branches.
        let base = RMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        for scale in [1e-3, 0.1, 0.5, 1.5, 4.0, 40.0] {
            let m = &base * scale;
            let e = matrix_exponential(&m).unwrap();
            let (s, co) = scale.sin_cos();
            let exact = RMatrix::from_row_slice(2, 2, &[co, s, -s, co]);
            assert!(max_diff_real(&e, &exact) < 1e-13, "scale {scale}");
        }
    }

    #[test]
    fn skew_hermitian_large_norm_stays_unitary() {
        let mut rng = seeded_rng(5);
        let h = random_hermitian(8, &mut rng);
        let m = h.map(|z| z * Complex64::new(0.0, -10.0));
        let e = matrix_exponential(&m).unwrap();
        let gram = e.adjoint() * &e;
        assert!(max_diff_complex(&gram, &CMatrix::identity(8, 8)) < 1e-12);
    }

    #[test]
    fn rejects_non_finite_and_non_square() {
        let m = RMatrix::from_row_slice(1, 1, &[f64::NAN]);
        assert!(matches!(matrix_exponential(&m), Err(Error::NonFinite(_))));
        let m = RMatrix::zeros(2, 3);
        assert!(matches!(matrix_exponential(&m), Err(Error::NotSquare { .. })));
    }
}
