//! The bridge between the complex picture (ψ ∈ ℂᴺ, unitary V) and the real
//! phase-space picture ((q; p) ∈ ℝ²ᴺ, symplectic S).
//!
//! Layout convention: phase-space vectors are stacked `(q; p)` with `q` in
//! indices `0..N` and `p` in `N..2N`, and ψ = q + i p.
//!
//! Two real images of a complex matrix V = X + iY live here:
//!
//! * [`gamma`], the canonical embedding `V ↦ [[X, Y], [-Y, X]]` of U(N)
//!   into Sp(2N, ℝ) ∩ O(2N). It is a group homomorphism.
//! * [`phase_space_action`], `V ↦ [[X, -Y], [Y, X]]`, the matrix that maps
//!   the stacked coordinates of ψ to those of Vψ. It equals `gamma(conj V)`.
//!
//! The two agree whenever V is real (NOT, CNOT, rotations, Hadamard, ...).

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Membership, Result};
use crate::matrix::{
    c, cmatrix_from_parts, ensure_finite_complex, ensure_square, imag_part, max_abs_complex, max_abs_real,
    max_diff_complex, max_diff_real, real_part, CMatrix, CVector, RMatrix, RVector,
};

/// Complex Hermitian N×N matrix together with its split `H = K + iL`,
/// K real symmetric and L real skew-symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    entries: CMatrix,
    k_part: RMatrix,
    l_part: RMatrix,
}

impl HermitianOperator {
    /// Builds the operator from its real and imaginary parts. `k` is
    /// symmetrized and `l` antisymmetrized after the check.
    pub fn from_parts(k: &RMatrix, l: &RMatrix, tol: f64) -> Result<Self> {
        let n = ensure_square(k.nrows(), k.ncols())?;
        let nl = ensure_square(l.nrows(), l.ncols())?;
        if n != nl {
            return Err(Error::DimMismatch { expected: n, found: nl });
        }
        decompose_hermitian(&cmatrix_from_parts(k, l), tol)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn k_part(&self) -> &RMatrix {
        &self.k_part
    }

    pub fn l_part(&self) -> &RMatrix {
        &self.l_part
    }
}

/// ψ ∈ ℂᴺ. Normalization is not enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexState {
    amplitudes: CVector,
}

impl ComplexState {
    pub fn new(amplitudes: CVector) -> Self {
        Self { amplitudes }
    }

    pub fn from_slice(amplitudes: &[Complex64]) -> Self {
        Self::new(CVector::from_column_slice(amplitudes))
    }

    /// Computational basis vector |k⟩ in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[k] = c(1.0, 0.0);
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    /// Σ|ψ_a|², summed in index order.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// (q; p) ∈ ℝ²ᴺ, the real coordinates of ψ = q + ip.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    q: RVector,
    p: RVector,
}

impl PhaseState {
    pub fn new(q: RVector, p: RVector) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::DimMismatch { expected: q.len(), found: p.len() });
        }
        Ok(Self { q, p })
    }

    pub fn from_slices(q: &[f64], p: &[f64]) -> Result<Self> {
        Self::new(RVector::from_column_slice(q), RVector::from_column_slice(p))
    }

    /// Splits a stacked `(q; p)` vector of even length.
    pub fn from_stacked(x: &RVector) -> Result<Self> {
        if !x.len().is_multiple_of(2) {
            return Err(Error::OddDimension(x.len()));
        }
        let n = x.len() / 2;
        Ok(Self { q: x.rows(0, n).into_owned(), p: x.rows(n, n).into_owned() })
    }

    /// Real image of |k⟩: q = e_k, p = 0.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut q = RVector::zeros(dim);
        q[k] = 1.0;
        Self { q, p: RVector::zeros(dim) }
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &RVector {
        &self.q
    }

    pub fn p(&self) -> &RVector {
        &self.p
    }

    pub fn stacked(&self) -> RVector {
        let n = self.dim();
        RVector::from_fn(2 * n, |i, _| if i < n { self.q[i] } else { self.p[i - n] })
    }

    /// Σ(q_a² + p_a²), with the same per-index summation order as
    /// [`ComplexState::norm_sqr`].
    pub fn norm_sqr(&self) -> f64 {
        self.q.iter().zip(self.p.iter()).map(|(q, p)| q * q + p * p).sum()
    }

    /// Per-mode weights q_k² + p_k².
    pub fn mode_weights(&self) -> Vec<f64> {
        self.q.iter().zip(self.p.iter()).map(|(q, p)| q * q + p * p).collect()
    }

    /// Applies a real 2N×2N matrix to the stacked coordinates.
    pub fn apply(&self, m: &RMatrix) -> Result<Self> {
        if m.nrows() != 2 * self.dim() || m.ncols() != 2 * self.dim() {
            return Err(Error::DimMismatch { expected: 2 * self.dim(), found: m.nrows() });
        }
        Self::from_stacked(&(m * self.stacked()))
    }
}

/// A real 2N×2N matrix certified to satisfy Sᵀ J S = J at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    entries: RMatrix,
}

/// The four N×N quadrants `[[A, B], [C, D]]` of a 2N×2N matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Blocks {
    pub a: RMatrix,
    pub b: RMatrix,
    pub c: RMatrix,
    pub d: RMatrix,
}

impl SymplecticMatrix {
    /// Certifies `entries` against the symplectic condition.
    pub fn new(entries: RMatrix, tol: f64) -> Result<Self> {
        let check = is_symplectic(&entries, tol)?;
        if !check.holds {
            return Err(Error::NotSymplectic { deviation: check.deviation });
        }
        Ok(Self { entries })
    }

    /// For matrices symplectic by construction (γ-images, embedded gates).
    pub(crate) fn new_unchecked(entries: RMatrix) -> Self {
        debug_assert!(entries.nrows() == entries.ncols() && entries.nrows().is_multiple_of(2));
        Self { entries }
    }

    pub fn identity(half_dim: usize) -> Self {
        Self { entries: RMatrix::identity(2 * half_dim, 2 * half_dim) }
    }

    pub fn half_dim(&self) -> usize {
        self.entries.nrows() / 2
    }

    pub fn entries(&self) -> &RMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> RMatrix {
        self.entries
    }

    pub fn blocks(&self) -> Blocks {
        split_blocks(&self.entries)
    }

    /// Product of two symplectic matrices; the group is closed so no
    /// re-certification is needed.
    pub fn compose(&self, rhs: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        if self.half_dim() != rhs.half_dim() {
            return Err(Error::DimMismatch { expected: self.half_dim(), found: rhs.half_dim() });
        }
        Ok(Self::new_unchecked(&self.entries * &rhs.entries))
    }
}

pub(crate) fn split_blocks(m: &RMatrix) -> Blocks {
    let n = m.nrows() / 2;
    Blocks {
        a: m.view((0, 0), (n, n)).into_owned(),
        b: m.view((0, n), (n, n)).into_owned(),
        c: m.view((n, 0), (n, n)).into_owned(),
        d: m.view((n, n), (n, n)).into_owned(),
    }
}

pub(crate) fn join_blocks(a: &RMatrix, b: &RMatrix, c: &RMatrix, d: &RMatrix) -> RMatrix {
    let n = a.nrows();
    let mut m = RMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((0, n), (n, n)).copy_from(b);
    m.view_mut((n, 0), (n, n)).copy_from(c);
    m.view_mut((n, n), (n, n)).copy_from(d);
    m
}

/// The standard symplectic form J = [[0, I], [-I, 0]] on ℝ²ᴺ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    pub half_dim: usize,
}

impl SymplecticForm {
    pub fn new(half_dim: usize) -> Self {
        Self { half_dim }
    }

    pub fn matrix(&self) -> RMatrix {
        let n = self.half_dim;
        RMatrix::from_fn(2 * n, 2 * n, |i, j| {
            if i < n && j == i + n {
                1.0
            } else if i >= n && j + n == i {
                -1.0
            } else {
                0.0
            }
        })
    }

    /// J·x without forming J: (p; -q).
    pub fn apply(&self, x: &RVector) -> RVector {
        let n = self.half_dim;
        RVector::from_fn(2 * n, |i, _| if i < n { x[i + n] } else { -x[i - n] })
    }
}

/// Outcome of a membership predicate: whether it holds within tolerance and
/// the max-norm residual that decided it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipCheck {
    pub holds: bool,
    pub deviation: f64,
}

impl MembershipCheck {
    fn from_deviation(deviation: f64, tol: f64) -> Self {
        Self { holds: deviation <= tol, deviation }
    }
}

/// Splits a Hermitian matrix into K = Re H (symmetrized) and L = Im H
/// (antisymmetrized).
pub fn decompose_hermitian(h: &CMatrix, tol: f64) -> Result<HermitianOperator> {
    ensure_square(h.nrows(), h.ncols())?;
    ensure_finite_complex(h, "Hamiltonian")?;
    let deviation = max_diff_complex(h, &h.adjoint());
    if deviation > tol {
        return Err(Error::NotHermitian { deviation });
    }
    let k = real_part(h);
    let l = imag_part(h);
    let k_part = (&k + k.transpose()) * 0.5;
    let l_part = (&l - l.transpose()) * 0.5;
    let entries = cmatrix_from_parts(&k_part, &l_part);
    Ok(HermitianOperator { entries, k_part, l_part })
}

/// q = Re ψ, p = Im ψ.
pub fn complex_to_real_state(psi: &ComplexState) -> PhaseState {
    PhaseState { q: psi.amplitudes.map(|z| z.re), p: psi.amplitudes.map(|z| z.im) }
}

/// ψ = q + ip.
pub fn real_to_complex_state(phi: &PhaseState) -> ComplexState {
    ComplexState { amplitudes: DVector::from_fn(phi.dim(), |i, _| c(phi.q[i], phi.p[i])) }
}

/// `[[X, Y], [-Y, X]]` for arbitrary complex V = X + iY, no unitarity check.
pub fn gamma_unchecked(v: &CMatrix) -> RMatrix {
    let x = real_part(v);
    let y = imag_part(v);
    join_blocks(&x, &y, &-&y, &x)
}

/// The canonical embedding γ: U(N) → Sp(2N, ℝ), γ(X + iY) = [[X, Y], [-Y, X]].
pub fn gamma(v: &CMatrix, tol: f64) -> Result<SymplecticMatrix> {
    let check = is_unitary(v, tol)?;
    if !check.holds {
        return Err(Error::NotUnitary { deviation: check.deviation });
    }
    Ok(SymplecticMatrix::new_unchecked(gamma_unchecked(v)))
}

/// The real matrix that carries the coordinates of ψ to those of Vψ:
/// `[[X, -Y], [Y, X]]`. For unitary V this is `gamma(conj V)`, so it is
/// again in Sp(2N) ∩ O(2N).
pub fn phase_space_action(v: &CMatrix) -> RMatrix {
    let x = real_part(v);
    let y = imag_part(v);
    join_blocks(&x, &-&y, &y, &x)
}

/// Max structural deviation of S from the pattern `[[X, Y], [-Y, X]]`.
pub fn gamma_structure_deviation(s: &RMatrix) -> Result<f64> {
    ensure_square(s.nrows(), s.ncols())?;
    if !s.nrows().is_multiple_of(2) {
        return Err(Error::OddDimension(s.nrows()));
    }
    let bl = split_blocks(s);
    Ok(max_diff_real(&bl.a, &bl.d).max(max_abs_real(&(&bl.b + &bl.c))))
}

/// Recovers V = X + iY from a γ-image. The diagonal and off-diagonal block
/// pairs are averaged, which is exact on exact images.
pub fn gamma_inverse(s: &SymplecticMatrix, tol: f64) -> Result<CMatrix> {
    gamma_inverse_raw(s.entries(), tol)
}

fn gamma_inverse_raw(s: &RMatrix, tol: f64) -> Result<CMatrix> {
    let deviation = gamma_structure_deviation(s)?;
    if deviation > tol {
        return Err(Error::NotGammaImage { deviation });
    }
    let bl = split_blocks(s);
    let x = (&bl.a + &bl.d) * 0.5;
    let y = (&bl.b - &bl.c) * 0.5;
    Ok(cmatrix_from_parts(&x, &y))
}

/// Sᵀ J S = J, checked in max-norm.
pub fn is_symplectic(s: &RMatrix, tol: f64) -> Result<MembershipCheck> {
    let dim = ensure_square(s.nrows(), s.ncols())?;
    if dim % 2 != 0 {
        return Err(Error::OddDimension(dim));
    }
    let j = SymplecticForm::new(dim / 2).matrix();
    let residual = s.transpose() * &j * s - &j;
    Ok(MembershipCheck::from_deviation(max_abs_real(&residual), tol))
}

/// Sᵀ S = I, checked in max-norm.
pub fn is_orthogonal(s: &RMatrix, tol: f64) -> Result<MembershipCheck> {
    let n = ensure_square(s.nrows(), s.ncols())?;
    let residual = s.transpose() * s - RMatrix::identity(n, n);
    Ok(MembershipCheck::from_deviation(max_abs_real(&residual), tol))
}

/// V†V = I, checked in max-norm.
pub fn is_unitary(v: &CMatrix, tol: f64) -> Result<MembershipCheck> {
    let n = ensure_square(v.nrows(), v.ncols())?;
    let residual = v.adjoint() * v - CMatrix::identity(n, n);
    Ok(MembershipCheck::from_deviation(max_abs_complex(&residual), tol))
}

/// Residual of the quadrant form of the symplectic condition:
/// AᵀC and BᵀD symmetric, AᵀD − CᵀB = I.
pub fn block_condition_deviation(s: &RMatrix) -> Result<f64> {
    let dim = ensure_square(s.nrows(), s.ncols())?;
    if dim % 2 != 0 {
        return Err(Error::OddDimension(dim));
    }
    let n = dim / 2;
    let bl = split_blocks(s);
    let atc = bl.a.transpose() * &bl.c;
    let btd = bl.b.transpose() * &bl.d;
    let unit = bl.a.transpose() * &bl.d - bl.c.transpose() * &bl.b - RMatrix::identity(n, n);
    Ok(max_diff_real(&atc, &atc.transpose()).max(max_diff_real(&btd, &btd.transpose())).max(max_abs_real(&unit)))
}

/// Extracts the unitary V with γ(V) = S for S ∈ Sp(2N) ∩ O(2N).
pub fn intersection_to_unitary(s: &RMatrix, tol: f64) -> Result<CMatrix> {
    let symp = is_symplectic(s, tol)?;
    if !symp.holds {
        return Err(Error::NotInIntersection { failed: Membership::Symplectic, deviation: symp.deviation });
    }
    let orth = is_orthogonal(s, tol)?;
    if !orth.holds {
        return Err(Error::NotInIntersection { failed: Membership::Orthogonal, deviation: orth.deviation });
    }
    // Sᵀ J S = J together with Sᵀ = S⁻¹ forces J S = S J.
    let j = SymplecticForm::new(s.nrows() / 2).matrix();
    let commutator = max_diff_real(&(s * &j), &(&j * s));
    if commutator > tol {
        return Err(Error::NotInIntersection { failed: Membership::Commutes, deviation: commutator });
    }
    gamma_inverse_raw(s, tol)
}
