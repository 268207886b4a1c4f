//! Gate library and full-system embeddings.
//!
//! Unitary gates act on qubits of ℂ^(2^n) with qubit 0 the most significant
//! bit of the basis index. Symplectic-only gates act on the coordinate
//! pairs (q_k, p_k) of chosen modes k of ℝ²ᴺ and have no complex
//! counterpart.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::duality::{gamma, SymplecticMatrix};
use crate::error::{Error, Result};
use crate::matrix::{c, CMatrix, RMatrix, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Unitary,
    SymplecticOnly,
}

impl GateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GateKind::Unitary => "unitary",
            GateKind::SymplecticOnly => "symplectic-only",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateMatrix {
    /// 2^arity × 2^arity complex unitary.
    Unitary(CMatrix),
    /// 2·arity × 2·arity real symplectic, stacked (q; p) over the targets.
    Symplectic(RMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub name: String,
    pub params: Vec<f64>,
    pub arity: usize,
    pub matrix: GateMatrix,
}

impl Gate {
    fn unitary(name: &str, params: &[f64], arity: usize, m: CMatrix) -> Self {
        Self { name: name.into(), params: params.to_vec(), arity, matrix: GateMatrix::Unitary(m) }
    }

    fn symplectic(name: &str, params: &[f64], arity: usize, m: RMatrix) -> Self {
        Self { name: name.into(), params: params.to_vec(), arity, matrix: GateMatrix::Symplectic(m) }
    }

    pub fn kind(&self) -> GateKind {
        match self.matrix {
            GateMatrix::Unitary(_) => GateKind::Unitary,
            GateMatrix::Symplectic(_) => GateKind::SymplecticOnly,
        }
    }

    pub fn unitary_matrix(&self) -> Option<&CMatrix> {
        match &self.matrix {
            GateMatrix::Unitary(m) => Some(m),
            GateMatrix::Symplectic(_) => None,
        }
    }

    pub fn symplectic_matrix(&self) -> Option<&RMatrix> {
        match &self.matrix {
            GateMatrix::Symplectic(m) => Some(m),
            GateMatrix::Unitary(_) => None,
        }
    }
}

/// `NAME` or `NAME(p1,p2,...)`, with parameters in shortest round-trip form.
impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.params.is_empty() {
            let params: Vec<String> = self.params.iter().map(|p| format!("{p:?}")).collect();
            write!(f, "({})", params.join(","))?;
        }
        Ok(())
    }
}

fn finite(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(format!("{name} parameter")))
    }
}

fn cm2(entries: [Complex64; 4]) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &entries)
}

fn real_cm(n: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_row_slice(n, n, &entries.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
}

/// (sin θ, cos θ) with exact values at integer multiples of π/2: θ is
/// reduced by the nearest quarter turn and the quadrant applied by sign
/// swaps.
fn quarter_exact_sin_cos(theta: f64) -> (f64, f64) {
    let quarters = (theta / FRAC_PI_2).round();
    let (s, co) = (theta - quarters * FRAC_PI_2).sin_cos();
    match (quarters as i64).rem_euclid(4) {
        0 => (s, co),
        1 => (co, -s),
        2 => (-s, -co),
        _ => (-co, s),
    }
}

/// The NOT gate in the real form [[0, 1], [-1, 0]].
pub fn gate_notp() -> Gate {
    Gate::unitary("NOTP", &[], 1, real_cm(2, &[0., 1., -1., 0.]))
}

/// R(θ) = [[cos θ, sin θ], [-sin θ, cos θ]].
pub fn gate_rotation(theta: f64) -> Result<Gate> {
    let theta = finite("ROT", theta)?;
    let (s, co) = quarter_exact_sin_cos(theta);
    Ok(Gate::unitary("ROT", &[theta], 1, real_cm(2, &[co, s, -s, co])))
}

pub fn gate_x() -> Gate {
    Gate::unitary("X", &[], 1, real_cm(2, &[0., 1., 1., 0.]))
}

pub fn gate_y() -> Gate {
    Gate::unitary("Y", &[], 1, cm2([c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]))
}

pub fn gate_z() -> Gate {
    Gate::unitary("Z", &[], 1, real_cm(2, &[1., 0., 0., -1.]))
}

pub fn gate_h() -> Gate {
    let h = FRAC_1_SQRT_2;
    Gate::unitary("H", &[], 1, real_cm(2, &[h, h, h, -h]))
}

pub fn gate_s() -> Gate {
    Gate::unitary("S", &[], 1, cm2([c(1., 0.), c(0., 0.), c(0., 0.), c(0., 1.)]))
}

pub fn gate_t() -> Gate {
    let phase = Complex64::from_polar(1.0, FRAC_PI_4);
    Gate::unitary("T", &[], 1, cm2([c(1., 0.), c(0., 0.), c(0., 0.), phase]))
}

/// exp(-iθX/2).
pub fn gate_rx(theta: f64) -> Result<Gate> {
    let (s, co) = (finite("RX", theta)? / 2.0).sin_cos();
    Ok(Gate::unitary("RX", &[theta], 1, cm2([c(co, 0.), c(0., -s), c(0., -s), c(co, 0.)])))
}

/// exp(-iθY/2).
pub fn gate_ry(theta: f64) -> Result<Gate> {
    let (s, co) = (finite("RY", theta)? / 2.0).sin_cos();
    Ok(Gate::unitary("RY", &[theta], 1, real_cm(2, &[co, -s, s, co])))
}

/// exp(-iθZ/2).
pub fn gate_rz(theta: f64) -> Result<Gate> {
    let half = finite("RZ", theta)? / 2.0;
    let m = cm2([Complex64::from_polar(1.0, -half), c(0., 0.), c(0., 0.), Complex64::from_polar(1.0, half)]);
    Ok(Gate::unitary("RZ", &[theta], 1, m))
}

/// Controlled NOT, control = first target: |10⟩ ↔ |11⟩.
pub fn gate_cnot() -> Gate {
    #[rustfmt::skip]
    let m = real_cm(4, &[
        1., 0., 0., 0.,
        0., 1., 0., 0.,
        0., 0., 0., 1.,
        0., 0., 1., 0.,
    ]);
    Gate::unitary("CNOT", &[], 2, m)
}

/// γ(CNOT) = [[CNOT, 0], [0, CNOT]], since CNOT is real.
pub fn gamma_cnot() -> SymplecticMatrix {
    let cnot = gate_cnot();
    gamma(cnot.unitary_matrix().expect("CNOT is unitary"), DEFAULT_TOL).expect("CNOT is a permutation matrix")
}

/// diag(e^r, e^-r) on one mode's (q, p).
pub fn gate_squeeze(r: f64) -> Result<Gate> {
    let r = finite("SQUEEZE", r)?;
    Ok(Gate::symplectic("SQUEEZE", &[r], 1, RMatrix::from_row_slice(2, 2, &[r.exp(), 0., 0., (-r).exp()])))
}

/// [[1, s], [0, 1]] on one mode's (q, p): q ← q + s p.
pub fn gate_shear(s: f64) -> Result<Gate> {
    let s = finite("SHEAR", s)?;
    Ok(Gate::symplectic("SHEAR", &[s], 1, RMatrix::from_row_slice(2, 2, &[1., s, 0., 1.])))
}

/// Registry entry: how to build a gate from its parameter list.
#[derive(Clone, Copy)]
pub struct GateSpec {
    pub name: &'static str,
    pub kind: GateKind,
    pub n_params: usize,
    pub arity: usize,
    build: fn(&[f64]) -> Result<Gate>,
}

impl fmt::Debug for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GateSpec")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("n_params", &self.n_params)
            .field("arity", &self.arity)
            .finish()
    }
}

#[derive(Debug)]
pub struct GateCatalog {
    registry: BTreeMap<&'static str, GateSpec>,
}

impl GateCatalog {
    fn standard() -> Self {
        use GateKind::*;
        let specs: [GateSpec; 14] = [
            GateSpec { name: "NOTP", kind: Unitary, n_params: 0, arity: 1, build: |_| Ok(gate_notp()) },
            GateSpec { name: "X", kind: Unitary, n_params: 0, arity: 1, build: |_| Ok(gate_x()) },
            GateSpec { name: "Y", kind: Unitary, n_params: 0, arity: 1, build: |_| Ok(gate_y()) },
            GateSpec { name: "Z", kind: Unitary, n_params: 0, arity: 1, build: |_| Ok(gate_z()) },
            GateSpec { name: "H", kind: Unitary, n_params: 0, arity: 1, build: |_| Ok(gate_h()) },
            GateSpec { name: "S", kind: Unitary, n_params: 0, arity: 1, build: |_| Ok(gate_s()) },
            GateSpec { name: "T", kind: Unitary, n_params: 0, arity: 1, build: |_| Ok(gate_t()) },
            GateSpec { name: "RX", kind: Unitary, n_params: 1, arity: 1, build: |p| gate_rx(p[0]) },
            GateSpec { name: "RY", kind: Unitary, n_params: 1, arity: 1, build: |p| gate_ry(p[0]) },
            GateSpec { name: "RZ", kind: Unitary, n_params: 1, arity: 1, build: |p| gate_rz(p[0]) },
            GateSpec { name: "CNOT", kind: Unitary, n_params: 0, arity: 2, build: |_| Ok(gate_cnot()) },
            GateSpec { name: "ROT", kind: Unitary, n_params: 1, arity: 1, build: |p| gate_rotation(p[0]) },
            GateSpec { name: "SQUEEZE", kind: SymplecticOnly, n_params: 1, arity: 1, build: |p| gate_squeeze(p[0]) },
            GateSpec { name: "SHEAR", kind: SymplecticOnly, n_params: 1, arity: 1, build: |p| gate_shear(p[0]) },
        ];
        Self { registry: specs.into_iter().map(|s| (s.name, s)).collect() }
    }

    /// The process-wide catalog, built on first use.
    pub fn global() -> &'static GateCatalog {
        static CATALOG: OnceLock<GateCatalog> = OnceLock::new();
        CATALOG.get_or_init(GateCatalog::standard)
    }

    pub fn spec(&self, name: &str) -> Option<&GateSpec> {
        self.registry.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.registry.keys().copied()
    }

    pub fn build(&self, name: &str, params: &[f64]) -> Result<Gate> {
        let spec = self.spec(name).ok_or_else(|| Error::UnknownGate(name.to_string()))?;
        if params.len() != spec.n_params {
            return Err(Error::ParamCount { gate: name.to_string(), expected: spec.n_params, found: params.len() });
        }
        (spec.build)(params)
    }
}

fn validate_targets(
    targets: &[usize],
    limit: usize,
    out_of_range: impl Fn(usize) -> Error,
    duplicate: impl Fn(usize) -> Error,
) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= limit {
            return Err(out_of_range(t));
        }
        if targets[..i].contains(&t) {
            return Err(duplicate(t));
        }
    }
    Ok(())
}

/// Full 2^n × 2^n matrix acting as `g` on `targets` (first target = most
/// significant local bit) and as identity elsewhere.
pub fn embed_unitary(g: &Gate, targets: &[usize], n_qubits: usize) -> Result<CMatrix> {
    let local = g.unitary_matrix().ok_or_else(|| Error::KindMismatch {
        gate: g.name.clone(),
        expected: GateKind::Unitary.as_str(),
        found: g.kind().as_str(),
    })?;
    if targets.len() != g.arity {
        return Err(Error::ArityMismatch { gate: g.name.clone(), expected: g.arity, found: targets.len() });
    }
    validate_targets(targets, n_qubits, |index| Error::TargetOutOfRange { index, n_qubits }, Error::DuplicateTarget)?;

    let dim = 1usize << n_qubits;
    let k = targets.len();
    // bit position of each target inside the global index
    let shifts: Vec<usize> = targets.iter().map(|&t| n_qubits - 1 - t).collect();
    let target_mask: usize = shifts.iter().map(|s| 1usize << s).sum();

    let local_index = |global: usize| -> usize { shifts.iter().fold(0, |acc, &s| (acc << 1) | ((global >> s) & 1)) };
    let scatter =
        |local: usize| -> usize { shifts.iter().enumerate().map(|(i, &s)| ((local >> (k - 1 - i)) & 1) << s).sum() };

    let mut full = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let rest = col & !target_mask;
        let lc = local_index(col);
        for lr in 0..(1usize << k) {
            let amp = local[(lr, lc)];
            if amp != c(0.0, 0.0) {
                full[(rest | scatter(lr), col)] = amp;
            }
        }
    }
    Ok(full)
}

/// Full 2N × 2N symplectic matrix acting as `g` on the (q, p) pairs of
/// `modes` and as identity on every other coordinate.
pub fn embed_symplectic(g: &Gate, modes: &[usize], n_modes: usize) -> Result<SymplecticMatrix> {
    let local = g.symplectic_matrix().ok_or_else(|| Error::KindMismatch {
        gate: g.name.clone(),
        expected: GateKind::SymplecticOnly.as_str(),
        found: g.kind().as_str(),
    })?;
    if modes.len() != g.arity {
        return Err(Error::ArityMismatch { gate: g.name.clone(), expected: g.arity, found: modes.len() });
    }
    validate_targets(modes, n_modes, |index| Error::ModeOutOfRange { index, n_modes }, Error::DuplicateMode)?;

    let m = modes.len();
    let global = |a: usize| if a < m { modes[a] } else { n_modes + modes[a - m] };
    let mut full = RMatrix::identity(2 * n_modes, 2 * n_modes);
    for a in 0..2 * m {
        for b in 0..2 * m {
            full[(global(a), global(b))] = local[(a, b)];
        }
    }
    Ok(SymplecticMatrix::new_unchecked(full))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::{
        complex_to_real_state, is_orthogonal, is_symplectic, is_unitary, phase_space_action, ComplexState, PhaseState,
    };
    use crate::matrix::{kron, max_diff_complex, max_diff_rvec};
    use crate::random::{random_state_vector, seeded_rng};
    use rand::Rng;
    use std::f64::consts::E;

    const TOL: f64 = 1e-12;

    #[test]
    fn gamma_of_not_is_the_golden_matrix() {
        let s = gamma(gate_notp().unitary_matrix().unwrap(), TOL).unwrap();
        #[rustfmt::skip]
        let golden = RMatrix::from_row_slice(4, 4, &[
             0., 1., 0., 0.,
            -1., 0., 0., 0.,
             0., 0., 0., 1.,
             0., 0., -1., 0.,
        ]);
        assert_eq!(s.entries(), &golden);
    }

    #[test]
    fn not_squares_to_minus_identity_and_is_unitary() {
        let n = gate_notp();
        let m = n.unitary_matrix().unwrap();
        assert_eq!(m * m, -CMatrix::identity(2, 2));
        assert!(is_unitary(m, TOL).unwrap().holds);
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(gate_rotation(0.0).unwrap().matrix, GateMatrix::Unitary(CMatrix::identity(2, 2)));
        assert_eq!(gate_rotation(FRAC_PI_2).unwrap().matrix, gate_notp().matrix);
        let mut rng = seeded_rng(1);
        for _ in 0..50 {
            let a: f64 = rng.random_range(-10.0..10.0);
            let b: f64 = rng.random_range(-10.0..10.0);
            let ra = gate_rotation(a).unwrap();
            let rb = gate_rotation(b).unwrap();
            let rab = gate_rotation(a + b).unwrap();
            let prod = ra.unitary_matrix().unwrap() * rb.unitary_matrix().unwrap();
            assert!(max_diff_complex(&prod, rab.unitary_matrix().unwrap()) < 1e-12);
            let real = phase_space_action(ra.unitary_matrix().unwrap());
            assert!(is_symplectic(&real, TOL).unwrap().holds);
            assert!(is_orthogonal(&real, TOL).unwrap().holds);
        }
        assert!(gate_rotation(f64::NAN).is_err());
    }

    #[test]
    fn quarter_turns_are_exact() {
        for k in -8i32..=8 {
            let (s, co) = quarter_exact_sin_cos(k as f64 * FRAC_PI_2);
            let expect = [(0., 1.), (1., 0.), (0., -1.), (-1., 0.)][k.rem_euclid(4) as usize];
            assert_eq!((s, co), expect, "k={k}");
        }
    }

    #[test]
    fn cnot_permutes_10_and_11() {
        let cnot = gate_cnot();
        let m = cnot.unitary_matrix().unwrap();
        let out = m * ComplexState::basis(4, 2).amplitudes();
        assert_eq!(out, *ComplexState::basis(4, 3).amplitudes());

        let g = gamma_cnot();
        assert!(is_symplectic(g.entries(), TOL).unwrap().holds);
        assert!(is_orthogonal(g.entries(), TOL).unwrap().holds);
        let bl = g.blocks();
        assert_eq!(bl.b, RMatrix::zeros(4, 4));
        assert_eq!(bl.a, m.map(|z| z.re));

        let mut rng = seeded_rng(2);
        for _ in 0..20 {
            let psi = ComplexState::new(random_state_vector(4, &mut rng));
            let lhs = complex_to_real_state(&psi).apply(g.entries()).unwrap();
            let rhs = complex_to_real_state(&ComplexState::new(m * psi.amplitudes()));
            assert!(max_diff_rvec(&lhs.stacked(), &rhs.stacked()) <= 1e-12);
        }
    }

    #[test]
    fn squeeze_and_shear_are_strictly_symplectic() {
        let id = gate_squeeze(0.0).unwrap();
        assert_eq!(id.symplectic_matrix().unwrap(), &RMatrix::identity(2, 2));
        assert!(is_orthogonal(id.symplectic_matrix().unwrap(), TOL).unwrap().holds);

        for x in [1.0, -0.3, 2.5] {
            let sq = gate_squeeze(x).unwrap();
            let sh = gate_shear(x).unwrap();
            for g in [&sq, &sh] {
                let m = g.symplectic_matrix().unwrap();
                assert!(is_symplectic(m, TOL).unwrap().holds);
                assert!(!is_orthogonal(m, TOL).unwrap().holds);
            }
            assert_eq!(sh.symplectic_matrix().unwrap().determinant(), 1.0);
        }

        let phi = PhaseState::from_slices(&[1.], &[0.]).unwrap();
        let out = phi.apply(gate_squeeze(1.0).unwrap().symplectic_matrix().unwrap()).unwrap();
        assert!((out.q()[0] - E).abs() < 1e-15);
        assert!((out.norm_sqr().sqrt() - E).abs() < 1e-15);
        assert!(gate_shear(f64::INFINITY).is_err());
    }

    #[test]
    fn rotation_keeps_symbits_normalized() {
        let phi = PhaseState::from_slices(&[0.6, 0.0], &[0.0, 0.8]).unwrap();
        let rot = phase_space_action(gate_rotation(1.1).unwrap().unitary_matrix().unwrap());
        let out = phi.apply(&rot).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn embed_x_on_most_significant_qubit() {
        let full = embed_unitary(&gate_x(), &[0], 2).unwrap();
        let expected = kron(gate_x().unitary_matrix().unwrap(), &CMatrix::identity(2, 2));
        assert_eq!(full, expected);
        for (from, to) in [(0, 2), (1, 3), (2, 0), (3, 1)] {
            assert_eq!(full[(to, from)], c(1., 0.));
        }
    }

    #[test]
    fn embedding_into_own_arity_is_unchanged() {
        for g in [gate_cnot(), gate_h(), gate_t()] {
            let targets: Vec<usize> = (0..g.arity).collect();
            assert_eq!(&embed_unitary(&g, &targets, g.arity).unwrap(), g.unitary_matrix().unwrap());
        }
    }

    #[test]
    fn embedded_cnot_matches_bitstring_rewrite() {
        for (ctl, tgt) in [(0, 1), (1, 0), (0, 2), (2, 1)] {
            let full = embed_unitary(&gate_cnot(), &[ctl, tgt], 3).unwrap();
            for k in 0..8usize {
                let ctl_bit = (k >> (2 - ctl)) & 1;
                let expected = if ctl_bit == 1 { k ^ (1 << (2 - tgt)) } else { k };
                let out = &full * ComplexState::basis(8, k).amplitudes();
                assert_eq!(out, *ComplexState::basis(8, expected).amplitudes(), "k={k}");
            }
        }
    }

    #[test]
    fn embed_unitary_errors() {
        assert!(matches!(embed_unitary(&gate_x(), &[2], 2), Err(Error::TargetOutOfRange { .. })));
        assert!(matches!(embed_unitary(&gate_cnot(), &[1, 1], 2), Err(Error::DuplicateTarget(1))));
        assert!(matches!(embed_unitary(&gate_squeeze(1.0).unwrap(), &[0], 2), Err(Error::KindMismatch { .. })));
        assert!(matches!(embed_unitary(&gate_cnot(), &[0], 2), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn embed_squeeze_on_mode_zero() {
        let r = 0.4;
        let full = embed_symplectic(&gate_squeeze(r).unwrap(), &[0], 2).unwrap();
        let expected =
            RMatrix::from_diagonal(&crate::matrix::RVector::from_column_slice(&[r.exp(), 1.0, (-r).exp(), 1.0]));
        assert_eq!(full.entries(), &expected);
        let ident = embed_symplectic(&gate_squeeze(0.0).unwrap(), &[1], 3).unwrap();
        assert_eq!(ident.entries(), &RMatrix::identity(6, 6));
    }

    #[test]
    fn random_symplectic_embeddings_are_symplectic() {
        let mut rng = seeded_rng(3);
        for _ in 0..50 {
            let n_modes = rng.random_range(1..=8);
            let mode = rng.random_range(0..n_modes);
            let x: f64 = rng.random_range(-2.0..2.0);
            let g = if rng.random_bool(0.5) { gate_squeeze(x) } else { gate_shear(x) }.unwrap();
            let full = embed_symplectic(&g, &[mode], n_modes).unwrap();
            assert!(is_symplectic(full.entries(), TOL).unwrap().holds);
        }
    }

    #[test]
    fn embed_symplectic_errors() {
        let sq = gate_squeeze(1.0).unwrap();
        assert!(matches!(embed_symplectic(&sq, &[4], 4), Err(Error::ModeOutOfRange { .. })));
        assert!(matches!(embed_symplectic(&gate_h(), &[0], 2), Err(Error::KindMismatch { .. })));
        assert!(matches!(embed_symplectic(&sq, &[0, 1], 2), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn gamma_of_embedded_unitary_commutes_with_conversion() {
        let mut rng = seeded_rng(4);
        for g in [gate_h(), gate_s(), gate_t(), gate_y(), gate_rx(0.3).unwrap(), gate_cnot()] {
            let targets: Vec<usize> = if g.arity == 1 { vec![1] } else { vec![2, 0] };
            let full = embed_unitary(&g, &targets, 3).unwrap();
            let real = phase_space_action(&full);
            let psi = ComplexState::new(random_state_vector(8, &mut rng));
            let lhs = complex_to_real_state(&ComplexState::new(&full * psi.amplitudes()));
            let rhs = complex_to_real_state(&psi).apply(&real).unwrap();
            assert!(max_diff_rvec(&lhs.stacked(), &rhs.stacked()) <= 1e-12);
        }
    }

    #[test]
    fn catalog_contents_and_invariants() {
        let catalog = GateCatalog::global();
        let names: Vec<_> = catalog.names().collect();
        for required in ["NOTP", "X", "Y", "Z", "H", "S", "T", "RX", "RY", "RZ", "CNOT", "ROT", "SQUEEZE", "SHEAR"] {
            assert!(names.contains(&required), "{required} missing");
        }
        let mut rng = seeded_rng(5);
        for name in names {
            let spec = catalog.spec(name).unwrap();
            for _ in 0..10 {
                let params: Vec<f64> = (0..spec.n_params).map(|_| rng.random_range(-4.0..4.0)).collect();
                let g = catalog.build(name, &params).unwrap();
                assert_eq!(g.kind(), spec.kind);
                assert_eq!(g.arity, spec.arity);
                match &g.matrix {
                    GateMatrix::Unitary(m) => assert!(is_unitary(m, TOL).unwrap().holds),
                    GateMatrix::Symplectic(m) => {
                        assert!(is_symplectic(m, TOL).unwrap().holds);
                        assert!(!is_orthogonal(m, TOL).unwrap().holds);
                    }
                }
            }
        }
    }

    #[test]
    fn catalog_build_errors() {
        let catalog = GateCatalog::global();
        assert!(matches!(catalog.build("FOO", &[]), Err(Error::UnknownGate(_))));
        assert!(matches!(catalog.build("RX", &[]), Err(Error::ParamCount { .. })));
        assert!(matches!(catalog.build("H", &[1.0]), Err(Error::ParamCount { .. })));
    }

    #[test]
    fn gate_display_round_trips_through_catalog() {
        let catalog = GateCatalog::global();
        let mut rng = seeded_rng(6);
        for name in catalog.names() {
            let spec = catalog.spec(name).unwrap();
            let params: Vec<f64> = (0..spec.n_params).map(|_| rng.random_range(-1e3..1e3)).collect();
            let g = catalog.build(name, &params).unwrap();
            let text = g.to_string();
            let (parsed_name, rest) = text.split_once('(').unwrap_or((&text, ""));
            let parsed: Vec<f64> =
                rest.trim_end_matches(')').split(',').filter(|s| !s.is_empty()).map(|s| s.parse().unwrap()).collect();
            let again = catalog.build(parsed_name, &parsed).unwrap();
            assert_eq!(again, g);
        }
    }

    #[test]
    fn gamma_image_of_unitary_gates_in_intersection() {
        for g in [gate_x(), gate_y(), gate_s(), gate_t(), gate_cnot()] {
            let s = gamma(g.unitary_matrix().unwrap(), TOL).unwrap();
            assert!(is_orthogonal(s.entries(), TOL).unwrap().holds);
            let back = crate::duality::intersection_to_unitary(s.entries(), TOL).unwrap();
            assert_eq!(max_diff_complex(&back, g.unitary_matrix().unwrap()), 0.0);
        }
    }
}
