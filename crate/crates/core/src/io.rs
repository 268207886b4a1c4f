//! JSON file formats.
//!
//! Complex matrices: `{"dim": N, "re": [[..]], "im": [[..]]}`; real matrices:
//! `{"dim": M, "entries": [[..]]}`. Both row-major.
//!
//! Evolution input:
//!
//! ```json
//! {"H": <complex matrix> | {"K": <real>, "L": <real>},
//!  "psi0": {"re": [..], "im": [..]} | "phi0": {"q": [..], "p": [..]},
//!  "t0": 0.0, "t1": 1.0, "dt": 1e-3, "method": "midpoint" | "strang"}
//! ```
//!
//! `L` may be omitted (zero); real matrices may also be given as bare
//! row arrays. Output is [`TrajectoryReport`].

use serde::{Deserialize, Serialize};

use crate::duality::{complex_to_real_state, decompose_hermitian, ComplexState, HermitianOperator, PhaseState};
use crate::dynamics::{hsym, integrate, IntegratorConfig, Method, QuadraticHamiltonian, Trajectory};
use crate::error::{Error, Result};
use crate::matrix::{c, CMatrix, CVector, RMatrix, RVector, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealMatrixJson {
    pub dim: usize,
    pub entries: Vec<Vec<f64>>,
}

fn rows_to_matrix(dim: usize, rows: &[Vec<f64>], what: &str) -> Result<RMatrix> {
    if rows.len() != dim {
        return Err(Error::Malformed(format!("{what}: expected {dim} rows, got {}", rows.len())));
    }
    if let Some(bad) = rows.iter().position(|r| r.len() != dim) {
        return Err(Error::Malformed(format!("{what}: row {bad} has {} entries, expected {dim}", rows[bad].len())));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite(what.to_string()));
    }
    Ok(RMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
}

fn matrix_to_rows(m: &RMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl ComplexMatrixJson {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let re = rows_to_matrix(self.dim, &self.re, "re")?;
        let im = rows_to_matrix(self.dim, &self.im, "im")?;
        Ok(crate::matrix::cmatrix_from_parts(&re, &im))
    }

    pub fn from_matrix(m: &CMatrix) -> Self {
        Self {
            dim: m.nrows(),
            re: matrix_to_rows(&crate::matrix::real_part(m)),
            im: matrix_to_rows(&crate::matrix::imag_part(m)),
        }
    }
}

impl RealMatrixJson {
    pub fn to_matrix(&self) -> Result<RMatrix> {
        rows_to_matrix(self.dim, &self.entries, "entries")
    }

    pub fn from_matrix(m: &RMatrix) -> Self {
        Self { dim: m.nrows(), entries: matrix_to_rows(m) }
    }
}

pub fn read_complex_matrix(json: &str) -> Result<CMatrix> {
    serde_json::from_str::<ComplexMatrixJson>(json)?.to_matrix()
}

pub fn read_real_matrix(json: &str) -> Result<RMatrix> {
    serde_json::from_str::<RealMatrixJson>(json)?.to_matrix()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RealMatrixInput {
    Object(RealMatrixJson),
    Rows(Vec<Vec<f64>>),
}

impl RealMatrixInput {
    fn to_matrix(&self, what: &str) -> Result<RMatrix> {
        match self {
            RealMatrixInput::Object(m) => m.to_matrix(),
            RealMatrixInput::Rows(rows) => rows_to_matrix(rows.len(), rows, what),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HamiltonianInput {
    Complex(ComplexMatrixJson),
    Split {
        #[serde(rename = "K")]
        k: RealMatrixInput,
        #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
        l: Option<RealMatrixInput>,
    },
}

impl HamiltonianInput {
    pub fn to_operator(&self) -> Result<HermitianOperator> {
        match self {
            HamiltonianInput::Complex(m) => decompose_hermitian(&m.to_matrix()?, DEFAULT_TOL),
            HamiltonianInput::Split { k, l } => {
                let k = k.to_matrix("K")?;
                let l = match l {
                    Some(l) => l.to_matrix("L")?,
                    None => RMatrix::zeros(k.nrows(), k.ncols()),
                };
                HermitianOperator::from_parts(&k, &l, DEFAULT_TOL)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexVectorJson {
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

impl ComplexVectorJson {
    pub fn to_state(&self) -> Result<ComplexState> {
        let im = if self.im.is_empty() { vec![0.0; self.re.len()] } else { self.im.clone() };
        if im.len() != self.re.len() {
            return Err(Error::DimMismatch { expected: self.re.len(), found: im.len() });
        }
        Ok(ComplexState::new(CVector::from_fn(self.re.len(), |i, _| c(self.re[i], im[i]))))
    }

    pub fn from_state(psi: &ComplexState) -> Self {
        Self {
            re: psi.amplitudes().iter().map(|z| z.re).collect(),
            im: psi.amplitudes().iter().map(|z| z.im).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseVectorJson {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

impl PhaseVectorJson {
    pub fn to_state(&self) -> Result<PhaseState> {
        PhaseState::new(RVector::from_column_slice(&self.q), RVector::from_column_slice(&self.p))
    }

    pub fn from_state(phi: &PhaseState) -> Self {
        Self { q: phi.q().iter().copied().collect(), p: phi.p().iter().copied().collect() }
    }
}

fn default_dt() -> f64 {
    1e-3
}

fn default_method() -> String {
    "midpoint".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveInput {
    #[serde(rename = "H")]
    pub h: HamiltonianInput,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi0: Option<ComplexVectorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi0: Option<PhaseVectorJson>,
    #[serde(default)]
    pub t0: f64,
    pub t1: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_method")]
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stride: Option<usize>,
}

/// Trajectory with per-sample diagnostics. `hsym_drift[i]` is
/// |H_sym(t_i) - H_sym(t_0)| / |H_sym(t_0)| (absolute when H_sym(t_0) = 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryReport {
    pub times: Vec<f64>,
    pub q: Vec<Vec<f64>>,
    pub p: Vec<Vec<f64>>,
    pub hsym: Vec<f64>,
    pub hsym_drift: Vec<f64>,
    pub norm: Vec<f64>,
}

impl TrajectoryReport {
    pub fn from_trajectory(ham: &QuadraticHamiltonian, traj: &Trajectory) -> Result<Self> {
        let hsym_values = traj.states.iter().map(|s| hsym(ham, s)).collect::<Result<Vec<f64>>>()?;
        let h0 = hsym_values[0];
        let scale = if h0 != 0.0 { h0.abs() } else { 1.0 };
        Ok(Self {
            times: traj.times.clone(),
            q: traj.states.iter().map(|s| s.q().iter().copied().collect()).collect(),
            p: traj.states.iter().map(|s| s.p().iter().copied().collect()).collect(),
            hsym_drift: hsym_values.iter().map(|h| (h - h0).abs() / scale).collect(),
            hsym: hsym_values,
            norm: traj.states.iter().map(|s| s.norm_sqr().sqrt()).collect(),
        })
    }

    pub fn is_finite(&self) -> bool {
        let all = [&self.times, &self.hsym, &self.hsym_drift, &self.norm];
        all.iter().all(|v| v.iter().all(|x| x.is_finite()))
            && self.q.iter().chain(&self.p).flatten().all(|x| x.is_finite())
    }
}

impl EvolveInput {
    pub fn initial_state(&self, dim: usize) -> Result<PhaseState> {
        let phi = match (&self.psi0, &self.phi0) {
            (Some(_), Some(_)) => return Err(Error::Malformed("give either psi0 or phi0, not both".into())),
            (Some(psi), None) => complex_to_real_state(&psi.to_state()?),
            (None, Some(phi)) => phi.to_state()?,
            (None, None) => return Err(Error::Malformed("missing psi0 or phi0".into())),
        };
        if phi.dim() != dim {
            return Err(Error::DimMismatch { expected: dim, found: phi.dim() });
        }
        if !phi.stacked().iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("initial state".into()));
        }
        Ok(phi)
    }

    pub fn config(&self) -> Result<IntegratorConfig> {
        let method: Method = self.method.parse()?;
        Ok(IntegratorConfig::new(method, self.dt).with_stride(self.stride.unwrap_or(1)))
    }

    /// Integrates the (time-independent) Hamiltonian over [t0, t1].
    pub fn run(&self) -> Result<TrajectoryReport> {
        let op = self.h.to_operator()?;
        let ham = QuadraticHamiltonian::from(&op);
        let phi0 = self.initial_state(op.dim())?;
        let traj = integrate(|_| ham.clone(), &phi0, self.t0, self.t1, &self.config()?)?;
        TrajectoryReport::from_trajectory(&ham, &traj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::evolve_real_exact;

    #[test]
    fn complex_matrix_file_round_trip() {
        let json = r#"{"dim": 2, "re": [[0, 1], [1, 0]], "im": [[0, 0], [0, 0]]}"#;
        let m = read_complex_matrix(json).unwrap();
        assert_eq!(m[(0, 1)], c(1., 0.));
        let back = serde_json::to_string(&ComplexMatrixJson::from_matrix(&m)).unwrap();
        assert_eq!(read_complex_matrix(&back).unwrap(), m);
    }

    #[test]
    fn real_matrix_file_and_shape_errors() {
        let m = read_real_matrix(r#"{"dim": 2, "entries": [[0, 1], [-1, 0]]}"#).unwrap();
        assert_eq!(m, RMatrix::from_row_slice(2, 2, &[0., 1., -1., 0.]));
        assert!(matches!(read_real_matrix(r#"{"dim": 2, "entries": [[0, 1], [-1]]}"#), Err(Error::Malformed(_))));
        assert!(matches!(read_real_matrix(r#"{"dim": 3, "entries": []}"#), Err(Error::Malformed(_))));
        assert!(matches!(read_real_matrix("{"), Err(Error::Json(_))));
    }

    fn sigma_x_input(split: bool) -> EvolveInput {
        let h = if split {
            r#"{"K": [[0, 1], [1, 0]]}"#
        } else {
            r#"{"dim": 2, "re": [[0, 1], [1, 0]], "im": [[0, 0], [0, 0]]}"#
        };
        let json = format!(r#"{{"H": {h}, "psi0": {{"re": [1, 0]}}, "t0": 0, "t1": 1, "dt": 1e-3}}"#);
        serde_json::from_str(&json).unwrap()
    }

    #[test]
    fn evolve_file_matches_exact_and_both_spellings_agree() {
        let full = sigma_x_input(false).run().unwrap();
        let split = sigma_x_input(true).run().unwrap();
        assert_eq!(full, split);
        assert_eq!(full.times.len(), 1001);

        let op = sigma_x_input(false).h.to_operator().unwrap();
        let exact = evolve_real_exact(&op, &PhaseState::basis(2, 0), 1.0).unwrap();
        let end_q = full.q.last().unwrap();
        let end_p = full.p.last().unwrap();
        for i in 0..2 {
            assert!((end_q[i] - exact.q()[i]).abs() < 1e-6);
            assert!((end_p[i] - exact.p()[i]).abs() < 1e-6);
        }
        assert!(full.hsym_drift.iter().all(|d| *d <= 1e-8));
        assert!(full.is_finite());
    }

    #[test]
    fn evolve_input_errors() {
        let mut input = sigma_x_input(false);
        input.t1 = 0.0;
        assert!(matches!(input.run(), Err(Error::InvalidInterval { .. })));

        let mut input = sigma_x_input(false);
        input.method = "rk4".into();
        assert!(matches!(input.run(), Err(Error::InvalidConfig(_))));

        let mut input = sigma_x_input(false);
        input.phi0 = Some(PhaseVectorJson { q: vec![1., 0.], p: vec![0., 0.] });
        assert!(matches!(input.run(), Err(Error::Malformed(_))));

        let mut input = sigma_x_input(false);
        input.psi0 = Some(ComplexVectorJson { re: vec![1., 0., 0.], im: vec![] });
        assert!(matches!(input.run(), Err(Error::DimMismatch { .. })));

        let json = r#"{"H": {"K": [[0, 1], [2, 0]]}, "phi0": {"q": [1, 0], "p": [0, 0]}, "t1": 1}"#;
        let input: EvolveInput = serde_json::from_str(json).unwrap();
        assert!(matches!(input.run(), Err(Error::NotHermitian { .. })));
    }
}
