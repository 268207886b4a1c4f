//! Time evolution in both pictures.
//!
//! With ψ = q + ip and H = K + iL, the equation iψ̇ = Hψ becomes the linear
//! Hamiltonian system ẋ = M x on x = (q; p) with
//!
//! ```text
//! M = [[ L, K],
//!      [-K, L]]
//! ```
//!
//! generated by H_sym = ½(pᵀKp + qᵀKq) + pᵀLq. Exact propagators are built
//! both as exp(-iHt) (complex route) and exp(tM) (real route); the
//! integrators handle time-dependent K(t), L(t).

use num_complex::Complex64;

use crate::duality::{phase_space_action, ComplexState, HermitianOperator, PhaseState, SymplecticMatrix};
use crate::error::{Error, Result};
use crate::expm::matrix_exponential;
use crate::matrix::{max_diff_real, CMatrix, RMatrix, RVector};

/// Exact propagator at time `t` in both pictures. `s_t` maps (q(0); p(0))
/// to (q(t); p(t)), i.e. it is the phase-space action of `u_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    pub t: f64,
    pub u_t: CMatrix,
    pub s_t: SymplecticMatrix,
}

/// The real pair (K, L) of a Hamiltonian, K symmetric and L skew.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian {
    k: RMatrix,
    l: RMatrix,
}

impl QuadraticHamiltonian {
    /// Checks shapes and symmetry within `tol`, then symmetrizes exactly.
    pub fn new(k: RMatrix, l: RMatrix, tol: f64) -> Result<Self> {
        let op = HermitianOperator::from_parts(&k, &l, tol)?;
        Ok(Self::from(&op))
    }

    pub fn dim(&self) -> usize {
        self.k.nrows()
    }

    pub fn k(&self) -> &RMatrix {
        &self.k
    }

    pub fn l(&self) -> &RMatrix {
        &self.l
    }

    /// The phase-space generator M = [[L, K], [-K, L]].
    pub fn generator(&self) -> RMatrix {
        crate::duality::join_blocks(&self.l, &self.k, &-&self.k, &self.l)
    }
}

impl From<&HermitianOperator> for QuadraticHamiltonian {
    fn from(h: &HermitianOperator) -> Self {
        Self { k: h.k_part().clone(), l: h.l_part().clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Cayley step (I - h/2 M)⁻¹(I + h/2 M) with M sampled at the step midpoint.
    ImplicitMidpoint,
    /// exp(h/2 M_L) exp(h M_K) exp(h/2 M_L), each factor an exact flow.
    StrangSplitting,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "midpoint" | "implicit_midpoint" => Ok(Method::ImplicitMidpoint),
            "strang" | "strang_splitting" => Ok(Method::StrangSplitting),
            other => Err(Error::InvalidConfig(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Nominal step; the interval is split into ⌈(t1 - t0)/dt⌉ equal steps.
    pub dt: f64,
    /// Reserved for nonlinear extensions: the midpoint step of a linear
    /// system is a single direct solve.
    pub newton_tol: f64,
    pub max_inner_iters: usize,
    /// Record every `stride`-th step (the endpoint is always recorded).
    pub stride: usize,
}

impl IntegratorConfig {
    pub fn new(method: Method, dt: f64) -> Self {
        Self { method, dt, newton_tol: 1e-14, max_inner_iters: 50, stride: 1 }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.newton_tol.is_finite() && self.newton_tol > 0.0) {
            return Err(Error::InvalidConfig("newton_tol must be positive".into()));
        }
        if self.max_inner_iters == 0 || self.stride == 0 {
            return Err(Error::InvalidConfig("max_inner_iters and stride must be >= 1".into()));
        }
        Ok(())
    }
}

/// Sampled solution: `states[i]` is the state at `times[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PhaseState>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &PhaseState {
        self.states.last().expect("trajectory always holds the initial state")
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimMismatch { expected, found });
    }
    Ok(())
}

/// exp(-iHt).
pub fn complex_propagator(h: &HermitianOperator, t: f64) -> Result<CMatrix> {
    if !t.is_finite() {
        return Err(Error::NonFinite("time".into()));
    }
    let minus_it = Complex64::new(0.0, -t);
    matrix_exponential(&h.entries().map(|z| z * minus_it))
}

/// exp(tM), computed from the real generator without reference to the
/// complex propagator.
pub fn real_propagator(h: &QuadraticHamiltonian, t: f64) -> Result<SymplecticMatrix> {
    if !t.is_finite() {
        return Err(Error::NonFinite("time".into()));
    }
    let s = matrix_exponential(&(h.generator() * t))?;
    Ok(SymplecticMatrix::new_unchecked(s))
}

/// ψ(t) = exp(-iHt) ψ0.
pub fn evolve_complex(h: &HermitianOperator, psi0: &ComplexState, t: f64) -> Result<ComplexState> {
    check_dim(h.dim(), psi0.dim())?;
    let u = complex_propagator(h, t)?;
    Ok(ComplexState::new(u * psi0.amplitudes()))
}

/// Propagator with `u_t = exp(-iHt)` and `s_t` its phase-space action
/// `[[X_t, -Y_t], [Y_t, X_t]]`.
pub fn make_propagator(h: &HermitianOperator, t: f64) -> Result<Propagator> {
    let u_t = complex_propagator(h, t)?;
    let s_t = SymplecticMatrix::new_unchecked(phase_space_action(&u_t));
    Ok(Propagator { t, u_t, s_t })
}

/// (q(t); p(t)) = exp(tM) (q(0); p(0)).
pub fn evolve_real_exact(h: &HermitianOperator, phi0: &PhaseState, t: f64) -> Result<PhaseState> {
    check_dim(h.dim(), phi0.dim())?;
    let s = real_propagator(&QuadraticHamiltonian::from(h), t)?;
    phi0.apply(s.entries())
}

/// H_sym(q, p) = ½(pᵀKp + qᵀKq) + pᵀLq. On ψ = q + ip this equals
/// ½⟨ψ, Hψ⟩.
pub fn hsym(h: &QuadraticHamiltonian, phi: &PhaseState) -> Result<f64> {
    check_dim(h.dim(), phi.dim())?;
    let q = phi.q();
    let p = phi.p();
    let kinetic = p.dot(&(&h.k * p)) + q.dot(&(&h.k * q));
    Ok(0.5 * kinetic + p.dot(&(&h.l * q)))
}

/// One-step transfer matrix of `method` for step size `h` with the
/// Hamiltonian frozen at `ham`.
pub fn step_matrix(method: Method, ham: &QuadraticHamiltonian, h: f64) -> Result<RMatrix> {
    let n2 = 2 * ham.dim();
    match method {
        Method::ImplicitMidpoint => {
            let m = ham.generator() * (0.5 * h);
            let ident = RMatrix::identity(n2, n2);
            let lhs = &ident - &m;
            let rhs = &ident + &m;
            lhs.lu().solve(&rhs).ok_or(Error::InnerSolveDiverged { step: 0, time: 0.0 })
        }
        Method::StrangSplitting => {
            let (half_l, full_k) = strang_factors(ham, h)?;
            Ok(&half_l * full_k * &half_l)
        }
    }
}

/// exp(h/2 · blockdiag(L, L)) and exp(h · [[0, K], [-K, 0]]).
fn strang_factors(ham: &QuadraticHamiltonian, h: f64) -> Result<(RMatrix, RMatrix)> {
    let n = ham.dim();
    let zero = RMatrix::zeros(n, n);
    let half_l = matrix_exponential(&(&ham.l * (0.5 * h)))?;
    let half_l = crate::duality::join_blocks(&half_l, &zero, &zero, &half_l);
    let mk = crate::duality::join_blocks(&zero, &ham.k, &-&ham.k, &zero);
    let full_k = matrix_exponential(&(mk * h))?;
    Ok((half_l, full_k))
}

fn step_count(t0: f64, t1: f64, dt: f64) -> usize {
    let ratio = (t1 - t0) / dt;
    let nearest = ratio.round();
    if nearest >= 1.0 && (ratio - nearest).abs() <= 1e-9 * ratio {
        nearest as usize
    } else {
        ratio.ceil().max(1.0) as usize
    }
}

/// Integrates ẋ = M(t) x from `t0` to `t1` with a symplectic one-step method.
/// `sampler(t)` supplies (K(t), L(t)); it is evaluated at step midpoints.
pub fn integrate<F>(sampler: F, phi0: &PhaseState, t0: f64, t1: f64, cfg: &IntegratorConfig) -> Result<Trajectory>
where
    F: Fn(f64) -> QuadraticHamiltonian,
{
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(Error::InvalidInterval { t0, t1 });
    }
    cfg.validate()?;
    let n = phi0.dim();
    let steps = step_count(t0, t1, cfg.dt);
    let h = (t1 - t0) / steps as f64;

    let mut times = vec![t0];
    let mut states = vec![phi0.clone()];
    let mut x = phi0.stacked();

    for step in 0..steps {
        let t_start = t0 + step as f64 * h;
        let ham = sampler(t_start + 0.5 * h);
        check_dim(n, ham.dim())?;
        x = match cfg.method {
            Method::ImplicitMidpoint => {
                let m = ham.generator() * (0.5 * h);
                let ident = RMatrix::identity(2 * n, 2 * n);
                let rhs: RVector = &x + &m * &x;
                (ident - m).lu().solve(&rhs).ok_or(Error::InnerSolveDiverged { step, time: t_start })?
            }
            Method::StrangSplitting => {
                let (half_l, full_k) = strang_factors(&ham, h)?;
                &half_l * (full_k * (&half_l * &x))
            }
        };
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::InnerSolveDiverged { step, time: t_start });
        }
        let last = step + 1 == steps;
        if last || (step + 1) % cfg.stride == 0 {
            times.push(if last { t1 } else { t_start + h });
            states.push(PhaseState::from_stacked(&x)?);
        }
    }
    Ok(Trajectory { times, states })
}

/// max|s_t - exp(tM)|: distance between the complex-route and real-route
/// propagators.
pub fn propagator_route_deviation(h: &HermitianOperator, t: f64) -> Result<f64> {
    let prop = make_propagator(h, t)?;
    let real = real_propagator(&QuadraticHamiltonian::from(h), t)?;
    Ok(max_diff_real(prop.s_t.entries(), real.entries()))
}
