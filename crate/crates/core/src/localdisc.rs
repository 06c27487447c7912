//! Discrimination with the same two-outcome measurement applied to every copy
//! followed by classical post-processing.

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use rayon::prelude::*;

use crate::chernoff::{fidelity, Exponent, OverlapSum};
use crate::error::{Error, Result};
use crate::matcore::{eig_hermitian, pauli, HermitianMatrix};
use crate::states::{DensityMatrix, DiscreteDistribution, QubitState};

/// Eigenvalue slack allowed for a POVM element.
pub const POVM_TOL: f64 = 1e-10;

/// Two-outcome measurement `{E0, 𝟙 − E0}`.
#[derive(Clone, Debug)]
pub struct TwoOutcomePovm {
    e0: HermitianMatrix,
}

impl TwoOutcomePovm {
    pub fn new(e0: HermitianMatrix) -> Result<Self> {
        let eig = eig_hermitian(&e0);
        let (lo, hi) = (eig.values[0], eig.max_value());
        if lo < -POVM_TOL || hi > 1.0 + POVM_TOL {
            return Err(Error::InvalidPovm(format!("eigenvalues span [{lo}, {hi}], expected [0, 1]")));
        }
        Ok(TwoOutcomePovm { e0 })
    }

    /// `E0 = a𝟙 + b m̂·σ` on a qubit.
    pub fn qubit(a: f64, b: f64, m: [f64; 3]) -> Result<Self> {
        let len = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
        if (len - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPovm(format!("direction has length {len}")));
        }
        let mut e0 = HermitianMatrix::identity(2).scale(a);
        for (k, mk) in m.iter().enumerate() {
            e0 = &e0 + &(&pauli(k) * (b * mk));
        }
        Self::new(e0)
    }

    pub fn identity(dim: usize) -> Self {
        TwoOutcomePovm { e0: HermitianMatrix::identity(dim) }
    }

    pub fn e0(&self) -> &HermitianMatrix {
        &self.e0
    }

    pub fn e1(&self) -> HermitianMatrix {
        &HermitianMatrix::identity(self.e0.dim()) - &self.e0
    }

    pub fn dim(&self) -> usize {
        self.e0.dim()
    }
}

/// Outcome distributions `p_i(b) = tr(E_b ρ_i)`.
pub fn induced_distributions(
    povm: &TwoOutcomePovm,
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
) -> Result<(DiscreteDistribution, DiscreteDistribution)> {
    rho0.same_dim(rho1)?;
    if povm.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch(povm.dim(), rho0.dim()));
    }
    let bern = |rho: &DensityMatrix| {
        let p = povm.e0().trace_product(rho.matrix()).clamp(0.0, 1.0);
        DiscreteDistribution::bernoulli(p)
    };
    Ok((bern(rho0)?, bern(rho1)?))
}

/// Which classical decision rule the optimal local strategy resembles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `s* = 1/2`: symmetric outcome statistics, decided by majority vote.
    Majority,
    Intermediate,
    /// `s* → 0` or `1`: one outcome is impossible under one hypothesis.
    Unanimity,
}

impl Regime {
    pub const TOL: f64 = 1e-3;

    pub fn classify(s_star: f64) -> Self {
        if (s_star - 0.5).abs() <= Self::TOL {
            Regime::Majority
        } else if s_star.min(1.0 - s_star) <= Self::TOL {
            Regime::Unanimity
        } else {
            Regime::Intermediate
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regime::Majority => "majority",
            Regime::Intermediate => "intermediate",
            Regime::Unanimity => "unanimity",
        }
    }
}

/// Best local exponent found and the measurement attaining it.
#[derive(Clone, Debug)]
pub struct LocalExponentResult {
    pub d_cc: f64,
    pub s_star: f64,
    pub povm: TwoOutcomePovm,
    pub regime: Regime,
}

pub const DEFAULT_STARTS: usize = 32;

/// Measurement coordinates: `E0` has eigenvalues `sin²x`, `sin²y` along the
/// axis at polar angles `(θ, φ)`, so every parameter vector is a valid POVM.
#[derive(Clone, Copy, Debug)]
struct Params {
    a: f64,
    b: f64,
    m: [f64; 3],
}

impl Params {
    fn from_coords(x: &[f64]) -> Self {
        let (hi, lo) = (x[0].sin().powi(2), x[1].sin().powi(2));
        let (st, ct) = x[2].sin_cos();
        let (sp, cp) = x[3].sin_cos();
        Params { a: (hi + lo) / 2.0, b: (hi - lo) / 2.0, m: [st * cp, st * sp, ct] }
    }

    fn outcome(&self, r: &[f64; 3]) -> f64 {
        (self.a + self.b * (self.m[0] * r[0] + self.m[1] * r[1] + self.m[2] * r[2])).clamp(0.0, 1.0)
    }
}

struct LocalObjective {
    r0: [f64; 3],
    r1: [f64; 3],
}

impl LocalObjective {
    fn chernoff(&self, p: &Params) -> (f64, f64) {
        let (p0, p1) = (p.outcome(&self.r0), p.outcome(&self.r1));
        if p0 == p1 {
            return (0.0, 0.5);
        }
        let r = OverlapSum::classical(&[p0, 1.0 - p0], &[p1, 1.0 - p1]).minimize();
        (r.exponent.value(), r.s_star)
    }
}

impl CostFunction for LocalObjective {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        Ok(-self.chernoff(&Params::from_coords(x)).0)
    }
}

/// Point `k` of the Halton sequence in bases 2, 3, 5, 7, scaled to the
/// coordinate box.
fn start_point(k: usize) -> Vec<f64> {
    let radical = |mut i: usize, base: usize| {
        let (mut f, mut r) = (1.0, 0.0);
        while i > 0 {
            f /= base as f64;
            r += f * (i % base) as f64;
            i /= base;
        }
        r
    };
    let scale = [std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2, std::f64::consts::PI, 2.0 * std::f64::consts::PI];
    [2, 3, 5, 7].iter().zip(scale).map(|(&b, s)| radical(k + 1, b) * s).collect()
}

fn local_search(obj: &LocalObjective, start: Vec<f64>) -> (Vec<f64>, f64) {
    let mut best = (start.clone(), obj.cost(&start).unwrap());
    for round in 0..4 {
        let step = if round == 0 { 0.3 } else { 0.05 };
        let mut simplex = vec![best.0.clone()];
        for i in 0..best.0.len() {
            let mut v = best.0.clone();
            v[i] += step;
            simplex.push(v);
        }
        let solver = NelderMead::new(simplex).with_sd_tolerance(1e-15).expect("valid tolerance");
        let problem = LocalObjective { r0: obj.r0, r1: obj.r1 };
        let Ok(res) = Executor::new(problem, solver).configure(|s| s.max_iters(3000)).run() else {
            break;
        };
        let state = res.state();
        match &state.best_param {
            Some(p) if state.best_cost < best.1 - 1e-15 => best = (p.clone(), state.best_cost),
            _ => break,
        }
    }
    best
}

/// Best two-outcome local exponent for a qubit pair using the default number of starts.
pub fn d_cc_qubit(q0: &QubitState, q1: &QubitState) -> Result<LocalExponentResult> {
    d_cc_qubit_with_starts(q0, q1, DEFAULT_STARTS)
}

/// Multi-start search over `E0 = a𝟙 + b m̂·σ`. The starts are the first
/// `starts` points of a fixed sequence, so more starts never give a smaller value.
pub fn d_cc_qubit_with_starts(q0: &QubitState, q1: &QubitState, starts: usize) -> Result<LocalExponentResult> {
    if q0.is_pure() && q1.is_pure() {
        return Err(Error::WrongRegime("both states are pure; use d_cc_pure".into()));
    }
    if starts == 0 {
        return Err(Error::OutOfRange { name: "starts", value: 0.0, expected: "at least one start" });
    }
    let obj = LocalObjective { r0: q0.bloch(), r1: q1.bloch() };
    let runs: Vec<(Vec<f64>, f64)> = (0..starts).into_par_iter().map(|k| local_search(&obj, start_point(k))).collect();
    let mut best = &runs[0];
    for run in &runs[1..] {
        if run.1 < best.1 {
            best = run;
        }
    }
    let p = Params::from_coords(&best.0);
    let (d_cc, s_star) = obj.chernoff(&p);
    let povm = TwoOutcomePovm::qubit(p.a, p.b, p.m)?;
    Ok(LocalExponentResult { d_cc, s_star, povm, regime: Regime::classify(s_star) })
}

/// `−log F` for two pure states, attained by measuring one state's projector.
pub fn d_cc_pure(psi0: &DensityMatrix, psi1: &DensityMatrix) -> Result<Exponent> {
    if !psi0.is_pure() || !psi1.is_pure() {
        return Err(Error::WrongRegime("d_cc_pure needs two pure states".into()));
    }
    Ok(Exponent::from_q(fidelity(psi0, psi1)?))
}

pub const R_STAR_TOL: f64 = 1e-4;
pub const MAJORITY_GAP: f64 = 1e-6;

/// True when the local exponent still equals `−(1/2) log F` for equal-purity
/// states of length `r` at angle `theta`.
pub fn majority_vote_optimal(r: f64, theta: f64) -> Result<bool> {
    let q0 = QubitState::in_xz_plane(r, 0.0)?;
    let q1 = QubitState::in_xz_plane(r, theta)?;
    let lower = -0.5 * fidelity(&q0.density(), &q1.density())?.ln();
    Ok((d_cc_qubit(&q0, &q1)?.d_cc - lower).abs() <= MAJORITY_GAP)
}

/// Largest purity radius at which majority vote stays optimal, by bisection.
pub fn r_star(theta: f64) -> Result<f64> {
    crate::error::check_range("theta", theta, theta > 0.0 && theta <= std::f64::consts::PI, "0 < theta ≤ π")?;
    let (mut lo, mut hi) = (0.0, 1.0 - 1e-9);
    while hi - lo > R_STAR_TOL {
        let mid = 0.5 * (lo + hi);
        if majority_vote_optimal(mid, theta)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
