//! Single-copy discrimination: Helstrom error, classical and quantum Chernoff
//! bounds, fidelity and the bound chain relating them.

use crate::error::{check_range, Error, Result};
use crate::matcore::{
    eig_hermitian, spectral_projector, support_pow, trace_norm, CMatrix, HermitianMatrix,
};
use crate::optimize::minimize_s;
use crate::states::{DensityMatrix, DiscreteDistribution, QubitState};

/// A rate exponent `−log Q`, which is infinite for perfectly distinguishable inputs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn from_q(q: f64) -> Self {
        if q > 0.0 {
            Exponent::Finite((-q.ln()).max(0.0))
        } else {
            Exponent::Infinite
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Exponent::Finite(_))
    }

    /// The exponent as a float, `+∞` for the infinite case.
    pub fn value(&self) -> f64 {
        match self {
            Exponent::Finite(v) => *v,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            Exponent::Finite(v) => Some(*v),
            Exponent::Infinite => None,
        }
    }
}

/// Minimized overlap `Q`, its minimizer `s*` and `D = −log Q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChernoffResult {
    pub q: f64,
    pub s_star: f64,
    pub exponent: Exponent,
}

impl ChernoffResult {
    fn identical() -> Self {
        ChernoffResult { q: 1.0, s_star: 0.5, exponent: Exponent::Finite(0.0) }
    }
}

/// `Q_s = Σ w a^s b^{1−s}` over pairs with both weights in the supports.
///
/// Pairs with a zero on either side vanish for every `s ∈ [0, 1]` under the
/// support-projector convention, so they are dropped and the remaining sum is
/// continuous up to and including the endpoints.
#[derive(Clone, Debug)]
pub(crate) struct OverlapSum {
    terms: Vec<(f64, f64, f64)>,
}

impl OverlapSum {
    pub(crate) fn new(terms: impl IntoIterator<Item = (f64, f64, f64)>) -> Self {
        let terms = terms
            .into_iter()
            .filter(|&(w, a, b)| w > 0.0 && a > 0.0 && b > 0.0)
            .map(|(w, a, b)| (w, a.ln(), b.ln()))
            .collect();
        OverlapSum { terms }
    }

    pub(crate) fn classical(p0: &[f64], p1: &[f64]) -> Self {
        Self::new(p0.iter().zip(p1).map(|(&a, &b)| (1.0, a, b)))
    }

    /// Overlap terms from two spectral decompositions, `D_ij = |⟨a_i|b_j⟩|²`.
    pub(crate) fn quantum(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Self {
        let (e0, e1) = (rho0.eigen(), rho1.eigen());
        let (c0, c1) = (e0.support_threshold(), e1.support_threshold());
        let overlaps = e0.vectors.adjoint() * &e1.vectors;
        let mut terms = Vec::with_capacity(e0.dim() * e1.dim());
        for (i, &a) in e0.values.iter().enumerate() {
            if a <= c0 {
                continue;
            }
            for (j, &b) in e1.values.iter().enumerate() {
                if b > c1 {
                    terms.push((overlaps[(i, j)].norm_sqr(), a, b));
                }
            }
        }
        Self::new(terms)
    }

    /// Rescales the two sides by constants (priors).
    pub(crate) fn weighted(&self, c0: f64, c1: f64) -> Self {
        let (l0, l1) = (c0.ln(), c1.ln());
        OverlapSum { terms: self.terms.iter().map(|&(w, a, b)| (w, a + l0, b + l1)).collect() }
    }

    pub(crate) fn eval(&self, s: f64) -> f64 {
        self.terms.iter().map(|&(w, la, lb)| w * (s * la + (1.0 - s) * lb).exp()).sum()
    }

    pub(crate) fn minimize(&self) -> ChernoffResult {
        if self.terms.is_empty() {
            return ChernoffResult { q: 0.0, s_star: 0.5, exponent: Exponent::Infinite };
        }
        let m = minimize_s(|s| self.eval(s));
        let q = m.value.clamp(0.0, 1.0);
        ChernoffResult { q, s_star: m.x, exponent: Exponent::from_q(q) }
    }
}

fn same_matrix(a: &HermitianMatrix, b: &HermitianMatrix) -> bool {
    (a.as_matrix() - b.as_matrix()).iter().all(|z| z.norm() <= 1e-14)
}

fn same_alphabet(p0: &DiscreteDistribution, p1: &DiscreteDistribution) -> Result<()> {
    if p0.len() != p1.len() {
        return Err(Error::DimensionMismatch(p0.len(), p1.len()));
    }
    Ok(())
}

/// Classical Chernoff information `−min_s log Σ_b p0(b)^s p1(b)^{1−s}`.
pub fn classical_chernoff(p0: &DiscreteDistribution, p1: &DiscreteDistribution) -> Result<ChernoffResult> {
    same_alphabet(p0, p1)?;
    if p0 == p1 {
        return Ok(ChernoffResult::identical());
    }
    Ok(OverlapSum::classical(p0.probs(), p1.probs()).minimize())
}

/// Closed-form Chernoff exponent for two coins.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinaryChernoff {
    /// Fraction of heads at which the two hypotheses are equally likely.
    pub xi: f64,
    pub c: f64,
}

/// Chernoff exponent between coins with head probabilities `p` and `q`.
pub fn binary_chernoff_closed(p: f64, q: f64) -> Result<BinaryChernoff> {
    for (name, v) in [("p", p), ("q", q)] {
        if v == 0.0 || v == 1.0 {
            return Err(Error::Boundary(format!(
                "{name} = {v} is a degenerate coin; use classical_chernoff"
            )));
        }
        check_range(name, v, v > 0.0 && v < 1.0, "0 < value < 1")?;
    }
    if p == q {
        return Ok(BinaryChernoff { xi: p, c: 0.0 });
    }
    let (pb, qb) = (1.0 - p, 1.0 - q);
    let xi = (qb / pb).ln() / ((p * qb) / (q * pb)).ln();
    let c = xi * (xi / p).ln() + (1.0 - xi) * ((1.0 - xi) / pb).ln();
    Ok(BinaryChernoff { xi, c: c.max(0.0) })
}

/// Normalized geometric interpolation `p_s ∝ p0^s p1^{1−s}`.
pub fn hellinger_arc(p0: &DiscreteDistribution, p1: &DiscreteDistribution, s: f64) -> Result<DiscreteDistribution> {
    same_alphabet(p0, p1)?;
    check_range("s", s, (0.0..=1.0).contains(&s), "0 ≤ s ≤ 1")?;
    let w: Vec<f64> = p0.probs().iter().zip(p1.probs()).map(|(a, b)| a.powf(s) * b.powf(1.0 - s)).collect();
    if w.iter().sum::<f64>() <= 0.0 {
        return Err(Error::InvalidDistribution("distributions share no support".into()));
    }
    DiscreteDistribution::from_weights(&w)
}

/// Relative entropy `K(p‖q)` in nats; `+∞` when `p` charges a `q`-null outcome.
pub fn kl_divergence(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    same_alphabet(p, q)?;
    let mut total = 0.0;
    for (&a, &b) in p.probs().iter().zip(q.probs()) {
        if a > 0.0 {
            if b <= 0.0 {
                return Ok(f64::INFINITY);
            }
            total += a * (a / b).ln();
        }
    }
    Ok(total.max(0.0))
}

/// Minimum error probability `(1 − tr|π1ρ1 − π0ρ0|)/2` with prior `π0` on `ρ0`.
pub fn helstrom_error(rho0: &DensityMatrix, rho1: &DensityMatrix, pi0: f64) -> Result<f64> {
    rho0.same_dim(rho1)?;
    check_range("pi0", pi0, (0.0..=1.0).contains(&pi0), "0 ≤ pi0 ≤ 1")?;
    let gamma = &(rho1.matrix() * (1.0 - pi0)) - &(rho0.matrix() * pi0);
    Ok(((1.0 - trace_norm(&gamma)) / 2.0).max(0.0))
}

/// `tr ρ0^s ρ1^{1−s}` from the two matrix powers.
pub fn quantum_q_s(rho0: &DensityMatrix, rho1: &DensityMatrix, s: f64) -> Result<f64> {
    rho0.same_dim(rho1)?;
    let a = rho0.power(s)?;
    let b = rho1.power(1.0 - s)?;
    Ok(a.trace_product(&b))
}

/// Quantum Chernoff bound `Q = min_s tr ρ0^s ρ1^{1−s}` and its exponent.
pub fn quantum_chernoff(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<ChernoffResult> {
    rho0.same_dim(rho1)?;
    if same_matrix(rho0.matrix(), rho1.matrix()) {
        return Ok(ChernoffResult::identical());
    }
    Ok(OverlapSum::quantum(rho0, rho1).minimize())
}

/// `min_s π0^s π1^{1−s} tr ρ0^s ρ1^{1−s}`, an upper bound on the weighted Helstrom error.
pub fn quantum_chernoff_weighted(rho0: &DensityMatrix, rho1: &DensityMatrix, pi0: f64) -> Result<f64> {
    rho0.same_dim(rho1)?;
    check_range("pi0", pi0, pi0 > 0.0 && pi0 < 1.0, "0 < pi0 < 1")?;
    let sum = OverlapSum::quantum(rho0, rho1).weighted(pi0, 1.0 - pi0);
    Ok(minimize_s(|s| sum.eval(s)).value.max(0.0))
}

/// Uhlmann fidelity `(tr √(√ρ0 ρ1 √ρ0))²`.
pub fn fidelity(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    rho0.same_dim(rho1)?;
    if same_matrix(rho0.matrix(), rho1.matrix()) {
        return Ok(1.0);
    }
    // a rank-one argument gives ⟨ψ|ρ|ψ⟩ directly, avoiding square roots of rounding noise
    for (pure, other) in [(rho0, rho1), (rho1, rho0)] {
        if pure.rank() == 1 {
            let e = pure.eigen();
            let k = e.dim() - 1;
            let psi = e.vectors.column(k);
            let v = (psi.adjoint() * other.matrix().as_matrix() * psi)[(0, 0)].re;
            return Ok((e.values[k] * v).clamp(0.0, 1.0));
        }
    }
    let root = rho0.power(0.5)?;
    let m: CMatrix = root.as_matrix() * rho1.matrix().as_matrix() * root.as_matrix();
    let eig = eig_hermitian(&HermitianMatrix::new(m)?);
    let floor = 64.0 * f64::EPSILON * eig.max_value().max(0.0);
    let root_sum: f64 = eig.values.iter().filter(|&&l| l > floor).map(|l| l.sqrt()).sum();
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}

/// The single-copy error quantities ordered by the bound chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundsReport {
    pub helstrom_pe: f64,
    /// `Q/2` with `Q` the quantum Chernoff overlap.
    pub p_qc: f64,
    /// `tr ρ0^{1/2} ρ1^{1/2} / 2`.
    pub half_overlap_root: f64,
    pub fidelity: f64,
    /// `√F / 2`.
    pub fid_upper_pe: f64,
    /// `(1 − √(1 − F))/2`.
    pub fid_lower_pe: f64,
}

impl BoundsReport {
    /// The chain `fid_lower ≤ helstrom ≤ p_qc ≤ half_overlap_root ≤ fid_upper` as pairs.
    pub fn chain(&self) -> [(&'static str, f64); 5] {
        [
            ("fid_lower_pe", self.fid_lower_pe),
            ("helstrom_pe", self.helstrom_pe),
            ("p_qc", self.p_qc),
            ("half_overlap_root", self.half_overlap_root),
            ("fid_upper_pe", self.fid_upper_pe),
        ]
    }

    /// Smallest gap along the chain; negative means an ordering violation.
    pub fn min_slack(&self) -> f64 {
        self.chain().windows(2).map(|w| w[1].1 - w[0].1).fold(f64::INFINITY, f64::min)
    }
}

pub const BOUND_SLACK: f64 = 1e-12;

/// Evaluates every bound in the chain and checks their ordering.
pub fn bounds_report(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<BoundsReport> {
    let helstrom_pe = helstrom_error(rho0, rho1, 0.5)?;
    let q = quantum_chernoff(rho0, rho1)?.q;
    let half_overlap_root = quantum_q_s(rho0, rho1, 0.5)? / 2.0;
    let f = fidelity(rho0, rho1)?;
    let report = BoundsReport {
        helstrom_pe,
        p_qc: (q / 2.0).min(half_overlap_root),
        half_overlap_root,
        fidelity: f,
        fid_upper_pe: f.sqrt() / 2.0,
        fid_lower_pe: (1.0 - (1.0 - f).max(0.0).sqrt()) / 2.0,
    };
    let chain = report.chain();
    for w in chain.windows(2) {
        if w[1].1 - w[0].1 < -BOUND_SLACK {
            return Err(Error::BoundOrder(format!(
                "{} = {} exceeds {} = {}",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
    }
    Ok(report)
}

/// Closed-form `Q_s` for two qubits from their Bloch lengths and relative angle.
pub fn qubit_q_s_closed(q0: &QubitState, q1: &QubitState, s: f64) -> Result<f64> {
    check_range("s", s, (0.0..=1.0).contains(&s), "0 ≤ s ≤ 1")?;
    let (p0, p1) = (q0.major_eigenvalue(), q1.major_eigenvalue());
    let (pb0, pb1) = (1.0 - p0, 1.0 - p1);
    let (c0, c1) = (p0 * crate::matcore::SUPPORT_CUTOFF, p1 * crate::matcore::SUPPORT_CUTOFF);
    let a = |x: f64| support_pow(x, s, c0);
    let b = |x: f64| support_pow(x, 1.0 - s, c1);
    let half = q0.angle_to(q1) / 2.0;
    let (cos2, sin2) = (half.cos().powi(2), half.sin().powi(2));
    Ok((a(p0) * b(p1) + a(pb0) * b(pb1)) * cos2 + (a(p0) * b(pb1) + a(pb0) * b(p1)) * sin2)
}

/// Equal-prior error of the test that guesses `ρ1` on `{ρ0^{1/2} − ρ1^{1/2} < 0}`.
pub fn half_power_measurement_error(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    rho0.same_dim(rho1)?;
    let diff = &rho0.power(0.5)? - &rho1.power(0.5)?;
    let e1 = spectral_projector(&diff, |l| l < 0.0);
    let e0 = &HermitianMatrix::identity(rho0.dim()) - &e1;
    let pe = 0.5 * (rho0.matrix().trace_product(&e1) + rho1.matrix().trace_product(&e0));
    Ok(pe.clamp(0.0, 0.5))
}
