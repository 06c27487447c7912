//! Riemannian metrics induced by the distinguishability measures, the
//! resulting priors and eigenvalue densities, and random-state sampling.

mod polynomials;
mod sampling;

pub use polynomials::{cd_constant, PolynomialBasis, MAX_CD_DIM};
pub use sampling::{envelope_max, sample_density_qc, sample_haar_unitary, QcSampler};

use nalgebra::DMatrix;

use crate::error::{check_range, Error, Result};
use crate::matcore::{c, CMatrix, HermitianMatrix};
use crate::states::{DensityMatrix, QubitState};

/// Traceless Hermitian perturbation `dρ`.
#[derive(Clone, Debug)]
pub struct TangentDirection {
    matrix: HermitianMatrix,
}

impl TangentDirection {
    pub const TRACE_TOL: f64 = 1e-12;

    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if tr.abs() > Self::TRACE_TOL * matrix.max_abs().max(1.0) {
            return Err(Error::OutOfRange { name: "trace(drho)", value: tr, expected: "traceless direction" });
        }
        Ok(TangentDirection { matrix })
    }

    /// The unitary direction `i[H, ρ]` generated by Hermitian `h`.
    pub fn unitary(rho: &DensityMatrix, h: &HermitianMatrix) -> Result<Self> {
        rho.same_dim(&DensityMatrix::maximally_mixed(h.dim()))?;
        let (a, r) = (h.as_matrix(), rho.matrix().as_matrix());
        let comm = (a * r - r * a) * c(0.0, 1.0);
        Self::new(HermitianMatrix::new(comm)?)
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn scale(&self, eps: f64) -> Self {
        TangentDirection { matrix: self.matrix.scale(eps) }
    }
}

/// Perturbation in spectral coordinates: eigenvalue shifts plus the
/// anti-Hermitian generator `U†dU` of the eigenbasis rotation.
#[derive(Clone, Debug)]
pub struct SpectralTangent {
    dlambda: Vec<f64>,
    generator: CMatrix,
}

impl SpectralTangent {
    pub const TOL: f64 = 1e-12;

    pub fn new(dlambda: Vec<f64>, generator: CMatrix) -> Result<Self> {
        let d = dlambda.len();
        if generator.nrows() != d || generator.ncols() != d {
            return Err(Error::DimensionMismatch(generator.nrows(), d));
        }
        let sum: f64 = dlambda.iter().sum();
        if sum.abs() > Self::TOL {
            return Err(Error::OutOfRange { name: "sum(dlambda)", value: sum, expected: "shifts summing to zero" });
        }
        let skew = (&generator + generator.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if skew > Self::TOL {
            return Err(Error::NotHermitian(skew));
        }
        Ok(SpectralTangent { dlambda, generator })
    }

    pub fn dlambda(&self) -> &[f64] {
        &self.dlambda
    }

    pub fn generator(&self) -> &CMatrix {
        &self.generator
    }

    /// `dρ = U (dΛ + GΛ − ΛG) U†` for `ρ = U Λ U†`.
    pub fn to_direction(&self, lambdas: &[f64], u: &CMatrix) -> Result<TangentDirection> {
        let d = self.dlambda.len();
        if lambdas.len() != d || u.nrows() != d {
            return Err(Error::DimensionMismatch(lambdas.len(), d));
        }
        let inner = CMatrix::from_fn(d, d, |i, j| {
            let rot = self.generator[(i, j)] * (lambdas[j] - lambdas[i]);
            if i == j {
                rot + c(self.dlambda[i], 0.0)
            } else {
                rot
            }
        });
        TangentDirection::new(HermitianMatrix::new(u * inner * u.adjoint())?)
    }
}

/// `Σ_{ij} |X_ij|² w(λ_i, λ_j)` in `ρ`'s eigenbasis. Pairs of zero
/// eigenvalues with a nonzero element leave the state space.
fn spectral_sum<W: Fn(f64, f64) -> f64>(rho: &DensityMatrix, drho: &TangentDirection, weight: W) -> Result<f64> {
    if rho.dim() != drho.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), drho.dim()));
    }
    let eig = rho.eigen();
    let x = drho.matrix().in_basis(&eig.vectors);
    let x = x.as_matrix();
    let cut = eig.support_threshold();
    let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut total = 0.0;
    for i in 0..eig.dim() {
        for j in 0..eig.dim() {
            let (a, b) = (eig.values[i].max(0.0), eig.values[j].max(0.0));
            let e = x[(i, j)].norm_sqr();
            if a <= cut && b <= cut {
                if e.sqrt() > 1e-12 * scale {
                    return Err(Error::SingularDirection(format!(
                        "element ({i},{j}) couples two null eigenvectors"
                    )));
                }
                continue;
            }
            total += e * weight(a, b);
        }
    }
    Ok(total)
}

/// Quantum Chernoff metric `½ Σ |⟨i|dρ|j⟩|² / (√λ_i + √λ_j)²`.
pub fn ds2_qc(rho: &DensityMatrix, drho: &TangentDirection) -> Result<f64> {
    spectral_sum(rho, drho, |a, b| 0.5 / (a.sqrt() + b.sqrt()).powi(2))
}

/// Bures metric `½ Σ |⟨i|dρ|j⟩|² / (λ_i + λ_j)`.
pub fn ds2_bures(rho: &DensityMatrix, drho: &TangentDirection) -> Result<f64> {
    spectral_sum(rho, drho, |a, b| 0.5 / (a + b))
}

/// Metric of the local-measurement measure: half the Bures metric on full-rank
/// states, the Fubini–Study metric on pure states along pure directions.
pub fn ds2_cc(rho: &DensityMatrix, drho: &TangentDirection) -> Result<f64> {
    let rank = rho.rank();
    if rank == rho.dim() {
        return Ok(0.5 * ds2_bures(rho, drho)?);
    }
    if rank == 1 {
        let eig = rho.eigen();
        let x = drho.matrix().in_basis(&eig.vectors);
        let x = x.as_matrix();
        let top = eig.dim() - 1;
        let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let leaks = (0..top).any(|i| (0..top).any(|j| x[(i, j)].norm() > 1e-10 * scale));
        if leaks || x[(top, top)].norm() > 1e-10 * scale {
            return Err(Error::Boundary("direction changes the rank of a pure state".into()));
        }
        return ds2_bures(rho, drho);
    }
    Err(Error::Boundary(format!("rank-{rank} state is neither pure nor full rank")))
}

/// Quantum Chernoff metric in spectral coordinates:
/// `Σ dλ_i²/(8λ_i) + Σ_{i<j} (√λ_i − √λ_j)² |G_ij|²`.
pub fn ds2_spectral_qc(lambdas: &[f64], tangent: &SpectralTangent) -> Result<f64> {
    check_simplex(lambdas)?;
    if lambdas.len() != tangent.dlambda.len() {
        return Err(Error::DimensionMismatch(lambdas.len(), tangent.dlambda.len()));
    }
    let mut total = 0.0;
    for (i, (&l, &dl)) in lambdas.iter().zip(&tangent.dlambda).enumerate() {
        if l <= 0.0 {
            if dl != 0.0 {
                return Err(Error::SingularDirection(format!("eigenvalue {i} is zero but shifts")));
            }
        } else {
            total += dl * dl / (8.0 * l);
        }
        for j in i + 1..lambdas.len() {
            total += (l.sqrt() - lambdas[j].sqrt()).powi(2) * tangent.generator[(i, j)].norm_sqr();
        }
    }
    Ok(total)
}

fn check_simplex(lambdas: &[f64]) -> Result<()> {
    let sum: f64 = lambdas.iter().sum();
    if lambdas.is_empty() || lambdas.iter().any(|&l| l < 0.0 || !l.is_finite()) || (sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidDistribution(format!("not a probability vector (sum {sum})")));
    }
    Ok(())
}

/// Fisher metric on the simplex in coordinates `λ_1 … λ_{d−1}`:
/// `g_ij = δ_ij/λ_i + 1/λ_d`.
pub fn fisher_simplex_metric(lambdas: &[f64]) -> Result<DMatrix<f64>> {
    check_simplex(lambdas)?;
    if lambdas.len() < 2 {
        return Err(Error::InvalidDistribution("need at least two outcomes".into()));
    }
    if lambdas.iter().any(|&l| l <= 0.0) {
        return Err(Error::Boundary("simplex boundary point".into()));
    }
    let d = lambdas.len();
    let last = 1.0 / lambdas[d - 1];
    Ok(DMatrix::from_fn(d - 1, d - 1, |i, j| if i == j { 1.0 / lambdas[i] + last } else { last }))
}

/// Eigenvalue density of the quantum Chernoff prior,
/// `C_d^{−1} Π λ_i^{−1/2} Π_{i<j} (√λ_i − √λ_j)²`.
pub fn eigen_density_qc(lambdas: &[f64], d: usize) -> Result<f64> {
    if lambdas.len() != d {
        return Err(Error::DimensionMismatch(lambdas.len(), d));
    }
    check_simplex(lambdas)?;
    if lambdas.iter().any(|&l| l == 0.0) {
        return Err(Error::Boundary("density diverges at a zero eigenvalue".into()));
    }
    let mut v: f64 = lambdas.iter().map(|l| 1.0 / l.sqrt()).product();
    for i in 0..d {
        for j in i + 1..d {
            v *= (lambdas[i].sqrt() - lambdas[j].sqrt()).powi(2);
        }
    }
    Ok(v / cd_constant(d)?)
}

/// Radial densities of the two qubit priors, angles integrated out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitPriors {
    pub p_cc: f64,
    pub p_qc: f64,
}

/// `1 − √(1 − r²)` without cancellation at small `r`.
fn one_minus_root(r: f64) -> f64 {
    r * r / (1.0 + (1.0 - r * r).sqrt())
}

fn check_open_radius(r: f64) -> Result<()> {
    if r >= 1.0 {
        return Err(Error::Boundary(format!("radial density is singular at r = {r}")));
    }
    check_range("r", r, r >= 0.0, "0 ≤ r < 1")
}

pub fn qubit_priors(r: f64) -> Result<QubitPriors> {
    check_open_radius(r)?;
    let root = (1.0 - r * r).sqrt();
    Ok(QubitPriors {
        p_cc: 4.0 / std::f64::consts::PI * r * r / root,
        p_qc: 2.0 / (std::f64::consts::PI - 2.0) * one_minus_root(r) / root,
    })
}

/// Cumulative distribution of the radial quantum Chernoff prior,
/// `(2/(π−2))(arcsin r − r)`.
pub fn qubit_prior_qc_cdf(r: f64) -> f64 {
    let r = r.clamp(0.0, 1.0);
    2.0 / (std::f64::consts::PI - 2.0) * (r.asin() - r)
}

/// Which qubit metric to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QubitMetric {
    Qc,
    CcMixed,
    CcPure,
}

/// Radial and angular coefficients: `ds² = g_rr dr² + g_angular dΩ²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricCoeffs {
    /// Absent for the pure-state metric, which has no radial direction.
    pub g_rr: Option<f64>,
    pub g_angular: f64,
}

pub fn qubit_metric_coeffs(which: QubitMetric, r: f64) -> Result<MetricCoeffs> {
    if which == QubitMetric::CcPure {
        return Ok(MetricCoeffs { g_rr: None, g_angular: 0.25 });
    }
    if r >= 1.0 {
        return Err(Error::Boundary("radial metric is singular at r = 1".into()));
    }
    check_range("r", r, r >= 0.0, "0 ≤ r < 1")?;
    let g_rr = Some(1.0 / (8.0 * (1.0 - r * r)));
    let g_angular = match which {
        QubitMetric::Qc => one_minus_root(r) / 4.0,
        _ => r * r / 8.0,
    };
    Ok(MetricCoeffs { g_rr, g_angular })
}

/// Geodesic distance of the qubit Chernoff metric. With `r = sin 2τ` the
/// metric is `½(dτ² + sin²τ dΩ²)`, a 3-sphere of radius `1/√2`.
pub fn geodesic_qc_qubit(q0: &QubitState, q1: &QubitState) -> f64 {
    // asin is √-sensitive at 1; radii within roundoff of the sphere are pure
    let tau = |q: &QubitState| {
        let r = q.radius();
        if r >= 1.0 - 4.0 * f64::EPSILON { std::f64::consts::FRAC_PI_4 } else { 0.5 * r.asin() }
    };
    let (t0, t1) = (tau(q0), tau(q1));
    let theta = q0.angle_to(q1);
    let cos = (t0.cos() * t1.cos() + t0.sin() * t1.sin() * theta.cos()).clamp(-1.0, 1.0);
    cos.acos() / std::f64::consts::SQRT_2
}
