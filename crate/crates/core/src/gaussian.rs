//! Single-mode Gaussian states: overlaps, Chernoff bound, closed-form special
//! cases, induced metrics and a truncated Fock-basis oracle.
//!
//! Phase-space conventions: `a = (q + ip)/√2`, the vacuum has covariance `𝟙`,
//! and `ρ(β, ξ, r, φ)` has covariance `γ_β O_φ D_r² O_φᵗ` with
//! `γ_β = coth(β/2)`.

use nalgebra::{DMatrix, Matrix2, Vector2};

use crate::chernoff::{ChernoffResult, Exponent};
use crate::error::{check_range, Error, Result};
use crate::matcore::{c, CMatrix, HermitianMatrix};
use crate::optimize::{golden_section, S_HI, S_LO, S_TOL};
use crate::states::DensityMatrix;

/// Inverse temperature; `Infinite` is the pure-state limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Beta {
    Finite(f64),
    Infinite,
}

impl Beta {
    /// Accepts `f64::INFINITY` as the pure limit.
    pub fn new(beta: f64) -> Result<Self> {
        if beta == f64::INFINITY {
            return Ok(Beta::Infinite);
        }
        check_range("beta", beta, beta > 0.0 && beta.is_finite(), "beta > 0")?;
        Ok(Beta::Finite(beta))
    }

    pub fn value(&self) -> f64 {
        match self {
            Beta::Finite(b) => *b,
            Beta::Infinite => f64::INFINITY,
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, Beta::Infinite)
    }

    /// `γ_β = coth(β/2)`.
    pub fn gamma(&self) -> f64 {
        match self {
            Beta::Finite(b) => 1.0 / (b / 2.0).tanh(),
            Beta::Infinite => 1.0,
        }
    }

    /// `sβ`, the temperature of `ρ^s`.
    fn scaled(&self, s: f64) -> Beta {
        match self {
            Beta::Finite(b) => Beta::Finite(b * s),
            Beta::Infinite => Beta::Infinite,
        }
    }
}

/// A 2×2 real matrix preserving the symplectic form `σ = [[0, 1], [−1, 0]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymplecticMatrix(Matrix2<f64>);

impl SymplecticMatrix {
    pub const TOL: f64 = 1e-12;

    pub fn sigma() -> Matrix2<f64> {
        Matrix2::new(0.0, 1.0, -1.0, 0.0)
    }

    pub fn new(m: Matrix2<f64>) -> Result<Self> {
        let dev = (m * Self::sigma() * m.transpose() - Self::sigma()).abs().max();
        if dev > Self::TOL {
            return Err(Error::OutOfRange { name: "S σ Sᵗ − σ", value: dev, expected: "symplectic matrix" });
        }
        Ok(SymplecticMatrix(m))
    }

    /// Phase-space rotation `O_φ = [[cos φ, sin φ], [−sin φ, cos φ]]`.
    pub fn rotation(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        SymplecticMatrix(Matrix2::new(c, s, -s, c))
    }

    /// `D_r = diag(e^r, e^{−r})`.
    pub fn dilation(r: f64) -> Self {
        SymplecticMatrix(Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp()))
    }

    /// `S_{r,φ} = O_φ D_r O_φᵗ`.
    pub fn squeeze(r: f64, phi: f64) -> Self {
        let o = Self::rotation(phi).0;
        SymplecticMatrix(o * Self::dilation(r).0 * o.transpose())
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.0
    }

    /// `A = S Sᵗ`.
    pub fn gram(&self) -> Matrix2<f64> {
        self.0 * self.0.transpose()
    }
}

/// `ρ(β, ξ, r, φ)`: a thermal state squeezed by `(r, φ)` and displaced to `ξ = (q, p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianState {
    pub beta: Beta,
    pub displacement: [f64; 2],
    pub squeeze_r: f64,
    /// Reduced to `[0, π)`; the squeezer has period `π` in its angle.
    pub squeeze_phi: f64,
}

impl GaussianState {
    pub fn new(beta: f64, displacement: [f64; 2], r: f64, phi: f64) -> Result<Self> {
        let beta = Beta::new(beta)?;
        for x in displacement {
            check_range("displacement", x, x.is_finite(), "finite")?;
        }
        check_range("r", r, r >= 0.0 && r.is_finite(), "r ≥ 0")?;
        check_range("phi", phi, phi.is_finite(), "finite")?;
        let phi = phi.rem_euclid(std::f64::consts::PI);
        Ok(GaussianState { beta, displacement, squeeze_r: r, squeeze_phi: phi })
    }

    pub fn thermal(beta: f64) -> Result<Self> {
        Self::new(beta, [0.0, 0.0], 0.0, 0.0)
    }

    pub fn vacuum() -> Self {
        GaussianState { beta: Beta::Infinite, displacement: [0.0, 0.0], squeeze_r: 0.0, squeeze_phi: 0.0 }
    }

    pub fn symplectic(&self) -> SymplecticMatrix {
        SymplecticMatrix::squeeze(self.squeeze_r, self.squeeze_phi)
    }

    fn xi(&self) -> Vector2<f64> {
        Vector2::new(self.displacement[0], self.displacement[1])
    }

    /// The same state at a different temperature.
    fn with_beta(&self, beta: Beta) -> Self {
        GaussianState { beta, ..*self }
    }
}

/// `Γ = γ_β S_{r,φ} S_{r,φ}ᵗ`.
pub fn covariance(g: &GaussianState) -> Matrix2<f64> {
    g.symplectic().gram() * g.beta.gamma()
}

/// `N_{β,s} = (1 − e^{−β})^s / (1 − e^{−βs})`, so that `ρ_β^s = N_{β,s} ρ_{sβ}`.
pub fn n_beta_s(beta: f64, s: f64) -> Result<f64> {
    let beta = Beta::new(beta)?;
    check_range("s", s, s > 0.0 && s <= 1.0, "0 < s ≤ 1")?;
    Ok(n_beta_s_unchecked(beta, s))
}

fn n_beta_s_unchecked(beta: Beta, s: f64) -> f64 {
    match beta {
        Beta::Infinite => 1.0,
        Beta::Finite(b) => (s * (-(-b).exp_m1()).ln()).exp() / -(-b * s).exp_m1(),
    }
}

/// `2 det(Γ_A + Γ_B)^{−1/2} exp(−δᵗ (Γ_A + Γ_B)^{−1} δ)` for covariances and displacement difference.
fn overlap_from_moments(sum: &Matrix2<f64>, delta: &Vector2<f64>) -> f64 {
    let inv = sum.try_inverse().expect("covariance sums are positive definite");
    2.0 / sum.determinant().sqrt() * (-(delta.transpose() * inv * delta)[0]).exp()
}

/// `tr ρ_A ρ_B`.
pub fn overlap(ga: &GaussianState, gb: &GaussianState) -> f64 {
    overlap_from_moments(&(covariance(ga) + covariance(gb)), &(ga.xi() - gb.xi()))
}

/// `Q_s = tr ρ0^s ρ1^{1−s}` through the rescaled-temperature identity.
pub fn gaussian_q_s(g0: &GaussianState, g1: &GaussianState, s: f64) -> Result<f64> {
    check_range("s", s, s > 0.0 && s < 1.0, "0 < s < 1")?;
    Ok(q_s_unchecked(g0, g1, s))
}

fn q_s_unchecked(g0: &GaussianState, g1: &GaussianState, s: f64) -> f64 {
    let norm = n_beta_s_unchecked(g0.beta, s) * n_beta_s_unchecked(g1.beta, 1.0 - s);
    let a = g0.with_beta(g0.beta.scaled(s));
    let b = g1.with_beta(g1.beta.scaled(1.0 - s));
    norm * overlap(&a, &b)
}

/// Chernoff bound `min_s Q_s`. Gaussian states have full rank unless pure, so
/// the search stays on the interior bracket.
pub fn gaussian_chernoff(g0: &GaussianState, g1: &GaussianState) -> ChernoffResult {
    let f = |s: f64| q_s_unchecked(g0, g1, s);
    let mut best = golden_section(f, S_LO, S_HI, S_TOL);
    let mid = f(0.5);
    if mid < best.value {
        best.x = 0.5;
        best.value = mid;
    }
    let q = best.value.min(1.0);
    ChernoffResult { q, s_star: best.x, exponent: Exponent::from_q(q) }
}

/// `Q` for `ρ` against its copy displaced by `δ`:
/// `exp[−(|δ|²/2)(e^{−2r}cos²θ + e^{2r}sin²θ) tanh(β/4)]`, with `θ` the angle
/// from the squeezing axis to `δ`.
pub fn q_equal_covariance(g: &GaussianState, delta: [f64; 2]) -> f64 {
    let norm2 = delta[0] * delta[0] + delta[1] * delta[1];
    if norm2 == 0.0 {
        return 1.0;
    }
    // δ = O_ϑ (|δ|, 0)ᵗ = |δ|(cos ϑ, −sin ϑ)
    let vartheta = (-delta[1]).atan2(delta[0]);
    let theta = vartheta - g.squeeze_phi;
    let r = g.squeeze_r;
    let weight = (-2.0 * r).exp() * theta.cos().powi(2) + (2.0 * r).exp() * theta.sin().powi(2);
    let t = match g.beta {
        Beta::Finite(b) => (b / 4.0).tanh(),
        Beta::Infinite => 1.0,
    };
    (-norm2 / 2.0 * weight * t).exp()
}

/// `Q` for two states at the same temperature without relative displacement:
/// `[cosh²(r0 − r1) + sin²(φ0 − φ1) sinh 2r0 sinh 2r1]^{−1/2}`, independent of `β`.
pub fn q_isospectral(beta: f64, r0: f64, phi0: f64, r1: f64, phi1: f64) -> Result<f64> {
    Beta::new(beta)?;
    check_range("r0", r0, r0 >= 0.0, "r ≥ 0")?;
    check_range("r1", r1, r1 >= 0.0, "r ≥ 0")?;
    let v = (r0 - r1).cosh().powi(2) + (phi0 - phi1).sin().powi(2) * (2.0 * r0).sinh() * (2.0 * r1).sinh();
    Ok(1.0 / v.sqrt())
}

/// Which Gaussian metric to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaussianMetric {
    Qc,
    Cc,
}

/// Coordinate differentials `(dβ, dq, dp, dr, dφ)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GaussianDifferentials {
    pub dbeta: f64,
    pub dq: f64,
    pub dp: f64,
    pub dr: f64,
    pub dphi: f64,
}

impl GaussianDifferentials {
    pub fn as_array(&self) -> [f64; 5] {
        [self.dbeta, self.dq, self.dp, self.dr, self.dphi]
    }

    pub fn from_array(v: [f64; 5]) -> Self {
        GaussianDifferentials { dbeta: v[0], dq: v[1], dp: v[2], dr: v[3], dphi: v[4] }
    }
}

pub fn ds2_gaussian(which: GaussianMetric, g: &GaussianState, d: &GaussianDifferentials) -> Result<f64> {
    let r = g.squeeze_r;
    let (sin, cos) = g.squeeze_phi.sin_cos();
    // (dq_φ, dp_φ) = (dq, dp) O_φ
    let dq_phi = d.dq * cos - d.dp * sin;
    let dp_phi = d.dq * sin + d.dp * cos;
    let disp = (-2.0 * r).exp() * dq_phi * dq_phi + (2.0 * r).exp() * dp_phi * dp_phi;
    let sq = d.dr * d.dr + (d.dphi * (2.0 * r).sinh()).powi(2);
    match (which, g.beta) {
        (GaussianMetric::Qc, Beta::Infinite) => {
            if d.dbeta != 0.0 {
                return Err(Error::Boundary("temperature direction at a pure state".into()));
            }
            Ok(sq / 2.0 + disp / 2.0)
        }
        (GaussianMetric::Qc, Beta::Finite(b)) => {
            Ok(d.dbeta * d.dbeta / (32.0 * (b / 2.0).sinh().powi(2)) + sq / 2.0 + disp / 2.0 * (b / 4.0).tanh())
        }
        (GaussianMetric::Cc, Beta::Infinite) => {
            Err(Error::WrongRegime("the local-measurement metric formula requires a mixed state".into()))
        }
        (GaussianMetric::Cc, Beta::Finite(b)) => Ok(d.dbeta * d.dbeta / (32.0 * (b / 2.0).sinh().powi(2))
            + disp / 4.0 * (b / 2.0).tanh()
            + sq / 4.0 * (1.0 + 1.0 / b.cosh())),
    }
}

/// Metric tensor over `(β, q, p, r, φ)` recovered from the quadratic form by polarization.
pub fn gaussian_metric_tensor(which: GaussianMetric, g: &GaussianState) -> Result<DMatrix<f64>> {
    let unit = |i: usize| {
        let mut v = [0.0; 5];
        v[i] = 1.0;
        v
    };
    let form = |v: [f64; 5]| ds2_gaussian(which, g, &GaussianDifferentials::from_array(v));
    let mut m = DMatrix::zeros(5, 5);
    for i in 0..5 {
        m[(i, i)] = form(unit(i))?;
    }
    for i in 0..5 {
        for j in 0..i {
            let mut v = unit(i);
            v[j] = 1.0;
            let off = (form(v)? - m[(i, i)] - m[(j, j)]) / 2.0;
            m[(i, j)] = off;
            m[(j, i)] = off;
        }
    }
    Ok(m)
}

/// Unnormalized Jeffreys prior of the Chernoff metric,
/// `tanh(β/4) sinh 2r / (16√2 sinh(β/2))`.
pub fn jeffreys_qc_gaussian(beta: f64, r: f64) -> Result<f64> {
    check_range("beta", beta, beta > 0.0, "beta > 0")?;
    check_range("r", r, r >= 0.0, "r ≥ 0")?;
    if beta == f64::INFINITY {
        return Ok(0.0);
    }
    Ok((beta / 4.0).tanh() / (beta / 2.0).sinh() * (2.0 * r).sinh() / (16.0 * std::f64::consts::SQRT_2))
}

/// Truncated number-basis density matrix together with the discarded mass.
#[derive(Clone, Debug)]
pub struct FockState {
    pub rho: DensityMatrix,
    /// `1 − Σ_{n<cutoff} ⟨n|ρ|n⟩` before renormalization.
    pub tail: f64,
}

pub const MIN_FOCK_CUTOFF: usize = 16;
pub const FOCK_TAIL_LIMIT: f64 = 1e-6;

/// `ρ(β, ξ, r, φ)` in the number basis `|0⟩ … |cutoff − 1⟩`.
///
/// The operators act in a working space twice the cutoff so that the edge of
/// the truncated generators does not reach the returned block.
pub fn fock_oracle(g: &GaussianState, cutoff: usize) -> Result<FockState> {
    fock_oracle_with_limit(g, cutoff, FOCK_TAIL_LIMIT)
}

/// [`fock_oracle`] with a caller-chosen bound on the discarded mass.
pub fn fock_oracle_with_limit(g: &GaussianState, cutoff: usize, tail_limit: f64) -> Result<FockState> {
    check_range("cutoff", cutoff as f64, cutoff >= MIN_FOCK_CUTOFF, "cutoff ≥ 16")?;
    check_range("cutoff", cutoff as f64, cutoff <= 400, "cutoff ≤ 400")?;
    let n = 2 * cutoff;
    let mut thermal = vec![0.0; n];
    match g.beta {
        Beta::Infinite => thermal[0] = 1.0,
        Beta::Finite(b) => {
            let z = -(-b).exp_m1();
            for (k, t) in thermal.iter_mut().enumerate() {
                *t = z * (-b * k as f64).exp();
            }
        }
    }
    let annihilate = CMatrix::from_fn(n, n, |i, j| if j == i + 1 { c((j as f64).sqrt(), 0.0) } else { c(0.0, 0.0) });
    let create = annihilate.adjoint();
    // exp[(r/2)(a†² − a²)] stretches q by e^r
    let r = g.squeeze_r;
    let squeeze = ((&create * &create - &annihilate * &annihilate) * c(r / 2.0, 0.0)).exp();
    // e^{−iφ a†a} turns the stretched axis to (cos φ, −sin φ)
    let rotation = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            c(0.0, -g.squeeze_phi * i as f64).exp()
        } else {
            c(0.0, 0.0)
        }
    });
    let alpha = c(g.displacement[0], g.displacement[1]) / std::f64::consts::SQRT_2;
    let displace = (&create * alpha - &annihilate * alpha.conj()).exp();
    let u = displace * rotation * squeeze;
    let base = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, thermal.iter().map(|&t| c(t, 0.0))));
    let full = &u * base * u.adjoint();
    let block = full.view((0, 0), (cutoff, cutoff)).into_owned();
    let kept: f64 = (0..cutoff).map(|k| block[(k, k)].re).sum();
    let tail = (1.0 - kept).max(0.0);
    if tail > tail_limit {
        return Err(Error::FockTail { tail, limit: tail_limit, cutoff });
    }
    let h = HermitianMatrix::new((&block + block.adjoint()) * c(0.5 / kept, 0.0))?;
    Ok(FockState { rho: DensityMatrix::new(h)?, tail })
}
