//! Exact error probabilities for `n` identical copies, collective and
//! measure-each-copy, plus rate extrapolation.
//!
//! Collective qubit errors are computed in the total-spin decomposition of
//! `(C²)^{⊗n}`: each spin-`j` block appears with a multiplicity and carries
//! `ρ^{⊗n}` as `V diag(℘^{n/2+m} ℘̄^{n/2−m}) V†`, with `V` the eigenbasis of `n̂·J`.

use rayon::prelude::*;

use crate::error::{check_range, Error, Result};
use crate::localdisc::{induced_distributions, TwoOutcomePovm};
use crate::matcore::{c, eig_hermitian, spectral_projector, CMatrix, Complex64, HermitianMatrix};
use crate::states::{DensityMatrix, QubitState};

pub const MAX_QUBIT_COPIES: u32 = 64;

/// One irreducible block of the `n`-qubit space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpinBlock {
    /// Twice the total spin, so half-integers stay exact.
    pub two_j: u32,
    pub multiplicity: u128,
}

impl SpinBlock {
    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }
}

/// Blocks ordered from `j = n/2` downwards, multiplicities from
/// `m(n, j) = m(n−1, j−½) + m(n−1, j+½)`.
pub fn spin_blocks(n: u32) -> Vec<SpinBlock> {
    // mult[t] is the multiplicity of 2j = t
    let mut mult: Vec<u128> = vec![0, 1];
    for k in 2..=n as usize {
        let mut next = vec![0u128; k + 1];
        for (t, slot) in next.iter_mut().enumerate() {
            let below = if t >= 1 { mult.get(t - 1).copied().unwrap_or(0) } else { 0 };
            let above = mult.get(t + 1).copied().unwrap_or(0);
            *slot = below + above;
        }
        mult = next;
    }
    if n == 0 {
        return vec![SpinBlock { two_j: 0, multiplicity: 1 }];
    }
    (0..mult.len())
        .rev()
        .filter(|&t| mult[t] > 0)
        .map(|t| SpinBlock { two_j: t as u32, multiplicity: mult[t] })
        .collect()
}

/// `n̂·J` in the spin-`j` irrep, basis `m = j, j−1, …, −j`.
fn spin_projection(two_j: u32, axis: [f64; 3]) -> HermitianMatrix {
    let d = two_j as usize + 1;
    let j = two_j as f64 / 2.0;
    let mut m = CMatrix::zeros(d, d);
    for k in 0..d {
        let mk = j - k as f64;
        m[(k, k)] = c(axis[2] * mk, 0.0);
        if k + 1 < d {
            // ⟨m|J+|m−1⟩ with m = mk
            let lower = mk - 1.0;
            let amp = (j * (j + 1.0) - lower * (lower + 1.0)).sqrt();
            // J_x = (J+ + J−)/2, J_y = (J+ − J−)/(2i)
            let z = Complex64::new(axis[0], -axis[1]) * (amp / 2.0);
            m[(k, k + 1)] = z;
            m[(k + 1, k)] = z.conj();
        }
    }
    HermitianMatrix::new(m).expect("spin projection is Hermitian")
}

/// Unit Bloch direction, defaulting to ẑ for the maximally mixed state.
fn axis_of(q: &QubitState) -> [f64; 3] {
    let r = q.radius();
    if r == 0.0 {
        [0.0, 0.0, 1.0]
    } else {
        q.bloch().map(|x| x / r)
    }
}

/// `ρ^{⊗n}` restricted to one spin-`j` block.
fn block_state(q: &QubitState, n: u32, two_j: u32) -> HermitianMatrix {
    let eig = eig_hermitian(&spin_projection(two_j, axis_of(q)));
    let (p, pb) = (q.major_eigenvalue(), 1.0 - q.major_eigenvalue());
    let half_n = n as f64 / 2.0;
    let j = two_j as f64 / 2.0;
    let mut out = eig;
    // ascending eigenvalues of n̂·J are m = −j, …, j
    for (k, v) in out.values.iter_mut().enumerate() {
        let m = -j + k as f64;
        let (up, down) = ((half_n + m).round() as i32, (half_n - m).round() as i32);
        *v = p.powi(up) * pb.powi(down);
    }
    out.reconstruct()
}

fn check_copies(n: u32) -> Result<()> {
    if n < 1 {
        return Err(Error::OutOfRange { name: "n", value: n as f64, expected: "n ≥ 1" });
    }
    Ok(())
}

fn check_prior(pi0: f64) -> Result<()> {
    check_range("pi0", pi0, (0.0..=1.0).contains(&pi0), "0 ≤ pi0 ≤ 1")
}

/// Exact collective error for `n` copies of two mixed qubit states.
pub fn helstrom_ncopy_qubit(q0: &QubitState, q1: &QubitState, n: u32, pi0: f64) -> Result<f64> {
    check_copies(n)?;
    check_prior(pi0)?;
    if n > MAX_QUBIT_COPIES {
        return Err(Error::SizeLimit(format!("n = {n} exceeds {MAX_QUBIT_COPIES} copies")));
    }
    if q0.radius() > 1.0 - 1e-9 || q1.radius() > 1.0 - 1e-9 {
        return Err(Error::WrongRegime("pure input; use pure_ncopy_error".into()));
    }
    let pi1 = 1.0 - pi0;
    let blocks = spin_blocks(n);
    let terms: Vec<f64> = blocks
        .par_iter()
        .map(|b| {
            let b0 = block_state(q0, n, b.two_j);
            let b1 = block_state(q1, n, b.two_j);
            let delta = &(&b1 * pi1) - &(&b0 * pi0);
            let plus = spectral_projector(&delta, |l| l > 0.0);
            let minus = &HermitianMatrix::identity(b.dim()) - &plus;
            // guess ρ1 on the positive part of π1B1 − π0B0
            let err = pi0 * b0.trace_product(&plus) + pi1 * b1.trace_product(&minus);
            b.multiplicity as f64 * err.max(0.0)
        })
        .collect();
    Ok(terms.iter().sum::<f64>().clamp(0.0, 0.5))
}

/// Helstrom error for `n` copies of two pure states with overlap `c = |⟨ψ0|ψ1⟩|²`.
pub fn pure_ncopy_from_overlap(overlap: f64, n: u32, pi0: f64) -> Result<f64> {
    check_copies(n)?;
    check_prior(pi0)?;
    check_range("overlap", overlap, (0.0..=1.0 + 1e-12).contains(&overlap), "0 ≤ overlap ≤ 1")?;
    let x = 4.0 * pi0 * (1.0 - pi0) * overlap.min(1.0).powi(n as i32);
    // (1 − √(1 − x))/2 without cancellation
    Ok(x / (2.0 * (1.0 + (1.0 - x).max(0.0).sqrt())))
}

/// Collective error for `n` copies of two pure qubits.
pub fn pure_ncopy_error(q0: &QubitState, q1: &QubitState, n: u32, pi0: f64) -> Result<f64> {
    if !q0.is_pure() || !q1.is_pure() {
        return Err(Error::WrongRegime("pure_ncopy_error needs pure states".into()));
    }
    let (a, b) = (axis_of(q0), axis_of(q1));
    let overlap = (1.0 + a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) / 2.0;
    pure_ncopy_from_overlap(overlap.clamp(0.0, 1.0), n, pi0)
}

/// Collective error for `n` copies of two kets of any dimension.
pub fn pure_ncopy_error_kets(psi0: &[Complex64], psi1: &[Complex64], n: u32, pi0: f64) -> Result<f64> {
    if psi0.len() != psi1.len() {
        return Err(Error::DimensionMismatch(psi0.len(), psi1.len()));
    }
    for psi in [psi0, psi1] {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidTrace(norm));
        }
    }
    let inner: Complex64 = psi0.iter().zip(psi1).map(|(a, b)| a.conj() * b).sum();
    pure_ncopy_from_overlap(inner.norm_sqr().min(1.0), n, pi0)
}

fn ln_binomials(n: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += ((n - k + 1) as f64).ln() - (k as f64).ln();
        out.push(acc);
    }
    out
}

fn ln_power(k: u32, p: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * p.ln()
    }
}

/// Exact error of the optimal decision on the head count of `n` coin tosses
/// with head probability `p` (hypothesis 0) or `q` (hypothesis 1).
pub fn classical_ncopy_error(p: f64, q: f64, n: u32, pi0: f64) -> Result<f64> {
    check_copies(n)?;
    check_prior(pi0)?;
    for (name, v) in [("p", p), ("q", q)] {
        check_range(name, v, (0.0..=1.0).contains(&v), "0 ≤ value ≤ 1")?;
    }
    let lnc = ln_binomials(n);
    let mut total = 0.0;
    for k in 0..=n {
        let l0 = lnc[k as usize] + ln_power(k, p) + ln_power(n - k, 1.0 - p);
        let l1 = lnc[k as usize] + ln_power(k, q) + ln_power(n - k, 1.0 - q);
        total += (pi0 * l0.exp()).min((1.0 - pi0) * l1.exp());
    }
    Ok(total)
}

/// Error of measuring every copy with the same two-outcome POVM and deciding optimally.
pub fn local_ncopy_error(
    povm: &TwoOutcomePovm,
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    n: u32,
    pi0: f64,
) -> Result<f64> {
    let (p0, p1) = induced_distributions(povm, rho0, rho1)?;
    classical_ncopy_error(p0.probs()[0], p1.probs()[0], n, pi0)
}

/// Least-squares line through `(n, −log P_e)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square deviation of the data from the line.
    pub residual: f64,
}

pub fn rate_extrapolate(points: &[(u32, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::InvalidSpec(format!("need at least 3 points, got {}", points.len())));
    }
    if let Some(&(n, _)) = points.iter().find(|(_, pe)| *pe == 0.0) {
        return Err(Error::ZeroErrorProbability(n));
    }
    if let Some(&(_, pe)) = points.iter().find(|(_, pe)| !(*pe > 0.0 && *pe <= 1.0)) {
        return Err(Error::OutOfRange { name: "pe", value: pe, expected: "0 < pe ≤ 1" });
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0 as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| -p.1.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidSpec("all points share the same n".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    Ok(RateFit { slope, intercept, residual: (ss / k).sqrt() })
}
