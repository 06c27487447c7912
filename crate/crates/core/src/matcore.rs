//! Dense Hermitian linear algebra.
//!
//! Everything downstream works on small (d ≤ ~100) complex Hermitian
//! matrices, so the eigensolver is a plain cyclic Jacobi iteration: slow in
//! the asymptotic sense, but deterministic and accurate to working precision
//! in the small eigenvalues, which matters for fractional powers of
//! near-singular density matrices.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
pub use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Hermiticity tolerance, relative to `max(1, max |entry|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Negative eigenvalues above `-PSD_TOL · max(1, λ_max)` are treated as zero.
pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues at or below `SUPPORT_CUTOFF · λ_max` are outside the support.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

const MAX_SWEEPS: usize = 80;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A validated complex Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    /// Validates `m` and stores its exactly-Hermitian part.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare(m.nrows(), m.ncols()));
        }
        let scale = m.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let mut worst = 0.0_f64;
        for i in 0..m.nrows() {
            for j in i..m.ncols() {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if worst > HERMITIAN_TOL * scale || worst.is_nan() {
            return Err(Error::NotHermitian(worst));
        }
        Ok(Self::from_raw(m))
    }

    /// Symmetrizes without checking; for matrices Hermitian by construction.
    pub(crate) fn from_raw(m: CMatrix) -> Self {
        let adj = m.adjoint();
        HermitianMatrix((m + adj) * c(0.5, 0.0))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        HermitianMatrix(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c(diag[i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        }))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare(n, rows.first().map_or(0, |r| r.len())));
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| c(rows[i][j], 0.0)))
    }

    pub fn identity(dim: usize) -> Self {
        HermitianMatrix(CMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianMatrix(CMatrix::zeros(dim, dim))
    }

    /// Projector `|ψ⟩⟨ψ|` (not normalized).
    pub fn outer(psi: &[Complex64]) -> Self {
        let n = psi.len();
        HermitianMatrix(CMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.0[(i, i)].re).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `U H U†` for a unitary (or any square) `u`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self::from_raw(u * &self.0 * u.adjoint())
    }

    /// `U† H U`, i.e. the matrix expressed in the basis given by the columns of `u`.
    pub fn in_basis(&self, u: &CMatrix) -> Self {
        Self::from_raw(u.adjoint() * &self.0 * u)
    }

    pub fn scale(&self, factor: f64) -> Self {
        HermitianMatrix(&self.0 * c(factor, 0.0))
    }

    /// Real part of `tr(self · other)`; exact for Hermitian pairs.
    pub fn trace_product(&self, other: &HermitianMatrix) -> f64 {
        trace_product(&self.0, &other.0)
    }

    pub fn kron(&self, other: &HermitianMatrix) -> Self {
        HermitianMatrix(self.0.kronecker(&other.0))
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix(&self.0 - &rhs.0)
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

/// Real part of `tr(a b)`.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            let x = a[(i, k)] * b[(k, i)];
            acc += x.re;
        }
    }
    acc
}

/// Pauli matrices σ_x, σ_y, σ_z for `axis` 0, 1, 2.
pub fn pauli(axis: usize) -> HermitianMatrix {
    let z = c(0.0, 0.0);
    let m = match axis {
        0 => [[z, c(1.0, 0.0)], [c(1.0, 0.0), z]],
        1 => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
        2 => [[c(1.0, 0.0), z], [z, c(-1.0, 0.0)]],
        _ => panic!("Pauli axis must be 0, 1 or 2"),
    };
    HermitianMatrix(CMatrix::from_fn(2, 2, |i, j| m[i][j]))
}

/// Spectral decomposition `H = U diag(λ) U†` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// Columns are the eigenvectors.
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Threshold below which eigenvalues count as zero.
    pub fn support_threshold(&self) -> f64 {
        SUPPORT_CUTOFF * self.max_value().max(0.0)
    }

    /// `U diag(f(λ_i)) U†`.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> HermitianMatrix {
        let n = self.dim();
        let u = &self.vectors;
        let fl: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = c(0.0, 0.0);
                for k in 0..n {
                    if fl[k] != 0.0 {
                        acc += u[(i, k)] * u[(j, k)].conj() * fl[k];
                    }
                }
                out[(i, j)] = acc;
            }
        }
        HermitianMatrix::from_raw(out)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map(|l| l)
    }

    /// Rejects spectra with eigenvalues below `-PSD_TOL · max(1, λ_max)`.
    pub fn check_psd(&self) -> Result<()> {
        let min = self.values.first().copied().unwrap_or(0.0);
        if min < -PSD_TOL * self.max_value().abs().max(1.0) {
            return Err(Error::NotPositive(min));
        }
        Ok(())
    }

    /// Fractional power of a PSD matrix. Eigenvalues inside the support
    /// cutoff are zero; `s = 0` yields the support projector.
    pub fn power(&self, s: f64) -> Result<HermitianMatrix> {
        crate::error::check_range("s", s, (0.0..=1.0).contains(&s), "0 ≤ s ≤ 1")?;
        self.check_psd()?;
        let cut = self.support_threshold();
        Ok(self.map(|l| support_pow(l, s, cut)))
    }
}

/// `λ^s` with the support conventions: zero outside the support, `λ^0 = 1` inside.
#[inline]
pub(crate) fn support_pow(l: f64, s: f64, cut: f64) -> f64 {
    if l <= cut {
        0.0
    } else if s == 0.0 {
        1.0
    } else {
        l.powf(s)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn eig_hermitian(h: &HermitianMatrix) -> EigenDecomposition {
    jacobi(h.as_matrix().clone())
}

fn jacobi(mut a: CMatrix) -> EigenDecomposition {
    let n = a.nrows();
    let mut v = CMatrix::identity(n, n);
    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off == 0.0 || !off.is_finite() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Negligible off-diagonal entries are dropped once the sweep
                // has settled (rounding would leave them at the ulp level).
                if sweep > 3 && app.abs() + 100.0 * g == app.abs() && aqq.abs() + 100.0 * g == aqq.abs()
                {
                    a[(p, q)] = c(0.0, 0.0);
                    a[(q, p)] = c(0.0, 0.0);
                    continue;
                }
                let e = apq / g;
                let tau = (aqq - app) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                let ebar = e.conj();
                // A <- A J with J = [[c, s], [-s ē, c ē]] on (p, q).
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * cs - akq * sn * ebar;
                    a[(k, q)] = akp * sn + akq * cs * ebar;
                }
                // A <- J† A.
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * cs - aqk * sn * e;
                    a[(q, k)] = apk * sn + aqk * cs * e;
                }
                a[(p, q)] = c(0.0, 0.0);
                a[(q, p)] = c(0.0, 0.0);
                a[(p, p)] = c(app - t * g, 0.0);
                a[(q, q)] = c(aqq + t * g, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * cs - vkq * sn * ebar;
                    v[(k, q)] = vkp * sn + vkq * cs * ebar;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, k| v[(r, order[k])]);
    EigenDecomposition { values, vectors }
}

/// `ρ^s` for a PSD Hermitian matrix (see [`EigenDecomposition::power`]).
pub fn matrix_power(rho: &HermitianMatrix, s: f64) -> Result<HermitianMatrix> {
    eig_hermitian(rho).power(s)
}

/// Sum of absolute eigenvalues.
pub fn trace_norm(a: &HermitianMatrix) -> f64 {
    eig_hermitian(a).values.iter().map(|l| l.abs()).sum()
}

/// `{A > 0} A`: the restriction of `a` to its strictly positive eigenspace.
pub fn positive_part(a: &HermitianMatrix) -> HermitianMatrix {
    eig_hermitian(a).map(|l| if l > 0.0 { l } else { 0.0 })
}

/// Spectral projector onto the eigenvectors whose eigenvalue satisfies `keep`.
pub fn spectral_projector<F: Fn(f64) -> bool>(a: &HermitianMatrix, keep: F) -> HermitianMatrix {
    eig_hermitian(a).map(|l| if keep(l) { 1.0 } else { 0.0 })
}
