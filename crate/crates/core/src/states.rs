//! Validated state representations: density matrices, qubit Bloch vectors
//! and classical outcome distributions.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matcore::{
    c, eig_hermitian, pauli, CMatrix, Complex64, EigenDecomposition, HermitianMatrix,
};

/// Trace and positivity tolerance for density matrices.
pub const STATE_TOL: f64 = 1e-10;
/// Purity threshold used to classify a state as pure.
pub const PURITY_TOL: f64 = 1e-9;

/// A Hermitian, unit-trace, positive semi-definite matrix together with its
/// spectral decomposition (computed once at construction).
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    eigen: EigenDecomposition,
}

impl DensityMatrix {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if (tr - 1.0).abs() > STATE_TOL || !tr.is_finite() {
            return Err(Error::InvalidTrace(tr));
        }
        let mut eigen = eig_hermitian(&matrix);
        let min = eigen.values[0];
        if min < -STATE_TOL {
            return Err(Error::NotPositive(min));
        }
        if min < 0.0 {
            // rounding noise from lossy round-trips: clip and renormalize
            for l in eigen.values.iter_mut() {
                *l = l.max(0.0);
            }
            let total: f64 = eigen.values.iter().sum();
            for l in eigen.values.iter_mut() {
                *l /= total;
            }
            let matrix = eigen.reconstruct();
            return Ok(DensityMatrix { matrix, eigen });
        }
        Ok(DensityMatrix { matrix, eigen })
    }

    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    /// Trusted constructor for states assembled from an already-known spectrum.
    pub(crate) fn from_parts(matrix: HermitianMatrix, eigen: EigenDecomposition) -> Self {
        DensityMatrix { matrix, eigen }
    }

    pub fn from_spec(spec: &StateSpec) -> Result<Self> {
        density_from_spec(spec)
    }

    /// `|ψ⟩⟨ψ|` for a unit vector `psi`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        if psi.is_empty() {
            return Err(Error::InvalidSpec("empty ket".into()));
        }
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidTrace(norm));
        }
        Self::new(HermitianMatrix::outer(psi))
    }

    /// `(𝟙 + r·σ)/2`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        QubitState::new(r).map(|q| q.density())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let m = HermitianMatrix::identity(dim).scale(1.0 / dim as f64);
        DensityMatrix::new(m).expect("maximally mixed state is valid")
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diagonal(probs))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eigen
    }

    /// Eigenvalues in ascending order.
    pub fn spectrum(&self) -> &[f64] {
        &self.eigen.values
    }

    pub fn purity(&self) -> f64 {
        self.eigen.values.iter().map(|l| l * l).sum()
    }

    pub fn is_pure(&self) -> bool {
        self.purity() >= 1.0 - PURITY_TOL
    }

    /// Number of eigenvalues above the support cutoff.
    pub fn rank(&self) -> usize {
        let cut = self.eigen.support_threshold();
        self.eigen.values.iter().filter(|&&l| l > cut).count()
    }

    /// `ρ^s` with the support-projector convention at `s = 0`.
    pub fn power(&self, s: f64) -> Result<HermitianMatrix> {
        self.eigen.power(s)
    }

    /// `UρU†`.
    pub fn rotated(&self, u: &CMatrix) -> Result<Self> {
        DensityMatrix::new(self.matrix.conjugate_by(u))
    }

    pub fn same_dim(&self, other: &DensityMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }
}

/// A single-qubit state by its Bloch vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitState {
    bloch: [f64; 3],
}

impl QubitState {
    pub fn new(bloch: [f64; 3]) -> Result<Self> {
        let len = norm3(&bloch);
        if !len.is_finite() || len > 1.0 + 1e-12 {
            return Err(Error::OutOfRange {
                name: "|bloch|",
                value: len,
                expected: "|r| ≤ 1",
            });
        }
        let bloch = if len > 1.0 { bloch.map(|x| x / len) } else { bloch };
        Ok(QubitState { bloch })
    }

    /// Bloch vector of length `r` in the x-z plane at polar angle `theta` from ẑ.
    pub fn in_xz_plane(r: f64, theta: f64) -> Result<Self> {
        Self::new([r * theta.sin(), 0.0, r * theta.cos()])
    }

    pub fn bloch(&self) -> [f64; 3] {
        self.bloch
    }

    pub fn radius(&self) -> f64 {
        norm3(&self.bloch).min(1.0)
    }

    /// Larger eigenvalue `(1 + r)/2`.
    pub fn major_eigenvalue(&self) -> f64 {
        (1.0 + self.radius()) / 2.0
    }

    /// Angle between the two Bloch vectors; zero when either is the origin.
    pub fn angle_to(&self, other: &QubitState) -> f64 {
        let (a, b) = (self.radius(), other.radius());
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        let dot: f64 = self.bloch.iter().zip(other.bloch.iter()).map(|(x, y)| x * y).sum();
        (dot / (a * b)).clamp(-1.0, 1.0).acos()
    }

    pub fn is_pure(&self) -> bool {
        self.radius() >= 1.0 - PURITY_TOL
    }

    pub fn density(&self) -> DensityMatrix {
        let [x, y, z] = self.bloch;
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                c((1.0 + z) / 2.0, 0.0),
                c(x / 2.0, -y / 2.0),
                c(x / 2.0, y / 2.0),
                c((1.0 - z) / 2.0, 0.0),
            ],
        );
        DensityMatrix::new(HermitianMatrix::from_raw(m)).expect("Bloch ball maps to valid states")
    }

    /// Applies a 3×3 rotation (row-major) to the Bloch vector.
    pub fn rotate(&self, rot: &[[f64; 3]; 3]) -> QubitState {
        let b = self.bloch;
        let out = [0, 1, 2].map(|i| rot[i][0] * b[0] + rot[i][1] * b[1] + rot[i][2] * b[2]);
        QubitState::new(out).expect("rotations preserve length")
    }
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// A probability vector over a finite alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    pub const TOL: f64 = 1e-12;

    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty alphabet".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < -Self::TOL) {
            return Err(Error::InvalidDistribution(format!("negative or non-finite entry {p}")));
        }
        let probs: Vec<f64> = probs.into_iter().map(|p| p.max(0.0)).collect();
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > Self::TOL {
            return Err(Error::InvalidDistribution(format!("sums to {total}")));
        }
        Ok(DiscreteDistribution { probs })
    }

    /// Two-outcome distribution `(p, 1 − p)`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        crate::error::check_range("p", p, (0.0..=1.0).contains(&p), "0 ≤ p ≤ 1")?;
        Self::new(vec![p, 1.0 - p])
    }

    /// Normalizes a nonnegative weight vector.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if total <= 0.0 || !total.is_finite() || weights.iter().any(|w| *w < 0.0) {
            return Err(Error::InvalidDistribution("weights must be nonnegative with positive sum".into()));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Ways of describing a finite-dimensional state.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    /// Explicit matrix, row-major real and imaginary parts.
    Matrix {
        dim: usize,
        re: Vec<Vec<f64>>,
        im: Option<Vec<Vec<f64>>>,
    },
    Bloch([f64; 3]),
    Ket { re: Vec<f64>, im: Option<Vec<f64>> },
}

impl StateSpec {
    /// The described matrix, checked only for shape and hermiticity.
    pub fn hermitian(&self) -> Result<HermitianMatrix> {
        match self {
            StateSpec::Matrix { dim, re, im } => {
                let n = *dim;
                let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
                if n == 0 || !shape_ok(re) || im.as_ref().is_some_and(|m| !shape_ok(m)) {
                    return Err(Error::InvalidSpec(format!("matrix rows must be {n}x{n}")));
                }
                let m = CMatrix::from_fn(n, n, |i, j| {
                    c(re[i][j], im.as_ref().map_or(0.0, |m| m[i][j]))
                });
                HermitianMatrix::new(m)
            }
            StateSpec::Bloch(r) => Ok(QubitState::new(*r)?.density().matrix().clone()),
            StateSpec::Ket { re, im } => {
                if re.is_empty() || im.as_ref().is_some_and(|v| v.len() != re.len()) {
                    return Err(Error::InvalidSpec("ket re/im lengths differ or are empty".into()));
                }
                let psi: Vec<Complex64> = re
                    .iter()
                    .enumerate()
                    .map(|(k, &x)| c(x, im.as_ref().map_or(0.0, |v| v[k])))
                    .collect();
                Ok(HermitianMatrix::outer(&psi))
            }
        }
    }
}

/// Builds and validates a density matrix from its description.
pub fn density_from_spec(spec: &StateSpec) -> Result<DensityMatrix> {
    match spec {
        StateSpec::Bloch(r) => Ok(QubitState::new(*r)?.density()),
        _ => DensityMatrix::new(spec.hermitian()?),
    }
}

/// Bloch vector `r_k = tr(ρ σ_k)` of a qubit state.
pub fn to_bloch(rho: &DensityMatrix) -> Result<QubitState> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch(rho.dim(), 2));
    }
    let r = [0, 1, 2].map(|k| rho.matrix().trace_product(&pauli(k)));
    QubitState::new(r)
}

pub const MAX_TENSOR_DIM: usize = 4096;

/// `ρ^{⊗n}` for small `n`; the spectrum is assembled from the factors.
pub fn tensor_power_small(rho: &DensityMatrix, n: u32) -> Result<DensityMatrix> {
    if !(1..=8).contains(&n) {
        return Err(Error::SizeLimit(format!("tensor power n = {n} outside 1..=8")));
    }
    let d = rho.dim();
    let total = (d as u64).checked_pow(n).unwrap_or(u64::MAX);
    if total > MAX_TENSOR_DIM as u64 {
        return Err(Error::SizeLimit(format!("{d}^{n} = {total} exceeds {MAX_TENSOR_DIM}")));
    }
    let mut m = rho.matrix().as_matrix().clone();
    let mut vecs = rho.eigen().vectors.clone();
    let mut vals = rho.eigen().values.clone();
    for _ in 1..n {
        m = m.kronecker(rho.matrix().as_matrix());
        vecs = vecs.kronecker(&rho.eigen().vectors);
        vals = vals
            .iter()
            .flat_map(|a| rho.eigen().values.iter().map(move |b| a * b))
            .collect();
    }
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    let eigen = EigenDecomposition {
        values: order.iter().map(|&i| vals[i]).collect(),
        vectors: CMatrix::from_fn(vecs.nrows(), vecs.ncols(), |r, k| vecs[(r, order[k])]),
    };
    Ok(DensityMatrix::from_parts(HermitianMatrix::from_raw(m), eigen))
}

/// Random density matrix `GG†/tr(GG†)` from a `dim × rank` complex Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = CMatrix::from_fn(dim, rank.max(1), |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let w = &g * g.adjoint();
    let tr: f64 = (0..dim).map(|i| w[(i, i)].re).sum();
    DensityMatrix::new(HermitianMatrix::from_raw(w * c(1.0 / tr, 0.0))).expect("Ginibre states are valid")
}

/// Uniformly random unit vector in `C^dim`.
pub fn random_ket<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim)
        .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// Uniform point in the Bloch ball.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> QubitState {
    loop {
        let v = [0; 3].map(|_| rng.gen_range(-1.0..1.0));
        if norm3(&v) <= 1.0 {
            return QubitState::new(v).unwrap();
        }
    }
}
