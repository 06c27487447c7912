//! Haar unitaries and random density matrices distributed by the
//! Chernoff-metric volume.

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{check_range, Error, Result};
use crate::matcore::{c, CMatrix, Complex64, HermitianMatrix};
use crate::states::DensityMatrix;

/// Haar-random `d × d` unitary: QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn sample_haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let z = CMatrix::from_fn(d, d, |_, _| {
        c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DVector::from_iterator(
        d,
        (0..d).map(|i| {
            let x = r[(i, i)];
            if x.norm() > 0.0 {
                x / x.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        }),
    );
    q * CMatrix::from_diagonal(&phases)
}

/// `Π_{i<j} (x_i − x_j)²`, the ratio of the eigenvalue density (in `x = √λ`)
/// to the Dirichlet(1/2) proposal.
fn vandermonde_sq(x: &[f64]) -> f64 {
    let mut v = 1.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            v *= (x[i] - x[j]).powi(2);
        }
    }
    v
}

struct NegVandermonde;

impl CostFunction for NegVandermonde {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, y: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        let x: Vec<f64> = y.iter().map(|v| v.abs() / norm).collect();
        Ok(-vandermonde_sq(&x))
    }
}

/// Maximum of `Π (√λ_i − √λ_j)²` over the simplex, found numerically.
pub fn envelope_max(d: usize) -> f64 {
    if d < 2 {
        return 1.0;
    }
    let starts: [Box<dyn Fn(usize) -> f64>; 3] =
        [Box::new(|i| i as f64), Box::new(|i| (i as f64).sqrt()), Box::new(|i| (i * i) as f64 + 0.5)];
    let mut best: f64 = 0.0;
    for start in starts {
        let x0: Vec<f64> = (0..d).map(&start).collect();
        let mut simplex = vec![x0.clone()];
        for i in 0..d {
            let mut v = x0.clone();
            v[i] += 0.25 + 0.1 * i as f64;
            simplex.push(v);
        }
        let solver = NelderMead::new(simplex).with_sd_tolerance(1e-14).expect("valid tolerance");
        if let Ok(res) = Executor::new(NegVandermonde, solver).configure(|s| s.max_iters(20_000)).run() {
            best = best.max(-res.state().best_cost);
        }
    }
    best
}

pub const ENVELOPE_SAFETY: f64 = 1.1;
pub const DEFAULT_PROPOSAL_BUDGET: u64 = 10_000_000;

/// Rejection sampler for the eigenvalue density `∝ Π λ_i^{−1/2} Π (√λ_i − √λ_j)²`.
///
/// Proposals are Dirichlet(1/2), i.e. `λ_i = g_i²/Σ g²` for Gaussian `g`,
/// which absorbs the `λ^{−1/2}` factor; the acceptance ratio is the
/// Vandermonde factor against its numerically maximized envelope.
#[derive(Clone, Debug)]
pub struct QcSampler {
    d: usize,
    envelope: f64,
    budget: u64,
}

impl QcSampler {
    pub fn new(d: usize) -> Result<Self> {
        check_range("d", d as f64, (2..=64).contains(&d), "2 ≤ d ≤ 64")?;
        // every factor is at most 1, so the ratio never exceeds 1
        let envelope = (ENVELOPE_SAFETY * envelope_max(d)).min(1.0);
        Ok(QcSampler { d, envelope, budget: DEFAULT_PROPOSAL_BUDGET })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget.max(1);
        self
    }

    pub fn envelope(&self) -> f64 {
        self.envelope
    }

    /// Unordered eigenvalues.
    pub fn sample_spectrum<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<f64>> {
        for _ in 0..self.budget {
            let g: Vec<f64> = (0..self.d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let norm2: f64 = g.iter().map(|x| x * x).sum();
            let x: Vec<f64> = g.iter().map(|v| v.abs() / norm2.sqrt()).collect();
            let u: f64 = rng.gen();
            if u * self.envelope <= vandermonde_sq(&x) {
                return Ok(x.iter().map(|v| v * v).collect());
            }
        }
        Err(Error::RejectionBudget { rate: 0.0, tries: self.budget })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<DensityMatrix> {
        let lambdas = self.sample_spectrum(rng)?;
        let u = sample_haar_unitary(self.d, rng);
        let rho = HermitianMatrix::from_real_diagonal(&lambdas).conjugate_by(&u);
        // the diagonal sums to one only up to rounding
        let tr = rho.trace();
        DensityMatrix::new(rho.scale(1.0 / tr))
    }
}

/// Random density matrix distributed by the quantum Chernoff volume element.
pub fn sample_density_qc<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<DensityMatrix> {
    QcSampler::new(d)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_outputs_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..7 {
            let u = sample_haar_unitary(d, &mut rng);
            let err = (u.adjoint() * &u - CMatrix::identity(d, d)).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < 1e-12);
        }
    }

    #[test]
    fn haar_is_deterministic_per_seed() {
        let a = sample_haar_unitary(3, &mut ChaCha8Rng::seed_from_u64(5));
        let b = sample_haar_unitary(3, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
    }

    #[test]
    fn haar_first_entry_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let d = 4;
        let n = 20_000;
        let mean: f64 = (0..n).map(|_| sample_haar_unitary(d, &mut rng)[(0, 0)].norm_sqr()).sum::<f64>() / n as f64;
        // variance of |U11|² is (d−1)/(d²(d+1))
        let sd = ((d as f64 - 1.0) / ((d * d) as f64 * (d as f64 + 1.0)) / n as f64).sqrt();
        assert!((mean - 0.25).abs() < 5.0 * sd);
    }

    #[test]
    fn envelope_values() {
        assert!((envelope_max(2) - 1.0).abs() < 1e-9);
        for d in 3..6 {
            let m = envelope_max(d);
            assert!(m > 0.0 && m < 1.0);
        }
    }

    #[test]
    fn samples_are_valid_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 2..5 {
            let s = QcSampler::new(d).unwrap();
            for _ in 0..50 {
                let rho = s.sample(&mut rng).unwrap();
                assert_eq!(rho.dim(), d);
                assert!(rho.spectrum()[0] >= 0.0);
            }
        }
    }

    #[test]
    fn mean_state_is_maximally_mixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = QcSampler::new(3).unwrap();
        let n = 20_000;
        let mut acc = CMatrix::zeros(3, 3);
        for _ in 0..n {
            acc += s.sample(&mut rng).unwrap().matrix().as_matrix();
        }
        acc /= c(n as f64, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 / 3.0 } else { 0.0 };
                assert!((acc[(i, j)] - c(target, 0.0)).norm() < 0.01);
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let s = QcSampler::new(8).unwrap().with_budget(1);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let failures = (0..20).filter(|_| s.sample_spectrum(&mut rng).is_err()).count();
        assert!(failures > 0);
    }
}
