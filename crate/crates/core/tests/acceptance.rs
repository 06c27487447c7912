//! Acceptance checks: one line per criterion, nonzero exit if any fails.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use qchernoff::chernoff::{
    bounds_report, classical_chernoff, fidelity, helstrom_error, quantum_chernoff, quantum_q_s,
    qubit_q_s_closed,
};
use qchernoff::gaussian::{
    fock_oracle, fock_oracle_with_limit, gaussian_chernoff, gaussian_metric_tensor, jeffreys_qc_gaussian,
    q_equal_covariance, q_isospectral, GaussianMetric, GaussianState, FOCK_TAIL_LIMIT,
};
use qchernoff::geometry::{
    cd_constant, ds2_bures, ds2_qc, geodesic_qc_qubit, qubit_priors, qubit_prior_qc_cdf, QcSampler,
    TangentDirection,
};
use qchernoff::localdisc::{d_cc_pure, d_cc_qubit};
use num_complex::Complex64;
use qchernoff::matcore::{eig_hermitian, spectral_projector, trace_norm, CMatrix, HermitianMatrix};
use qchernoff::multicopy::{helstrom_ncopy_qubit, rate_extrapolate};
use qchernoff::states::{
    random_density, random_ket, random_qubit, tensor_power_small, DensityMatrix, DiscreteDistribution,
    QubitState,
};
use qchernoff::Error;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_hermitian<R: Rng>(d: usize, rng: &mut R) -> HermitianMatrix {
    let m = CMatrix::from_fn(d, d, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    HermitianMatrix::new((&m + m.adjoint()) * c(0.5, 0.0)).unwrap()
}

fn c1_constants() -> Outcome {
    let pi = PI;
    let closed = [
        (2, pi - 2.0),
        (3, 8.0 / 35.0 * (pi - 3.0)),
        (4, (6.0 * pi * pi - 29.0 * pi + 32.0) / 6720.0),
        (5, 128.0 * (72.0 * pi * pi - 435.0 * pi + 656.0) / 21_082_276_215.0),
        (6, (9.0 * (480.0 * pi.powi(3) - 3747.0 * pi * pi + 9352.0 * pi) - 65536.0) / 2_023_466_257_612_800.0),
    ];
    let start = Instant::now();
    let values: Vec<f64> = closed.iter().map(|(d, _)| cd_constant(*d).unwrap()).collect();
    let elapsed = start.elapsed().as_secs_f64();
    let worst = closed.iter().zip(&values).map(|((_, e), v)| ((v - e) / e).abs()).fold(0.0, f64::max);
    outcome(
        worst <= 1e-9 && elapsed < 1.0,
        format!("max relative error {worst:.2e} over d = 2..6 (≤ 1e-9), runtime {:.3} s (< 1 s)", elapsed),
    )
}

fn c2_qubit_closed_form() -> Outcome {
    let mut r = rng(2);
    let cases: Vec<(QubitState, QubitState, f64)> =
        (0..10_000).map(|_| (random_qubit(&mut r), random_qubit(&mut r), r.gen::<f64>())).collect();
    let worst = cases
        .par_iter()
        .map(|(a, b, s)| {
            let closed = qubit_q_s_closed(a, b, *s).unwrap();
            let dense = quantum_q_s(&a.density(), &b.density(), *s).unwrap();
            (closed - dense).abs()
        })
        .reduce(|| 0.0, f64::max);
    outcome(worst <= 1e-10, format!("max |closed − dense| = {worst:.2e} on 10⁴ triples (≤ 1e-10)"))
}

fn c3_bound_chain() -> Outcome {
    let mut r = rng(3);
    let pairs: Vec<(DensityMatrix, DensityMatrix)> = (0..10_000)
        .map(|_| {
            let d = r.gen_range(2..=4);
            let (k0, k1) = (r.gen_range(1..=d), r.gen_range(1..=d));
            (random_density(d, k0, &mut r), random_density(d, k1, &mut r))
        })
        .collect();
    let results: Vec<Result<f64, Error>> =
        pairs.par_iter().map(|(a, b)| bounds_report(a, b).map(|rep| rep.min_slack())).collect();
    let failures = results.iter().filter(|x| x.is_err()).count();
    let worst = results.iter().filter_map(|x| x.as_ref().ok()).fold(f64::INFINITY, |m, &v| m.min(v));
    outcome(
        failures == 0 && worst >= -1e-12,
        format!("min slack {worst:.2e} (≥ −1e-12), {failures} ordering errors on 10⁴ pairs, dims 2–4, all ranks"),
    )
}

fn c4_trace_inequalities() -> Outcome {
    let mut r = rng(4);
    let pairs: Vec<(HermitianMatrix, HermitianMatrix)> = (0..10_000)
        .map(|_| {
            let d = r.gen_range(2..=6);
            let (k0, k1) = (r.gen_range(1..=d), r.gen_range(1..=d));
            let (w0, w1) = (r.gen_range(0.1..5.0), r.gen_range(0.1..5.0));
            (
                random_density(d, k0, &mut r).matrix().scale(w0),
                random_density(d, k1, &mut r).matrix().scale(w1),
            )
        })
        .collect();
    let grid: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let (inequality, projected) = pairs
        .par_iter()
        .map(|(a, b)| {
            let (ea, eb) = (eig_hermitian(a), eig_hermitian(b));
            let diff = a - b;
            let rhs = 0.5 * (a.trace() + b.trace() - trace_norm(&diff));
            let proj = spectral_projector(&diff, |l| l >= 0.0);
            let mut worst_t = f64::INFINITY;
            let mut worst_l = f64::INFINITY;
            for &s in &grid {
                let lhs = ea.power(s).unwrap().trace_product(&eb.power(1.0 - s).unwrap());
                worst_t = worst_t.min(lhs - rhs);
                let delta = ea.power(s).unwrap().as_matrix() - eb.power(s).unwrap().as_matrix();
                let v = (proj.as_matrix() * b.as_matrix() * delta).trace().re;
                worst_l = worst_l.min(v);
            }
            (worst_t, worst_l)
        })
        .reduce(|| (f64::INFINITY, f64::INFINITY), |x, y| (x.0.min(y.0), x.1.min(y.1)));
    outcome(
        inequality >= -1e-12 && projected >= -1e-12,
        format!(
            "min tr A^s B^(1−s) − ½tr(A+B−|A−B|) = {inequality:.2e}, min tr[{{A−B≥0}}B(A^t−B^t)] = {projected:.2e} \
             (≥ −1e-12) on 10⁴ pairs, dims 2–6, s,t ∈ {{0.1..0.9}}"
        ),
    )
}

fn c5_pure_identity() -> Outcome {
    let mut r = rng(5);
    let pairs: Vec<(DensityMatrix, DensityMatrix)> = (0..1000)
        .map(|_| {
            let d = r.gen_range(2..=4);
            let k = r.gen_range(1..=d);
            (DensityMatrix::pure(&random_ket(d, &mut r)).unwrap(), random_density(d, k, &mut r))
        })
        .collect();
    let worst = pairs
        .par_iter()
        .map(|(a, b)| {
            let e = quantum_chernoff(a, b).unwrap().exponent.value();
            (e + fidelity(a, b).unwrap().ln()).abs()
        })
        .reduce(|| 0.0, f64::max);
    outcome(worst <= 1e-8, format!("max |D_QC + log F| = {worst:.2e} on 10³ pure/random pairs (≤ 1e-8)"))
}

fn c6_commuting() -> Outcome {
    let mut r = rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let d = r.gen_range(2..=6);
        let w0: Vec<f64> = (0..d).map(|_| r.gen_range(0.0..1.0)).collect();
        let w1: Vec<f64> = (0..d).map(|_| r.gen_range(0.0..1.0)).collect();
        let (p0, p1) = (DiscreteDistribution::from_weights(&w0).unwrap(), DiscreteDistribution::from_weights(&w1).unwrap());
        let cl = classical_chernoff(&p0, &p1).unwrap().exponent.value();
        let qu = quantum_chernoff(
            &DensityMatrix::diagonal(p0.probs()).unwrap(),
            &DensityMatrix::diagonal(p1.probs()).unwrap(),
        )
        .unwrap()
        .exponent
        .value();
        worst = worst.max((cl - qu).abs());
    }
    outcome(worst <= 1e-10, format!("max |quantum − classical| = {worst:.2e} on 2000 diagonal pairs, dims 2–6 (≤ 1e-10)"))
}

fn c7_ncopy() -> Outcome {
    let start = Instant::now();
    let mut r = rng(7);
    let mut dense_worst: f64 = 0.0;
    for _ in 0..20 {
        let (a, b) = (random_qubit(&mut r), random_qubit(&mut r));
        for n in 1..=6 {
            let engine = helstrom_ncopy_qubit(&a, &b, n, 0.5).unwrap();
            let dense = helstrom_error(
                &tensor_power_small(&a.density(), n).unwrap(),
                &tensor_power_small(&b.density(), n).unwrap(),
                0.5,
            )
            .unwrap();
            dense_worst = dense_worst.max((engine - dense).abs());
        }
    }
    let a = QubitState::in_xz_plane(0.9, 0.0).unwrap();
    let b = QubitState::in_xz_plane(0.9, FRAC_PI_2).unwrap();
    let points: Vec<(u32, f64)> = (30..=35).map(|n| (n, helstrom_ncopy_qubit(&a, &b, n, 0.5).unwrap())).collect();
    let fit = rate_extrapolate(&points).unwrap();
    let d_qc = quantum_chernoff(&a.density(), &b.density()).unwrap().exponent.value();
    let f = fidelity(&a.density(), &b.density()).unwrap();
    let (lo, hi) = (-0.5 * f.ln(), -f.ln());
    let rel = (fit.slope - d_qc).abs() / d_qc;
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        dense_worst <= 1e-10 && rel <= 0.05 && lo <= fit.slope && fit.slope <= hi && elapsed < 5.0,
        format!(
            "engine vs dense n ≤ 6: {dense_worst:.2e} (≤ 1e-10); slope n=30..35 {:.6} vs D_QC {d_qc:.6} ({:.2}% ≤ 5%), \
             fidelity sandwich [{lo:.6}, {hi:.6}]; runtime {elapsed:.2} s (< 5 s)",
            fit.slope,
            100.0 * rel
        ),
    )
}

fn c8_local() -> Outcome {
    let grid: Vec<f64> = (1..=19).map(|k| k as f64 * 0.05).chain([0.97, 0.99, 0.995, 0.999]).collect();
    let rows: Vec<(f64, f64, f64, f64)> = grid
        .par_iter()
        .map(|&r| {
            let a = QubitState::in_xz_plane(r, 0.0).unwrap();
            let b = QubitState::in_xz_plane(r, FRAC_PI_2).unwrap();
            let lo = -0.5 * fidelity(&a.density(), &b.density()).unwrap().ln();
            let hi = quantum_chernoff(&a.density(), &b.density()).unwrap().exponent.value();
            (r, lo, d_cc_qubit(&a, &b).unwrap().d_cc, hi)
        })
        .collect();
    let sandwich = rows.iter().map(|&(_, lo, d, hi)| (d - lo).min(hi - d)).fold(f64::INFINITY, f64::min);
    let equality = rows.iter().filter(|row| row.0 <= 0.5).map(|&(_, lo, d, _)| (d - lo).abs()).fold(0.0, f64::max);
    let a = QubitState::in_xz_plane(1.0, 0.0).unwrap();
    let b = QubitState::in_xz_plane(1.0, FRAC_PI_2).unwrap();
    let endpoint = d_cc_pure(&a.density(), &b.density()).unwrap().value();
    let end_err = (endpoint - 2f64.ln()).abs();
    outcome(
        sandwich >= -1e-9 && equality <= 1e-6 && end_err <= 1e-9,
        format!(
            "min sandwich slack {sandwich:.2e} (≥ −1e-9) on {} radii; max |d_cc + ½log F| for r ≤ 0.5 {equality:.2e} (≤ 1e-6); \
             |d_cc(r=1) − log 2| {end_err:.2e} (≤ 1e-9)",
            rows.len()
        ),
    )
}

fn c9_metric_measure() -> Outcome {
    let mut r = rng(9);
    let eps = 1e-3;
    let cases: Vec<(DensityMatrix, HermitianMatrix)> = (0..100)
        .map(|_| {
            let d = r.gen_range(2..=4);
            let base = random_density(d, d, &mut r);
            // keep ρ ± εdρ inside the state space
            let mixed = &(base.matrix() * 0.9) + &(&HermitianMatrix::identity(d) * (0.1 / d as f64));
            let h = random_hermitian(d, &mut r);
            let traceless = &h - &(&HermitianMatrix::identity(d) * (h.trace() / d as f64));
            let norm = traceless.as_matrix().norm();
            (DensityMatrix::new(mixed).unwrap(), traceless.scale(1.0 / norm))
        })
        .collect();
    let worst = cases
        .par_iter()
        .map(|(rho, dir)| {
            let moved = DensityMatrix::new(rho.matrix() + &dir.scale(eps)).unwrap();
            let one_minus_q = 1.0 - quantum_chernoff(rho, &moved).unwrap().q;
            let ds2 = ds2_qc(rho, &TangentDirection::new(dir.scale(eps)).unwrap()).unwrap();
            (one_minus_q / ds2 - 1.0).abs()
        })
        .reduce(|| 0.0, f64::max);
    outcome(worst <= 0.01, format!("max relative gap |(1 − Q)/ds² − 1| = {worst:.2e} on 100 pairs at ε = 1e-3 (≤ 1%)"))
}

/// Least-squares slope of `log y` against `log x`.
fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

fn c10_interpolation() -> Outcome {
    let mut r = rng(10);
    // toward a pure state: λ = (1 − t, t·w)
    let mut pure_gap: f64 = 0.0;
    let mut pure_monotone = true;
    for d in [2, 3, 4] {
        let w: Vec<f64> = (1..d).map(|_| r.gen_range(0.2..1.0)).collect();
        let ws: f64 = w.iter().sum();
        let u = qchernoff::geometry::sample_haar_unitary(d, &mut r);
        let h = random_hermitian(d, &mut r);
        let mut last = 0.0;
        for k in 1..=9 {
            let t = 10f64.powi(-k);
            let mut l: Vec<f64> = w.iter().map(|x| t * x / ws).collect();
            l.push(1.0 - t);
            let rho = DensityMatrix::new(HermitianMatrix::from_real_diagonal(&l).conjugate_by(&u)).unwrap();
            let dir = TangentDirection::unitary(&rho, &h).unwrap();
            let ratio = ds2_qc(&rho, &dir).unwrap() / ds2_bures(&rho, &dir).unwrap();
            pure_monotone &= ratio > last;
            last = ratio;
        }
        pure_gap = pure_gap.max(1.0 - last);
    }
    // toward 𝟙/d: λ = 1/d + εδ
    let eps: Vec<f64> = (0..6).map(|k| 0.1 / 2f64.powi(k)).collect();
    let mut min_order = f64::INFINITY;
    let mut half_gap: f64 = 0.0;
    for d in [2, 3, 4, 5] {
        for _ in 0..3 {
            let mut delta: Vec<f64> = (0..d).map(|_| r.gen_range(-1.0..1.0)).collect();
            let mean = delta.iter().sum::<f64>() / d as f64;
            delta.iter_mut().for_each(|x| *x -= mean);
            let u = qchernoff::geometry::sample_haar_unitary(d, &mut r);
            let h = random_hermitian(d, &mut r);
            let mut diffs = Vec::new();
            for &e in &eps {
                let l: Vec<f64> = delta.iter().map(|x| 1.0 / d as f64 + e * x).collect();
                let rho = DensityMatrix::new(HermitianMatrix::from_real_diagonal(&l).conjugate_by(&u)).unwrap();
                let dir = TangentDirection::unitary(&rho, &h).unwrap();
                let (qc, bu) = (ds2_qc(&rho, &dir).unwrap(), ds2_bures(&rho, &dir).unwrap());
                diffs.push((qc - 0.5 * bu).abs());
                if e == eps[5] {
                    half_gap = half_gap.max((qc / bu - 0.5).abs());
                }
            }
            min_order = min_order.min(log_slope(&eps, &diffs));
        }
    }
    outcome(
        pure_monotone && pure_gap < 1e-3 && half_gap < 1e-3 && min_order >= 2.5,
        format!(
            "near pure: ratio rises monotonically to 1 − {pure_gap:.1e} at λ_min = 1e-9; near 𝟙/d: |ratio − ½| {half_gap:.1e} \
             at ε = {:.2e}, fitted order of ds²_QC − ½ds²_BU min {min_order:.2} over d = 2..5 (≥ 2.5)",
            eps[5]
        ),
    )
}

/// Smallest admissible cutoff from 80 upward in steps of 40.
fn oracle(g: &GaussianState) -> (DensityMatrix, usize) {
    let mut cutoff = 80;
    loop {
        match fock_oracle(g, cutoff) {
            Ok(f) => return (f.rho, cutoff),
            Err(Error::FockTail { .. }) => cutoff += 40,
            Err(e) => panic!("{e}"),
        }
    }
}

fn c11_gaussian() -> Outcome {
    let delta_dir = 0.7f64;
    let mut eq_pairs = Vec::new();
    let mut iso_pairs = Vec::new();
    for beta in [0.5, 1.0, 2.0, 5.0] {
        for r in [0.0, 0.5, 1.0] {
            for len in [0.0, 1.0, 2.0] {
                let delta = [len * delta_dir.cos(), len * delta_dir.sin()];
                let g = GaussianState::new(beta, [0.1, -0.2], r, 0.4).unwrap();
                let h = GaussianState::new(beta, [0.1 - delta[0], -0.2 - delta[1]], r, 0.4).unwrap();
                eq_pairs.push((g, h, delta));
            }
            let a = GaussianState::new(beta, [0.0, 0.0], r, 0.3).unwrap();
            let b = GaussianState::new(beta, [0.0, 0.0], 0.5, 1.3).unwrap();
            iso_pairs.push((a, b));
        }
    }
    let closed: Vec<(f64, f64)> = eq_pairs
        .iter()
        .map(|(g, h, d)| (q_equal_covariance(g, *d), gaussian_chernoff(g, h).q))
        .chain(iso_pairs.iter().map(|(a, b)| {
            let q = q_isospectral(a.beta.value(), a.squeeze_r, a.squeeze_phi, b.squeeze_r, b.squeeze_phi).unwrap();
            (q, gaussian_chernoff(a, b).q)
        }))
        .collect();
    let closed_gap = closed.iter().map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let dense_pairs: Vec<(GaussianState, GaussianState, f64)> = eq_pairs
        .iter()
        .map(|(g, h, d)| (*g, *h, q_equal_covariance(g, *d)))
        .chain(iso_pairs.iter().map(|(a, b)| {
            (*a, *b, q_isospectral(a.beta.value(), a.squeeze_r, a.squeeze_phi, b.squeeze_r, b.squeeze_phi).unwrap())
        }))
        .collect();
    let dense: Vec<(f64, usize, bool)> = dense_pairs
        .par_iter()
        .map(|(a, b, q)| {
            let ((ra, ca), (rb, cb)) = (oracle(a), oracle(b));
            let cutoff = ca.max(cb);
            let (ra, rb) = if ca == cb {
                (ra, rb)
            } else {
                (fock_oracle(a, cutoff).unwrap().rho, fock_oracle(b, cutoff).unwrap().rho)
            };
            // the guard must be what moved the cutoff
            let guarded = cutoff == 80
                || matches!(fock_oracle_with_limit(a, 80, FOCK_TAIL_LIMIT), Err(Error::FockTail { .. }))
                || matches!(fock_oracle_with_limit(b, 80, FOCK_TAIL_LIMIT), Err(Error::FockTail { .. }));
            ((quantum_chernoff(&ra, &rb).unwrap().q - q).abs(), cutoff, guarded)
        })
        .collect();
    let dense_gap = dense.iter().map(|x| x.0).fold(0.0, f64::max);
    let raised = dense.iter().filter(|x| x.1 > 80).count();
    let max_cutoff = dense.iter().map(|x| x.1).max().unwrap();
    let guards_ok = dense.iter().all(|x| x.2);
    let qs: Vec<f64> = [0.5, 1.0, 5.0]
        .iter()
        .map(|&b| {
            let a = GaussianState::new(b, [0.0, 0.0], 0.7, 0.2).unwrap();
            let c = GaussianState::new(b, [0.0, 0.0], 0.3, 1.1).unwrap();
            gaussian_chernoff(&a, &c).q
        })
        .collect();
    let spread = qs.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v)) - qs.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    outcome(
        closed_gap <= 1e-8 && dense_gap <= 1e-4 && guards_ok && spread <= 1e-10,
        format!(
            "closed forms vs minimized Q_s {closed_gap:.2e} (≤ 1e-8); vs number-basis oracle {dense_gap:.2e} (≤ 1e-4) on {} pairs \
             over β ∈ [0.5, 5], r ≤ 1, |δ| ≤ 2, cutoff 80 except {raised} pairs whose tail mass exceeds 1e-6 there \
             (raised up to {max_cutoff}); isospectral Q spread over β ∈ {{0.5, 1, 5}} {spread:.2e} (≤ 1e-10)",
            dense.len()
        ),
    )
}

/// Asymptotic Kolmogorov p-value with the usual finite-sample correction.
fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    let mut p = 0.0;
    for k in 1..=100 {
        let term = 2.0 * (-1f64).powi(k - 1) * (-2.0 * (k as f64).powi(2) * lambda * lambda).exp();
        p += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    p.clamp(0.0, 1.0)
}

fn c12_priors() -> Outcome {
    // Gauss–Legendre on r = sin u, which removes the endpoint singularity
    let nodes = [
        (0.0, 0.568_888_888_888_888_9),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    let panels = 4000;
    let h = FRAC_PI_2 / panels as f64;
    let mut integral = 0.0;
    for k in 0..panels {
        let mid = (k as f64 + 0.5) * h;
        for (x, w) in nodes {
            let u = mid + x * h / 2.0;
            integral += w * h / 2.0 * qubit_priors(u.sin()).unwrap().p_qc * u.cos();
        }
    }
    let norm_err = (integral - 1.0).abs();

    let n = 100_000;
    let sampler = QcSampler::new(2).unwrap();
    let mut radii: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(12);
            r.set_stream(i as u64);
            let l = sampler.sample_spectrum(&mut r).unwrap();
            (l[0] - l[1]).abs()
        })
        .collect();
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let d = radii
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = qubit_prior_qc_cdf(x);
            (f - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - f).abs())
        })
        .fold(0.0, f64::max);
    let p = ks_p_value(d, n);

    let mut jeff_err: f64 = 0.0;
    for beta in [0.25, 0.5, 1.0, 2.0, 5.0, 10.0] {
        for r in [0.1, 0.5, 1.0, 2.0] {
            let g = GaussianState::new(beta, [0.3, -0.1], r, 0.8).unwrap();
            let det = gaussian_metric_tensor(GaussianMetric::Qc, &g).unwrap().determinant();
            let j = jeffreys_qc_gaussian(beta, r).unwrap();
            jeff_err = jeff_err.max((det.sqrt() - j).abs() / j);
        }
    }
    outcome(
        norm_err <= 1e-6 && p > 0.01 && jeff_err <= 1e-9,
        format!(
            "|∫p_qc − 1| {norm_err:.2e} (≤ 1e-6); KS D = {d:.2e}, p = {p:.3} on 10⁵ samples (> 0.01); \
             Jeffreys vs √det metric max relative {jeff_err:.2e} on 24 (β, r) points (≤ 1e-9)"
        ),
    )
}

fn c13_geodesic() -> Outcome {
    let mut r = rng(13);
    let mut asym: f64 = 0.0;
    let mut triangle = f64::INFINITY;
    for _ in 0..10_000 {
        let (a, b, c) = (random_qubit(&mut r), random_qubit(&mut r), random_qubit(&mut r));
        asym = asym.max((geodesic_qc_qubit(&a, &b) - geodesic_qc_qubit(&b, &a)).abs());
        triangle = triangle.min(geodesic_qc_qubit(&a, &b) + geodesic_qc_qubit(&b, &c) - geodesic_qc_qubit(&a, &c));
    }
    let mut antipodal: f64 = 0.0;
    for _ in 0..100 {
        let v: [f64; 3] = [0; 3].map(|_| r.gen_range(-1.0..1.0));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let p = QubitState::new(v.map(|x| x / n)).unwrap();
        let q = QubitState::new(v.map(|x| -x / n)).unwrap();
        antipodal = antipodal.max((geodesic_qc_qubit(&p, &q) - PI / (2.0 * SQRT_2)).abs());
    }
    outcome(
        asym <= 1e-12 && triangle >= -1e-12 && antipodal <= 1e-12,
        format!(
            "max asymmetry {asym:.2e}, min triangle slack {triangle:.2e} on 10⁴ triples; \
             antipodal pure pairs |d − π/(2√2)| {antipodal:.2e} (≤ 1e-12)"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("constants", c1_constants),
        ("qubit closed form", c2_qubit_closed_form),
        ("bound chain", c3_bound_chain),
        ("positive-operator trace inequalities", c4_trace_inequalities),
        ("pure-state identity", c5_pure_identity),
        ("commuting reduction", c6_commuting),
        ("n-copy engine", c7_ncopy),
        ("local measurements", c8_local),
        ("metric-measure consistency", c9_metric_measure),
        ("interpolation", c10_interpolation),
        ("gaussian", c11_gaussian),
        ("priors", c12_priors),
        ("geodesic", c13_geodesic),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} [{}] {}: {} ({:.2} s)",
            k + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
