//! Polynomials orthonormal under `∫_0^∞ e^{−t²} dt` and the volume constants `C_d`.
//!
//! Gram–Schmidt on monomials is badly conditioned, so everything runs in
//! 192-bit binary floating point and is rounded to `f64` only at the end.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;

use crate::error::{check_range, Result};

type Big = FBig<HalfEven, 2>;

const PRECISION: usize = 192;
const SQRT_PI_DIGITS: &str = "1772453850905516027298167483341145182797549456122387128213807789852911";

pub const MAX_CD_DIM: usize = 10;

fn big(x: i64) -> Big {
    Big::from(x).with_precision(PRECISION).value()
}

fn sqrt_pi() -> Big {
    let digits = IBig::from_str_radix(SQRT_PI_DIGITS, 10).expect("valid digits");
    let scale = IBig::from(10u8).pow(SQRT_PI_DIGITS.len() - 1);
    Big::from(digits).with_precision(PRECISION).value() / Big::from(scale).with_precision(PRECISION).value()
}

fn factorial(n: u64) -> Big {
    (1..=n as i64).fold(big(1), |acc, k| acc * big(k))
}

/// `Γ(k/2)` for a positive integer `k`.
fn gamma_half(k: u64) -> Big {
    if k % 2 == 0 {
        factorial(k / 2 - 1)
    } else {
        // Γ(m + 1/2) = (2m)! √π / (4^m m!)
        let m = (k - 1) / 2;
        factorial(2 * m) * sqrt_pi() / (factorial(m) * big(4).powi(m.into()))
    }
}

/// `∫_0^∞ t^n e^{−t²} dt = Γ((n+1)/2)/2`.
fn moment(n: usize) -> Big {
    gamma_half(n as u64 + 1) / big(2)
}

fn to_f64(x: &Big) -> f64 {
    x.to_f64().value()
}

/// `P_0 … P_degree`, orthonormal on the half line with weight `e^{−t²}`.
#[derive(Clone, Debug)]
pub struct PolynomialBasis {
    pub degree: usize,
    /// Leading coefficients `a_k` of `P_k`.
    pub leading_coeffs: Vec<f64>,
    /// `coeffs[k][i]` multiplies `t^i` in `P_k`.
    pub coeffs: Vec<Vec<f64>>,
    exact: Vec<Vec<Big>>,
    moments: Vec<Big>,
}

impl PolynomialBasis {
    pub fn new(degree: usize) -> Self {
        let moments: Vec<Big> = (0..=2 * degree).map(moment).collect();
        let inner = |p: &[Big], q: &[Big]| {
            let mut acc = big(0);
            for (i, a) in p.iter().enumerate() {
                for (j, b) in q.iter().enumerate() {
                    acc += a * b * &moments[i + j];
                }
            }
            acc
        };
        let mut exact: Vec<Vec<Big>> = Vec::with_capacity(degree + 1);
        for k in 0..=degree {
            let mut v = vec![big(0); k + 1];
            v[k] = big(1);
            for p in &exact {
                let proj = inner(&v, p);
                for (vi, pi) in v.iter_mut().zip(p) {
                    *vi -= &proj * pi;
                }
            }
            let norm = inner(&v, &v).sqrt();
            exact.push(v.into_iter().map(|x| x / &norm).collect());
        }
        let coeffs: Vec<Vec<f64>> = exact.iter().map(|p| p.iter().map(to_f64).collect()).collect();
        let leading_coeffs = coeffs.iter().map(|p| *p.last().unwrap()).collect();
        PolynomialBasis { degree, leading_coeffs, coeffs, exact, moments }
    }

    /// Largest `|∫ e^{−t²} P_k P_l − δ_kl|` over all pairs, evaluated in extended precision.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, p) in self.exact.iter().enumerate() {
            for q in &self.exact[..=k] {
                let mut acc = big(0);
                for (i, a) in p.iter().enumerate() {
                    for (j, b) in q.iter().enumerate() {
                        acc += a * b * &self.moments[i + j];
                    }
                }
                let target = if std::ptr::eq(p, q) { 1.0 } else { 0.0 };
                worst = worst.max((to_f64(&acc) - target).abs());
            }
        }
        worst
    }

    /// `P_k(t)` by Horner's rule in `f64`.
    pub fn eval(&self, k: usize, t: f64) -> f64 {
        self.coeffs[k].iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    /// `Π_{k<n} a_k^{−2}`, computed in extended precision.
    fn inverse_leading_square_product(&self, n: usize) -> Big {
        self.exact[..n].iter().fold(big(1), |acc, p| {
            let a = p.last().unwrap();
            acc / (a * a)
        })
    }
}

/// `C_d = 2^d d! / Γ(d²/2) · Π_{k<d} a_k^{−2}`.
pub fn cd_constant(d: usize) -> Result<f64> {
    check_range("d", d as f64, (2..=MAX_CD_DIM).contains(&d), "2 ≤ d ≤ 10")?;
    let basis = PolynomialBasis::new(d - 1);
    let num = big(2).powi((d as i64).into()) * factorial(d as u64);
    let value = num / gamma_half((d * d) as u64) * basis.inverse_leading_square_product(d);
    Ok(to_f64(&value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn closed_form_constants() {
        let pi2 = PI * PI;
        let pi3 = pi2 * PI;
        let expected = [
            (2, PI - 2.0),
            (3, 8.0 * (PI - 3.0) / 35.0),
            (6, (9.0 * (480.0 * pi3 - 3747.0 * pi2 + 9352.0 * PI) - 65536.0) / 2023466257612800.0),
        ];
        for (d, v) in expected {
            assert!(rel(cd_constant(d).unwrap(), v) < 1e-9, "d={d}");
        }
    }

    #[test]
    fn higher_dimensions_match_hankel_determinants() {
        let frozen = [
            (7, 5.027214860588683761741548e-27),
            (8, 2.245530232549849520122318e-38),
            (9, 6.286638191212686887281176e-52),
            (10, 9.709688681254404181331071e-68),
        ];
        for (d, v) in frozen {
            assert!(rel(cd_constant(d).unwrap(), v) < 1e-13, "d={d}");
        }
    }

    #[test]
    fn out_of_range_dimensions() {
        assert!(cd_constant(1).is_err());
        assert!(cd_constant(11).is_err());
    }

    #[test]
    fn orthonormal_to_degree_nine() {
        let basis = PolynomialBasis::new(9);
        assert!(basis.orthonormality_residual() < 1e-10);
        // P_0 = (√π/2)^{−1/2}
        assert!((basis.coeffs[0][0] - (2.0 / PI.sqrt()).sqrt()).abs() < 1e-15);
        assert!(basis.leading_coeffs.iter().all(|&a| a > 0.0));
    }

    #[test]
    fn gamma_values() {
        assert!((to_f64(&gamma_half(1)) - PI.sqrt()).abs() < 1e-15);
        assert!((to_f64(&gamma_half(5)) - 0.75 * PI.sqrt()).abs() < 1e-15);
        assert_eq!(to_f64(&gamma_half(8)), 6.0);
    }
}
