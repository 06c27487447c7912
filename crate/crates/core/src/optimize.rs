//! Scalar minimization on a bracket.

/// Inverse golden ratio.
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Outcome of a one-dimensional minimization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

/// Golden-section search for a unimodal `f` on `[lo, hi]`, stopping once the
/// bracket is narrower than `tol`. Returns the best point evaluated.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Minimum {
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 <= f2 { Minimum { x: x1, value: f1 } } else { Minimum { x: x2, value: f2 } };
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
            if f1 < best.value {
                best = Minimum { x: x1, value: f1 };
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
            if f2 < best.value {
                best = Minimum { x: x2, value: f2 };
            }
        }
    }
    best
}

/// Interior bracket used for the s-minimizations.
pub const S_LO: f64 = 1e-6;
pub const S_HI: f64 = 1.0 - 1e-6;
pub const S_TOL: f64 = 1e-9;

/// Minimizes a convex function of `s ∈ [0, 1]`: golden section on the interior
/// bracket, then comparison with `s = 1/2` and the two endpoint values.
pub fn minimize_s<F: FnMut(f64) -> f64>(mut f: F) -> Minimum {
    let mut best = golden_section(&mut f, S_LO, S_HI, S_TOL);
    for s in [0.5, 0.0, 1.0] {
        let v = f(s);
        if v < best.value {
            best = Minimum { x: s, value: v };
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic() {
        let m = golden_section(|x| (x - 0.3).powi(2), 0.0, 1.0, 1e-10);
        assert!((m.x - 0.3).abs() < 1e-9);
        assert!(m.value < 1e-18);
    }

    #[test]
    fn monotone_goes_to_endpoint() {
        let m = minimize_s(|s| 2.0 - s);
        assert_eq!(m.x, 1.0);
        assert_eq!(m.value, 1.0);
        let m = minimize_s(|s| 1.0 + s * s);
        assert_eq!(m.x, 0.0);
    }

    #[test]
    fn flat_objective_keeps_a_finite_point() {
        let m = minimize_s(|_| 1.0);
        assert_eq!(m.value, 1.0);
        assert!((0.0..=1.0).contains(&m.x));
    }
}
