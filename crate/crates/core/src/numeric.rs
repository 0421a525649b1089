//! Small numerical helpers shared across the crate: matrix exponential,
//! Gauss-Legendre rules and real-to-complex promotion.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Float;

/// Matrix exponential by scaling-and-squaring with a truncated Taylor series.
///
/// All matrices in this crate are at most 11x11 with moderate entries, so a
/// plain series after scaling to norm < 1/2 converges to machine precision.
pub fn expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = m.iter().fold(0.0f64, |a, &v| a.max(v.abs())) * n as f64;
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m / Float::powi(2.0f64, s as i32);
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..40 {
        term = (&term * &scaled) / k as f64;
        result += &term;
        if term.iter().all(|v| v.abs() < 1e-18) {
            break;
        }
    }
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

/// Nodes and weights of the `order`-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    assert!(order >= 1);
    let n = order;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-like initial guess.
        let mut x = Float::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) via the three-term recurrence.
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0f64, x);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Promotes a real matrix to a complex one.
pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|v| Complex64::new(v, 0.0))
}

/// Largest absolute value of the entries of a real matrix.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
}

/// Largest modulus of the entries of a complex matrix.
pub fn max_abs_c(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0f64, |a, v| a.max(v.norm()))
}

/// Largest absolute value of the entries of a real vector.
pub fn max_abs_v(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn expm_of_rotation_generator() {
        let k = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let theta = 0.7f64;
        let r = expm(&(k * theta));
        assert_abs_diff_eq!(r[(0, 0)], theta.cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(r[(0, 1)], theta.sin(), epsilon = 1e-14);
        assert_abs_diff_eq!(r[(1, 0)], -theta.sin(), epsilon = 1e-14);
    }

    #[test]
    fn expm_diagonal() {
        let d = DMatrix::from_diagonal(&DVector::from_row_slice(&[1.0, -2.0, 3.0]));
        let e = expm(&d);
        assert_abs_diff_eq!(e[(0, 0)], 1.0f64.exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(e[(1, 1)], (-2.0f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(e[(2, 2)], 3.0f64.exp(), epsilon = 1e-10);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        // A rule of order k is exact on polynomials of degree 2k-1.
        let rule = gauss_legendre(5);
        let integral: f64 = rule.iter().map(|&(x, w)| w * x.powi(8)).sum();
        assert_abs_diff_eq!(integral, 2.0 / 9.0, epsilon = 1e-14);
        let total: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert_abs_diff_eq!(total, 2.0, epsilon = 1e-14);
    }
}
