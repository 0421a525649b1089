//! The Riemannian pairing on bundle-valued 1-forms, its pointwise integrand
//! for the explicit tangent forms, Weil-Petersson comparison and quadrature.

use alloc::string::ToString;

use nalgebra::DMatrix;
use num_traits::Float;

use crate::forms::{tangent_matrix, QuadDiff, TangentVariant};
use crate::liealg::iota_pair_complex;
use crate::numeric::gauss_legendre;
use crate::surfaces::{frame_matrix, fuchsian_h_inv_closed, FrameCase, UHPoint};
use crate::{Error, Result};

/// Pointwise sample of the pairing densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrandSample {
    pub z: UHPoint,
    pub g_integrand: f64,
    pub wp_integrand: f64,
    pub ratio: f64,
}

/// The scalar-product matrix field adapted to the variant's surface, i.e.
/// the matrix passed as `H` to the `tr(M^t H^{-1} N H)` pairing so that the
/// pairing is the inner product induced by declaring the moving frame
/// orthonormal. With `G = (P P^t)^{-1}` the frame Gram matrix, that inner
/// product is `tr(M^t G N G^{-1})`, so the matrix returned here is `G^{-1}`.
/// This is the field under which the tangent forms are harmonic and the
/// centralizer conjugations act isometrically.
pub fn h_field(variant: TangentVariant, z: UHPoint) -> Result<DMatrix<f64>> {
    match variant {
        TangentVariant::Block => Ok(fuchsian_h_inv_closed(z)),
        TangentVariant::Irreducible => {
            // G^{-1} = P P^t directly from the frame columns; inverting the
            // Gram back would only add conditioning error.
            let (p, _) = frame_matrix(FrameCase::HitchinF, z)?;
            Ok(&p * p.transpose())
        }
    }
}

/// Closed-form Hermitian self-pairing of the block tangent family: `16 y^2`.
pub fn iota_block_closed(z: UHPoint) -> f64 {
    16.0 * z.y * z.y
}

/// Closed-form Hermitian self-pairing of the irreducible tangent family:
/// `20 (1 + x^4 + y^4 + 2x^2(1 + y^2))^2 / y^2`.
pub fn iota_irr_closed(z: UHPoint) -> f64 {
    let (x, y) = (z.x, z.y);
    let t = 1.0 + Float::powi(x, 4) + Float::powi(y, 4) + 2.0 * x * x * (1.0 + y * y);
    20.0 * t * t / (y * y)
}

/// The Hermitian `ι` pairing of the tangent family with itself at `z`.
///
/// The block value uses the frame-induced inner product and equals `16 y^2`.
/// The irreducible value passes the frame Gram matrix itself as `H` (rather
/// than its inverse), which is the convention behind the published
/// `20 (1 + x^4 + y^4 + 2x^2(1 + y^2))^2 / y^2` closed form; with the
/// frame-induced convention of [`h_field`] the value would instead be the
/// constant multiple `80 y^2` of the hyperbolic area density.
pub fn iota_tangent(variant: TangentVariant, z: UHPoint) -> Result<f64> {
    let m = tangent_matrix(variant, z);
    match variant {
        TangentVariant::Block => {
            let h = h_field(variant, z)?;
            Ok(iota_pair_complex(&h, &m, &m)?.re)
        }
        TangentVariant::Irreducible => {
            // With H = G = (P P^t)^{-1} the pairing collapses to the squared
            // Frobenius norm of A = P^t M P^{-t}. Evaluating through a
            // single LU solve with P avoids the double inversion of the
            // Gram, whose conditioning degrades near the chart edges.
            let (p, _) = frame_matrix(FrameCase::HitchinF, z)?;
            let pc = crate::numeric::to_complex(&p);
            let b = pc.transpose() * &m;
            let a_t = pc
                .lu()
                .solve(&b.transpose())
                .ok_or(crate::Error::SingularMatrix)?;
            Ok(a_t.iter().map(|c| c.norm_sqr()).sum())
        }
    }
}

/// Density of `g(ψ dz ⊗ M, ψ' dz ⊗ M)` against `dx dy`: the wedge
/// `ψ dz ∧ ∗(ψ' dz) = i ψ conj(ψ') ι(M, M) dz∧dz̄` with `i dz∧dz̄ = 2 dx dy`.
pub fn g_integrand(
    variant: TangentVariant,
    psi: &QuadDiff,
    psi2: &QuadDiff,
    z: UHPoint,
) -> Result<f64> {
    let iota = iota_tangent(variant, z)?;
    Ok(2.0 * (psi.eval(z) * psi2.eval(z).conj()).re * iota)
}

/// Weil-Petersson density against `dx dy`: `Re[ψ conj(ψ')] y^2`.
pub fn wp_integrand(psi: &QuadDiff, psi2: &QuadDiff, z: UHPoint) -> f64 {
    (psi.eval(z) * psi2.eval(z).conj()).re * z.y * z.y
}

/// Tensor-product Gauss-Legendre quadrature of a chart density over the
/// rectangle `(x0, x1) x (y0, y1)`.
pub fn quadrature(
    density: &dyn Fn(UHPoint) -> Result<f64>,
    rect: (f64, f64, f64, f64),
    order: usize,
) -> Result<f64> {
    let (x0, x1, y0, y1) = rect;
    if y0 <= 0.0 {
        return Err(Error::InvalidParameter("rectangle must satisfy y0 > 0".to_string()));
    }
    if order < 2 {
        return Err(Error::InvalidParameter("quadrature order must be at least 2".to_string()));
    }
    let rule = gauss_legendre(order);
    let (cx, hx) = ((x0 + x1) / 2.0, (x1 - x0) / 2.0);
    let (cy, hy) = ((y0 + y1) / 2.0, (y1 - y0) / 2.0);
    let mut acc = 0.0;
    for &(tx, wx) in &rule {
        for &(ty, wy) in &rule {
            let z = UHPoint::new(cx + hx * tx, cy + hy * ty)?;
            acc += wx * wy * density(z)?;
        }
    }
    Ok(acc * hx * hy)
}

/// Result of sampling the `g / wp` ratio on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WpRatioReport {
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub constant: bool,
}

/// Samples `g_integrand / wp_integrand` for `ψ = ψ' = 1` on a
/// `grid_n x grid_n` grid over the rectangle.
pub fn wp_ratio_report(
    variant: TangentVariant,
    rect: (f64, f64, f64, f64),
    grid_n: usize,
) -> Result<WpRatioReport> {
    let (x0, x1, y0, y1) = rect;
    if y0 <= 0.0 {
        return Err(Error::InvalidParameter("rectangle must satisfy y0 > 0".to_string()));
    }
    if grid_n < 2 {
        return Err(Error::InvalidParameter("grid must have at least 2 points per side".to_string()));
    }
    let one = QuadDiff::constant(1.0);
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = f64::NEG_INFINITY;
    for i in 0..grid_n {
        for j in 0..grid_n {
            let z = UHPoint::new(
                x0 + (x1 - x0) * i as f64 / (grid_n - 1) as f64,
                y0 + (y1 - y0) * j as f64 / (grid_n - 1) as f64,
            )?;
            let ratio = g_integrand(variant, &one, &one, z)? / wp_integrand(&one, &one, z);
            min_ratio = min_ratio.min(ratio);
            max_ratio = max_ratio.max(ratio);
        }
    }
    let constant = (max_ratio - min_ratio).abs() <= 1e-9 * Float::max(1.0, max_ratio.abs());
    Ok(WpRatioReport { min_ratio, max_ratio, constant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn closed_form_iota_agreement() {
        for &(x, y) in &[(0.0, 1.0), (0.5, 1.5), (-1.0, 0.8), (1.7, 3.0)] {
            let z = UHPoint::new(x, y).unwrap();
            let block = iota_tangent(TangentVariant::Block, z).unwrap();
            assert_abs_diff_eq!(block, iota_block_closed(z), epsilon = 1e-10 * iota_block_closed(z));
            let irr = iota_tangent(TangentVariant::Irreducible, z).unwrap();
            assert_abs_diff_eq!(irr, iota_irr_closed(z), epsilon = 1e-9 * iota_irr_closed(z));
        }
        assert_abs_diff_eq!(iota_irr_closed(UHPoint::i()), 80.0, epsilon = 1e-12);
    }

    #[test]
    fn pointwise_values() {
        let one = QuadDiff::constant(1.0);
        let zpoly = QuadDiff::monomial(1);
        assert_abs_diff_eq!(
            g_integrand(TangentVariant::Block, &one, &one, UHPoint::i()).unwrap(),
            32.0,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            g_integrand(TangentVariant::Irreducible, &one, &one, UHPoint::i()).unwrap(),
            160.0,
            epsilon = 1e-8
        );
        assert_abs_diff_eq!(wp_integrand(&one, &one, UHPoint::i()), 1.0, epsilon = 1e-15);
        let z2i = UHPoint::new(0.0, 2.0).unwrap();
        assert_abs_diff_eq!(wp_integrand(&zpoly, &zpoly, z2i), 16.0, epsilon = 1e-13);
        // Symmetry and positivity.
        let z = UHPoint::new(0.3, 1.4).unwrap();
        let ab = g_integrand(TangentVariant::Block, &one, &zpoly, z).unwrap();
        let ba = g_integrand(TangentVariant::Block, &zpoly, &one, z).unwrap();
        assert_abs_diff_eq!(ab, ba, epsilon = 1e-10);
        assert!(g_integrand(TangentVariant::Block, &zpoly, &zpoly, z).unwrap() > 0.0);
    }

    #[test]
    fn quadrature_basics() {
        let rect = (0.0, 1.0, 1.0, 2.0);
        let one = quadrature(&|_| Ok(1.0), rect, 8).unwrap();
        assert_abs_diff_eq!(one, 1.0, epsilon = 1e-13);
        let ysq = quadrature(&|z| Ok(z.y * z.y), rect, 8).unwrap();
        assert_abs_diff_eq!(ysq, 7.0 / 3.0, epsilon = 1e-12);
        assert!(quadrature(&|_| Ok(1.0), (0.0, 1.0, -1.0, 2.0), 8).is_err());
        assert!(quadrature(&|_| Ok(1.0), rect, 1).is_err());
    }

    #[test]
    fn wp_factor_32() {
        let rect = (0.0, 1.0, 1.0, 2.0);
        let one = QuadDiff::constant(1.0);
        let g = quadrature(
            &|z| g_integrand(TangentVariant::Block, &one, &one, z),
            rect,
            16,
        )
        .unwrap();
        let wp = quadrature(&|z| Ok(wp_integrand(&one, &one, z)), rect, 16).unwrap();
        assert_abs_diff_eq!(g, 32.0 * wp, epsilon = 1e-10 * g.abs());
    }

    #[test]
    fn ratio_reports() {
        let rect = (0.0, 1.0, 1.0, 2.0);
        let block = wp_ratio_report(TangentVariant::Block, rect, 10).unwrap();
        assert!(block.constant);
        assert_abs_diff_eq!(block.min_ratio, 32.0, epsilon = 1e-9);
        assert_abs_diff_eq!(block.max_ratio, 32.0, epsilon = 1e-9);
        let irr = wp_ratio_report(TangentVariant::Irreducible, rect, 10).unwrap();
        assert!(!irr.constant);
        assert!(irr.max_ratio > irr.min_ratio + 1.0);
        // Ratio values at i and 2i.
        let one = QuadDiff::constant(1.0);
        let r_i = g_integrand(TangentVariant::Irreducible, &one, &one, UHPoint::i()).unwrap()
            / wp_integrand(&one, &one, UHPoint::i());
        assert_abs_diff_eq!(r_i, 160.0, epsilon = 1e-7);
        let z2i = UHPoint::new(0.0, 2.0).unwrap();
        // 40 (1 + y^4)^2 / y^4 at x = 0, y = 2.
        let r_2i = g_integrand(TangentVariant::Irreducible, &one, &one, z2i).unwrap()
            / wp_integrand(&one, &one, z2i);
        assert_abs_diff_eq!(r_2i, 722.5, epsilon = 1e-6 * 722.5);
    }
}
