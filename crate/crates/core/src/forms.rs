//! Matrix-valued 1-forms on the chart: Hodge star with the anti-linear
//! complex extension, numerical exterior derivative, codifferential residual,
//! path-integral cocycles, and the explicit tangent forms of the two
//! families.

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::liealg::{self, OrderedBasis};
use crate::numeric::{gauss_legendre, max_abs_c, to_complex};
use crate::surfaces::UHPoint;
use crate::{Error, Result};

/// 1-form components on the chart. Complex components are related to the
/// real ones by `dz = dx + i dy`, `dz̄ = dx − i dy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormComponent {
    Dx,
    Dy,
    Dz,
    Dzbar,
}

impl FormComponent {
    /// Coefficients `(p, q)` such that the component equals `p dx + q dy`.
    pub fn to_dx_dy(self) -> (Complex64, Complex64) {
        let i = Complex64::i();
        match self {
            FormComponent::Dx => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            FormComponent::Dy => (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
            FormComponent::Dz => (Complex64::new(1.0, 0.0), i),
            FormComponent::Dzbar => (Complex64::new(1.0, 0.0), -i),
        }
    }
}

/// A coefficient of a bundle-valued form: chart point to complexified
/// Lie-algebra value.
pub type CoefficientFn = Arc<dyn Fn(UHPoint) -> DMatrix<Complex64> + Send + Sync>;

#[derive(Clone)]
pub struct FormTerm {
    pub component: FormComponent,
    pub coefficient: CoefficientFn,
}

/// A finite sum of component terms with matrix-valued coefficients.
#[derive(Clone)]
pub struct BundleForm {
    pub terms: Vec<FormTerm>,
}

impl BundleForm {
    pub fn new(terms: Vec<FormTerm>) -> Self {
        BundleForm { terms }
    }

    /// Largest membership residual of the coefficients at `z`.
    pub fn membership_residual(&self, space: &crate::quadspace::QuadraticSpace, z: UHPoint) -> f64 {
        self.terms
            .iter()
            .map(|t| liealg::membership_residual_c(space, &(t.coefficient)(z)))
            .fold(0.0, f64::max)
    }
}

/// A holomorphic quadratic differential on the chart, represented by the
/// coefficient list of a polynomial in `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadDiff {
    pub coeffs: Vec<Complex64>,
}

impl QuadDiff {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        QuadDiff { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        QuadDiff::new(alloc::vec![Complex64::new(c, 0.0)])
    }

    /// The monomial `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = alloc::vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        QuadDiff::new(coeffs)
    }

    pub fn eval(&self, z: UHPoint) -> Complex64 {
        let zc = Complex64::new(z.x, z.y);
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * zc + c;
        }
        acc
    }
}

/// Hodge star of the chart metric, extended anti-linearly: `∗dx = dy`,
/// `∗dy = −dx`, `∗(ψ dz ⊗ M) = i conj(ψ) dz̄ ⊗ M`. The matrix coefficients
/// of interest are complex multiples of real matrices, so conjugating the
/// scalar part amounts to entrywise conjugation of the coefficient.
pub fn hodge_star(f: &BundleForm) -> BundleForm {
    let terms = f
        .terms
        .iter()
        .map(|t| {
            let (component, factor) = match t.component {
                FormComponent::Dx => (FormComponent::Dy, Complex64::new(1.0, 0.0)),
                FormComponent::Dy => (FormComponent::Dx, Complex64::new(-1.0, 0.0)),
                FormComponent::Dz => (FormComponent::Dzbar, Complex64::i()),
                FormComponent::Dzbar => (FormComponent::Dz, -Complex64::i()),
            };
            let inner = t.coefficient.clone();
            FormTerm {
                component,
                coefficient: Arc::new(move |z| inner(z).map(|v| v.conj()) * factor),
            }
        })
        .collect();
    BundleForm::new(terms)
}

fn check_step(step: f64) -> Result<()> {
    if step <= 0.0 {
        return Err(Error::InvalidParameter("differentiation step must be positive".to_string()));
    }
    Ok(())
}

/// Evaluates the `(dx, dy)` matrix coefficients of `f` at `z`.
fn dx_dy_coefficients(f: &BundleForm, z: UHPoint) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let dim = (f.terms[0].coefficient)(z).nrows();
    let mut p = DMatrix::zeros(dim, dim);
    let mut q = DMatrix::zeros(dim, dim);
    for t in &f.terms {
        let c = (t.coefficient)(z);
        let (pf, qf) = t.component.to_dx_dy();
        p += &c * pf;
        q += &c * qf;
    }
    (p, q)
}

/// Numerical exterior derivative: the `dx∧dy` coefficient of `df` at `z`,
/// by central differences of the `(dx, dy)` coefficients.
pub fn exterior_d(f: &BundleForm, z: UHPoint, step: f64) -> Result<DMatrix<Complex64>> {
    check_step(step)?;
    if f.terms.is_empty() {
        return Err(Error::InvalidParameter("form has no terms".to_string()));
    }
    let h = step * f64::max(1.0, z.y);
    let at = |dx: f64, dy: f64| dx_dy_coefficients(f, UHPoint { x: z.x + dx, y: z.y + dy });
    // d(p dx + q dy) = (∂x q − ∂y p) dx∧dy, five-point (fourth-order) stencil.
    let eight = Complex64::new(8.0, 0.0);
    let denom = Complex64::new(12.0 * h, 0.0);
    let qx = ((at(h, 0.0).1 - at(-h, 0.0).1) * eight - at(2.0 * h, 0.0).1
        + at(-2.0 * h, 0.0).1)
        / denom;
    let py = ((at(0.0, h).0 - at(0.0, -h).0) * eight - at(0.0, 2.0 * h).0
        + at(0.0, -2.0 * h).0)
        / denom;
    Ok(qx - py)
}

/// Max-norm of the numerical `d∗#f` at `z`: the codifferential zero-test
/// with the invertible prefix `(#)⁻¹∗⁻¹` dropped. `#` is taken with respect
/// to the point-dependent scalar product of `h_field`, extended
/// complex-bilinearly over the real basis.
pub fn codifferential_residual(
    f: &BundleForm,
    h_field: &dyn Fn(UHPoint) -> Result<DMatrix<f64>>,
    basis: &OrderedBasis,
    z: UHPoint,
    step: f64,
) -> Result<f64> {
    check_step(step)?;
    let star = hodge_star(f);
    let h = step * f64::max(1.0, z.y);
    // Dual coefficients of ∗#f as scalar (dx, dy) coefficient vectors.
    let coeffs_at = |dx: f64, dy: f64| -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let w = UHPoint { x: z.x + dx, y: z.y + dy };
        let hm = h_field(w)?;
        let mut p = alloc::vec![Complex64::new(0.0, 0.0); basis.len()];
        let mut q = alloc::vec![Complex64::new(0.0, 0.0); basis.len()];
        for t in &star.terms {
            let c = (t.coefficient)(w);
            let duals = liealg::sharp_bilinear(&hm, &c, basis)?;
            let (pf, qf) = t.component.to_dx_dy();
            for (j, d) in duals.iter().enumerate() {
                p[j] += d * pf;
                q[j] += d * qf;
            }
        }
        Ok((p, q))
    };
    // Five-point (fourth-order) central differences.
    let xp = coeffs_at(h, 0.0)?;
    let xm = coeffs_at(-h, 0.0)?;
    let xp2 = coeffs_at(2.0 * h, 0.0)?;
    let xm2 = coeffs_at(-2.0 * h, 0.0)?;
    let yp = coeffs_at(0.0, h)?;
    let ym = coeffs_at(0.0, -h)?;
    let yp2 = coeffs_at(0.0, 2.0 * h)?;
    let ym2 = coeffs_at(0.0, -2.0 * h)?;
    let mut residual = 0.0f64;
    for j in 0..basis.len() {
        let qx = ((xp.1[j] - xm.1[j]) * 8.0 - xp2.1[j] + xm2.1[j]) / (12.0 * h);
        let py = ((yp.0[j] - ym.0[j]) * 8.0 - yp2.0[j] + ym2.0[j]) / (12.0 * h);
        residual = residual.max((qx - py).norm());
    }
    Ok(residual)
}

/// Which Lie algebra embedding the tangent form uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangentVariant {
    Block,
    Irreducible,
}

/// The real-linear star map of the variant applied to a complex traceless
/// matrix `[[a, b], [c, -a]]`.
pub fn star_matrix_c(variant: TangentVariant, a: Complex64, b: Complex64, c: Complex64) -> DMatrix<Complex64> {
    let real = |ar: f64, br: f64, cr: f64| match variant {
        TangentVariant::Block => crate::surfaces::phi_block_star(&nalgebra::Matrix2::new(
            ar, br, cr, -ar,
        ))
        .expect("trace zero by construction"),
        TangentVariant::Irreducible => liealg::phi_irr_star_entries(ar, br, cr),
    };
    to_complex(&real(a.re, b.re, c.re)) + to_complex(&real(a.im, b.im, c.im)) * Complex64::i()
}

/// The matrix family `Φ*([[−z, z²],[−1, z]])` of the tangent forms.
pub fn tangent_matrix(variant: TangentVariant, z: UHPoint) -> DMatrix<Complex64> {
    let zc = Complex64::new(z.x, z.y);
    star_matrix_c(variant, -zc, zc * zc, Complex64::new(-1.0, 0.0))
}

/// The tangent-space representative `ψ(z) dz ⊗ Φ*([[−z, z²],[−1, z]])`.
pub fn tangent_form(psi: &QuadDiff, variant: TangentVariant) -> BundleForm {
    let psi = psi.clone();
    BundleForm::new(alloc::vec![FormTerm {
        component: FormComponent::Dz,
        coefficient: Arc::new(move |z| tangent_matrix(variant, z) * psi.eval(z)),
    }])
}

/// Numerical line integral of `f` along the polyline `path`, composite
/// Gauss-Legendre of the given order per segment.
pub fn cocycle_integrate(
    f: &BundleForm,
    path: &[UHPoint],
    order: usize,
) -> Result<DMatrix<Complex64>> {
    if path.len() < 2 {
        return Err(Error::InvalidParameter("path needs at least two points".to_string()));
    }
    if f.terms.is_empty() {
        return Err(Error::InvalidParameter("form has no terms".to_string()));
    }
    let dim = (f.terms[0].coefficient)(path[0]).nrows();
    let rule = gauss_legendre(order.max(2));
    let mut acc: DMatrix<Complex64> = DMatrix::zeros(dim, dim);
    for seg in path.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let (ddx, ddy) = (b.x - a.x, b.y - a.y);
        for &(t, w) in &rule {
            let s = 0.5 * (t + 1.0);
            let z = UHPoint { x: a.x + s * ddx, y: a.y + s * ddy };
            let (p, q) = dx_dy_coefficients(f, z);
            // Pull-back of p dx + q dy by the segment parametrization.
            acc += (p * Complex64::new(ddx, 0.0) + q * Complex64::new(ddy, 0.0))
                * Complex64::new(0.5 * w, 0.0);
        }
    }
    Ok(acc)
}

/// Convenience: the max-norm of a complex matrix (re-export for callers).
pub fn coefficient_norm(m: &DMatrix<Complex64>) -> f64 {
    max_abs_c(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadspace::QuadraticSpace;
    use crate::surfaces::{frame_matrix, fuchsian_h_closed, FrameCase};
    use approx::assert_abs_diff_eq;

    fn e_matrix(idx: usize) -> DMatrix<f64> {
        OrderedBasis::standard_basis(2).unwrap().elements[idx].clone()
    }

    fn constant_form(component: FormComponent, m: DMatrix<Complex64>) -> BundleForm {
        BundleForm::new(alloc::vec![FormTerm {
            component,
            coefficient: Arc::new(move |_| m.clone()),
        }])
    }

    #[test]
    fn hodge_star_rules() {
        let e1 = to_complex(&e_matrix(0));
        let f = constant_form(FormComponent::Dx, e1.clone());
        let s = hodge_star(&f);
        assert_eq!(s.terms[0].component, FormComponent::Dy);
        assert!(max_abs_c(&((s.terms[0].coefficient)(UHPoint::i()) - &e1)) < 1e-15);
        // Involution up to sign on real components.
        let ss = hodge_star(&s);
        assert_eq!(ss.terms[0].component, FormComponent::Dx);
        assert!(max_abs_c(&((ss.terms[0].coefficient)(UHPoint::i()) + &e1)) < 1e-15);
        // ∗(z dz ⊗ M) at z = 1+i is i(1−i) dz̄ ⊗ M.
        let zf = BundleForm::new(alloc::vec![FormTerm {
            component: FormComponent::Dz,
            coefficient: Arc::new(move |z| {
                to_complex(&e_matrix(0)) * Complex64::new(z.x, z.y)
            }),
        }]);
        let sz = hodge_star(&zf);
        assert_eq!(sz.terms[0].component, FormComponent::Dzbar);
        let got = (sz.terms[0].coefficient)(UHPoint::new(1.0, 1.0).unwrap());
        let want = to_complex(&e_matrix(0)) * (Complex64::i() * Complex64::new(1.0, -1.0));
        assert!(max_abs_c(&(got - want)) < 1e-15);
    }

    #[test]
    fn exterior_d_examples() {
        // d(x dy ⊗ E1) = dx∧dy ⊗ E1.
        let f = BundleForm::new(alloc::vec![FormTerm {
            component: FormComponent::Dy,
            coefficient: Arc::new(|z| to_complex(&e_matrix(0)) * Complex64::new(z.x, 0.0)),
        }]);
        let d = exterior_d(&f, UHPoint::new(0.3, 1.2).unwrap(), 1e-5).unwrap();
        assert!(max_abs_c(&(d - to_complex(&e_matrix(0)))) < 1e-8);
        // Holomorphic dz-forms are closed.
        let t = tangent_form(&QuadDiff::monomial(2), TangentVariant::Irreducible);
        let d = exterior_d(&t, UHPoint::new(-0.5, 0.8).unwrap(), 1e-5).unwrap();
        assert!(max_abs_c(&d) < 1e-7);
        // Anti-holomorphic control: d(conj(z) dz) has coefficient of modulus 2.
        let g = BundleForm::new(alloc::vec![FormTerm {
            component: FormComponent::Dz,
            coefficient: Arc::new(|z| to_complex(&e_matrix(0)) * Complex64::new(z.x, -z.y)),
        }]);
        let d = exterior_d(&g, UHPoint::i(), 1e-5).unwrap();
        // dz̄∧dz = 2i dx∧dy, so the dx∧dy coefficient is 2i E1.
        assert!(max_abs_c(&(d - to_complex(&e_matrix(0)) * Complex64::new(0.0, 2.0))) < 1e-8);
        assert!(exterior_d(&g, UHPoint::i(), 0.0).is_err());
    }

    #[test]
    fn tangent_form_block_value_at_i() {
        let m = tangent_matrix(TangentVariant::Block, UHPoint::i());
        let want = to_complex(&e_matrix(0)) * Complex64::new(-1.0, 0.0)
            + to_complex(&e_matrix(2)) * Complex64::new(-1.0, 0.0)
            + to_complex(&e_matrix(1)) * Complex64::new(0.0, -2.0);
        assert!(max_abs_c(&(m - want)) < 1e-14);
        // Membership of the coefficient in the complexified algebra.
        let space = QuadraticSpace::standard_space(2).unwrap();
        let t = tangent_form(&QuadDiff::monomial(1), TangentVariant::Irreducible);
        assert!(t.membership_residual(&space, UHPoint::new(0.7, 1.9).unwrap()) < 1e-10);
    }

    #[test]
    fn closed_form_iota_values() {
        // Block family: Hermitian self-pairing is 16 y^2.
        for &(x, y) in &[(0.0, 1.0), (1.0, 2.0), (-0.4, 0.7)] {
            let z = UHPoint::new(x, y).unwrap();
            let h = crate::surfaces::fuchsian_h_inv_closed(z);
            let m = tangent_matrix(TangentVariant::Block, z);
            let v = liealg::iota_pair_complex(&h, &m, &m).unwrap();
            assert_abs_diff_eq!(v.re, 16.0 * y * y, epsilon = 1e-9 * 16.0 * y * y);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-9);
        }
        // Irreducible family at i: value 80.
        let (_, h) = frame_matrix(FrameCase::HitchinF, UHPoint::i()).unwrap();
        let m = tangent_matrix(TangentVariant::Irreducible, UHPoint::i());
        let v = liealg::iota_pair_complex(&h, &m, &m).unwrap();
        assert_abs_diff_eq!(v.re, 80.0, epsilon = 1e-8);
    }

    #[test]
    fn harmonicity_and_negative_control() {
        let basis = OrderedBasis::standard_basis(2).unwrap();
        let h_field = |z: UHPoint| Ok(crate::surfaces::fuchsian_h_inv_closed(z));
        for psi in [QuadDiff::constant(1.0), QuadDiff::monomial(1)] {
            let f = tangent_form(&psi, TangentVariant::Block);
            let r = codifferential_residual(
                &f,
                &h_field,
                &basis,
                UHPoint::new(1.0, 2.0).unwrap(),
                1e-5,
            )
            .unwrap();
            assert!(r <= 1e-6, "residual {r}");
        }
        // Non-harmonic probe dx ⊗ (y E1).
        let probe = BundleForm::new(alloc::vec![FormTerm {
            component: FormComponent::Dx,
            coefficient: Arc::new(|z| to_complex(&e_matrix(0)) * Complex64::new(z.y, 0.0)),
        }]);
        let r = codifferential_residual(&probe, &h_field, &basis, UHPoint::i(), 1e-5).unwrap();
        assert!(r > 0.1, "control residual {r}");
    }

    #[test]
    fn hitchin_harmonicity() {
        let basis = OrderedBasis::standard_basis(2).unwrap();
        let h_field = |z: UHPoint| crate::metric::h_field(TangentVariant::Irreducible, z);
        let f = tangent_form(&QuadDiff::monomial(2), TangentVariant::Irreducible);
        let r = codifferential_residual(
            &f,
            &h_field,
            &basis,
            UHPoint::new(0.4, 1.5).unwrap(),
            1e-5,
        )
        .unwrap();
        assert!(r <= 1e-6, "residual {r}");
    }

    #[test]
    fn cocycle_integration() {
        // Exact form f = d(z^2/2 ⊗ E1) = z dz ⊗ E1 over a closed square loop.
        let f = BundleForm::new(alloc::vec![FormTerm {
            component: FormComponent::Dz,
            coefficient: Arc::new(|z| to_complex(&e_matrix(0)) * Complex64::new(z.x, z.y)),
        }]);
        let square = [
            UHPoint::new(0.0, 1.0).unwrap(),
            UHPoint::new(1.0, 1.0).unwrap(),
            UHPoint::new(1.0, 2.0).unwrap(),
            UHPoint::new(0.0, 2.0).unwrap(),
            UHPoint::new(0.0, 1.0).unwrap(),
        ];
        let v = cocycle_integrate(&f, &square, 8).unwrap();
        assert!(max_abs_c(&v) < 1e-10);
        // Open path has the closed-form value (z1^2 - z0^2)/2.
        let open = [UHPoint::new(0.0, 1.0).unwrap(), UHPoint::new(1.0, 2.0).unwrap()];
        let v = cocycle_integrate(&f, &open, 8).unwrap();
        let z0 = Complex64::new(0.0, 1.0);
        let z1 = Complex64::new(1.0, 2.0);
        let want = to_complex(&e_matrix(0)) * ((z1 * z1 - z0 * z0) / 2.0);
        assert!(max_abs_c(&(v - want)) < 1e-10);
        assert!(cocycle_integrate(&f, &open[..1], 8).is_err());
        // Conjugation naturality with Q = diag(1,1,1,1,-1).
        let q = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&[
            1.0, 1.0, 1.0, 1.0, -1.0,
        ]));
        let qc = to_complex(&q);
        let t = tangent_form(&QuadDiff::monomial(1), TangentVariant::Block);
        let qc2 = qc.clone();
        let inner = t.terms[0].coefficient.clone();
        let conj_form = BundleForm::new(alloc::vec![FormTerm {
            component: FormComponent::Dz,
            coefficient: Arc::new(move |z| &qc2 * inner(z) * &qc2),
        }]);
        let path = [UHPoint::new(-0.3, 0.6).unwrap(), UHPoint::new(0.8, 1.7).unwrap()];
        let lhs = cocycle_integrate(&conj_form, &path, 12).unwrap();
        let rhs = &qc * cocycle_integrate(&t, &path, 12).unwrap() * &qc;
        assert!(max_abs_c(&(lhs - rhs)) < 1e-10);
    }
}
