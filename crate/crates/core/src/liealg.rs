//! The Lie algebra `so(2, n+1)`: membership, ordered bases, the
//! trace-formula scalar product, the sharp operator and conjugation tables.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Float;

use crate::numeric::{max_abs, max_abs_c, to_complex};
use crate::quadspace::QuadraticSpace;
use crate::{Error, Result};

pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Residual of the membership condition `X^t G + G X = 0`.
pub fn membership_residual(space: &QuadraticSpace, mat: &DMatrix<f64>) -> f64 {
    max_abs(&(mat.transpose() * &space.gram + &space.gram * mat))
}

/// Complex version: real and imaginary parts are tested separately.
pub fn membership_residual_c(space: &QuadraticSpace, mat: &DMatrix<Complex64>) -> f64 {
    let gram = to_complex(&space.gram);
    max_abs_c(&(mat.transpose() * &gram + &gram * mat))
}

pub fn is_lie_element(space: &QuadraticSpace, mat: &DMatrix<f64>) -> bool {
    mat.nrows() == space.dim && membership_residual(space, mat) <= MEMBERSHIP_TOL
}

/// An ordered basis `E_1, ..., E_r` of `so(2, n+1)`.
#[derive(Debug, Clone)]
pub struct OrderedBasis {
    pub n: usize,
    pub elements: Vec<DMatrix<f64>>,
}

fn sym_pair(dim: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(dim, dim);
    m[(i, j)] = 1.0;
    m[(j, i)] = 1.0;
    m
}

fn antisym_pair(dim: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(dim, dim);
    m[(i, j)] = 1.0;
    m[(j, i)] = -1.0;
    m
}

impl OrderedBasis {
    /// The ordered basis adapted to the reducible (block) embedding of
    /// `so(2,1)`: `E_1, E_2, E_3` span the upper-left `so(2,1)` block, then
    /// come the remaining mixed-block generators row-major, then the
    /// antisymmetric compact-block generators row-major.
    ///
    /// For `n = 2` this is exactly the ten-element list used throughout the
    /// `so(2,3)` computations.
    pub fn standard_basis(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(
                alloc::string::String::from("standard_basis requires n >= 2"),
            ));
        }
        let dim = n + 3;
        let mut elements = Vec::new();
        // E1 = antisym(0,1)*(-1) + sym(0,2); E2 = sym(1,2); E3 = antisym(0,1) + sym(0,2).
        let mut e1 = DMatrix::zeros(dim, dim);
        e1[(0, 1)] = -1.0;
        e1[(1, 0)] = 1.0;
        e1[(0, 2)] = 1.0;
        e1[(2, 0)] = 1.0;
        elements.push(e1);
        elements.push(sym_pair(dim, 1, 2));
        let mut e3 = DMatrix::zeros(dim, dim);
        e3[(0, 1)] = 1.0;
        e3[(1, 0)] = -1.0;
        e3[(0, 2)] = 1.0;
        e3[(2, 0)] = 1.0;
        elements.push(e3);
        // Mixed-block generators: rows 0 then 1, columns 3..dim.
        for i in 0..2 {
            for j in 3..dim {
                elements.push(sym_pair(dim, i, j));
            }
        }
        // Compact-block generators: antisymmetric pairs among 2..dim, row-major.
        for i in 2..dim {
            for j in (i + 1)..dim {
                elements.push(antisym_pair(dim, i, j));
            }
        }
        Ok(OrderedBasis { n, elements })
    }

    /// The collection adapted to the irreducible embedding for `n = 2`:
    /// `E_1, E_2, E_3` are the images of the standard `sl(2)` triple under
    /// the irreducible Lie algebra map, completed by the standard list with
    /// `E_4` replaced by the antisymmetric positive-block generator and
    /// `E_7` by the remaining mixed generator on the second row.
    ///
    /// Caution: this collection spans `so(2,3)` but is *not* linearly
    /// independent — `E_3 = E_1 + 2 E_4 + 2\sqrt3 E_8 + 2 E_10` holds
    /// identically. Pairing coefficients `iota(M, E_j)` (the only thing the
    /// codifferential computations use) remain well defined; do not call
    /// [`OrderedBasis::coordinates`] on it.
    pub fn hitchin_basis() -> Self {
        let std_basis = Self::standard_basis(2).unwrap();
        let mut elements = Vec::with_capacity(10);
        elements.push(phi_irr_star_raw(0.0, 1.0, 0.0));
        elements.push(phi_irr_star_raw(0.5, 0.0, 0.0));
        elements.push(phi_irr_star_raw(0.0, 0.0, 1.0));
        elements.push(antisym_pair(5, 0, 1)); // replaces E4
        elements.push(std_basis.elements[4].clone());
        elements.push(std_basis.elements[5].clone());
        elements.push(sym_pair(5, 1, 2)); // replaces E7
        elements.push(std_basis.elements[7].clone());
        elements.push(std_basis.elements[8].clone());
        elements.push(std_basis.elements[9].clone());
        OrderedBasis { n: 2, elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Least-squares coordinates of `m` in this basis (Frobenius sense).
    pub fn coordinates(&self, m: &DMatrix<f64>) -> DVector<f64> {
        let r = self.elements.len();
        let mut gram = DMatrix::zeros(r, r);
        let mut rhs = DVector::zeros(r);
        for i in 0..r {
            for j in 0..r {
                gram[(i, j)] = self.elements[i].dot(&self.elements[j]);
            }
            rhs[i] = self.elements[i].dot(m);
        }
        gram.lu().solve(&rhs).expect("basis is linearly independent")
    }
}

/// The image of a traceless 2x2 matrix under the irreducible Lie algebra
/// embedding `sl(2,R) -> so(2,3)`.
fn phi_irr_star_raw(a: f64, b: f64, c: f64) -> DMatrix<f64> {
    let s3 = Float::sqrt(3.0f64);
    DMatrix::from_row_slice(
        5,
        5,
        &[
            0.0, c - b, s3 * (b + c), 2.0 * a, b + c,
            b - c, 0.0, 0.0, b + c, 4.0 * a,
            s3 * (b + c), 0.0, 0.0, s3 * (c - b), 0.0,
            2.0 * a, b + c, s3 * (b - c), 0.0, c - b,
            b + c, 4.0 * a, 0.0, b - c, 0.0,
        ],
    )
}

pub(crate) fn phi_irr_star_entries(a: f64, b: f64, c: f64) -> DMatrix<f64> {
    phi_irr_star_raw(a, b, c)
}

/// `iota(M, N) = tr(M^t H^{-1} N H)`. Note that swapping `H` for `H^{-1}`
/// yields the adjoint pairing with respect to the other form, so the choice
/// of which matrix is passed as `H` matters; see `metric::h_field`.
pub fn iota_pair(h: &DMatrix<f64>, m: &DMatrix<f64>, n: &DMatrix<f64>) -> Result<f64> {
    let h_inv = h.clone().try_inverse().ok_or(Error::SingularMatrix)?;
    Ok((m.transpose() * h_inv * n * h).trace())
}

/// Hermitian extension: `tr(M^t H^{-1} conj(N) H)`.
pub fn iota_pair_complex(
    h: &DMatrix<f64>,
    m: &DMatrix<Complex64>,
    n: &DMatrix<Complex64>,
) -> Result<Complex64> {
    let h_inv = to_complex(&h.clone().try_inverse().ok_or(Error::SingularMatrix)?);
    let hc = to_complex(h);
    Ok((m.transpose() * h_inv * n.map(|v| v.conj()) * hc).trace())
}

/// Complex-bilinear extension (no conjugation): `tr(M^t H^{-1} N H)`.
pub fn iota_pair_bilinear(
    h: &DMatrix<f64>,
    m: &DMatrix<Complex64>,
    n: &DMatrix<Complex64>,
) -> Result<Complex64> {
    let h_inv = to_complex(&h.clone().try_inverse().ok_or(Error::SingularMatrix)?);
    let hc = to_complex(h);
    Ok((m.transpose() * h_inv * n * hc).trace())
}

/// Dual-basis coefficients of the sharp of `m`: `coeffs[j] = iota(m, E_j)`.
pub fn sharp(h: &DMatrix<f64>, m: &DMatrix<f64>, basis: &OrderedBasis) -> Result<Vec<f64>> {
    basis
        .elements
        .iter()
        .map(|e| iota_pair(h, m, e))
        .collect()
}

/// Sharp of a complexified element, extended complex-bilinearly: the real
/// basis matrices are not conjugated.
pub fn sharp_bilinear(
    h: &DMatrix<f64>,
    m: &DMatrix<Complex64>,
    basis: &OrderedBasis,
) -> Result<Vec<Complex64>> {
    basis
        .elements
        .iter()
        .map(|e| iota_pair_bilinear(h, m, &to_complex(e)))
        .collect()
}

/// `L M L^{-1}`.
pub fn conjugate(l: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let l_inv = l.clone().try_inverse().ok_or(Error::SingularMatrix)?;
    Ok(l * m * l_inv)
}

/// For each basis element, finds `(k, sign)` with `L E_j L^{-1} = sign E_k`,
/// or `None` when the conjugated element is not proportional to a single
/// basis element.
pub fn sign_table(
    l: &DMatrix<f64>,
    basis: &OrderedBasis,
    tol: f64,
) -> Result<Vec<Option<(usize, f64)>>> {
    let mut out = Vec::with_capacity(basis.len());
    for e in &basis.elements {
        let conj = conjugate(l, e)?;
        let coords = basis.coordinates(&conj);
        // Residual of the least-squares representation.
        let mut recon = DMatrix::zeros(conj.nrows(), conj.ncols());
        for (c, b) in coords.iter().zip(&basis.elements) {
            recon += b * *c;
        }
        if max_abs(&(recon - &conj)) > tol {
            out.push(None);
            continue;
        }
        let mut hit = None;
        let mut clean = true;
        for (k, &c) in coords.iter().enumerate() {
            if c.abs() > tol {
                if (c.abs() - 1.0).abs() > tol || hit.is_some() {
                    clean = false;
                    break;
                }
                hit = Some((k, if c > 0.0 { 1.0 } else { -1.0 }));
            }
        }
        out.push(if clean { hit } else { None });
    }
    Ok(out)
}
