//! Indefinite inner-product spaces on `R^{p+q}`.
//!
//! Provides the standard diagonal form of signature `(2, n+1)` together with
//! the two twisted forms carried by spaces of homogeneous polynomials, plus
//! isometry tests, the identity-component criterion and indefinite
//! Gram-Schmidt.

use alloc::string::ToString;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_traits::Float;

use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEGENERACY_TOL: f64 = 1e-8;

/// A non-degenerate symmetric bilinear form on `R^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSpace {
    pub dim: usize,
    pub gram: DMatrix<f64>,
    pub signature: (usize, usize),
}

impl QuadraticSpace {
    /// Builds a space from a symmetric Gram matrix, computing the signature.
    pub fn new(gram: DMatrix<f64>) -> Result<Self> {
        let dim = gram.nrows();
        if gram.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: gram.ncols(),
            });
        }
        if (&gram - gram.transpose()).iter().any(|v| *v != 0.0) {
            return Err(Error::InvalidParameter("gram matrix is not symmetric".to_string()));
        }
        if gram.determinant().abs() <= 1e-12 {
            return Err(Error::SingularMatrix);
        }
        let eig = gram.clone().symmetric_eigen();
        let p = eig.eigenvalues.iter().filter(|&&l| l > 0.0).count();
        let q = dim - p;
        Ok(QuadraticSpace {
            dim,
            gram,
            signature: (p, q),
        })
    }

    /// The standard form `diag(1, 1, -1, ..., -1)` of signature `(2, n+1)`.
    pub fn standard_space(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("standard_space requires n >= 2".to_string()));
        }
        let dim = n + 3;
        let mut gram = DMatrix::zeros(dim, dim);
        gram[(0, 0)] = 1.0;
        gram[(1, 1)] = 1.0;
        for i in 2..dim {
            gram[(i, i)] = -1.0;
        }
        Ok(QuadraticSpace {
            dim,
            gram,
            signature: (2, n + 1),
        })
    }

    /// The signature-(2,1) form `b2(v,w) = v2 w2 / 2 - v1 w3 - v3 w1` on
    /// degree-two homogeneous polynomials in the basis `{x^2, xy, y^2}`.
    pub fn b2_space() -> Self {
        let gram = DMatrix::from_row_slice(
            3,
            3,
            &[0.0, 0.0, -1.0, 0.0, 0.5, 0.0, -1.0, 0.0, 0.0],
        );
        QuadraticSpace {
            dim: 3,
            gram,
            signature: (2, 1),
        }
    }

    /// The signature-(2,3) form
    /// `b4(v,w) = -v3 w3 / 6 - v1 w5 - v5 w1 + v2 w4 / 4 + v4 w2 / 4` on
    /// degree-four homogeneous polynomials in the basis `{x^4, ..., y^4}`.
    pub fn b4_space() -> Self {
        let mut gram = DMatrix::zeros(5, 5);
        gram[(0, 4)] = -1.0;
        gram[(4, 0)] = -1.0;
        gram[(1, 3)] = 0.25;
        gram[(3, 1)] = 0.25;
        gram[(2, 2)] = -1.0 / 6.0;
        QuadraticSpace {
            dim: 5,
            gram,
            signature: (2, 3),
        }
    }

    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        if y.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: y.len(),
            });
        }
        Ok((x.transpose() * &self.gram * y)[(0, 0)])
    }

    /// True iff `M^t G M = G` entrywise within `tol` and `det M = 1`.
    pub fn is_isometry(&self, m: &DMatrix<f64>, tol: f64) -> Result<bool> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.nrows(),
            });
        }
        let resid = m.transpose() * &self.gram * m - &self.gram;
        let ok = crate::numeric::max_abs(&resid) <= tol && (m.determinant() - 1.0).abs() <= tol;
        Ok(ok)
    }

    /// A congruence `S` with `S^t G S = diag(1,...,1,-1,...,-1)` (positive
    /// directions first), built from the symmetric eigendecomposition.
    pub fn diagonalizing_congruence(&self) -> DMatrix<f64> {
        let eig = self.gram.clone().symmetric_eigen();
        // Order eigenpairs: positive eigenvalues first.
        let mut idx: Vec<usize> = (0..self.dim).collect();
        idx.sort_by(|&a, &b| {
            let (la, lb) = (eig.eigenvalues[a], eig.eigenvalues[b]);
            lb.partial_cmp(&la).unwrap()
        });
        let mut s = DMatrix::zeros(self.dim, self.dim);
        for (col, &i) in idx.iter().enumerate() {
            let scale = 1.0 / Float::sqrt(eig.eigenvalues[i].abs());
            for r in 0..self.dim {
                s[(r, col)] = eig.eigenvectors[(r, i)] * scale;
            }
        }
        s
    }

    /// Identity-component test for `O(p, q)`: in a basis diagonalizing the
    /// form, both the upper-left `p x p` and lower-right `q x q` blocks must
    /// have positive determinant. Twisted forms are congruence-diagonalized
    /// first.
    pub fn in_identity_component(&self, m: &DMatrix<f64>, tol: f64) -> Result<bool> {
        if !self.is_isometry(m, tol)? {
            return Err(Error::NotAnIsometry);
        }
        let diagonal_already = {
            let mut d = true;
            for i in 0..self.dim {
                for j in 0..self.dim {
                    if i != j && self.gram[(i, j)] != 0.0 {
                        d = false;
                    }
                }
            }
            d
        };
        let (p, _q) = self.signature;
        let md = if diagonal_already {
            m.clone()
        } else {
            let s = self.diagonalizing_congruence();
            let s_inv = s
                .clone()
                .try_inverse()
                .ok_or(Error::SingularMatrix)?;
            &s_inv * m * &s
        };
        let upper = md.view((0, 0), (p, p)).into_owned();
        let lower = md.view((p, p), (self.dim - p, self.dim - p)).into_owned();
        Ok(upper.determinant() > 0.0 && lower.determinant() > 0.0)
    }

    /// Gram-Schmidt with respect to the indefinite form. Each output vector
    /// has self-inner-product equal to the requested sign, and the outputs
    /// are pairwise orthogonal.
    pub fn signed_orthonormalize(
        &self,
        vectors: &[DVector<f64>],
        expected_signs: &[f64],
        tol: f64,
    ) -> Result<Vec<DVector<f64>>> {
        if vectors.len() != expected_signs.len() {
            return Err(Error::DimensionMismatch {
                expected: vectors.len(),
                found: expected_signs.len(),
            });
        }
        let mut out: Vec<DVector<f64>> = Vec::with_capacity(vectors.len());
        for (i, v) in vectors.iter().enumerate() {
            let mut w = v.clone();
            for u in &out {
                let sign = self.inner(u, u)?;
                let proj = self.inner(u, &w)? / sign;
                w -= u * proj;
            }
            let norm = self.inner(&w, &w)?;
            if norm.abs() < DEGENERACY_TOL {
                return Err(Error::DegenerateVector { norm: norm.abs() });
            }
            let sign = if norm > 0.0 { 1.0 } else { -1.0 };
            if (sign - expected_signs[i]).abs() > tol {
                return Err(Error::SignMismatch {
                    index: i,
                    expected: expected_signs[i],
                    found: sign,
                });
            }
            out.push(w / Float::sqrt(norm.abs()));
        }
        Ok(out)
    }
}
