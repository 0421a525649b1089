//! The hyperbolic plane, the reducible and irreducible representations of
//! `PSL(2,R)` into `SO_0(2,3)`, the explicit equivariant maximal embeddings
//! into `H^{2,2}` (including the twisted polynomial models), and numerical
//! surface geometry.

use alloc::string::ToString;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, Matrix2};
use num_traits::Float;

use crate::jet::{ChartScalar, Jet2};
use crate::liealg;
use crate::numeric::expm;
use crate::quadspace::QuadraticSpace;
use crate::{Error, Result};

/// A point `z = x + iy` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UHPoint {
    pub x: f64,
    pub y: f64,
}

impl UHPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if y > 0.0 {
            Ok(UHPoint { x, y })
        } else {
            Err(Error::InvalidParameter("upper half-plane requires y > 0".to_string()))
        }
    }

    pub fn i() -> Self {
        UHPoint { x: 0.0, y: 1.0 }
    }
}

/// Moebius action of a determinant-one matrix on the upper half-plane.
pub fn moebius_apply(a: &Matrix2<f64>, z: UHPoint) -> UHPoint {
    let (p, q, r, s) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    // (az + b) / (cz + d) with z = x + iy.
    let den = (r * z.x + s) * (r * z.x + s) + (r * z.y) * (r * z.y);
    let nx = (p * z.x + q) * (r * z.x + s) + p * z.y * r * z.y;
    let ny = z.y * (p * s - q * r);
    UHPoint {
        x: nx / den,
        y: ny / den,
    }
}

/// The upper-triangular matrix `(1/sqrt(y)) [[y, x], [0, 1]]` sending `i` to
/// `z = x + iy`.
pub fn point_to_matrix(z: UHPoint) -> Matrix2<f64> {
    let s = 1.0 / Float::sqrt(z.y);
    Matrix2::new(z.y * s, z.x * s, 0.0, s)
}

// ---------------------------------------------------------------------------
// Chart maps, generic over plain values and jets.
// ---------------------------------------------------------------------------

/// The totally geodesic embedding onto the hyperboloid `x4 = x5 = 0`.
pub fn fuchsian_chart<S: ChartScalar>(x: S, y: S) -> Vec<S> {
    let one = S::lift(1.0);
    let two = S::lift(2.0);
    let r = x * x + y * y;
    alloc::vec![
        x / y,
        (r - one) / (two * y),
        (r + one) / (two * y),
        S::lift(0.0),
        S::lift(0.0),
    ]
}

/// The irreducible (Veronese) embedding in the standard model.
pub fn hitchin_chart<S: ChartScalar>(x: S, y: S) -> Vec<S> {
    let one = S::lift(1.0);
    let two = S::lift(2.0);
    let three = S::lift(3.0);
    let s3 = S::lift(Float::sqrt(3.0f64));
    let pref = s3 / (two * y * y);
    let r = x * x + y * y;
    alloc::vec![
        pref * (x * (one + r)),
        pref * ((r * r - one) / two),
        pref * ((s3 / three) * (y * y + three * x * x)),
        pref * (x * (r - one)),
        pref * ((one + r * r) / two),
    ]
}

/// The equivariant curve in the twisted hyperboloid of the `b2` model.
pub fn g_tilde_chart<S: ChartScalar>(x: S, y: S) -> Vec<S> {
    let half_sqrt2 = S::lift(Float::sqrt(2.0f64) / 2.0);
    let r = x * x + y * y;
    alloc::vec![half_sqrt2 * (r / y), half_sqrt2 * (S::lift(2.0) * x / y), half_sqrt2 / y]
}

/// Coefficients of the square of a degree-two polynomial, normalized to
/// `b4`-norm `-1`.
pub fn veronese_square_chart<S: ChartScalar>(p: &[S]) -> Vec<S> {
    let two = S::lift(2.0);
    let raw = [
        p[0] * p[0],
        two * p[0] * p[1],
        p[1] * p[1] + two * p[0] * p[2],
        two * p[1] * p[2],
        p[2] * p[2],
    ];
    // -b4(raw, raw), guaranteed positive for negative-discriminant input.
    let norm = raw[2] * raw[2] / S::lift(6.0) + two * raw[0] * raw[4]
        - raw[1] * raw[3] / two;
    let scale = S::lift(1.0) / norm.sqrt();
    raw.iter().map(|&c| c * scale).collect()
}

/// Projective-representative square map `[P] -> [P^2]`, rescaled to
/// `b4`-norm exactly `-1`. Rejects inputs that are not negative-discriminant
/// (i.e. not in the time-like cone of `b2`).
pub fn veronese_square(p: &DVector<f64>) -> Result<DVector<f64>> {
    let b2 = QuadraticSpace::b2_space();
    if b2.inner(p, p)? >= 0.0 {
        return Err(Error::InvalidParameter(
            "veronese_square requires b2(P, P) < 0".to_string(),
        ));
    }
    let coeffs = veronese_square_chart(&[p[0], p[1], p[2]]);
    Ok(DVector::from_vec(coeffs))
}

// ---------------------------------------------------------------------------
// Representations.
// ---------------------------------------------------------------------------

/// The reducible representation `PSL(2,R) -> SO_0(2,1) < SO_0(2,3)`.
pub fn phi_block(m: &Matrix2<f64>) -> DMatrix<f64> {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let mut out = DMatrix::identity(5, 5);
    let block = [
        [a * d + b * c, a * c - b * d, a * c + b * d],
        [
            a * b - c * d,
            (a * a - b * b - c * c + d * d) / 2.0,
            (a * a + b * b - c * c - d * d) / 2.0,
        ],
        [
            a * b + c * d,
            (a * a - b * b + c * c - d * d) / 2.0,
            (a * a + b * b + c * c + d * d) / 2.0,
        ],
    ];
    for i in 0..3 {
        for j in 0..3 {
            out[(i, j)] = block[i][j];
        }
    }
    out
}

/// The Lie algebra map induced by `phi_block` on traceless 2x2 matrices.
pub fn phi_block_star(x: &Matrix2<f64>) -> Result<DMatrix<f64>> {
    if (x[(0, 0)] + x[(1, 1)]).abs() > 1e-12 {
        return Err(Error::InvalidParameter("phi_block_star requires trace zero".to_string()));
    }
    let (a, b, c) = (x[(0, 0)], x[(0, 1)], x[(1, 0)]);
    let mut out = DMatrix::zeros(5, 5);
    let block = [
        [0.0, c - b, c + b],
        [b - c, 0.0, 2.0 * a],
        [b + c, 2.0 * a, 0.0],
    ];
    for i in 0..3 {
        for j in 0..3 {
            out[(i, j)] = block[i][j];
        }
    }
    Ok(out)
}

/// The irreducible representation evaluated on the upper-triangular family
/// `point_to_matrix(z)`, computed from the factorization
/// `point_to_matrix(z) = exp(x e) exp(log(y) h)` with `e = [[0,1],[0,0]]` and
/// `h = diag(1/2, -1/2)`, pushed through the Lie algebra map.
pub fn phi_irr_family(z: UHPoint) -> DMatrix<f64> {
    let e_star = liealg::phi_irr_star_entries(0.0, 1.0, 0.0);
    let h_star = liealg::phi_irr_star_entries(0.5, 0.0, 0.0);
    expm(&(e_star * z.x)) * expm(&(h_star * Float::ln(z.y)))
}

/// A closed-form tabulation of [`phi_irr_family`]; kept for cross-checking
/// (it disagrees with the factorized product at a few entries away from the
/// imaginary axis).
pub fn phi_irr_family_tabulated(z: UHPoint) -> DMatrix<f64> {
    let (x, y) = (z.x, z.y);
    let s3 = Float::sqrt(3.0f64);
    let x2 = x * x;
    let y2 = y * y;
    let x3 = x2 * x;
    let x4 = x2 * x2;
    let y4 = y2 * y2;
    DMatrix::from_row_slice(
        5,
        5,
        &[
            (1.0 + 3.0 * x2 + y2) / (2.0 * y),
            -x * (1.0 + x2) / y2,
            s3 * x,
            -(-1.0 - 3.0 * x2 + y2) / (2.0 * y),
            x * (1.0 + x2) / y2,
            //
            x * y + x3 / y,
            (1.0 - x4 + y4) / (2.0 * y2),
            s3 * x2,
            x * y - x3 / y,
            (-1.0 + x4 + y4) / (2.0 * y2),
            //
            s3 * x / y,
            -s3 * x2 / y2,
            1.0,
            -s3 * x / y,
            s3 * x2 / y2,
            //
            (-1.0 + 3.0 * x2 + y2) / (2.0 * y),
            x * (1.0 - x2) / y2,
            s3 * x,
            (1.0 - 3.0 * x2 + y2) / (2.0 * y),
            x * (-1.0 + x2) / y2,
            //
            x * y + x3 / y,
            -(1.0 + x4 - y4) / (2.0 * y2),
            s3 * x2,
            x * y - x3 / y,
            (1.0 + x4 + y4) / (2.0 * y2),
        ],
    )
}

/// The Lie algebra map induced by `phi_irr` on traceless 2x2 matrices.
pub fn phi_irr_star(x: &Matrix2<f64>) -> Result<DMatrix<f64>> {
    if (x[(0, 0)] + x[(1, 1)]).abs() > 1e-12 {
        return Err(Error::InvalidParameter("phi_irr_star requires trace zero".to_string()));
    }
    Ok(liealg::phi_irr_star_entries(x[(0, 0)], x[(0, 1)], x[(1, 0)]))
}

/// The irreducible representation on an arbitrary determinant-one matrix,
/// via the Iwasawa factorization `A = point_to_matrix(A . i) K` with `K` a
/// rotation, and the one-parameter subgroup generated by the compact
/// generator on the rotation part.
pub fn phi_irr(a: &Matrix2<f64>) -> DMatrix<f64> {
    let z = moebius_apply(a, UHPoint::i());
    let p = point_to_matrix(z);
    let k = p.try_inverse().expect("triangular with positive diagonal") * a;
    let theta = Float::atan2(k[(0, 1)], k[(0, 0)]);
    let gen = phi_irr_star(&Matrix2::new(0.0, 1.0, -1.0, 0.0)).unwrap();
    phi_irr_family(z) * expm(&(gen * theta))
}

/// Action of `PSL(2,R)` on homogeneous polynomials of degree `d` in the
/// monomial basis `x^d, x^{d-1} y, ..., y^d`, by the substitution
/// `P(x, y) -> P(a x + c y, b x + d y)`.
pub fn sym_power_rep(m: &Matrix2<f64>, d: usize) -> DMatrix<f64> {
    let (a, b, c, dd) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let dim = d + 1;
    let mut out = DMatrix::zeros(dim, dim);
    // Column j: coefficients of (a x + c y)^{d-j} (b x + d y)^j.
    for j in 0..dim {
        let mut col = alloc::vec![0.0f64; dim];
        // Expand the two binomials and convolve by total y-degree.
        for s in 0..=(d - j) {
            let c1 = binom(d - j, s) * Float::powi(a, (d - j - s) as i32) * Float::powi(c, s as i32);
            for t in 0..=j {
                let c2 = binom(j, t) * Float::powi(b, (j - t) as i32) * Float::powi(dd, t as i32);
                col[s + t] += c1 * c2;
            }
        }
        for (i, v) in col.iter().enumerate() {
            out[(i, j)] = *v;
        }
    }
    out
}

fn binom(n: usize, k: usize) -> f64 {
    let mut v = 1.0f64;
    for i in 0..k {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v
}

/// The degree-two symmetric power (the printed 3x3 matrix).
pub fn tau_tilde(m: &Matrix2<f64>) -> DMatrix<f64> {
    sym_power_rep(m, 2)
}

// ---------------------------------------------------------------------------
// Embeddings as first-class values.
// ---------------------------------------------------------------------------

/// The three explicit equivariant surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceModel {
    /// Totally geodesic plane in the standard model, block holonomy.
    FuchsianF,
    /// Irreducible (Veronese) surface in the standard model.
    HitchinF,
    /// The squared-polynomial surface in the `b4` model.
    VeroneseChain,
}

impl SurfaceModel {
    pub fn target_space(&self) -> QuadraticSpace {
        match self {
            SurfaceModel::FuchsianF | SurfaceModel::HitchinF => {
                QuadraticSpace::standard_space(2).unwrap()
            }
            SurfaceModel::VeroneseChain => QuadraticSpace::b4_space(),
        }
    }

    fn chart<S: ChartScalar>(&self, x: S, y: S) -> Vec<S> {
        match self {
            SurfaceModel::FuchsianF => fuchsian_chart(x, y),
            SurfaceModel::HitchinF => hitchin_chart(x, y),
            SurfaceModel::VeroneseChain => {
                let g = g_tilde_chart(x, y);
                veronese_square_chart(&g)
            }
        }
    }

    pub fn embed(&self, z: UHPoint) -> DVector<f64> {
        DVector::from_vec(self.chart(z.x, z.y))
    }

    /// Chart map evaluated on second-order jets seeded at `z`.
    pub fn embed_jets(&self, z: UHPoint) -> Vec<Jet2> {
        self.chart(Jet2::var_x(z.x), Jet2::var_y(z.y))
    }

    /// The holonomy representation matching the embedding's equivariance.
    pub fn holonomy(&self, a: &Matrix2<f64>) -> DMatrix<f64> {
        match self {
            SurfaceModel::FuchsianF => phi_block(a),
            SurfaceModel::HitchinF => phi_irr(a),
            SurfaceModel::VeroneseChain => sym_power_rep(a, 4),
        }
    }
}

// ---------------------------------------------------------------------------
// Surface geometry.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference { step: f64 },
}

/// Pointwise extrinsic geometry of an embedded space-like surface.
#[derive(Debug, Clone)]
pub struct SurfaceGeometry {
    /// Induced metric in chart coordinates.
    pub g_t: Matrix2<f64>,
    /// Orthonormal tangent frame.
    pub u1: DVector<f64>,
    pub u2: DVector<f64>,
    /// Unit time-like normals.
    pub normals: Vec<DVector<f64>>,
    /// Second fundamental form components `pi[k][(i, j)]` against normal k.
    pub second_fundamental: Vec<Matrix2<f64>>,
    /// Shape operator components `b[k][(j, i)] = coefficient of d_j in B(d_i, N_k)`.
    pub shape_operator: Vec<Matrix2<f64>>,
    /// Mean curvature vector in ambient coordinates.
    pub mean_curvature: DVector<f64>,
}

struct ChartDerivatives {
    dx: DVector<f64>,
    dy: DVector<f64>,
    dxx: DVector<f64>,
    dxy: DVector<f64>,
    dyy: DVector<f64>,
}

fn derivatives(model: SurfaceModel, z: UHPoint, mode: DerivativeMode) -> ChartDerivatives {
    match mode {
        DerivativeMode::Analytic => {
            let jets = model.embed_jets(z);
            ChartDerivatives {
                dx: DVector::from_iterator(jets.len(), jets.iter().map(|j| j.dx)),
                dy: DVector::from_iterator(jets.len(), jets.iter().map(|j| j.dy)),
                dxx: DVector::from_iterator(jets.len(), jets.iter().map(|j| j.dxx)),
                dxy: DVector::from_iterator(jets.len(), jets.iter().map(|j| j.dxy)),
                dyy: DVector::from_iterator(jets.len(), jets.iter().map(|j| j.dyy)),
            }
        }
        DerivativeMode::FiniteDifference { step } => {
            let h = step * Float::max(1.0, z.y);
            let at = |dx: f64, dy: f64| model.embed(UHPoint { x: z.x + dx, y: z.y + dy });
            let c = model.embed(z);
            let dx = (at(h, 0.0) - at(-h, 0.0)) / (2.0 * h);
            let dy = (at(0.0, h) - at(0.0, -h)) / (2.0 * h);
            // Second derivatives use a wider step (square root of the first
            // derivative step) to control roundoff amplification by 1/h^2,
            // plus one Richardson extrapolation level.
            let h2 = Float::sqrt(h);
            let second = |f: &dyn Fn(f64) -> DVector<f64>| {
                let d2 = |hh: f64| (f(hh) - &c * 2.0 + f(-hh)) / (hh * hh);
                (d2(h2 / 2.0) * 4.0 - d2(h2)) / 3.0
            };
            let dxx = second(&|hh| at(hh, 0.0));
            let dyy = second(&|hh| at(0.0, hh));
            let mixed = |hh: f64| {
                (at(hh, hh) - at(hh, -hh) - at(-hh, hh) + at(-hh, -hh)) / (4.0 * hh * hh)
            };
            let dxy = (mixed(h2 / 2.0) * 4.0 - mixed(h2)) / 3.0;
            ChartDerivatives { dx, dy, dxx, dxy, dyy }
        }
    }
}

/// Computes induced metric, frames, second fundamental form, shape operator
/// and mean curvature at `z`.
pub fn surface_geometry(
    model: SurfaceModel,
    z: UHPoint,
    mode: DerivativeMode,
) -> Result<SurfaceGeometry> {
    let space = model.target_space();
    let e = model.embed(z);
    let d = derivatives(model, z, mode);

    let g11 = space.inner(&d.dx, &d.dx)?;
    let g12 = space.inner(&d.dx, &d.dy)?;
    let g22 = space.inner(&d.dy, &d.dy)?;
    let g_t = Matrix2::new(g11, g12, g12, g22);
    if g11 <= 0.0 || g_t.determinant() <= 0.0 {
        return Err(Error::InvalidParameter(
            "point is not space-like: induced metric not positive-definite".to_string(),
        ));
    }

    let tangent = space.signed_orthonormalize(&[d.dx.clone(), d.dy.clone()], &[1.0, 1.0], 1e-6)?;
    let (u1, u2) = (tangent[0].clone(), tangent[1].clone());

    // Normal space: kernel of the 3 x dim pairing matrix against u1, u2, e.
    let dim = space.dim;
    let mut pairing = DMatrix::zeros(3, dim);
    for (row, v) in [&u1, &u2, &e].iter().enumerate() {
        let gv = &space.gram * *v;
        for col in 0..dim {
            pairing[(row, col)] = gv[col];
        }
    }
    // Kernel of the pairing matrix: eigenvectors of pairing^t pairing with
    // (numerically) zero eigenvalue.
    let normal_eq = pairing.transpose() * &pairing;
    let eig = normal_eq.symmetric_eigen();
    let mut indexed: Vec<usize> = (0..dim).collect();
    indexed.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("finite eigenvalues")
    });
    // Kernel cutoff scales with the largest eigenvalue: the chart map grows
    // like x^4 / y, so an absolute threshold misfires near the chart edges.
    let scale = eig.eigenvalues.amax().max(1.0);
    let mut kernel: Vec<DVector<f64>> = Vec::new();
    for &idx in indexed.iter().take(dim - 3) {
        if eig.eigenvalues[idx].abs() > 1e-12 * scale {
            return Err(Error::SingularMatrix);
        }
        kernel.push(eig.eigenvectors.column(idx).into_owned());
    }
    // The eigenvectors carry O(eps * cond) components along the tangent
    // frame; project them out explicitly (twice, for good measure) so the
    // second fundamental form is clean even where the chart map is large.
    for n in &mut kernel {
        for _ in 0..2 {
            for v in [&u1, &u2, &e] {
                let proj = space.inner(n, v)? / space.inner(v, v)?;
                *n -= v * proj;
            }
        }
    }
    let signs = alloc::vec![-1.0; kernel.len()];
    let normals = space.signed_orthonormalize(&kernel, &signs, 1e-6)?;

    // Second fundamental form against each unit time-like normal.
    let seconds = [[&d.dxx, &d.dxy], [&d.dxy, &d.dyy]];
    let mut second_fundamental = Vec::with_capacity(normals.len());
    for nk in &normals {
        let mut pi = Matrix2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                pi[(i, j)] = -space.inner(seconds[i][j], nk)?;
            }
        }
        second_fundamental.push(pi);
    }

    let g_inv = g_t.try_inverse().ok_or(Error::SingularMatrix)?;
    let mut mean_curvature = DVector::zeros(dim);
    for (k, nk) in normals.iter().enumerate() {
        let pi = &second_fundamental[k];
        let tr = g_inv[(0, 0)] * pi[(0, 0)]
            + 2.0 * g_inv[(0, 1)] * pi[(0, 1)]
            + g_inv[(1, 1)] * pi[(1, 1)];
        mean_curvature += nk * tr;
    }

    // Shape operator by index raising: g_T(d_j, B(d_i, N_k)) = -Pi^k_{ij}.
    let mut shape_operator = Vec::with_capacity(normals.len());
    for pi in &second_fundamental {
        let mut b = Matrix2::zeros();
        for i in 0..2 {
            let rhs = nalgebra::Vector2::new(-pi[(i, 0)], -pi[(i, 1)]);
            let coeffs = g_inv * rhs;
            b[(0, i)] = coeffs[0];
            b[(1, i)] = coeffs[1];
        }
        shape_operator.push(b);
    }

    Ok(SurfaceGeometry {
        g_t,
        u1,
        u2,
        normals,
        second_fundamental,
        shape_operator,
        mean_curvature,
    })
}

// ---------------------------------------------------------------------------
// Frames and the scalar-product matrix H.
// ---------------------------------------------------------------------------

/// Which closed form to use for the first and fourth entries of the second
/// normal of the irreducible surface. The printed first entry is
/// inconsistent with the fourth; both variants are kept so the
/// orthonormality test can report which one holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum N2Variant {
    /// First entry `x(x + x^2 - 3y^2) / 2y^2` as printed.
    Printed,
    /// First entry `x(1 + x^2 - 3y^2) / 2y^2`.
    Corrected,
}

/// Closed-form normal frame of the irreducible surface.
pub fn hitchin_n1(z: UHPoint) -> DVector<f64> {
    let (x, y) = (z.x, z.y);
    let s3 = Float::sqrt(3.0f64);
    DVector::from_row_slice(&[
        (-1.0 - 3.0 * x * x + y * y) / (2.0 * y),
        x / y * (y * y - x * x),
        -s3 * x / y,
        (1.0 - 3.0 * x * x + y * y) / (2.0 * y),
        x / y * (y * y - x * x),
    ])
}

pub fn hitchin_n2(z: UHPoint, variant: N2Variant) -> DVector<f64> {
    let (x, y) = (z.x, z.y);
    let s3 = Float::sqrt(3.0f64);
    let y2 = y * y;
    let first = match variant {
        N2Variant::Printed => x / (2.0 * y2) * (x + x * x - 3.0 * y2),
        N2Variant::Corrected => x / (2.0 * y2) * (1.0 + x * x - 3.0 * y2),
    };
    DVector::from_row_slice(&[
        first,
        (-1.0 + x.powi(4) - 6.0 * x * x * y2 + y2 * y2) / (4.0 * y2),
        s3 / 2.0 * (x * x / y2 - 1.0),
        x / (2.0 * y2) * (-1.0 + x * x - 3.0 * y2),
        (1.0 + x.powi(4) - 6.0 * x * x * y2 + y2 * y2) / (4.0 * y2),
    ])
}

/// The two surfaces for which the closed-form frame package exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameCase {
    FuchsianF,
    HitchinF,
}

/// Builds the frame matrix `P = [u1 u2 e N1 N2]` and the scalar-product
/// matrix `H = (P P^t)^{-1}` making the frame orthonormal.
pub fn frame_matrix(case: FrameCase, z: UHPoint) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let model = match case {
        FrameCase::FuchsianF => SurfaceModel::FuchsianF,
        FrameCase::HitchinF => SurfaceModel::HitchinF,
    };
    let space = model.target_space();
    let e = model.embed(z);
    let jets = model.embed_jets(z);
    let dx = DVector::from_iterator(5, jets.iter().map(|j| j.dx));
    let dy = DVector::from_iterator(5, jets.iter().map(|j| j.dy));
    let tangent = space.signed_orthonormalize(&[dx, dy], &[1.0, 1.0], 1e-6)?;
    let normals = match case {
        FrameCase::FuchsianF => {
            let mut n1 = DVector::zeros(5);
            n1[3] = 1.0;
            let mut n2 = DVector::zeros(5);
            n2[4] = 1.0;
            [n1, n2]
        }
        FrameCase::HitchinF => [hitchin_n1(z), hitchin_n2(z, N2Variant::Corrected)],
    };
    let mut p = DMatrix::zeros(5, 5);
    for (col, v) in [&tangent[0], &tangent[1], &e, &normals[0], &normals[1]]
        .iter()
        .enumerate()
    {
        for r in 0..5 {
            p[(r, col)] = v[r];
        }
    }
    let h = (&p * p.transpose())
        .try_inverse()
        .ok_or(Error::SingularMatrix)?;
    Ok((p, h))
}

/// The printed closed-form `H` of the totally geodesic case.
pub fn fuchsian_h_closed(z: UHPoint) -> DMatrix<f64> {
    let (x, y) = (z.x, z.y);
    let y2 = y * y;
    let r = x * x + y * y;
    let mut h = DMatrix::identity(5, 5);
    h[(0, 0)] = 2.0 * x * x / y2 + 1.0;
    h[(0, 1)] = x * (r - 1.0) / y2;
    h[(1, 0)] = h[(0, 1)];
    h[(0, 2)] = -x * (r + 1.0) / y2;
    h[(2, 0)] = h[(0, 2)];
    h[(1, 1)] = (r - 1.0) * (r - 1.0) / (2.0 * y2) + 1.0;
    h[(1, 2)] = -(r + 1.0) * (r - 1.0) / (2.0 * y2);
    h[(2, 1)] = h[(1, 2)];
    h[(2, 2)] = (r + 1.0) * (r + 1.0) / (2.0 * y2) - 1.0;
    h
}

/// The printed closed-form inverse of `fuchsian_h_closed`.
pub fn fuchsian_h_inv_closed(z: UHPoint) -> DMatrix<f64> {
    let mut h = fuchsian_h_closed(z);
    // Same entries with the sign of the third row/column off-diagonals flipped.
    h[(0, 2)] = -h[(0, 2)];
    h[(2, 0)] = -h[(2, 0)];
    h[(1, 2)] = -h[(1, 2)];
    h[(2, 1)] = -h[(2, 1)];
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::max_abs;
    use approx::assert_abs_diff_eq;

    #[test]
    fn moebius_basics() {
        let z = UHPoint::new(1.0, 2.0).unwrap();
        let a = point_to_matrix(z);
        let w = moebius_apply(&a, UHPoint::i());
        assert_abs_diff_eq!(w.x, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w.y, 2.0, epsilon = 1e-14);
        let rot = Matrix2::new(0.0, 1.0, -1.0, 0.0);
        let fixed = moebius_apply(&rot, UHPoint::i());
        assert_abs_diff_eq!(fixed.x, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(fixed.y, 1.0, epsilon = 1e-14);
        let p = point_to_matrix(UHPoint::new(0.0, 4.0).unwrap());
        assert_abs_diff_eq!(p[(0, 0)], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p[(1, 1)], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn embeddings_have_norm_minus_one() {
        for model in [
            SurfaceModel::FuchsianF,
            SurfaceModel::HitchinF,
            SurfaceModel::VeroneseChain,
        ] {
            let space = model.target_space();
            for &(x, y) in &[(0.0, 1.0), (1.0, 2.0), (-0.7, 0.4), (2.0, 3.5)] {
                let z = UHPoint::new(x, y).unwrap();
                let e = model.embed(z);
                assert_abs_diff_eq!(space.inner(&e, &e).unwrap(), -1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn printed_point_values() {
        let f_i = SurfaceModel::FuchsianF.embed(UHPoint::i());
        assert_abs_diff_eq!(
            (f_i - DVector::from_row_slice(&[0.0, 0.0, 1.0, 0.0, 0.0])).norm(),
            0.0,
            epsilon = 1e-14
        );
        let cap_f_i = SurfaceModel::HitchinF.embed(UHPoint::i());
        let expected = DVector::from_row_slice(&[0.0, 0.0, 0.5, 0.0, 3.0f64.sqrt() / 2.0]);
        assert_abs_diff_eq!((cap_f_i - expected).norm(), 0.0, epsilon = 1e-14);
        let g_i = g_tilde_chart(0.0f64, 1.0f64);
        let half = 2.0f64.sqrt() / 2.0;
        assert_abs_diff_eq!(g_i[0], half, epsilon = 1e-14);
        assert_abs_diff_eq!(g_i[1], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g_i[2], half, epsilon = 1e-14);
    }

    #[test]
    fn veronese_square_values() {
        let half = 2.0f64.sqrt() / 2.0;
        let p = DVector::from_row_slice(&[half, 0.0, half]);
        let sq = veronese_square(&p).unwrap();
        let scale = (3.0f64 / 2.0).sqrt();
        let expected = DVector::from_row_slice(&[0.5, 0.0, 1.0, 0.0, 0.5]) * scale;
        assert_abs_diff_eq!((sq - expected).norm(), 0.0, epsilon = 1e-12);
        let bad = DVector::from_row_slice(&[1.0, 0.0, 0.0]);
        assert!(veronese_square(&bad).is_err());
    }

    #[test]
    fn representations_are_isometries_and_homomorphisms() {
        let space = QuadraticSpace::standard_space(2).unwrap();
        let a = Matrix2::new(1.3, 0.4, 0.7, (1.0 + 0.4 * 0.7) / 1.3);
        let b = point_to_matrix(UHPoint::new(-0.3, 2.1).unwrap());
        for rep in [phi_block as fn(&Matrix2<f64>) -> DMatrix<f64>, phi_irr] {
            let ra = rep(&a);
            assert!(space.is_isometry(&ra, 1e-9).unwrap());
            assert!(space.in_identity_component(&ra, 1e-9).unwrap());
            let resid = max_abs(&(rep(&(a * b)) - rep(&a) * rep(&b)));
            assert!(resid <= 1e-9, "homomorphism residual {resid}");
        }
        // Well-defined on PSL: A and -A agree.
        let resid = max_abs(&(phi_irr(&(a * -1.0)) - phi_irr(&a)));
        assert!(resid <= 1e-9);
    }

    #[test]
    fn phi_irr_matches_family_and_star() {
        let z = UHPoint::new(1.0, 2.0).unwrap();
        let resid = max_abs(&(phi_irr(&point_to_matrix(z)) - phi_irr_family(z)));
        assert!(resid <= 1e-12);
        // Finite-difference derivative of t -> phi_irr(exp(tX)) at 0.
        let x = Matrix2::new(0.2, 0.5, -0.3, -0.2);
        let t = 1e-6;
        let exp_p = Matrix2::new(
            1.0 + t * x[(0, 0)],
            t * x[(0, 1)],
            t * x[(1, 0)],
            1.0 + t * x[(1, 1)],
        );
        // Normalize determinant to 1 at first order (already is to O(t^2)).
        let fd = (phi_irr(&exp_p) - DMatrix::identity(5, 5)) / t;
        let resid = max_abs(&(fd - phi_irr_star(&x).unwrap()));
        assert!(resid <= 1e-5, "residual {resid}");
    }

    #[test]
    fn equivariance_of_all_models() {
        let a = point_to_matrix(UHPoint::new(0.6, 1.4).unwrap());
        for model in [
            SurfaceModel::FuchsianF,
            SurfaceModel::HitchinF,
            SurfaceModel::VeroneseChain,
        ] {
            for &(x, y) in &[(0.0, 1.0), (0.5, 0.8), (-1.2, 2.0)] {
                let z = UHPoint::new(x, y).unwrap();
                let lhs = model.embed(moebius_apply(&a, z));
                let rhs = model.holonomy(&a) * model.embed(z);
                assert_abs_diff_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn tau_tilde_preserves_b2() {
        let b2 = QuadraticSpace::b2_space();
        let a = Matrix2::new(1.1, -0.3, 0.4, (1.0 - 0.3 * 0.4) / 1.1);
        let t = tau_tilde(&a);
        assert!(b2.is_isometry(&t, 1e-10).unwrap());
        let id = tau_tilde(&Matrix2::identity());
        assert_abs_diff_eq!(max_abs(&(id - DMatrix::identity(3, 3))), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn fuchsian_geometry_is_flat_in_normal_directions() {
        let z = UHPoint::new(0.7, 1.3).unwrap();
        let geo = surface_geometry(SurfaceModel::FuchsianF, z, DerivativeMode::Analytic).unwrap();
        for pi in &geo.second_fundamental {
            assert!(max_abs(&DMatrix::from_row_slice(2, 2, pi.as_slice())) <= 1e-10);
        }
        assert!(geo.mean_curvature.norm() <= 1e-10);
    }

    #[test]
    fn hitchin_geometry_is_maximal_and_conformal() {
        for &(x, y) in &[(0.0, 1.0), (1.0, 2.0), (-0.4, 0.6)] {
            let z = UHPoint::new(x, y).unwrap();
            let geo = surface_geometry(SurfaceModel::HitchinF, z, DerivativeMode::Analytic).unwrap();
            assert!(geo.mean_curvature.norm() <= 1e-9, "mean curvature at ({x},{y})");
            assert_abs_diff_eq!(geo.g_t[(0, 1)], 0.0, epsilon = 1e-10);
            assert_abs_diff_eq!(geo.g_t[(0, 0)], geo.g_t[(1, 1)], epsilon = 1e-10);
            // Symmetry and compatibility between Pi and B.
            for (pi, b) in geo.second_fundamental.iter().zip(&geo.shape_operator) {
                assert_abs_diff_eq!(pi[(0, 1)], pi[(1, 0)], epsilon = 1e-10);
                for i in 0..2 {
                    for j in 0..2 {
                        let lhs = -pi[(i, j)];
                        let rhs = geo.g_t[(j, 0)] * b[(0, i)] + geo.g_t[(j, 1)] * b[(1, i)];
                        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn finite_difference_mode_agrees_with_jets() {
        let z = UHPoint::new(0.3, 1.7).unwrap();
        let a = surface_geometry(SurfaceModel::HitchinF, z, DerivativeMode::Analytic).unwrap();
        let f = surface_geometry(
            SurfaceModel::HitchinF,
            z,
            DerivativeMode::FiniteDifference { step: 1e-5 },
        )
        .unwrap();
        assert_abs_diff_eq!(a.g_t[(0, 0)], f.g_t[(0, 0)], epsilon = 1e-7);
        assert!(f.mean_curvature.norm() <= 1e-6);
    }

    #[test]
    fn veronese_chain_is_maximal() {
        for &(x, y) in &[(0.0, 1.0), (0.8, 1.5), (-0.5, 0.7)] {
            let z = UHPoint::new(x, y).unwrap();
            let geo =
                surface_geometry(SurfaceModel::VeroneseChain, z, DerivativeMode::Analytic).unwrap();
            assert!(geo.mean_curvature.norm() <= 1e-9);
        }
    }

    #[test]
    fn fuchsian_frame_reproduces_printed_h() {
        let z = UHPoint::new(1.0, 2.0).unwrap();
        let (p, h) = frame_matrix(FrameCase::FuchsianF, z).unwrap();
        let closed = fuchsian_h_closed(z);
        assert!(max_abs(&(h.clone() - &closed)) <= 1e-10);
        assert_abs_diff_eq!(closed[(0, 0)], 1.5, epsilon = 1e-14);
        let inv = fuchsian_h_inv_closed(z);
        assert!(max_abs(&(&closed * inv - DMatrix::identity(5, 5))) <= 1e-10);
        // At i the frame is the canonical basis.
        let (_, h_i) = frame_matrix(FrameCase::FuchsianF, UHPoint::i()).unwrap();
        assert!(max_abs(&(h_i - DMatrix::identity(5, 5))) <= 1e-14);
        // P columns are H-orthonormal by construction.
        let gram = p.transpose() * &h * &p;
        assert!(max_abs(&(gram - DMatrix::identity(5, 5))) <= 1e-10);
    }

    #[test]
    fn hitchin_frame_orthonormal_with_corrected_n2() {
        let space = QuadraticSpace::standard_space(2).unwrap();
        for &(x, y) in &[(0.0, 1.0), (1.0, 2.0), (-0.6, 0.9)] {
            let z = UHPoint::new(x, y).unwrap();
            let e = SurfaceModel::HitchinF.embed(z);
            let n1 = hitchin_n1(z);
            let n2 = hitchin_n2(z, N2Variant::Corrected);
            assert_abs_diff_eq!(space.inner(&n1, &n1).unwrap(), -1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(space.inner(&n2, &n2).unwrap(), -1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(space.inner(&n1, &n2).unwrap(), 0.0, epsilon = 1e-9);
            assert_abs_diff_eq!(space.inner(&n1, &e).unwrap(), 0.0, epsilon = 1e-9);
            assert_abs_diff_eq!(space.inner(&n2, &e).unwrap(), 0.0, epsilon = 1e-9);
        }
        // The printed variant fails away from x = 0 (and from x = 1, where the
        // two variants coincide).
        let z = UHPoint::new(-0.6, 0.9).unwrap();
        let n2p = hitchin_n2(z, N2Variant::Printed);
        let bad = (space.inner(&n2p, &n2p).unwrap() + 1.0).abs();
        assert!(bad > 1e-6, "printed variant unexpectedly orthonormal");
    }
}
