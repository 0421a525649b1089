//! Verification suites, JSON reports, CSV grid samples and printed tables
//! for the pseudohyp core crate.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use pseudohyp_core::forms::{
    codifferential_residual, exterior_d, tangent_form, BundleForm, FormTerm, QuadDiff,
    TangentVariant,
};
use pseudohyp_core::liealg::{iota_pair_bilinear, sharp, sign_table, OrderedBasis};
use pseudohyp_core::metric::{
    g_integrand, h_field, iota_block_closed, iota_irr_closed, iota_tangent, quadrature,
    wp_integrand, wp_ratio_report,
};
use pseudohyp_core::numeric::{max_abs, max_abs_c, to_complex};
use pseudohyp_core::orbifold::{
    centralizer, element_a, element_b, element_c, element_q, invariance_suite, quotient_size,
    SubgroupShape,
};
use pseudohyp_core::quadspace::QuadraticSpace;
use pseudohyp_core::surfaces::{
    frame_matrix, fuchsian_h_closed, fuchsian_h_inv_closed, g_tilde_chart, hitchin_n1,
    hitchin_n2, moebius_apply, phi_block, phi_irr, surface_geometry, DerivativeMode, FrameCase,
    N2Variant, SurfaceModel, UHPoint,
};

pub const REPORT_VERSION: &str = "report-v1";
pub const DEFAULT_SEED: u64 = 12345;

/// One verification check: `status` is `pass` iff the residual is within
/// tolerance; `reported` marks printed-vs-computed comparisons that never
/// fail the build.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub paper_ref: String,
    pub status: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub details: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: String,
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == "fail")
    }
}

pub type TolOverrides = BTreeMap<String, f64>;

fn check(
    tols: &TolOverrides,
    name: &str,
    paper_ref: &str,
    max_residual: f64,
    default_tol: f64,
    details: String,
) -> CheckRecord {
    let tolerance = tols.get(name).copied().unwrap_or(default_tol);
    let status = if max_residual <= tolerance { "pass" } else { "fail" };
    CheckRecord {
        name: name.to_string(),
        paper_ref: paper_ref.to_string(),
        status: status.to_string(),
        max_residual,
        tolerance,
        details,
    }
}

fn reported(
    name: &str,
    paper_ref: &str,
    max_residual: f64,
    tolerance: f64,
    details: String,
) -> CheckRecord {
    CheckRecord {
        name: name.to_string(),
        paper_ref: paper_ref.to_string(),
        status: "reported".to_string(),
        max_residual,
        tolerance,
        details,
    }
}

fn random_point<R: Rng>(rng: &mut R) -> UHPoint {
    UHPoint::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.2..4.0)).expect("y > 0")
}

fn random_sl2<R: Rng>(rng: &mut R) -> Matrix2<f64> {
    let a = rng.gen_range(-0.8..0.8);
    let b = rng.gen_range(-0.8..0.8);
    let c = rng.gen_range(-0.8..0.8);
    let x = Matrix2::new(a, b, c, -a);
    let mut acc = Matrix2::identity();
    let mut term = Matrix2::identity();
    for k in 1..30 {
        term = term * x / k as f64;
        acc += term;
    }
    acc
}

fn grid(x0: f64, x1: f64, y0: f64, y1: f64, n: usize) -> Vec<UHPoint> {
    let mut pts = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = x0 + (x1 - x0) * i as f64 / (n - 1) as f64;
            let y = y0 + (y1 - y0) * j as f64 / (n - 1) as f64;
            pts.push(UHPoint::new(x, y).expect("y > 0"));
        }
    }
    pts
}

/// Projective distance: embeddings are sections of a projectivization, so
/// compare up to a global sign.
fn projective_gap(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let plus = (a - b).amax();
    let minus = (a + b).amax();
    plus.min(minus)
}

// ---------------------------------------------------------------------------
// Suites.
// ---------------------------------------------------------------------------

pub fn fuchsian_suite(tols: &TolOverrides, rng: &mut ChaCha8Rng) -> Vec<CheckRecord> {
    let mut out = Vec::new();

    // Frame matrix reproduces the printed closed-form H and H^{-1}.
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let z = random_point(rng);
        let (_, h) = frame_matrix(FrameCase::FuchsianF, z).expect("frame");
        worst = worst.max(max_abs(&(h.clone() - fuchsian_h_closed(z))));
        worst = worst.max(max_abs(
            &(h * fuchsian_h_inv_closed(z) - DMatrix::identity(5, 5)),
        ));
    }
    out.push(check(
        tols,
        "fuchsian_frame_matches_printed_h",
        "explicit H matrix and its printed inverse",
        worst,
        1e-10,
        "50 random chart points in [-2,2]x[0.2,4]".to_string(),
    ));

    let (_, h_i) = frame_matrix(FrameCase::FuchsianF, UHPoint::i()).expect("frame");
    out.push(check(
        tols,
        "fuchsian_h_identity_at_i",
        "H matrix evaluates to the identity at x=0, y=1",
        max_abs(&(h_i - DMatrix::identity(5, 5))),
        1e-14,
        "frame Gram at z = i".to_string(),
    ));

    // Totally geodesic: second fundamental form vanishes identically.
    let mut worst = 0.0f64;
    for z in grid(-2.0, 2.0, 0.2, 4.0, 10) {
        let geo = surface_geometry(SurfaceModel::FuchsianF, z, DerivativeMode::Analytic)
            .expect("geometry");
        for pi in &geo.second_fundamental {
            worst = worst.max(pi.amax());
        }
    }
    out.push(check(
        tols,
        "fuchsian_second_fundamental_vanishes",
        "totally geodesic copy of H^{2,1} inside H^{2,2}",
        worst,
        1e-10,
        "10x10 grid, analytic derivatives".to_string(),
    ));

    // Equivariance and homomorphism for the block pair (f, Phi_block).
    let mut eq_worst = 0.0f64;
    let mut hom_worst = 0.0f64;
    for _ in 0..100 {
        let a = random_sl2(rng);
        let b = random_sl2(rng);
        let z = random_point(rng);
        let moved = SurfaceModel::FuchsianF.embed(moebius_apply(&a, z));
        let pushed = phi_block(&a) * SurfaceModel::FuchsianF.embed(z);
        eq_worst = eq_worst.max(projective_gap(&moved, &pushed));
        hom_worst = hom_worst.max(max_abs(&(phi_block(&(a * b)) - phi_block(&a) * phi_block(&b))));
    }
    out.push(check(
        tols,
        "block_equivariance",
        "f is rho-equivariant for the block representation",
        eq_worst,
        1e-9,
        "100 random (A, z) samples".to_string(),
    ));
    out.push(check(
        tols,
        "block_homomorphism",
        "Phi_block is a group homomorphism into SO_0(2,3)",
        hom_worst,
        1e-9,
        "100 random (A, B) samples".to_string(),
    ));

    out
}

pub fn hitchin_suite(tols: &TolOverrides, rng: &mut ChaCha8Rng) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let pts = grid(-2.0, 2.0, 0.2, 4.0, 10);

    // Maximality and conformality of the irreducible surface.
    let mut max_worst = 0.0f64;
    let mut conf_worst = 0.0f64;
    for &z in &pts {
        let geo = surface_geometry(SurfaceModel::HitchinF, z, DerivativeMode::Analytic)
            .expect("geometry");
        max_worst = max_worst.max(geo.mean_curvature.amax());
        let scale = geo.g_t[(0, 0)].abs();
        conf_worst = conf_worst
            .max(geo.g_t[(0, 1)].abs() / scale)
            .max((geo.g_t[(0, 0)] - geo.g_t[(1, 1)]).abs() / scale);
    }
    out.push(check(
        tols,
        "hitchin_maximality",
        "unique equivariant maximal space-like embedding",
        max_worst,
        1e-6,
        "mean-curvature-vector norm, 10x10 grid, analytic derivatives".to_string(),
    ));
    out.push(check(
        tols,
        "hitchin_conformality",
        "z is a conformal coordinate for the induced metric",
        conf_worst,
        1e-10,
        "off-diagonal and relative diagonal gap of g_T".to_string(),
    ));

    // Equivariance and homomorphism for (F, Phi_irr).
    let mut eq_worst = 0.0f64;
    let mut hom_worst = 0.0f64;
    for _ in 0..100 {
        let a = random_sl2(rng);
        let b = random_sl2(rng);
        let z = random_point(rng);
        let moved = SurfaceModel::HitchinF.embed(moebius_apply(&a, z));
        let pushed = phi_irr(&a) * SurfaceModel::HitchinF.embed(z);
        eq_worst = eq_worst.max(projective_gap(&moved, &pushed));
        hom_worst = hom_worst.max(max_abs(&(phi_irr(&(a * b)) - phi_irr(&a) * phi_irr(&b))));
    }
    out.push(check(
        tols,
        "irreducible_equivariance",
        "F(A z) = Phi_irr(A) F(z) up to the projective sign",
        eq_worst,
        1e-9,
        "100 random (A, z) samples".to_string(),
    ));
    out.push(check(
        tols,
        "irreducible_homomorphism",
        "Phi_irr is a group homomorphism into SO_0(2,3)",
        hom_worst,
        1e-9,
        "100 random (A, B) samples".to_string(),
    ));

    // Veronese chain: b2 norm of g_tilde, raw square norm, maximality.
    let b2 = QuadraticSpace::b2_space();
    let b4 = QuadraticSpace::b4_space();
    let mut b2_worst = 0.0f64;
    let mut raw_worst = 0.0f64;
    let mut chain_worst = 0.0f64;
    for &z in &pts {
        let g = DVector::from_vec(g_tilde_chart(z.x, z.y));
        b2_worst = b2_worst.max((b2.inner(&g, &g).expect("b2") + 1.0).abs());
        // Raw polynomial square (convolution) without normalization.
        let raw = DVector::from_vec(vec![
            g[0] * g[0],
            2.0 * g[0] * g[1],
            2.0 * g[0] * g[2] + g[1] * g[1],
            2.0 * g[1] * g[2],
            g[2] * g[2],
        ]);
        raw_worst = raw_worst.max((b4.inner(&raw, &raw).expect("b4") + 2.0 / 3.0).abs());
        let geo = surface_geometry(SurfaceModel::VeroneseChain, z, DerivativeMode::Analytic)
            .expect("geometry");
        chain_worst = chain_worst.max(geo.mean_curvature.amax());
    }
    out.push(check(
        tols,
        "veronese_b2_norm",
        "g_tilde lands on the b2 hyperboloid",
        b2_worst,
        1e-10,
        "b2(g_tilde(z)) = -1 on the grid".to_string(),
    ));
    out.push(check(
        tols,
        "veronese_raw_square_norm",
        "raw square of a norm-(-1) polynomial has b4-norm -2/3",
        raw_worst,
        1e-10,
        "polynomial convolution oracle on the grid".to_string(),
    ));
    out.push(check(
        tols,
        "veronese_chain_maximal",
        "Veronese surface is maximal in the b4 model",
        chain_worst,
        1e-6,
        "mean-curvature-vector norm on the grid".to_string(),
    ));

    // Open question: first entry of the printed N2.
    let space = QuadraticSpace::standard_space(2).expect("space");
    let mut printed_worst = 0.0f64;
    let mut corrected_worst = 0.0f64;
    for &z in &pts {
        let e = SurfaceModel::HitchinF.embed(z);
        for (variant, acc) in [
            (N2Variant::Printed, &mut printed_worst),
            (N2Variant::Corrected, &mut corrected_worst),
        ] {
            let n1 = hitchin_n1(z);
            let n2 = hitchin_n2(z, variant);
            let mut r = (space.inner(&n2, &n2).expect("inner") + 1.0).abs();
            r = r.max(space.inner(&n1, &n2).expect("inner").abs());
            r = r.max(space.inner(&n2, &e).expect("inner").abs());
            *acc = acc.max(r);
        }
    }
    out.push(reported(
        "n2_first_entry_variants",
        "printed N2 first entry x(x+x^2-3y^2)/2y^2 vs corrected x(1+x^2-3y^2)/2y^2",
        corrected_worst,
        1e-9,
        format!(
            "orthonormality residual: printed variant {printed_worst:.3e}, corrected variant {corrected_worst:.3e}; the corrected variant passes"
        ),
    ));

    out
}

pub fn forms_suite(tols: &TolOverrides, _rng: &mut ChaCha8Rng) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let basis = OrderedBasis::standard_basis(2).expect("basis");
    let pts = grid(-1.0, 1.0, 0.5, 2.5, 5);
    let psis = [QuadDiff::constant(1.0), QuadDiff::monomial(1), QuadDiff::monomial(2)];

    for (variant, name) in [
        (TangentVariant::Block, "harmonicity_block"),
        (TangentVariant::Irreducible, "harmonicity_irreducible"),
    ] {
        let field = move |z: UHPoint| h_field(variant, z);
        let mut worst = 0.0f64;
        for psi in &psis {
            let f = tangent_form(psi, variant);
            for &z in &pts {
                // Fourth-order stencils keep truncation negligible at this
                // step, and the wider spacing suppresses roundoff in the
                // large irreducible coefficients.
                worst = worst
                    .max(codifferential_residual(&f, &field, &basis, z, 1e-3).expect("residual"));
            }
        }
        out.push(check(
            tols,
            name,
            "tangent forms are harmonic representatives",
            worst,
            1e-6,
            "codifferential residual for psi in {1, z, z^2} at 25 grid points".to_string(),
        ));
    }

    // d-closedness of the tangent forms.
    let mut worst = 0.0f64;
    for variant in [TangentVariant::Block, TangentVariant::Irreducible] {
        for psi in &psis {
            let f = tangent_form(psi, variant);
            for &z in &pts {
                worst = worst.max(max_abs_c(&exterior_d(&f, z, 1e-5).expect("d")));
            }
        }
    }
    out.push(check(
        tols,
        "tangent_forms_d_closed",
        "holomorphic coefficients make the forms d-closed",
        worst,
        1e-8,
        "numerical exterior derivative at 25 grid points".to_string(),
    ));

    // Negative control: a non-harmonic probe must be detected.
    let e1 = to_complex(&basis.elements[0]);
    let probe = BundleForm::new(vec![FormTerm {
        component: pseudohyp_core::forms::FormComponent::Dx,
        coefficient: std::sync::Arc::new(move |z: UHPoint| e1.clone() * Complex64::new(z.y, 0.0)),
    }]);
    let field = |z: UHPoint| h_field(TangentVariant::Block, z);
    let r = codifferential_residual(&probe, &field, &basis, UHPoint::i(), 1e-5).expect("residual");
    let shortfall = (0.1 - r).max(0.0);
    out.push(check(
        tols,
        "negative_control_detects_nonharmonic",
        "deliberate non-harmonic probe dx (x) y E1",
        shortfall,
        0.0,
        format!("probe residual {r:.3e}, required > 0.1"),
    ));

    // Open question: printed #E2 / #E3 closed forms vs the trace oracle.
    let z0 = UHPoint::new(0.7, 1.3).expect("point");
    let h = h_field(TangentVariant::Block, z0).expect("h");
    let (x, y) = (z0.x, z0.y);
    let r2 = x * x + y * y;
    let printed: [Vec<(usize, f64)>; 3] = [
        vec![(0, 4.0 / (y * y)), (1, 4.0 * x / (y * y)), (2, -4.0 * x * x / (y * y))],
        vec![
            (0, 4.0 * x / (y * y)),
            (1, -4.0 * x * r2 / (y * y)),
            (2, -4.0 * x * r2 / (y * y)),
        ],
        vec![
            (0, -4.0 * x * x / (y * y)),
            (1, -4.0 * x * r2 / (y * y)),
            (2, 4.0 * r2 / (y * y)),
        ],
    ];
    let mut details = String::new();
    let mut worst = 0.0f64;
    for (k, printed_k) in printed.iter().enumerate() {
        let computed = sharp(&h, &basis.elements[k], &basis).expect("sharp");
        let _ = write!(
            details,
            "#E{}: computed [{}]; printed [{}]. ",
            k + 1,
            computed
                .iter()
                .map(|v| format!("{v:.6}"))
                .collect::<Vec<_>>()
                .join(", "),
            printed_k
                .iter()
                .map(|(j, v)| format!("E{}*: {v:.6}", j + 1))
                .collect::<Vec<_>>()
                .join(", "),
        );
        for &(j, v) in printed_k {
            worst = worst.max((computed[j] - v).abs());
        }
    }
    out.push(reported(
        "sharp_e1_e2_e3_printed_comparison",
        "printed closed forms for #E_1, #E_2, #E_3",
        worst,
        1e-9,
        format!("at z = 0.7 + 1.3i with the Fuchsian pairing field; {details}"),
    ));

    // Open question: the Step-3 expansion coefficients.
    let zc = Complex64::new(0.3, 1.2);
    let z0 = UHPoint::new(zc.re, zc.im).expect("point");
    let hit = OrderedBasis::hitchin_basis();
    let (_, gram) = frame_matrix(FrameCase::HitchinF, z0).expect("frame");
    let e1c = to_complex(&hit.elements[0]);
    let e2c = to_complex(&hit.elements[1]);
    let e3c = to_complex(&hit.elements[2]);
    let m = e1c * (zc * zc) - e3c - e2c * (zc * 2.0);
    let computed: Vec<Complex64> = hit
        .elements
        .iter()
        .map(|e| iota_pair_bilinear(&gram, &m, &to_complex(e)).expect("iota"))
        .collect();
    let zero = Complex64::new(0.0, 0.0);
    let printed_step3 = [
        20.0 * zc * zc,
        -20.0 * zc,
        Complex64::new(-20.0, 0.0),
        -2.0 * (1.0 + zc * zc),
        -2.0 * (1.0 + zc),
        zero,
        zero,
        2.0 * (zc * zc - 1.0),
        -4.0 * zc,
        2.0 * (zc * zc - 1.0),
    ];
    let mut worst = 0.0f64;
    let mut details = String::new();
    for (j, (c, p)) in computed.iter().zip(&printed_step3).enumerate() {
        worst = worst.max((c - p).norm());
        let _ = write!(details, "E{}*: computed {c:.6}, printed {p:.6}; ", j + 1);
    }
    out.push(reported(
        "step3_expansion_printed_comparison",
        "expansion of z^2 #E_1 - #E_3 - 2z #E_2 in the completed collection",
        worst,
        1e-9,
        format!("at z = 0.3 + 1.2i with the frame Gram pairing; {details}"),
    ));

    out
}

pub fn metric_suite(tols: &TolOverrides, _rng: &mut ChaCha8Rng) -> Vec<CheckRecord> {
    let mut out = Vec::new();

    // Closed-form iota values on a 20x20 grid.
    let mut blk_worst = 0.0f64;
    let mut irr_worst = 0.0f64;
    for z in grid(-2.0, 2.0, 0.2, 4.0, 20) {
        let blk = iota_tangent(TangentVariant::Block, z).expect("iota");
        blk_worst = blk_worst.max((blk - iota_block_closed(z)).abs() / iota_block_closed(z));
        let irr = iota_tangent(TangentVariant::Irreducible, z).expect("iota");
        irr_worst = irr_worst.max((irr - iota_irr_closed(z)).abs() / iota_irr_closed(z));
    }
    out.push(check(
        tols,
        "iota_block_closed_form",
        "16 y^2",
        blk_worst,
        1e-10,
        "relative error on a 20x20 grid".to_string(),
    ));
    out.push(check(
        tols,
        "iota_irreducible_closed_form",
        "20 (1 + x^4 + y^4 + 2x^2 (1 + y^2))^2 / y^2",
        irr_worst,
        1e-10,
        "relative error on a 20x20 grid".to_string(),
    ));

    // Weil-Petersson factor 32 by quadrature.
    let rect = (0.0, 1.0, 1.0, 2.0);
    let one = QuadDiff::constant(1.0);
    let g = quadrature(
        &|z| g_integrand(TangentVariant::Block, &one, &one, z),
        rect,
        16,
    )
    .expect("quadrature");
    let wp = quadrature(&|z| Ok(wp_integrand(&one, &one, z)), rect, 16).expect("quadrature");
    out.push(check(
        tols,
        "wp_factor_32",
        "restriction of g to the Fuchsian locus is 32 g_WP",
        (g - 32.0 * wp).abs() / g.abs(),
        1e-10,
        format!("quadrature over [0,1]x[1,2]: g = {g:.12}, wp = {wp:.12}"),
    ));

    // Ratio reports.
    let block = wp_ratio_report(TangentVariant::Block, rect, 10).expect("report");
    let blk_resid = (block.min_ratio - 32.0).abs().max((block.max_ratio - 32.0).abs())
        + if block.constant { 0.0 } else { 1.0 };
    out.push(check(
        tols,
        "block_ratio_constant_32",
        "pointwise constancy of the block ratio",
        blk_resid,
        1e-9,
        format!(
            "min {}, max {} over a 10x10 grid",
            block.min_ratio, block.max_ratio
        ),
    ));
    let irr = wp_ratio_report(TangentVariant::Irreducible, rect, 10).expect("report");
    let ratio_i = g_integrand(TangentVariant::Irreducible, &one, &one, UHPoint::i())
        .expect("integrand")
        / wp_integrand(&one, &one, UHPoint::i());
    let z2i = UHPoint::new(0.0, 2.0).expect("point");
    let ratio_2i = g_integrand(TangentVariant::Irreducible, &one, &one, z2i).expect("integrand")
        / wp_integrand(&one, &one, z2i);
    // Closed-form oracle 2 iota_irr(z) / y^2, i.e. 40 (1 + y^4)^2 / y^4 at x=0.
    let oracle_2i = 2.0 * iota_irr_closed(z2i) / (z2i.y * z2i.y);
    let mut resid = (ratio_i - 160.0).abs() / 160.0;
    resid = resid.max((ratio_2i - oracle_2i).abs() / oracle_2i);
    resid += if irr.constant { 1.0 } else { 0.0 };
    out.push(check(
        tols,
        "irreducible_ratio_nonconstant",
        "restricted metric is not a multiple of the Weil-Petersson metric",
        resid,
        1e-9,
        format!(
            "ratio(i) = {ratio_i:.9} (oracle 160), ratio(2i) = {ratio_2i:.9} (oracle {oracle_2i}), grid min {}, max {}, constant = {}",
            irr.min_ratio, irr.max_ratio, irr.constant
        ),
    ));

    out
}

pub fn orbifold_suite(tols: &TolOverrides, rng: &mut ChaCha8Rng) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let basis = OrderedBasis::standard_basis(2).expect("basis");

    // Conjugation sign tables for A and Q = -A.
    let expected = [1.0, 1.0, 1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0, -1.0];
    let mut mismatches = 0usize;
    for l in [element_a(), element_q()] {
        let table = sign_table(&l, &basis, 1e-12).expect("table");
        for (j, t) in table.iter().enumerate() {
            match t {
                Some((k, s)) if *k == j && *s == expected[j] => {}
                _ => mismatches += 1,
            }
        }
    }
    out.push(check(
        tols,
        "conjugation_sign_table_a",
        "ten-row sign table for conjugation by A (and Q = -A)",
        mismatches as f64,
        0.0,
        "exact comparison against the printed signs".to_string(),
    ));

    // Printed centralizer sets and quotient sizes.
    let mut mismatches = 0usize;
    let c = centralizer(SubgroupShape::So22xSo1).expect("centralizer");
    if c.elements.len() != 2 || !c.elements.iter().any(|e| max_abs(&(e - element_a())) == 0.0) {
        mismatches += 1;
    }
    let c = centralizer(SubgroupShape::So21xSo1So1).expect("centralizer");
    if c.elements.len() != 4 {
        mismatches += 1;
    }
    let c = centralizer(SubgroupShape::So23xSo1k { n: 4 }).expect("centralizer");
    if c.elements.len() != 4 || c.quotient_size != 4 {
        mismatches += 1;
    }
    let c = centralizer(SubgroupShape::So23xSo1k { n: 5 }).expect("centralizer");
    if c.elements.len() != 8 || c.quotient_size != 4 {
        mismatches += 1;
    }
    if quotient_size(SubgroupShape::So23xSo1k { n: 3 }).expect("size") != 1 {
        mismatches += 1;
    }
    for n in 3..=8usize {
        let q = quotient_size(SubgroupShape::So23xSo1k { n }).expect("size");
        let center_len = pseudohyp_core::orbifold::center(n).len();
        if q != (1usize << (n - 2)) / center_len {
            mismatches += 1;
        }
    }
    out.push(check(
        tols,
        "centralizers_and_quotient_sizes",
        "printed centralizer sets and |(Z_2)^(n-2) / Z^C_(n+3)| for 3 <= n <= 8",
        mismatches as f64,
        0.0,
        "exact set and cardinality comparison".to_string(),
    ));

    // Invariance of the pairing under A, B, C, Q on both surface cases.
    let mut worst = 0.0f64;
    for l in [element_a(), element_b(), element_c(), element_q()] {
        for case in [FrameCase::FuchsianF, FrameCase::HitchinF] {
            worst = worst.max(invariance_suite(&l, case, 25, rng).expect("suite"));
        }
    }
    out.push(check(
        tols,
        "pairing_invariance_abcq",
        "conjugation by centralizer elements preserves the pairing",
        worst,
        1e-10,
        "25 random Lie pairs per (L, case) combination".to_string(),
    ));

    // Conjugated tangent forms stay harmonic.
    let mut worst = 0.0f64;
    let pts = grid(-1.0, 1.0, 0.5, 2.5, 3);
    for l in [element_a(), element_b(), element_c(), element_q()] {
        let l_c = to_complex(&l);
        let l_inv_c = to_complex(&l.clone().try_inverse().expect("inverse"));
        let base = tangent_form(&QuadDiff::monomial(1), TangentVariant::Block);
        let conjugated = BundleForm::new(
            base.terms
                .iter()
                .map(|t| {
                    let coeff = t.coefficient.clone();
                    let l_c = l_c.clone();
                    let l_inv_c = l_inv_c.clone();
                    FormTerm {
                        component: t.component,
                        coefficient: std::sync::Arc::new(move |z: UHPoint| {
                            &l_c * coeff(z) * &l_inv_c
                        }),
                    }
                })
                .collect(),
        );
        let l_field = l.clone();
        let field = move |z: UHPoint| {
            h_field(TangentVariant::Block, z).map(|h| l_field.transpose() * h * &l_field)
        };
        for &z in &pts {
            worst = worst
                .max(codifferential_residual(&conjugated, &field, &basis, z, 1e-5).expect("residual"));
        }
    }
    out.push(check(
        tols,
        "conjugated_forms_harmonic",
        "centralizer conjugation sends harmonic forms to harmonic forms",
        worst,
        1e-6,
        "L in {A, B, C, Q} with the congruence-transported field".to_string(),
    ));

    out
}

pub fn run_suite(suite: &str, tols: &TolOverrides, seed: u64) -> Result<Report, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = match suite {
        "fuchsian" => fuchsian_suite(tols, &mut rng),
        "hitchin" => hitchin_suite(tols, &mut rng),
        "forms" => forms_suite(tols, &mut rng),
        "metric" => metric_suite(tols, &mut rng),
        "orbifold" => orbifold_suite(tols, &mut rng),
        "all" => {
            let mut all = fuchsian_suite(tols, &mut rng);
            all.extend(hitchin_suite(tols, &mut rng));
            all.extend(forms_suite(tols, &mut rng));
            all.extend(metric_suite(tols, &mut rng));
            all.extend(orbifold_suite(tols, &mut rng));
            all
        }
        other => return Err(format!("unknown suite: {other}")),
    };
    Ok(Report {
        version: REPORT_VERSION.to_string(),
        suite: suite.to_string(),
        seed,
        checks,
    })
}

// ---------------------------------------------------------------------------
// CSV sampling.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleObject {
    F,
    BigF,
    IotaFuchsian,
    IotaHitchin,
    GIntegrandBlock,
    GIntegrandIrr,
}

impl SampleObject {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "f" => Some(Self::F),
            "F" => Some(Self::BigF),
            "iota_fuchsian" => Some(Self::IotaFuchsian),
            "iota_hitchin" => Some(Self::IotaHitchin),
            "g_integrand_block" => Some(Self::GIntegrandBlock),
            "g_integrand_irr" => Some(Self::GIntegrandIrr),
            _ => None,
        }
    }

    fn header(self) -> &'static str {
        match self {
            Self::F => "x,y,f1,f2,f3,f4,f5",
            Self::BigF => "x,y,F1,F2,F3,F4,F5",
            Self::IotaFuchsian | Self::IotaHitchin => "x,y,iota",
            Self::GIntegrandBlock | Self::GIntegrandIrr => "x,y,g_integrand",
        }
    }

    fn values(self, z: UHPoint) -> Result<Vec<f64>, String> {
        let one = QuadDiff::constant(1.0);
        Ok(match self {
            Self::F => SurfaceModel::FuchsianF.embed(z).iter().copied().collect(),
            Self::BigF => SurfaceModel::HitchinF.embed(z).iter().copied().collect(),
            Self::IotaFuchsian => {
                vec![iota_tangent(TangentVariant::Block, z).map_err(|e| format!("{e:?}"))?]
            }
            Self::IotaHitchin => {
                vec![iota_tangent(TangentVariant::Irreducible, z).map_err(|e| format!("{e:?}"))?]
            }
            Self::GIntegrandBlock => vec![
                g_integrand(TangentVariant::Block, &one, &one, z).map_err(|e| format!("{e:?}"))?,
            ],
            Self::GIntegrandIrr => vec![g_integrand(TangentVariant::Irreducible, &one, &one, z)
                .map_err(|e| format!("{e:?}"))?],
        })
    }
}

/// Samples the object on an `nx x ny` grid (row-major in x, then y) and
/// renders an RFC-4180 CSV document.
pub fn sample_csv(
    object: SampleObject,
    rect: (f64, f64, f64, f64),
    nx: usize,
    ny: usize,
) -> Result<String, String> {
    let (x0, x1, y0, y1) = rect;
    if y0 <= 0.0 {
        return Err("invalid rectangle: y0 must be positive".to_string());
    }
    if nx == 0 || ny == 0 {
        return Err("grid must have at least one point per side".to_string());
    }
    let mut out = String::new();
    out.push_str(object.header());
    out.push_str("\r\n");
    for i in 0..nx {
        let x = if nx == 1 { x0 } else { x0 + (x1 - x0) * i as f64 / (nx - 1) as f64 };
        for j in 0..ny {
            let y = if ny == 1 { y0 } else { y0 + (y1 - y0) * j as f64 / (ny - 1) as f64 };
            let z = UHPoint::new(x, y).map_err(|e| format!("{e:?}"))?;
            let vals = object.values(z)?;
            let mut row = vec![format!("{x}"), format!("{y}")];
            row.extend(vals.iter().map(|v| format!("{v}")));
            out.push_str(&row.join(","));
            out.push_str("\r\n");
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Tables.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct SignTableRow {
    pub from: String,
    pub to: String,
    pub sign: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct SignTableOutput {
    pub kind: String,
    pub n: usize,
    pub rows: Vec<SignTableRow>,
}

pub fn conjugation_table(kind: &str, n: usize) -> Result<(String, SignTableOutput), String> {
    let l = match kind {
        "conjugation-A" => element_a(),
        "conjugation-B" => element_b(),
        "conjugation-C" => element_c(),
        "conjugation-Q" => element_q(),
        other => return Err(format!("unknown table kind: {other}")),
    };
    if n != 2 {
        return Err("conjugation tables are defined for n = 2".to_string());
    }
    let basis = OrderedBasis::standard_basis(2).map_err(|e| format!("{e:?}"))?;
    let table = sign_table(&l, &basis, 1e-12).map_err(|e| format!("{e:?}"))?;
    let mut rows = Vec::new();
    let mut text = String::new();
    for (j, t) in table.iter().enumerate() {
        let (k, s) = t.ok_or_else(|| "conjugation is not monomial on the basis".to_string())?;
        let sign = if s > 0.0 { 1 } else { -1 };
        let _ = writeln!(
            text,
            "E{} -> {}E{}",
            j + 1,
            if sign > 0 { "+" } else { "-" },
            k + 1
        );
        rows.push(SignTableRow {
            from: format!("E{}", j + 1),
            to: format!("E{}", k + 1),
            sign,
        });
    }
    Ok((
        text,
        SignTableOutput { kind: kind.to_string(), n, rows },
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralizerOutput {
    pub shape: String,
    pub n: usize,
    pub group_type: String,
    pub quotient_size: usize,
    pub enumeration_exhaustive: bool,
    pub elements: Vec<Vec<f64>>,
}

pub fn parse_shape(shape: &str, n: usize) -> Result<SubgroupShape, String> {
    match shape {
        "so22xso1" => Ok(SubgroupShape::So22xSo1),
        "so21xso2" => Ok(SubgroupShape::So21xSo2),
        "so21xso1so1" => Ok(SubgroupShape::So21xSo1So1),
        "so23xso1k" => Ok(SubgroupShape::So23xSo1k { n }),
        other => Err(format!("unknown shape: {other}")),
    }
}

pub fn centralizer_table(shape: &str, n: usize) -> Result<(String, CentralizerOutput), String> {
    let sh = parse_shape(shape, n)?;
    let c = centralizer(sh).map_err(|e| format!("{e:?}"))?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "centralizer for {shape} (n = {}): {} elements, group type {}, quotient size {}{}",
        sh.ambient_n(),
        c.elements.len(),
        c.group_type,
        c.quotient_size,
        if sh.enumeration_exhaustive() { "" } else { " (enumeration not exhaustive)" },
    );
    let mut elements = Vec::new();
    for e in &c.elements {
        let diag: Vec<f64> = (0..e.nrows()).map(|i| e[(i, i)]).collect();
        let _ = writeln!(
            text,
            "  diag({})",
            diag.iter().map(|v| format!("{v:+.0}")).collect::<Vec<_>>().join(", ")
        );
        elements.push(diag);
    }
    Ok((
        text,
        CentralizerOutput {
            shape: shape.to_string(),
            n: sh.ambient_n(),
            group_type: c.group_type.clone(),
            quotient_size: c.quotient_size,
            enumeration_exhaustive: sh.enumeration_exhaustive(),
            elements,
        },
    ))
}

/// Seed resolution: env var override, else the default.
pub fn resolve_seed() -> u64 {
    std::env::var("PSEUDOHYP_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}
