//! Cross-module integration checks that exercise the period pipeline
//! beyond the acceptance criteria: chain linearity under recombination,
//! the pure power law of the Fermat determinant in `t`, and reversibility
//! of the coefficient homotopy.

use abelint::closedform::c_of_h;
use abelint::cover::XPath;
use abelint::cycles::{deform_basis, fermat_basis, fermat_poly, transport_basis_t, LiftedChain};
use abelint::periods::{integrate_form, period_matrix, QuadratureConfig};
use abelint::polyring::{BivarPoly, HomogeneousTop};
use abelint::{c64, Complex64};

/// Integration is linear over chains: replacing cycle 1 by the formal sum
/// cycle 1 + cycle 2 (a shear, det +1) keeps the determinant; swapping two
/// cycles (det −1) flips its sign.
#[test]
fn unimodular_recombination_scales_det_by_unit() {
    let n = 2;
    let h = fermat_poly(n);
    let t = Complex64::ONE;
    let cfg = QuadratureConfig::default();
    let basis = fermat_basis(n, 1e-2).unwrap();
    let pm = period_matrix(&h, t, &basis, cfg).unwrap();
    let det = pm.det();

    // shear: c1' = c1 + c2 as one formal chain of eight links
    let mut shear = basis.clone();
    let combined = LiftedChain {
        links: basis.cycles[0]
            .links
            .iter()
            .chain(&basis.cycles[1].links)
            .cloned()
            .collect(),
    };
    shear.cycles[0] = combined;
    let pm_shear = period_matrix(&h, t, &shear, cfg).unwrap();
    let det_shear = pm_shear.det();
    assert!(
        (det_shear - det).norm() < 1e-8 * det.norm(),
        "shear changed det: {det_shear} vs {det}"
    );

    // swap: exchange two cycles
    let mut swapped = basis.clone();
    swapped.cycles.swap(1, 3);
    let pm_swap = period_matrix(&h, t, &swapped, cfg).unwrap();
    let det_swap = pm_swap.det();
    assert!(
        (det_swap + det).norm() < 1e-8 * det.norm(),
        "swap should negate det: {det_swap} vs {det}"
    );
}

/// For `h = H` Fermat the determinant is the pure power `C·t^(n²)`;
/// checked at three level values per n ≤ 3 by transporting the basis.
#[test]
fn fermat_determinant_is_a_pure_power_of_t() {
    let cfg = QuadratureConfig::default();
    for n in [1usize, 2, 3] {
        let h = fermat_poly(n);
        let basis = fermat_basis(n, 1e-2).unwrap();
        let c = period_matrix(&h, Complex64::ONE, &basis, cfg).unwrap().det();
        for t in [c64(1.15, 0.0), c64(0.9, 0.12), c64(1.0, -0.2)] {
            let hop = XPath::segment(Complex64::ONE, t);
            let moved = transport_basis_t(&basis, &h, &hop, 24).unwrap();
            let det = period_matrix(&h, t, &moved, cfg).unwrap().det();
            let expect = c * t.powu((n * n) as u32);
            assert!(
                (det - expect).norm() < 1e-6 * expect.norm(),
                "n={n}, t={t}: det {det} vs C·t^(n²) = {expect}"
            );
        }
    }
}

/// Deforming to a perturbed polynomial and back returns every period of
/// the base cycle to its original value.
#[test]
fn homotopy_round_trip_restores_periods() {
    let n = 2;
    let t = Complex64::ONE;
    let cfg = QuadratureConfig::default();
    let h0 = fermat_poly(n);
    let h1 = h0
        .add(&BivarPoly::monomial(1, 0, c64(-0.25, 0.05)))
        .add(&BivarPoly::monomial(0, 1, c64(-0.4, 0.0)));

    let basis = fermat_basis(n, 1e-2).unwrap();
    let there = deform_basis(&basis, &h0, &h1, t, 32).unwrap();
    let back = deform_basis(&there, &h1, &h0, t, 32).unwrap();

    for j in 1..=n * n {
        let orig = integrate_form(&h0, t, j, &basis.cycles[0], cfg).unwrap();
        let returned = integrate_form(&h0, t, j, &back.cycles[0], cfg).unwrap();
        let rel = (orig.value - returned.value).norm() / orig.value.norm();
        assert!(rel < 1e-7, "j={j}: round trip moved period by {rel:.3e}");
    }
}

/// The deformed-basis determinant at `t = 1` for the perturbed cubic
/// equals `C(H) ∏(1 − a_i)` with the critical values from the solver —
/// the determinant formula evaluated at a single point.
#[test]
fn perturbed_det_matches_formula_pointwise() {
    let h = fermat_poly(2)
        .add(&BivarPoly::monomial(1, 0, c64(-0.3, 0.0)))
        .add(&BivarPoly::monomial(0, 1, c64(-0.6, 0.0)));
    let basis = fermat_basis(2, 1e-2).unwrap();
    let deformed = deform_basis(&basis, &fermat_poly(2), &h, Complex64::ONE, 32).unwrap();
    let det = period_matrix(&h, Complex64::ONE, &deformed, QuadratureConfig::default())
        .unwrap()
        .det();

    let cf = c_of_h(&HomogeneousTop::fermat(2)).unwrap();
    let crit = abelint::polyring::critical_data(&h, 1e-11).unwrap();
    let mut expect = cf.value;
    for a in &crit.values {
        expect *= Complex64::ONE - a;
    }
    let d = (det - expect).norm().min((det + expect).norm());
    assert!(
        d < 1e-7 * expect.norm(),
        "det {det} vs ±C·∏(1-a_i) = ±{expect}"
    );
}
