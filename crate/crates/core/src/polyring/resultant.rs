//! Sylvester resultants and discriminants.
//!
//! Sign convention, fixed and relied on by tests: the Sylvester matrix has
//! the rows of `p` first (deg q of them), coefficients in descending degree,
//! each row shifted one column right of the previous; then the rows of `q`
//! (deg p of them) in the same layout. The resultant is the determinant of
//! that matrix, so `Res(y - x, y + x) = 2x`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::polyring::{BivarPoly, HomogeneousTop, UniPoly};

/// Resultant of two univariate polynomials (numeric Sylvester determinant).
pub fn sylvester_resultant(p: &UniPoly, q: &UniPoly) -> Result<Complex64> {
    let dp = p
        .degree()
        .ok_or_else(|| Error::InvalidParameter("resultant of zero polynomial".into()))?;
    let dq = q
        .degree()
        .ok_or_else(|| Error::InvalidParameter("resultant of zero polynomial".into()))?;
    if dp == 0 && dq == 0 {
        return Ok(Complex64::ONE);
    }
    if dp == 0 {
        return Ok(p.coeffs[0].powu(dq as u32));
    }
    if dq == 0 {
        return Ok(q.coeffs[0].powu(dp as u32));
    }
    let size = dp + dq;
    let mut m = DMatrix::<Complex64>::zeros(size, size);
    for r in 0..dq {
        for k in 0..=dp {
            m[(r, r + k)] = p.coeffs[dp - k];
        }
    }
    for r in 0..dp {
        for k in 0..=dq {
            m[(dq + r, r + k)] = q.coeffs[dq - k];
        }
    }
    Ok(linalg::det(&m))
}

/// Resultant of two bivariate polynomials eliminating `y`, as a univariate
/// polynomial in `x`. Vanishes exactly at the `x` where `p(x,·)` and
/// `q(x,·)` share a root.
///
/// Computed by evaluating the numeric Sylvester determinant at scaled roots
/// of unity and interpolating; this is exact (up to roundoff) for the
/// polynomial determinant and avoids symbolic entry arithmetic.
pub fn resultant_y(p: &BivarPoly, q: &BivarPoly) -> Result<UniPoly> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::InvalidParameter(
            "resultant of the zero polynomial".into(),
        ));
    }
    let dp = p.y_degree();
    let dq = q.y_degree();
    if dp == 0 || dq == 0 {
        return Err(Error::InvalidParameter(
            "resultant_y needs positive y-degree in both arguments".into(),
        ));
    }
    let bound = dq * p.x_degree() + dp * q.x_degree();
    let m = bound + 1;
    let ps = p.y_sections();
    let qs = q.y_sections();

    // Evaluate on the circle |x| = R. R = 1 keeps the node powers tame for
    // the coefficient scales seen here.
    let radius = 1.0;
    let mut values = Vec::with_capacity(m);
    for k in 0..m {
        let x = Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / m as f64);
        let pu = ps.at_x(x);
        let qu = qs.at_x(x);
        // Degrees can drop at special nodes only if the y-leading coefficient
        // vanishes there; the leading sections are kept as-is to preserve the
        // Sylvester layout (padded with explicit zeros).
        let pu = pad_to_degree(pu, dp);
        let qu = pad_to_degree(qu, dq);
        values.push(sylvester_resultant_padded(&pu, dp, &qu, dq));
    }

    // Inverse DFT on the sample circle.
    let mut coeffs = Vec::with_capacity(m);
    for j in 0..m {
        let mut acc = Complex64::ZERO;
        for (k, v) in values.iter().enumerate() {
            let w = Complex64::from_polar(
                1.0,
                -std::f64::consts::TAU * (j * k % m) as f64 / m as f64,
            );
            acc += v * w;
        }
        coeffs.push(acc / (m as f64 * radius.powi(j as i32)));
    }
    Ok(UniPoly::new(coeffs))
}

fn pad_to_degree(p: UniPoly, deg: usize) -> Vec<Complex64> {
    let mut c = p.coeffs;
    c.resize(deg + 1, Complex64::ZERO);
    c
}

fn sylvester_resultant_padded(p: &[Complex64], dp: usize, q: &[Complex64], dq: usize) -> Complex64 {
    let size = dp + dq;
    let mut m = DMatrix::<Complex64>::zeros(size, size);
    for r in 0..dq {
        for k in 0..=dp {
            m[(r, r + k)] = p[dp - k];
        }
    }
    for r in 0..dp {
        for k in 0..=dq {
            m[(dq + r, r + k)] = q[dq - k];
        }
    }
    linalg::det(&m)
}

/// Discriminant of a univariate polynomial:
/// `(-1)^(d(d-1)/2) · Res(p, p') / lc(p)`.
pub fn discriminant(p: &UniPoly) -> Result<Complex64> {
    let d = p
        .degree()
        .ok_or_else(|| Error::InvalidParameter("discriminant of zero polynomial".into()))?;
    if d < 1 {
        return Err(Error::InvalidParameter(
            "discriminant needs degree >= 1".into(),
        ));
    }
    let res = sylvester_resultant(p, &p.derivative())?;
    let sign = if (d * (d - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(res * sign / p.leading())
}

/// The discriminant `Σ(H) = h_0^(2n) ∏_(j<i) (b_i - b_j)²` of the top part,
/// computed as the standard discriminant of `H(x, 1)`. Requires `h_0 ≠ 0`
/// (one zero line vertical is outside this chart).
pub fn discriminant_sigma(top: &HomogeneousTop) -> Result<Complex64> {
    let scale = top.coeff_scale();
    if top.h(0).norm() <= crate::polyring::PRUNE_EPS * scale {
        return Err(Error::UnsupportedChart(
            "h_0 = 0 (coefficient of x^(n+1))".into(),
        ));
    }
    // H(x, 1) = Σ h_s x^(n+1-s): ascending coefficient k is h_(n+1-k).
    let u = UniPoly::new(top.coeffs.iter().rev().copied().collect());
    discriminant(&u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::polyring::{univariate_roots, BivarPoly};

    fn re(v: f64) -> Complex64 {
        c64(v, 0.0)
    }

    #[test]
    fn resultant_of_parabola_and_line() {
        // p = y^2 - x, q = y - 1: Sylvester 3x3 by hand gives 1 - x.
        let p = BivarPoly::from_terms([((0, 2), re(1.0)), ((1, 0), re(-1.0))]);
        let q = BivarPoly::from_terms([((0, 1), re(1.0)), ((0, 0), re(-1.0))]);
        let r = resultant_y(&p, &q).unwrap();
        assert_eq!(r.degree(), Some(1));
        assert!((r.coeffs[0] - re(1.0)).norm() < 1e-12);
        assert!((r.coeffs[1] - re(-1.0)).norm() < 1e-12);
    }

    #[test]
    fn resultant_sign_convention() {
        // p = y - x, q = y + x: with p-rows-first descending layout the 2x2
        // Sylvester determinant is +2x.
        let p = BivarPoly::from_terms([((0, 1), re(1.0)), ((1, 0), re(-1.0))]);
        let q = BivarPoly::from_terms([((0, 1), re(1.0)), ((1, 0), re(1.0))]);
        let r = resultant_y(&p, &q).unwrap();
        assert_eq!(r.degree(), Some(1));
        assert!(r.coeffs[0].norm() < 1e-12);
        assert!((r.coeffs[1] - re(2.0)).norm() < 1e-12);
    }

    #[test]
    fn resultant_of_common_factor_vanishes() {
        let p = BivarPoly::from_terms([((0, 2), re(1.0)), ((0, 0), re(1.0))]);
        let r = resultant_y(&p, &p).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn resultant_rejects_y_free_input() {
        let p = BivarPoly::monomial(2, 0, re(1.0));
        let q = BivarPoly::monomial(0, 1, re(1.0));
        assert!(matches!(resultant_y(&p, &q), Err(Error::InvalidParameter(_))));
        assert!(matches!(
            resultant_y(&BivarPoly::zero(), &q),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn sigma_of_circle() {
        // H = x^2 + y^2: Σ = -4.
        let top = HomogeneousTop::new(1, vec![re(1.0), re(0.0), re(1.0)]).unwrap();
        assert!((discriminant_sigma(&top).unwrap() - re(-4.0)).norm() < 1e-12);
    }

    #[test]
    fn sigma_of_fermat() {
        // Σ(x^(n+1) + y^(n+1)) = (-1)^(n(n+1)/2) (n+1)^(n+1)
        for n in 1..=5usize {
            let sign = if (n * (n + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let expect = sign * ((n + 1) as f64).powi(n as i32 + 1);
            let got = discriminant_sigma(&HomogeneousTop::fermat(n)).unwrap();
            assert!(
                (got - re(expect)).norm() < 1e-10 * expect.abs(),
                "n={n}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn sigma_of_split_cubic() {
        // H = (x - y)(x - 2y)(x - 3y): b = {1,2,3}, Σ = (1·2·1)^2 = 4.
        let f1 = BivarPoly::from_terms([((1, 0), re(1.0)), ((0, 1), re(-1.0))]);
        let f2 = BivarPoly::from_terms([((1, 0), re(1.0)), ((0, 1), re(-2.0))]);
        let f3 = BivarPoly::from_terms([((1, 0), re(1.0)), ((0, 1), re(-3.0))]);
        let top = f1.mul(&f2).mul(&f3).top_part().unwrap();
        assert!((discriminant_sigma(&top).unwrap() - re(4.0)).norm() < 1e-10);
    }

    #[test]
    fn sigma_rejects_vertical_zero_line() {
        // h_0 = 0 is outside the supported chart.
        let top = HomogeneousTop::new(1, vec![re(0.0), re(1.0), re(1.0)]).unwrap();
        assert!(matches!(
            discriminant_sigma(&top),
            Err(Error::UnsupportedChart(_))
        ));
    }

    #[test]
    fn sigma_vanishes_exactly_on_squared_factor() {
        // H = (x - y)^2 (x - 3y) has a repeated zero line.
        let f1 = BivarPoly::from_terms([((1, 0), re(1.0)), ((0, 1), re(-1.0))]);
        let f3 = BivarPoly::from_terms([((1, 0), re(1.0)), ((0, 1), re(-3.0))]);
        let top = f1.mul(&f1).mul(&f3).top_part().unwrap();
        let sigma = discriminant_sigma(&top).unwrap();
        assert!(sigma.norm() < 1e-12);
        assert!(!top.is_generic().unwrap());
    }

    #[test]
    fn resultant_vanishes_iff_fibers_share_roots() {
        // Random low-degree pairs: resultant_y(x0) ~ 0 exactly when the two
        // y-polynomials at x0 share a root.
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let mut rnd = |i: usize, j: usize| ((i, j), c64(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
            let p = BivarPoly::from_terms([rnd(0, 2), rnd(1, 1), rnd(0, 0), rnd(2, 0), rnd(0, 1)]);
            let q = BivarPoly::from_terms([rnd(0, 1), rnd(1, 0), rnd(0, 0)]);
            let r = resultant_y(&p, &q).unwrap();
            let rs = univariate_roots(&r.coeffs, 1e-8, 5).unwrap();
            for &x0 in &rs.roots {
                let pu = p.at_x(x0);
                let qu = q.at_x(x0);
                let proots = univariate_roots(&pu.coeffs, 1e-8, 6).unwrap();
                let shared = proots.roots.iter().any(|&y| qu.backward_error(y) < 1e-7);
                assert!(shared, "no shared y-root at resultant zero x0 = {x0}");
            }
        }
    }
}
