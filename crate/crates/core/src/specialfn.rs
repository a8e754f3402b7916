//! Gamma/Beta evaluation and the closed-form quantities of the Fermat
//! special case `H = x^(n+1) + y^(n+1)`: the root of unity `ε`, the
//! products `σ` and `Σ`, the Beta integrals `I_j` and their product `IP`,
//! the `n²×n²` matrix `G` of `ε`-powers with its determinant recurrence,
//! and the constant `σ^n · IP`.
//!
//! Quantities with two independent evaluation routes (a direct product or
//! LU determinant, and a closed form) return both routes so callers can
//! assert their agreement.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::closedform::SignAmbiguous;
use crate::error::{Error, Result};
use crate::linalg;
use crate::polyring::monomial_basis;
use crate::c64;

const TAU: f64 = std::f64::consts::TAU;
const PI: f64 = std::f64::consts::PI;

// Lanczos g = 7, 9-term coefficient set (as circulated with the GNU
// Scientific Library); relative error ~1e-14 right of the reflection line.
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Gamma function for complex argument, Lanczos approximation with
/// reflection for `Re z < 1/2`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && (z.re - z.re.round()).abs() < 1e-13 {
        return Err(Error::Pole(z));
    }
    if z.re < 0.5 {
        // Γ(z) Γ(1-z) = π / sin(πz)
        let s = (z * PI).sin();
        if s.norm() == 0.0 {
            return Err(Error::Pole(z));
        }
        return Ok(PI / (s * gamma(Complex64::ONE - z)?));
    }
    let zm = z - Complex64::ONE;
    let mut acc = c64(LANCZOS[0], 0.0);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        acc += p / (zm + i as f64);
    }
    let t = zm + 7.5;
    Ok((2.0 * PI).sqrt() * t.powc(zm + 0.5) * (-t).exp() * acc)
}

/// Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta(a: Complex64, b: Complex64) -> Result<Complex64> {
    Ok(gamma(a)? * gamma(b)? / gamma(a + b)?)
}

/// `ε = exp(2πi/(n+1))` with a cache of its powers `ε^0 … ε^n`.
#[derive(Debug, Clone)]
pub struct RootOfUnity {
    pub n: usize,
    pub value: Complex64,
    pub powers: Vec<Complex64>,
}

impl RootOfUnity {
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter(format!("n = {n} < 1")));
        }
        let powers: Vec<Complex64> = (0..=n)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / (n + 1) as f64))
            .collect();
        Ok(RootOfUnity {
            n,
            value: powers[1],
            powers,
        })
    }

    /// `ε^k` for any integer exponent, via the power cache.
    pub fn pow(&self, k: i64) -> Complex64 {
        let m = (n_mod(k, (self.n + 1) as i64)) as usize;
        self.powers[m]
    }
}

fn n_mod(k: i64, m: i64) -> i64 {
    ((k % m) + m) % m
}

/// A quantity computed along two independent routes.
#[derive(Debug, Clone, Copy)]
pub struct TwoRoute<T> {
    pub direct: T,
    pub closed: T,
}

impl TwoRoute<Complex64> {
    pub fn rel_gap(&self) -> f64 {
        let scale = self.direct.norm().max(self.closed.norm());
        if scale == 0.0 {
            0.0
        } else {
            (self.direct - self.closed).norm() / scale
        }
    }
}

impl TwoRoute<f64> {
    pub fn rel_gap(&self) -> f64 {
        let scale = self.direct.abs().max(self.closed.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.direct - self.closed).abs() / scale
        }
    }
}

/// The Beta reduction of the Fermat arc integral:
/// `I_j = ∫_0^1 x^l (1-x^(n+1))^((m+1)/(n+1)) dx
///      = B((l+1)/(n+1), (m+1)/(n+1) + 1) / (n+1)`,
/// real and in `(0, 1)`.
pub fn fermat_ij(n: usize, j: usize) -> Result<f64> {
    if n < 1 || j < 1 || j > n * n {
        return Err(Error::InvalidParameter(format!(
            "fermat_ij needs 1 <= j <= n², got n = {n}, j = {j}"
        )));
    }
    let basis = monomial_basis(n)?;
    let e = basis.entry(j);
    let np1 = (n + 1) as f64;
    let v = beta(
        c64((e.l as f64 + 1.0) / np1, 0.0),
        c64((e.m as f64 + 1.0) / np1 + 1.0, 0.0),
    )?;
    Ok(v.re / np1)
}

/// `IP = ∏_j I_j`, by direct product of the Beta forms and by the closed
/// form `(2π)^(n(n+1)/2) (n+1)^(-(n²+4n+3)/2) ((n+1)!)^n / ∏ (m+n+1)!`.
pub fn fermat_ip(n: usize) -> Result<TwoRoute<f64>> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("n = {n} < 1")));
    }
    let mut direct = 1.0f64;
    for j in 1..=n * n {
        direct *= fermat_ij(n, j)?;
    }
    let nf = n as f64;
    let np1 = nf + 1.0;
    let mut fact_np1 = 1.0f64;
    for f in 2..=(n + 1) {
        fact_np1 *= f as f64;
    }
    let mut denom = 1.0f64;
    for m in 1..n {
        let mut f = 1.0f64;
        for v in 2..=(m + n + 1) {
            f *= v as f64;
        }
        denom *= f;
    }
    let closed = (TAU).powf(nf * np1 / 2.0) * np1.powf(-(nf * nf + 4.0 * nf + 3.0) / 2.0)
        * fact_np1.powi(n as i32)
        / denom;
    Ok(TwoRoute { direct, closed })
}

/// `σ = ∏_(1≤l<k≤n+1) (ε^k - ε^l)²`, by the direct double product and by
/// the closed form `(-1)^(n(n-1)/2) (n+1)^(n+1)`.
pub fn sigma_value(n: usize) -> Result<TwoRoute<Complex64>> {
    let eps = RootOfUnity::new(n)?;
    let mut direct = Complex64::ONE;
    for k in 1..=(n as i64 + 1) {
        for l in 1..k {
            let d = eps.pow(k) - eps.pow(l);
            direct *= d * d;
        }
    }
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let closed = c64(sign * ((n + 1) as f64).powi(n as i32 + 1), 0.0);
    Ok(TwoRoute { direct, closed })
}

/// The `n²×n²` matrix `g_(jr) = ε^(l(r)(l(j)+1) + m(r)(m(j)+1))`.
#[derive(Debug, Clone)]
pub struct GMatrix {
    pub n: usize,
    pub entries: DMatrix<Complex64>,
}

impl GMatrix {
    /// Leading `ns×ns` submatrix `Q_s` (so `Q_1` is the Vandermonde block
    /// and `Q_n` is the whole matrix).
    pub fn q_submatrix(&self, s: usize) -> DMatrix<Complex64> {
        let sz = self.n * s;
        self.entries.view((0, 0), (sz, sz)).into()
    }

    pub fn det(&self) -> Complex64 {
        linalg::det(&self.entries)
    }
}

/// Build the `G` matrix of `ε`-powers over the canonical numeration.
pub fn build_g(n: usize) -> Result<GMatrix> {
    let basis = monomial_basis(n)?;
    let eps = RootOfUnity::new(n)?;
    let sz = n * n;
    let mut entries = DMatrix::<Complex64>::zeros(sz, sz);
    for j in 1..=sz {
        let ej = basis.entry(j);
        for r in 1..=sz {
            let er = basis.entry(r);
            let exponent = (er.l * (ej.l + 1) + er.m * (ej.m + 1)) as i64;
            entries[(j - 1, r - 1)] = eps.pow(exponent);
        }
    }
    Ok(GMatrix { n, entries })
}

/// `det G`, by LU on the built matrix and by the closed form
/// `(n+1)^(-2n) σ^n`.
pub fn det_g(n: usize) -> Result<TwoRoute<Complex64>> {
    let g = build_g(n)?;
    let direct = g.det();
    let sigma = sigma_value(n)?.closed;
    let closed = ((n + 1) as f64).powi(-2 * n as i32) * sigma.powu(n as u32);
    Ok(TwoRoute { direct, closed })
}

/// Worst relative residual of the determinant recurrence
/// `det Q_s = (∏_(l=1)^(s-1) (ε^s - ε^l))^n · det Q · det Q_(s-1)`
/// over `2 ≤ s ≤ n`, plus the Vandermonde base case
/// `det Q = ∏_(1≤l<k≤n) (ε^k - ε^l)`.
pub fn det_g_recurrence_residual(n: usize) -> Result<f64> {
    let g = build_g(n)?;
    let eps = RootOfUnity::new(n)?;
    let q = g.q_submatrix(1);
    let det_q = linalg::det(&q);

    // base case
    let mut vandermonde = Complex64::ONE;
    for k in 1..=(n as i64) {
        for l in 1..k {
            vandermonde *= eps.pow(k) - eps.pow(l);
        }
    }
    let mut worst = (det_q - vandermonde).norm() / det_q.norm().max(1e-300);

    let mut det_prev = det_q;
    for s in 2..=n {
        let lhs = linalg::det(&g.q_submatrix(s));
        let mut pr = Complex64::ONE;
        for l in 1..(s as i64) {
            pr *= eps.pow(s as i64) - eps.pow(l);
        }
        let rhs = pr.powu(n as u32) * det_q * det_prev;
        let scale = lhs.norm().max(rhs.norm()).max(1e-300);
        worst = worst.max((lhs - rhs).norm() / scale);
        det_prev = lhs;
    }
    Ok(worst)
}

/// Direct product `∏_(l=1)^n (1 - ε^l)`; equals `n + 1`.
pub fn roots_of_unity_product(n: usize) -> Result<Complex64> {
    let eps = RootOfUnity::new(n)?;
    let mut p = Complex64::ONE;
    for l in 1..=(n as i64) {
        p *= Complex64::ONE - eps.pow(l);
    }
    Ok(p)
}

/// Relative residual of the Gauss–Legendre multiplication formula
/// `∏_(l=0)^n Γ(z + l/(n+1)) = (2π)^(n/2) (n+1)^(1/2-(n+1)z) Γ((n+1)z)`.
pub fn gauss_legendre_check(n: usize, z: Complex64) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("n = {n} < 1")));
    }
    let np1 = (n + 1) as f64;
    let mut lhs = Complex64::ONE;
    for l in 0..=n {
        lhs *= gamma(z + l as f64 / np1)?;
    }
    let rhs = (TAU).powf(n as f64 / 2.0)
        * c64(np1, 0.0).powc(c64(0.5, 0.0) - z * np1)
        * gamma(z * np1)?;
    let scale = lhs.norm().max(rhs.norm());
    Ok((lhs - rhs).norm() / scale)
}

/// Relative residual of the aggregate Gamma-product identity
/// `∏_(l,m=0)^(n-1) Γ((l+m+2)/(n+1) + 1)
///  = (2π)^((n²-n)/2) (n+1)^(-3(n²-1)/2) ∏_(m=1)^(n-1) (m+n+1)!`.
pub fn gamma_grid_product_check(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("n = {n} < 1")));
    }
    let np1 = (n + 1) as f64;
    let mut lhs = Complex64::ONE;
    for l in 0..n {
        for m in 0..n {
            lhs *= gamma(c64((l + m + 2) as f64 / np1 + 1.0, 0.0))?;
        }
    }
    let mut rhs = (TAU).powf((n * n - n) as f64 / 2.0) * np1.powf(-1.5 * (n * n - 1) as f64);
    for m in 1..n {
        let mut f = 1.0f64;
        for v in 2..=(m + n + 1) {
            f *= v as f64;
        }
        rhs *= f;
    }
    let scale = lhs.norm().max(rhs);
    Ok((lhs - c64(rhs, 0.0)).norm() / scale)
}

/// The Fermat determinant constant `σ^n · IP` (up to sign), assembled from
/// the direct product routes. Equals `C(x^(n+1) + y^(n+1))` of the general
/// closed form up to sign.
pub fn fermat_c(n: usize) -> Result<SignAmbiguous> {
    let sigma = sigma_value(n)?.direct;
    let ip = fermat_ip(n)?.direct;
    Ok(SignAmbiguous::new(
        sigma.powu(n as u32) * ip,
        format!("sigma^{n} * IP (Fermat special case)"),
    ))
}

/// One row of the identity-suite report.
#[derive(Debug, Clone, serde::Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub n: usize,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

fn check(identity: &str, n: usize, residual: f64, threshold: f64) -> IdentityCheck {
    IdentityCheck {
        identity: identity.to_string(),
        n,
        residual,
        threshold,
        pass: residual < threshold,
    }
}

/// Run every two-route/identity check for `1 ≤ n ≤ n_max`.
///
/// Root-of-unity identities (`sigma`, `det G`, its recurrence, the
/// `∏(1-ε^l)` product) run up to `n_max`; Gamma-product identities cap at
/// `min(n_max, 4)` where the closed-form factorials stay well scaled.
pub fn identity_suite(n_max: usize) -> Result<Vec<IdentityCheck>> {
    if n_max < 1 {
        return Err(Error::InvalidParameter(format!("n_max = {n_max} < 1")));
    }
    let thresh = 1e-9;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        rows.push(check("sigma-product-vs-closed", n, sigma_value(n)?.rel_gap(), thresh));
        rows.push(check("det-g-lu-vs-closed", n, det_g(n)?.rel_gap(), thresh));
        rows.push(check(
            "det-g-recurrence",
            n,
            det_g_recurrence_residual(n)?,
            thresh,
        ));
        let rp = roots_of_unity_product(n)?;
        rows.push(check(
            "unity-product-vs-n-plus-1",
            n,
            (rp - c64((n + 1) as f64, 0.0)).norm() / (n + 1) as f64,
            thresh,
        ));
    }
    for n in 1..=n_max.min(4) {
        rows.push(check("ip-product-vs-closed", n, fermat_ip(n)?.rel_gap(), thresh));
        let np1 = (n + 1) as f64;
        rows.push(check(
            "gauss-legendre-at-half",
            n,
            gauss_legendre_check(n, c64(0.5, 0.0))?,
            thresh,
        ));
        // z = 1/(n+1) and z = (n+2)/(n+1) specialize the multiplication
        // formula to the two finite Gamma products used by the IP closed form
        rows.push(check(
            "gamma-product-fractions",
            n,
            gauss_legendre_check(n, c64(1.0 / np1, 0.0))?,
            thresh,
        ));
        rows.push(check(
            "gamma-product-fractions-shifted",
            n,
            gauss_legendre_check(n, c64((n as f64 + 2.0) / np1, 0.0))?,
            thresh,
        ));
        rows.push(check(
            "gamma-grid-product",
            n,
            gamma_grid_product_check(n)?,
            thresh,
        ));
        let sig = sigma_value(n)?;
        let fermat_top = crate::polyring::HomogeneousTop::fermat(n);
        let cap_sigma = fermat_top.sigma()?;
        let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
        rows.push(check(
            "cap-sigma-vs-sigma",
            n,
            (cap_sigma - sig.direct * parity).norm() / cap_sigma.norm(),
            thresh,
        ));
    }
    Ok(rows)
}
