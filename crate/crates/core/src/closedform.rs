//! The closed-form side of the determinant formula: the block matrices
//! `E_{n,k}(H)`, the coefficient matrices `A(k, H, q)` they embed into, the
//! combinatorial constant `c_n`, and the constant
//! `C(H) = c_n · Σ(H)^(1/2−n) · ∏_k det E_{n,k}(H)`, defined up to sign.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::polyring::{monomial_basis, BivarPoly, HomogeneousTop};
use crate::c64;

/// A value defined only up to multiplication by −1 (orientation freedom of
/// the homology basis and the square-root branch).
#[derive(Debug, Clone)]
pub struct SignAmbiguous {
    pub value: Complex64,
    pub note: String,
}

impl SignAmbiguous {
    pub fn new(value: Complex64, note: impl Into<String>) -> Self {
        SignAmbiguous {
            value,
            note: note.into(),
        }
    }

    /// Relative distance to the nearer of `{other, -other}`.
    pub fn sign_distance(&self, other: Complex64) -> f64 {
        let scale = self.value.norm().max(other.norm());
        if scale == 0.0 {
            return 0.0;
        }
        let d1 = (self.value - other).norm();
        let d2 = (self.value + other).norm();
        d1.min(d2) / scale
    }

    /// True when `other` matches this value up to sign at relative `tol`;
    /// also reports which sign matched (+1/-1).
    pub fn matches(&self, other: Complex64, tol: f64) -> (bool, i8) {
        let d1 = (self.value - other).norm();
        let d2 = (self.value + other).norm();
        let scale = self.value.norm().max(other.norm()).max(f64::MIN_POSITIVE);
        if d1 <= d2 {
            (d1 / scale < tol, 1)
        } else {
            (d2 / scale < tol, -1)
        }
    }
}

/// The `2k×2k` block matrix `E_{n,k}(H)`; every entry is a fixed integer
/// multiple of a single coefficient `h_s`, so the matrix is linear in `H`.
#[derive(Debug, Clone)]
pub struct BlockMatrixE {
    pub n: usize,
    pub k: usize,
    pub entries: DMatrix<Complex64>,
}

impl BlockMatrixE {
    pub fn det(&self) -> Complex64 {
        linalg::det(&self.entries)
    }

    pub fn entry_scale(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Assemble `E_{n,k}` from its four triangular `k×k` blocks
/// `[[A, B], [C, D]]`:
///
/// * `A[i][j] = (n+1-(j-i)) h_(j-i)` on and above the diagonal;
/// * `B[i][j] = (i-j+1) h_(n-(i-j))` on and below, `h_n` on the diagonal;
/// * `C[i][j] = (j-i+1) h_(j-i+1)` on and above, `h_1` on the diagonal;
/// * `D[i][j] = (n+1-(i-j)) h_(n+1-(i-j))` on and below.
pub fn build_e(top: &HomogeneousTop, k: usize) -> Result<BlockMatrixE> {
    let n = top.n;
    if n < 2 || k < 1 || k > n - 1 {
        return Err(Error::InvalidParameter(format!(
            "E_(n,k) needs n >= 2 and 1 <= k <= n-1, got n = {n}, k = {k}"
        )));
    }
    let h = |s: usize| top.h(s);
    let mut m = DMatrix::<Complex64>::zeros(2 * k, 2 * k);
    for i in 1..=k {
        for j in 1..=k {
            // A block (upper triangular)
            if j >= i {
                let s = j - i;
                m[(i - 1, j - 1)] = h(s) * (n + 1 - s) as f64;
            }
            // B block (lower triangular), columns k+1..2k
            if j <= i {
                let d = i - j;
                m[(i - 1, k + j - 1)] = h(n - d) * (d + 1) as f64;
            }
            // C block (upper triangular), rows k+1..2k
            if j >= i {
                let s = j - i + 1;
                m[(k + i - 1, j - 1)] = h(s) * s as f64;
            }
            // D block (lower triangular)
            if j <= i {
                let d = i - j;
                m[(k + i - 1, k + j - 1)] = h(n + 1 - d) * (n + 1 - d) as f64;
            }
        }
    }
    Ok(BlockMatrixE { n, k, entries: m })
}

/// The `(n+k)×(n+k)` coefficient matrix `A(k, H, q_1..q_(n-k))`: column `s`
/// carries the monomial `x^(n+k-s) y^(s-1)`, and the rows are the degree
/// `n+k-1` polynomials
///
/// * `∂(y q_j)/∂y` for `j = 1..n-k`,
/// * `x^(n-j) y^(j-n+k-1) ∂H/∂x` for `j = n-k+1..n`,
/// * `x^(k-j+n) y^(j-n-1) ∂H/∂y` for `j = n+1..n+k`.
#[derive(Debug, Clone)]
pub struct DefOneMatrix {
    pub n: usize,
    pub k: usize,
    pub entries: DMatrix<Complex64>,
}

impl DefOneMatrix {
    pub fn det(&self) -> Complex64 {
        linalg::det(&self.entries)
    }
}

/// Build the Definition-1 style matrix for given auxiliary polynomials `q`.
pub fn build_a(k: usize, top: &HomogeneousTop, q: &[BivarPoly]) -> Result<DefOneMatrix> {
    let n = top.n;
    if n < 2 || k < 1 || k > n - 1 {
        return Err(Error::InvalidParameter(format!(
            "A(k,H,q) needs n >= 2 and 1 <= k <= n-1, got n = {n}, k = {k}"
        )));
    }
    if q.len() != n - k {
        return Err(Error::InvalidParameter(format!(
            "need n-k = {} auxiliary polynomials, got {}",
            n - k,
            q.len()
        )));
    }
    let want = n + k - 1;
    for (idx, qj) in q.iter().enumerate() {
        let homogeneous = qj.terms().all(|(&(i, j), _)| i + j == want);
        if qj.is_zero() || !homogeneous {
            return Err(Error::InvalidParameter(format!(
                "q_{} must be homogeneous of degree {want}",
                idx + 1
            )));
        }
    }

    let hp = top.to_poly();
    let hx = hp.dx();
    let hy = hp.dy();
    let size = n + k;
    let mut m = DMatrix::<Complex64>::zeros(size, size);
    let y = BivarPoly::monomial(0, 1, Complex64::ONE);

    let set_row = |row: usize, poly: &BivarPoly, m: &mut DMatrix<Complex64>| {
        for s in 1..=size {
            m[(row, s - 1)] = poly.coeff(n + k - s, s - 1);
        }
    };

    for (j, qj) in q.iter().enumerate() {
        let yj = y.mul(qj).dy();
        set_row(j, &yj, &mut m);
    }
    for j in (n - k + 1)..=n {
        let factor = BivarPoly::monomial(n - j, j + k - n - 1, Complex64::ONE);
        set_row(j - 1, &factor.mul(&hx), &mut m);
    }
    for j in (n + 1)..=(n + k) {
        let factor = BivarPoly::monomial(k + n - j, j - n - 1, Complex64::ONE);
        set_row(j - 1, &factor.mul(&hy), &mut m);
    }
    Ok(DefOneMatrix { n, k, entries: m })
}

/// `A(k, H, e_(j_1)..e_(j_(n-k)))` with the canonical monomials of degree
/// `n+k-1` as the auxiliary polynomials. Its determinant is a nonzero
/// `H`-independent constant times `det E_(n,k)(H)`.
pub fn build_a_canonical(k: usize, top: &HomogeneousTop) -> Result<DefOneMatrix> {
    let n = top.n;
    let basis = monomial_basis(n)?;
    let q: Vec<BivarPoly> = basis
        .entries
        .iter()
        .filter(|e| e.d == n + k - 1)
        .map(|e| BivarPoly::monomial(e.l, e.m, Complex64::ONE))
        .collect();
    build_a(k, top, &q)
}

/// Exact integer factorial with overflow detection.
fn factorial_i128(k: usize) -> Result<i128> {
    let mut acc: i128 = 1;
    for f in 2..=(k as i128) {
        acc = acc
            .checked_mul(f)
            .ok_or_else(|| Error::RangeError(format!("{k}! overflows the exact integer range")))?;
    }
    Ok(acc)
}

/// The constant
/// `c_n = (−1)^(n(3n−1)/4) (2π)^(n(n+1)/2) (n+1)^((n²+n−4)/2) ((n+1)!)^n / ∏_(m=1)^(n−1) (m+n+1)!`.
///
/// The half-integer power of −1 is read as `exp(iπ·n(3n−1)/4)`, which
/// reproduces `c_1 = 2πi`; the exponent is integral iff `n ≡ 0, 3 (mod 4)`.
pub fn c_constant(n: usize) -> Result<Complex64> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("n = {n} < 1")));
    }
    let nf = n as f64;
    let sign = (c64(0.0, 1.0) * std::f64::consts::PI * (nf * (3.0 * nf - 1.0) / 4.0)).exp();
    let two_pi_pow = (2.0 * std::f64::consts::PI).powf(nf * (nf + 1.0) / 2.0);
    let np1_pow = ((n + 1) as f64).powf((nf * nf + nf - 4.0) / 2.0);
    let fact_np1 = factorial_i128(n + 1)? as f64;
    let mut denom = 1.0f64;
    for m in 1..n {
        denom *= factorial_i128(m + n + 1)? as f64;
    }
    let magnitude = two_pi_pow * np1_pow * fact_np1.powi(n as i32) / denom;
    if !magnitude.is_finite() {
        return Err(Error::RangeError(format!("c_{n} overflows f64")));
    }
    Ok(sign * magnitude)
}

/// The determinant constant
/// `C(H) = c_n · Σ(H)^(1/2−n) · ∏_(k=1)^(n−1) det E_(n,k)(H)`,
/// with the principal branch of the square root. The result is only
/// meaningful up to sign and is wrapped accordingly.
pub fn c_of_h(top: &HomogeneousTop) -> Result<SignAmbiguous> {
    let n = top.n;
    if !top.is_generic()? {
        return Err(Error::NonGeneric(format!(
            "discriminant of the top part vanishes (|Σ| = {:.3e})",
            top.sigma()?.norm()
        )));
    }
    let sigma = top.sigma()?;
    let cn = c_constant(n)?;
    let mut prod = Complex64::ONE;
    for k in 1..n {
        prod *= build_e(top, k)?.det();
    }
    let value = cn * sigma.powc(c64(0.5 - n as f64, 0.0)) * prod;
    Ok(SignAmbiguous::new(
        value,
        format!("c_{n} * Sigma^(1/2-{n}) * prod det E (principal square root)"),
    ))
}

/// True iff `det E_(n,k)(H)` vanishes numerically, equivalently some
/// nontrivial combination of the canonical degree-`n+k-1` monomials lies in
/// the gradient ideal of `H`.
pub fn gradient_ideal_degenerate(top: &HomogeneousTop, k: usize) -> Result<bool> {
    let e = build_e(top, k)?;
    let scale = e.entry_scale();
    if scale == 0.0 {
        return Ok(true);
    }
    Ok(e.det().norm() < 1e-10 * scale.powi(2 * k as i32))
}

/// Independent linear-algebra oracle for [`gradient_ideal_degenerate`]:
/// build the `2k` polynomials `x^i y^(k-1-i) ∂H/∂x`, `x^i y^(k-1-i) ∂H/∂y`
/// by actual multiplication, restrict their coefficient rows to the degree
/// `n+k-1` monomials *outside* the canonical set, and rank the resulting
/// square matrix by Gaussian elimination. Degenerate iff rank < 2k.
pub fn gradient_ideal_degenerate_oracle(top: &HomogeneousTop, k: usize) -> Result<bool> {
    let n = top.n;
    if n < 2 || k < 1 || k > n - 1 {
        return Err(Error::InvalidParameter(format!(
            "oracle needs n >= 2 and 1 <= k <= n-1, got n = {n}, k = {k}"
        )));
    }
    let hp = top.to_poly();
    let hx = hp.dx();
    let hy = hp.dy();
    // columns: monomials x^(n+k-1-m) y^m of degree n+k-1 with m <= k-1 or
    // m >= n; the canonical e_i occupy k <= m <= n-1
    let col_exps: Vec<usize> = (0..=(n + k - 1)).filter(|&m| m < k || m >= n).collect();
    let rows = 2 * k;
    let mut m = DMatrix::<Complex64>::zeros(rows, col_exps.len());
    for i in 0..k {
        let factor = BivarPoly::monomial(i, k - 1 - i, Complex64::ONE);
        let px = factor.mul(&hx);
        let py = factor.mul(&hy);
        for (c, &ye) in col_exps.iter().enumerate() {
            m[(i, c)] = px.coeff(n + k - 1 - ye, ye);
            m[(k + i, c)] = py.coeff(n + k - 1 - ye, ye);
        }
    }
    Ok(numeric_rank(&m) < rows)
}

/// Rank by Gaussian elimination with full pivoting. Kept free of the LU
/// determinant path so it can serve as an independent check on it.
fn numeric_rank(m: &DMatrix<Complex64>) -> usize {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let scale = a.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let tol = 1e-10 * scale;
    let mut rank = 0;
    let mut used_rows = vec![false; rows];
    for _ in 0..cols.min(rows) {
        let mut best = (0usize, 0usize, 0.0f64);
        for r in 0..rows {
            if used_rows[r] {
                continue;
            }
            for c in 0..cols {
                let v = a[(r, c)].norm();
                if v > best.2 {
                    best = (r, c, v);
                }
            }
        }
        if best.2 <= tol {
            break;
        }
        let (pr, pc, _) = best;
        used_rows[pr] = true;
        rank += 1;
        let pivot = a[(pr, pc)];
        for r in 0..rows {
            if r == pr || used_rows[r] {
                continue;
            }
            let f = a[(r, pc)] / pivot;
            for c in 0..cols {
                let sub = f * a[(pr, c)];
                a[(r, c)] -= sub;
            }
        }
    }
    rank
}
