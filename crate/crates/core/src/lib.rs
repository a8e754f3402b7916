//! Numerical verification of the determinant formula for period matrices of
//! plane-curve level sets.
//!
//! For a degree-`n+1` polynomial `h(x, y)` whose top homogeneous part `H` has
//! `n+1` distinct zero lines, the determinant of the `n²×n²` matrix of Abelian
//! integrals `∫ x^l y^(m+1) dx` over a homology basis of `{h = t}` is a
//! polynomial `C(H)·∏(t − a_i)` in `t`, with the `a_i` the critical values of
//! `h` and `C(H)` an explicit constant in the coefficients of `H`.
//!
//! This crate computes both sides:
//!
//! * [`closedform`] evaluates the constant `C(H)` from the block-matrix
//!   product and the discriminant power, with its combinatorial constant
//!   `c_n`.
//! * [`cycles`] builds the explicit homology basis on the Fermat curve
//!   `x^(n+1) + y^(n+1) = 1` and deforms it continuously to nearby
//!   polynomials and level values.
//! * [`periods`] integrates the monomial forms over the basis, assembles the
//!   period matrix, fits the determinant as a polynomial in `t`, and checks
//!   it against `C(H)`.
//! * [`specialfn`] holds the Gamma/Beta machinery and every closed-form
//!   quantity of the Fermat special case (root-of-unity products, the `G`
//!   matrix and its determinant recurrence, Beta-integral reductions).
//! * [`polyring`] is the underlying polynomial arithmetic: resultants,
//!   discriminants, critical points, simultaneous root finding.
//! * [`cover`] treats `{h = t}` as a branched cover of the `x`-line: fibers,
//!   branch points, and analytic continuation of `y`-branches along paths.
//!
//! Everything is plain `f64`/`Complex64` arithmetic; all comparisons against
//! closed forms are up to sign, reflecting the orientation freedom of the
//! homology basis.

pub mod closedform;
pub mod cover;
pub mod cycles;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod periods;
pub mod polyring;
pub mod specialfn;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Shorthand used throughout: `c64(re, im)`.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
