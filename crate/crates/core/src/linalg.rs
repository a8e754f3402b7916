//! Small dense complex linear-algebra helpers shared by the closed-form and
//! period modules. Backed by nalgebra's LU; matrices here are tiny
//! (at most n² × n²).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polyring::UniPoly;

/// Determinant by LU with partial pivoting.
pub fn det(m: &DMatrix<Complex64>) -> Complex64 {
    assert_eq!(m.nrows(), m.ncols());
    if m.nrows() == 0 {
        return Complex64::ONE;
    }
    m.clone().lu().determinant()
}

/// Ratio of `|det|` to the product of row norms (Hadamard bound). Equals 1
/// for orthogonal rows and 0 for dependent rows; a cheap conditioning
/// indicator for "are these period vectors independent".
pub fn hadamard_ratio(m: &DMatrix<Complex64>) -> f64 {
    let d = det(m).norm();
    let mut bound = 1.0;
    for r in 0..m.nrows() {
        bound *= m.row(r).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    }
    if bound == 0.0 {
        0.0
    } else {
        d / bound
    }
}

/// Solve the least-squares problem `min ‖V c − rhs‖` for a polynomial of
/// the given degree sampled at `nodes`: `V[k][p] = nodes[k]^p`.
///
/// The caller is expected to pre-center the nodes (the period fit maps its
/// `t`-circle to the unit circle first), which keeps the Vandermonde system
/// well conditioned; normal equations are then perfectly adequate.
pub fn polyfit(nodes: &[Complex64], rhs: &[Complex64], degree: usize) -> Result<UniPoly> {
    let m = nodes.len();
    let cols = degree + 1;
    if m < cols {
        return Err(Error::InvalidParameter(format!(
            "{m} samples cannot determine a degree-{degree} polynomial"
        )));
    }
    let mut v = DMatrix::<Complex64>::zeros(m, cols);
    for (k, &t) in nodes.iter().enumerate() {
        let mut p = Complex64::ONE;
        for c in 0..cols {
            v[(k, c)] = p;
            p *= t;
        }
    }
    let b = nalgebra::DVector::from_column_slice(rhs);
    let vh = v.adjoint();
    let gram = &vh * &v;
    let rhs2 = &vh * b;
    let sol = gram
        .lu()
        .solve(&rhs2)
        .ok_or_else(|| Error::SolverFailure("singular least-squares system".into()))?;
    Ok(UniPoly::new(sol.iter().copied().collect()))
}
