//! Critical points and critical values of a bivariate polynomial.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polyring::{resultant_y, univariate_roots, BivarPoly};

/// Zeros of the gradient together with the critical values `a_i = h(point)`.
///
/// `values` lists one entry per critical point *counted with multiplicity*,
/// so for a generic degree-`n+1` input it has length `n²`. The fully
/// degenerate case `h = x^(n+1) + y^(n+1)` yields a single point at the
/// origin with multiplicity `n²` and all values zero.
#[derive(Debug, Clone)]
pub struct CriticalData {
    pub points: Vec<(Complex64, Complex64)>,
    pub multiplicities: Vec<usize>,
    /// Critical values `a_1 … a_(n²)`, repeated per multiplicity.
    pub values: Vec<Complex64>,
    /// Gradient norm at each point.
    pub residuals: Vec<f64>,
}

impl CriticalData {
    /// Distinct critical values (cluster representatives).
    pub fn distinct_values(&self) -> Vec<Complex64> {
        self.points
            .iter()
            .zip(&self.multiplicities)
            .map(|(&(x, y), _)| (x, y))
            .zip(self.values_per_point())
            .map(|(_, v)| v)
            .collect()
    }

    fn values_per_point(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.points.len());
        let mut k = 0;
        for &m in &self.multiplicities {
            out.push(self.values[k]);
            k += m;
        }
        out
    }
}

/// Solve `∂h/∂x = ∂h/∂y = 0` by resultant elimination, back-substitution,
/// and a 2D Newton polish; evaluate `h` at each solution.
pub fn critical_data(h: &BivarPoly, tol: f64) -> Result<CriticalData> {
    let deg = h
        .degree()
        .ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if deg < 2 {
        return Err(Error::InvalidInput(format!(
            "degree {deg} < 2 has no isolated critical points of interest"
        )));
    }
    let n = deg - 1;
    let expected = n * n;
    let (hx, hy) = h.gradient();
    if hx.is_zero() || hy.is_zero() {
        return Err(Error::DegenerateInput(
            "a partial derivative vanishes identically".into(),
        ));
    }

    // Candidate (x, y) pairs with multiplicities carried from root clusters.
    let candidates: Vec<((Complex64, Complex64), usize)> = if hx.y_degree() == 0 {
        // ∂h/∂x is univariate in x (e.g. Fermat-like h): roots directly.
        cross_candidates(&hx.at_y(Complex64::ZERO), &hy, tol)?
    } else if hy.y_degree() == 0 {
        cross_candidates(&hy.at_y(Complex64::ZERO), &hx, tol)?
    } else {
        let eliminant = resultant_y(&hx, &hy)?;
        if eliminant.is_zero() {
            return Err(Error::DegenerateInput(
                "gradient components share a common factor".into(),
            ));
        }
        let xroots = univariate_roots(&eliminant.coeffs, tol.max(1e-9), 17)?;
        let mut out = Vec::new();
        for (x0, mx) in xroots.clustered() {
            // y-candidates: roots of the lower-degree section, filtered by
            // the other component's residual.
            let pu = hx.at_x(x0);
            let qu = hy.at_x(x0);
            let (small, other) = if pu.degree() <= qu.degree() {
                (pu, qu)
            } else {
                (qu.clone(), pu)
            };
            let yroots = univariate_roots(&small.coeffs, tol.max(1e-9), 19)?;
            for (y0, my) in yroots.clustered() {
                if other.backward_error(y0) < 1e-5 {
                    out.push(((x0, y0), mx * my));
                }
            }
        }
        out
    };

    // Newton polish on the gradient system.
    let hxx = hx.dx();
    let hxy = hx.dy();
    let hyx = hy.dx();
    let hyy = hy.dy();
    let scale = h.max_coeff_norm().max(1.0);

    let mut polished: Vec<((Complex64, Complex64), usize)> = Vec::new();
    for ((mut x, mut y), mult) in candidates {
        let mut ok = false;
        for _ in 0..60 {
            let fx = hx.eval(x, y);
            let fy = hy.eval(x, y);
            let r = (fx.norm_sqr() + fy.norm_sqr()).sqrt();
            if r < tol * scale {
                ok = true;
                break;
            }
            let a = hxx.eval(x, y);
            let b = hxy.eval(x, y);
            let c = hyx.eval(x, y);
            let d = hyy.eval(x, y);
            let det = a * d - b * c;
            if det.norm() < 1e-14 * scale * scale {
                // singular Jacobian: degenerate critical point, keep as is
                ok = r < 1e-6 * scale;
                break;
            }
            let dx = (fx * d - fy * b) / det;
            let dy = (a * fy - c * fx) / det;
            x -= dx;
            y -= dy;
            if dx.norm() + dy.norm() < 1e-16 * (1.0 + x.norm() + y.norm()) {
                let r = (hx.eval(x, y).norm_sqr() + hy.eval(x, y).norm_sqr()).sqrt();
                ok = r < tol * scale || r < 1e-8 * scale;
                break;
            }
        }
        if ok {
            polished.push(((x, y), mult));
        }
    }

    // Merge points that converged together.
    let mut merged: Vec<((Complex64, Complex64), usize)> = Vec::new();
    'outer: for ((x, y), m) in polished {
        for ((mx, my), mm) in merged.iter_mut() {
            let sep = ((x - *mx).norm_sqr() + (y - *my).norm_sqr()).sqrt();
            let sc = (mx.norm() + my.norm()).max(1.0);
            if sep < 1e-8 * sc {
                *mm += m;
                continue 'outer;
            }
        }
        merged.push(((x, y), m));
    }

    let total: usize = merged.iter().map(|&(_, m)| m).sum();
    if total < expected {
        return Err(Error::DegenerateInput(format!(
            "found {total} gradient zeros (with multiplicity) of the {expected} expected"
        )));
    }
    if total > expected {
        // extraneous eliminant factors should not survive the back-subst
        // filter; treat excess as degeneracy of the input
        return Err(Error::DegenerateInput(format!(
            "found {total} gradient zeros where {expected} were expected"
        )));
    }

    let mut points = Vec::new();
    let mut multiplicities = Vec::new();
    let mut values = Vec::new();
    let mut residuals = Vec::new();
    for ((x, y), m) in merged {
        let v = h.eval(x, y);
        points.push((x, y));
        multiplicities.push(m);
        residuals.push((hx.eval(x, y).norm_sqr() + hy.eval(x, y).norm_sqr()).sqrt());
        for _ in 0..m {
            values.push(v);
        }
    }
    Ok(CriticalData {
        points,
        multiplicities,
        values,
        residuals,
    })
}

/// Candidates when one gradient component is univariate in `x`: its x-roots
/// crossed with the y-roots of the other component's fiber.
fn cross_candidates(
    xpoly: &crate::polyring::UniPoly,
    other: &BivarPoly,
    tol: f64,
) -> Result<Vec<((Complex64, Complex64), usize)>> {
    let xroots = univariate_roots(&xpoly.coeffs, tol.max(1e-9), 23)?;
    let mut out = Vec::new();
    for (x0, mx) in xroots.clustered() {
        let fiber = other.at_x(x0);
        if fiber.degree().is_none() {
            return Err(Error::DegenerateInput(
                "gradient component vanishes identically on a fiber".into(),
            ));
        }
        if fiber.degree() == Some(0) {
            continue;
        }
        let yroots = univariate_roots(&fiber.coeffs, tol.max(1e-9), 29)?;
        for (y0, my) in yroots.clustered() {
            out.push(((x0, y0), mx * my));
        }
    }
    Ok(out)
}
