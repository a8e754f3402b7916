//! Univariate complex polynomials and simultaneous root finding.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Relative magnitude below which a coefficient is treated as zero.
pub const PRUNE_EPS: f64 = 1e-14;

/// Pairwise root distance (relative to root scale) that flags a
/// multiplicity cluster.
pub const CLUSTER_EPS: f64 = 1e-8;

/// Dense univariate polynomial, coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly {
    pub coeffs: Vec<Complex64>,
}

impl UniPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// Drop a trailing run of coefficients that is negligible relative to
    /// the largest coefficient.
    pub fn trim(&mut self) {
        let max = self
            .coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
        if max == 0.0 {
            self.coeffs.clear();
            return;
        }
        while let Some(last) = self.coeffs.last() {
            if last.norm() <= PRUNE_EPS * max {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap_or(&Complex64::ZERO)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::ZERO;
        let mut dp = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Backward error of `z` as a root: `|p(z)|` relative to the evaluation
    /// scale `max|a| · Σ |z|^k`. Small backward error means `z` is an exact
    /// root of a polynomial whose coefficients differ by that fraction of
    /// the largest one. The absolute perturbation model keeps the measure
    /// meaningful for sparse polynomials like `c·x^d`.
    pub fn backward_error(&self, z: Complex64) -> f64 {
        let cmax = self.coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        if cmax == 0.0 {
            return 0.0;
        }
        let az = z.norm();
        let mut scale = 0.0;
        let mut pw = 1.0;
        for _ in &self.coeffs {
            scale += pw;
            pw *= az;
        }
        self.eval(z).norm() / (cmax * scale)
    }
}

/// All roots of a polynomial together with per-root backward errors and
/// multiplicity clusters.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
    /// Indices grouped by proximity; groups of size > 1 mark root clusters
    /// (numerically coincident roots).
    pub clusters: Vec<Vec<usize>>,
}

impl RootSet {
    /// Collapse clusters to (center, multiplicity) pairs.
    pub fn clustered(&self) -> Vec<(Complex64, usize)> {
        self.clusters
            .iter()
            .map(|idx| {
                let c = idx.iter().map(|&i| self.roots[i]).sum::<Complex64>() / idx.len() as f64;
                (c, idx.len())
            })
            .collect()
    }

    pub fn has_clusters(&self) -> bool {
        self.clusters.iter().any(|c| c.len() > 1)
    }
}

/// Find all roots by Ehrlich–Aberth simultaneous iteration from a seeded
/// random initial circle, followed by a Newton polish of each root.
pub fn univariate_roots(coeffs: &[Complex64], tol: f64, seed: u64) -> Result<RootSet> {
    let p = UniPoly::new(coeffs.to_vec());
    let deg = match p.degree() {
        None => return Err(Error::InvalidParameter("zero polynomial has no roots".into())),
        Some(0) => return Err(Error::NoRoots),
        Some(d) => d,
    };

    // Initial guesses on a circle of the Cauchy root-bound radius, with a
    // random phase so symmetric polynomials do not start on a symmetry axis.
    let lc = p.leading();
    let radius = 1.0
        + p.coeffs[..deg]
            .iter()
            .map(|c| (c / lc).norm())
            .fold(0.0f64, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xab3e_97f1);
    let phase: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
    let guesses: Vec<Complex64> = (0..deg)
        .map(|k| {
            Complex64::from_polar(
                radius * 0.8,
                phase + std::f64::consts::TAU * k as f64 / deg as f64,
            )
        })
        .collect();
    roots_from_guesses(&p, &guesses, tol, &mut rng)
}

/// Ehrlich–Aberth iteration warm-started from caller-supplied guesses.
/// Used for root continuation along parameter families, where the previous
/// step's roots are excellent starting points.
pub fn univariate_roots_warm(coeffs: &[Complex64], guesses: &[Complex64], tol: f64) -> Result<RootSet> {
    let p = UniPoly::new(coeffs.to_vec());
    let deg = match p.degree() {
        None => return Err(Error::InvalidParameter("zero polynomial has no roots".into())),
        Some(0) => return Err(Error::NoRoots),
        Some(d) => d,
    };
    if guesses.len() != deg {
        return Err(Error::InvalidParameter(format!(
            "warm start needs {deg} guesses, got {}",
            guesses.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x77aa_1234);
    roots_from_guesses(&p, guesses, tol, &mut rng)
}

fn roots_from_guesses(
    p: &UniPoly,
    guesses: &[Complex64],
    tol: f64,
    rng: &mut ChaCha8Rng,
) -> Result<RootSet> {
    let deg = p.degree().unwrap();
    let mut z = guesses.to_vec();
    let max_iter = 400;
    let mut converged = false;

    for _ in 0..max_iter {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let (pv, dv) = p.eval_with_derivative(z[i]);
            if p.backward_error(z[i]) < 1e-16 {
                continue;
            }
            let w = if dv.norm() > 0.0 {
                pv / dv
            } else {
                // stationary start; nudge off the critical point
                let mag = 1e-6 * (1.0 + z[i].norm());
                z[i] += Complex64::from_polar(mag, rng.gen::<f64>() * 6.28);
                continue;
            };
            let mut s = Complex64::ZERO;
            let mut collided = false;
            for j in 0..deg {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() < 1e-300 {
                        collided = true;
                        break;
                    }
                    s += d.inv();
                }
            }
            if collided {
                let mag = 1e-8 * (1.0 + z[i].norm());
                z[i] += Complex64::from_polar(mag, rng.gen::<f64>() * 6.28);
                continue;
            }
            let denom = Complex64::ONE - w * s;
            let corr = if denom.norm() > 1e-300 { w / denom } else { w };
            z[i] -= corr;
            max_step = max_step.max(corr.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }

    // Newton polish; multiple roots stall at a cluster of approximations,
    // which is fine: their backward error is still tiny.
    for zi in z.iter_mut() {
        for _ in 0..30 {
            let (pv, dv) = p.eval_with_derivative(*zi);
            if dv.norm() == 0.0 {
                break;
            }
            let step = pv / dv;
            *zi -= step;
            if step.norm() <= 1e-16 * (1.0 + zi.norm()) {
                break;
            }
        }
    }

    let residuals: Vec<f64> = z.iter().map(|&zi| p.backward_error(zi)).collect();
    let worst = residuals.iter().cloned().fold(0.0f64, f64::max);
    if worst > tol {
        if !converged {
            return Err(Error::SolverFailure(format!(
                "Aberth iteration stalled; worst backward error {worst:.3e} > tol {tol:.3e}"
            )));
        }
        return Err(Error::SolverFailure(format!(
            "root residual {worst:.3e} exceeds tolerance {tol:.3e} (degree {deg})"
        )));
    }

    let clusters = cluster_points(&z, CLUSTER_EPS);
    Ok(RootSet {
        roots: z,
        residuals,
        clusters,
    })
}

/// Group points whose pairwise distance is below `eps * scale` into
/// connected components. Scale is the largest point magnitude, floored at 1.
pub fn cluster_points(pts: &[Complex64], eps: f64) -> Vec<Vec<usize>> {
    let scale = pts.iter().map(|p| p.norm()).fold(1.0f64, f64::max);
    let thresh = eps * scale;
    let n = pts.len();
    let mut assigned = vec![usize::MAX; n];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if assigned[i] != usize::MAX {
            continue;
        }
        let id = clusters.len();
        clusters.push(vec![i]);
        assigned[i] = id;
        // grow the component breadth-first
        let mut frontier = vec![i];
        while let Some(a) = frontier.pop() {
            for b in 0..n {
                if assigned[b] == usize::MAX && (pts[a] - pts[b]).norm() < thresh {
                    assigned[b] = id;
                    clusters[id].push(b);
                    frontier.push(b);
                }
            }
        }
    }
    clusters
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn sorted_by_im(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        v
    }

    #[test]
    fn quadratic_plus_one() {
        // x^2 + 1 -> {i, -i}
        let rs = univariate_roots(&[c64(1.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)], 1e-12, 7).unwrap();
        let r = sorted_by_im(rs.roots.clone());
        assert!((r[0] - c64(0.0, -1.0)).norm() < 1e-12);
        assert!((r[1] - c64(0.0, 1.0)).norm() < 1e-12);
        assert!(!rs.has_clusters());
    }

    #[test]
    fn cube_roots_of_unity() {
        // x^3 - 1
        let rs = univariate_roots(
            &[c64(-1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)],
            1e-12,
            3,
        )
        .unwrap();
        for root in &rs.roots {
            assert!((root.powu(3) - Complex64::ONE).norm() < 1e-12);
        }
        let mut args: Vec<f64> = rs.roots.iter().map(|r| r.arg()).collect();
        args.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((args[1] - args[0] - std::f64::consts::TAU / 3.0).abs() < 1e-10);
    }

    #[test]
    fn double_root_cluster_flagged() {
        // (x-1)^2 (x-2) = x^3 - 4x^2 + 5x - 2
        let rs = univariate_roots(
            &[c64(-2.0, 0.0), c64(5.0, 0.0), c64(-4.0, 0.0), c64(1.0, 0.0)],
            1e-12,
            11,
        )
        .unwrap();
        let cl = rs.clustered();
        assert_eq!(cl.len(), 2);
        let (double, simple): (Vec<&(Complex64, usize)>, Vec<&(Complex64, usize)>) =
            cl.iter().partition(|(_, m)| *m == 2);
        assert_eq!(double.len(), 1);
        assert!((double[0].0 - c64(1.0, 0.0)).norm() < 1e-6);
        assert!((simple[0].0 - c64(2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn degree_zero_is_no_roots() {
        match univariate_roots(&[c64(3.0, 0.0)], 1e-12, 0) {
            Err(Error::NoRoots) => {}
            other => panic!("expected NoRoots, got {other:?}"),
        }
    }

    #[test]
    fn derivative_and_eval_agree() {
        let p = UniPoly::new(vec![c64(1.0, 2.0), c64(-3.0, 0.5), c64(0.0, 1.0), c64(2.0, 0.0)]);
        let z = c64(0.7, -0.3);
        let (pv, dv) = p.eval_with_derivative(z);
        assert!((pv - p.eval(z)).norm() < 1e-14);
        assert!((dv - p.derivative().eval(z)).norm() < 1e-14);
    }
}
