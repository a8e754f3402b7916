//! Bivariate and univariate complex polynomial arithmetic: the canonical
//! monomial indexing, gradients, resultants and discriminants, critical
//! points and values, and simultaneous root finding.

mod critical;
mod resultant;
mod unipoly;

pub use critical::{critical_data, CriticalData};
pub use resultant::{discriminant, discriminant_sigma, resultant_y, sylvester_resultant};
pub use unipoly::{cluster_points, univariate_roots, univariate_roots_warm, RootSet, UniPoly, CLUSTER_EPS, PRUNE_EPS};

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense-by-exponent bivariate polynomial over ℂ.
///
/// Keys are exponent pairs `(i, j)` for `x^i y^j`; coefficients below
/// [`PRUNE_EPS`] relative to the largest stored magnitude are pruned, so the
/// zero polynomial has an empty map.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BivarPoly {
    coeffs: BTreeMap<(usize, usize), Complex64>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly::default()
    }

    pub fn from_terms<I: IntoIterator<Item = ((usize, usize), Complex64)>>(terms: I) -> Self {
        let mut p = BivarPoly::default();
        for ((i, j), c) in terms {
            *p.coeffs.entry((i, j)).or_insert(Complex64::ZERO) += c;
        }
        p.prune();
        p
    }

    /// Single monomial `c x^i y^j`.
    pub fn monomial(i: usize, j: usize, c: Complex64) -> Self {
        Self::from_terms([((i, j), c)])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Complex64)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize, j: usize) -> Complex64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drop coefficients below the prune threshold relative to the largest.
    pub fn prune(&mut self) {
        let max = self.max_coeff_norm();
        if max == 0.0 {
            self.coeffs.clear();
            return;
        }
        self.coeffs.retain(|_, c| c.norm() > PRUNE_EPS * max);
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|&(i, j)| i + j).max()
    }

    pub fn x_degree(&self) -> usize {
        self.coeffs.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn y_degree(&self) -> usize {
        self.coeffs.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        // grouped by y-power so each x-power is Horner'd once per section
        self.y_sections().eval(x, y)
    }

    /// Partial derivatives `(∂p/∂x, ∂p/∂y)`.
    pub fn gradient(&self) -> (BivarPoly, BivarPoly) {
        (self.dx(), self.dy())
    }

    pub fn dx(&self) -> BivarPoly {
        BivarPoly::from_terms(
            self.coeffs
                .iter()
                .filter(|(&(i, _), _)| i > 0)
                .map(|(&(i, j), &c)| ((i - 1, j), c * i as f64)),
        )
    }

    pub fn dy(&self) -> BivarPoly {
        BivarPoly::from_terms(
            self.coeffs
                .iter()
                .filter(|(&(_, j), _)| j > 0)
                .map(|(&(i, j), &c)| ((i, j - 1), c * j as f64)),
        )
    }

    pub fn scale(&self, c: Complex64) -> BivarPoly {
        BivarPoly::from_terms(self.coeffs.iter().map(|(&k, &v)| (k, v * c)))
    }

    pub fn add(&self, other: &BivarPoly) -> BivarPoly {
        BivarPoly::from_terms(
            self.coeffs
                .iter()
                .map(|(&k, &v)| (k, v))
                .chain(other.coeffs.iter().map(|(&k, &v)| (k, v))),
        )
    }

    pub fn sub(&self, other: &BivarPoly) -> BivarPoly {
        self.add(&other.scale(-Complex64::ONE))
    }

    pub fn mul(&self, other: &BivarPoly) -> BivarPoly {
        let mut terms = Vec::with_capacity(self.coeffs.len() * other.coeffs.len());
        for (&(i1, j1), &c1) in &self.coeffs {
            for (&(i2, j2), &c2) in &other.coeffs {
                terms.push(((i1 + i2, j1 + j2), c1 * c2));
            }
        }
        BivarPoly::from_terms(terms)
    }

    /// View as a polynomial in `y` whose coefficients are univariate
    /// polynomials in `x`. This is the representation used by fiber solves
    /// and branch tracking, where `x` is pinned and `y` varies.
    pub fn y_sections(&self) -> YSections {
        let dy = self.y_degree();
        let mut secs = vec![Vec::new(); dy + 1];
        for (&(i, j), &c) in &self.coeffs {
            if secs[j].len() <= i {
                secs[j].resize(i + 1, Complex64::ZERO);
            }
            secs[j][i] = c;
        }
        YSections {
            secs: secs.into_iter().map(UniPoly::new).collect(),
        }
    }

    /// Restrict to `y = const`, producing a univariate polynomial in `x`.
    pub fn at_y(&self, y: Complex64) -> UniPoly {
        let dx = self.x_degree();
        let mut coeffs = vec![Complex64::ZERO; dx + 1];
        for (&(i, j), &c) in &self.coeffs {
            coeffs[i] += c * y.powu(j as u32);
        }
        UniPoly::new(coeffs)
    }

    /// Restrict to `x = const`, producing a univariate polynomial in `y`.
    pub fn at_x(&self, x: Complex64) -> UniPoly {
        self.y_sections().at_x(x)
    }

    /// The homogeneous part of top total degree.
    pub fn top_part(&self) -> Result<HomogeneousTop> {
        let deg = self
            .degree()
            .ok_or_else(|| Error::InvalidInput("zero polynomial has no top part".into()))?;
        if deg < 2 {
            return Err(Error::InvalidInput(format!(
                "degree {deg} < 2: no nontrivial homology to work with"
            )));
        }
        let n = deg - 1;
        let coeffs = (0..=deg).map(|s| self.coeff(deg - s, s)).collect();
        HomogeneousTop::new(n, coeffs)
    }
}

impl fmt::Display for BivarPoly {
    /// Text form in the grammar accepted by the CLI parser: a sum of
    /// `c*x^i*y^j` terms with full-roundtrip float formatting.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), &c) in &self.coeffs {
            let (negative, body) = match (c.re != 0.0, c.im != 0.0) {
                (_, false) => (c.re < 0.0, format!("{}", c.re.abs())),
                (false, true) => (c.im < 0.0, format!("{}i", c.im.abs())),
                _ => (
                    false,
                    format!(
                        "({}{}{}i)",
                        c.re,
                        if c.im < 0.0 { "-" } else { "+" },
                        c.im.abs()
                    ),
                ),
            };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            first = false;
            write!(f, "{body}")?;
            if i > 0 {
                write!(f, "*x^{i}")?;
            }
            if j > 0 {
                write!(f, "*y^{j}")?;
            }
        }
        Ok(())
    }
}

/// The homogeneous top part `H(x,y) = Σ h_s x^(n+1-s) y^s` of a degree
/// `n+1` polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousTop {
    pub n: usize,
    /// `h_0 … h_{n+1}`; `h_s` multiplies `x^(n+1-s) y^s`.
    pub coeffs: Vec<Complex64>,
}

impl HomogeneousTop {
    pub fn new(n: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter(format!("n = {n} < 1")));
        }
        if coeffs.len() != n + 2 {
            return Err(Error::InvalidParameter(format!(
                "top part needs n+2 = {} coefficients, got {}",
                n + 2,
                coeffs.len()
            )));
        }
        if coeffs.iter().all(|c| c.norm() == 0.0) {
            return Err(Error::InvalidInput("all top coefficients are zero".into()));
        }
        Ok(HomogeneousTop { n, coeffs })
    }

    /// The Fermat form `x^(n+1) + y^(n+1)`.
    pub fn fermat(n: usize) -> Self {
        let mut coeffs = vec![Complex64::ZERO; n + 2];
        coeffs[0] = Complex64::ONE;
        coeffs[n + 1] = Complex64::ONE;
        HomogeneousTop { n, coeffs }
    }

    pub fn h(&self, s: usize) -> Complex64 {
        self.coeffs[s]
    }

    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, b: Complex64) -> HomogeneousTop {
        HomogeneousTop {
            n: self.n,
            coeffs: self.coeffs.iter().map(|&c| c * b).collect(),
        }
    }

    pub fn to_poly(&self) -> BivarPoly {
        BivarPoly::from_terms(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(s, &c)| ((self.n + 1 - s, s), c)),
        )
    }

    /// Discriminant `Σ(H)`; requires `h_0 ≠ 0`.
    pub fn sigma(&self) -> Result<Complex64> {
        discriminant_sigma(self)
    }

    /// Genericity predicate: `|Σ| > 1e-10 · (coefficient scale)^(2n)`,
    /// i.e. the zero lines of `H` are numerically distinct.
    pub fn is_generic(&self) -> Result<bool> {
        let sigma = self.sigma()?;
        Ok(sigma.norm() > 1e-10 * self.coeff_scale().powi(2 * self.n as i32))
    }
}

/// One record of the canonical monomial numeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisEntry {
    /// 1-based index.
    pub j: usize,
    pub l: usize,
    pub m: usize,
    /// Degree of the monomial, `l + m`.
    pub d: usize,
}

/// The lexicographic numeration `j = 1..n²  ↔  (l, m)`, `0 ≤ l, m ≤ n−1`,
/// ordering `(0,0), (0,1), …, (0,n−1), (1,0), …`. Entry `j` is the monomial
/// `e_j = x^l y^m`; the associated 1-form is `ω_j = y·e_j·dx`.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    pub n: usize,
    pub entries: Vec<BasisEntry>,
}

/// Build the canonical numeration for a given `n`.
pub fn monomial_basis(n: usize) -> Result<MonomialBasis> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("n = {n} < 1")));
    }
    let entries = (1..=n * n)
        .map(|j| {
            let l = (j - 1) / n;
            let m = (j - 1) % n;
            BasisEntry { j, l, m, d: l + m }
        })
        .collect();
    Ok(MonomialBasis { n, entries })
}

impl MonomialBasis {
    pub fn entry(&self, j: usize) -> BasisEntry {
        self.entries[j - 1]
    }

    /// Inverse of the numeration: `(l, m) → j`.
    pub fn index_of(&self, l: usize, m: usize) -> usize {
        l * self.n + m + 1
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Polynomial-in-`y` view with univariate-in-`x` coefficient sections.
#[derive(Debug, Clone)]
pub struct YSections {
    pub secs: Vec<UniPoly>,
}

impl YSections {
    /// Univariate polynomial in `y` at a pinned `x`.
    pub fn at_x(&self, x: Complex64) -> UniPoly {
        UniPoly::new(self.secs.iter().map(|s| s.eval(x)).collect())
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for s in self.secs.iter().rev() {
            acc = acc * y + s.eval(x);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn re(v: f64) -> Complex64 {
        c64(v, 0.0)
    }

    #[test]
    fn monomial_basis_small_n() {
        let b = monomial_basis(2).unwrap();
        assert_eq!(b.len(), 4);
        assert_eq!((b.entry(1).l, b.entry(1).m), (0, 0));
        assert_eq!((b.entry(2).l, b.entry(2).m), (0, 1));
        assert_eq!((b.entry(3).l, b.entry(3).m), (1, 0));
        assert_eq!(b.entry(3).d, 1);
    }

    #[test]
    fn monomial_basis_rejects_zero() {
        assert!(matches!(monomial_basis(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn monomial_basis_round_trip() {
        for n in 1..=5 {
            let b = monomial_basis(n).unwrap();
            for e in &b.entries {
                assert_eq!(b.index_of(e.l, e.m), e.j);
                // shift relations used by the determinant recurrence
                if e.j + n <= n * n {
                    let up = b.entry(e.j + n);
                    assert_eq!(up.l, e.l + 1);
                    assert_eq!(up.m, e.m);
                }
            }
        }
    }

    #[test]
    fn gradient_examples() {
        // x^2 + y^2 -> (2x, 2y)
        let p = BivarPoly::from_terms([((2, 0), re(1.0)), ((0, 2), re(1.0))]);
        let (px, py) = p.gradient();
        assert_eq!(px, BivarPoly::monomial(1, 0, re(2.0)));
        assert_eq!(py, BivarPoly::monomial(0, 1, re(2.0)));

        // x^3 + y^3 - 3x - 6y -> (3x^2 - 3, 3y^2 - 6)
        let p = BivarPoly::from_terms([
            ((3, 0), re(1.0)),
            ((0, 3), re(1.0)),
            ((1, 0), re(-3.0)),
            ((0, 1), re(-6.0)),
        ]);
        let (px, py) = p.gradient();
        assert_eq!(
            px,
            BivarPoly::from_terms([((2, 0), re(3.0)), ((0, 0), re(-3.0))])
        );
        assert_eq!(
            py,
            BivarPoly::from_terms([((0, 2), re(3.0)), ((0, 0), re(-6.0))])
        );

        // constants differentiate to zero
        let c = BivarPoly::monomial(0, 0, re(5.0));
        let (cx, cy) = c.gradient();
        assert!(cx.is_zero() && cy.is_zero());
    }

    #[test]
    fn degree_bookkeeping() {
        assert_eq!(BivarPoly::zero().degree(), None);
        let p = BivarPoly::from_terms([((2, 1), re(1.0)), ((0, 0), re(4.0))]);
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.x_degree(), 2);
        assert_eq!(p.y_degree(), 1);
    }

    #[test]
    fn eval_matches_sections() {
        let p = BivarPoly::from_terms([
            ((3, 0), c64(1.0, 0.5)),
            ((1, 2), c64(-2.0, 0.0)),
            ((0, 3), c64(0.0, 1.0)),
            ((1, 1), c64(3.0, -1.0)),
        ]);
        let (x, y) = (c64(0.3, 0.7), c64(-1.1, 0.2));
        let direct: Complex64 = p
            .terms()
            .map(|(&(i, j), &c)| c * x.powu(i as u32) * y.powu(j as u32))
            .sum();
        assert!((p.eval(x, y) - direct).norm() < 1e-13 * direct.norm().max(1.0));
        assert!((p.y_sections().at_x(x).eval(y) - direct).norm() < 1e-13 * direct.norm().max(1.0));
        assert!((p.at_y(y).eval(x) - direct).norm() < 1e-13 * direct.norm().max(1.0));
    }

    #[test]
    fn top_part_of_fermat() {
        let p = BivarPoly::from_terms([((3, 0), re(1.0)), ((0, 3), re(1.0)), ((1, 0), re(-0.3))]);
        let top = p.top_part().unwrap();
        assert_eq!(top.n, 2);
        assert_eq!(top.coeffs, HomogeneousTop::fermat(2).coeffs);
    }

    #[test]
    fn display_round_trips_terms() {
        let p = BivarPoly::from_terms([((2, 0), re(1.0)), ((0, 2), c64(0.25, -1.5))]);
        let s = format!("{p}");
        assert!(s.contains("x^2"));
        assert!(s.contains("(0.25-1.5i)*y^2"));
        let q = BivarPoly::from_terms([((3, 0), re(-1.0)), ((0, 0), re(-7.25)), ((0, 1), c64(0.0, -2.0))]);
        assert_eq!(format!("{q}"), "-7.25 - 2i*y^1 - 1*x^3");
    }
}
