//! Homology cycles as closed lifted chains, the explicit basis on the
//! Fermat curve, and continuous deformation of a basis as the polynomial's
//! coefficients or the level value move.

mod transport;

pub use transport::{
    deform_basis, transport, transport_basis_t, CoeffHomotopy, LevelFamily, TLevelPath,
    TransportOptions,
};

use num_complex::Complex64;

use crate::cover::{branch_points, continue_branch, BranchTrack, TrackOptions, XPath};
use crate::error::{Error, Result};
use crate::polyring::{monomial_basis, BivarPoly};
use crate::specialfn::RootOfUnity;
use crate::c64;

/// One link of a lifted chain: an `x`-plane path, the `y`-branch it starts
/// on, and an orientation sign for integration.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Link {
    pub path: XPath,
    pub y_start: Complex64,
    pub sign: i8,
}

/// A homology cycle represented as a closed chain of lifted path links.
///
/// For chains built by this module the links run in traversal order with
/// all signs `+1`: each link's tracked endpoint is the next link's start in
/// both coordinates, and the last endpoint closes onto the first start.
/// Signs other than `+1` appear only in formally recombined chains.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LiftedChain {
    pub links: Vec<Link>,
}

impl LiftedChain {
    /// Track every link and report the worst endpoint mismatch: consecutive
    /// links must match in `(x, y)` and the chain must close.
    /// Only meaningful for traversal-ordered chains (all signs `+1`).
    pub fn closure_residual(
        &self,
        h: &BivarPoly,
        t: Complex64,
        opts: TrackOptions,
    ) -> Result<f64> {
        if self.links.iter().any(|l| l.sign != 1) {
            return Err(Error::InvalidParameter(
                "closure check needs a traversal-ordered chain (all signs +1)".into(),
            ));
        }
        let mut worst = 0.0f64;
        let mut tracks = Vec::with_capacity(self.links.len());
        for link in &self.links {
            tracks.push(continue_branch(h, t, &link.path, link.y_start, opts)?);
        }
        for (i, tr) in tracks.iter().enumerate() {
            let next = &self.links[(i + 1) % self.links.len()];
            let xgap = (tr.path.end() - next.path.start()).norm();
            let ygap = (tr.y_end - next.y_start).norm();
            worst = worst.max(xgap).max(ygap);
        }
        Ok(worst)
    }

    /// Lift every link (used by the period integrator).
    pub fn lift(
        &self,
        h: &BivarPoly,
        t: Complex64,
        opts: TrackOptions,
    ) -> Result<Vec<BranchTrack>> {
        self.links
            .iter()
            .map(|l| continue_branch(h, t, &l.path, l.y_start, opts))
            .collect()
    }

    /// The chain with reversed orientation: links in reverse order, each
    /// path reversed, and each start branch re-anchored at the tracked
    /// endpoint of its forward link.
    pub fn reversed(&self, h: &BivarPoly, t: Complex64, opts: TrackOptions) -> Result<LiftedChain> {
        let mut links = Vec::with_capacity(self.links.len());
        for link in self.links.iter().rev() {
            let tr = continue_branch(h, t, &link.path, link.y_start, opts)?;
            links.push(Link {
                path: link.path.reversed(),
                y_start: tr.y_end,
                sign: link.sign,
            });
        }
        Ok(LiftedChain { links })
    }

    /// Image of the chain under `(x, y) ↦ (cx·x, cy·y)`.
    pub fn scaled(&self, cx: Complex64, cy: Complex64) -> LiftedChain {
        LiftedChain {
            links: self
                .links
                .iter()
                .map(|l| Link {
                    path: l.path.scaled(cx),
                    y_start: l.y_start * cy,
                    sign: l.sign,
                })
                .collect(),
        }
    }

    /// Refine every path piece in two; a no-op on the homology class.
    pub fn subdivided(&self) -> LiftedChain {
        LiftedChain {
            links: self
                .links
                .iter()
                .map(|l| Link {
                    path: l.path.subdivided(),
                    y_start: l.y_start,
                    sign: l.sign,
                })
                .collect(),
        }
    }

    pub fn start_point(&self) -> (Complex64, Complex64) {
        let l = &self.links[0];
        (l.path.start(), l.y_start)
    }
}

/// An ordered tuple of `n²` cycles on `{h = t}` together with its origin.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CycleBasis {
    pub n: usize,
    pub t: Complex64,
    pub cycles: Vec<LiftedChain>,
    pub provenance: String,
}

impl CycleBasis {
    pub fn to_json_string(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::InvalidInput(format!("serialize cycle basis: {e}")))
    }

    pub fn from_json_str(s: &str) -> Result<CycleBasis> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("parse cycle basis: {e}")))
    }
}

/// The Fermat polynomial `x^(n+1) + y^(n+1)` as a [`BivarPoly`].
pub fn fermat_poly(n: usize) -> BivarPoly {
    BivarPoly::from_terms([((n + 1, 0), Complex64::ONE), ((0, n + 1), Complex64::ONE)])
}

/// The base cycle on `{x^(n+1) + y^(n+1) = 1}`, in branch-point-avoiding
/// form.
///
/// The generator it represents is the difference of the two lifts of the
/// bent radial path `ε → 0 → 1` on the branches through `(0, 1)` and
/// `(0, ε)`; that chain passes through the ramification points over `x = 1`
/// and `x = ε`. Root tracking degenerates there, so the chain built here is
/// the homologous detour loop:
///
/// 1. corridor `ε(1-δ) → 0 → 1-δ` on the branch through `(0, 1)`,
/// 2. a full counterclockwise circle of radius δ around `x = 1` (the local
///    monodromy carries the branch to its `ε·y` partner),
/// 3. the corridor back on the `ε·y` branch,
/// 4. a full clockwise circle around `x = ε`, closing the chain.
///
/// The circle contributions are part of the cycle and are integrated, not
/// neglected; they vanish like `δ^(1+(m+1)/(n+1))` as `δ → 0`.
pub fn fermat_alpha1(n: usize, delta: f64) -> Result<LiftedChain> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("n = {n} < 1")));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter("delta must be positive".into()));
    }
    let eps = RootOfUnity::new(n)?.value;
    let gap = (eps - Complex64::ONE).norm();
    if delta > 0.2 * gap {
        return Err(Error::InvalidParameter(format!(
            "delta = {delta} too large: branch points are only {gap:.3} apart"
        )));
    }
    let h = fermat_poly(n);
    let t = Complex64::ONE;
    let q_a = eps * (1.0 - delta);
    let q_b = c64(1.0 - delta, 0.0);

    let corridor_out = XPath::polyline(&[q_a, Complex64::ZERO, q_b])?;
    let circle_b = XPath::full_circle(Complex64::ONE, delta, std::f64::consts::PI, true);
    let corridor_back = corridor_out.reversed();
    let circle_a = XPath::full_circle(eps, delta, std::f64::consts::PI + eps.arg(), false);

    // clearance sanity against the full branch-point set
    let bps = branch_points(&h, t)?;
    for path in [&corridor_out, &circle_b, &circle_a] {
        for &b in &bps.points {
            let d = path.min_distance_to(b);
            if d < 0.9 * delta {
                return Err(Error::InvalidParameter(format!(
                    "delta = {delta}: path comes within {d:.3e} of branch point {b}"
                )));
            }
        }
    }

    // anchor the branch through (0, 1) and walk the loop once, reading each
    // link's start branch off the previous link's tracked endpoint
    let opts = TrackOptions::default();
    let to_qa = continue_branch(
        &h,
        t,
        &XPath::segment(Complex64::ZERO, q_a),
        Complex64::ONE,
        opts,
    )?;
    let w_a = to_qa.y_end;

    let l1 = continue_branch(&h, t, &corridor_out, w_a, opts)?;
    let l2 = continue_branch(&h, t, &circle_b, l1.y_end, opts)?;
    let l3 = continue_branch(&h, t, &corridor_back, l2.y_end, opts)?;
    let l4 = continue_branch(&h, t, &circle_a, l3.y_end, opts)?;
    let closure = (l4.y_end - w_a).norm();
    if closure > 1e-9 {
        return Err(Error::TrackingFailure(format!(
            "base cycle failed to close: residual {closure:.3e}"
        )));
    }

    Ok(LiftedChain {
        links: vec![
            Link {
                path: corridor_out,
                y_start: w_a,
                sign: 1,
            },
            Link {
                path: circle_b,
                y_start: l1.y_end,
                sign: 1,
            },
            Link {
                path: corridor_back,
                y_start: l2.y_end,
                sign: 1,
            },
            Link {
                path: circle_a,
                y_start: l3.y_end,
                sign: 1,
            },
        ],
    })
}

/// The full basis at `t = 1`: cycle `r` is the image of the base cycle
/// under `(x, y) ↦ (ε^(l(r)) x, ε^(m(r)) y)`. A `delta` that violates the
/// clearance requirements is halved automatically (up to 8 times) before
/// giving up.
pub fn fermat_basis(n: usize, delta: f64) -> Result<CycleBasis> {
    let mut d = delta;
    let mut alpha = fermat_alpha1(n, d);
    for _ in 0..8 {
        match alpha {
            Err(Error::InvalidParameter(_)) if d > 1e-9 => {
                d *= 0.5;
                alpha = fermat_alpha1(n, d);
            }
            _ => break,
        }
    }
    let alpha1 = alpha?;
    let basis = monomial_basis(n)?;
    let eps = RootOfUnity::new(n)?;
    let cycles = basis
        .entries
        .iter()
        .map(|e| alpha1.scaled(eps.pow(e.l as i64), eps.pow(e.m as i64)))
        .collect();
    Ok(CycleBasis {
        n,
        t: Complex64::ONE,
        cycles,
        provenance: "fermat".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha1_closes() {
        for n in 1..=3usize {
            let chain = fermat_alpha1(n, 1e-2).unwrap();
            assert_eq!(chain.links.len(), 4);
            let res = chain
                .closure_residual(&fermat_poly(n), Complex64::ONE, TrackOptions::default())
                .unwrap();
            assert!(res < 1e-10, "n={n}: closure residual {res:.3e}");
        }
    }

    #[test]
    fn alpha1_rejects_oversized_delta() {
        assert!(matches!(
            fermat_alpha1(2, 0.8),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            fermat_alpha1(2, 0.0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn basis_counts_and_group_action() {
        for n in 1..=3usize {
            let basis = fermat_basis(n, 1e-2).unwrap();
            assert_eq!(basis.cycles.len(), n * n);
            assert_eq!(basis.provenance, "fermat");

            // structural group action: cycle r's paths are ε^l(r)-rotations
            // of cycle 1's, and its y-starts ε^m(r)-multiples
            let eps = RootOfUnity::new(n).unwrap();
            let mb = monomial_basis(n).unwrap();
            for e in &mb.entries {
                let expected = basis.cycles[0].scaled(eps.pow(e.l as i64), eps.pow(e.m as i64));
                let got = &basis.cycles[e.j - 1];
                for (a, b) in expected.links.iter().zip(&got.links) {
                    assert!((a.y_start - b.y_start).norm() < 1e-14);
                    assert!((a.path.start() - b.path.start()).norm() < 1e-14);
                    assert!((a.path.end() - b.path.end()).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn rotated_cycles_close_too() {
        let n = 2;
        let basis = fermat_basis(n, 1e-2).unwrap();
        for (r, cycle) in basis.cycles.iter().enumerate() {
            let res = cycle
                .closure_residual(&fermat_poly(n), Complex64::ONE, TrackOptions::default())
                .unwrap();
            assert!(res < 1e-9, "cycle {}: residual {res:.3e}", r + 1);
        }
    }

    #[test]
    fn basis_serialization_round_trip() {
        let basis = fermat_basis(2, 1e-2).unwrap();
        let json = basis.to_json_string().unwrap();
        let back = CycleBasis::from_json_str(&json).unwrap();
        assert_eq!(basis, back);
        assert!(json.contains("fermat"));
    }
}
