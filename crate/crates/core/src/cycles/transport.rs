//! Continuous transport of cycle bases along one-parameter families of
//! level functions: coefficient homotopies (the polynomial moves, the level
//! stays) and level transport (the polynomial stays, `t` moves along a
//! path).
//!
//! Chains are flattened to closed polyline loops and carried step by step.
//! Per step the branch points are re-solved by warm-started continuation
//! and matched to the previous step, `y`-starts are continued onto the new
//! fiber, and any node or edge that a branch point approaches is pushed
//! aside (subdividing where needed) so the configured clearance always
//! holds. Pushed geometry retracts again once the obstacle passes, except
//! where a branch point sits in the way — which is exactly how monodromy
//! acts on the basis. Since no branch point ever crosses a chain, each
//! output chain is homotopic to the continuation of its input, so a
//! generator system stays a generator system.

use num_complex::Complex64;

use crate::cover::{branch_roots_warm, FiberFamily, TrackOptions, XPath};
use crate::cycles::{CycleBasis, LiftedChain, Link};
use crate::error::{Error, Result};
use crate::exec;
use crate::polyring::{critical_data, discriminant_sigma, univariate_roots, BivarPoly};

/// A one-parameter family `s ∈ [0, 1]` of level sets `{h_s = t_s}`.
pub trait LevelFamily: Sync {
    fn poly_at(&self, s: f64) -> BivarPoly;
    fn t_at(&self, s: f64) -> Complex64;
    /// True when `poly_at` does not depend on `s` (lets the engine cache
    /// the critical values).
    fn poly_is_constant(&self) -> bool;
    fn describe(&self) -> String;
}

/// Straight-line coefficient homotopy `h_s = (1-s)·h_from + s·h_to` at a
/// fixed level value.
pub struct CoeffHomotopy {
    pub from: BivarPoly,
    pub to: BivarPoly,
    pub t: Complex64,
}

impl LevelFamily for CoeffHomotopy {
    fn poly_at(&self, s: f64) -> BivarPoly {
        self.from
            .scale(Complex64::new(1.0 - s, 0.0))
            .add(&self.to.scale(Complex64::new(s, 0.0)))
    }

    fn t_at(&self, _s: f64) -> Complex64 {
        self.t
    }

    fn poly_is_constant(&self) -> bool {
        false
    }

    fn describe(&self) -> String {
        "deformed along coefficient path".into()
    }
}

/// Fixed polynomial, level value moving along an `x`-plane path reused as a
/// `t`-plane path.
pub struct TLevelPath {
    pub h: BivarPoly,
    pub path: XPath,
}

impl LevelFamily for TLevelPath {
    fn poly_at(&self, _s: f64) -> BivarPoly {
        self.h.clone()
    }

    fn t_at(&self, s: f64) -> Complex64 {
        self.path.point_at(s * self.path.param_max())
    }

    fn poly_is_constant(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        format!("transported in t to {}", self.path.end())
    }
}

/// Transport configuration.
#[derive(Debug, Clone, Copy)]
pub struct TransportOptions {
    /// Initial number of homotopy steps; doubled on failure.
    pub steps: usize,
    /// Hard cap on the step count reached by doubling.
    pub max_steps: usize,
    /// Branch-point clearance maintained around every chain.
    pub clearance: f64,
    /// Tolerance handed to fiber solves and closure tracking.
    pub track_tol: f64,
    /// Minimum allowed distance from `t_s` to any critical value.
    pub crit_guard: f64,
    pub parallel: bool,
}

impl Default for TransportOptions {
    fn default() -> Self {
        TransportOptions {
            steps: 32,
            max_steps: 1024,
            clearance: 4e-3,
            track_tol: 1e-12,
            crit_guard: 0.05,
            parallel: true,
        }
    }
}

/// Deform a basis from the level set of `h_from` to that of `h_to` at a
/// fixed `t`, along the straight-line coefficient homotopy.
///
/// Identity homotopies return the input unchanged. The homotopy is
/// rejected up front if the interpolated top part loses genericity
/// anywhere on `[0, 1]`.
pub fn deform_basis(
    basis: &CycleBasis,
    h_from: &BivarPoly,
    h_to: &BivarPoly,
    t: Complex64,
    steps: usize,
) -> Result<CycleBasis> {
    if (basis.t - t).norm() > 1e-12 * (1.0 + t.norm()) {
        return Err(Error::InvalidParameter(format!(
            "basis lives at t = {}, deformation requested at t = {t}",
            basis.t
        )));
    }
    if h_from == h_to {
        return Ok(basis.clone());
    }
    check_top_genericity_along(h_from, h_to)?;
    let family = CoeffHomotopy {
        from: h_from.clone(),
        to: h_to.clone(),
        t,
    };
    let opts = TransportOptions {
        steps,
        ..TransportOptions::default()
    };
    transport(basis, &family, opts)
}

/// Transport a basis to a new level value along a `t`-plane path, keeping
/// the polynomial fixed.
pub fn transport_basis_t(
    basis: &CycleBasis,
    h: &BivarPoly,
    t_path: &XPath,
    steps: usize,
) -> Result<CycleBasis> {
    if (basis.t - t_path.start()).norm() > 1e-9 * (1.0 + basis.t.norm()) {
        return Err(Error::InvalidParameter(format!(
            "t-path starts at {} but the basis lives at t = {}",
            t_path.start(),
            basis.t
        )));
    }
    let family = TLevelPath {
        h: h.clone(),
        path: t_path.clone(),
    };
    let opts = TransportOptions {
        steps,
        ..TransportOptions::default()
    };
    transport(basis, &family, opts)
}

/// `Σ` of the interpolated top part is a degree-`2n` polynomial in `s`;
/// reconstruct it from samples and reject the homotopy if it has a root on
/// (or suspiciously near) the real segment `[0, 1]`.
fn check_top_genericity_along(h_from: &BivarPoly, h_to: &BivarPoly) -> Result<()> {
    let top0 = h_from.top_part()?;
    let top1 = h_to.top_part()?;
    if top0.n != top1.n {
        return Err(Error::InvalidHomotopy(format!(
            "degree changes along the homotopy ({} vs {})",
            top0.n + 1,
            top1.n + 1
        )));
    }
    let n = top0.n;
    let deg = 2 * n;
    let m = deg + 1;
    let mut nodes = Vec::with_capacity(m);
    let mut vals = Vec::with_capacity(m);
    for k in 0..m {
        let s = k as f64 / (m - 1).max(1) as f64;
        let coeffs: Vec<Complex64> = top0
            .coeffs
            .iter()
            .zip(&top1.coeffs)
            .map(|(a, b)| a * (1.0 - s) + b * s)
            .collect();
        let top = crate::polyring::HomogeneousTop::new(n, coeffs)?;
        nodes.push(Complex64::new(s, 0.0));
        vals.push(discriminant_sigma(&top)?);
    }
    let sigma_poly = crate::linalg::polyfit(&nodes, &vals, deg)?;
    let scale = vals.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return Err(Error::InvalidHomotopy(
            "top part is nongeneric along the whole homotopy".into(),
        ));
    }
    if let Some(d) = sigma_poly.degree() {
        if d >= 1 {
            if let Ok(roots) = univariate_roots(&sigma_poly.coeffs, 1e-6, 0x6e1) {
                for r in roots.roots {
                    if r.im.abs() < 1e-3 && (-0.01..=1.01).contains(&r.re) {
                        return Err(Error::InvalidHomotopy(format!(
                            "top part loses genericity near s = {:.4}",
                            r.re
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Run the step-doubling transport loop.
pub fn transport(
    basis: &CycleBasis,
    family: &dyn LevelFamily,
    opts: TransportOptions,
) -> Result<CycleBasis> {
    let mut steps = opts.steps.max(1);
    loop {
        match attempt(basis, family, &opts, steps) {
            Ok(b) => return Ok(b),
            Err(Error::HomotopyFailure { s, reason }) => {
                if steps * 2 > opts.max_steps {
                    return Err(Error::HomotopyFailure {
                        s,
                        reason: format!("{reason} (step cap {} reached)", opts.max_steps),
                    });
                }
                steps *= 2;
            }
            Err(e) => return Err(e),
        }
    }
}

fn attempt(
    basis: &CycleBasis,
    family: &dyn LevelFamily,
    opts: &TransportOptions,
    steps: usize,
) -> Result<CycleBasis> {
    let h0 = family.poly_at(0.0);
    let t0 = family.t_at(0.0);
    let mut chains: Vec<PolyChain> = basis
        .cycles
        .iter()
        .map(|c| PolyChain::from_chain(c, opts.clearance))
        .collect::<Result<_>>()?;

    let mut obstacles = initial_obstacles(&h0, t0)?;
    let clearance = effective_clearance(opts.clearance, &chains, &obstacles)?;

    // critical values of a fixed polynomial do not move
    let cached_crit: Option<Vec<Complex64>> = if family.poly_is_constant() {
        Some(critical_data(&h0, 1e-9)?.values)
    } else {
        None
    };

    for k in 1..=steps {
        let s = k as f64 / steps as f64;
        let h = family.poly_at(s);
        let t = family.t_at(s);

        // the level must stay noncritical
        let crit = match &cached_crit {
            Some(v) => v.clone(),
            None => {
                critical_data(&h, 1e-9)
                    .map_err(|e| Error::InvalidHomotopy(format!("critical data at s = {s}: {e}")))?
                    .values
            }
        };
        let dmin = crit
            .iter()
            .map(|a| (t - a).norm())
            .fold(f64::INFINITY, f64::min);
        if dmin < opts.crit_guard {
            return Err(Error::InvalidHomotopy(format!(
                "t = {t} comes within {dmin:.3e} of a critical value at s = {s}"
            )));
        }

        let new_obs = branch_roots_warm(&h, t, &obstacles)
            .map_err(|e| Error::HomotopyFailure { s, reason: e.to_string() })?;
        if new_obs.len() != obstacles.len() {
            return Err(Error::HomotopyFailure {
                s,
                reason: format!(
                    "branch point count changed ({} -> {})",
                    obstacles.len(),
                    new_obs.len()
                ),
            });
        }
        let max_move = obstacles
            .iter()
            .zip(&new_obs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        // distance from a straight obstacle hop to any edge is convex, so
        // clearance at the step boundaries rules out mid-step crossings;
        // the cap only keeps the repair local
        if max_move > 0.45 * clearance {
            return Err(Error::HomotopyFailure {
                s,
                reason: format!(
                    "branch points moved {max_move:.3e} in one step against clearance {clearance:.3e}"
                ),
            });
        }

        let fam = FiberFamily::new(&h, t)?;
        let results = exec::map_slice(opts.parallel, &mut_refs(&mut chains), |cell| {
            // SAFETY of the pattern: each chain is touched by exactly one
            // closure invocation (map over distinct &mut).
            let chain: &mut PolyChain = unsafe { &mut *cell.0 };
            advance_chain(chain, &fam, &new_obs, clearance, s)
        });
        for r in results {
            r?;
        }
        obstacles = new_obs;
    }

    // re-track every output chain and require closure
    let h1 = family.poly_at(1.0);
    let t1 = family.t_at(1.0);
    let track = TrackOptions {
        tol: opts.track_tol,
        ..TrackOptions::default()
    };
    let cycles: Vec<LiftedChain> = chains.iter().map(|c| c.to_chain()).collect();
    for (i, c) in cycles.iter().enumerate() {
        let res = c
            .closure_residual(&h1, t1, track)
            .map_err(|e| Error::HomotopyFailure {
                s: 1.0,
                reason: format!("cycle {}: {e}", i + 1),
            })?;
        if res > 1e-8 {
            return Err(Error::HomotopyFailure {
                s: 1.0,
                reason: format!("cycle {} closure residual {res:.3e}", i + 1),
            });
        }
    }

    Ok(CycleBasis {
        n: basis.n,
        t: t1,
        cycles,
        provenance: format!("{} -> {}", basis.provenance, family.describe()),
    })
}

/// Wrap &mut references so they can ride through the shared-slice parallel
/// helper; each element is disjoint.
struct MutCell(*mut PolyChain);
unsafe impl Sync for MutCell {}
unsafe impl Send for MutCell {}

fn mut_refs(chains: &mut [PolyChain]) -> Vec<MutCell> {
    chains.iter_mut().map(|c| MutCell(c as *mut _)).collect()
}

fn initial_obstacles(h: &BivarPoly, t: Complex64) -> Result<Vec<Complex64>> {
    branch_roots_warm(h, t, &[])
}

/// The clearance actually enforced: never wider than the tightest initial
/// obstacle-to-chain distance (e.g. the base-cycle circles sit exactly at
/// their construction radius around a branch point).
fn effective_clearance(
    requested: f64,
    chains: &[PolyChain],
    obstacles: &[Complex64],
) -> Result<f64> {
    let mut dmin = f64::INFINITY;
    for c in chains {
        for &o in obstacles {
            dmin = dmin.min(c.min_distance_to(o));
        }
    }
    // 0.95 (not lower) so that nodes parked just outside the clearance by
    // an earlier transport do not ratchet the effective value down across
    // chained transports
    let clearance = requested.min(0.95 * dmin);
    if clearance < 1e-6 {
        return Err(Error::InvalidParameter(format!(
            "initial geometry leaves no workable clearance (min distance {dmin:.3e})"
        )));
    }
    Ok(clearance)
}

/// One chain, one step: continue the `y`-starts onto the new fiber, then
/// repair the geometry against the moved obstacles.
fn advance_chain(
    chain: &mut PolyChain,
    fam: &FiberFamily,
    obstacles: &[Complex64],
    clearance: f64,
    s: f64,
) -> Result<()> {
    let fail = |reason: String| Error::HomotopyFailure { s, reason };

    // (a) y-starts follow the family at their (old) anchor points
    for li in 0..chain.y_start.len() {
        let x = chain.nodes[chain.link_start[li]];
        let y = continue_y_to_fiber(fam, x, chain.y_start[li]).map_err(|e| fail(e.to_string()))?;
        chain.y_start[li] = y;
    }

    // (b) geometry repair at the new obstacle positions
    let moved_anchors = chain
        .repair(obstacles, clearance)
        .map_err(|e| fail(e.to_string()))?;

    // (c) anchors that were pushed carry their branch along the move
    for (li, old_x) in moved_anchors {
        let new_x = chain.nodes[chain.link_start[li]];
        let y = continue_y_along_move(fam, old_x, new_x, chain.y_start[li])
            .map_err(|e| fail(e.to_string()))?;
        chain.y_start[li] = y;
    }

    chain.cleanup(obstacles, clearance);
    let worst = chain.min_obstacle_distance(obstacles);
    if worst < 0.85 * clearance {
        return Err(fail(format!(
            "post-repair clearance {worst:.3e} below {clearance:.3e}"
        )));
    }
    Ok(())
}

/// Newton the branch value onto the (new) fiber over a fixed `x`, guarded
/// against jumping to a different sheet.
fn continue_y_to_fiber(fam: &FiberFamily, x: Complex64, y: Complex64) -> Result<Complex64> {
    let p = fam.poly_at(x);
    let roots = univariate_roots(&p.coeffs, 1e-10, 0x77f2)?;
    let idx = crate::cover::nearest_index(&roots.roots, y);
    let sep = crate::cover::min_other_distance(&roots.roots, idx);
    let moved = (roots.roots[idx] - y).norm();
    if moved > 0.3 * sep {
        return Err(Error::TrackingFailure(format!(
            "y-start moved {moved:.3e} against sheet separation {sep:.3e}"
        )));
    }
    Ok(roots.roots[idx])
}

/// Continue the branch along a straight node move at a fixed level set.
fn continue_y_along_move(
    fam: &FiberFamily,
    from: Complex64,
    to: Complex64,
    y0: Complex64,
) -> Result<Complex64> {
    let mut substeps = 4usize;
    'retry: loop {
        let mut y = y0;
        for k in 1..=substeps {
            let x = from + (to - from) * (k as f64 / substeps as f64);
            match continue_y_to_fiber(fam, x, y) {
                Ok(next) => y = next,
                Err(_) if substeps < 64 => {
                    substeps *= 2;
                    continue 'retry;
                }
                Err(e) => return Err(e),
            }
        }
        return Ok(y);
    }
}

/// A chain flattened to a closed polyline loop. `link_start[i]` indexes the
/// node where link `i` begins; link `i` spans the nodes up to
/// `link_start[i+1]` (wrapping). Anchor nodes (link starts) are pushed like
/// any node but never removed.
#[derive(Debug, Clone)]
struct PolyChain {
    nodes: Vec<Complex64>,
    link_start: Vec<usize>,
    y_start: Vec<Complex64>,
}

impl PolyChain {
    fn from_chain(chain: &LiftedChain, clearance: f64) -> Result<PolyChain> {
        if chain.links.iter().any(|l| l.sign != 1) {
            return Err(Error::InvalidParameter(
                "transport needs traversal-ordered chains (all signs +1)".into(),
            ));
        }
        let mut nodes = Vec::new();
        let mut link_start = Vec::new();
        let mut y_start = Vec::new();
        for link in &chain.links {
            link_start.push(nodes.len());
            y_start.push(link.y_start);
            for piece in &link.path.pieces {
                polylinize_piece(piece, clearance, &mut nodes);
            }
        }
        // the final endpoint closes onto the first node
        let closing = chain.links.last().unwrap().path.end();
        if (closing - nodes[0]).norm() > 1e-9 * (1.0 + nodes[0].norm()) {
            return Err(Error::InvalidParameter(
                "chain endpoints do not close geometrically".into(),
            ));
        }
        Ok(PolyChain {
            nodes,
            link_start,
            y_start,
        })
    }

    fn to_chain(&self) -> LiftedChain {
        let nlinks = self.link_start.len();
        let mut links = Vec::with_capacity(nlinks);
        for i in 0..nlinks {
            let from = self.link_start[i];
            let to = if i + 1 < nlinks {
                self.link_start[i + 1]
            } else {
                self.nodes.len()
            };
            let mut pts: Vec<Complex64> = self.nodes[from..to].to_vec();
            // close the link onto the next link's start node
            let next = self.nodes[self.link_start[(i + 1) % nlinks]];
            pts.push(next);
            // drop duplicate consecutive nodes
            pts.dedup_by(|a, b| (*a - *b).norm() < 1e-13);
            let path = XPath::polyline(&pts).expect("link polyline");
            links.push(Link {
                path,
                y_start: self.y_start[i],
                sign: 1,
            });
        }
        LiftedChain { links }
    }

    fn min_distance_to(&self, p: Complex64) -> f64 {
        let n = self.nodes.len();
        let mut d = f64::INFINITY;
        for i in 0..n {
            let (di, _) = point_segment_distance(p, self.nodes[i], self.nodes[(i + 1) % n]);
            d = d.min(di);
        }
        d
    }

    fn min_obstacle_distance(&self, obstacles: &[Complex64]) -> f64 {
        obstacles
            .iter()
            .map(|&o| self.min_distance_to(o))
            .fold(f64::INFINITY, f64::min)
    }

    fn is_anchor(&self, idx: usize) -> bool {
        self.link_start.contains(&idx)
    }

    /// Push nodes away from obstacles and subdivide crowded edges until the
    /// clearance holds. Returns the anchors that moved, with their old
    /// positions (first recorded position wins).
    fn repair(
        &mut self,
        obstacles: &[Complex64],
        clearance: f64,
    ) -> Result<Vec<(usize, Complex64)>> {
        let mut moved: Vec<(usize, Complex64)> = Vec::new();
        for _iter in 0..64 {
            let mut changed = false;

            // subdivide edges whose interior crowds an obstacle
            let mut i = 0;
            while i < self.nodes.len() {
                let n = self.nodes.len();
                let a = self.nodes[i];
                let b = self.nodes[(i + 1) % n];
                let mut split_at: Option<f64> = None;
                for &o in obstacles {
                    let (d, tp) = point_segment_distance(o, a, b);
                    // skip dips the endpoint pushes already own
                    let da = (o - a).norm();
                    let db = (o - b).norm();
                    if d < clearance * 0.98 && d < da.min(db) * 0.9999 {
                        split_at = Some(tp.clamp(0.25, 0.75));
                        break;
                    }
                }
                if let Some(tp) = split_at {
                    let p = a + (b - a) * tp;
                    if (p - a).norm() > 1e-12 && (p - b).norm() > 1e-12 {
                        self.insert_node(i + 1, p);
                        changed = true;
                    }
                }
                i += 1;
            }

            // push crowded nodes radially away from their nearest obstacle
            for i in 0..self.nodes.len() {
                let v = self.nodes[i];
                let mut nearest = None;
                let mut dmin = f64::INFINITY;
                for &o in obstacles {
                    let d = (v - o).norm();
                    if d < dmin {
                        dmin = d;
                        nearest = Some(o);
                    }
                }
                let Some(o) = nearest else { continue };
                if dmin >= clearance * 0.999 {
                    continue;
                }
                if dmin < 1e-14 {
                    return Err(Error::HomotopyFailure {
                        s: f64::NAN,
                        reason: "node landed on a branch point".into(),
                    });
                }
                let new_v = o + (v - o) / dmin * (clearance * 1.1);
                // the push must not sweep an edge across any obstacle
                let n = self.nodes.len();
                let prev = self.nodes[(i + n - 1) % n];
                let next = self.nodes[(i + 1) % n];
                for &ob in obstacles {
                    if point_in_triangle(ob, prev, v, new_v)
                        || point_in_triangle(ob, next, v, new_v)
                    {
                        return Err(Error::HomotopyFailure {
                            s: f64::NAN,
                            reason: format!("node push would sweep across branch point {ob}"),
                        });
                    }
                }
                if let Some(li) = self.link_start.iter().position(|&ls| ls == i) {
                    if !moved.iter().any(|&(l, _)| l == li) {
                        moved.push((li, v));
                    }
                }
                self.nodes[i] = new_v;
                changed = true;
            }

            if !changed {
                return Ok(moved);
            }
        }
        Err(Error::HomotopyFailure {
            s: f64::NAN,
            reason: "geometry repair did not settle after 64 sweeps".into(),
        })
    }

    /// Remove nodes whose straightening triangle is free of obstacles and
    /// whose replacement edge keeps clearance. Retracts geometry dragged by
    /// an obstacle that has since moved on, while wraps around a branch
    /// point persist (the triangle test blocks them).
    fn cleanup(&mut self, obstacles: &[Complex64], clearance: f64) {
        let mut i = 0;
        while self.nodes.len() > 3 && i < self.nodes.len() {
            if self.is_anchor(i) {
                i += 1;
                continue;
            }
            let n = self.nodes.len();
            let prev = self.nodes[(i + n - 1) % n];
            let v = self.nodes[i];
            let next = self.nodes[(i + 1) % n];
            let mut ok = true;
            for &o in obstacles {
                if point_in_triangle(o, prev, v, next) {
                    ok = false;
                    break;
                }
                let (d, _) = point_segment_distance(o, prev, next);
                if d < clearance {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.remove_node(i);
            } else {
                i += 1;
            }
        }
    }

    fn insert_node(&mut self, idx: usize, p: Complex64) {
        self.nodes.insert(idx % (self.nodes.len() + 1), p);
        for ls in self.link_start.iter_mut() {
            if *ls >= idx {
                *ls += 1;
            }
        }
    }

    fn remove_node(&mut self, idx: usize) {
        self.nodes.remove(idx);
        for ls in self.link_start.iter_mut() {
            if *ls > idx {
                *ls -= 1;
            }
        }
    }
}

/// Append polyline nodes covering the piece (excluding its endpoint, which
/// the following piece supplies). Arcs are discretized with a sagitta at
/// most a quarter of the clearance so the flattened loop keeps its distance
/// from whatever the arc enclosed.
fn polylinize_piece(piece: &crate::cover::PathPiece, clearance: f64, out: &mut Vec<Complex64>) {
    match *piece {
        crate::cover::PathPiece::Segment { from, .. } => out.push(from),
        crate::cover::PathPiece::Arc { radius, sweep, .. } => {
            let target_sag = (0.25 * clearance).min(radius * 0.3);
            let dtheta = 2.0 * (1.0 - target_sag / radius).max(0.0).acos();
            let k = ((sweep.abs() / dtheta).ceil() as usize).clamp(16, 4096);
            for j in 0..k {
                out.push(piece.point_at(j as f64 / k as f64));
            }
        }
    }
}

fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> (f64, f64) {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return ((p - a).norm(), 0.0);
    }
    let tp = (((p - a).re * d.re + (p - a).im * d.im) / len2).clamp(0.0, 1.0);
    ((p - (a + d * tp)).norm(), tp)
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Point-in-triangle with boundary counted as inside.
fn point_in_triangle(p: Complex64, a: Complex64, b: Complex64, c: Complex64) -> bool {
    let d1 = cross(p, a, b);
    let d2 = cross(p, b, c);
    let d3 = cross(p, c, a);
    let has_neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let has_pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(has_neg && has_pos)
}
