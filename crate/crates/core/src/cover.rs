//! The level curve `{h(x, y) = t}` as a branched cover of the `x`-line:
//! fiber enumeration, branch-point location, and analytic continuation of a
//! chosen `y`-branch along paths in the `x`-plane.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polyring::{
    resultant_y, univariate_roots, univariate_roots_warm, BivarPoly, RootSet, UniPoly, YSections,
};

/// Default clearance between a path and the nearest branch point, as a
/// fraction of the fiber scale.
pub const DEFAULT_CLEARANCE: f64 = 1e-3;

/// Sheet-jump guard: a corrector result is accepted only if its distance to
/// the predicted value is below this fraction of the distance to the
/// nearest other fiber root.
pub const GUARD_RATIO: f64 = 0.3;

/// One oriented piece of an `x`-plane path.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum PathPiece {
    Segment {
        from: Complex64,
        to: Complex64,
    },
    /// Circular arc `center + radius·e^(i(start_angle + s·sweep))`,
    /// `s ∈ [0, 1]`; positive sweep is counterclockwise.
    Arc {
        center: Complex64,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
}

impl PathPiece {
    pub fn start(&self) -> Complex64 {
        self.point_at(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.point_at(1.0)
    }

    /// Point at local parameter `s ∈ [0, 1]`.
    pub fn point_at(&self, s: f64) -> Complex64 {
        match *self {
            PathPiece::Segment { from, to } => from + (to - from) * s,
            PathPiece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => center + Complex64::from_polar(radius, start_angle + sweep * s),
        }
    }

    /// Derivative `dx/ds` at local parameter `s`.
    pub fn velocity_at(&self, s: f64) -> Complex64 {
        match *self {
            PathPiece::Segment { from, to } => to - from,
            PathPiece::Arc {
                radius,
                start_angle,
                sweep,
                ..
            } => Complex64::new(0.0, sweep) * Complex64::from_polar(radius, start_angle + sweep * s),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            PathPiece::Segment { from, to } => (to - from).norm(),
            PathPiece::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn reversed(&self) -> PathPiece {
        match *self {
            PathPiece::Segment { from, to } => PathPiece::Segment { from: to, to: from },
            PathPiece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => PathPiece::Arc {
                center,
                radius,
                start_angle: start_angle + sweep,
                sweep: -sweep,
            },
        }
    }

    /// Multiply the piece by a complex factor (rotation/scaling about 0).
    pub fn scaled(&self, c: Complex64) -> PathPiece {
        match *self {
            PathPiece::Segment { from, to } => PathPiece::Segment {
                from: from * c,
                to: to * c,
            },
            PathPiece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => PathPiece::Arc {
                center: center * c,
                radius: radius * c.norm(),
                start_angle: start_angle + c.arg(),
                sweep,
            },
        }
    }

    /// Distance from `p` to the piece.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        match *self {
            PathPiece::Segment { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (p - from).norm();
                }
                let tproj = ((p - from).re * d.re + (p - from).im * d.im) / len2;
                let tclamp = tproj.clamp(0.0, 1.0);
                (p - (from + d * tclamp)).norm()
            }
            PathPiece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let v = p - center;
                let rel = normalize_angle(v.arg() - start_angle);
                let inside = if sweep >= 0.0 {
                    rel <= sweep || sweep >= std::f64::consts::TAU
                } else {
                    rel >= std::f64::consts::TAU + sweep || -sweep >= std::f64::consts::TAU
                };
                if inside {
                    (v.norm() - radius).abs()
                } else {
                    (p - self.start()).norm().min((p - self.end()).norm())
                }
            }
        }
    }
}

/// Wrap an angle into `[0, 2π)`.
fn normalize_angle(a: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut r = a % tau;
    if r < 0.0 {
        r += tau;
    }
    r
}

/// An oriented path in the `x`-plane made of segments and arcs with
/// matching endpoints.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct XPath {
    pub pieces: Vec<PathPiece>,
}

impl XPath {
    pub fn new(pieces: Vec<PathPiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidParameter("empty path".into()));
        }
        let mut scale = 1.0f64;
        for p in &pieces {
            scale = scale.max(p.start().norm()).max(p.end().norm());
        }
        for w in pieces.windows(2) {
            let gap = (w[0].end() - w[1].start()).norm();
            if gap > 1e-12 * scale {
                return Err(Error::InvalidParameter(format!(
                    "path pieces do not chain: gap {gap:.3e}"
                )));
            }
        }
        let total: f64 = pieces.iter().map(|p| p.length()).sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::InvalidParameter("path has no length".into()));
        }
        Ok(XPath { pieces })
    }

    pub fn segment(from: Complex64, to: Complex64) -> XPath {
        XPath {
            pieces: vec![PathPiece::Segment { from, to }],
        }
    }

    pub fn polyline(nodes: &[Complex64]) -> Result<XPath> {
        if nodes.len() < 2 {
            return Err(Error::InvalidParameter("polyline needs two nodes".into()));
        }
        XPath::new(
            nodes
                .windows(2)
                .map(|w| PathPiece::Segment { from: w[0], to: w[1] })
                .collect(),
        )
    }

    /// Full circle traversed once, starting at angle `start_angle`;
    /// `ccw` selects the orientation.
    pub fn full_circle(center: Complex64, radius: f64, start_angle: f64, ccw: bool) -> XPath {
        let sweep = if ccw {
            std::f64::consts::TAU
        } else {
            -std::f64::consts::TAU
        };
        XPath {
            pieces: vec![PathPiece::Arc {
                center,
                radius,
                start_angle,
                sweep,
            }],
        }
    }

    pub fn start(&self) -> Complex64 {
        self.pieces.first().unwrap().start()
    }

    pub fn end(&self) -> Complex64 {
        self.pieces.last().unwrap().end()
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(|p| p.length()).sum()
    }

    /// Global parameter runs over `[0, pieces.len()]`, one unit per piece.
    pub fn param_max(&self) -> f64 {
        self.pieces.len() as f64
    }

    pub fn point_at(&self, u: f64) -> Complex64 {
        let (i, s) = self.split_param(u);
        self.pieces[i].point_at(s)
    }

    pub fn velocity_at(&self, u: f64) -> Complex64 {
        let (i, s) = self.split_param(u);
        self.pieces[i].velocity_at(s)
    }

    fn split_param(&self, u: f64) -> (usize, f64) {
        let np = self.pieces.len();
        if u >= np as f64 {
            return (np - 1, 1.0);
        }
        let i = (u.floor() as usize).min(np - 1);
        (i, u - i as f64)
    }

    pub fn reversed(&self) -> XPath {
        XPath {
            pieces: self.pieces.iter().rev().map(|p| p.reversed()).collect(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> XPath {
        XPath {
            pieces: self.pieces.iter().map(|p| p.scaled(c)).collect(),
        }
    }

    pub fn min_distance_to(&self, p: Complex64) -> f64 {
        self.pieces
            .iter()
            .map(|piece| piece.distance_to(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Split every piece in two; the lift and all periods are invariant
    /// under this refinement.
    pub fn subdivided(&self) -> XPath {
        let mut pieces = Vec::with_capacity(self.pieces.len() * 2);
        for p in &self.pieces {
            match *p {
                PathPiece::Segment { from, to } => {
                    let mid = (from + to) * 0.5;
                    pieces.push(PathPiece::Segment { from, to: mid });
                    pieces.push(PathPiece::Segment { from: mid, to });
                }
                PathPiece::Arc {
                    center,
                    radius,
                    start_angle,
                    sweep,
                } => {
                    pieces.push(PathPiece::Arc {
                        center,
                        radius,
                        start_angle,
                        sweep: sweep * 0.5,
                    });
                    pieces.push(PathPiece::Arc {
                        center,
                        radius,
                        start_angle: start_angle + sweep * 0.5,
                        sweep: sweep * 0.5,
                    });
                }
            }
        }
        XPath { pieces }
    }
}

/// The level function `h − t` in fiber form: pinned-`x` slices are
/// univariate polynomials in `y`.
#[derive(Debug, Clone)]
pub struct FiberFamily {
    sections: YSections,
    t: Complex64,
    y_degree: usize,
}

impl FiberFamily {
    pub fn new(h: &BivarPoly, t: Complex64) -> Result<Self> {
        let dy = h.y_degree();
        if dy < 2 {
            return Err(Error::InvalidInput(format!(
                "y-degree {dy} < 2: not a branched cover of interest"
            )));
        }
        let sections = h.y_sections();
        // constant sheet count needs a constant y-leading coefficient
        if sections.secs[dy].degree() != Some(0) {
            return Err(Error::UnsupportedChart(
                "coefficient of the top y-power must be a nonzero constant (h_(n+1) ≠ 0)".into(),
            ));
        }
        Ok(FiberFamily {
            sections,
            t,
            y_degree: dy,
        })
    }

    pub fn t(&self) -> Complex64 {
        self.t
    }

    pub fn sheet_count(&self) -> usize {
        self.y_degree
    }

    /// `h(x, ·) − t` as a univariate polynomial in `y`.
    pub fn poly_at(&self, x: Complex64) -> UniPoly {
        let mut coeffs: Vec<Complex64> = self.sections.secs.iter().map(|s| s.eval(x)).collect();
        coeffs[0] -= self.t;
        UniPoly { coeffs }
    }

    pub fn residual(&self, x: Complex64, y: Complex64) -> f64 {
        self.poly_at(x).eval(y).norm()
    }
}

/// All fiber values over `x`: the roots of `h(x, ·) = t`, polished to the
/// requested backward error. At a branch point the coincident sheets come
/// back as a flagged cluster, not an error.
pub fn y_fiber(h: &BivarPoly, t: Complex64, x: Complex64, tol: f64) -> Result<RootSet> {
    let fam = FiberFamily::new(h, t)?;
    let mut rs = univariate_roots(&fam.poly_at(x).coeffs, tol.max(1e-13), 0x2f1b)?;
    // an m-fold sheet coincidence is only resolvable to ~eps^(1/m); widen
    // the cluster threshold accordingly so ramification is actually flagged
    rs.clusters = crate::polyring::cluster_points(&rs.roots, 1e-3);
    Ok(rs)
}

/// Branch points of the cover `{h = t} → x`.
#[derive(Debug, Clone)]
pub struct BranchPointSet {
    pub t: Complex64,
    pub points: Vec<Complex64>,
    /// Local ramification order at each point (2 for a simple branch point,
    /// up to the sheet count for full coincidence).
    pub orders: Vec<usize>,
}

impl BranchPointSet {
    pub fn min_pairwise_distance(&self) -> f64 {
        let mut d = f64::INFINITY;
        for i in 0..self.points.len() {
            for j in 0..i {
                d = d.min((self.points[i] - self.points[j]).norm());
            }
        }
        d
    }

    pub fn min_distance_to_path(&self, path: &XPath) -> f64 {
        self.points
            .iter()
            .map(|&b| path.min_distance_to(b))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Locate the branch points as the roots of the `y`-discriminant of
/// `h − t`, then estimate ramification orders from fiber clustering.
pub fn branch_points(h: &BivarPoly, t: Complex64) -> Result<BranchPointSet> {
    let ht = shift_by_t(h, t);
    let hy = h.dy();
    let disc = resultant_y(&ht, &hy)?;
    if disc.is_zero() {
        return Err(Error::InvalidInput(
            "y-discriminant vanishes identically: the level set is non-reduced".into(),
        ));
    }
    if disc.degree() == Some(0) {
        return Ok(BranchPointSet {
            t,
            points: Vec::new(),
            orders: Vec::new(),
        });
    }
    let roots = univariate_roots(&disc.coeffs, 1e-7, 0x51ab)?;
    // ramified branch points are multiple discriminant roots, located only
    // to ~eps^(1/m); cluster at a matching width
    let clusters = crate::polyring::cluster_points(&roots.roots, 1e-5);
    let mut points = Vec::new();
    let mut orders = Vec::new();
    for idx in &clusters {
        let mut b = idx.iter().map(|&i| roots.roots[i]).sum::<Complex64>() / idx.len() as f64;
        if idx.len() > 1 {
            // an m-fold root of the discriminant is a simple root of its
            // (m-1)th derivative; polish there to full precision so the
            // fiber actually coincides
            let mut d = disc.clone();
            for _ in 1..idx.len() {
                d = d.derivative();
            }
            for _ in 0..50 {
                let (pv, dv) = d.eval_with_derivative(b);
                if dv.norm() == 0.0 {
                    break;
                }
                let step = pv / dv;
                b -= step;
                if step.norm() < 1e-15 * (1.0 + b.norm()) {
                    break;
                }
            }
        }
        let fiber = y_fiber(h, t, b, 1e-7)?;
        let order = fiber
            .clusters
            .iter()
            .map(|c| c.len())
            .max()
            .unwrap_or(1)
            .max(2);
        points.push(b);
        orders.push(order);
    }
    Ok(BranchPointSet { t, points, orders })
}

/// Raw branch-point positions by warm-started continuation of the
/// discriminant roots; used by the homotopy engine where the previous
/// positions are known. Multiplicity is not resolved here: the returned
/// points are the discriminant roots themselves.
pub fn branch_roots_warm(
    h: &BivarPoly,
    t: Complex64,
    previous: &[Complex64],
) -> Result<Vec<Complex64>> {
    let disc = resultant_y(&shift_by_t(h, t), &h.dy())?;
    if disc.is_zero() {
        return Err(Error::InvalidInput("vanishing y-discriminant".into()));
    }
    let deg = disc.degree().unwrap_or(0);
    if deg == previous.len() {
        if let Ok(rs) = univariate_roots_warm(&disc.coeffs, previous, 1e-6) {
            return Ok(rs.roots);
        }
    }
    Ok(univariate_roots(&disc.coeffs, 1e-6, 0x51ab)?.roots)
}

/// `h − t` as a polynomial (shift of the constant coefficient).
pub fn shift_by_t(h: &BivarPoly, t: Complex64) -> BivarPoly {
    h.add(&BivarPoly::monomial(0, 0, -t))
}

/// One accepted tracking step: global parameter, base point, the full
/// fiber there, and which fiber index is the tracked branch.
#[derive(Debug, Clone)]
pub struct TrackSample {
    pub u: f64,
    pub x: Complex64,
    pub fiber: Vec<Complex64>,
    pub tracked: usize,
}

/// The lift of a path to the cover: a dense sequence of samples of all
/// sheets, with one distinguished tracked branch.
#[derive(Debug, Clone)]
pub struct BranchTrack {
    pub path: XPath,
    pub y_start: Complex64,
    pub samples: Vec<TrackSample>,
    pub y_end: Complex64,
    /// Conservative accumulated tracking-error estimate for the tracked
    /// branch.
    pub error_estimate: f64,
}

/// Options for branch continuation.
#[derive(Debug, Clone, Copy)]
pub struct TrackOptions {
    /// Backward-error target for corrected fiber roots.
    pub tol: f64,
    /// Smallest allowed step in the global path parameter.
    pub min_step: f64,
    /// Largest allowed step in the global path parameter.
    pub max_step: f64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        TrackOptions {
            tol: 1e-12,
            min_step: 1e-10,
            max_step: 0.2,
        }
    }
}

/// Analytically continue the branch through `(path.start(), y0)` along the
/// whole path.
///
/// The tracker carries the full fiber: every step predicts each root by a
/// first-order step along `dy/dx = -h_x/h_y` and corrects by warm-started
/// simultaneous iteration. A step is accepted only if every corrected root
/// moved less than [`GUARD_RATIO`] times its distance to the nearest other
/// root, which prevents silent sheet exchange; otherwise the step halves.
pub fn continue_branch(
    h: &BivarPoly,
    t: Complex64,
    path: &XPath,
    y0: Complex64,
    opts: TrackOptions,
) -> Result<BranchTrack> {
    let fam = FiberFamily::new(h, t)?;
    let hx = h.dx();
    let hy = h.dy();

    let x0 = path.start();
    let start_fiber = univariate_roots(&fam.poly_at(x0).coeffs, opts.tol.max(1e-12), 0x11c5)?;
    let tracked = nearest_index(&start_fiber.roots, y0);
    let d0 = (start_fiber.roots[tracked] - y0).norm();
    let others = min_other_distance(&start_fiber.roots, tracked);
    if d0 > GUARD_RATIO * others {
        return Err(Error::InvalidParameter(format!(
            "y0 = {y0} is not close to a unique fiber root over the path start (gap {d0:.3e})"
        )));
    }

    let mut samples = vec![TrackSample {
        u: 0.0,
        x: x0,
        fiber: start_fiber.roots.clone(),
        tracked,
    }];
    let mut fiber = start_fiber.roots;
    let mut u = 0.0f64;
    let umax = path.param_max();
    let mut du = opts.max_step.min(0.05);
    let mut err_est = 0.0f64;

    while u < umax - 1e-12 {
        // land exactly on piece boundaries so every piece endpoint carries
        // a sample; a rounding sliver below min_step is taken whole
        let target = ((u + 1e-9).floor() + 1.0).min(umax);
        let remaining = target - u;
        let mut step = du.min(remaining);
        let mut accepted = false;

        loop {
            let u_new = if (target - (u + step)).abs() < 1e-12 {
                target
            } else {
                u + step
            };
            let x_old = path.point_at(u);
            let x_new = path.point_at(u_new);
            // first-order predictor for every sheet
            let mut guesses = Vec::with_capacity(fiber.len());
            let mut pred_ok = true;
            for &y in &fiber {
                let denom = hy.eval(x_old, y);
                if denom.norm() == 0.0 {
                    pred_ok = false;
                    break;
                }
                let dydx = -hx.eval(x_old, y) / denom;
                guesses.push(y + dydx * (x_new - x_old));
            }
            if !pred_ok {
                if step * 0.5 < opts.min_step {
                    break;
                }
                step *= 0.5;
                continue;
            }
            let corrected =
                match univariate_roots_warm(&fam.poly_at(x_new).coeffs, &guesses, opts.tol) {
                    Ok(rs) => rs.roots,
                    Err(_) => {
                        if step * 0.5 < opts.min_step {
                            break;
                        }
                        step *= 0.5;
                        continue;
                    }
                };
            // sheet-jump guard on every root
            let mut guard_ok = true;
            let mut worst_ratio = 0.0f64;
            for i in 0..corrected.len() {
                let move_dist = (corrected[i] - guesses[i]).norm();
                let sep = min_other_distance(&corrected, i);
                if sep == 0.0 || move_dist > GUARD_RATIO * sep {
                    guard_ok = false;
                    break;
                }
                worst_ratio = worst_ratio.max(move_dist / sep);
            }
            if !guard_ok {
                if step * 0.5 < opts.min_step {
                    break;
                }
                step *= 0.5;
                continue;
            }
            // accept
            err_est += fam.poly_at(x_new).backward_error(corrected[tracked])
                + 1e-16 * (1.0 + corrected[tracked].norm());
            fiber = corrected;
            u = u_new;
            samples.push(TrackSample {
                u,
                x: x_new,
                fiber: fiber.clone(),
                tracked,
            });
            du = if worst_ratio < 0.05 {
                (step * 1.6).min(opts.max_step)
            } else {
                step.max(opts.min_step)
            };
            accepted = true;
            break;
        }

        if !accepted {
            // step underflow: report the offending branch point
            let x_here = path.point_at(u);
            let (bp, dist) = match branch_points(h, t) {
                Ok(set) if !set.points.is_empty() => {
                    let mut best = (set.points[0], f64::INFINITY);
                    for &b in &set.points {
                        let d = (b - x_here).norm();
                        if d < best.1 {
                            best = (b, d);
                        }
                    }
                    best
                }
                _ => (x_here, 0.0),
            };
            return Err(Error::ProximityError {
                branch_point: bp,
                distance: dist,
            });
        }
    }

    let y_end = samples.last().unwrap().fiber[tracked];
    Ok(BranchTrack {
        path: path.clone(),
        y_start: samples[0].fiber[tracked],
        samples,
        y_end,
        error_estimate: err_est.max(1e-15),
    })
}

impl BranchTrack {
    /// The tracked `(x, y)` pairs.
    pub fn points(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        self.samples.iter().map(|s| (s.x, s.fiber[s.tracked]))
    }

    /// Branch value at an arbitrary path parameter: Newton-polish from the
    /// linear interpolation between the bracketing samples, guarded against
    /// sheet jumps by the sample fibers.
    pub fn y_at(&self, fam: &FiberFamily, u: f64) -> Result<Complex64> {
        let idx = self
            .samples
            .partition_point(|s| s.u < u);
        let right = idx.min(self.samples.len() - 1);
        let left = right.saturating_sub(1);
        let (sl, sr) = (&self.samples[left], &self.samples[right]);
        let frac = if sr.u > sl.u {
            ((u - sl.u) / (sr.u - sl.u)).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let guess = sl.fiber[sl.tracked] * (1.0 - frac) + sr.fiber[sr.tracked] * frac;
        let x = self.path.point_at(u);
        let p = fam.poly_at(x);
        let mut y = guess;
        for _ in 0..40 {
            let (pv, dv) = p.eval_with_derivative(y);
            if dv.norm() == 0.0 {
                break;
            }
            let step = pv / dv;
            y -= step;
            if step.norm() < 1e-15 * (1.0 + y.norm()) {
                break;
            }
        }
        // guard against convergence onto a different sheet, using the
        // nearest sample's fiber as the sheet map
        let near = if frac < 0.5 { sl } else { sr };
        let sep = min_other_distance(&near.fiber, near.tracked);
        if (y - guess).norm() > 0.45 * sep {
            return Err(Error::TrackingFailure(format!(
                "fiber query at u = {u} drifted {:.3e} against sheet separation {sep:.3e}",
                (y - guess).norm(),
            )));
        }
        if p.backward_error(y) > 1e-8 {
            return Err(Error::TrackingFailure(format!(
                "fiber query at u = {u} did not converge"
            )));
        }
        Ok(y)
    }
}

pub(crate) fn nearest_index(pts: &[Complex64], target: Complex64) -> usize {
    let mut best = 0;
    let mut bd = f64::INFINITY;
    for (i, &p) in pts.iter().enumerate() {
        let d = (p - target).norm();
        if d < bd {
            bd = d;
            best = i;
        }
    }
    best
}

pub(crate) fn min_other_distance(pts: &[Complex64], i: usize) -> f64 {
    let mut d = f64::INFINITY;
    for (j, &p) in pts.iter().enumerate() {
        if j != i {
            d = d.min((pts[i] - p).norm());
        }
    }
    d
}

/// Continue every fiber root around a closed loop and report the induced
/// permutation of the fiber (index in the start fiber → index found after
/// one turn). Set equality of the fiber is checked on the way.
pub fn monodromy_permutation(
    h: &BivarPoly,
    t: Complex64,
    loop_path: &XPath,
    opts: TrackOptions,
) -> Result<Vec<usize>> {
    let x0 = loop_path.start();
    let start = y_fiber(h, t, x0, opts.tol.max(1e-11))?;
    let mut perm = vec![usize::MAX; start.roots.len()];
    for (i, &y0) in start.roots.iter().enumerate() {
        let track = continue_branch(h, t, loop_path, y0, opts)?;
        let j = nearest_index(&start.roots, track.y_end);
        let gap = (start.roots[j] - track.y_end).norm();
        let sep = min_other_distance(&start.roots, j);
        if gap > 1e-9_f64.max(0.2 * sep) {
            return Err(Error::TrackingFailure(format!(
                "monodromy endpoint {:.6} not in the start fiber (gap {gap:.3e})",
                track.y_end
            )));
        }
        perm[i] = j;
    }
    // must be a bijection
    let mut seen = vec![false; perm.len()];
    for &p in &perm {
        if p == usize::MAX || seen[p] {
            return Err(Error::TrackingFailure(
                "monodromy did not permute the fiber".into(),
            ));
        }
        seen[p] = true;
    }
    Ok(perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn re(v: f64) -> Complex64 {
        c64(v, 0.0)
    }

    fn fermat(n: usize) -> BivarPoly {
        BivarPoly::from_terms([((n + 1, 0), re(1.0)), ((0, n + 1), re(1.0))])
    }

    #[test]
    fn fiber_of_fermat() {
        // n=1, t=1, x=0: y² = 1
        let f = y_fiber(&fermat(1), re(1.0), re(0.0), 1e-12).unwrap();
        let mut ys: Vec<f64> = f.roots.iter().map(|y| y.re).collect();
        ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ys[0] + 1.0).abs() < 1e-12 && (ys[1] - 1.0).abs() < 1e-12);

        // n=2, t=1, x=0: cube roots of unity, including y = 1
        let f = y_fiber(&fermat(2), re(1.0), re(0.0), 1e-12).unwrap();
        assert_eq!(f.roots.len(), 3);
        assert!(f.roots.iter().any(|y| (y - re(1.0)).norm() < 1e-12));
        for y in &f.roots {
            assert!((y.powu(3) - Complex64::ONE).norm() < 1e-12);
        }

        // x = 1: y = 0 with multiplicity n+1, flagged as a cluster
        for n in 1..=3usize {
            let f = y_fiber(&fermat(n), re(1.0), re(1.0), 1e-12).unwrap();
            assert!(f.has_clusters());
            let cl = f.clustered();
            assert_eq!(cl.len(), 1);
            assert_eq!(cl[0].1, n + 1);
            assert!(cl[0].0.norm() < 1e-4);
        }
    }

    #[test]
    fn fermat_branch_points_are_roots_of_unity() {
        for n in 1..=3usize {
            let bp = branch_points(&fermat(n), re(1.0)).unwrap();
            assert_eq!(bp.points.len(), n + 1, "n={n}");
            for (b, &ord) in bp.points.iter().zip(&bp.orders) {
                assert!((b.powu(n as u32 + 1) - Complex64::ONE).norm() < 1e-6);
                assert_eq!(ord, n + 1);
            }
        }
    }

    #[test]
    fn perturbed_cubic_has_six_simple_branch_points() {
        let h = BivarPoly::from_terms([
            ((3, 0), re(1.0)),
            ((0, 3), re(1.0)),
            ((1, 0), re(-3.0)),
            ((0, 1), re(-6.0)),
        ]);
        let bp = branch_points(&h, c64(0.3, 0.2)).unwrap();
        assert_eq!(bp.points.len(), 6);
        assert!(bp.orders.iter().all(|&o| o == 2));
    }

    #[test]
    fn branch_points_move_continuously_in_t() {
        let h = fermat(2);
        let b0 = branch_points(&h, re(1.0)).unwrap();
        let dt = 1e-4;
        let b1 = branch_points(&h, re(1.0 + dt)).unwrap();
        // Fermat branch points are t^(1/(n+1)) ε^j: a first-order step in t
        // predicts the move
        for &b in &b0.points {
            let predicted = b * (1.0 + dt / 3.0);
            let nearest = b1.points[nearest_index(&b1.points, predicted)];
            assert!((nearest - predicted).norm() < 1e-7);
        }
    }

    #[test]
    fn track_real_branch_of_circle_curve() {
        // Fermat n=1: the branch through (0,1) is y = (1-x²)^(1/2);
        // at x = 0.5 that is √0.75.
        let path = XPath::segment(re(0.0), re(0.5));
        let track =
            continue_branch(&fermat(1), re(1.0), &path, re(1.0), TrackOptions::default()).unwrap();
        assert!((track.y_end - re(0.75f64.sqrt())).norm() < 1e-10);
        // every sample satisfies the curve equation
        let fam = FiberFamily::new(&fermat(1), re(1.0)).unwrap();
        for (x, y) in track.points() {
            assert!(fam.residual(x, y) < 1e-9);
        }
    }

    #[test]
    fn loop_without_branch_points_is_trivial() {
        // triangle around x = 0 for Fermat n=2 (branch points sit on |x|=1)
        let path = XPath::polyline(&[
            c64(0.2, 0.0),
            c64(-0.1, 0.15),
            c64(-0.1, -0.15),
            c64(0.2, 0.0),
        ])
        .unwrap();
        let track =
            continue_branch(&fermat(2), re(1.0), &path, re(1.0), TrackOptions::default()).unwrap();
        assert!((track.y_end - track.y_start).norm() < 1e-10);
    }

    #[test]
    fn puiseux_monodromy_at_fermat_branch_point() {
        // one counterclockwise turn around x = 1 multiplies the branch of
        // (1 - x^(n+1))^(1/(n+1)) by ε
        for n in 1..=3usize {
            let h = fermat(n);
            let path = XPath::full_circle(re(1.0), 0.01, std::f64::consts::PI, true);
            let x0 = path.start();
            let fiber = y_fiber(&h, re(1.0), x0, 1e-12).unwrap();
            let y0 = fiber.roots[0];
            let track = continue_branch(&h, re(1.0), &path, y0, TrackOptions::default()).unwrap();
            let eps = Complex64::from_polar(1.0, std::f64::consts::TAU / (n as f64 + 1.0));
            assert!(
                (track.y_end - eps * y0).norm() < 1e-9,
                "n={n}: {} vs {}",
                track.y_end,
                eps * y0
            );
        }
    }

    #[test]
    fn track_and_reverse_returns_home() {
        let h = fermat(2);
        let path = XPath::polyline(&[re(0.0), c64(0.4, 0.3), c64(0.1, 0.6)]).unwrap();
        let fwd = continue_branch(&h, re(1.0), &path, re(1.0), TrackOptions::default()).unwrap();
        let bwd = continue_branch(
            &h,
            re(1.0),
            &path.reversed(),
            fwd.y_end,
            TrackOptions::default(),
        )
        .unwrap();
        let gap = (bwd.y_end - re(1.0)).norm();
        assert!(
            gap <= 2.0 * (fwd.error_estimate + bwd.error_estimate) + 1e-12,
            "round trip gap {gap:.3e} vs estimates {:.3e}/{:.3e}",
            fwd.error_estimate,
            bwd.error_estimate
        );
    }

    #[test]
    fn monodromy_is_a_permutation() {
        // simple branch point of the perturbed cubic: a transposition
        let h = BivarPoly::from_terms([
            ((3, 0), re(1.0)),
            ((0, 3), re(1.0)),
            ((1, 0), re(-0.3)),
            ((0, 1), re(-0.6)),
        ]);
        let t = re(1.0);
        let bp = branch_points(&h, t).unwrap();
        let b = bp.points[nearest_index(&bp.points, re(1.0))];
        let radius = (0.3 * bp.min_pairwise_distance()).min(0.05);
        let path = XPath::full_circle(b, radius, 0.0, true);
        let perm = monodromy_permutation(&h, t, &path, TrackOptions::default()).unwrap();
        let moved = perm.iter().enumerate().filter(|&(i, &p)| i != p).count();
        assert_eq!(moved, 2, "simple branch point must swap exactly 2 sheets");

        // full ramification for Fermat n=2: a 3-cycle
        let h = fermat(2);
        let path = XPath::full_circle(re(1.0), 0.02, 0.0, true);
        let perm = monodromy_permutation(&h, t, &path, TrackOptions::default()).unwrap();
        let moved = perm.iter().enumerate().filter(|&(i, &p)| i != p).count();
        assert_eq!(moved, 3);
    }

    #[test]
    fn path_geometry_helpers() {
        let p = XPath::polyline(&[re(0.0), re(1.0), c64(1.0, 1.0)]).unwrap();
        assert!((p.length() - 2.0).abs() < 1e-14);
        assert!((p.point_at(0.5) - re(0.5)).norm() < 1e-14);
        assert!((p.reversed().start() - c64(1.0, 1.0)).norm() < 1e-14);
        assert!((p.min_distance_to(c64(0.5, -1.0)) - 1.0).abs() < 1e-12);

        let arc = XPath::full_circle(re(0.0), 1.0, 0.0, true);
        assert!((arc.length() - std::f64::consts::TAU).abs() < 1e-12);
        assert!((arc.min_distance_to(re(0.0)) - 1.0).abs() < 1e-12);
        assert!((arc.min_distance_to(re(3.0)) - 2.0).abs() < 1e-12);

        // scaling by a unit complex rotates segments and arcs alike
        let eps = Complex64::from_polar(1.0, 1.1);
        let s = p.scaled(eps);
        assert!((s.point_at(0.5) - re(0.5) * eps).norm() < 1e-14);

        // chained endpoint mismatch is rejected
        let bad = XPath::new(vec![
            PathPiece::Segment {
                from: re(0.0),
                to: re(1.0),
            },
            PathPiece::Segment {
                from: re(2.0),
                to: re(3.0),
            },
        ]);
        assert!(bad.is_err());

        // subdivision preserves the point locus
        let sub = p.subdivided();
        assert_eq!(sub.pieces.len(), 4);
        assert!((sub.point_at(1.0) - p.point_at(0.5)).norm() < 1e-14);
    }
}
