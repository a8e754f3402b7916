//! Numerical Abelian integrals `I_(j,r)(t) = ∫ x^l(j) y^(m(j)+1) dx` over a
//! cycle basis: adaptive Gauss–Kronrod contour quadrature along lifted
//! chains, the `n²×n²` period matrix and its determinant, least-squares
//! fits of the determinant as a polynomial in `t`, and the end-to-end
//! verification of the determinant constant against the closed form.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::closedform::{build_e, c_constant, c_of_h};
use crate::cover::{BranchTrack, FiberFamily, TrackOptions, XPath};
use crate::cycles::{
    deform_basis, fermat_basis, fermat_poly, transport_basis_t, CycleBasis, LiftedChain,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg;
use crate::polyring::{critical_data, monomial_basis, univariate_roots, BivarPoly, UniPoly};

// 15-point Kronrod rule with embedded 7-point Gauss (positive abscissae).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Quadrature and tracking targets for period evaluation.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    /// Relative error target per period.
    pub rel_tol: f64,
    /// Backward-error target for branch tracking.
    pub track_tol: f64,
    /// Panel bisection depth cap.
    pub max_depth: usize,
    pub parallel: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            track_tol: 1e-12,
            max_depth: 26,
            parallel: true,
        }
    }
}

impl QuadratureConfig {
    pub fn track_options(&self) -> TrackOptions {
        TrackOptions {
            tol: self.track_tol,
            ..TrackOptions::default()
        }
    }

    /// The same configuration with both targets halved (self-consistency
    /// checks re-run periods at tightened tolerance).
    pub fn halved(&self) -> QuadratureConfig {
        QuadratureConfig {
            rel_tol: self.rel_tol * 0.5,
            track_tol: self.track_tol * 0.5,
            max_depth: self.max_depth + 2,
            parallel: self.parallel,
        }
    }
}

/// A period with its accumulated error estimate.
#[derive(Debug, Clone, Copy)]
pub struct PeriodValue {
    pub value: Complex64,
    pub error_estimate: f64,
}

/// Integrate the form `ω_j = x^l(j) y^(m(j)+1) dx` over one lifted cycle.
pub fn integrate_form(
    h: &BivarPoly,
    t: Complex64,
    j: usize,
    cycle: &LiftedChain,
    cfg: QuadratureConfig,
) -> Result<PeriodValue> {
    let n = h
        .degree()
        .ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?
        - 1;
    let basis = monomial_basis(n)?;
    if j < 1 || j > n * n {
        return Err(Error::InvalidParameter(format!(
            "form index j = {j} out of 1..{}",
            n * n
        )));
    }
    let entry = basis.entry(j);
    let fam = FiberFamily::new(h, t)?;
    let tracks = cycle.lift(h, t, cfg.track_options())?;
    let pv = integrate_with_tracks(cycle, &tracks, &fam, entry.l, entry.m, cfg)?;
    let target = cfg.rel_tol * pv.value.norm().max(1e-12);
    if pv.error_estimate > 50.0 * target {
        return Err(Error::AccuracyFailure {
            estimate: pv.error_estimate,
            target,
        });
    }
    Ok(pv)
}

/// Quadrature over a cycle whose links have already been lifted.
fn integrate_with_tracks(
    cycle: &LiftedChain,
    tracks: &[BranchTrack],
    fam: &FiberFamily,
    l: usize,
    m: usize,
    cfg: QuadratureConfig,
) -> Result<PeriodValue> {
    // coarse pass for the error budget
    let mut coarse = Complex64::ZERO;
    let mut resabs_total = 0.0f64;
    let mut panels: Vec<(usize, usize, Complex64, f64)> = Vec::new(); // (link, piece, coarse, resabs)
    for (li, (link, track)) in cycle.links.iter().zip(tracks).enumerate() {
        for pi in 0..link.path.pieces.len() {
            let (v, _e, ra) = gk15(track, fam, l, m, pi, 0.0, 1.0)?;
            coarse += v * link.sign as f64;
            resabs_total += ra;
            panels.push((li, pi, v, ra));
        }
    }
    let abs_tol = cfg.rel_tol * coarse.norm().max(1e-3 * resabs_total).max(1e-300);

    let mut total = Complex64::ZERO;
    let mut err = 0.0f64;
    for (li, pi, _v, ra) in panels {
        let link = &cycle.links[li];
        let share = if resabs_total > 0.0 {
            (ra / resabs_total).max(1e-3 / cycle.links.len() as f64)
        } else {
            1.0
        };
        let (v, e) = adaptive_piece(
            &tracks[li],
            fam,
            l,
            m,
            pi,
            0.0,
            1.0,
            abs_tol * share,
            cfg.max_depth,
        )?;
        total += v * link.sign as f64;
        err += e;
    }

    // fold the tracking-error estimates in, scaled by the integrand's
    // sensitivity to y
    for (link, track) in cycle.links.iter().zip(tracks) {
        let mut sens = 0.0f64;
        for s in &track.samples {
            let x = s.x;
            let y = s.fiber[s.tracked];
            let v = track.path.velocity_at(s.u).norm();
            sens = sens.max(x.norm().powi(l as i32) * (m as f64 + 1.0) * y.norm().powi(m as i32) * v);
        }
        err += track.error_estimate * sens * link.path.pieces.len() as f64;
    }

    Ok(PeriodValue {
        value: total,
        error_estimate: err,
    })
}

/// One GK15 panel over `[a, b]` (piece-local parameter); returns
/// `(kronrod, error, resabs)`.
fn gk15(
    track: &BranchTrack,
    fam: &FiberFamily,
    l: usize,
    m: usize,
    piece: usize,
    a: f64,
    b: f64,
) -> Result<(Complex64, f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let path_piece = &track.path.pieces[piece];
    let base = piece as f64;

    let eval = |s: f64| -> Result<Complex64> {
        let y = track.y_at(fam, base + s)?;
        let x = path_piece.point_at(s);
        let v = path_piece.velocity_at(s);
        Ok(x.powi(l as i32) * y.powi(m as i32 + 1) * v)
    };

    let mut kron = Complex64::ZERO;
    let mut gauss = Complex64::ZERO;
    let mut resabs = 0.0f64;
    let mut values = [Complex64::ZERO; 15];
    let mut idx = 0;
    for (k, &xk) in XGK.iter().enumerate() {
        if xk == 0.0 {
            let f = eval(center)?;
            values[idx] = f;
            idx += 1;
            kron += f * WGK[k];
            resabs += f.norm() * WGK[k];
            gauss += f * WG[3];
        } else {
            let f1 = eval(center - half * xk)?;
            let f2 = eval(center + half * xk)?;
            values[idx] = f1;
            values[idx + 1] = f2;
            idx += 2;
            kron += (f1 + f2) * WGK[k];
            resabs += (f1.norm() + f2.norm()) * WGK[k];
            if k % 2 == 1 {
                gauss += (f1 + f2) * WG[k / 2];
            }
        }
    }
    kron *= half;
    gauss *= half;
    resabs *= half.abs();

    // QUADPACK-style rescaled error estimate
    let mean = kron / (b - a);
    let mut resasc = 0.0f64;
    idx = 0;
    for (k, &xk) in XGK.iter().enumerate() {
        if xk == 0.0 {
            resasc += (values[idx] - mean).norm() * WGK[k];
            idx += 1;
        } else {
            resasc += ((values[idx] - mean).norm() + (values[idx + 1] - mean).norm()) * WGK[k];
            idx += 2;
        }
    }
    resasc *= half.abs();
    let raw = (kron - gauss).norm();
    let err = if resasc > 0.0 && raw > 0.0 {
        resasc * 1.0f64.min((200.0 * raw / resasc).powf(1.5))
    } else {
        raw
    };
    Ok((kron, err.max(raw), resabs))
}

#[allow(clippy::too_many_arguments)]
fn adaptive_piece(
    track: &BranchTrack,
    fam: &FiberFamily,
    l: usize,
    m: usize,
    piece: usize,
    a: f64,
    b: f64,
    tol: f64,
    depth: usize,
) -> Result<(Complex64, f64)> {
    let (v, e, _) = gk15(track, fam, l, m, piece, a, b)?;
    if e <= tol || depth == 0 {
        return Ok((v, e));
    }
    let mid = 0.5 * (a + b);
    let (v1, e1) = adaptive_piece(track, fam, l, m, piece, a, mid, tol * 0.5, depth - 1)?;
    let (v2, e2) = adaptive_piece(track, fam, l, m, piece, mid, b, tol * 0.5, depth - 1)?;
    Ok((v1 + v2, e1 + e2))
}

/// The `n²×n²` matrix of periods at a fixed `t`: rows are forms `j`,
/// columns are cycles `r`.
#[derive(Debug, Clone)]
pub struct PeriodMatrix {
    pub n: usize,
    pub t: Complex64,
    pub entries: DMatrix<Complex64>,
    pub errors: DMatrix<f64>,
    /// Hadamard ratio `|det| / ∏ row norms`: 1 for orthogonal rows, 0 for
    /// dependent rows.
    pub condition: f64,
    /// False when some entry exceeded its accuracy target.
    pub accuracy_ok: bool,
}

impl PeriodMatrix {
    pub fn det(&self) -> Complex64 {
        linalg::det(&self.entries)
    }
}

/// Evaluate all `n⁴` periods over the basis. Each cycle is lifted once and
/// the lift is shared across the `n²` forms; the integrals are independent
/// tasks collected in deterministic order.
pub fn period_matrix(
    h: &BivarPoly,
    t: Complex64,
    basis: &CycleBasis,
    cfg: QuadratureConfig,
) -> Result<PeriodMatrix> {
    let n = basis.n;
    let sz = n * n;
    if basis.cycles.len() != sz {
        return Err(Error::InvalidParameter(format!(
            "basis has {} cycles, expected {sz}",
            basis.cycles.len()
        )));
    }
    if (basis.t - t).norm() > 1e-9 * (1.0 + t.norm()) {
        return Err(Error::InvalidParameter(format!(
            "basis lives at t = {}, matrix requested at t = {t}",
            basis.t
        )));
    }
    let fam = FiberFamily::new(h, t)?;
    let mb = monomial_basis(n)?;
    let topts = cfg.track_options();

    let tracks: Vec<Result<Vec<BranchTrack>>> =
        exec::map_slice(cfg.parallel, &basis.cycles, |c| c.lift(h, t, topts));
    let mut all_tracks = Vec::with_capacity(sz);
    for tr in tracks {
        all_tracks.push(tr?);
    }

    let cells: Vec<Result<PeriodValue>> = exec::map_indexed(cfg.parallel, sz * sz, |idx| {
        let j = idx / sz + 1; // form (row)
        let r = idx % sz; // cycle (column)
        let e = mb.entry(j);
        integrate_with_tracks(&basis.cycles[r], &all_tracks[r], &fam, e.l, e.m, cfg)
    });

    let mut entries = DMatrix::<Complex64>::zeros(sz, sz);
    let mut errors = DMatrix::<f64>::zeros(sz, sz);
    let mut accuracy_ok = true;
    for (idx, cell) in cells.into_iter().enumerate() {
        let pv = cell?;
        let (j, r) = (idx / sz, idx % sz);
        entries[(j, r)] = pv.value;
        errors[(j, r)] = pv.error_estimate;
        if pv.error_estimate > 50.0 * cfg.rel_tol * pv.value.norm().max(1e-12) {
            accuracy_ok = false;
        }
    }
    let condition = linalg::hadamard_ratio(&entries);
    Ok(PeriodMatrix {
        n,
        t,
        entries,
        errors,
        condition,
        accuracy_ok,
    })
}

/// Determinant samples along a `t`-list and their polynomial fit.
#[derive(Debug, Clone)]
pub struct DetFit {
    pub samples: Vec<(Complex64, Complex64)>,
    /// Fitted polynomial in `t` (ascending coefficients), degree `n²`.
    pub coeffs: UniPoly,
    /// Max deviation `|p(t_k) − det_k|`.
    pub residual: f64,
    pub leading: Complex64,
}

impl DetFit {
    pub fn residual_rel(&self) -> f64 {
        let scale = self
            .samples
            .iter()
            .map(|(_, d)| d.norm())
            .fold(0.0f64, f64::max);
        if scale == 0.0 {
            self.residual
        } else {
            self.residual / scale
        }
    }

    pub fn roots(&self) -> Result<Vec<Complex64>> {
        Ok(univariate_roots(&self.coeffs.coeffs, 1e-6, 0x0de7)?.roots)
    }
}

/// Sample the determinant at each listed `t` (transporting the basis from
/// sample to sample along straight hops) and fit a degree-`n²` polynomial.
///
/// Samples closer than `crit_guard` to a critical value are rejected before
/// any work; the fit is refused as underdetermined if fewer than `n²+1`
/// samples survive.
pub fn det_samples(
    h: &BivarPoly,
    basis: &CycleBasis,
    t_list: &[Complex64],
    crit_guard: f64,
    homotopy_steps: usize,
    cfg: QuadratureConfig,
) -> Result<DetFit> {
    let n = basis.n;
    let degree = n * n;
    let crit = critical_data(h, 1e-10)?;
    let accepted: Vec<Complex64> = t_list
        .iter()
        .copied()
        .filter(|t| {
            crit.values
                .iter()
                .map(|a| (t - a).norm())
                .fold(f64::INFINITY, f64::min)
                >= crit_guard
        })
        .collect();
    if accepted.len() < degree + 1 {
        return Err(Error::InvalidParameter(format!(
            "{} usable t-samples cannot determine a degree-{degree} polynomial",
            accepted.len()
        )));
    }

    let mut samples = Vec::with_capacity(accepted.len());
    let mut current = basis.clone();
    for &t in &accepted {
        if (t - current.t).norm() > 1e-12 * (1.0 + t.norm()) {
            let hop = XPath::segment(current.t, t);
            current = transport_basis_t(&current, h, &hop, homotopy_steps)?;
        }
        let pm = period_matrix(h, t, &current, cfg)?;
        samples.push((t, pm.det()));
    }

    fit_det_samples(&samples, degree)
}

/// Least-squares fit of determinant samples by a degree-`degree`
/// polynomial, done in a centered/scaled variable for conditioning and
/// mapped back to plain `t` coefficients.
pub fn fit_det_samples(samples: &[(Complex64, Complex64)], degree: usize) -> Result<DetFit> {
    if samples.len() < degree + 1 {
        return Err(Error::InvalidParameter(format!(
            "{} samples cannot determine a degree-{degree} polynomial",
            samples.len()
        )));
    }
    let center: Complex64 =
        samples.iter().map(|(t, _)| t).sum::<Complex64>() / samples.len() as f64;
    let radius = samples
        .iter()
        .map(|(t, _)| (t - center).norm())
        .fold(0.0f64, f64::max)
        .max(1e-12);
    let nodes: Vec<Complex64> = samples.iter().map(|(t, _)| (t - center) / radius).collect();
    let rhs: Vec<Complex64> = samples.iter().map(|(_, d)| *d).collect();
    let centered = linalg::polyfit(&nodes, &rhs, degree)?;

    // p(t) = Σ γ_k u^k with u = (t - center)/radius: expand by Horner in
    // the linear factor
    let mut coeffs_t = UniPoly::constant(Complex64::ZERO);
    let inv_r = Complex64::ONE / radius;
    let lin = UniPoly::new(vec![-center * inv_r, inv_r]); // u(t)
    let mut gammas = centered.coeffs.clone();
    gammas.resize(degree + 1, Complex64::ZERO);
    for &g in gammas.iter().rev() {
        coeffs_t = poly_mul(&coeffs_t, &lin);
        if coeffs_t.coeffs.is_empty() {
            coeffs_t.coeffs.push(g);
        } else {
            coeffs_t.coeffs[0] += g;
        }
    }
    let mut padded = coeffs_t.coeffs.clone();
    padded.resize(degree + 1, Complex64::ZERO);
    let leading = padded[degree];

    let residual = samples
        .iter()
        .map(|&(t, d)| (horner(&padded, t) - d).norm())
        .fold(0.0f64, f64::max);

    Ok(DetFit {
        samples: samples.to_vec(),
        coeffs: UniPoly { coeffs: padded },
        residual,
        leading,
    })
}

fn poly_mul(a: &UniPoly, b: &UniPoly) -> UniPoly {
    if a.coeffs.is_empty() || b.coeffs.is_empty() {
        return UniPoly { coeffs: vec![] };
    }
    let mut out = vec![Complex64::ZERO; a.coeffs.len() + b.coeffs.len() - 1];
    for (i, &ca) in a.coeffs.iter().enumerate() {
        for (j, &cb) in b.coeffs.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    UniPoly { coeffs: out }
}

fn horner(coeffs: &[Complex64], t: Complex64) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for &c in coeffs.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

/// Verification configuration; every tolerance is explicit.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub quad: QuadratureConfig,
    /// Radius of the branch-point detour circles of the base cycles.
    pub fermat_delta: f64,
    /// Determinant samples sit on the circle `|t - t_center| = t_radius`.
    pub t_center: Complex64,
    pub t_radius: f64,
    /// Number of determinant samples (defaults to `2(n²+1)` when zero).
    pub samples: usize,
    pub homotopy_steps: usize,
    /// Relative fit-residual bound for the polynomiality check.
    pub fit_tol: f64,
    /// Allowed distance between fitted roots and critical values.
    pub root_match_tol: f64,
    /// Allowed relative distance of leading/C(H) from ±1.
    pub sign_match_tol: f64,
    /// Rejection distance between a `t`-sample and any critical value.
    pub crit_guard: f64,
    /// Seed for stochastic root-finder starts (reports record it).
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            quad: QuadratureConfig::default(),
            fermat_delta: 1e-2,
            t_center: Complex64::ONE,
            t_radius: 0.2,
            samples: 0,
            homotopy_steps: 32,
            fit_tol: 1e-6,
            root_match_tol: 1e-5,
            sign_match_tol: 1e-4,
            crit_guard: 0.05,
            seed: 0x5eed,
        }
    }
}

/// One fitted-root/critical-value pairing.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RootMatch {
    pub fitted: Complex64,
    pub critical: Complex64,
    pub distance: f64,
}

/// Full verification outcome. `schema` identifies the JSON layout; reports
/// with equal inputs and configuration are byte-identical.
#[derive(Debug, Clone, serde::Serialize)]
pub struct VerificationReport {
    pub schema: String,
    pub n: usize,
    pub polynomial: String,
    pub sigma: Complex64,
    pub det_e: Vec<Complex64>,
    pub c_n: Complex64,
    pub c_of_h: Complex64,
    pub det_samples: Vec<(Complex64, Complex64)>,
    pub fit_coeffs: Vec<Complex64>,
    pub fit_residual_rel: f64,
    pub polynomiality_pass: bool,
    pub root_matches: Vec<RootMatch>,
    pub max_root_distance: f64,
    pub roots_pass: bool,
    pub leading: Complex64,
    pub constant_ratio: Complex64,
    pub matched_sign: i8,
    pub constant_pass: bool,
    pub pass: bool,
    pub fit_tol: f64,
    pub root_match_tol: f64,
    pub sign_match_tol: f64,
    pub quad_rel_tol: f64,
    pub basis_provenance: String,
}

/// Run the whole pipeline on `h`: chart and genericity checks, critical
/// data, basis construction (Fermat, deformed to `h` when needed),
/// determinant sampling on the `t`-circle, the degree-`n²` fit, and the
/// three checks: polynomiality, root/critical-value matching, and the
/// leading coefficient against `C(H)` up to sign.
pub fn verify(h: &BivarPoly, config: VerifyConfig) -> Result<VerificationReport> {
    let top = h.top_part()?;
    let n = top.n;
    let scale = top.coeff_scale();
    if top.h(0).norm() <= 1e-12 * scale {
        return Err(Error::UnsupportedChart("h_0 = 0 (no x^(n+1) term)".into()));
    }
    if top.h(n + 1).norm() <= 1e-12 * scale {
        return Err(Error::UnsupportedChart(
            "h_(n+1) = 0 (no y^(n+1) term)".into(),
        ));
    }
    if !top.is_generic()? {
        return Err(Error::NonGeneric(
            "Σ(H) vanishes within tolerance".into(),
        ));
    }

    let crit = critical_data(h, 1e-10)?;
    let cf = c_of_h(&top)?;
    let sigma = top.sigma()?;
    let mut det_e = Vec::new();
    for k in 1..n {
        det_e.push(build_e(&top, k)?.det());
    }

    // basis at t = 1: the Fermat basis, deformed to h when h differs
    let base = fermat_basis(n, config.fermat_delta)?;
    let fermat = fermat_poly(n);
    let basis = if *h == fermat {
        base
    } else {
        deform_basis(&base, &fermat, h, Complex64::ONE, config.homotopy_steps)?
    };

    // t-samples on the circle, ordered by angle, entered radially
    let m = if config.samples == 0 {
        2 * (n * n + 1)
    } else {
        config.samples
    };
    let t_list: Vec<Complex64> = (0..m)
        .map(|k| {
            config.t_center
                + Complex64::from_polar(config.t_radius, std::f64::consts::TAU * k as f64 / m as f64)
        })
        .collect();

    // move the basis from t = 1 to the first sample if the circle does not
    // start there
    let mut start_basis = basis;
    if (t_list[0] - start_basis.t).norm() > 1e-12 {
        let hop = XPath::segment(start_basis.t, t_list[0]);
        start_basis = transport_basis_t(&start_basis, h, &hop, config.homotopy_steps)?;
    }
    let fit = det_samples(
        h,
        &start_basis,
        &t_list,
        config.crit_guard,
        config.homotopy_steps,
        config.quad,
    )?;

    let polynomiality_pass = fit.residual_rel() < config.fit_tol;

    // greedy root ↔ critical-value matching
    let mut fitted = fit.roots()?;
    let mut root_matches = Vec::new();
    let mut max_root_distance = 0.0f64;
    let mut targets = crit.values.clone();
    fitted.truncate(n * n);
    for &r in &fitted {
        if targets.is_empty() {
            break;
        }
        let (bi, bd) = targets
            .iter()
            .enumerate()
            .map(|(i, a)| (i, (r - a).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        root_matches.push(RootMatch {
            fitted: r,
            critical: targets[bi],
            distance: bd,
        });
        max_root_distance = max_root_distance.max(bd);
        targets.remove(bi);
    }
    let roots_pass =
        root_matches.len() == n * n && max_root_distance < config.root_match_tol;

    let ratio = fit.leading / cf.value;
    let (constant_pass, matched_sign) = cf.matches(fit.leading, config.sign_match_tol);

    let pass = polynomiality_pass && roots_pass && constant_pass;
    Ok(VerificationReport {
        schema: "abelint/verify-report/1".into(),
        n,
        polynomial: h.to_string(),
        sigma,
        det_e,
        c_n: c_constant(n)?,
        c_of_h: cf.value,
        det_samples: fit.samples.clone(),
        fit_coeffs: fit.coeffs.coeffs.clone(),
        fit_residual_rel: fit.residual_rel(),
        polynomiality_pass,
        root_matches,
        max_root_distance,
        roots_pass,
        leading: fit.leading,
        constant_ratio: ratio,
        matched_sign,
        constant_pass,
        pass,
        fit_tol: config.fit_tol,
        root_match_tol: config.root_match_tol,
        sign_match_tol: config.sign_match_tol,
        quad_rel_tol: config.quad.rel_tol,
        basis_provenance: start_basis.provenance,
    })
}

/// Outcome of carrying a basis once around a closed `t`-loop.
#[derive(Debug, Clone)]
pub struct TLoopReport {
    pub det_before: Complex64,
    pub det_after: Complex64,
    pub det_rel_change: f64,
    /// Largest relative change of an individual period across the loop.
    pub max_period_rel_change: f64,
    pub basis_after: CycleBasis,
}

/// Transport `basis` around the circle `|t - center| = radius` once
/// (counterclockwise, entered radially from `basis.t`) and compare the
/// period matrix before and after. The determinant is single-valued, so it
/// must return to itself even though individual periods undergo monodromy.
pub fn t_loop_monodromy(
    h: &BivarPoly,
    basis: &CycleBasis,
    center: Complex64,
    radius: f64,
    homotopy_steps: usize,
    cfg: QuadratureConfig,
) -> Result<TLoopReport> {
    // enter the loop at the point of the circle nearest the basis
    let dir = basis.t - center;
    if dir.norm() < radius {
        return Err(Error::InvalidParameter(
            "basis level value lies inside the requested t-loop".into(),
        ));
    }
    let start = center + dir / dir.norm() * radius;
    // the loop deliberately passes within `radius` of a critical value, so
    // the engine's guard must sit inside that
    let topts = crate::cycles::TransportOptions {
        steps: homotopy_steps,
        crit_guard: 0.4 * radius,
        ..crate::cycles::TransportOptions::default()
    };
    let mut at_loop = basis.clone();
    if (start - at_loop.t).norm() > 1e-12 {
        let family = crate::cycles::TLevelPath {
            h: h.clone(),
            path: XPath::segment(at_loop.t, start),
        };
        at_loop = crate::cycles::transport(&at_loop, &family, topts)?;
    }
    let before = period_matrix(h, start, &at_loop, cfg)?;

    let loop_path = XPath::full_circle(center, radius, (start - center).arg(), true);
    let family = crate::cycles::TLevelPath {
        h: h.clone(),
        path: loop_path,
    };
    let after_basis = crate::cycles::transport(&at_loop, &family, topts)?;
    let after = period_matrix(h, start, &after_basis, cfg)?;

    let det_b = before.det();
    let det_a = after.det();
    let det_rel_change = (det_a - det_b).norm() / det_b.norm().max(1e-300);
    let mut max_period_rel_change = 0.0f64;
    for j in 0..before.entries.nrows() {
        for r in 0..before.entries.ncols() {
            let b = before.entries[(j, r)];
            let a = after.entries[(j, r)];
            let rel = (a - b).norm() / b.norm().max(1e-300);
            max_period_rel_change = max_period_rel_change.max(rel);
        }
    }
    Ok(TLoopReport {
        det_before: det_b,
        det_after: det_a,
        det_rel_change,
        max_period_rel_change,
        basis_after: after_basis,
    })
}

/// CSV dump of determinant samples (`t_re,t_im,det_re,det_im`).
pub fn det_samples_csv(samples: &[(Complex64, Complex64)]) -> String {
    let mut out = String::from("t_re,t_im,det_re,det_im\n");
    for (t, d) in samples {
        out.push_str(&format!("{},{},{},{}\n", t.re, t.im, d.re, d.im));
    }
    out
}
