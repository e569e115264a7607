//! Accessed and accessible volumes on the Bloch sphere, the complexity
//! `C = (V_max - V_bar) / V_max` and the complexity length scale
//! `L_C = s / sqrt(1 - C)`.
//!
//! Volumes are Fubini-Study areas, `dA = sin(theta)/4 dtheta dphi`, so the full
//! sphere has area `pi`. The instantaneous volume at time `t` is the area of
//! the coordinate rectangle spanned by the start point and the current point;
//! the accessible volume is the area of the bounding box of the whole path.
//!
//! Parallels (constant `theta`) and meridians (constant `phi`) have rectangles
//! of zero area. For those the collapsed direction is replaced by its full
//! range, giving `|dphi|/2` or `|dtheta|/2` respectively. Reports carry the
//! [`Degeneracy`] flag whenever that substitution is in effect.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hamiltonian::{evolution_time, suboptimal_field, EvolutionProblem, SubOptimalParams};
use crate::metrics::{
    curvature_metrics, path_length, speed_metrics, CurvatureMetrics, PathMetrics, SpeedMetrics,
};
use crate::numerics::{bisect_sign_change, golden_section_max, simpson_fn, simpson_step_doubling};
use crate::trajectory::{Trajectory, DEFAULT_SAMPLES};

/// Angular extent below which a coordinate direction is treated as collapsed.
pub const DEGENERATE_EXTENT: f64 = 1e-9;

/// Time resolution of extremum and branch-time refinement.
pub const TIME_TOL: f64 = 1e-10;

/// Largest change of `V_bar` tolerated under quadrature step doubling.
pub const STEP_DOUBLING_TOL: f64 = 1e-7;

/// Simpson panels per integration piece when the integrand is evaluated in
/// closed form.
pub const PIECE_PANELS: usize = 4096;

/// Values with magnitude at or below this are ignored when looking for sign
/// changes.
const SIGN_EPS: f64 = 1e-12;

/// Square root of the Fubini-Study metric determinant, `sin(theta)/4`.
pub fn fubini_study_density(theta: f64) -> f64 {
    theta.sin() / 4.0
}

/// How the instantaneous volume is averaged over the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AveragingMode {
    /// `(1/(t_B - t_A)) * integral of V(t) over [t_A, t_B]`.
    Uniform,
    /// Sum over azimuth branches of the per-branch time average, where the
    /// branches are delimited by zero crossings of `Re c0(t)` or `Re c1(t)`.
    #[default]
    AppendixPiecewise,
}

impl AveragingMode {
    pub fn other(self) -> Self {
        match self {
            AveragingMode::Uniform => AveragingMode::AppendixPiecewise,
            AveragingMode::AppendixPiecewise => AveragingMode::Uniform,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AveragingMode::Uniform => "uniform",
            AveragingMode::AppendixPiecewise => "appendix-piecewise",
        }
    }
}

impl fmt::Display for AveragingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AveragingMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(AveragingMode::Uniform),
            "appendix-piecewise" | "appendix_piecewise" | "piecewise" => {
                Ok(AveragingMode::AppendixPiecewise)
            }
            other => Err(format!(
                "unknown averaging mode `{other}` (expected uniform or appendix-piecewise)"
            )),
        }
    }
}

/// Which angular directions of the bounding box have collapsed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Degeneracy {
    None,
    /// Constant polar angle (motion along a parallel).
    Theta,
    /// Constant azimuth (motion along a meridian).
    Phi,
    Both,
}

impl Degeneracy {
    pub fn from_extents(theta_extent: f64, phi_extent: f64) -> Self {
        match (
            theta_extent < DEGENERATE_EXTENT,
            phi_extent < DEGENERATE_EXTENT,
        ) {
            (false, false) => Degeneracy::None,
            (true, false) => Degeneracy::Theta,
            (false, true) => Degeneracy::Phi,
            (true, true) => Degeneracy::Both,
        }
    }

    pub fn theta(self) -> bool {
        matches!(self, Degeneracy::Theta | Degeneracy::Both)
    }

    pub fn phi(self) -> bool {
        matches!(self, Degeneracy::Phi | Degeneracy::Both)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Degeneracy::None => "none",
            Degeneracy::Theta => "theta",
            Degeneracy::Phi => "phi",
            Degeneracy::Both => "both",
        }
    }
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Area of the rectangle `[theta_a, theta_t] x [phi_a, phi_t]`.
pub fn instantaneous_volume(
    theta_a: f64,
    phi_a: f64,
    theta_t: f64,
    phi_t: f64,
    degeneracy: Degeneracy,
) -> f64 {
    match degeneracy {
        Degeneracy::None => ((theta_a.cos() - theta_t.cos()) * (phi_t - phi_a)).abs() / 4.0,
        Degeneracy::Theta => (phi_t - phi_a).abs() / 2.0,
        Degeneracy::Phi => (theta_t - theta_a).abs() / 2.0,
        Degeneracy::Both => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub theta_min: f64,
    pub theta_max: f64,
    pub phi_min: f64,
    pub phi_max: f64,
}

impl BoundingBox {
    pub fn theta_extent(&self) -> f64 {
        self.theta_max - self.theta_min
    }

    pub fn phi_extent(&self) -> f64 {
        self.phi_max - self.phi_min
    }

    pub fn contains(&self, theta: f64, phi: f64, tol: f64) -> bool {
        theta >= self.theta_min - tol
            && theta <= self.theta_max + tol
            && phi >= self.phi_min - tol
            && phi <= self.phi_max + tol
    }

    /// Area of the box under the degeneracy convention.
    pub fn volume(&self, degeneracy: Degeneracy) -> f64 {
        match degeneracy {
            Degeneracy::None => {
                (self.theta_min.cos() - self.theta_max.cos()) * self.phi_extent() / 4.0
            }
            Degeneracy::Theta => self.phi_extent() / 2.0,
            Degeneracy::Phi => self.theta_extent() / 2.0,
            Degeneracy::Both => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccessibleVolume {
    pub v_max: f64,
    pub bbox: BoundingBox,
    pub degeneracy: Degeneracy,
}

/// Bounding box of the trajectory, with each extremum located by a scan of
/// the samples followed by golden-section refinement in time.
pub fn accessible_volume(traj: &Trajectory) -> AccessibleVolume {
    let thetas: Vec<f64> = traj.samples().iter().map(|s| s.theta).collect();
    let phis: Vec<f64> = traj.samples().iter().map(|s| s.phi).collect();
    let theta_at = |t: f64| traj.theta_at(t);
    let phi_at = |t: f64| traj.phi_at(t);
    let bbox = BoundingBox {
        theta_min: -refine_extreme(traj, &neg(&thetas), |t| -theta_at(t)),
        theta_max: refine_extreme(traj, &thetas, theta_at),
        phi_min: -refine_extreme(traj, &neg(&phis), |t| -phi_at(t)),
        phi_max: refine_extreme(traj, &phis, phi_at),
    };
    let degeneracy = Degeneracy::from_extents(bbox.theta_extent(), bbox.phi_extent());
    AccessibleVolume {
        v_max: bbox.volume(degeneracy),
        bbox,
        degeneracy,
    }
}

fn neg(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| -x).collect()
}

/// Global maximum of `f` over the trajectory interval. Every sampled local
/// maximum that could beat the best sample is refined on its bracketing
/// interval.
fn refine_extreme<F: Fn(f64) -> f64>(traj: &Trajectory, values: &[f64], f: F) -> f64 {
    let n = values.len();
    let mut best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lowest = values.iter().copied().fold(f64::INFINITY, f64::min);
    if best - lowest < DEGENERATE_EXTENT * 1e-3 {
        return best;
    }
    let max_step = values
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max);
    let slack = 2.0 * max_step;
    let threshold = best - slack;
    let samples = traj.samples();
    for i in 0..n {
        let v = values[i];
        let left_ok = i == 0 || v >= values[i - 1];
        let right_ok = i + 1 == n || v >= values[i + 1];
        if !(left_ok && right_ok && v >= threshold) {
            continue;
        }
        let lo = samples[i.saturating_sub(1)].t;
        let hi = samples[(i + 1).min(n - 1)].t;
        let (_, refined) = golden_section_max(&f, lo, hi, TIME_TOL);
        best = best.max(refined);
    }
    best
}

/// One averaging segment of the accessed volume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentAverage {
    pub t_start: f64,
    pub t_end: f64,
    pub integral: f64,
    pub average: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccessedVolume {
    pub v_bar: f64,
    pub mode: AveragingMode,
    pub segments: Vec<SegmentAverage>,
    /// Interior azimuth branch times (empty in uniform mode).
    pub branch_times: Vec<f64>,
    /// Change of `v_bar` when the quadrature step is doubled.
    pub step_doubling_delta: f64,
}

/// Time-averaged instantaneous volume. The degeneracy convention is taken
/// from the trajectory's bounding box.
pub fn accessed_volume(traj: &Trajectory, mode: AveragingMode) -> Result<AccessedVolume> {
    let degeneracy = accessible_volume(traj).degeneracy;
    accessed_volume_with(traj, mode, degeneracy)
}

/// [`accessed_volume`] with an explicit degeneracy.
pub fn accessed_volume_with(
    traj: &Trajectory,
    mode: AveragingMode,
    degeneracy: Degeneracy,
) -> Result<AccessedVolume> {
    let branch_times = match mode {
        AveragingMode::Uniform => Vec::new(),
        AveragingMode::AppendixPiecewise => branch_times(traj),
    };
    let mut edges = Vec::with_capacity(branch_times.len() + 2);
    edges.push(traj.t_a());
    edges.extend(branch_times.iter().copied());
    edges.push(traj.t_b());

    let mut segments = Vec::with_capacity(edges.len() - 1);
    let mut delta = 0.0;
    for w in edges.windows(2) {
        let (integral, d) = integrate_volume(traj, w[0], w[1], degeneracy);
        let len = w[1] - w[0];
        segments.push(SegmentAverage {
            t_start: w[0],
            t_end: w[1],
            integral,
            average: integral / len,
        });
        delta += d / len;
    }
    if !(delta < STEP_DOUBLING_TOL) {
        return Err(Error::QuadratureUnconverged { delta });
    }
    Ok(AccessedVolume {
        v_bar: segments.iter().map(|s| s.average).sum(),
        mode,
        segments,
        branch_times,
        step_doubling_delta: delta,
    })
}

/// Interior times where `Re c0(t)` or `Re c1(t)` changes sign, i.e. where the
/// single-argument arctangent form of either amplitude phase jumps by `pi`.
pub fn branch_times(traj: &Trajectory) -> Vec<f64> {
    let samples = traj.samples();
    let states = traj.states();
    let mut out = Vec::new();
    for component in [0usize, 1] {
        let re = |i: usize| {
            let s = &states[i];
            if component == 0 {
                s.c0.re
            } else {
                s.c1.re
            }
        };
        let eval = |t: f64| {
            let s = traj.state_at(t);
            if component == 0 {
                s.c0.re
            } else {
                s.c1.re
            }
        };
        for (lo, hi) in sign_change_brackets((0..states.len()).map(re)) {
            let t = bisect_sign_change(eval, samples[lo].t, samples[hi].t, TIME_TOL);
            out.push(t);
        }
    }
    out.retain(|&t| t - traj.t_a() > TIME_TOL && traj.t_b() - t > TIME_TOL);
    out.sort_by(|a, b| a.total_cmp(b));
    out.dedup_by(|a, b| (*a - *b).abs() < 1e3 * TIME_TOL);
    out
}

/// Index pairs `(i, j)` of consecutive significant values with opposite sign.
fn sign_change_brackets<I: Iterator<Item = f64>>(values: I) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut last: Option<(usize, bool)> = None;
    for (i, v) in values.enumerate() {
        if v.abs() <= SIGN_EPS {
            continue;
        }
        let positive = v > 0.0;
        if let Some((j, p)) = last {
            if p != positive {
                out.push((j, i));
            }
        }
        last = Some((i, positive));
    }
    out
}

/// Integral of the instantaneous volume over `[a, b]` and its step-doubling
/// delta. The interval is split wherever a factor inside the absolute value
/// changes sign so that every piece has a smooth integrand.
fn integrate_volume(traj: &Trajectory, a: f64, b: f64, degeneracy: Degeneracy) -> (f64, f64) {
    let start = traj.first();
    let samples = traj.samples();
    let whole = a == traj.t_a() && b == traj.t_b();

    let theta_factor = |t: f64| start.theta.cos() - traj.theta_at(t).cos();
    let phi_factor = |t: f64| traj.phi_at(t) - start.phi;

    let lo = traj.bracket_index(a);
    let hi = (traj.bracket_index(b) + 1).min(samples.len() - 1);
    let window = &samples[lo..=hi];
    let mut kinks = Vec::new();
    if !degeneracy.theta() {
        for (i, j) in sign_change_brackets(window.iter().map(|s| start.theta.cos() - s.theta.cos()))
        {
            kinks.push(bisect_sign_change(
                theta_factor,
                window[i].t,
                window[j].t,
                TIME_TOL,
            ));
        }
    }
    if !degeneracy.phi() {
        for (i, j) in sign_change_brackets(window.iter().map(|s| s.phi - start.phi)) {
            kinks.push(bisect_sign_change(
                phi_factor,
                window[i].t,
                window[j].t,
                TIME_TOL,
            ));
        }
    }
    kinks.retain(|&t| t - a > TIME_TOL && b - t > TIME_TOL);
    kinks.sort_by(|x, y| x.total_cmp(y));

    if whole && kinks.is_empty() && (samples.len() - 1).is_multiple_of(4) {
        let values: Vec<f64> = samples
            .iter()
            .map(|s| instantaneous_volume(start.theta, start.phi, s.theta, s.phi, degeneracy))
            .collect();
        return simpson_step_doubling(&values, traj.step());
    }

    let volume_at = |t: f64| {
        instantaneous_volume(
            start.theta,
            start.phi,
            traj.theta_at(t),
            traj.phi_at(t),
            degeneracy,
        )
    };
    let mut edges = vec![a];
    edges.extend(kinks);
    edges.push(b);
    edges.windows(2).fold((0.0, 0.0), |(sum, d), w| {
        let (v, dv) = simpson_fn(volume_at, w[0], w[1], PIECE_PANELS);
        (sum + v, d + dv)
    })
}

/// `C = (V_max - V_bar) / V_max`.
pub fn complexity(v_bar: f64, v_max: f64) -> Result<f64> {
    if !(v_max > 0.0 && v_bar > 0.0 && v_bar <= v_max) {
        return Err(Error::NonPositiveVolume { v_bar, v_max });
    }
    Ok((v_max - v_bar) / v_max)
}

/// `L_C = s / sqrt(1 - C)`.
pub fn complexity_length_scale(s: f64, c: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::NonPositiveLength(s));
    }
    if !(0.0..1.0).contains(&c) {
        return Err(Error::ComplexityOutOfRange(c));
    }
    Ok(s / (1.0 - c).sqrt())
}

/// `L_C = s / sqrt(V_bar / V_max)`.
pub fn complexity_length_scale_from_volumes(s: f64, v_bar: f64, v_max: f64) -> Result<f64> {
    if !(v_max > 0.0 && v_bar > 0.0 && v_bar <= v_max) {
        return Err(Error::NonPositiveVolume { v_bar, v_max });
    }
    if !(s > 0.0) {
        return Err(Error::NonPositiveLength(s));
    }
    Ok(s / (v_bar / v_max).sqrt())
}

/// Volumes and bounding box of one evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeReport {
    pub v_bar: f64,
    pub v_max: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub phi_min: f64,
    pub phi_max: f64,
    pub degenerate_theta: bool,
    pub degenerate_phi: bool,
    pub averaging_mode: AveragingMode,
    pub segments: Vec<SegmentAverage>,
    pub branch_times: Vec<f64>,
    /// `V_bar` under the other averaging mode, when it could be computed.
    pub alternate_v_bar: Option<f64>,
}

impl VolumeReport {
    pub fn degeneracy(&self) -> Degeneracy {
        match (self.degenerate_theta, self.degenerate_phi) {
            (false, false) => Degeneracy::None,
            (true, false) => Degeneracy::Theta,
            (false, true) => Degeneracy::Phi,
            (true, true) => Degeneracy::Both,
        }
    }

    pub fn bbox(&self) -> BoundingBox {
        BoundingBox {
            theta_min: self.theta_min,
            theta_max: self.theta_max,
            phi_min: self.phi_min,
            phi_max: self.phi_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityReport {
    pub s: f64,
    pub complexity: f64,
    pub l_c: f64,
    pub eta_ge: f64,
    pub eta_se: f64,
    pub kappa2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub samples: usize,
    pub mode: AveragingMode,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            mode: AveragingMode::default(),
        }
    }
}

/// Everything computed for one `(problem, alpha)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub alpha: f64,
    pub t_ab: f64,
    pub path: PathMetrics,
    pub speed: SpeedMetrics,
    pub curvature: CurvatureMetrics,
    pub volume: VolumeReport,
    pub report: ComplexityReport,
}

/// Samples the sub-optimal evolution and computes all metrics and volumes.
pub fn analyze(
    p: &EvolutionProblem,
    q: &SubOptimalParams,
    config: &AnalysisConfig,
) -> Result<Analysis> {
    let field = suboptimal_field(p, q)?;
    let t_ab = evolution_time(p, q);
    let traj = Trajectory::from_field(p, q, field, t_ab, config.samples)?;
    analyze_trajectory(&traj, config.mode)
}

/// [`analyze`] on an already sampled trajectory.
pub fn analyze_trajectory(traj: &Trajectory, mode: AveragingMode) -> Result<Analysis> {
    let p = traj.problem();
    let q = traj.params();
    let field = traj.field();

    let access = accessible_volume(traj);
    let accessed = accessed_volume_with(traj, mode, access.degeneracy)?;
    let alternate = accessed_volume_with(traj, mode.other(), access.degeneracy)
        .ok()
        .map(|a| a.v_bar);

    let path = PathMetrics::new(path_length(p, q), p.theta_ab());
    let speed = speed_metrics(field, p.a_hat())?;
    let curvature = curvature_metrics(field, p.a_hat())?;
    let c = complexity(accessed.v_bar, access.v_max)?;
    let l_c = complexity_length_scale(path.s, c)?;

    let bbox = access.bbox;
    Ok(Analysis {
        alpha: q.alpha(),
        t_ab: traj.duration(),
        path,
        speed,
        curvature,
        volume: VolumeReport {
            v_bar: accessed.v_bar,
            v_max: access.v_max,
            theta_min: bbox.theta_min,
            theta_max: bbox.theta_max,
            phi_min: bbox.phi_min,
            phi_max: bbox.phi_max,
            degenerate_theta: access.degeneracy.theta(),
            degenerate_phi: access.degeneracy.phi(),
            averaging_mode: mode,
            segments: accessed.segments,
            branch_times: accessed.branch_times,
            alternate_v_bar: alternate,
        },
        report: ComplexityReport {
            s: path.s,
            complexity: c,
            l_c,
            eta_ge: path.eta_ge,
            eta_se: speed.eta_se,
            kappa2: curvature.kappa2,
        },
    })
}
