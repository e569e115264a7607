//! Independent checks of the closed forms: a fourth-order Runge-Kutta
//! integrator for the Schrödinger equation, plus supplementary-angle and
//! energy-scaling harnesses over full analyses.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::complexity::{analyze, Analysis, AnalysisConfig};
use crate::error::{Error, Result};
use crate::format::format_sig;
use crate::hamiltonian::{
    evolution_time, optimal_field, propagator, suboptimal_field, EvolutionProblem, FieldVector,
    SubOptimalParams,
};
use crate::qubit::PureState;

/// Default number of RK4 steps per horizon.
pub const STEPS_PER_HORIZON: usize = 8192;

/// Smallest number of steps [`integrate_schrodinger`] accepts.
pub const MIN_STEPS: usize = 1000;

pub const SYMMETRY_TOL: f64 = 1e-6;
pub const SCALING_TOL: f64 = 1e-8;
pub const TIME_RATIO_TOL: f64 = 1e-10;
pub const ORACLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub max_norm_drift: f64,
}

impl IntegratorConfig {
    pub fn new(dt: f64) -> Self {
        Self {
            dt,
            max_norm_drift: 1e-10,
        }
    }

    /// `dt = T / 8192`.
    pub fn for_horizon(horizon: f64) -> Self {
        Self::new(horizon / STEPS_PER_HORIZON as f64)
    }

    /// Classical Runge-Kutta order.
    pub fn order(&self) -> usize {
        4
    }
}

/// Integrates `i hbar d|psi>/dt = (h . sigma)|psi>` from 0 to `horizon` with
/// fixed RK4 steps. The step is shrunk so that an integer number of steps
/// lands exactly on `horizon`.
pub fn integrate_schrodinger(
    f: &FieldVector,
    psi0: &PureState,
    horizon: f64,
    hbar: f64,
    cfg: &IntegratorConfig,
) -> Result<PureState> {
    if !(horizon >= 0.0) {
        return Err(Error::NegativeTime(horizon));
    }
    if horizon == 0.0 {
        return Ok(*psi0);
    }
    if !(cfg.dt > 0.0) || cfg.dt > horizon / MIN_STEPS as f64 * (1.0 + 1e-12) {
        return Err(Error::InvalidStep {
            dt: cfg.dt,
            horizon,
        });
    }
    let steps = (horizon / cfg.dt).ceil() as usize;
    let dt = horizon / steps as f64;
    // -i H / hbar
    let gen = f.hamiltonian().scale(Complex64::new(0.0, -1.0 / hbar));
    let rhs = |s: &PureState| gen.apply(s);
    let axpy = |s: &PureState, k: &PureState, a: f64| {
        PureState::from_amplitudes(s.c0 + k.c0 * a, s.c1 + k.c1 * a)
    };
    let norm0 = psi0.norm_sq();
    let mut psi = *psi0;
    for _ in 0..steps {
        let k1 = rhs(&psi);
        let k2 = rhs(&axpy(&psi, &k1, dt / 2.0));
        let k3 = rhs(&axpy(&psi, &k2, dt / 2.0));
        let k4 = rhs(&axpy(&psi, &k3, dt));
        psi = PureState::from_amplitudes(
            psi.c0 + (k1.c0 + k2.c0 * 2.0 + k3.c0 * 2.0 + k4.c0) * (dt / 6.0),
            psi.c1 + (k1.c1 + k2.c1 * 2.0 + k3.c1 * 2.0 + k4.c1) * (dt / 6.0),
        );
    }
    let drift = (psi.norm_sq() - norm0).abs();
    if drift >= cfg.max_norm_drift {
        return Err(Error::NormDrift {
            drift,
            limit: cfg.max_norm_drift,
        });
    }
    Ok(psi.normalized())
}

/// Largest per-component difference between the RK4 state and the closed-form
/// propagator applied to the source state at time `t`.
pub fn oracle_deviation(p: &EvolutionProblem, f: &FieldVector, t: f64) -> Result<f64> {
    let psi0 = p.source_state();
    let exact = propagator(f, t, p.hbar())?.apply(&psi0);
    if t == 0.0 {
        return Ok(0.0);
    }
    let rk = integrate_schrodinger(f, &psi0, t, p.hbar(), &IntegratorConfig::for_horizon(t))?;
    Ok([
        (rk.c0.re - exact.c0.re).abs(),
        (rk.c0.im - exact.c0.im).abs(),
        (rk.c1.re - exact.c1.re).abs(),
        (rk.c1.im - exact.c1.im).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max))
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub check: String,
    pub param: f64,
    pub delta: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(check: impl Into<String>, param: f64, delta: f64, tol: f64) -> Self {
        Self {
            check: check.into(),
            param,
            delta,
            pass: delta <= tol,
        }
    }
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{}",
            self.check,
            format_sig(self.param, 12),
            format_sig(self.delta, 6),
            self.pass
        )
    }
}

pub const REPORT_HEADER: &str = "check,param,delta,pass";

fn field_values(a: &Analysis) -> [(&'static str, f64); 9] {
    [
        ("t_ab", a.t_ab),
        ("s", a.report.s),
        ("eta_ge", a.report.eta_ge),
        ("eta_se", a.report.eta_se),
        ("kappa2", a.report.kappa2),
        ("v_bar", a.volume.v_bar),
        ("v_max", a.volume.v_max),
        ("complexity", a.report.complexity),
        ("l_c", a.report.l_c),
    ]
}

/// Per-field differences between the analyses at `alpha` and `pi - alpha`.
pub fn supplementary_deltas(
    p: &EvolutionProblem,
    alpha: f64,
    config: &AnalysisConfig,
) -> Result<Vec<(String, f64)>> {
    let q = SubOptimalParams::new(alpha)?;
    let a = analyze(p, &q, config)?;
    let b = analyze(p, &q.supplementary(), config)?;
    Ok(field_values(&a)
        .iter()
        .zip(field_values(&b).iter())
        .map(|((name, x), (_, y))| (name.to_string(), (x - y).abs()))
        .collect())
}

/// Fails with [`Error::SymmetryViolation`] unless every field agrees within
/// [`SYMMETRY_TOL`].
pub fn check_supplementary_symmetry(
    p: &EvolutionProblem,
    alpha: f64,
    config: &AnalysisConfig,
) -> Result<Vec<(String, f64)>> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let deltas = supplementary_deltas(p, alpha, config)?;
    if deltas.iter().any(|(_, d)| !(*d <= SYMMETRY_TOL)) {
        return Err(Error::SymmetryViolation { deltas });
    }
    Ok(deltas)
}

/// Differences of the volume outputs between two energy scales, plus the
/// deviation of `t_AB(omega1) / t_AB(omega2)` from `omega2 / omega1`
/// (reported as `time_ratio`, relative).
pub fn omega_deltas(
    p: &EvolutionProblem,
    alpha: f64,
    omega1: f64,
    omega2: f64,
    config: &AnalysisConfig,
) -> Result<Vec<(String, f64)>> {
    let q = SubOptimalParams::new(alpha)?;
    let p1 = p.with_energy(omega1 * p.hbar())?;
    let p2 = p.with_energy(omega2 * p.hbar())?;
    let a = analyze(&p1, &q, config)?;
    let b = analyze(&p2, &q, config)?;
    let ratio = evolution_time(&p1, &q) / evolution_time(&p2, &q);
    let mut out: Vec<(String, f64)> = [
        ("v_bar", a.volume.v_bar, b.volume.v_bar),
        ("v_max", a.volume.v_max, b.volume.v_max),
        ("complexity", a.report.complexity, b.report.complexity),
        ("l_c", a.report.l_c, b.report.l_c),
    ]
    .iter()
    .map(|(n, x, y)| (n.to_string(), (x - y).abs()))
    .collect();
    out.push((
        "time_ratio".to_string(),
        (ratio * omega1 / omega2 - 1.0).abs(),
    ));
    Ok(out)
}

/// Fails with [`Error::ScalingViolation`] unless volumes agree within
/// [`SCALING_TOL`] and the time ratio within [`TIME_RATIO_TOL`].
pub fn check_omega_independence(
    p: &EvolutionProblem,
    alpha: f64,
    omega1: f64,
    omega2: f64,
    config: &AnalysisConfig,
) -> Result<Vec<(String, f64)>> {
    if !(omega1 > 0.0) {
        return Err(Error::InvalidEnergy(omega1));
    }
    if !(omega2 > 0.0) {
        return Err(Error::InvalidEnergy(omega2));
    }
    let deltas = omega_deltas(p, alpha, omega1, omega2, config)?;
    let bad = deltas.iter().any(|(name, d)| {
        let tol = if name == "time_ratio" {
            TIME_RATIO_TOL
        } else {
            SCALING_TOL
        };
        !(*d <= tol)
    });
    if bad {
        return Err(Error::ScalingViolation { deltas });
    }
    Ok(deltas)
}

fn error_record(check: &str, param: f64) -> CheckRecord {
    CheckRecord {
        check: check.to_string(),
        param,
        delta: f64::NAN,
        pass: false,
    }
}

/// The `k pi / 16` grid, `k = 0..=8`.
pub fn table_alphas() -> Vec<f64> {
    (0..=8).map(|k| k as f64 * PI / 16.0).collect()
}

/// Runs the oracle, symmetry and scaling harnesses on the canonical problem.
/// One record per check and grid point; the delta is the worst field.
pub fn run_harness(config: &AnalysisConfig) -> Vec<CheckRecord> {
    let p = EvolutionProblem::canonical(1.0).expect("canonical problem");
    let mut out = Vec::new();

    let opt = optimal_field(&p).expect("optimal field");
    let t_opt = PI / 4.0;
    out.push(match oracle_deviation(&p, &opt, t_opt) {
        Ok(d) => CheckRecord::new("oracle_optimal", t_opt, d, ORACLE_TOL),
        Err(_) => error_record("oracle_optimal", t_opt),
    });

    for i in 0..16 {
        let alpha = PI * i as f64 / 15.0;
        let q = SubOptimalParams::new(alpha).expect("alpha in range");
        let f = suboptimal_field(&p, &q).expect("field");
        let t_ab = evolution_time(&p, &q);
        let worst = (1..=8)
            .map(|j| oracle_deviation(&p, &f, t_ab * j as f64 / 8.0))
            .try_fold(0.0f64, |m, d| d.map(|d| m.max(d)));
        out.push(match worst {
            Ok(d) => CheckRecord::new("oracle_grid", alpha, d, ORACLE_TOL),
            Err(_) => error_record("oracle_grid", alpha),
        });
    }

    for alpha in table_alphas().into_iter().skip(1) {
        out.push(match supplementary_deltas(&p, alpha, config) {
            Ok(d) => CheckRecord::new("supplementary_symmetry", alpha, worst(&d), SYMMETRY_TOL),
            Err(_) => error_record("supplementary_symmetry", alpha),
        });
    }

    for alpha in table_alphas() {
        for omega in [0.5, 2.0, 3.7] {
            let rec = match omega_deltas(&p, alpha, 1.0, omega, config) {
                Ok(d) => {
                    let (ratio, rest): (Vec<_>, Vec<_>) =
                        d.into_iter().partition(|(n, _)| n == "time_ratio");
                    let pass = worst(&rest) <= SCALING_TOL && worst(&ratio) <= TIME_RATIO_TOL;
                    CheckRecord {
                        check: format!("omega_independence_{}", format_sig(omega, 4)),
                        param: alpha,
                        delta: worst(&rest),
                        pass,
                    }
                }
                Err(_) => error_record("omega_independence", alpha),
            };
            out.push(rec);
        }
    }
    out
}

fn worst(deltas: &[(String, f64)]) -> f64 {
    deltas.iter().map(|(_, d)| *d).fold(0.0, f64::max)
}
