//! Dense sampling of an evolution on the Bloch sphere.
//!
//! Each sample stores the propagated amplitudes and the spherical angles of
//! the corresponding Bloch vector. The azimuth is extracted with the
//! two-argument arctangent and then unwrapped by removing `2 pi` jumps between
//! neighbours, so it is a continuous function of time.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::io::Write;

use crate::error::{Error, Result};
use crate::format::format_sig;
use crate::hamiltonian::{
    evolution_time, propagator, suboptimal_field, EvolutionProblem, FieldVector, SubOptimalParams,
};
use crate::qubit::{PureState, POLE_EPS};

/// Smallest accepted sample count (2048 panels).
pub const MIN_SAMPLES: usize = 2049;

/// Default sample count (4096 Simpson panels).
pub const DEFAULT_SAMPLES: usize = 4097;

/// Largest neighbour-to-neighbour azimuth jump tolerated after unwrapping.
pub const MAX_UNWRAPPED_JUMP: f64 = FRAC_PI_2;

/// Header of the CSV trajectory dump.
pub const CSV_HEADER: &str = "t,theta,phi,re_c0,im_c0,re_c1,im_c1";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSample {
    pub t: f64,
    /// Polar angle in `[0, pi]`.
    pub theta: f64,
    /// Unwrapped azimuth.
    pub phi: f64,
}

/// `2 atan(|c1| / |c0|)`; `|c0| = 0` gives `pi`.
pub fn polar_angle(s: &PureState) -> f64 {
    s.polar_angle()
}

/// `arg(c1) - arg(c0)` reduced to `(-pi, pi]`.
pub fn azimuth_raw(s: &PureState) -> f64 {
    s.relative_phase()
}

/// Shifts each value by the multiple of `2 pi` closest to its predecessor.
/// The first value is moved to the branch nearest `anchor`.
pub fn unwrap_azimuth(raw: &[f64], anchor: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(raw.len());
    let Some(&first) = raw.first() else {
        return Ok(out);
    };
    out.push(nearest_branch(first, anchor));
    for (i, &r) in raw.iter().enumerate().skip(1) {
        let prev = out[i - 1];
        let v = nearest_branch(r, prev);
        let jump = (v - prev).abs();
        if jump > MAX_UNWRAPPED_JUMP {
            return Err(Error::UnwrapAmbiguity { index: i, jump });
        }
        out.push(v);
    }
    Ok(out)
}

/// `x + 2 pi k` for the integer `k` that brings it closest to `target`.
fn nearest_branch(x: f64, target: f64) -> f64 {
    x - TAU * ((x - target) / TAU).round()
}

/// A sampled evolution `|psi(t)> = U(t)|A>` on `[t_A, t_B]`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    problem: EvolutionProblem,
    params: SubOptimalParams,
    field: FieldVector,
    source: PureState,
    t_a: f64,
    t_b: f64,
    samples: Vec<AngleSample>,
    states: Vec<PureState>,
}

/// Samples the sub-optimal evolution on a uniform grid over
/// `[0, evolution_time(p, q)]`.
pub fn sample_trajectory(
    p: &EvolutionProblem,
    q: &SubOptimalParams,
    n: usize,
) -> Result<Trajectory> {
    let field = suboptimal_field(p, q)?;
    Trajectory::from_field(p, q, field, evolution_time(p, q), n)
}

impl Trajectory {
    /// Samples the evolution of the problem's source state under `field` on
    /// `[0, duration]`.
    pub fn from_field(
        problem: &EvolutionProblem,
        params: &SubOptimalParams,
        field: FieldVector,
        duration: f64,
        n: usize,
    ) -> Result<Self> {
        if n < MIN_SAMPLES {
            return Err(Error::TooFewSamples {
                got: n,
                min: MIN_SAMPLES,
            });
        }
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::NegativeTime(duration));
        }
        field.direction()?;
        let source = problem.source_state();
        let hbar = problem.hbar();
        let panels = (n - 1) as f64;
        let times: Vec<f64> = (0..n)
            .map(|i| {
                if i == n - 1 {
                    duration
                } else {
                    duration * i as f64 / panels
                }
            })
            .collect();
        let states = times
            .iter()
            .map(|&t| Ok(propagator(&field, t, hbar)?.apply(&source)))
            .collect::<Result<Vec<_>>>()?;

        let thetas: Vec<f64> = states.iter().map(polar_angle).collect();
        let raw = hold_through_poles(&states, &thetas, problem.a_hat().azimuth());
        let phis = unwrap_azimuth(&raw, problem.a_hat().azimuth())?;

        let samples = times
            .iter()
            .zip(thetas)
            .zip(phis)
            .map(|((&t, theta), phi)| AngleSample { t, theta, phi })
            .collect();
        Ok(Self {
            problem: *problem,
            params: *params,
            field,
            source,
            t_a: 0.0,
            t_b: duration,
            samples,
            states,
        })
    }

    pub fn problem(&self) -> &EvolutionProblem {
        &self.problem
    }

    pub fn params(&self) -> &SubOptimalParams {
        &self.params
    }

    pub fn field(&self) -> &FieldVector {
        &self.field
    }

    pub fn t_a(&self) -> f64 {
        self.t_a
    }

    pub fn t_b(&self) -> f64 {
        self.t_b
    }

    pub fn duration(&self) -> f64 {
        self.t_b - self.t_a
    }

    /// Grid spacing.
    pub fn step(&self) -> f64 {
        self.duration() / (self.samples.len() - 1) as f64
    }

    pub fn samples(&self) -> &[AngleSample] {
        &self.samples
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> AngleSample {
        self.samples[0]
    }

    pub fn last(&self) -> AngleSample {
        self.samples[self.samples.len() - 1]
    }

    /// Propagated state at an arbitrary time in `[t_A, t_B]`.
    pub fn state_at(&self, t: f64) -> PureState {
        let u = propagator(&self.field, (t - self.t_a).max(0.0), self.problem.hbar())
            .expect("field validated on construction");
        u.apply(&self.source)
    }

    pub fn theta_at(&self, t: f64) -> f64 {
        polar_angle(&self.state_at(t))
    }

    /// Continuous azimuth at `t`: the raw azimuth moved to the branch of the
    /// linearly interpolated unwrapped samples.
    pub fn phi_at(&self, t: f64) -> f64 {
        let guide = self.interpolated_phi(t);
        let s = self.state_at(t);
        if polar_angle(&s).sin() < POLE_EPS {
            return guide;
        }
        nearest_branch(azimuth_raw(&s), guide)
    }

    /// Index `i` with `t_i <= t <= t_{i+1}`, clamped to the grid.
    pub fn bracket_index(&self, t: f64) -> usize {
        let last = self.samples.len() - 2;
        let x = ((t - self.t_a) / self.step()).floor();
        if x <= 0.0 {
            0
        } else {
            (x as usize).min(last)
        }
    }

    fn interpolated_phi(&self, t: f64) -> f64 {
        let i = self.bracket_index(t);
        let a = self.samples[i];
        let b = self.samples[i + 1];
        let w = ((t - a.t) / (b.t - a.t)).clamp(0.0, 1.0);
        a.phi + w * (b.phi - a.phi)
    }

    /// Writes the `t,theta,phi,re_c0,im_c0,re_c1,im_c1` dump with 12
    /// significant digits and LF line endings.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for (s, psi) in self.samples.iter().zip(&self.states) {
            let fields = [
                s.t, s.theta, s.phi, psi.c0.re, psi.c0.im, psi.c1.re, psi.c1.im,
            ];
            let line: Vec<String> = fields.iter().map(|&x| format_sig(x, 12)).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Raw azimuths with pole samples replaced by the nearest defined neighbour
/// (the previous one, or for a leading run the first defined sample).
fn hold_through_poles(states: &[PureState], thetas: &[f64], anchor: f64) -> Vec<f64> {
    let defined: Vec<Option<f64>> = states
        .iter()
        .zip(thetas)
        .map(|(s, th)| (th.sin() >= POLE_EPS).then(|| azimuth_raw(s)))
        .collect();
    let lead = defined.iter().flatten().next().copied().unwrap_or(anchor);
    let mut held = lead;
    defined
        .into_iter()
        .map(|d| {
            if let Some(v) = d {
                held = v;
            }
            held
        })
        .collect()
}
