//! Geodesic efficiency, speed efficiency and curvature of stationary
//! evolutions.

use crate::error::{Error, Result};
use crate::hamiltonian::{
    perpendicular_fraction, rotation_angle, EvolutionProblem, FieldVector, SubOptimalParams,
};
use crate::numerics::simpson_samples;
use crate::qubit::{bloch_from_state, Vec3};
use crate::trajectory::Trajectory;

/// `h_perp^2` below `PARALLEL_EPS |h|^2` makes the curvature coefficient
/// undefined.
pub const PARALLEL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathMetrics {
    /// Path length actually travelled.
    pub s: f64,
    /// Geodesic distance between source and target.
    pub s0: f64,
    pub eta_ge: f64,
}

impl PathMetrics {
    pub fn new(s: f64, s0: f64) -> Self {
        Self {
            s,
            s0,
            eta_ge: s0 / s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedMetrics {
    pub delta_e: f64,
    pub spectral_norm: f64,
    pub eta_se: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureMetrics {
    pub h_par_sq: f64,
    pub h_perp_sq: f64,
    pub kappa2: f64,
}

/// `s0 = 2 arccos |<A|B>|`, which equals `theta_AB`.
pub fn geodesic_distance(p: &EvolutionProblem) -> f64 {
    let overlap = p.source_state().inner(&p.target_state()).norm().min(1.0);
    2.0 * overlap.acos()
}

/// Closed-form length of the sub-optimal path,
/// `2 sqrt(1 - cos^2(alpha) cos^2(theta_AB/2)) * omega t_AB`.
pub fn path_length(p: &EvolutionProblem, q: &SubOptimalParams) -> f64 {
    let theta = p.theta_ab();
    2.0 * perpendicular_fraction(q.alpha(), theta) * rotation_angle(q.alpha(), theta)
}

/// `Delta E = sqrt(h^2 - (r.h)^2)` for the pure state with Bloch vector `r`.
pub fn energy_uncertainty(f: &FieldVector, r: Vec3) -> f64 {
    let along = f.h.dot(r);
    (f.h.norm_sq() - along * along).max(0.0).sqrt()
}

/// Quadrature of `2 Delta E(t) / hbar` over the trajectory grid.
pub fn path_length_numeric(traj: &Trajectory, f: &FieldVector) -> f64 {
    let hbar = traj.problem().hbar();
    let speeds: Vec<f64> = traj
        .states()
        .iter()
        .map(|s| 2.0 * energy_uncertainty(f, bloch_from_state(s)) / hbar)
        .collect();
    if speeds.len() % 2 == 1 {
        simpson_samples(&speeds, traj.step())
    } else {
        // trapezoid on the last panel keeps even sample counts usable
        let n = speeds.len();
        simpson_samples(&speeds[..n - 1], traj.step())
            + 0.5 * traj.step() * (speeds[n - 2] + speeds[n - 1])
    }
}

/// Closed-form geodesic efficiency `theta_AB / s(alpha)`.
pub fn geodesic_efficiency(p: &EvolutionProblem, q: &SubOptimalParams) -> f64 {
    p.theta_ab() / path_length(p, q)
}

/// Speed efficiency `sqrt(h_perp^2) / |h|` relative to `a_hat`.
pub fn speed_efficiency(f: &FieldVector, a_hat: Vec3) -> Result<f64> {
    Ok(speed_metrics(f, a_hat)?.eta_se)
}

pub fn speed_metrics(f: &FieldVector, a_hat: Vec3) -> Result<SpeedMetrics> {
    let dir = f.direction()?;
    let c = dir.dot(a_hat);
    let spectral_norm = f.magnitude();
    Ok(SpeedMetrics {
        delta_e: energy_uncertainty(f, a_hat),
        spectral_norm,
        eta_se: (1.0 - c * c).max(0.0).sqrt(),
    })
}

/// Closed-form speed efficiency of the sub-optimal family.
pub fn speed_efficiency_closed(theta_ab: f64, alpha: f64) -> f64 {
    perpendicular_fraction(alpha, theta_ab)
}

/// `kappa^2 = 4 (a.h)^2 / (h^2 - (a.h)^2)`.
pub fn curvature_coefficient(f: &FieldVector, a_hat: Vec3) -> Result<f64> {
    Ok(curvature_metrics(f, a_hat)?.kappa2)
}

pub fn curvature_metrics(f: &FieldVector, a_hat: Vec3) -> Result<CurvatureMetrics> {
    let h_par_sq = f.parallel_to(a_hat).norm_sq();
    let h_perp_sq = f.perpendicular_to(a_hat).norm_sq();
    if h_perp_sq < PARALLEL_EPS * f.h.norm_sq() || f.h.norm_sq() == 0.0 {
        return Err(Error::ParallelField { h_perp_sq });
    }
    Ok(CurvatureMetrics {
        h_par_sq,
        h_perp_sq,
        kappa2: 4.0 * h_par_sq / h_perp_sq,
    })
}

/// Closed-form curvature coefficient of the sub-optimal family.
pub fn curvature_coefficient_closed(theta_ab: f64, alpha: f64) -> f64 {
    let k = alpha.cos() * (theta_ab / 2.0).cos();
    4.0 * k * k / (1.0 - k * k)
}
