//! Stationary qubit Hamiltonians `H = h.sigma` connecting two Bloch vectors.
//!
//! The time-optimal field points along `a x b`; the sub-optimal family tilts
//! it towards the bisector `a + b` by an angle `pi/2 - alpha`. Both keep
//! `|h| = E`, so the family is parametrized by `alpha` alone and
//! `alpha = pi/2` recovers the optimal field.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qubit::{pauli_dot, state_from_bloch, Mat2c, PureState, Vec3};

/// `sin(theta_AB)` below this leaves `a x b` without a direction.
pub const DEGENERACY_EPS: f64 = 1e-12;

/// Tolerance when a caller supplies `theta_AB` alongside the vectors.
pub const SEPARATION_TOL: f64 = 1e-9;

/// Source and target Bloch vectors together with the energy scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionProblem {
    a_hat: Vec3,
    b_hat: Vec3,
    theta_ab: f64,
    energy: f64,
    hbar: f64,
}

impl EvolutionProblem {
    /// Validates unit vectors and a positive energy; `theta_AB` is computed
    /// from `a.b`.
    pub fn new(a_hat: Vec3, b_hat: Vec3, energy: f64, hbar: f64) -> Result<Self> {
        let a_hat = a_hat.ensure_unit()?;
        let b_hat = b_hat.ensure_unit()?;
        if !(energy.is_finite() && energy > 0.0) {
            return Err(Error::InvalidEnergy(energy));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidHbar(hbar));
        }
        let theta_ab = separation(a_hat, b_hat);
        Ok(Self {
            a_hat,
            b_hat,
            theta_ab,
            energy,
            hbar,
        })
    }

    /// Like [`EvolutionProblem::new`] but also checks a caller-supplied
    /// separation angle against `arccos(a.b)`.
    pub fn with_separation(
        a_hat: Vec3,
        b_hat: Vec3,
        theta_ab: f64,
        energy: f64,
        hbar: f64,
    ) -> Result<Self> {
        let p = Self::new(a_hat, b_hat, energy, hbar)?;
        if !((theta_ab - p.theta_ab).abs() <= SEPARATION_TOL) {
            return Err(Error::InconsistentSeparation {
                given: theta_ab,
                computed: p.theta_ab,
            });
        }
        Ok(p)
    }

    /// `a = x`, `b = y` with `hbar = 1` and `E = omega`.
    pub fn canonical(omega: f64) -> Result<Self> {
        Self::new(Vec3::X, Vec3::Y, omega, 1.0)
    }

    /// `a = x` and `b` in the xy-plane at angle `theta_ab` from it.
    pub fn in_equatorial_plane(theta_ab: f64, energy: f64, hbar: f64) -> Result<Self> {
        let (s, c) = theta_ab.sin_cos();
        Self::with_separation(Vec3::X, Vec3::new(c, s, 0.0), theta_ab, energy, hbar)
    }

    pub fn a_hat(&self) -> Vec3 {
        self.a_hat
    }

    pub fn b_hat(&self) -> Vec3 {
        self.b_hat
    }

    pub fn theta_ab(&self) -> f64 {
        self.theta_ab
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `omega = E / hbar`.
    pub fn omega(&self) -> f64 {
        self.energy / self.hbar
    }

    /// Same geometry with a different energy scale.
    pub fn with_energy(&self, energy: f64) -> Result<Self> {
        Self::new(self.a_hat, self.b_hat, energy, self.hbar)
    }

    pub fn source_state(&self) -> PureState {
        state_from_bloch(self.a_hat).expect("validated unit vector")
    }

    pub fn target_state(&self) -> PureState {
        state_from_bloch(self.b_hat).expect("validated unit vector")
    }

    fn ensure_nondegenerate(&self) -> Result<()> {
        let sin_theta = self.theta_ab.sin();
        if sin_theta < DEGENERACY_EPS {
            return Err(Error::DegenerateGeometry { sin_theta });
        }
        Ok(())
    }
}

fn separation(a: Vec3, b: Vec3) -> f64 {
    // atan2 form stays accurate near 0 and pi where acos loses digits
    a.cross(b).norm().atan2(a.dot(b))
}

/// Tilt angle of the sub-optimal field, `0 <= alpha <= pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubOptimalParams {
    alpha: f64,
}

impl SubOptimalParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && (0.0..=PI).contains(&alpha)) {
            return Err(Error::InvalidAlpha(alpha));
        }
        Ok(Self { alpha })
    }

    /// `alpha = pi/2`, which reproduces the optimal field.
    pub fn optimal() -> Self {
        Self { alpha: PI / 2.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `pi - alpha`.
    pub fn supplementary(&self) -> Self {
        Self {
            alpha: PI - self.alpha,
        }
    }
}

/// Field vector `h` (energy units) of `H = h.sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldVector {
    pub h: Vec3,
}

impl FieldVector {
    pub fn new(h: Vec3) -> Result<Self> {
        if !h.is_finite() {
            return Err(Error::NonFinite("field vector"));
        }
        Ok(Self { h })
    }

    pub fn magnitude(&self) -> f64 {
        self.h.norm()
    }

    pub fn direction(&self) -> Result<Vec3> {
        self.h.normalized().ok_or(Error::ZeroField)
    }

    /// `h_par = (h.r) r` for a unit vector `r`.
    pub fn parallel_to(&self, r: Vec3) -> Vec3 {
        r.scale(self.h.dot(r))
    }

    /// `h_perp = h - (h.r) r`.
    pub fn perpendicular_to(&self, r: Vec3) -> Vec3 {
        self.h - self.parallel_to(r)
    }

    pub fn hamiltonian(&self) -> Mat2c {
        pauli_dot(self.h)
    }
}

/// `E (a x b) / sin(theta_AB)`.
pub fn optimal_field(p: &EvolutionProblem) -> Result<FieldVector> {
    p.ensure_nondegenerate()?;
    let axis = p.a_hat.cross(p.b_hat).scale(1.0 / p.theta_ab.sin());
    FieldVector::new(axis.scale(p.energy))
}

/// `E [cos(alpha) (a+b)/(2 cos(theta_AB/2)) + sin(alpha) (a x b)/sin(theta_AB)]`.
pub fn suboptimal_field(p: &EvolutionProblem, q: &SubOptimalParams) -> Result<FieldVector> {
    p.ensure_nondegenerate()?;
    let bisector = (p.a_hat + p.b_hat).scale(1.0 / (2.0 * (p.theta_ab / 2.0).cos()));
    let normal = p.a_hat.cross(p.b_hat).scale(1.0 / p.theta_ab.sin());
    let (sa, ca) = q.alpha.sin_cos();
    FieldVector::new((bisector.scale(ca) + normal.scale(sa)).scale(p.energy))
}

/// `U(t) = cos(|h|t/hbar) 1 - i sin(|h|t/hbar) (h_hat.sigma)`.
pub fn propagator(f: &FieldVector, t: f64, hbar: f64) -> Result<Mat2c> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let dir = f.direction()?;
    let angle = f.magnitude() * t / hbar;
    let (s, c) = angle.sin_cos();
    Ok(Mat2c::identity().scale(Complex64::new(c, 0.0))
        + pauli_dot(dir).scale(Complex64::new(0.0, -s)))
}

/// Shared factor `sqrt(1 - cos^2(alpha) cos^2(theta_AB/2))`, which is also
/// the speed efficiency of the sub-optimal field.
pub(crate) fn perpendicular_fraction(alpha: f64, theta_ab: f64) -> f64 {
    let k = alpha.cos() * (theta_ab / 2.0).cos();
    (1.0 - k * k).sqrt()
}

/// Rotation angle `omega t_AB` needed to reach the target.
pub(crate) fn rotation_angle(alpha: f64, theta_ab: f64) -> f64 {
    let arg = alpha.sin() * (theta_ab / 2.0).cos() / perpendicular_fraction(alpha, theta_ab);
    arg.clamp(-1.0, 1.0).acos()
}

/// Time for the sub-optimal field to carry the source onto the target,
/// `(hbar/E) arccos[sin(alpha) cos(theta_AB/2) / sqrt(1 - cos^2(alpha) cos^2(theta_AB/2))]`.
pub fn evolution_time(p: &EvolutionProblem, q: &SubOptimalParams) -> f64 {
    rotation_angle(q.alpha, p.theta_ab) / p.omega()
}

/// `U(t)|A>` for the sub-optimal field.
pub fn amplitudes(p: &EvolutionProblem, q: &SubOptimalParams, t: f64) -> Result<PureState> {
    let f = suboptimal_field(p, q)?;
    Ok(propagator(&f, t, p.hbar)?.apply(&p.source_state()))
}

/// Closed-form amplitudes for `a = x`, `b = y`.
pub fn canonical_amplitudes(alpha: f64, omega: f64, t: f64) -> PureState {
    let (s, c) = (omega * t).sin_cos();
    let (sa, ca) = alpha.sin_cos();
    let r = FRAC_1_SQRT_2;
    PureState::from_amplitudes(
        Complex64::new(c * r - ca * s / 2.0, -ca * s / 2.0 - sa * s * r),
        Complex64::new(c * r + ca * s / 2.0, -ca * s / 2.0 + sa * s * r),
    )
}

/// Closed-form sub-optimal propagator for `a = x`, `b = y`.
pub fn canonical_propagator(alpha: f64, omega: f64, t: f64) -> Mat2c {
    let (s, c) = (omega * t).sin_cos();
    let (sa, ca) = alpha.sin_cos();
    let k = ca * FRAC_1_SQRT_2 * s;
    Mat2c::new(
        Complex64::new(c, -sa * s),
        Complex64::new(-k, -k),
        Complex64::new(k, -k),
        Complex64::new(c, sa * s),
    )
}
