//! Exact 2x2 complex linear algebra for a single qubit.
//!
//! Everything here works on small `Copy` value types: [`Vec3`] for Bloch and
//! field vectors, [`PureState`] for amplitude pairs in the computational basis
//! and [`Mat2c`] for operators. The Pauli matrices are
//!
//! ```text
//! sx = [[0, 1], [1, 0]]   sy = [[0, -i], [i, 0]]   sz = [[1, 0], [0, -1]]
//! ```

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type ComplexScalar = Complex64;

/// Tolerance on `|c0|^2 + |c1|^2 = 1` and on unit Bloch vectors.
pub const NORM_TOL: f64 = 1e-12;

/// Below this value of `sin(theta)` a state sits on a pole and its azimuth is
/// conventionally zero.
pub const POLE_EPS: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Cartesian three-vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Unit vector with polar angle `theta` and azimuth `phi`.
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::new(st * cp, st * sp, ct)
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(self, k: f64) -> Vec3 {
        Vec3::new(k * self.x, k * self.y, k * self.z)
    }

    /// Returns `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Checks `|v| = 1` within [`NORM_TOL`].
    pub fn ensure_unit(self) -> Result<Vec3> {
        let norm = self.norm();
        if !self.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NonUnitVector { norm });
        }
        Ok(self)
    }

    /// Polar angle in `[0, pi]` of the direction of `self`.
    pub fn polar_angle(self) -> f64 {
        let rho = self.x.hypot(self.y);
        rho.atan2(self.z)
    }

    /// Azimuth in `(-pi, pi]`; zero on the poles.
    pub fn azimuth(self) -> f64 {
        let rho = self.x.hypot(self.y);
        if rho < POLE_EPS * self.norm().max(f64::MIN_POSITIVE) {
            0.0
        } else {
            self.y.atan2(self.x)
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        self.scale(-1.0)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v.scale(self)
    }
}

/// Pure qubit state `c0|0> + c1|1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    pub c0: Complex64,
    pub c1: Complex64,
}

impl PureState {
    /// Checked constructor; rejects pairs whose norm deviates from one by more
    /// than [`NORM_TOL`].
    pub fn new(c0: Complex64, c1: Complex64) -> Result<Self> {
        let s = Self { c0, c1 };
        let norm_sq = s.norm_sq();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NonNormalizedState { norm_sq });
        }
        Ok(s)
    }

    /// Builds a state without checking normalization.
    pub const fn from_amplitudes(c0: Complex64, c1: Complex64) -> Self {
        Self { c0, c1 }
    }

    pub const fn zero() -> Self {
        Self { c0: ONE, c1: ZERO }
    }

    pub const fn one() -> Self {
        Self { c0: ZERO, c1: ONE }
    }

    /// `(|0> + |1>)/sqrt(2)`, Bloch vector +x.
    pub const fn plus() -> Self {
        Self {
            c0: Complex64::new(FRAC_1_SQRT_2, 0.0),
            c1: Complex64::new(FRAC_1_SQRT_2, 0.0),
        }
    }

    /// `(|0> + i|1>)/sqrt(2)`, Bloch vector +y.
    pub const fn plus_i() -> Self {
        Self {
            c0: Complex64::new(FRAC_1_SQRT_2, 0.0),
            c1: Complex64::new(0.0, FRAC_1_SQRT_2),
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.c0.norm_sqr() + self.c1.norm_sqr()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_sq().sqrt();
        Self {
            c0: self.c0 / n,
            c1: self.c1 / n,
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.c0.conj() * other.c0 + self.c1.conj() * other.c1
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Representative of the ray with `c0` real and nonnegative.
    pub fn phase_reduced(&self) -> Self {
        let r = self.c0.norm();
        if r == 0.0 {
            let r1 = self.c1.norm();
            return Self {
                c0: ZERO,
                c1: Complex64::new(r1, 0.0),
            };
        }
        let phase = self.c0.conj() / r;
        Self {
            c0: Complex64::new(r, 0.0),
            c1: self.c1 * phase,
        }
    }

    /// Polar angle `2 atan(|c1|/|c0|)` in `[0, pi]`.
    pub fn polar_angle(&self) -> f64 {
        2.0 * self.c1.norm().atan2(self.c0.norm())
    }

    /// Relative phase `arg(c1) - arg(c0)` reduced to `(-pi, pi]`; zero on the
    /// poles.
    pub fn relative_phase(&self) -> f64 {
        if self.polar_angle().sin() < POLE_EPS {
            return 0.0;
        }
        wrap_angle(self.c1.arg() - self.c0.arg())
    }
}

/// Reduces an angle to `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut r = x.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}

/// Row-major complex 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2c(pub [[Complex64; 2]; 2]);

impl Mat2c {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self([[a, b], [c, d]])
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zeros() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn sigma_x() -> Self {
        Self::new(ZERO, ONE, ONE, ZERO)
    }

    pub const fn sigma_y() -> Self {
        Self::new(ZERO, Complex64::new(0.0, -1.0), I, ZERO)
    }

    pub const fn sigma_z() -> Self {
        Self::new(ONE, ZERO, ZERO, Complex64::new(-1.0, 0.0))
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self::new(
            m[0][0].conj(),
            m[1][0].conj(),
            m[0][1].conj(),
            m[1][1].conj(),
        )
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let m = &self.0;
        Self::new(k * m[0][0], k * m[0][1], k * m[1][0], k * m[1][1])
    }

    pub fn apply(&self, s: &PureState) -> PureState {
        let m = &self.0;
        PureState::from_amplitudes(
            m[0][0] * s.c0 + m[0][1] * s.c1,
            m[1][0] * s.c0 + m[1][1] * s.c1,
        )
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2c) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }

    /// Entrywise deviation of `U^dagger U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Mat2c::identity())
    }

    /// Entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }
}

impl Mul for Mat2c {
    type Output = Mat2c;
    fn mul(self, o: Mat2c) -> Mat2c {
        let a = &self.0;
        let b = &o.0;
        Mat2c::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Add for Mat2c {
    type Output = Mat2c;
    fn add(self, o: Mat2c) -> Mat2c {
        let a = &self.0;
        let b = &o.0;
        Mat2c::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for Mat2c {
    type Output = Mat2c;
    fn sub(self, o: Mat2c) -> Mat2c {
        self + o.scale(Complex64::new(-1.0, 0.0))
    }
}

/// `v.sigma = vx sx + vy sy + vz sz`.
pub fn pauli_dot(v: Vec3) -> Mat2c {
    Mat2c::new(
        Complex64::new(v.z, 0.0),
        Complex64::new(v.x, -v.y),
        Complex64::new(v.x, v.y),
        Complex64::new(-v.z, 0.0),
    )
}

/// Bloch vector of a pure state.
pub fn bloch_from_state(s: &PureState) -> Vec3 {
    let r = s.phase_reduced();
    let theta = r.polar_angle();
    let phi = r.relative_phase();
    Vec3::from_spherical(theta, phi)
}

/// `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>` for the direction of `v`.
pub fn state_from_bloch(v: Vec3) -> Result<PureState> {
    let v = v.ensure_unit()?;
    let theta = v.polar_angle();
    let phi = v.azimuth();
    let (s, c) = (theta / 2.0).sin_cos();
    Ok(PureState::from_amplitudes(
        Complex64::new(c, 0.0),
        Complex64::from_polar(s, phi),
    ))
}

/// `rho = (1 + v.sigma)/2` for a unit Bloch vector.
pub fn density_from_bloch(v: Vec3) -> Result<Mat2c> {
    let v = v.ensure_unit()?;
    Ok((Mat2c::identity() + pauli_dot(v)).scale(Complex64::new(0.5, 0.0)))
}
