use thiserror::Error;

/// Errors raised by the evolution, geometry and complexity routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector is not unit length (norm {norm})")]
    NonUnitVector { norm: f64 },

    #[error("state is not normalized (|c0|^2 + |c1|^2 = {norm_sq})")]
    NonNormalizedState { norm_sq: f64 },

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("energy scale must be positive (got {0})")]
    InvalidEnergy(f64),

    #[error("hbar must be positive (got {0})")]
    InvalidHbar(f64),

    #[error("supplied separation {given} disagrees with arccos(a.b) = {computed}")]
    InconsistentSeparation { given: f64, computed: f64 },

    #[error("degenerate geometry: sin(theta_AB) = {sin_theta} leaves the rotation axis undefined")]
    DegenerateGeometry { sin_theta: f64 },

    #[error("sub-optimal angle alpha = {0} outside [0, pi]")]
    InvalidAlpha(f64),

    #[error("field vector is zero")]
    ZeroField,

    #[error("field is parallel to the Bloch vector (h_perp^2 = {h_perp_sq})")]
    ParallelField { h_perp_sq: f64 },

    #[error("negative evolution time {0}")]
    NegativeTime(f64),

    #[error("trajectory needs at least {min} samples (got {got})")]
    TooFewSamples { got: usize, min: usize },

    #[error("azimuth unwrap ambiguous at sample {index}: residual jump {jump} rad")]
    UnwrapAmbiguity { index: usize, jump: f64 },

    #[error("volumes must satisfy 0 < v_bar <= v_max (v_bar = {v_bar}, v_max = {v_max})")]
    NonPositiveVolume { v_bar: f64, v_max: f64 },

    #[error("complexity {0} outside [0, 1)")]
    ComplexityOutOfRange(f64),

    #[error("path length must be positive (got {0})")]
    NonPositiveLength(f64),

    #[error("quadrature did not converge: step doubling changed the average by {delta}")]
    QuadratureUnconverged { delta: f64 },

    #[error("integrator step {dt} too coarse for horizon {horizon}")]
    InvalidStep { dt: f64, horizon: f64 },

    #[error("integrator norm drift {drift} exceeds {limit}")]
    NormDrift { drift: f64, limit: f64 },

    #[error("supplementary-angle symmetry violated: {}", format_deltas(.deltas))]
    SymmetryViolation { deltas: Vec<(String, f64)> },

    #[error("omega scaling violated: {}", format_deltas(.deltas))]
    ScalingViolation { deltas: Vec<(String, f64)> },
}

fn format_deltas(deltas: &[(String, f64)]) -> String {
    deltas
        .iter()
        .map(|(name, d)| format!("{name}={d:e}"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;
