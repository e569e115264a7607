//! Stationary sub-optimal qubit evolutions on the Bloch sphere: trajectories,
//! efficiency and curvature metrics, and a volume-based complexity measure.

// `!(x > 0.0)` guards reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complexity;
pub mod error;
pub mod format;
pub mod hamiltonian;
pub mod metrics;
pub mod numerics;
pub mod qubit;
pub mod trajectory;
pub mod verify;

pub use complexity::{
    accessed_volume, accessible_volume, analyze, analyze_trajectory, branch_times, complexity,
    complexity_length_scale, instantaneous_volume, Analysis, AnalysisConfig, AveragingMode,
    ComplexityReport, Degeneracy, SegmentAverage, VolumeReport,
};
pub use error::{Error, Result};
pub use hamiltonian::{
    evolution_time, optimal_field, propagator, suboptimal_field, EvolutionProblem, FieldVector,
    SubOptimalParams,
};
pub use metrics::{
    curvature_coefficient, geodesic_distance, geodesic_efficiency, path_length,
    path_length_numeric, speed_efficiency, CurvatureMetrics, PathMetrics, SpeedMetrics,
};
pub use qubit::{bloch_from_state, state_from_bloch, ComplexScalar, Mat2c, PureState, Vec3};
pub use trajectory::{sample_trajectory, AngleSample, Trajectory};
