#![allow(clippy::approx_constant)]

use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;

use qcomplexity::hamiltonian::canonical_amplitudes;
use qcomplexity::metrics::{
    curvature_coefficient_closed, energy_uncertainty, speed_efficiency_closed,
};
use qcomplexity::qubit::{density_from_bloch, pauli_dot};
use qcomplexity::{
    analyze, bloch_from_state, evolution_time, geodesic_efficiency, path_length, propagator,
    sample_trajectory, state_from_bloch, suboptimal_field, AnalysisConfig, EvolutionProblem,
    SubOptimalParams, Vec3,
};

fn unit_vector() -> impl Strategy<Value = Vec3> {
    (0.0..PI, -PI..PI).prop_map(|(t, p)| Vec3::from_spherical(t, p))
}

fn separation() -> impl Strategy<Value = f64> {
    0.05..(PI - 0.05)
}

fn alpha() -> impl Strategy<Value = f64> {
    0.0..=PI
}

fn q(a: f64) -> SubOptimalParams {
    SubOptimalParams::new(a).unwrap()
}

proptest! {
    #[test]
    fn pauli_eigenvalues_are_plus_minus_norm(x in -3.0..3.0f64, y in -3.0..3.0f64, z in -3.0..3.0f64) {
        let v = Vec3::new(x, y, z);
        let m = pauli_dot(v);
        // traceless, so the characteristic polynomial is l^2 + det
        prop_assert!(m.trace().norm() < 1e-15);
        prop_assert!((m.det().re + v.norm_sq()).abs() < 1e-12);
        prop_assert!(m.det().im.abs() < 1e-12);
        prop_assert!(m.hermiticity_defect() < 1e-15);
    }

    #[test]
    fn bloch_round_trip(v in unit_vector()) {
        let s = state_from_bloch(v).unwrap();
        prop_assert!((s.norm_sq() - 1.0).abs() < 1e-12);
        let back = bloch_from_state(&s);
        prop_assert!((back - v).norm() < 1e-12);
    }

    #[test]
    fn density_is_pure(v in unit_vector()) {
        let rho = density_from_bloch(v).unwrap();
        let purity = (rho * rho).trace();
        prop_assert!((purity.re - 1.0).abs() < 1e-12);
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn field_norm_is_energy(theta in separation(), a in alpha(), e in 0.1..5.0f64) {
        let p = EvolutionProblem::in_equatorial_plane(theta, e, 1.0).unwrap();
        let f = suboptimal_field(&p, &q(a)).unwrap();
        prop_assert!((f.magnitude() - e).abs() < 1e-12 * e);
    }

    #[test]
    fn propagator_is_unitary_semigroup(a in alpha(), t1 in 0.0..3.0f64, t2 in 0.0..3.0f64) {
        let p = EvolutionProblem::canonical(1.3).unwrap();
        let f = suboptimal_field(&p, &q(a)).unwrap();
        let u1 = propagator(&f, t1, 1.0).unwrap();
        let u2 = propagator(&f, t2, 1.0).unwrap();
        let u12 = propagator(&f, t1 + t2, 1.0).unwrap();
        prop_assert!(u1.unitarity_defect() < 1e-12);
        prop_assert!((u2 * u1).max_abs_diff(&u12) < 1e-12);
        prop_assert!((u1.det().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn arrival_at_target(theta in separation(), a in alpha(), omega in 0.2..4.0f64) {
        let p = EvolutionProblem::in_equatorial_plane(theta, omega, 1.0).unwrap();
        let f = suboptimal_field(&p, &q(a)).unwrap();
        let t = evolution_time(&p, &q(a));
        let psi = propagator(&f, t, 1.0).unwrap().apply(&p.source_state());
        prop_assert!((psi.fidelity(&p.target_state()) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn canonical_amplitudes_stay_normalized(a in alpha(), omega in 0.1..5.0f64, t in 0.0..4.0f64) {
        let s = canonical_amplitudes(a, omega, t);
        prop_assert!((s.norm_sq() - 1.0).abs() < 1e-12);
        let p = EvolutionProblem::canonical(omega).unwrap();
        let closed = propagator(&suboptimal_field(&p, &q(a)).unwrap(), t, 1.0)
            .unwrap()
            .apply(&p.source_state());
        prop_assert!((closed.c0 - s.c0).norm() < 1e-12);
        prop_assert!((closed.c1 - s.c1).norm() < 1e-12);
    }

    #[test]
    fn path_never_shorter_than_geodesic(theta in separation(), a in alpha()) {
        let p = EvolutionProblem::in_equatorial_plane(theta, 1.0, 1.0).unwrap();
        prop_assert!(path_length(&p, &q(a)) >= theta - 1e-12);
        let ge = geodesic_efficiency(&p, &q(a));
        prop_assert!(ge > 0.0 && ge <= 1.0 + 1e-12);
        let se = speed_efficiency_closed(theta, a);
        prop_assert!(se > 0.0 && se <= 1.0 + 1e-12);
        prop_assert!(curvature_coefficient_closed(theta, a) >= 0.0);
    }

    #[test]
    fn fubini_study_speed_is_twice_uncertainty(a in alpha(), t in 0.05..1.0f64) {
        // |dr/dt| on the Bloch sphere equals 2 Delta E / hbar
        let p = EvolutionProblem::canonical(1.0).unwrap();
        let f = suboptimal_field(&p, &q(a)).unwrap();
        let h = 1e-5;
        let r = |t: f64| bloch_from_state(&propagator(&f, t, 1.0).unwrap().apply(&p.source_state()));
        let v = (r(t + h) - r(t - h)).scale(0.5 / h);
        let speed = v.norm();
        prop_assert!((speed - 2.0 * energy_uncertainty(&f, r(t))).abs() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn supplementary_angles_mirror_theta(a in 0.0..FRAC_PI_2) {
        let p = EvolutionProblem::canonical(1.0).unwrap();
        let ta = sample_trajectory(&p, &q(a), 2049).unwrap();
        let tb = sample_trajectory(&p, &q(PI - a), 2049).unwrap();
        for (x, y) in ta.samples().iter().zip(tb.samples()) {
            prop_assert!((x.t - y.t).abs() < 1e-14);
            prop_assert!((x.theta + y.theta - PI).abs() < 1e-8);
            prop_assert!((x.phi - y.phi).abs() < 1e-8);
        }
    }

    #[test]
    fn complexity_bounds(a in alpha()) {
        let p = EvolutionProblem::canonical(1.0).unwrap();
        let r = analyze(&p, &q(a), &AnalysisConfig::default()).unwrap();
        prop_assert!(r.report.complexity >= 0.0 && r.report.complexity < 1.0);
        prop_assert!(r.report.l_c >= r.report.s);
        prop_assert!(r.volume.v_bar > 0.0 && r.volume.v_bar <= r.volume.v_max);
        let bbox = r.volume.bbox();
        let traj = sample_trajectory(&p, &q(a), 4097).unwrap();
        for s in traj.samples() {
            prop_assert!(bbox.contains(s.theta, s.phi, 1e-12));
        }
    }
}

#[test]
fn efficiencies_and_curvature_are_monotone() {
    let p = EvolutionProblem::canonical(1.0).unwrap();
    let n = 64;
    let mut prev: Option<(f64, f64, f64)> = None;
    for i in 0..n {
        let a = FRAC_PI_2 * i as f64 / (n - 1) as f64;
        let cur = (
            geodesic_efficiency(&p, &q(a)),
            speed_efficiency_closed(p.theta_ab(), a),
            curvature_coefficient_closed(p.theta_ab(), a),
        );
        if let Some(prev) = prev {
            assert!(cur.0 > prev.0, "eta_ge at {a}");
            assert!(cur.1 > prev.1, "eta_se at {a}");
            assert!(cur.2 < prev.2, "kappa2 at {a}");
        }
        prev = Some(cur);
    }
}
