mod common;

use std::f64::consts::PI;

use common::{driven, rel, undriven};
use ncosc_core::infotheory::{bbm_bound, closed_forms, info_from_state, InfoReport};
use ncosc_core::wavefunctions::{default_grid, DynamicsSettings, Evolution, QuantumState};
use ncosc_core::{Dim, GridSpec};

fn max_rel(a: &InfoReport, b: &InfoReport) -> f64 {
    a.scalars().iter().zip(b.scalars()).map(|(x, y)| rel(*x, y)).fold(0.0, f64::max)
}

fn ground(cfg: &ncosc_core::OscillatorConfig, space: &ncosc_core::NcSpace, t_end: f64, start: Vec<(f64, f64)>) -> QuantumState {
    let settings = DynamicsSettings::until(t_end).with_start(start);
    QuantumState::ground(Evolution::solve(cfg, space, &settings).unwrap())
}

#[test]
fn quadrature_matches_closed_forms_on_the_grid() {
    for dim in [Dim::Two, Dim::Three] {
        for theta in [0.0, 0.5, 1.0] {
            for eta in [0.0, 0.5, 1.0] {
                let (cfg, space) = driven(theta, eta, dim);
                let q = info_from_state(&ground(&cfg, &space, 2.0, vec![]), 1.5, &default_grid(dim)).unwrap();
                let err = max_rel(&q, &closed_forms(&cfg, &space));
                assert!(err < 1e-6, "{dim:?} θ={theta} η={eta}: {err:e}");
            }
        }
    }
}

#[test]
fn commutative_limit_quadrature() {
    let (cfg, space) = undriven(0.0, 0.0, Dim::Two);
    let q = info_from_state(&ground(&cfg, &space, 1.0, vec![]), 0.5, &GridSpec::default()).unwrap();
    assert!(rel(q.f_r.total, 4.0) < 1e-8 && rel(q.f_p.total, 4.0) < 1e-8);
    assert!(rel(q.s_r_nc, 1.0 + PI.ln()) < 1e-8);
    assert!((q.cramer_rao_r - 4.0).abs() < 1e-8 && (q.cramer_rao_p - 4.0).abs() < 1e-8);
}

#[test]
fn theta_one_quadrature_values() {
    let (cfg, space) = undriven(1.0, 0.0, Dim::Two);
    let q = info_from_state(&ground(&cfg, &space, 1.0, vec![]), 0.5, &GridSpec::default()).unwrap();
    assert!((q.f_r.total - 3.577709).abs() < 1e-6);
    assert!((q.f_p.total - 4.472136).abs() < 1e-6);
    assert!((q.s_r_nc - 2.256301).abs() < 1e-6);
}

#[test]
fn reports_are_gauge_invariant() {
    for dim in [Dim::Two, Dim::Three] {
        let (cfg, space) = driven(0.7, 0.4, dim);
        let a = info_from_state(&ground(&cfg, &space, 2.0, vec![]), 1.2, &default_grid(dim)).unwrap();
        let shifted = vec![(0.6, -0.3), (-0.2, 0.9), (0.4, 0.4)];
        let b = info_from_state(&ground(&cfg, &space, 2.0, shifted), 1.2, &default_grid(dim)).unwrap();
        let diff = a.scalars().iter().zip(b.scalars()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-10, "{dim:?}: {diff:e}");
    }
}

#[test]
fn reports_are_time_independent() {
    let (cfg, space) = driven(1.0, 0.5, Dim::Two);
    let state = ground(&cfg, &space, 4.0, vec![]);
    let a = info_from_state(&state, 0.0, &GridSpec::default()).unwrap();
    let b = info_from_state(&state, 3.7, &GridSpec::default()).unwrap();
    let diff = a.scalars().iter().zip(b.scalars()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(diff < 1e-8, "{diff:e}");
}

#[test]
fn excited_states_satisfy_the_entropic_inequality() {
    let (cfg, space) = driven(0.5, 1.0, Dim::Two);
    let ev = Evolution::from_rest(&cfg, &space, 1.0).unwrap();
    for n in [vec![1, 0], vec![2, 1], vec![3, 3]] {
        let state = QuantumState::new(ev.clone(), n.clone()).unwrap();
        let r = info_from_state(&state, 0.8, &GridSpec::default()).unwrap();
        assert!(r.bbm_sum > bbm_bound(2, 1.0) + 1e-3, "{n:?}: {}", r.bbm_sum);
        assert!(r.cramer_rao_r >= 4.0 - 1e-6 && r.cramer_rao_p >= 4.0 - 1e-6);
    }
}
