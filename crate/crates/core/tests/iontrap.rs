use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symfid::iontrap::{simulate, TrapConfig};

#[test]
fn bound_is_sound_for_random_parameters() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10 {
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let cfg = TrapConfig {
            omega_cm_hz: rng.random_range(50e3..150e3),
            eta_cm: Some(rng.random_range(0.02..0.08)),
            b_hz: rng.random_range(100.0..900.0),
            j_hz: sign * rng.random_range(300.0..800.0),
            n_bar: if rng.random::<bool>() { Some(0.05) } else { None },
            n_max: 8,
            t_points: 25,
            check_convergence: false,
            ..TrapConfig::default()
        };
        for s in simulate(&cfg).unwrap() {
            assert!(s.lower_bound <= s.fidelity_sq + 1e-9, "{cfg:?} t={}", s.t);
            assert!(s.fidelity_sq <= 1.0 + 1e-9 && s.fidelity_sq >= -1e-12);
            let rho = s.rho_ion.as_ref().unwrap();
            assert!((rho.trace() - 1.0).abs() < 1e-9);
            assert!(rho.operator().hermiticity_residual() < 1e-9);
        }
    }
}

#[test]
fn decoupled_ions_stay_polarized() {
    let cfg = TrapConfig {
        eta_cm: Some(0.0),
        eta_br: Some(0.0),
        n_max: 4,
        ..TrapConfig::default()
    };
    let traj = simulate(&cfg).unwrap();
    assert_eq!(traj.len(), 200);
    assert_eq!(traj[0].t, 0.0);
    assert!((traj[199].t - 1.0 / 540.0).abs() < 1e-15);
    assert!(traj.iter().all(|s| (s.observables["sz1_trap"] - 1.0).abs() < 1e-12));
}

#[test]
fn thermal_phonons_lower_fidelity() {
    let base = TrapConfig {
        n_max: 10,
        t_points: 20,
        check_convergence: false,
        ..TrapConfig::default()
    };
    let hot = TrapConfig {
        n_bar: Some(0.3),
        ..base.clone()
    };
    let cold_min = simulate(&base).unwrap().iter().map(|s| s.fidelity_sq).fold(1.0, f64::min);
    let hot_min = simulate(&hot).unwrap().iter().map(|s| s.fidelity_sq).fold(1.0, f64::min);
    assert!(hot_min < cold_min);
}
