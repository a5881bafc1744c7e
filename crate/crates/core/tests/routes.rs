use dissres_core::barrier::{green_assembled, region_ii_propagator, region_ii_propagator_modes, transfer_matrix_w};
use dissres_core::traversal::amplitude_w_d_factorized;
use dissres_core::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn ep(x: f64) -> EnergyPoint {
    EnergyPoint::new(x).unwrap()
}
fn bs(x: f64) -> BarrierSpec {
    BarrierSpec::new(x).unwrap()
}
fn kern(g: f64) -> DampingKernel {
    DampingKernel::new(DissipationSpec::new(g, 100.0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn green_composition_matches_amplitude(eps in 0.05f64..5.0, d in 0.5f64..10.0, x0 in -5.0f64..0.0, dx in 0.0f64..5.0) {
        let (e, b) = (ep(eps), bs(d));
        let xt = d + dx;
        let k = eps.sqrt();
        let g0 = Complex64::new(0.0, 0.5 / k) * Complex64::new(0.0, k * (xt - x0)).exp();
        let w = amplitude_w(e, b).value();
        match green_assembled(e, b, x0, xt) {
            Ok(g) => prop_assert!((g - w * g0).norm() <= 1e-8 * g.norm()),
            Err(Error::Pole(_)) => {}
            Err(other) => prop_assert!(false, "{other}"),
        }
    }

    #[test]
    fn propagator_images_match_modes(x in 0.1f64..0.9, xp in 0.1f64..0.9, t in 0.05f64..2.0) {
        let b = bs(1.0);
        let t = Complex64::new(t, -0.3);
        let a = region_ii_propagator(b, x, xp, t).unwrap();
        let m = region_ii_propagator_modes(b, x, xp, t).unwrap();
        prop_assert!((a - m).norm() <= 1e-8 * a.norm().max(1e-3));
    }
}

#[test]
fn three_amplitude_routes_agree() {
    let b = bs(5.0);
    for eps in [0.4, 1.2, 2.0, 3.3] {
        let w = amplitude_w(ep(eps), b).value();
        assert!((transfer_matrix_w(ep(eps), b).unwrap() - w).norm() < 1e-12);
    }
    let k = kern(5e-3);
    let spectral = amplitude_w_d(ep(1.3), b, &k, 1e-10).unwrap().amplitude.value();
    let factorized = amplitude_w_d_factorized(ep(1.3), b, &k, &SpectralConfig::default()).unwrap();
    let cumulative = CumulativeAmplitude::new(ep(1.3), b, &k, &Default::default()).unwrap().w_d();
    assert!((spectral - factorized).norm() < 1e-5 * spectral.norm());
    assert!((spectral - cumulative).norm() < 1e-5 * spectral.norm());
}

#[test]
fn damping_shortens_the_mean_time() {
    let (e, b) = (ep(1.3), bs(5.0));
    let bare = distribution_f(e, b, &SpectralConfig::default()).unwrap();
    let damped = distribution_f_d(e, b, &kern(5e-3), &SpectralConfig::default()).unwrap();
    assert!(damped.mean().re < bare.mean().re);
    assert!((damped.moment(0) - 1.0).norm() < 1e-12);
    // the suppression factor is w_D / w
    let ratio = amplitude_w_d(e, b, &kern(5e-3), 1e-10).unwrap().amplitude.value() / amplitude_w(e, b).value();
    assert!((damped.suppression - ratio).norm() < 1e-5);
}

#[test]
fn sweep_through_public_api() {
    let req = SweepRequest {
        quantity: Quantity::Transmission,
        grid: "1.3:1.5:3".parse().unwrap(),
        epsilon: None,
        d_over_lambda0: 5.0,
        omega_star: 100.0,
        gamma_star: vec![5e-3],
        tol: 1e-8,
    };
    let a = run_sweep(&req).unwrap();
    let b = run_sweep(&req).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_eq!(a.to_json(None), b.to_json(None));
    let p = a.column("g0.005").unwrap();
    let direct = transmission_prob_d(ep(1.4), bs(5.0), &kern(5e-3), 1e-8).unwrap();
    assert!((p[1] - direct).abs() < 1e-7);
    let table = resonance_table(5.0, 2).unwrap();
    assert_eq!(table.rows.len(), 2);
}
