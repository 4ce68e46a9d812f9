use proptest::prelude::*;
use shadowkin::kinematics::*;
use shadowkin::oracle::{instantaneous_speed, retarded_screen_time};
use shadowkin::{stop_trajectory, Scene};

/// Log-uniform lengths over [1e-3, 1e6] m with l < L, and v / c in (1e-3, 1 - 1e-3).
fn scenes() -> impl Strategy<Value = Scene> {
    (
        -3.0f64..6.0,
        -3.0f64..6.0,
        -3.0f64..6.0,
        1e-3f64..(1.0 - 1e-3),
        prop_oneof![Just(1.0), Just(3e8)],
    )
        .prop_filter_map("l must differ from L", |(a, b, s, beta, c)| {
            let (a, b) = (10f64.powf(a), 10f64.powf(b));
            Scene::new(a.max(b), a.min(b), 10f64.powf(s), beta * c, c).ok()
        })
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn average_speed_is_subluminal(scene in scenes()) {
        let v = average_shadow_speed(&scene);
        prop_assert!(v < scene.light_speed() * (1.0 + BOUNDARY_TOL));
        prop_assert!(v <= naive_shadow_speed(&scene) * (1.0 + BOUNDARY_TOL));
        prop_assert!(shadow_target(&scene) > scene.displacement());
        prop_assert!(total_time(&scene) > bug_stop_time(&scene));
    }

    #[test]
    fn certificate_chain_and_branch(scene in scenes()) {
        let cert = subluminality_certificate(&scene);
        prop_assert!(cert.chain_holds);
        prop_assert!(cert.v_ratio < 1.0 + BOUNDARY_TOL);
        if threshold_margin(&scene).abs() > BOUNDARY_TOL {
            let above = scene.screen_distance() >= griffiths_threshold(&scene).min_screen_distance;
            prop_assert_eq!(cert.squared_form_valid, above);
        }
        if cert.squared_form_valid {
            prop_assert!(cert.literal_squared_chain());
        }
    }

    #[test]
    fn naive_threshold_matches_naive_speed(scene in scenes()) {
        prop_assume!(threshold_margin(&scene).abs() > BOUNDARY_TOL);
        let th = griffiths_threshold(&scene);
        prop_assert_eq!(th.naive_superluminal, naive_shadow_speed(&scene) > scene.light_speed());
    }

    #[test]
    fn length_scaling_leaves_ratios_alone(scene in scenes(), k in prop_oneof![Just(1e-3), Just(1e3), 0.01f64..100.0]) {
        let scaled = scene.scaled(k).unwrap();
        prop_assert!(rel(average_shadow_speed(&scene), average_shadow_speed(&scaled)) <= BOUNDARY_TOL);
        prop_assert!(rel(naive_shadow_speed(&scene), naive_shadow_speed(&scaled)) <= BOUNDARY_TOL);
        let ratio = DominanceRatio::DEFAULT;
        let (a, b) = (naive_regime_error(&scene, ratio), naive_regime_error(&scaled, ratio));
        prop_assert!(rel(a.relative_error, b.relative_error) <= 1e-10);
        if threshold_margin(&scene).abs() > BOUNDARY_TOL {
            prop_assert_eq!(
                griffiths_threshold(&scene).naive_superluminal,
                griffiths_threshold(&scaled).naive_superluminal
            );
        }
        prop_assert_eq!(subluminality_certificate(&scene).chain_holds, subluminality_certificate(&scaled).chain_holds);
    }

    #[test]
    fn regime_bound(scene in scenes(), rho in 1.0f64..1e4) {
        let ratio = DominanceRatio::new(rho).unwrap();
        let check = naive_regime_error(&scene, ratio);
        prop_assert!(check.relative_error > 0.0);
        if check.regime_ok {
            prop_assert!(check.relative_error <= ratio.error_bound() * (1.0 + BOUNDARY_TOL));
        }
        let direct = (naive_shadow_speed(&scene) - average_shadow_speed(&scene)) / naive_shadow_speed(&scene);
        prop_assert!((direct - check.relative_error).abs() <= 1e-12);
    }

    #[test]
    fn trajectory_stop_time_is_exact(scene in scenes()) {
        prop_assert_eq!(stop_trajectory(&scene).stop_time(), bug_stop_time(&scene));
        let k = 3.7;
        let same_window = Scene::new(
            scene.screen_distance(), scene.occluder_distance(), k * scene.displacement(),
            scene.occluder_speed(), scene.light_speed(),
        ).unwrap();
        prop_assert!(rel(bug_stop_time(&same_window), k * bug_stop_time(&scene)) <= 1e-15);
    }

    #[test]
    fn retarded_arrival_is_increasing(scene in scenes(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let s = scene.displacement();
        let (lo, hi) = (a.min(b) * s, a.max(b) * s);
        prop_assume!(hi > lo * (1.0 + 1e-9));
        prop_assert!(retarded_screen_time(&scene, lo) < retarded_screen_time(&scene, hi));
        prop_assert!(rel(retarded_screen_time(&scene, s), total_time(&scene)) <= 1e-12);
    }
}

proptest! {
    #[test]
    fn instantaneous_speed_positive(scene in scenes(), frac in 0.01f64..0.99) {
        let s = scene.displacement();
        let y = frac * s;
        let h = 1e-3 * s * frac.min(1.0 - frac);
        prop_assert!(instantaneous_speed(&scene, y, h) > 0.0);
    }
}

#[test]
fn sun_latency_is_eight_minutes_twenty() {
    let scene = Scene::new(1.5e11, 1e3, 1.0, 10.0, 3e8).unwrap();
    let t1 = initial_latency(&scene);
    assert_eq!(t1, 500.0);
    assert_eq!((t1 as u64 / 60, t1 as u64 % 60), (8, 20));
}
