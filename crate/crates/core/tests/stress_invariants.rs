use casimir_core::presets;
use casimir_core::profile::{DispersionParams, Profile, Segment, SegmentKind};
use casimir_core::stress::{stress_at, stress_profile, QuadratureParams};

fn params() -> QuadratureParams {
    QuadratureParams::default()
}

/// Index peaked at `z = 0`: `ε = e^{1−|z|}` on `[−1, 1]`, dispersive.
fn tent() -> Profile {
    Profile::new(
        vec![
            Segment::new(
                SegmentKind::ExponentialDispersive {
                    base: std::f64::consts::E,
                    exponent_at_min: 0.0,
                    rate: 1.0,
                },
                -1.0,
                0.0,
            ),
            Segment::new(
                SegmentKind::ExponentialDispersive {
                    base: std::f64::consts::E,
                    exponent_at_min: 1.0,
                    rate: -1.0,
                },
                0.0,
                1.0,
            ),
        ],
        Some(DispersionParams { kappa0: 50.0 }),
    )
    .unwrap()
}

#[test]
fn length_rescaling_gives_inverse_fourth_power() {
    let s1 = stress_at(&presets::soft_wall(1.0, 1.0), -0.9, &params()).unwrap();
    let s2 = stress_at(&presets::soft_wall(2.0, 1.0), -1.8, &params()).unwrap();
    assert!((16.0 * s2.sigma - s1.sigma).abs() < 1e-9 * s1.sigma.abs(), "{} vs {}", s1.sigma, s2.sigma);
    let s1 = stress_at(&presets::two_plates(4.0, 1.0), 0.3, &params()).unwrap();
    let s2 = stress_at(&presets::two_plates(4.0, 2.0), 0.6, &params()).unwrap();
    assert!((16.0 * s2.sigma - s1.sigma).abs() < 1e-9 * s1.sigma.abs());
}

#[test]
fn mirror_symmetric_profile_has_symmetric_stress() {
    let p = tent();
    for z in [0.1, 0.35, 0.8] {
        let a = stress_at(&p, z, &params()).unwrap();
        let b = stress_at(&p, -z, &params()).unwrap();
        assert!((a.sigma - b.sigma).abs() <= 2.0 * (a.err + b.err).max(1e-12 * a.sigma.abs()), "z={z}: {} vs {}", a.sigma, b.sigma);
    }
    let plates = presets::two_plates(20.0, 1.0);
    let a = stress_at(&plates, 0.3, &params()).unwrap();
    let b = stress_at(&plates, 0.7, &params()).unwrap();
    assert!((a.sigma - b.sigma).abs() <= 2.0 * (a.err + b.err));
}

#[test]
fn rising_and_falling_walls_push_the_same_way() {
    for a in [0.03, 0.1] {
        let up = stress_at(&presets::soft_wall(1.0, 1.0), -1.0 + a, &params()).unwrap();
        let down = stress_at(&presets::soft_wall_mirrored(1.0, 1.0), 1.0 - a, &params()).unwrap();
        assert!(up.sigma > 0.0 && down.sigma > 0.0);
        assert!((up.sigma - down.sigma).abs() <= 2.0 * (up.err + down.err).max(1e-12 * up.sigma));
    }
}

#[test]
fn doubling_w_max_beyond_dispersion_knee() {
    let p = presets::exponential_slab();
    for z in [0.05, 0.5, 0.9] {
        let q1 = QuadratureParams {
            w_max: Some(2000.0),
            ..params()
        };
        let q2 = QuadratureParams {
            w_max: Some(4000.0),
            ..params()
        };
        let a = stress_at(&p, z, &q1).unwrap();
        let b = stress_at(&p, z, &q2).unwrap();
        assert!(a.converged && b.converged);
        assert!((a.sigma - b.sigma).abs() <= a.err.max(b.err), "z={z}: {a:?} {b:?}");
        let open = stress_at(&p, z, &params()).unwrap();
        assert!((open.sigma - a.sigma).abs() <= 2.0 * (open.err + a.err));
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let p = presets::exponential_slab();
    let grid: Vec<f64> = (1..8).map(|i| i as f64 / 8.0).collect();
    let run = |n: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| stress_profile(&p, &grid, &params()).unwrap())
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(a, b);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn stress_vanishes_outside_graded_regions_of_a_single_wall() {
    let p = presets::soft_wall(1.0, 1.0);
    let r = stress_at(&p, -1.4, &params()).unwrap();
    // only roundoff in k² − a² survives
    assert!(r.sigma.abs() < 1e-15, "{}", r.sigma);
}
