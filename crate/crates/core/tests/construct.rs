use std::f64::consts::FRAC_PI_4;
use std::sync::OnceLock;

use slopelab_core::construct::*;
use slopelab_core::staircase::*;
use slopelab_core::Error;

fn two_stages() -> &'static ConstructionCertificate {
    static CERT: OnceLock<ConstructionCertificate> = OnceLock::new();
    CERT.get_or_init(|| build_counterexample(2, None, &SearchConfig::default(), None).unwrap())
}

#[test]
fn epsilon_schedule_and_directions() {
    assert_eq!(default_epsilon(2), 0.5);
    assert_eq!(default_epsilon(3), 0.5);
    assert_eq!(default_epsilon(4), 0.25);
    assert_eq!(default_epsilon(5), 0.25);
    assert_eq!(Direction::for_index(2), Direction::Down);
    assert_eq!(Direction::for_index(3), Direction::Up);
    assert!((threshold(0.5) - FRAC_PI_4).abs() < 1e-15);
    assert!(clears(Direction::Up, 0.5, 0.8));
    assert!(!clears(Direction::Up, 0.5, -0.8));
    assert!(clears(Direction::Down, 0.5, -0.8));
}

#[test]
fn xi_grid_stays_in_the_trusted_half() {
    let g = xi_grid(2.0, 8.0, 48);
    assert_eq!(g.len(), 48);
    assert!(g.windows(2).all(|p| p[1] > p[0]));
    assert!((g[0] - (2.0 + 8.0 / 1024.0)).abs() < 1e-12);
    assert!((g[47] - 6.0).abs() < 1e-12);
}

#[test]
fn two_stage_construction_invariants() {
    let cert = two_stages();
    assert_eq!(cert.stages.len(), 2);
    let p = &cert.final_params;
    assert_eq!(&p.u[..2], &[1.0, 2.0]);
    assert!(p.u.windows(2).all(|a| a[1] > a[0]));
    assert!(p.v.windows(2).all(|a| a[1] >= a[0]));
    assert!(p.w.windows(2).all(|a| a[1] >= a[0]));
    for (s, n) in cert.stages.iter().zip(2..) {
        assert_eq!(s.n, n);
        assert_eq!(s.direction, Direction::for_index(n));
        assert_eq!(s.epsilon_n, default_epsilon(n));
        assert!(s.u_n < s.xi_n && s.xi_n < s.u_n + s.m_n);
        assert!(clears(s.direction, s.epsilon_n, s.theta_n));
        assert!(s.map_accuracy < 1e-3);
    }
    // down first, so the lower wall moved and the upper stayed put
    let s = &cert.stages[0];
    assert_eq!((s.v_n, s.w_n), (1.0, 1.0 + s.m_n));
    assert!(cert.stages[0].theta_n < 0.0 && cert.stages[1].theta_n > 0.0);
}

#[test]
fn two_stage_certificate_verifies() {
    let report = verify_certificate(two_stages(), 2.0);
    assert!(report.passed, "{report:?}");
    assert!(report.params_valid);
    assert_eq!(report.resolution, 16);
    // later stages reshape the domain, so only the sign is stable
    for (check, stage) in report.stages.iter().zip(&two_stages().stages) {
        assert!(check.theta_recomputed * stage.theta_n > 0.0);
    }
}

#[test]
fn witness_outside_its_extension_fails() {
    let mut cert = two_stages().clone();
    cert.stages[0].xi_n = cert.stages[0].u_n + 2.0 * cert.stages[0].m_n;
    let report = verify_certificate(&cert, 1.0);
    assert!(!report.passed);
    assert!(!report.stages[0].interlacing);
}

#[test]
fn unreachable_threshold_fails() {
    let mut cert = two_stages().clone();
    cert.stages[1].epsilon_n = 1e-3;
    let report = verify_certificate(&cert, 1.0);
    assert!(!report.passed);
    assert!(report.stages[1].interlacing);
    assert!(!report.stages[1].clears_threshold);
    assert!(report.stages[0].passed);
}

#[test]
fn stages_must_match_the_final_params() {
    let mut cert = two_stages().clone();
    cert.stages[1].m_n *= 1.5;
    assert!(!verify_certificate(&cert, 1.0).params_valid);
}

#[test]
fn up_and_down_searches_are_mirror_images() {
    let query = |direction| ExtensionQuery { prefix: default_prefix(), direction, epsilon: 0.5, search: SearchConfig::default() };
    let up = find_extension(&query(Direction::Up)).unwrap();
    let down = find_extension(&query(Direction::Down)).unwrap();
    assert_eq!(up.m, down.m);
    assert_eq!(up.xi, down.xi);
    assert!((up.theta + down.theta).abs() < 1e-8);
}

#[test]
fn search_gives_up_at_the_cap() {
    let search = SearchConfig { cap_factor: 1.0, ..SearchConfig::default() };
    let q = ExtensionQuery { prefix: default_prefix(), direction: Direction::Up, epsilon: 0.01, search };
    match find_extension(&q) {
        Err(Error::CapExceeded { m_max, best, threshold }) => {
            assert_eq!(m_max, 1.0);
            assert!(best < threshold);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn bad_construction_requests() {
    let cfg = SearchConfig::default();
    assert!(matches!(build_counterexample(1, None, &cfg, None), Err(Error::Config(_))));
    assert!(matches!(build_counterexample(3, Some(&[0.5, 0.5]), &cfg, None), Err(Error::Config(_))));
    let bad = SearchConfig { growth: 1.0, ..SearchConfig::default() };
    assert!(build_counterexample(2, None, &bad, None).unwrap_err().is_validation());
}

#[test]
fn certificate_json_round_trip() {
    let cert = two_stages();
    let text = cert.to_json().unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(value["stages"][0].get("M_n").is_some());
    assert_eq!(value["stages"][0]["direction"], "Down");
    assert_eq!(ConstructionCertificate::from_json(&text).unwrap(), *cert);
    assert!(ConstructionCertificate::from_json("{\"stages\": 3}").is_err());
}

#[test]
fn infinite_continuation_is_parabolic() {
    let both = DeclaredLimits { v_unbounded: true, w_unbounded: true };
    assert_eq!(classify(&two_stages().final_params, both), SemigroupType::Parabolic);
}
