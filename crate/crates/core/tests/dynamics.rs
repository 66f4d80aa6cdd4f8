use num_complex::Complex64;
use slopelab_core::conformal::*;
use slopelab_core::dynamics::*;
use slopelab_core::staircase::*;
use slopelab_core::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn half_plane() -> ConformalMap {
    let (l, h) = (4000.0, 2000.0);
    let poly =
        StaircasePolygon::from_vertices(vec![c(-1., -h), c(l - 1., -h), c(l - 1., h), c(-1., h)], 0.0, l - 1.).unwrap();
    build_map(&poly, DEFAULT_RESOLUTION).unwrap()
}

fn comb(v: &[f64], w: &[f64], tail: f64) -> ConformalMap {
    let u: Vec<f64> = (0..=v.len()).map(|k| (k + 1) as f64 * 1.5).collect();
    let p = build_params(u, v.to_vec(), w.to_vec()).unwrap();
    build_map(&realize(&p, tail).unwrap(), DEFAULT_RESOLUTION).unwrap()
}

fn default_grid() -> Vec<f64> {
    TimeGrid::default().points().unwrap()
}

#[test]
fn time_grids() {
    let g = default_grid();
    assert_eq!(g.len(), 201);
    assert_eq!(g[0], 0.0);
    assert!((g[1] - 0.01).abs() < 1e-15);
    assert_eq!(*g.last().unwrap(), 100.0);
    assert!(g.windows(2).all(|p| p[1] > p[0]));
    let lin = TimeGrid::Linear { t_max: 2.0, count: 4 }.points().unwrap();
    assert_eq!(lin, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    assert!(TimeGrid::Geometric { t0: 0.0, t_max: 1.0, count: 5 }.points().is_err());
}

#[test]
fn zero_time_is_the_identity() {
    let m = comb(&[2.0], &[1.0], 8.0);
    let z0 = c(0.1, -0.2);
    let traj = trajectory(&m, z0, &[0.0]).unwrap();
    assert_eq!(traj.points, vec![z0]);
}

#[test]
fn half_plane_orbit_of_zero() {
    let m = half_plane();
    let traj = trajectory(&m, c(0.0, 0.0), &default_grid()).unwrap();
    for (t, p) in traj.t_grid.iter().zip(&traj.points) {
        assert!((p - half_plane_orbit(*t)).norm() < 1e-3, "t = {t}");
    }
    let k = traj.t_grid.iter().position(|t| (*t - 2.0).abs() < 0.05).unwrap();
    assert!((traj.points[k] - half_plane_orbit(traj.t_grid[k])).norm() < 1e-3);
    let curve = slope_curve(&traj);
    assert!(curve.theta.iter().all(|th| th.abs() < 1e-3));
    assert_eq!(curve.tau, c(1.0, 0.0));
}

#[test]
fn symmetric_comb_orbit_is_real() {
    let m = comb(&[2.0, 4.0], &[2.0, 4.0], 40.0);
    let grid = TimeGrid::Geometric { t0: 0.01, t_max: 20.0, count: 80 }.points().unwrap();
    let traj = trajectory(&m, c(0.0, 0.0), &grid).unwrap();
    assert!(traj.points.iter().all(|p| p.im.abs() <= 10.0 * m.accuracy()));
    assert!(traj.points.iter().all(|p| p.norm() < 1.0));
}

#[test]
fn slope_curve_of_quadrant_matches_closed_form() {
    let q = QuadrantMapParams::new(2.0, 1.0).unwrap();
    let tail = 256.0;
    let k = q.corner();
    let poly = StaircasePolygon::from_vertices(vec![k, k + tail, k + c(tail, tail), k + c(0.0, tail)], q.u, tail).unwrap();
    let m = build_map_with(&poly, &MapSettings::new(DEFAULT_RESOLUTION).with_center(q.center())).unwrap();
    // the orbit of the point mapped to 3 passes through 4 at t = 1
    let z0 = m.inverse(c(3.0, 0.0)).unwrap();
    let traj = trajectory(&m, z0, &[0.0, 1.0]).unwrap();
    let theta = slope_curve(&traj).theta[1];
    assert!((theta - 0.6f64.atan()).abs() < 1e-3);
    assert!((theta - 0.5404).abs() < 1e-3);
}

#[test]
fn slope_intervals() {
    let flat = SlopeCurve { t_grid: (0..20).map(|k| k as f64).collect(), theta: vec![0.0; 20], tau: c(1.0, 0.0) };
    let iv = slope_interval(&flat, 0.5).unwrap();
    assert_eq!((iv.lo, iv.hi), (0.0, 0.0));
    assert!(iv.contains_interval(0.0, 0.0));
    let short = SlopeCurve { t_grid: vec![0.0, 1.0, 2.0], theta: vec![0.0; 3], tau: c(1.0, 0.0) };
    assert!(matches!(slope_interval(&short, 0.5), Err(Error::TooFewSamples { .. })));
    assert!(matches!(slope_interval(&flat, 1.5), Err(Error::Config(_))));
}

#[test]
fn generator_of_half_plane() {
    let m = half_plane();
    assert!((generator(&m, c(0.0, 0.0)).unwrap() - 0.5).norm() < 1e-3);
    let z = c(0.3, 0.1);
    let exact = (1.0 - z) * (1.0 - z) / 2.0;
    assert!((generator(&m, z).unwrap() - exact).norm() < 1e-3);
}

#[test]
fn finite_differences_follow_the_generator() {
    let m = comb(&[2.0, 3.0], &[1.0, 2.0], 60.0);
    let h = 1e-4;
    let traj = trajectory(&m, c(0.0, 0.0), &[5.0, 5.0 + h]).unwrap();
    let fd = (traj.gaps[0] - traj.gaps[1]) / h;
    let g = generator(&m, traj.points[0]).unwrap();
    assert!((fd - g).norm() <= 1e-3 * g.norm());
}

#[test]
fn generator_deviation_is_small_on_default_grid() {
    let m = half_plane();
    let traj = trajectory(&m, c(0.0, 0.0), &default_grid()).unwrap();
    assert!(generator_deviation(&m, &traj).unwrap() <= 1e-2);
}

#[test]
fn generator_deviation_deep_in_a_channel() {
    // by t = 100 the orbit is far closer to 1 than f64 can resolve in z
    let m = comb(&[1.0, 3.0], &[1.0, 1.0], 256.0);
    let traj = trajectory(&m, c(0.0, 0.0), &default_grid()).unwrap();
    assert!(traj.gaps.last().unwrap().norm() < 1e-20);
    assert!(generator_deviation(&m, &traj).unwrap() <= 1e-2);
}

#[test]
fn denjoy_wolff_checks() {
    let m = half_plane();
    let grid = TimeGrid::Linear { t_max: 100.0, count: 200 }.points().unwrap();
    let long = trajectory(&m, c(0.0, 0.0), &grid).unwrap();
    assert!(dw_check(&long, 0.05));
    let short = trajectory(&m, c(0.0, 0.0), &TimeGrid::Linear { t_max: 1.0, count: 20 }.points().unwrap()).unwrap();
    assert!(!dw_check(&short, 1e-6));
}

#[test]
fn symmetric_comb_with_long_tail_converges() {
    let m = comb(&[2.0, 4.0], &[2.0, 4.0], 200.0);
    let traj = trajectory(&m, c(0.0, 0.0), &TimeGrid::Linear { t_max: 90.0, count: 90 }.points().unwrap()).unwrap();
    assert!(dw_check(&traj, 0.1));
}

#[test]
fn semigroup_property_on_the_grid() {
    let m = comb(&[2.0, 3.0], &[1.0, 2.0], 60.0);
    let grid = [0.0, 0.5, 2.0, 6.0, 15.0];
    let traj = trajectory(&m, c(0.1, 0.2), &grid).unwrap();
    for j in 0..grid.len() {
        for k in j + 1..grid.len() {
            let zeta = m.forward(traj.points[j]).unwrap() + (grid[k] - grid[j]);
            let back = m.inverse(zeta).unwrap();
            assert!((back - traj.points[k]).norm() <= 10.0 * m.accuracy().max(1e-12), "{j} -> {k}");
        }
    }
}

#[test]
fn channel_slope_depends_on_height() {
    // in a channel of height h the limiting angle is linear in the starting height
    let m = comb(&[2.0, 3.0], &[1.0, 2.0], 120.0);
    let grid = TimeGrid::Linear { t_max: 50.0, count: 100 }.points().unwrap();
    for z0 in [c(0.0, 0.0), c(0.3, -0.4)] {
        let y = m.forward(z0).unwrap().im;
        let iv = slope_interval(&slope_curve(&trajectory(&m, z0, &grid).unwrap()), 0.5).unwrap();
        let expected = std::f64::consts::PI * (0.5 - y) / 5.0;
        assert!(iv.lo - 1e-3 <= expected && expected <= iv.hi + 1e-3, "{iv:?} vs {expected}");
    }
}

#[test]
fn leaving_the_trusted_region_is_an_error() {
    let m = comb(&[2.0], &[1.0], 8.0);
    let err = trajectory(&m, c(0.0, 0.0), &[0.0, 100.0]).unwrap_err();
    assert!(matches!(err, Error::LeavesTrustedRegion { .. }));
    assert!(matches!(trajectory(&m, c(1.0, 0.0), &[0.0]), Err(Error::OutsideDisk(_))));
}

#[test]
fn csv_export_format() {
    let m = half_plane();
    let traj = trajectory(&m, c(0.0, 0.0), &[0.0, 2.0]).unwrap();
    let mut buf = Vec::new();
    write_csv(&traj, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t, re_w, im_w, theta");
    assert_eq!(lines.len(), 3);
    let fields: Vec<f64> = lines[2].split(", ").map(|f| f.parse().unwrap()).collect();
    assert_eq!(fields[0], 2.0);
    assert!((fields[1] - 0.5).abs() < 1e-3);
    assert!(lines[2].contains('e'));
}
