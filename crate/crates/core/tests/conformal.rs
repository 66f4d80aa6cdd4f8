use num_complex::Complex64;
use slopelab_core::conformal::*;
use slopelab_core::staircase::*;
use slopelab_core::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn square() -> StaircasePolygon {
    StaircasePolygon::from_vertices(vec![c(-1., -1.), c(1., -1.), c(1., 1.), c(-1., 1.)], 0.0, 1.0).unwrap()
}

/// `{Re z > -1}` cut down to a box of side `2000`.
fn half_plane_box() -> StaircasePolygon {
    let (l, h) = (2000.0, 1000.0);
    StaircasePolygon::from_vertices(vec![c(-1., -h), c(l - 1., -h), c(l - 1., h), c(-1., h)], 0.0, l - 1.).unwrap()
}

fn symmetric_comb() -> StaircasePolygon {
    let p = build_params(vec![1.0, 2.0, 4.0, 7.0], vec![1.0, 3.0, 6.0], vec![1.0, 3.0, 6.0]).unwrap();
    realize(&p, 24.0).unwrap()
}

fn asymmetric_comb() -> StaircasePolygon {
    let p = build_params(vec![1.0, 2.0, 4.0], vec![2.0, 5.0], vec![1.0, 1.5]).unwrap();
    realize(&p, 12.0).unwrap()
}

fn quadrant() -> (QuadrantMapParams, ConformalMap) {
    let q = QuadrantMapParams::new(2.0, 1.0).unwrap();
    let tail = 256.0;
    let k = q.corner();
    let poly = StaircasePolygon::from_vertices(vec![k, k + tail, k + c(tail, tail), k + c(0.0, tail)], q.u, tail).unwrap();
    let map = build_map_with(&poly, &MapSettings::new(DEFAULT_RESOLUTION).with_center(q.center())).unwrap();
    (q, map)
}

#[test]
fn square_normalization_and_round_trip() {
    for res in [4, 8, 16] {
        let m = build_map(&square(), res).unwrap();
        assert!(m.forward(c(0.0, 0.0)).unwrap().norm() <= m.accuracy());
        let z = c(0.3, 0.2);
        assert!((m.inverse(m.forward(z).unwrap()).unwrap() - z).norm() <= 10.0 * m.accuracy());
        assert!((m.b().norm() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn round_trip_on_standard_grid() {
    for poly in [square(), asymmetric_comb(), symmetric_comb()] {
        let m = build_map(&poly, DEFAULT_RESOLUTION).unwrap();
        for z in standard_grid() {
            let back = m.inverse(m.forward(z).unwrap()).unwrap();
            assert!((back - z).norm() <= 10.0 * m.accuracy(), "z = {z}: {}", (back - z).norm());
        }
    }
}

#[test]
fn half_plane_box_matches_mobius_map() {
    let m = build_map(&half_plane_box(), DEFAULT_RESOLUTION).unwrap();
    for z in standard_grid().into_iter().filter(|z| z.norm() <= 0.5) {
        assert!((m.forward(z).unwrap() - half_plane_map(z)).norm() < 1e-3);
    }
    assert!((m.forward(c(0.5, 0.0)).unwrap() - 2.0).norm() < 1e-3);
    assert!((m.inverse(c(2.0, 0.0)).unwrap() - 0.5).norm() < 1e-3);
    assert!((m.derivative(c(0.0, 0.0)).unwrap() - 2.0).norm() < 1e-3);
}

#[test]
fn quadrant_spot_values() {
    let (_, m) = quadrant();
    assert!((m.inverse(c(3.0, 0.0)).unwrap() - 1.0 / 3.0).norm() < 1e-3);
    assert!((m.inverse(c(4.0, 0.0)).unwrap() - c(12.0, -3.0) / 17.0).norm() < 1e-3);
}

#[test]
fn real_axis_continuation_agrees_with_direct_inverse() {
    let (q, m) = quadrant();
    let mut cursor = RealAxisCursor::new();
    for k in 0..40 {
        let t = 3.0 * 1.12f64.powi(k);
        let along = m.inverse_real_axis(t, &mut cursor).unwrap();
        let direct = m.inverse(c(t, 0.0)).unwrap();
        assert!((along - direct).norm() <= 10.0 * m.accuracy().max(1e-12), "t = {t}");
        let exact = explicit_quadrant_inverse(&q, c(t, 0.0)).unwrap();
        assert!((along - exact).norm() < 1e-3);
    }
}

#[test]
fn symmetric_polygon_keeps_the_real_axis() {
    let m = build_map(&symmetric_comb(), DEFAULT_RESOLUTION).unwrap();
    let tol = 10.0 * m.accuracy();
    for x in [-0.9, -0.4, 0.0, 0.3, 0.8, 0.95] {
        assert!(m.forward(c(x, 0.0)).unwrap().im.abs() <= tol);
        assert!(m.derivative(c(x, 0.0)).unwrap().im.abs() <= tol * m.derivative(c(x, 0.0)).unwrap().norm());
    }
    for z in standard_grid() {
        let a = m.forward(z.conj()).unwrap();
        let b = m.forward(z).unwrap().conj();
        assert!((a - b).norm() <= tol);
    }
    let mut cursor = RealAxisCursor::new();
    let bound = m.polygon().trusted_bound();
    for k in 0..=20 {
        let t = bound * k as f64 / 20.0;
        assert!(m.inverse_real_axis(t, &mut cursor).unwrap().im.abs() <= tol);
    }
}

#[test]
fn real_axis_preimages_approach_one() {
    let m = build_map(&asymmetric_comb(), DEFAULT_RESOLUTION).unwrap();
    let mut cursor = RealAxisCursor::new();
    let mut last = f64::INFINITY;
    let end = m.polygon().trusted_bound();
    for k in 0..=20 {
        let t = 4.0 + (end - 4.0) * k as f64 / 20.0;
        let p = m.inverse_along(c(t, 0.0), &mut cursor).unwrap();
        assert!(p.gap.norm() <= last + m.accuracy());
        last = p.gap.norm();
    }
    assert!(last < 1e-3);
}

#[test]
fn accuracy_estimates_are_small_and_nonnegative() {
    for poly in [square(), half_plane_box(), asymmetric_comb()] {
        let est = accuracy_estimate(&poly, DEFAULT_RESOLUTION).unwrap();
        assert!(est >= 0.0);
        assert!(est <= 1e-3);
    }
}

#[test]
fn accuracy_decreases_with_resolution() {
    let coarse = accuracy_estimate(&square(), 4).unwrap();
    let fine = accuracy_estimate(&square(), 8).unwrap();
    assert!(fine < coarse);
}

#[test]
fn derivative_is_nonzero_and_guarded() {
    let m = build_map(&asymmetric_comb(), DEFAULT_RESOLUTION).unwrap();
    assert!(m.derivative(c(0.0, 0.0)).unwrap().norm() > 0.0);
    assert!(matches!(m.derivative(c(1.0, 0.0)), Err(Error::TooCloseToBoundary { .. })));
    let z = c(0.2, -0.3);
    let p = m.inverse_full(m.forward(z).unwrap()).unwrap();
    assert!((m.derivative_at(&p) - m.derivative(z).unwrap()).norm() <= 1e-9 * m.derivative(z).unwrap().norm());
    let h = 1e-5;
    let fd = (m.forward(z + h).unwrap() - m.forward(z - h).unwrap()) / (2.0 * h);
    assert!((fd - m.derivative(z).unwrap()).norm() <= 1e-6 * fd.norm());
}

#[test]
fn domain_errors() {
    assert!(matches!(build_map(&square(), 2), Err(Error::ResolutionTooLow { got: 2, min: MIN_RESOLUTION })));
    let m = build_map(&square(), 4).unwrap();
    assert!(matches!(m.forward(c(1.0, 0.0)), Err(Error::OutsideDisk(_))));
    assert!(matches!(m.inverse(c(5.0, 0.0)), Err(Error::OutsideDomain(_))));
    assert!(matches!(m.inverse(c(1.0, 0.0)), Err(Error::OutsideDomain(_))));
}

#[test]
fn exit_point_is_the_image_of_one() {
    let m = build_map(&asymmetric_comb(), DEFAULT_RESOLUTION).unwrap();
    assert_eq!(m.exit(), 16.0);
    let near = m.forward(c(1.0 - 1e-9, 0.0)).unwrap();
    assert!((near - c(16.0, 0.0)).norm() < 1e-2);
}

#[test]
fn metadata_round_trips_through_json() {
    let m = build_map(&asymmetric_comb(), DEFAULT_RESOLUTION).unwrap();
    let text = serde_json::to_string(&m.metadata()).unwrap();
    let back: MapMetadata = serde_json::from_str(&text).unwrap();
    assert_eq!(back.resolution, DEFAULT_RESOLUTION);
    assert_eq!(back.polygon, *m.polygon());
    assert!((c(back.b[0], back.b[1]).norm() - 1.0).abs() < 1e-14);
}

#[test]
fn warm_started_build_matches_cold_build() {
    let p = build_params(vec![1.0, 2.0], vec![1.0], vec![1.0]).unwrap();
    let small = realize_with_closing(&p, 8.0, 1.0, 9.0).unwrap();
    let large = realize_with_closing(&p, 64.0, 1.0, 65.0).unwrap();
    let settings = MapSettings::new(DEFAULT_RESOLUTION);
    let seed = build_map_with(&small, &settings).unwrap();
    let warm = build_map_warm(&large, &settings, Some(&seed)).unwrap();
    let cold = build_map_with(&large, &settings).unwrap();
    for z in standard_grid() {
        assert!((warm.forward(z).unwrap() - cold.forward(z).unwrap()).norm() < 1e-8);
    }
}

#[test]
fn long_narrow_channel_stays_invertible() {
    // prevertices of the far corners are near 1e87 here
    let p = build_params(vec![1.0, 2.0, 4.0], vec![1.0, 3.0], vec![1.0, 1.0]).unwrap();
    let m = build_map(&realize(&p, 256.0).unwrap(), DEFAULT_RESOLUTION).unwrap();
    let mut cursor = RealAxisCursor::new();
    let end = m.polygon().trusted_bound();
    for k in 0..=16 {
        let t = end * k as f64 / 16.0;
        let p = m.inverse_along(c(t, 0.0), &mut cursor).unwrap();
        let w = p.w;
        assert!(w.im > 0.0 && w.re.is_finite());
    }
}
