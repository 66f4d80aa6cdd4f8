use num_complex::Complex64;
use proptest::prelude::*;
use slopelab_core::staircase::*;
use slopelab_core::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random valid parameters with up to five stages on a coarse lattice, so
/// that grid probes hit edges and corners.
fn params_strategy() -> impl Strategy<Value = StaircaseParams> {
    (1usize..=5)
        .prop_flat_map(|n| {
            (
                1u32..4,
                prop::collection::vec(1u32..4, n),
                prop::collection::vec(0u32..3, n),
                prop::collection::vec(0u32..3, n),
            )
        })
        .prop_map(|(u0, du, dv, dw)| {
            let mut u = vec![u0 as f64];
            for d in du {
                u.push(u.last().unwrap() + d as f64);
            }
            let (mut v, mut w) = (Vec::new(), Vec::new());
            let (mut hv, mut hw) = (1.0, 1.0);
            for (a, b) in dv.into_iter().zip(dw) {
                hv += a as f64;
                hw += b as f64;
                v.push(hv);
                w.push(hw);
            }
            build_params(u, v, w).unwrap()
        })
}

fn in_union(params: &StaircaseParams, closing: Rect, z: Complex64) -> bool {
    params.rects().iter().chain(std::iter::once(&closing)).any(|r| r.contains(z))
}

fn closing_rect(params: &StaircaseParams, tail: f64) -> Rect {
    Rect { u1: params.u_last(), u2: params.u_last() + tail, v: params.v_last(), w: params.w_last() }
}

proptest! {
    #[test]
    fn realized_outline_is_a_jordan_polygon(params in params_strategy(), tail in 0.5f64..20.0) {
        let poly = realize(&params, tail).unwrap();
        prop_assert!(poly.validate().is_ok());
        prop_assert!(poly.signed_area() > 0.0);
        prop_assert_eq!(poly.vertices[0], c(-1.0, -1.0));
        let area: f64 = params.rects().iter().chain(std::iter::once(&closing_rect(&params, tail)))
            .map(|r| (r.u2 - r.u1) * (r.v + r.w)).sum();
        prop_assert!((poly.signed_area() - area).abs() < 1e-9 * area);
    }

    #[test]
    fn contains_matches_rectangle_union(params in params_strategy(), tail in 1u32..6) {
        let tail = tail as f64;
        let poly = realize(&params, tail).unwrap();
        let closing = closing_rect(&params, tail);
        let (x_end, h) = (params.u_last() + tail, params.v.iter().chain(&params.w).fold(1.0f64, |m, x| m.max(*x)));
        // quarter-lattice probes, shifted off the integer lattice of vertices
        let mut x = -1.5;
        while x <= x_end + 0.5 {
            let mut y = -h - 0.5;
            while y <= h + 0.5 {
                let z = c(x + 0.125, y + 0.125);
                prop_assert_eq!(contains(&poly, z), in_union(&params, closing, z), "z = {}", z);
                y += 0.25;
            }
            x += 0.25;
        }
    }

    #[test]
    fn boundary_points_are_outside(params in params_strategy()) {
        let poly = realize(&params, 2.0).unwrap();
        for (a, b) in poly.edges() {
            prop_assert!(!contains(&poly, a));
            prop_assert!(!contains(&poly, 0.5 * (a + b)));
        }
    }

    #[test]
    fn origin_and_base_box_are_interior(params in params_strategy(), tail in 0.5f64..20.0) {
        let poly = realize(&params, tail).unwrap();
        prop_assert!(contains(&poly, c(0.0, 0.0)));
        for z in [c(-0.99, -0.99), c(-0.99, 0.99), c(params.u[0] - 0.01, 0.99), c(params.u[0] - 0.01, -0.99)] {
            prop_assert!(contains(&poly, z));
        }
        let end = params.u_last() + tail;
        prop_assert!(poly.segment_inside(c(0.0, 0.0), c(end - 1e-9 * end, 0.0)));
    }

    #[test]
    fn extension_by_a_stage_contains_the_prefix(params in params_strategy(), du in 0.5f64..5.0, dv in 0.0f64..3.0, dw in 0.0f64..3.0, tail in 0.5f64..10.0) {
        let small = realize(&params, 1e-6).unwrap();
        let ext = params.with_stage(params.u_last() + du, params.v_last() + dv, params.w_last() + dw).unwrap();
        let big = realize(&ext, tail).unwrap();
        let h = params.v_last().max(params.w_last());
        for i in 0..=40 {
            for j in 0..=40 {
                let z = c(-1.0 + (params.u_last() + 1.0) * i as f64 / 40.0, -h + 2.0 * h * j as f64 / 40.0);
                if contains(&small, z) {
                    prop_assert!(contains(&big, z), "z = {}", z);
                }
            }
        }
    }

    #[test]
    fn translation_stays_inside_over_the_trusted_range(params in params_strategy(), tail in 1.0f64..30.0) {
        let poly = realize(&params, tail).unwrap();
        let h = params.v_last().max(params.w_last());
        for i in 0..=25 {
            for j in 0..=25 {
                let z = c(-1.0 + (params.u_last() + 1.0) * i as f64 / 25.0, -h + 2.0 * h * j as f64 / 25.0);
                if !contains(&poly, z) {
                    continue;
                }
                for k in 0..=10 {
                    let t = 0.5 * tail * k as f64 / 10.0;
                    prop_assert!(contains(&poly, z + t), "z = {}, t = {}", z, t);
                }
            }
        }
    }

    #[test]
    fn conjugate_polygon_mirrors_membership(params in params_strategy()) {
        let poly = realize(&params, 3.0).unwrap();
        let mirror = realize(&params.conjugate(), 3.0).unwrap();
        prop_assert_eq!(&poly.conjugate().vertices.len(), &mirror.vertices.len());
        for i in 0..30 {
            for j in 0..30 {
                let z = c(-1.2 + 0.37 * i as f64, -6.1 + 0.41 * j as f64);
                prop_assert_eq!(contains(&poly, z), contains(&mirror, z.conj()));
            }
        }
    }
}

#[test]
fn contains_examples() {
    let params = build_params(vec![1.0, 2.0], vec![2.0], vec![1.0]).unwrap();
    let poly = realize(&params, 1.0).unwrap();
    assert!(contains(&poly, c(0.0, 0.0)));
    assert!(contains(&poly, c(1.5, 1.5)));
    assert!(!contains(&poly, c(0.5, 1.5)));
}

#[test]
fn build_params_examples() {
    assert!(build_params(vec![1.0, 2.0, 3.0], vec![1.0, 2.0], vec![1.0, 1.0]).is_ok());
    assert!(matches!(build_params(vec![2.0, 1.0], vec![1.0], vec![1.0]), Err(Error::NonMonotoneU(_))));
    assert!(matches!(build_params(vec![1.0, 2.0], vec![0.5], vec![1.0]), Err(Error::HeightBelowOne { .. })));
    assert!(matches!(build_params(vec![1.0, 2.0, 3.0], vec![2.0, 1.0], vec![1.0, 1.0]), Err(Error::NonMonotoneHeights { .. })));
    assert!(matches!(build_params(vec![1.0, 2.0], vec![1.0, 1.0], vec![1.0]), Err(Error::LengthMismatch { .. })));
}

#[test]
fn realize_rejects_nonpositive_tail() {
    let params = build_params(vec![1.0], vec![], vec![]).unwrap();
    assert!(realize(&params, 0.0).is_err());
    assert!(realize(&params, -1.0).is_err());
}

#[test]
fn params_serialize_with_fixed_field_names() {
    let params = build_params(vec![1.0, 2.0], vec![2.0], vec![1.0]).unwrap();
    let json: serde_json::Value = serde_json::to_value(&params).unwrap();
    assert_eq!(json, serde_json::json!({"u": [1.0, 2.0], "v": [2.0], "w": [1.0]}));
    let poly = realize(&params, 1.0).unwrap();
    let record = serde_json::to_value(&poly).unwrap();
    assert_eq!(record["tail_length"], 1.0);
    let flat = record["vertices"].as_array().unwrap();
    assert_eq!(flat.len(), 2 * poly.vertices.len());
    assert_eq!((flat[0].as_f64(), flat[1].as_f64()), (Some(-1.0), Some(-1.0)));
}

#[test]
fn classify_with_declared_limits() {
    let grow = build_params(vec![1.0, 2.0, 3.0], vec![1.0, 2.0], vec![1.0, 2.0]).unwrap();
    let both = DeclaredLimits { v_unbounded: true, w_unbounded: true };
    assert_eq!(classify(&grow, both), SemigroupType::Parabolic);
    let flat = build_params(vec![1.0, 2.0, 3.0], vec![1.0, 1.0], vec![1.0, 1.0]).unwrap();
    assert_eq!(classify(&flat, DeclaredLimits::default()), SemigroupType::Hyperbolic);
    let one = DeclaredLimits { v_unbounded: true, w_unbounded: false };
    assert_eq!(classify(&grow, one), SemigroupType::Parabolic);
}
