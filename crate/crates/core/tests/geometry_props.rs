mod common;

use mindlin_core::geometry::{check_gp, mass_properties, sample_inside, ShapeSpec, SignedShape};
use mindlin_core::sampling;
use proptest::prelude::*;

fn rel_vec(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let s: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    d / s
}

fn moments_vec(shape: &ShapeSpec) -> Vec<f64> {
    let mp = mass_properties(shape).unwrap();
    let n = mp.dim.n();
    let mut v = vec![mp.volume];
    v.extend(&mp.static_moment);
    for i in 0..n {
        for j in 0..n {
            v.push(mp.euler.get(i, j));
        }
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn composite_is_the_signed_sum(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed, 0);
        let outer = ShapeSpec::ball(&[0.0, 0.0], 5.0);
        let hole = common::random_convex_polygon(&mut rng);
        let comp = ShapeSpec::difference(outer.clone(), hole.clone());
        let (o, h, c) = (moments_vec(&outer), moments_vec(&hole), moments_vec(&comp));
        let sum: Vec<f64> = o.iter().zip(&h).map(|(x, y)| x - y).collect();
        prop_assert!(rel_vec(&c, &sum) <= 1e-12);
    }

    #[test]
    fn translation_adds_the_parallel_axis_term(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed, 0);
        let shape = if seed % 2 == 0 {
            common::random_convex_polyhedron(&mut rng)
        } else {
            ShapeSpec::Ellipsoid {
                center: vec![0.0; 3],
                semi_axes: vec![1.0, 0.5, 0.7],
                rotation: None,
            }
        };
        let base = mass_properties(&shape).unwrap();
        // centre first so the law applies from a zero static moment
        let c: Vec<f64> = base.static_moment.iter().map(|s| -s / base.volume).collect();
        let centred = shape.translated(&c);
        let m0 = mass_properties(&centred).unwrap();
        let d = sampling::point(&mut rng, mindlin_core::Dim::Three);
        let m1 = mass_properties(&centred.translated(&d)).unwrap();
        let v = m0.volume;
        for i in 0..3 {
            prop_assert!((m1.static_moment[i] - v * d[i]).abs() <= 1e-12 * v * (1.0 + d[i].abs()));
            for j in 0..3 {
                let expect = m0.euler.get(i, j) + v * d[i] * d[j];
                prop_assert!((m1.euler.get(i, j) - expect).abs() <= 1e-11 * (m1.euler.norm()));
            }
        }
    }

    #[test]
    fn rho_mixture_holds_for_composed_rves(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed, 0);
        let inc = common::random_convex_polygon(&mut rng).scaled(0.3);
        let rve = ShapeSpec::rectangle([0.0, 0.0], [4.0, 3.0]);
        let r = check_gp(&rve, &inc, None).unwrap();
        prop_assert!(r.rho_mixture_residual <= 1e-10);
    }
}

#[test]
fn analytic_gyration_radii() {
    for r in [0.3, 1.0, 7.5] {
        let ball = mass_properties(&ShapeSpec::ball(&[0.0; 3], r)).unwrap();
        assert!(common::rel(ball.rho2.unwrap(), r * r / 5.0) <= 1e-12);
        let disk = mass_properties(&ShapeSpec::ball(&[0.0; 2], r)).unwrap();
        assert!(common::rel(disk.rho2.unwrap(), r * r / 4.0) <= 1e-12);
    }
    let sq = mass_properties(&ShapeSpec::rectangle([0.0, 0.0], [1.0, 1.0])).unwrap();
    assert!(common::rel(sq.rho2.unwrap(), 1.0 / 12.0) <= 1e-15);
    assert!(sq.static_moment.iter().all(|&s| s.abs() < 1e-16));
}

#[test]
fn meshed_moments_match_quasi_monte_carlo() {
    let mut rng = sampling::rng(31, 0);
    for k in 0..6 {
        let shape = if k < 3 {
            common::random_convex_polygon(&mut rng)
        } else {
            common::random_convex_polyhedron(&mut rng)
        };
        let (n, fan) = common::centroid_fan(&shape);
        let q = common::qmc_simplices(&fan, n, 1 << 20);
        let exact = moments_vec(&shape);
        assert!(rel_vec(&q, &exact) < 1e-4, "{k}: {q:?} vs {exact:?}");
    }
}

#[test]
fn sampled_points_lie_inside() {
    let mut rng = sampling::rng(5, 0);
    let shape = ShapeSpec::Composite {
        parts: vec![
            SignedShape {
                sign: 1,
                shape: ShapeSpec::ball(&[0.0, 0.0], 2.0),
            },
            SignedShape {
                sign: -1,
                shape: ShapeSpec::ball(&[0.5, 0.0], 0.5),
            },
        ],
    };
    let pts = sample_inside(&shape, 2000, &mut rng).unwrap();
    assert!(pts
        .iter()
        .all(|p| p[0] * p[0] + p[1] * p[1] <= 4.0 && (p[0] - 0.5).powi(2) + p[1] * p[1] >= 0.25));
    // indicator sampling recovers the area to sampling accuracy
    let bb = 16.0;
    let hits = {
        let mut h = 0;
        for i in 0..200_000 {
            let p = common::halton(i, 2);
            let x = [4.0 * p[0] - 2.0, 4.0 * p[1] - 2.0];
            if mindlin_core::geometry::contains(&shape, &x) {
                h += 1;
            }
        }
        h as f64 / 200_000.0 * bb
    };
    let area = mass_properties(&shape).unwrap().volume;
    assert!(common::rel(hits, area) < 2e-3);
}
