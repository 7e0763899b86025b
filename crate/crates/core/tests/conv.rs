mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use surfconv::conv::*;
use surfconv::gaussian::GaussianSpec;
use surfconv::rational::rat;
use surfconv::surface::CoefficientMatrix;

#[test]
fn measure_mass_tends_to_ball_volume() {
    let mu = SurfaceMeasure::new(&CoefficientMatrix::paraboloid(2), 512).unwrap();
    assert!((mu.total_mass() / PI - 1.0).abs() < 1e-3, "{}", mu.total_mass());
    let mu = SurfaceMeasure::new(&CoefficientMatrix::paraboloid(1), 100).unwrap();
    assert!((mu.total_mass() - 2.0).abs() < 1e-12);
    let c = CoefficientMatrix::example_three_surface();
    let mu = SurfaceMeasure::new(&c, 96).unwrap();
    assert!((mu.total_mass() / common::ball_volume(3) - 1.0).abs() < 5e-3);
    assert_eq!(mu.atoms().len() as u64, mu.atom_count());
    let first = &mu.atoms()[0];
    assert_eq!(first.point[3], first.y[0].powi(2) + first.y[1].powi(2));
    assert_eq!(first.point[4], first.y[1].powi(2) + first.y[2].powi(2));
}

#[test]
fn integrate_matches_polar_moment() {
    let mu = SurfaceMeasure::new(&CoefficientMatrix::paraboloid(2), 400).unwrap();
    // int_{|y|<1} |y|^2 dy = pi / 2
    let m = mu.integrate(|p| p[2]);
    assert!((m / (PI / 2.0) - 1.0).abs() < 2e-3, "{m}");
}

#[test]
fn total_integral_is_mass_times_volume() {
    let c = CoefficientMatrix::example_three_surface();
    let mu = SurfaceMeasure::new(&c, 24).unwrap();
    let e = TestSet::ball(vec![0.1, 0.0, -0.1, 0.3, 0.2], 0.3).unwrap();
    let est = lq_norm_mc(&mu, &e, 1.0, &SamplerSpec { samples: 1 << 17, strata: 4, seed: 5 }).unwrap();
    let exact = mu.total_mass() * e.measure();
    assert!((est.integral / exact - 1.0).abs() < 0.03, "{} +- {} vs {exact}", est.integral, est.integral_stderr);
    assert!((e.measure() - common::ball_volume(5) * 0.3f64.powi(5)).abs() < 1e-15);
}

#[test]
fn parabola_ball_norm_against_dense_grid() {
    let c = CoefficientMatrix::paraboloid(1);
    let delta = 1.0 / 16.0;
    let q = 3.0;
    let mu = SurfaceMeasure::with_spacing(&c, delta / 64.0).unwrap();
    let e = TestSet::ball(vec![0.0, 0.0], delta).unwrap();
    let est = lq_norm_mc(&mu, &e, q, &SamplerSpec { samples: 1 << 15, strata: 8, seed: 3 }).unwrap();
    let oracle = common::parabola_ball_norm_q(delta, q, 16, 256);
    assert!((est.integral / oracle - 1.0).abs() < 0.05, "{} vs {oracle}", est.integral);
}

#[test]
fn ball_exponents() {
    assert_eq!(ball_exponent(1, 1).unwrap(), rat(4, 3));
    assert_eq!(ball_exponent(2, 1).unwrap(), rat(9, 4));
    assert_eq!(ball_exponent(3, 2).unwrap(), rat(25, 7));
}

#[test]
fn paraboloid_ball_scaling() {
    let c = CoefficientMatrix::paraboloid(2);
    let deltas = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0];
    let cfg = BallScanConfig { sampler: SamplerSpec { samples: 8192, strata: 8, seed: 9 }, cells_per_delta: 8, random_centres: 1 };
    let scan = ball_scaling_experiment(&c, &deltas, &[rat(1, 2)], &cfg).unwrap();
    assert!((scan.fitted_exponent - 2.25).abs() < 0.15, "{}", scan.fitted_exponent);
    assert_eq!(scan.rows.len(), 2 * deltas.len());
}

#[test]
fn one_dim_ineq6_against_erf() {
    let sigma = 0.5;
    let f = GaussianSpec::isotropic(1, sigma);
    let cases = [(1i64, (1.1, 1.6), (-0.3, 0.4)), (-2, (-1.9, -1.2), (0.1, 1.5)), (3, (-1.5, 1.5), (-1.0, 1.0))];
    for (cv, (y0, y1), (u0, u1)) in cases {
        let c = CoefficientMatrix::from_integers(1, 1, &[cv]).unwrap();
        let e = TestSet::box_union(vec![(vec![y0, u0], vec![y1, u1])]).unwrap();
        let r = ineq6_check(&c, &f, &[e], &Ineq6Config { samples: 200_000, seed: 4 }).unwrap();
        let oracle = common::one_dim_ineq6_lhs(cv as f64, sigma, y0, y1, u0, u1);
        assert!((r.rows[0].lhs / oracle - 1.0).abs() < 0.05, "c={cv}: {} vs {oracle}", r.rows[0].lhs);
        let g = f.build().unwrap();
        let l2 = common::simpson(-6.0, 6.0, 4000, |x| g.value(&[x]).powi(2)).sqrt();
        let area = (y1 - y0) * (u1 - u0);
        assert!((r.rows[0].rhs / (l2 * area.sqrt()) - 1.0).abs() < 1e-6);
    }
}

#[test]
fn shell_sum_matches_direct() {
    let c = CoefficientMatrix::paraboloid(2);
    let f = GaussianSpec::isotropic(2, 0.5);
    let e = TestSet::box_union(vec![(vec![-1.5, 0.2, -0.5], vec![0.8, 1.7, 0.5])]).unwrap();
    let r = ineq6_shell_sum(&c, &f, &e, 2, &Ineq6Config { samples: 40_000, seed: 2 }).unwrap();
    assert_eq!(r.shells.len(), 9);
    let tol = 4.0 * (r.shell_stderr.powi(2) + r.direct_stderr.powi(2)).sqrt();
    assert!((r.shell_total - r.direct).abs() < tol, "{r:?}");
}

#[test]
fn empty_set_everywhere() {
    let c = CoefficientMatrix::paraboloid(2);
    let mu = SurfaceMeasure::new(&c, 16).unwrap();
    let e = TestSet::Empty { dim: 3 };
    assert_eq!(mu.convolve_at(&e, &[0.0, 0.0, 0.0]), 0.0);
    assert_eq!(lq_norm_mc(&mu, &e, 2.0, &SamplerSpec::default()).unwrap().norm, 0.0);
    let r = ineq6_check(&c, &GaussianSpec::isotropic(2, 0.5), &[e], &Ineq6Config::default()).unwrap();
    assert_eq!(r.rows[0].lhs, 0.0);
    assert_eq!(r.rows[0].ratio, 0.0);
}

#[test]
fn slope_fit_recovers_a_line() {
    let xs = [0.0, 1.0, 2.0, 3.0];
    let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 1.0).collect();
    let (s, b) = fit_slope(&xs, &ys);
    assert!((s - 2.5).abs() < 1e-12 && (b + 1.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn convolution_is_translation_covariant(
        z in proptest::collection::vec(-1.0f64..1.0, 3),
        v in proptest::collection::vec(-0.5f64..0.5, 3),
        r in 0.1f64..0.4,
    ) {
        let c = CoefficientMatrix::paraboloid(2);
        let mu = SurfaceMeasure::new(&c, 64).unwrap();
        let e = TestSet::ball(vec![0.0; 3], r).unwrap();
        let zt: Vec<f64> = z.iter().zip(&v).map(|(a, b)| a + b).collect();
        let a = mu.convolve_at(&e.translated(&v), &zt);
        let b = mu.convolve_at(&e, &z);
        prop_assert!((a - b).abs() <= 3.0 * mu.weight() + 1e-9 * b);
    }

    #[test]
    fn convolution_is_monotone_in_the_set(z in proptest::collection::vec(-1.0f64..1.0, 2), r in 0.05f64..0.3) {
        let c = CoefficientMatrix::paraboloid(1);
        let mu = SurfaceMeasure::new(&c, 256).unwrap();
        let small = TestSet::ball(vec![0.0; 2], r).unwrap();
        let big = TestSet::ball(vec![0.0; 2], 1.5 * r).unwrap();
        prop_assert!(mu.convolve_at(&small, &z) <= mu.convolve_at(&big, &z));
        prop_assert!(mu.convolve_at(&big, &z) <= mu.total_mass());
    }
}

#[test]
fn huge_box_saturates() {
    let c = CoefficientMatrix::paraboloid(2);
    let f = GaussianSpec { mean: vec![0.1, -0.2], cov: vec![0.2, 0.0, 0.0, 0.3], amplitude: 1.5 };
    let small = TestSet::box_union(vec![(vec![-3.0, -3.0, -40.0], vec![3.0, 3.0, 40.0])]).unwrap();
    let big = TestSet::box_union(vec![(vec![-3.0, -3.0, -80.0], vec![3.0, 3.0, 80.0])]).unwrap();
    let r = ineq6_check(&c, &f, &[small, big], &Ineq6Config { samples: 20_000, seed: 1 }).unwrap();
    for row in &r.rows {
        assert!((row.lhs / (1.5 * 4.0) - 1.0).abs() < 1e-9, "{row:?}");
    }
    let expected = (r.rows[1].measure / r.rows[0].measure).powf(-2.0 / 3.0);
    assert!((r.rows[1].ratio / r.rows[0].ratio / expected - 1.0).abs() < 1e-9);
}
