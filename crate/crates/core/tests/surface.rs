mod common;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use surfconv::linalg::{dot, norm2};
use surfconv::rational::{int, rat, Rational};
use surfconv::surface::*;
use surfconv::Error;

fn example_iv() -> CoefficientMatrix {
    CoefficientMatrix::from_integers(3, 2, &[1, 0, 1, 1, 0, 1]).unwrap()
}

#[test]
fn three_surface_minors() {
    let r = check_star(&example_iv());
    assert!(r.holds);
    assert_eq!(r.min_abs_det, int(1));
    assert_eq!(r.witness, None);
    for rows in (0..3).combinations(2) {
        assert_eq!(row_subset_det(&example_iv(), &rows).abs(), int(1));
    }
}

#[test]
fn proportional_rows_fail_with_first_witness() {
    let c = CoefficientMatrix::from_integers(3, 2, &[1, 0, 2, 0, 0, 1]).unwrap();
    let r = check_star(&c);
    assert!(!r.holds);
    assert_eq!(r.min_abs_det, int(0));
    assert_eq!(r.witness, Some(vec![0, 1]));
}

#[test]
fn single_column_needs_nonzero_entries() {
    assert!(check_star(&CoefficientMatrix::from_integers(4, 1, &[1, 1, 1, 1]).unwrap()).holds);
    let r = check_star(&CoefficientMatrix::from_integers(4, 1, &[1, 3, 0, 2]).unwrap());
    assert_eq!(r.witness, Some(vec![2]));
}

#[test]
fn forms_by_hand() {
    let c = example_iv();
    assert_eq!(phi(&c, &[1.0, 1.0, 1.0]), vec![2.0, 2.0]);
    assert_eq!(phi(&c, &[0.0; 3]), vec![0.0, 0.0]);
    assert_eq!(adjoint(&c, &[1.0; 3], &[1.0, 0.0]), vec![1.0, 1.0, 0.0]);
    assert_eq!(surface_point(&c, &[1.0, 2.0, 3.0]), vec![1.0, 2.0, 3.0, 5.0, 13.0]);
}

#[test]
fn jacobian_by_hand() {
    let c = example_iv();
    let part = Partition::new(3, 2, &[0, 1, 2]).unwrap();
    assert_eq!(jacobian_closed_form(&c, &[1.0; 3], &[1.0, 1.0], &part), 1.0);
    let sq = CoefficientMatrix::from_integers(2, 2, &[2, 1, 1, 3]).unwrap();
    let part = Partition::new(2, 2, &[0, 1]).unwrap();
    assert!((jacobian_closed_form(&sq, &[1.5, -2.0], &[0.3, 0.4], &part) - 3.0 * 5.0).abs() < 1e-12);
    let one = CoefficientMatrix::from_integers(1, 1, &[-3]).unwrap();
    let part = Partition::new(1, 1, &[0]).unwrap();
    let fd = jacobian_fd(&one, &[1.7], &[0.4], &part, 1e-5);
    assert!((fd.value - 3.0 * 1.7).abs() < 1e-9);
}

#[test]
fn m_for_identity_and_column() {
    let id = CoefficientMatrix::from_integers(2, 2, &[1, 0, 0, 1]).unwrap();
    assert_eq!(constant_m_sq(&id).unwrap(), int(2));
    let col = CoefficientMatrix::from_integers(3, 1, &[1, 2, 4]).unwrap();
    assert_eq!(constant_m_sq(&col).unwrap(), int(1));
    assert_eq!(constant_m_sq(&example_iv()).unwrap(), int(5));
    let bad = CoefficientMatrix::from_integers(3, 2, &[1, 0, 2, 0, 0, 1]).unwrap();
    assert!(matches!(constant_m(&bad), Err(Error::SingularSubmatrix { .. })));
}

#[test]
fn select_q_examples() {
    let ones = CoefficientMatrix::from_integers(3, 1, &[1, 1, 1]).unwrap();
    let m = constant_m(&ones).unwrap();
    assert_eq!(select_q(&ones, &[1.0], m).unwrap(), vec![0, 1]);
    let sq = CoefficientMatrix::from_integers(2, 2, &[1, 2, 3, 4]).unwrap();
    assert_eq!(select_q(&sq, &[0.3, 0.1], constant_m(&sq).unwrap()).unwrap(), Vec::<usize>::new());
    assert!(select_q(&ones, &[0.0], m).is_err());
    assert!(matches!(select_q(&ones, &[1.0], 0.5), Err(Error::InconsistentM { .. })));
}

#[test]
fn shells() {
    assert_eq!(dyadic_shell_index(&[1.0, 1.0, 1.0]).unwrap().n, vec![0, 0, 0]);
    assert_eq!(dyadic_shell_index(&[0.3, -1.5]).unwrap().n, vec![-2, 0]);
    assert!(matches!(dyadic_shell_index(&[1.0, 0.0]), Err(Error::UndefinedShell { index: 1 })));
    assert_eq!(dyadic_shell_index(&[1.0, 1.0]).unwrap().volume(), 4.0);
}

#[test]
fn jest_on_three_surface() {
    let r = verify_jest(&example_iv(), 20_000, 3).unwrap();
    assert!(r.passed(), "{r:?}");
    assert!(r.min_ratio >= 1.0);
    let sq = CoefficientMatrix::from_integers(2, 2, &[2, 1, 1, 3]).unwrap();
    assert_eq!(jest_lower_bound(&sq).unwrap(), 5.0);
}

#[test]
fn curvature_identities() {
    let q: SymMatrix2 = [[int(1), rat(1, 2)], [rat(1, 2), int(3)]];
    assert_eq!(curvature_2_4(&q, &q).unwrap(), int(0));
    let c = CoefficientMatrix::from_integers(2, 2, &[1, 0, 0, 1]).unwrap();
    let (a, b) = diagonal_forms(&c).unwrap();
    assert_eq!(curvature_2_4(&a, &b).unwrap(), int(-16));
}

fn int_matrix(k: usize, l: usize) -> impl Strategy<Value = CoefficientMatrix> {
    proptest::collection::vec(-9i64..=9, k * l).prop_map(move |v| CoefficientMatrix::from_integers(k, l, &v).unwrap())
}

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=5).prop_flat_map(|k| (Just(k), 1..=k))
}

fn star_matrix() -> impl Strategy<Value = CoefficientMatrix> {
    shape().prop_flat_map(|(k, l)| int_matrix(k, l)).prop_filter("minor condition", |c| check_star(c).holds)
}

fn unit_f64() -> impl Strategy<Value = f64> {
    -1.0f64..1.0
}

proptest! {
    #[test]
    fn minors_match_permutation_expansion(c in shape().prop_flat_map(|(k, l)| int_matrix(k, l))) {
        let (k, l) = (c.k(), c.l());
        let mut min: Option<Rational> = None;
        for rows in (0..k).combinations(l) {
            let sub: Vec<Rational> = rows.iter().flat_map(|&r| (0..l).map(move |j| (r, j))).map(|(r, j)| c.entry(r, j).clone()).collect();
            let det = common::leibniz_det(&sub, l);
            prop_assert_eq!(&det, &row_subset_det(&c, &rows));
            min = Some(match min { Some(m) if m <= det.abs() => m, _ => det.abs() });
        }
        let r = check_star(&c);
        prop_assert_eq!(r.min_abs_det.clone(), min.unwrap());
        prop_assert_eq!(r.holds, !r.min_abs_det.is_zero());
        prop_assert_eq!(r.holds, r.witness.is_none());
    }

    #[test]
    fn minors_are_permutation_invariant(c in shape().prop_flat_map(|(k, l)| int_matrix(k, l)), seed in 0u64..1000) {
        let (k, l) = (c.k(), c.l());
        let mut rows: Vec<usize> = (0..k).collect();
        let mut cols: Vec<usize> = (0..l).collect();
        rows.rotate_left(seed as usize % k);
        cols.reverse();
        let a = check_star(&c);
        let b = check_star(&c.permute_rows(&rows).permute_cols(&cols));
        prop_assert_eq!(a.holds, b.holds);
        prop_assert_eq!(a.min_abs_det, b.min_abs_det);
    }

    #[test]
    fn scaling_rescales_m_and_minors(c in star_matrix(), n in 1i64..7, d in 1i64..7) {
        let t = rat(n, d);
        let s = c.scaled(&t);
        let l = c.l() as i32;
        prop_assert_eq!(constant_m_sq(&s).unwrap(), constant_m_sq(&c).unwrap() / (&t * &t));
        let mut tl = int(1);
        for _ in 0..l { tl *= &t; }
        prop_assert_eq!(check_star(&s).min_abs_det, check_star(&c).min_abs_det * &tl);
        let ratio = jest_lower_bound(&s).unwrap() / jest_lower_bound(&c).unwrap();
        let expected = surfconv::rational::to_f64(&t).powi(l + (c.k() - c.l()) as i32);
        prop_assert!((ratio / expected - 1.0).abs() < 1e-9);
    }

    #[test]
    fn adjoint_identity(c in shape().prop_flat_map(|(k, l)| int_matrix(k, l)), seed in any::<u64>()) {
        use rand::Rng;
        let mut r = surfconv::rng::stream(seed, 0);
        let (k, l) = (c.k(), c.l());
        for _ in 0..50 {
            let x: Vec<f64> = (0..k).map(|_| r.random_range(-3.0..3.0)).collect();
            let y: Vec<f64> = (0..k).map(|_| r.random_range(-3.0..3.0)).collect();
            let z: Vec<f64> = (0..l).map(|_| r.random_range(-3.0..3.0)).collect();
            let lhs = dot(&adjoint(&c, &y, &z), &x);
            let rhs = dot(&z, &bilinear(&c, &x, &y));
            let scale = 1.0 + c.max_abs() * norm2(&x) * norm2(&y) * norm2(&z);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
            let bb = bilinear(&c, &y, &y);
            let ph = phi(&c, &y);
            for j in 0..l { prop_assert!((bb[j] - ph[j]).abs() <= 1e-12 * (1.0 + ph[j].abs())); }
        }
    }

    #[test]
    fn phi_is_quadratic(c in shape().prop_flat_map(|(k, l)| int_matrix(k, l)), t in -4.0f64..4.0, y0 in unit_f64(), y1 in unit_f64()) {
        let y: Vec<f64> = (0..c.k()).map(|i| if i % 2 == 0 { y0 } else { y1 }).collect();
        let ty: Vec<f64> = y.iter().map(|v| t * v).collect();
        for (a, b) in phi(&c, &ty).iter().zip(phi(&c, &y)) {
            prop_assert!((a - t * t * b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn m_certificate_and_q_selection(c in star_matrix(), seed in any::<u64>()) {
        use rand::Rng;
        let mut r = surfconv::rng::stream(seed, 1);
        let m = constant_m(&c).unwrap();
        for _ in 0..100 {
            let z: Vec<f64> = (0..c.l()).map(|_| r.random_range(-1.0..1.0)).collect();
            if norm2(&z) == 0.0 { continue; }
            let v = adjoint_one(&c, &z);
            for rows in (0..c.k()).combinations(c.l()) {
                let best = rows.iter().map(|&i| v[i].abs()).fold(0.0, f64::max);
                prop_assert!(norm2(&z) <= (m + 1e-9) * best);
            }
            prop_assert!(norm2(&z) <= m * norm2(&v) * (1.0 + 1e-12));
            let q = select_q(&c, &z, m).unwrap();
            prop_assert_eq!(q.len(), c.k() - c.l());
            prop_assert!(q.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(in_f_q(&c, &z, m, &q));
            let scaled: Vec<f64> = z.iter().map(|v| 3.5 * v).collect();
            prop_assert_eq!(select_q(&c, &scaled, m).unwrap(), q);
        }
    }

    #[test]
    fn jacobian_matches_finite_differences(c in star_matrix(), seed in any::<u64>()) {
        use rand::Rng;
        let mut r = surfconv::rng::stream(seed, 2);
        let (k, l) = (c.k(), c.l());
        let m = constant_m(&c).unwrap();
        for _ in 0..10 {
            let y: Vec<f64> = (0..k).map(|_| r.random_range(1.0..2.0) * if r.random::<bool>() { -1.0 } else { 1.0 }).collect();
            let z: Vec<f64> = (0..l).map(|_| r.random_range(-1.0..1.0)).collect();
            if norm2(&z) < 0.1 { continue; }
            let q = select_q(&c, &z, m).unwrap();
            let part = Partition::from_tail(k, &q);
            let exact = jacobian_closed_form(&c, &y, &z, &part);
            let fd = jacobian_fd(&c, &y, &z, &part, 1e-5);
            prop_assert!((fd.value - exact).abs() <= 1e-6 * exact, "{} vs {}", fd.value, exact);
        }
    }

    #[test]
    fn shell_contains_its_point(y in proptest::collection::vec(prop_oneof![-100.0f64..-1e-6, 1e-6f64..100.0], 1..6)) {
        let s = dyadic_shell_index(&y).unwrap();
        prop_assert!(s.contains(&y));
    }

    #[test]
    fn diagonal_curvature_is_minus_sixteen_det_squared(v in proptest::collection::vec(-20i64..=20, 4), dens in proptest::collection::vec(1i64..=5, 4)) {
        let entries: Vec<Rational> = v.iter().zip(&dens).map(|(&n, &d)| rat(n, d)).collect();
        let c = CoefficientMatrix::new(2, 2, entries.clone()).unwrap();
        let (a, b) = diagonal_forms(&c).unwrap();
        let det = &entries[0] * &entries[3] - &entries[1] * &entries[2];
        let k = curvature_2_4(&a, &b).unwrap();
        prop_assert_eq!(&k, &(int(-16) * &det * &det));
        prop_assert_eq!(k.is_zero(), !check_star(&c).holds);
    }
}
