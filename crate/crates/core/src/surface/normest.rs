//! The constant `M` with `|zeta| <= M max_{i in P} |(C zeta)_i|` for every
//! `l`-element row set `P`, and the index sets `Q` of `k - l` rows on which
//! `C zeta` is comparable to `|zeta|`.

use itertools::Itertools;
use num_traits::{One, Zero};

use super::{check_star, CoefficientMatrix};
use crate::linalg::norm2;
use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Relative upward nudge applied after the final square root.
const M_ROUNDING_SLACK: f64 = 1e-12;

/// Exact rational Gauss-Jordan inverse; `None` if singular.
fn exact_inverse(m: &[Rational], n: usize) -> Option<Vec<Rational>> {
    let mut a = m.to_vec();
    let mut inv = vec![Rational::zero(); n * n];
    for i in 0..n {
        inv[i * n + i] = Rational::one();
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r * n + col].is_zero())?;
        if pivot != col {
            for c in 0..n {
                a.swap(pivot * n + c, col * n + c);
                inv.swap(pivot * n + c, col * n + c);
            }
        }
        let p = a[col * n + col].clone();
        for c in 0..n {
            a[col * n + c] = &a[col * n + c] / &p;
            inv[col * n + c] = &inv[col * n + c] / &p;
        }
        for r in 0..n {
            if r == col || a[r * n + col].is_zero() {
                continue;
            }
            let f = a[r * n + col].clone();
            for c in 0..n {
                let (ac, ic) = (a[col * n + c].clone(), inv[col * n + c].clone());
                a[r * n + c] -= &f * ac;
                inv[r * n + c] -= &f * ic;
            }
        }
    }
    Some(inv)
}

/// Squared `l_inf -> l_2` norm of the inverse of the `P`-row submatrix,
/// exactly: the maximum of `|B v|^2` over sign vectors `v`.
pub fn subset_m_sq(c: &CoefficientMatrix, rows: &[usize]) -> Result<Rational> {
    let l = c.l();
    let sub: Vec<Rational> = rows
        .iter()
        .flat_map(|&r| (0..l).map(move |j| c.entry(r, j).clone()))
        .collect();
    let inv = exact_inverse(&sub, l).ok_or_else(|| Error::SingularSubmatrix { rows: rows.to_vec() })?;
    let mut best = Rational::zero();
    // v and -v give the same norm, so fix v_0 = +1.
    for mask in 0..(1u64 << (l - 1)) {
        let sign = |j: usize| if j > 0 && mask & (1 << (j - 1)) != 0 { -1 } else { 1 };
        let mut sq = Rational::zero();
        for r in 0..l {
            let mut s = Rational::zero();
            for j in 0..l {
                if sign(j) > 0 {
                    s += &inv[r * l + j];
                } else {
                    s -= &inv[r * l + j];
                }
            }
            sq += &s * &s;
        }
        if sq > best {
            best = sq;
        }
    }
    Ok(best)
}

/// `M^2`, exact.
pub fn constant_m_sq(c: &CoefficientMatrix) -> Result<Rational> {
    let star = check_star(c);
    if let Some(rows) = star.witness {
        return Err(Error::SingularSubmatrix { rows });
    }
    let mut best = Rational::zero();
    for rows in (0..c.k()).combinations(c.l()) {
        let m = subset_m_sq(c, &rows)?;
        if m > best {
            best = m;
        }
    }
    Ok(best)
}

/// The least valid `M`, rounded up by at most `1e-12` relative.
pub fn constant_m(c: &CoefficientMatrix) -> Result<f64> {
    Ok(rational::to_f64(&constant_m_sq(c)?).sqrt() * (1.0 + M_ROUNDING_SLACK))
}

/// `|zeta| <= m |(C zeta)_i|` for every `i` in `q`.
pub fn in_f_q(c: &CoefficientMatrix, zeta: &[f64], m: f64, q: &[usize]) -> bool {
    let v = super::adjoint_one(c, zeta);
    let nz = norm2(zeta);
    q.iter().all(|&i| nz <= m * v[i].abs())
}

/// Lexicographically least `Q` of size `k - l` whose rows all satisfy
/// `|zeta| <= M |(C zeta)_i|`; 0-based and increasing.
pub fn select_q(c: &CoefficientMatrix, zeta: &[f64], m: f64) -> Result<Vec<usize>> {
    let nz = norm2(zeta);
    if nz == 0.0 || !nz.is_finite() {
        return Err(Error::Degenerate("select_q needs a nonzero finite frequency".into()));
    }
    let needed = c.k() - c.l();
    let v = super::adjoint_one(c, zeta);
    let qualifying: Vec<usize> = (0..c.k()).filter(|&i| nz <= m * v[i].abs()).collect();
    if qualifying.len() < needed {
        return Err(Error::InconsistentM { found: qualifying.len(), needed });
    }
    Ok(qualifying[..needed].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::rng;
    use rand::Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn one_column_m_is_inverse_min_entry() {
        let c = CoefficientMatrix::from_integers(3, 1, &[1, 2, 4]).unwrap();
        assert_eq!(constant_m_sq(&c).unwrap(), int(1));
        let c = CoefficientMatrix::from_integers(3, 1, &[3, -2, 4]).unwrap();
        assert_eq!(constant_m_sq(&c).unwrap(), rat(1, 4));
    }

    #[test]
    fn identity_gives_one() {
        let c = CoefficientMatrix::from_integers(2, 2, &[1, 0, 0, 1]).unwrap();
        assert_eq!(constant_m_sq(&c).unwrap(), int(2));
        // |zeta|_2 <= sqrt(2) |zeta|_inf is sharp for the identity.
        let m = constant_m(&c).unwrap();
        assert!((m - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn three_surface_m_is_sqrt5() {
        let c = CoefficientMatrix::example_three_surface();
        assert_eq!(constant_m_sq(&c).unwrap(), int(5));
    }

    #[test]
    fn singular_matrix_rejected() {
        let c = CoefficientMatrix::from_integers(3, 2, &[1, 0, 2, 0, 0, 1]).unwrap();
        assert!(matches!(constant_m(&c), Err(Error::SingularSubmatrix { .. })));
    }

    #[test]
    fn scaling_divides_m() {
        let c = CoefficientMatrix::from_integers(4, 2, &[1, 2, -1, 3, 2, 1, 5, -2]).unwrap();
        let t = rat(7, 3);
        let base = constant_m_sq(&c).unwrap();
        let scaled = constant_m_sq(&c.scaled(&t)).unwrap();
        assert_eq!(scaled * &t * &t, base);
    }

    #[test]
    fn select_q_examples() {
        let c = CoefficientMatrix::paraboloid(3);
        let m = constant_m(&c).unwrap();
        assert_eq!(select_q(&c, &[1.0], m).unwrap(), vec![0, 1]);
        let sq = CoefficientMatrix::from_integers(2, 2, &[1, 0, 0, 1]).unwrap();
        assert!(select_q(&sq, &[0.3, 0.2], constant_m(&sq).unwrap()).unwrap().is_empty());
        assert!(select_q(&c, &[0.0], m).is_err());
        // A deliberately wrong M cannot certify enough rows.
        let c3 = CoefficientMatrix::example_three_surface();
        assert!(matches!(select_q(&c3, &[1.0, -1.0], 0.1), Err(Error::InconsistentM { .. })));
    }

    #[test]
    fn certificate_and_selection_on_random_frequencies() {
        let c = CoefficientMatrix::from_integers(4, 3, &[1, 2, 0, -1, 1, 3, 2, -2, 1, 1, 1, 1]).unwrap();
        let m = constant_m(&c).unwrap();
        let mut r = rng::stream(3, 0);
        for _ in 0..5000 {
            let z: Vec<f64> = (0..3).map(|_| StandardNormal.sample(&mut r)).collect();
            let z: Vec<f64> = z.iter().map(|v| v * r.random_range(0.01..100.0)).collect();
            let v = crate::surface::adjoint_one(&c, &z);
            for rows in (0..4).combinations(3) {
                let sup = rows.iter().map(|&i| v[i].abs()).fold(0.0, f64::max);
                assert!(norm2(&z) <= m * sup);
            }
            let q = select_q(&c, &z, m).unwrap();
            assert_eq!(q.len(), 1);
            assert!(in_f_q(&c, &z, m, &q));
        }
    }
}
