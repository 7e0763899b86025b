use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::CoefficientMatrix;
use crate::rational::{self, Rational};

/// Exact determinant of a square rational matrix (row-major, `n x n`).
///
/// Denominators are cleared first and the integer matrix is reduced by
/// Bareiss fraction-free elimination.
pub fn exact_det(m: &[Rational], n: usize) -> Rational {
    assert_eq!(m.len(), n * n);
    if n == 0 {
        return Rational::one();
    }
    let lcm = m.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let mut a: Vec<BigInt> = m.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for col in 0..n {
        if a[col * n + col].is_zero() {
            match ((col + 1)..n).find(|&r| !a[r * n + col].is_zero()) {
                Some(r) => {
                    for c in 0..n {
                        a.swap(r * n + c, col * n + c);
                    }
                    sign = -sign;
                }
                None => return Rational::zero(),
            }
        }
        for r in (col + 1)..n {
            for c in (col + 1)..n {
                let v = &a[col * n + col] * &a[r * n + c] - &a[r * n + col] * &a[col * n + c];
                a[r * n + c] = v / &prev;
            }
            a[r * n + col] = BigInt::zero();
        }
        prev = a[col * n + col].clone();
    }
    let det_int = sign * &a[n * n - 1];
    BigRational::new(det_int, num_traits::pow(lcm, n))
}

/// Exact determinant of the `l x l` submatrix keeping `rows` (in the given order).
pub fn row_subset_det(c: &CoefficientMatrix, rows: &[usize]) -> Rational {
    let l = c.l();
    assert_eq!(rows.len(), l);
    let sub: Vec<Rational> = rows
        .iter()
        .flat_map(|&r| (0..l).map(move |j| (r, j)))
        .map(|(r, j)| c.entry(r, j).clone())
        .collect();
    exact_det(&sub, l)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarReport {
    pub holds: bool,
    /// `min |det|` over all `l x l` row-submatrices; this is the constant `c(C)`.
    #[serde(with = "crate::rational::json")]
    pub min_abs_det: Rational,
    /// Lexicographically least row set (0-based) with vanishing determinant.
    pub witness: Option<Vec<usize>>,
}

/// Checks that every `l x l` row-submatrix is nonsingular, exactly.
pub fn check_star(c: &CoefficientMatrix) -> StarReport {
    let mut min_abs: Option<Rational> = None;
    let mut witness = None;
    for rows in (0..c.k()).combinations(c.l()) {
        let det = row_subset_det(c, &rows).abs();
        if det.is_zero() && witness.is_none() {
            witness = Some(rows.clone());
        }
        min_abs = Some(match min_abs {
            Some(m) if m <= det => m,
            _ => det,
        });
    }
    let min_abs_det = min_abs.expect("at least one submatrix");
    StarReport { holds: min_abs_det.is_positive(), min_abs_det, witness }
}

impl StarReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "holds": self.holds,
            "min_abs_det": rational::to_json(&self.min_abs_det),
            "witness": self.witness,
        })
    }
}
