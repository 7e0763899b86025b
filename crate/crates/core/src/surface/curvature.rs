//! The curvature expression for two quadratic forms in two variables.

use num_traits::Zero;

use super::CoefficientMatrix;
use crate::rational::{int, Rational};
use crate::{Error, Result};

pub type SymMatrix2 = [[Rational; 2]; 2];

/// `(P1_11 P2_12 - P2_11 P1_12)(P2_22 P1_12 - P2_12 P1_22) - (P1_11 P2_22 - P2_11 P1_22)^2`
/// where `Pj_ab = 2 Qj[a][b]` are the second partials of `y^T Qj y`.
pub fn curvature_2_4(q1: &SymMatrix2, q2: &SymMatrix2) -> Result<Rational> {
    for q in [q1, q2] {
        if q[0][1] != q[1][0] {
            return Err(Error::Precondition("quadratic form matrix must be symmetric".into()));
        }
    }
    let two = int(2);
    let p = |q: &SymMatrix2, a: usize, b: usize| &two * &q[a][b];
    let (p1_11, p1_12, p1_22) = (p(q1, 0, 0), p(q1, 0, 1), p(q1, 1, 1));
    let (p2_11, p2_12, p2_22) = (p(q2, 0, 0), p(q2, 0, 1), p(q2, 1, 1));
    let a = &p1_11 * &p2_12 - &p2_11 * &p1_12;
    let b = &p2_22 * &p1_12 - &p2_12 * &p1_22;
    let c = &p1_11 * &p2_22 - &p2_11 * &p1_22;
    Ok(a * b - &c * &c)
}

/// `Q_j = diag(c_1^j, c_2^j)` for a `2 x 2` coefficient matrix.
pub fn diagonal_forms(c: &CoefficientMatrix) -> Result<(SymMatrix2, SymMatrix2)> {
    if c.k() != 2 || c.l() != 2 {
        return Err(Error::InvalidDimension("diagonal forms need a 2x2 matrix".into()));
    }
    let diag = |j: usize| -> SymMatrix2 {
        [
            [c.entry(0, j).clone(), Rational::zero()],
            [Rational::zero(), c.entry(1, j).clone()],
        ]
    };
    Ok((diag(0), diag(1)))
}
