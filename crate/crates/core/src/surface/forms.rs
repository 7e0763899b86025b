use super::CoefficientMatrix;

/// `Phi_j(y) = sum_i c_i^j y_i^2`.
pub fn phi(c: &CoefficientMatrix, y: &[f64]) -> Vec<f64> {
    debug_assert_eq!(y.len(), c.k());
    (0..c.l())
        .map(|j| (0..c.k()).map(|i| c.c(i, j) * y[i] * y[i]).sum())
        .collect()
}

/// `(y; Phi(y))` in `R^{k+l}`.
pub fn surface_point(c: &CoefficientMatrix, y: &[f64]) -> Vec<f64> {
    let mut p = y.to_vec();
    p.extend(phi(c, y));
    p
}

/// `(L_1(x, y), ..., L_l(x, y))`.
pub fn bilinear(c: &CoefficientMatrix, x: &[f64], y: &[f64]) -> Vec<f64> {
    debug_assert_eq!(x.len(), c.k());
    debug_assert_eq!(y.len(), c.k());
    (0..c.l())
        .map(|j| (0..c.k()).map(|i| c.c(i, j) * x[i] * y[i]).sum())
        .collect()
}

/// `C zeta`, i.e. the adjoint at `y = (1, ..., 1)`.
pub fn adjoint_one(c: &CoefficientMatrix, zeta: &[f64]) -> Vec<f64> {
    debug_assert_eq!(zeta.len(), c.l());
    (0..c.k())
        .map(|i| (0..c.l()).map(|j| c.c(i, j) * zeta[j]).sum())
        .collect()
}

/// Adjoint of `x -> bilinear(c, x, y)`: `y * (C zeta)` entrywise.
pub fn adjoint(c: &CoefficientMatrix, y: &[f64], zeta: &[f64]) -> Vec<f64> {
    adjoint_one(c, zeta).into_iter().zip(y).map(|(v, yi)| v * yi).collect()
}

/// Upper bound for the operator norm of `D Phi(x)` over `|x|_inf <= r`.
pub fn phi_jacobian_bound(c: &CoefficientMatrix, r: f64) -> f64 {
    2.0 * r * c.frobenius()
}
