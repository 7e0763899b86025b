//! Jacobian of `(zeta, y_Q) -> tau`, `tau_i = y_i (C zeta)_i`, where the
//! coordinates `y_i` outside `Q` are frozen.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::{adjoint_one, check_star, constant_m, row_subset_det, select_q, CoefficientMatrix};
use crate::linalg::{self, norm2};
use crate::rational::{self, Rational};
use crate::rng;
use crate::{Error, Result};

/// An ordering `(i_1, ..., i_k)` of the rows: `head` holds the `l` rows whose
/// `y` coordinates are frozen, `tail` the `k - l` rows whose `y` coordinates
/// are integration variables (increasing).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub head: Vec<usize>,
    pub tail: Vec<usize>,
}

impl Partition {
    pub fn new(k: usize, l: usize, order: &[usize]) -> Result<Self> {
        if order.len() != k || l > k {
            return Err(Error::Precondition(format!("partition must list all {k} rows")));
        }
        let mut seen = vec![false; k];
        for &i in order {
            if i >= k || seen[i] {
                return Err(Error::Precondition(format!("{order:?} is not a permutation of 0..{k}")));
            }
            seen[i] = true;
        }
        let tail = order[l..].to_vec();
        if tail.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition("tail of the partition must be increasing".into()));
        }
        Ok(Self { head: order[..l].to_vec(), tail })
    }

    /// Head is the increasing complement of `tail`.
    pub fn from_tail(k: usize, tail: &[usize]) -> Self {
        let head = (0..k).filter(|i| !tail.contains(i)).collect();
        Self { head, tail: tail.to_vec() }
    }
}

/// `prod_head |y_i| * |D(head)| * prod_tail |(C zeta)_i|`.
pub fn jacobian_closed_form(c: &CoefficientMatrix, y: &[f64], zeta: &[f64], part: &Partition) -> f64 {
    let d = rational::to_f64(&row_subset_det(c, &part.head)).abs();
    jacobian_closed_form_with_det(c, y, zeta, part, d)
}

/// [`jacobian_closed_form`] with `|D(head)|` supplied.
pub fn jacobian_closed_form_with_det(c: &CoefficientMatrix, y: &[f64], zeta: &[f64], part: &Partition, det: f64) -> f64 {
    let v = adjoint_one(c, zeta);
    let ys: f64 = part.head.iter().map(|&i| y[i].abs()).product();
    let vs: f64 = part.tail.iter().map(|&i| v[i].abs()).product();
    ys * det * vs
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FdJacobian {
    pub value: f64,
    pub warning: Option<String>,
}

/// Central-difference Jacobian determinant of the map in the module docs.
pub fn jacobian_fd(c: &CoefficientMatrix, y: &[f64], zeta: &[f64], part: &Partition, h: f64) -> FdJacobian {
    let (k, l) = (c.k(), c.l());
    let map = |vars: &[f64]| -> Vec<f64> {
        let (z, yq) = vars.split_at(l);
        let mut yy = y.to_vec();
        for (&i, &v) in part.tail.iter().zip(yq) {
            yy[i] = v;
        }
        adjoint_one(c, z).iter().zip(&yy).map(|(v, yi)| v * yi).collect()
    };
    let mut vars: Vec<f64> = zeta.to_vec();
    vars.extend(part.tail.iter().map(|&i| y[i]));

    let mut jac = vec![0.0; k * k];
    for col in 0..k {
        let mut plus = vars.clone();
        let mut minus = vars.clone();
        plus[col] += h;
        minus[col] -= h;
        let (fp, fm) = (map(&plus), map(&minus));
        for row in 0..k {
            jac[row * k + col] = (fp[row] - fm[row]) / (2.0 * h);
        }
    }
    let value = linalg::det(&jac, k).abs();

    let v = adjoint_one(c, zeta);
    let mut warning = None;
    let small_y = part.head.iter().any(|&i| y[i].abs() <= 1e-6);
    let small_v = part.tail.iter().any(|&i| v[i].abs() <= 1e-6);
    if small_y || small_v {
        warning = Some("configuration within 1e-6 of a degenerate point".to_string());
    } else {
        // Hadamard ratio: |det| against the product of column norms.
        let col_norms: f64 = (0..k)
            .map(|col| (0..k).map(|r| jac[r * k + col].powi(2)).sum::<f64>().sqrt())
            .product();
        if col_norms > 0.0 && value / col_norms < 1e-10 {
            warning = Some(format!("near-singular difference matrix (Hadamard ratio {:.3e})", value / col_norms));
        }
    }
    FdJacobian { value, warning }
}

/// `c(C) / M^{k-l}`.
pub fn jest_lower_bound(c: &CoefficientMatrix) -> Result<f64> {
    let star = check_star(c);
    if let Some(rows) = star.witness {
        return Err(Error::SingularSubmatrix { rows });
    }
    let m = constant_m(c)?;
    Ok(rational::to_f64(&star.min_abs_det) / m.powi((c.k() - c.l()) as i32))
}

#[derive(Debug, Clone, Serialize)]
pub struct JestReport {
    pub samples: usize,
    pub lower_bound: f64,
    pub m: f64,
    #[serde(with = "crate::rational::json")]
    pub c_matrix: Rational,
    /// `min J / (c_J |zeta|^{k-l})` over the samples.
    pub min_ratio: f64,
    /// First sample violating the bound, as `(y, zeta, J)`.
    pub counterexample: Option<(Vec<f64>, Vec<f64>, f64)>,
}

impl JestReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none() && self.min_ratio >= 1.0
    }
}

/// Samples `y` with `|y_i|` in `[1, 2)` and random signs, random nonzero
/// `zeta` over four decades of scale, and checks `J >= c_J |zeta|^{k-l}`
/// with `Q` from [`select_q`].
pub fn verify_jest(c: &CoefficientMatrix, samples: usize, seed: u64) -> Result<JestReport> {
    let star = check_star(c);
    if let Some(rows) = star.witness {
        return Err(Error::SingularSubmatrix { rows });
    }
    let m = constant_m(c)?;
    let (k, l) = (c.k(), c.l());
    let cj = rational::to_f64(&star.min_abs_det) / m.powi((k - l) as i32);

    // |D| per head set, computed once.
    let mut det_cache = std::collections::HashMap::new();
    let mut r = rng::stream(seed, rng::label_id("verify_jest"));
    let mut min_ratio = f64::INFINITY;
    let mut counterexample = None;
    for _ in 0..samples {
        let y: Vec<f64> = (0..k)
            .map(|_| {
                let mag: f64 = r.random_range(1.0..2.0);
                if r.random::<bool>() { mag } else { -mag }
            })
            .collect();
        let scale = 10f64.powf(r.random_range(-2.0..2.0));
        let zeta: Vec<f64> = loop {
            let z: Vec<f64> = (0..l).map(|_| StandardNormal.sample(&mut r)).collect();
            if norm2(&z) > 1e-12 {
                break z.into_iter().map(|v: f64| v * scale).collect();
            }
        };
        let q = select_q(c, &zeta, m)?;
        let part = Partition::from_tail(k, &q);
        let det = *det_cache
            .entry(part.head.clone())
            .or_insert_with(|| rational::to_f64(&row_subset_det(c, &part.head)).abs());
        let j = jacobian_closed_form_with_det(c, &y, &zeta, &part, det);
        let ratio = j / (cj * norm2(&zeta).powi((k - l) as i32));
        if ratio < min_ratio {
            min_ratio = ratio;
        }
        if ratio < 1.0 && counterexample.is_none() {
            counterexample = Some((y, zeta, j));
        }
    }
    Ok(JestReport { samples, lower_bound: cj, m, c_matrix: star.min_abs_det, min_ratio, counterexample })
}
