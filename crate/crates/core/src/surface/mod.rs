//! Quadratic graph surfaces built from a `k x l` coefficient matrix.
//!
//! Row `i` of the matrix holds `c_i^1 .. c_i^l`. The forms are
//! `L_j(x, y) = sum_i c_i^j x_i y_i`, the graph components are
//! `Phi_j(y) = L_j(y, y)`, and the adjoint of `x -> (L_j(x, y))_j` is
//! `zeta -> y * (C zeta)` (entrywise product).

mod curvature;
mod forms;
mod jacobian;
mod normest;
mod shell;
mod star;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};
use crate::{Error, Result};

pub use curvature::{curvature_2_4, diagonal_forms, SymMatrix2};
pub use forms::{adjoint, adjoint_one, bilinear, phi, phi_jacobian_bound, surface_point};
pub use jacobian::{
    jacobian_closed_form, jacobian_closed_form_with_det, jacobian_fd, jest_lower_bound, verify_jest, FdJacobian, JestReport, Partition,
};
pub use normest::{constant_m, constant_m_sq, in_f_q, select_q, subset_m_sq};
pub use shell::{dyadic_shell_index, ShellIndex};
pub use star::{check_star, exact_det, row_subset_det, StarReport};

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    k: usize,
    l: usize,
    entries: Vec<Rational>,
    float_view: Vec<f64>,
}

impl CoefficientMatrix {
    /// `entries` is row-major, `k` rows of `l` entries.
    pub fn new(k: usize, l: usize, entries: Vec<Rational>) -> Result<Self> {
        if l == 0 || l > k {
            return Err(Error::InvalidDimension(format!("need 1 <= l <= k, got k = {k}, l = {l}")));
        }
        if entries.len() != k * l {
            return Err(Error::InvalidDimension(format!(
                "expected {} entries for a {k}x{l} matrix, got {}",
                k * l,
                entries.len()
            )));
        }
        let float_view = entries.iter().map(rational::to_f64).collect();
        Ok(Self { k, l, entries, float_view })
    }

    pub fn from_integers(k: usize, l: usize, entries: &[i64]) -> Result<Self> {
        Self::new(k, l, entries.iter().map(|&e| rational::int(e)).collect())
    }

    /// The matrix behind the 3-surface `(y; y1^2 + y2^2, y2^2 + y3^2)` in `R^5`.
    pub fn example_three_surface() -> Self {
        Self::from_integers(3, 2, &[1, 0, 1, 1, 0, 1]).expect("static shape")
    }

    /// Single column of ones: the paraboloid `(y; |y|^2)`.
    pub fn paraboloid(k: usize) -> Self {
        Self::from_integers(k, 1, &vec![1; k]).expect("static shape")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn d(&self) -> usize {
        self.k + self.l
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.l + j]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// Nearest-double view, row-major.
    pub fn floats(&self) -> &[f64] {
        &self.float_view
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize) -> f64 {
        self.float_view[i * self.l + j]
    }

    pub fn scaled(&self, t: &Rational) -> Self {
        Self::new(self.k, self.l, self.entries.iter().map(|e| e * t).collect()).expect("same shape")
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let entries = perm
            .iter()
            .flat_map(|&r| self.entries[r * self.l..(r + 1) * self.l].iter().cloned())
            .collect();
        Self::new(self.k, self.l, entries).expect("same shape")
    }

    pub fn permute_cols(&self, perm: &[usize]) -> Self {
        let entries = (0..self.k)
            .flat_map(|r| perm.iter().map(move |&c| (r, c)))
            .map(|(r, c)| self.entries[r * self.l + c].clone())
            .collect();
        Self::new(self.k, self.l, entries).expect("same shape")
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.float_view.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.float_view.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn has_negative(&self) -> bool {
        self.entries.iter().any(|e| e.is_negative())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(MatrixFile::from(self.clone())).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let file: MatrixFile = serde_json::from_value(v.clone())?;
        Self::try_from(file)
    }
}

/// On-disk form: `{"k": int, "l": int, "entries": [[num, den], ...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub k: usize,
    pub l: usize,
    #[serde(with = "crate::rational::json_vec")]
    pub entries: Vec<Rational>,
}

impl From<CoefficientMatrix> for MatrixFile {
    fn from(m: CoefficientMatrix) -> Self {
        Self { k: m.k, l: m.l, entries: m.entries }
    }
}

impl TryFrom<MatrixFile> for CoefficientMatrix {
    type Error = Error;

    fn try_from(f: MatrixFile) -> Result<Self> {
        CoefficientMatrix::new(f.k, f.l, f.entries)
    }
}

impl Serialize for CoefficientMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixFile::from(self.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoefficientMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = MatrixFile::deserialize(d)?;
        CoefficientMatrix::try_from(f).map_err(serde::de::Error::custom)
    }
}
