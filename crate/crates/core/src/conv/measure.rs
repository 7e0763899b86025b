use serde::Serialize;

use super::TestSet;
use crate::quadrature::ball_volume;
use crate::surface::{check_star, phi, CoefficientMatrix};
use crate::{Error, Result};

/// Surface measure `mu` on the graph of `phi` over the unit ball of `R^k`,
/// discretized on a uniform grid of `[-1, 1]^k`.
///
/// Atoms are the cells whose centres lie in the open unit ball; each carries
/// the cell volume and sits at `(y; phi(y))`. They are enumerated on demand,
/// so very fine grids cost nothing until a region is queried.
#[derive(Debug, Clone)]
pub struct SurfaceMeasure {
    pub c: CoefficientMatrix,
    pub resolution: usize,
    pub spacing: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Atom {
    pub y: Vec<f64>,
    pub point: Vec<f64>,
    pub weight: f64,
}

pub const MIN_RESOLUTION: usize = 8;

impl SurfaceMeasure {
    pub fn new(c: &CoefficientMatrix, resolution: usize) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::Precondition(format!(
                "resolution {resolution} is below the minimum of {MIN_RESOLUTION} cells per axis"
            )));
        }
        let mut warnings = Vec::new();
        if !check_star(c).holds {
            warnings.push("coefficient matrix has a singular l x l row-submatrix".to_string());
        }
        Ok(Self { c: c.clone(), resolution, spacing: 2.0 / resolution as f64, warnings })
    }

    /// Grid fine enough that `spacing <= target`.
    pub fn with_spacing(c: &CoefficientMatrix, target: f64) -> Result<Self> {
        let res = ((2.0 / target).ceil() as usize).max(MIN_RESOLUTION);
        Self::new(c, res)
    }

    pub fn k(&self) -> usize {
        self.c.k()
    }

    pub fn weight(&self) -> f64 {
        self.spacing.powi(self.k() as i32)
    }

    fn centre(&self, m: i64) -> f64 {
        -1.0 + (m as f64 + 0.5) * self.spacing
    }

    /// Index range of cell centres inside `[lo, hi]`.
    fn index_range(&self, lo: f64, hi: f64) -> (i64, i64) {
        let h = self.spacing;
        let a = ((lo + 1.0) / h - 0.5).ceil() as i64;
        let b = ((hi + 1.0) / h - 0.5).floor() as i64;
        (a.max(0), b.min(self.resolution as i64 - 1))
    }

    pub fn atom_count(&self) -> u64 {
        fn rec(m: &SurfaceMeasure, axis: usize, k: usize, budget: f64) -> u64 {
            let t = budget.sqrt();
            if axis + 1 == k {
                // open interval (-t, t)
                let h = m.spacing;
                let a = ((1.0 - t) / h - 0.5).floor() as i64 + 1;
                let b = ((1.0 + t) / h - 0.5).ceil() as i64 - 1;
                let (a, b) = (a.max(0), b.min(m.resolution as i64 - 1));
                return if b >= a { (b - a + 1) as u64 } else { 0 };
            }
            let (a, b) = m.index_range(-t, t);
            (a..=b)
                .map(|i| {
                    let y = m.centre(i);
                    let rest = budget - y * y;
                    if rest > 0.0 {
                        rec(m, axis + 1, k, rest)
                    } else {
                        0
                    }
                })
                .sum()
        }
        rec(self, 0, self.k(), 1.0)
    }

    /// Sum of the weights; tends to the volume of the unit ball.
    pub fn total_mass(&self) -> f64 {
        self.atom_count() as f64 * self.weight()
    }

    pub fn ball_volume(&self) -> f64 {
        ball_volume(self.k())
    }

    /// Calls `f(y, phi(y))` for every atom whose `y` lies in the box.
    pub fn for_each_atom_in<F: FnMut(&[f64], &[f64])>(&self, lo: &[f64], hi: &[f64], mut f: F) {
        let k = self.k();
        let ranges: Vec<(i64, i64)> = (0..k).map(|i| self.index_range(lo[i].max(-1.0), hi[i].min(1.0))).collect();
        if ranges.iter().any(|(a, b)| b < a) {
            return;
        }
        let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        let mut y = vec![0.0; k];
        let mut point = vec![0.0; self.c.d()];
        loop {
            let mut r2 = 0.0;
            for i in 0..k {
                y[i] = self.centre(idx[i]);
                r2 += y[i] * y[i];
            }
            if r2 < 1.0 {
                point[..k].copy_from_slice(&y);
                for j in 0..self.c.l() {
                    point[k + j] = (0..k).map(|i| self.c.c(i, j) * y[i] * y[i]).sum();
                }
                f(&y, &point);
            }
            let mut axis = k;
            loop {
                if axis == 0 {
                    return;
                }
                axis -= 1;
                if idx[axis] < ranges[axis].1 {
                    idx[axis] += 1;
                    break;
                }
                idx[axis] = ranges[axis].0;
            }
        }
    }

    /// Every atom; intended for coarse grids.
    pub fn atoms(&self) -> Vec<Atom> {
        let k = self.k();
        let mut out = Vec::new();
        let w = self.weight();
        self.for_each_atom_in(&vec![-1.0; k], &vec![1.0; k], |y, p| {
            out.push(Atom { y: y.to_vec(), point: p.to_vec(), weight: w })
        });
        out
    }

    /// `(mu * chi_E)(z)`.
    pub fn convolve_at(&self, e: &TestSet, z: &[f64]) -> f64 {
        let k = self.k();
        let (elo, ehi) = e.bounding_box();
        let lo: Vec<f64> = (0..k).map(|i| z[i] - ehi[i]).collect();
        let hi: Vec<f64> = (0..k).map(|i| z[i] - elo[i]).collect();
        let mut count = 0u64;
        let mut diff = vec![0.0; z.len()];
        self.for_each_atom_in(&lo, &hi, |_, p| {
            for i in 0..diff.len() {
                diff[i] = z[i] - p[i];
            }
            if e.contains(&diff) {
                count += 1;
            }
        });
        count as f64 * self.weight()
    }

    /// `(mu * f)(z)`.
    pub fn convolve_f_at<F: Fn(&[f64]) -> f64>(&self, f: F, z: &[f64]) -> f64 {
        let k = self.k();
        let mut acc = 0.0;
        let mut diff = vec![0.0; z.len()];
        self.for_each_atom_in(&vec![-1.0; k], &vec![1.0; k], |_, p| {
            for i in 0..diff.len() {
                diff[i] = z[i] - p[i];
            }
            acc += f(&diff);
        });
        acc * self.weight()
    }

    /// `int g d mu`.
    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, g: F) -> f64 {
        let k = self.k();
        let mut acc = 0.0;
        self.for_each_atom_in(&vec![-1.0; k], &vec![1.0; k], |_, p| acc += g(p));
        acc * self.weight()
    }

    /// The graph map at `y`.
    pub fn phi(&self, y: &[f64]) -> Vec<f64> {
        phi(&self.c, y)
    }
}
