use serde::{Deserialize, Serialize};

use crate::quadrature::ball_volume;
use crate::surface::{surface_point, CoefficientMatrix};
use crate::{Error, Result};

/// Measurable test sets `E` in `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TestSet {
    Ball { center: Vec<f64>, radius: f64 },
    /// Union of closed axis-parallel boxes `[lo, hi]`.
    BoxUnion { boxes: Vec<(Vec<f64>, Vec<f64>)> },
    /// `{ |y - y0|_inf <= a, |u - u0 - G (y - y0)|_inf <= b }` with `G` the
    /// differential of `phi` at `y0` and `(y0; u0)` on the surface.
    GraphTube { k: usize, base: Vec<f64>, gradient: Vec<f64>, a: f64, b: f64 },
    /// `{ (y; u) : (y; 2u - phi(y)) in base }`.
    Sheared { base: Box<TestSet>, k: usize, coefficients: Vec<f64> },
    Empty { dim: usize },
}

impl TestSet {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Precondition("ball radius must be positive".into()));
        }
        Ok(Self::Ball { center, radius })
    }

    pub fn box_union(boxes: Vec<(Vec<f64>, Vec<f64>)>) -> Result<Self> {
        let d = boxes.first().map(|b| b.0.len()).ok_or_else(|| Error::Precondition("no boxes".into()))?;
        for (lo, hi) in &boxes {
            if lo.len() != d || hi.len() != d || lo.iter().zip(hi).any(|(a, b)| !(a < b)) {
                return Err(Error::Precondition("boxes need lo < hi in every coordinate".into()));
            }
        }
        Ok(Self::BoxUnion { boxes })
    }

    /// Tangent tube at the surface point over `y0`.
    pub fn graph_tube(c: &CoefficientMatrix, y0: &[f64], a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::Precondition("tube half-widths must be positive".into()));
        }
        let (k, l) = (c.k(), c.l());
        let mut gradient = vec![0.0; l * k];
        for j in 0..l {
            for i in 0..k {
                gradient[j * k + i] = 2.0 * c.c(i, j) * y0[i];
            }
        }
        Ok(Self::GraphTube { k, base: surface_point(c, y0), gradient, a, b })
    }

    /// The image of `base` under `(y; v) -> (y; (v + phi(y)) / 2)`, which
    /// scales Lebesgue measure by `2^{-l}`.
    pub fn sheared(base: TestSet, c: &CoefficientMatrix) -> Result<Self> {
        if base.dim() != c.d() {
            return Err(Error::InvalidDimension("sheared base must live in R^d".into()));
        }
        Ok(Self::Sheared { base: Box::new(base), k: c.k(), coefficients: c.floats().to_vec() })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Ball { center, .. } => center.len(),
            Self::BoxUnion { boxes } => boxes[0].0.len(),
            Self::GraphTube { base, .. } => base.len(),
            Self::Sheared { base, .. } => base.dim(),
            Self::Empty { dim } => *dim,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Ball { .. } => "ball",
            Self::BoxUnion { .. } => "box-union",
            Self::GraphTube { .. } => "graph-tube",
            Self::Sheared { .. } => "sheared",
            Self::Empty { .. } => "empty",
        }
    }

    pub fn contains(&self, z: &[f64]) -> bool {
        match self {
            Self::Ball { center, radius } => {
                z.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() <= radius * radius
            }
            Self::BoxUnion { boxes } => {
                boxes.iter().any(|(lo, hi)| z.iter().zip(lo.iter().zip(hi)).all(|(x, (a, b))| *a <= *x && *x <= *b))
            }
            Self::GraphTube { k, base, gradient, a, b } => {
                let k = *k;
                if (0..k).any(|i| (z[i] - base[i]).abs() > *a) {
                    return false;
                }
                (k..z.len()).all(|r| {
                    let j = r - k;
                    let lin: f64 = (0..k).map(|i| gradient[j * k + i] * (z[i] - base[i])).sum();
                    (z[r] - base[r] - lin).abs() <= *b
                })
            }
            Self::Sheared { base, k, coefficients } => {
                let k = *k;
                let l = z.len() - k;
                let mut w = z.to_vec();
                for j in 0..l {
                    let ph: f64 = (0..k).map(|i| coefficients[i * l + j] * z[i] * z[i]).sum();
                    w[k + j] = 2.0 * z[k + j] - ph;
                }
                base.contains(&w)
            }
            Self::Empty { .. } => false,
        }
    }

    /// Axis-parallel box containing the set.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Self::Ball { center, radius } => {
                (center.iter().map(|c| c - radius).collect(), center.iter().map(|c| c + radius).collect())
            }
            Self::BoxUnion { boxes } => {
                let d = boxes[0].0.len();
                let lo = (0..d).map(|i| boxes.iter().map(|b| b.0[i]).fold(f64::INFINITY, f64::min)).collect();
                let hi = (0..d).map(|i| boxes.iter().map(|b| b.1[i]).fold(f64::NEG_INFINITY, f64::max)).collect();
                (lo, hi)
            }
            Self::GraphTube { k, base, gradient, a, b } => {
                let k = *k;
                let mut lo = base.clone();
                let mut hi = base.clone();
                for i in 0..k {
                    lo[i] -= a;
                    hi[i] += a;
                }
                for r in k..base.len() {
                    let j = r - k;
                    let spread: f64 = b + a * (0..k).map(|i| gradient[j * k + i].abs()).sum::<f64>();
                    lo[r] -= spread;
                    hi[r] += spread;
                }
                (lo, hi)
            }
            Self::Sheared { base, k, coefficients } => {
                let k = *k;
                let (blo, bhi) = base.bounding_box();
                let l = blo.len() - k;
                let mut lo = blo.clone();
                let mut hi = bhi.clone();
                for j in 0..l {
                    let (mut pmin, mut pmax) = (0.0, 0.0);
                    for i in 0..k {
                        let (a, b) = (blo[i], bhi[i]);
                        let sq_max = (a * a).max(b * b);
                        let sq_min = if a <= 0.0 && b >= 0.0 { 0.0 } else { (a * a).min(b * b) };
                        let c = coefficients[i * l + j];
                        if c >= 0.0 {
                            pmin += c * sq_min;
                            pmax += c * sq_max;
                        } else {
                            pmin += c * sq_max;
                            pmax += c * sq_min;
                        }
                    }
                    lo[k + j] = 0.5 * (blo[k + j] + pmin);
                    hi[k + j] = 0.5 * (bhi[k + j] + pmax);
                }
                (lo, hi)
            }
            Self::Empty { dim } => (vec![0.0; *dim], vec![0.0; *dim]),
        }
    }

    /// Exact Lebesgue measure.
    pub fn measure(&self) -> f64 {
        match self {
            Self::Ball { center, radius } => ball_volume(center.len()) * radius.powi(center.len() as i32),
            Self::BoxUnion { boxes } => union_measure(boxes),
            Self::GraphTube { k, base, a, b, .. } => {
                (2.0 * a).powi(*k as i32) * (2.0 * b).powi((base.len() - k) as i32)
            }
            Self::Sheared { base, k, .. } => base.measure() * 0.5f64.powi((base.dim() - k) as i32),
            Self::Empty { .. } => 0.0,
        }
    }

    /// Smallest half-width of the set along the first `k` axes; sets the grid
    /// resolution needed to resolve it.
    pub fn feature_size(&self, k: usize) -> f64 {
        match self {
            Self::Ball { radius, .. } => *radius,
            Self::BoxUnion { boxes } => boxes
                .iter()
                .flat_map(|(lo, hi)| (0..k).map(move |i| 0.5 * (hi[i] - lo[i])))
                .fold(f64::INFINITY, f64::min),
            Self::GraphTube { a, .. } => *a,
            Self::Sheared { base, .. } => base.feature_size(k),
            Self::Empty { .. } => 1.0,
        }
    }

    pub fn translated(&self, v: &[f64]) -> Self {
        let add = |p: &[f64]| p.iter().zip(v).map(|(a, b)| a + b).collect::<Vec<f64>>();
        match self {
            Self::Ball { center, radius } => Self::Ball { center: add(center), radius: *radius },
            Self::BoxUnion { boxes } => {
                Self::BoxUnion { boxes: boxes.iter().map(|(lo, hi)| (add(lo), add(hi))).collect() }
            }
            Self::GraphTube { k, base, gradient, a, b } => {
                Self::GraphTube { k: *k, base: add(base), gradient: gradient.clone(), a: *a, b: *b }
            }
            Self::Sheared { .. } | Self::Empty { .. } => self.clone(),
        }
    }
}

/// Measure of a union of boxes by coordinate compression.
fn union_measure(boxes: &[(Vec<f64>, Vec<f64>)]) -> f64 {
    let d = boxes[0].0.len();
    let cuts: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let mut v: Vec<f64> = boxes.iter().flat_map(|b| [b.0[i], b.1[i]]).collect();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        })
        .collect();
    let sizes: Vec<usize> = cuts.iter().map(|c| c.len() - 1).collect();
    let total: usize = sizes.iter().product();
    let mut mid = vec![0.0; d];
    let mut acc = 0.0;
    for mut cell in 0..total {
        let mut vol = 1.0;
        for i in (0..d).rev() {
            let t = cell % sizes[i];
            cell /= sizes[i];
            mid[i] = 0.5 * (cuts[i][t] + cuts[i][t + 1]);
            vol *= cuts[i][t + 1] - cuts[i][t];
        }
        if boxes.iter().any(|(lo, hi)| mid.iter().zip(lo.iter().zip(hi)).all(|(x, (a, b))| a < x && x < b)) {
            acc += vol;
        }
    }
    acc
}
