use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{SurfaceMeasure, TestSet};
use crate::rng;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerSpec {
    pub samples: usize,
    /// Strata per axis of the base coordinates.
    pub strata: usize,
    pub seed: u64,
}

impl Default for SamplerSpec {
    fn default() -> Self {
        Self { samples: 16384, strata: 8, seed: rng::DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub norm: f64,
    pub stderr: f64,
    /// `int |mu * chi_E|^q`.
    pub integral: f64,
    pub integral_stderr: f64,
    pub samples: usize,
    /// Relative error above 10%.
    pub low_confidence: bool,
}

/// Monte Carlo estimate of `||mu * chi_E||_q`.
///
/// Points are drawn as `z = c + (x; phi(x) + u)` with `c` the centre of
/// `E`'s bounding box; this shear has unit Jacobian, so the sampling box in
/// `(x, u)` only has to be as thick as `E` plus the oscillation of `phi`
/// across `E`. The `x` box is stratified into `strata^k` cells with equal
/// sample counts.
pub fn lq_norm_mc(mu: &SurfaceMeasure, e: &TestSet, q: f64, sampler: &SamplerSpec) -> Result<NormEstimate> {
    if !(q >= 1.0) {
        return Err(Error::InvalidExponent(format!("q = {q} must be at least 1")));
    }
    if sampler.samples == 0 || sampler.strata == 0 {
        return Err(Error::Precondition("sampler needs samples and strata".into()));
    }
    let c = &mu.c;
    let (k, l) = (c.k(), c.l());
    if e.dim() != c.d() {
        return Err(Error::InvalidDimension("test set must live in R^d".into()));
    }
    if e.measure() == 0.0 {
        return Ok(NormEstimate {
            norm: 0.0,
            stderr: 0.0,
            integral: 0.0,
            integral_stderr: 0.0,
            samples: 0,
            low_confidence: false,
        });
    }
    let (elo, ehi) = e.bounding_box();
    let centre: Vec<f64> = elo.iter().zip(&ehi).map(|(a, b)| 0.5 * (a + b)).collect();
    let half: Vec<f64> = elo.iter().zip(&ehi).map(|(a, b)| 0.5 * (b - a)).collect();
    let ry = half[..k].iter().map(|h| h * h).sum::<f64>().sqrt();
    let x_lo: Vec<f64> = (0..k).map(|i| -1.0 - half[i]).collect();
    let x_w: Vec<f64> = (0..k).map(|i| 2.0 + 2.0 * half[i]).collect();
    let u_half: Vec<f64> = (0..l)
        .map(|j| {
            let cmax = (0..k).map(|i| c.c(i, j).abs()).fold(0.0, f64::max);
            half[k + j] + cmax * ry * (2.0 + ry)
        })
        .collect();
    let u_vol: f64 = u_half.iter().map(|h| 2.0 * h).product();

    let s = sampler.strata;
    let n_strata = s.pow(k as u32);
    let per = sampler.samples.div_ceil(n_strata).max(2);
    let cell_vol: f64 = x_w.iter().map(|w| w / s as f64).product::<f64>() * u_vol;

    let stats: Vec<(f64, f64)> = (0..n_strata)
        .into_par_iter()
        .map(|si| {
            let mut r = rng::stream(sampler.seed, si as u64);
            let mut cell = vec![0usize; k];
            let mut t = si;
            for ci in cell.iter_mut() {
                *ci = t % s;
                t /= s;
            }
            let mut z = vec![0.0; k + l];
            let mut x = vec![0.0; k];
            let (mut sum, mut sum2) = (0.0, 0.0);
            for _ in 0..per {
                for i in 0..k {
                    let u: f64 = r.random();
                    x[i] = x_lo[i] + (cell[i] as f64 + u) * x_w[i] / s as f64;
                    z[i] = centre[i] + x[i];
                }
                let ph = mu.phi(&x);
                for j in 0..l {
                    let u: f64 = r.random_range(-1.0..1.0);
                    z[k + j] = centre[k + j] + ph[j] + u * u_half[j];
                }
                let v = mu.convolve_at(e, &z).powf(q);
                sum += v;
                sum2 += v * v;
            }
            let n = per as f64;
            let mean = sum / n;
            let var = ((sum2 / n - mean * mean) * n / (n - 1.0)).max(0.0);
            (mean, var / n)
        })
        .collect();
    let integral: f64 = stats.iter().map(|(m, _)| m * cell_vol).sum();
    let integral_var: f64 = stats.iter().map(|(_, v)| v * cell_vol * cell_vol).sum();
    let integral_stderr = integral_var.sqrt();
    let norm = integral.powf(1.0 / q);
    let stderr = if integral > 0.0 { norm * integral_stderr / integral / q } else { 0.0 };
    Ok(NormEstimate {
        norm,
        stderr,
        integral,
        integral_stderr,
        samples: per * n_strata,
        low_confidence: integral == 0.0 || stderr > 0.1 * norm,
    })
}
