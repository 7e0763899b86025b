//! Gaussian test functions `amplitude * N(mean, cov)` with closed-form
//! integrals, Fourier transforms and `L^p` norms.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::{Error, Result};

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianSpec {
    pub mean: Vec<f64>,
    /// Row-major covariance, symmetric positive definite.
    pub cov: Vec<f64>,
    #[serde(default = "one")]
    pub amplitude: f64,
}

impl GaussianSpec {
    pub fn isotropic(dim: usize, sigma: f64) -> Self {
        let mut cov = vec![0.0; dim * dim];
        for i in 0..dim {
            cov[i * dim + i] = sigma * sigma;
        }
        Self { mean: vec![0.0; dim], cov, amplitude: 1.0 }
    }

    /// Random mean in `[-mean_scale, mean_scale]^dim` and a covariance
    /// `L L^T` whose Cholesky diagonal lies in `[sigma_lo, sigma_hi]`.
    pub fn random<R: Rng + ?Sized>(
        dim: usize,
        rng: &mut R,
        mean_scale: f64,
        sigma_lo: f64,
        sigma_hi: f64,
    ) -> Self {
        let mean = (0..dim).map(|_| rng.random_range(-1.0..=1.0) * mean_scale).collect();
        let mut l = vec![0.0; dim * dim];
        for i in 0..dim {
            l[i * dim + i] = rng.random_range(sigma_lo..=sigma_hi);
            for j in 0..i {
                let z: f64 = StandardNormal.sample(rng);
                l[i * dim + j] = 0.3 * sigma_lo * z;
            }
        }
        let mut cov = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                cov[i * dim + j] = (0..dim).map(|p| l[i * dim + p] * l[j * dim + p]).sum();
            }
        }
        Self { mean, cov, amplitude: 1.0 }
    }

    /// `x -> t^{-dim/2} f(x/t)`, which keeps the `L^2` norm.
    pub fn dilated_l2(&self, t: f64) -> Self {
        let n = self.mean.len();
        Self {
            mean: self.mean.iter().map(|m| m * t).collect(),
            cov: self.cov.iter().map(|c| c * t * t).collect(),
            amplitude: self.amplitude * t.powf(n as f64 / 2.0),
        }
    }

    pub fn build(&self) -> Result<Gaussian> {
        Gaussian::new(self.clone())
    }
}

/// A validated [`GaussianSpec`] with cached factorizations.
#[derive(Debug, Clone)]
pub struct Gaussian {
    pub spec: GaussianSpec,
    dim: usize,
    precision: Vec<f64>,
    chol: Vec<f64>,
    det: f64,
    norm_const: f64,
}

impl Gaussian {
    pub fn new(spec: GaussianSpec) -> Result<Self> {
        let n = spec.mean.len();
        if n == 0 || spec.cov.len() != n * n {
            return Err(Error::Precondition(format!(
                "gaussian covariance must be {n}x{n}, got {} entries",
                spec.cov.len()
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if (spec.cov[i * n + j] - spec.cov[j * n + i]).abs() > 1e-12 * (1.0 + spec.cov[i * n + j].abs()) {
                    return Err(Error::Precondition("gaussian covariance is not symmetric".into()));
                }
            }
        }
        let chol = linalg::cholesky(&spec.cov, n)
            .ok_or_else(|| Error::Precondition("gaussian covariance is not positive definite".into()))?;
        let det: f64 = (0..n).map(|i| chol[i * n + i] * chol[i * n + i]).product();
        let precision = linalg::inverse(&spec.cov, n)
            .ok_or_else(|| Error::Precondition("gaussian covariance is singular".into()))?;
        let norm_const = (2.0 * PI).powf(-(n as f64) / 2.0) / det.sqrt();
        Ok(Self { spec, dim: n, precision, chol, det, norm_const })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitude(&self) -> f64 {
        self.spec.amplitude
    }

    pub fn cov_det(&self) -> f64 {
        self.det
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let d: Vec<f64> = x.iter().zip(&self.spec.mean).map(|(a, m)| a - m).collect();
        self.spec.amplitude * self.norm_const * (-0.5 * linalg::quad_form(&self.precision, &d)).exp()
    }

    pub fn integral(&self) -> f64 {
        self.spec.amplitude
    }

    /// `f^(xi) = int f(x) e^{-2 pi i <x, xi>} dx`.
    pub fn fourier(&self, xi: &[f64]) -> Complex64 {
        let phase = -2.0 * PI * linalg::dot(&self.spec.mean, xi);
        let modulus = self.spec.amplitude * (-2.0 * PI * PI * linalg::quad_form(&self.spec.cov, xi)).exp();
        Complex64::from_polar(modulus, phase)
    }

    pub fn fourier_abs_sq(&self, xi: &[f64]) -> f64 {
        let a = self.spec.amplitude;
        a * a * (-4.0 * PI * PI * linalg::quad_form(&self.spec.cov, xi)).exp()
    }

    /// `||f||_p` for `p >= 1`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let n = self.dim as f64;
        let int_pow = (2.0 * PI).powf(-n * (p - 1.0) / 2.0) * self.det.powf(-(p - 1.0) / 2.0) * p.powf(-n / 2.0);
        self.spec.amplitude.abs() * int_pow.powf(1.0 / p)
    }

    pub fn l2_norm_sq(&self) -> f64 {
        let n = self.dim as f64;
        let a = self.spec.amplitude;
        a * a / (2f64.powf(n) * PI.powf(n / 2.0) * self.det.sqrt())
    }

    /// `sqrt(trace(cov))`, an upper bound for the largest standard deviation.
    pub fn sigma_bound(&self) -> f64 {
        (0..self.dim).map(|i| self.spec.cov[i * self.dim + i]).sum::<f64>().sqrt()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let z: Vec<f64> = (0..self.dim).map(|_| StandardNormal.sample(rng)).collect();
        (0..self.dim)
            .map(|i| self.spec.mean[i] + (0..=i).map(|j| self.chol[i * self.dim + j] * z[j]).sum::<f64>())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::composite;

    fn aniso() -> Gaussian {
        GaussianSpec { mean: vec![0.3, -0.2], cov: vec![0.5, 0.1, 0.1, 0.8], amplitude: 2.0 }
            .build()
            .unwrap()
    }

    fn grid_integral(f: impl Fn(&[f64]) -> f64) -> f64 {
        let (x, w) = composite(-8.0, 8.0, 32, 8);
        let mut s = 0.0;
        for (a, wa) in x.iter().zip(&w) {
            for (b, wb) in x.iter().zip(&w) {
                s += wa * wb * f(&[*a, *b]);
            }
        }
        s
    }

    #[test]
    fn integral_and_norms_match_quadrature() {
        let g = aniso();
        assert!((grid_integral(|x| g.value(x)) - 2.0).abs() < 1e-10);
        let l2 = grid_integral(|x| g.value(x).powi(2));
        assert!((l2 / g.l2_norm_sq() - 1.0).abs() < 1e-10);
        let l3 = grid_integral(|x| g.value(x).powf(1.7)).powf(1.0 / 1.7);
        assert!((l3 / g.lp_norm(1.7) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fourier_matches_quadrature() {
        let g = aniso();
        for xi in [[0.0, 0.0], [0.3, -0.1], [0.5, 0.4]] {
            let re = grid_integral(|x| g.value(x) * (-2.0 * PI * (x[0] * xi[0] + x[1] * xi[1])).cos());
            let im = grid_integral(|x| g.value(x) * (-2.0 * PI * (x[0] * xi[0] + x[1] * xi[1])).sin());
            let f = g.fourier(&xi);
            assert!((f.re - re).abs() < 1e-10 && (f.im - im).abs() < 1e-10, "{xi:?}");
        }
    }

    #[test]
    fn dilation_keeps_l2() {
        let g = aniso();
        let h = g.spec.dilated_l2(1.7).build().unwrap();
        assert!((h.l2_norm_sq() / g.l2_norm_sq() - 1.0).abs() < 1e-12);
        let x = [0.4, 0.9];
        let expect = g.value(&[x[0] / 1.7, x[1] / 1.7]) * 1.7f64.powf(-1.0);
        assert!((h.value(&x) - expect).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_covariance() {
        let s = GaussianSpec { mean: vec![0.0, 0.0], cov: vec![1.0, 2.0, 2.0, 1.0], amplitude: 1.0 };
        assert!(s.build().is_err());
        let s = GaussianSpec { mean: vec![0.0], cov: vec![1.0, 0.0], amplitude: 1.0 };
        assert!(s.build().is_err());
    }
}
