use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{transform, transform_onto, Deposit, GridFunction, TargetSpec};
use crate::gaussian::Gaussian;
use crate::linalg::{dot, norm2};
use crate::surface::{adjoint, bilinear, CoefficientMatrix};
use crate::{Error, Result};
use std::f64::consts::PI;

#[derive(Debug, Clone, Serialize)]
pub struct PairingReport {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub leaked_mass: f64,
}

/// Both sides of `int Tf(y;u) h(u) du = int f(x) h(L_y x) dx`.
///
/// The transform is deposited on `h`'s own grid; the left side is the
/// midpoint sum there, the right side the source-grid sum with `h`
/// interpolated multilinearly at `L_y x`.
pub fn pairing_check(
    f: &GridFunction,
    h: &GridFunction,
    c: &CoefficientMatrix,
    y: &[f64],
    deposit: Deposit,
) -> Result<PairingReport> {
    let t = transform_onto(f, c, y, h.clone(), deposit)?;
    let lhs = t.grid.cell_volume() * t.grid.values.iter().zip(&h.values).map(|(a, b)| a * b).sum::<f64>();
    let vol = f.cell_volume();
    let rhs: f64 = (0..f.len())
        .into_par_iter()
        .with_min_len(4096)
        .map(|idx| {
            let w = f.values[idx];
            if w == 0.0 {
                return 0.0;
            }
            let x = f.center(idx);
            w * h.interpolate(&bilinear(c, &x, y))
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum::<f64>()
        * vol;
    let rel_err = if rhs == 0.0 && lhs == 0.0 { 0.0 } else { (lhs - rhs).abs() / rhs.abs().max(lhs.abs()) };
    Ok(PairingReport { lhs, rhs, rel_err, leaked_mass: t.leaked_mass })
}

#[derive(Debug, Clone, Serialize)]
pub struct FourierSample {
    pub zeta: Vec<f64>,
    pub discrete: [f64; 2],
    pub closed_form: [f64; 2],
    /// `|discrete - closed| / int f`.
    pub rel_err: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FourierReport {
    pub samples: Vec<FourierSample>,
    pub excluded: Vec<Vec<f64>>,
    pub max_rel_err: f64,
    pub nyquist: f64,
    pub mass: f64,
    pub leak_fraction: f64,
    pub warnings: Vec<String>,
}

/// Discrete Fourier transform of the binned `Tf(y; .)` against
/// `f^(L*_y zeta)` for a Gaussian `f`.
///
/// The transform is deposited cloud-in-cell and divided by its window
/// `prod_j sinc(pi zeta_j du)^2` before comparison.
/// Errors are measured relative to `int f = sup |f^|`. Frequencies with
/// `|zeta| > nyquist / 2` are skipped and listed in `excluded`.
pub fn fourier_check(
    f: &Gaussian,
    c: &CoefficientMatrix,
    y: &[f64],
    zetas: &[Vec<f64>],
    cells_per_axis: usize,
) -> Result<FourierReport> {
    if f.dim() != c.k() {
        return Err(Error::InvalidDimension("gaussian must live on R^k".into()));
    }
    let half = 6.0 * f.sigma_bound();
    let src = GridFunction::box_around(&f.spec.mean, half, cells_per_axis)?.fill(|x| f.value(x));
    let t = transform(&src, c, y, &TargetSpec { deposit: Deposit::Cic, ..TargetSpec::cells(cells_per_axis) })?;
    let du = t.grid.spacing;
    let nyquist = 0.5 / du;
    let vol = t.grid.cell_volume();
    let centers: Vec<Vec<f64>> = (0..t.grid.len()).map(|i| t.grid.center(i)).collect();

    let mut samples = Vec::new();
    let mut excluded = Vec::new();
    let mut warnings = Vec::new();
    let mass = f.integral();
    for zeta in zetas {
        if zeta.len() != c.l() {
            return Err(Error::InvalidDimension("frequencies must live in R^l".into()));
        }
        if norm2(zeta) > 0.5 * nyquist {
            warnings.push(format!("zeta {zeta:?} beyond nyquist/2 = {:.4}; excluded", 0.5 * nyquist));
            excluded.push(zeta.clone());
            continue;
        }
        let discrete: Complex64 = centers
            .par_iter()
            .zip(t.grid.values.par_iter())
            .map(|(u, v)| Complex64::from_polar(v * vol, -2.0 * PI * dot(u, zeta)))
            .collect::<Vec<_>>()
            .iter()
            .sum();
        let discrete = discrete / cic_window(zeta, du);
        let closed = f.fourier(&adjoint(c, y, zeta));
        let rel_err = (discrete - closed).norm() / mass.abs();
        samples.push(FourierSample {
            zeta: zeta.clone(),
            discrete: [discrete.re, discrete.im],
            closed_form: [closed.re, closed.im],
            rel_err,
        });
    }
    let max_rel_err = samples.iter().map(|s| s.rel_err).fold(0.0, f64::max);
    Ok(FourierReport { samples, excluded, max_rel_err, nyquist, mass, leak_fraction: t.leak_fraction(), warnings })
}

fn cic_window(zeta: &[f64], du: f64) -> f64 {
    zeta.iter()
        .map(|z| {
            let a = PI * z * du;
            if a == 0.0 {
                1.0
            } else {
                (a.sin() / a).powi(2)
            }
        })
        .product()
}

#[derive(Debug, Clone, Serialize)]
pub struct OscillatoryReport {
    pub s: f64,
    pub sup_abs: f64,
    pub argmax: Vec<f64>,
    pub l1_norm_f: f64,
}

/// `g(u) = int f(x) |u - L_y x|^{is} dx` on the centres of `u_grid`, with
/// `|0|^{is} = 1`.
pub fn oscillatory_sup_bound(
    f: &GridFunction,
    c: &CoefficientMatrix,
    y: &[f64],
    s: f64,
    u_grid: &GridFunction,
) -> Result<OscillatoryReport> {
    if f.values.iter().any(|v| *v < 0.0) {
        return Err(Error::Precondition("oscillatory bound expects a nonnegative f".into()));
    }
    if f.dim != c.k() || y.len() != c.k() || u_grid.dim != c.l() {
        return Err(Error::InvalidDimension("grid dimensions do not match the matrix".into()));
    }
    let vol = f.cell_volume();
    let atoms: Vec<(Vec<f64>, f64)> = (0..f.len())
        .filter(|&i| f.values[i] != 0.0)
        .map(|i| (bilinear(c, &f.center(i), y), f.values[i] * vol))
        .collect();
    let values: Vec<f64> = (0..u_grid.len())
        .into_par_iter()
        .map(|ui| {
            let u = u_grid.center(ui);
            let mut acc = Complex64::new(0.0, 0.0);
            for (p, w) in &atoms {
                let r = u.iter().zip(p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                acc += if r == 0.0 { Complex64::new(*w, 0.0) } else { Complex64::from_polar(*w, s * r.ln()) };
            }
            acc.norm()
        })
        .collect();
    let (imax, sup_abs) = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    Ok(OscillatoryReport { s, sup_abs, argmax: u_grid.center(imax), l1_norm_f: f.l1_norm() })
}
