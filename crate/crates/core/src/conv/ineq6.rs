use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TestSet;
use crate::gaussian::{Gaussian, GaussianSpec};
use crate::rng;
use crate::surface::{bilinear, check_star, phi, CoefficientMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ineq6Config {
    pub samples: usize,
    pub seed: u64,
}

impl Default for Ineq6Config {
    fn default() -> Self {
        Self { samples: 20000, seed: rng::DEFAULT_SEED }
    }
}

impl Ineq6Config {
    pub fn doubled(&self) -> Self {
        Self { samples: 2 * self.samples, ..*self }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ineq6Row {
    pub set_id: usize,
    pub kind: String,
    pub measure: f64,
    pub lhs: f64,
    pub stderr: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ineq6Report {
    pub rows: Vec<Ineq6Row>,
    pub sup: f64,
    pub argmax: usize,
    /// `sup(all sets) / sup(first half) - 1`.
    pub doubling_growth: f64,
}

/// The part of `{lo <= |t| < hi} ∩ [a, b]` as at most two intervals.
fn signed_band(lo: f64, hi: f64, a: f64, b: f64) -> Vec<(f64, f64)> {
    [(-hi, -lo), (lo, hi)]
        .into_iter()
        .filter_map(|(s, t)| {
            let (s, t) = (s.max(a), t.min(b));
            (t > s).then_some((s, t))
        })
        .collect()
}

/// `int_{R^k} int_{lo <= |y_i| < hi} f(x) chi_E(y; L(x, y)) dy dx` by Monte
/// Carlo with `x ~ f / ||f||_1` and `y` uniform on the part of the band
/// inside `E`'s shadow.
fn lhs_mc(c: &CoefficientMatrix, f: &Gaussian, e: &TestSet, band: (f64, f64), cfg: &Ineq6Config, task: u64) -> (f64, f64) {
    let k = c.k();
    if e.measure() == 0.0 {
        return (0.0, 0.0);
    }
    let (elo, ehi) = e.bounding_box();
    let pieces: Vec<Vec<(f64, f64)>> = (0..k).map(|i| signed_band(band.0, band.1, elo[i], ehi[i])).collect();
    let lens: Vec<f64> = pieces.iter().map(|p| p.iter().map(|(a, b)| b - a).sum()).collect();
    let vol: f64 = lens.iter().product();
    if vol == 0.0 {
        return (0.0, 0.0);
    }
    const CHUNK: usize = 1024;
    let chunks = cfg.samples.div_ceil(CHUNK);
    let hits: Vec<u64> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut r = rng::stream(cfg.seed, task.wrapping_mul(1 << 24) + ci as u64);
            let n = CHUNK.min(cfg.samples - ci * CHUNK);
            let mut y = vec![0.0; k];
            let mut z = vec![0.0; c.d()];
            let mut count = 0;
            for _ in 0..n {
                let x = f.sample(&mut r);
                for i in 0..k {
                    let mut t = r.random_range(0.0..lens[i]);
                    for &(a, b) in &pieces[i] {
                        if t < b - a {
                            y[i] = a + t;
                            break;
                        }
                        t -= b - a;
                    }
                }
                z[..k].copy_from_slice(&y);
                z[k..].copy_from_slice(&bilinear(c, &x, &y));
                if e.contains(&z) {
                    count += 1;
                }
            }
            count
        })
        .collect();
    let n = cfg.samples as f64;
    let p = hits.iter().sum::<u64>() as f64 / n;
    let scale = f.integral() * vol;
    (scale * p, scale * (p * (1.0 - p) / n).sqrt())
}

fn check(c: &CoefficientMatrix, f: &GaussianSpec, cfg: &Ineq6Config) -> Result<Gaussian> {
    if !check_star(c).holds {
        return Err(Error::Precondition("the coefficient matrix has a singular l x l row-submatrix".into()));
    }
    if f.mean.len() != c.k() {
        return Err(Error::InvalidDimension("f must live on R^k".into()));
    }
    if f.amplitude < 0.0 {
        return Err(Error::Precondition("f must be nonnegative".into()));
    }
    if cfg.samples == 0 {
        return Err(Error::Precondition("no samples requested".into()));
    }
    f.build()
}

/// `int int_{|y_i| ~ 1} f(x) chi_E(y; L(x, y)) dy dx` against
/// `||f||_{d/k} m_d(E)^{k/d}` for every set in `family`.
pub fn ineq6_check(c: &CoefficientMatrix, f: &GaussianSpec, family: &[TestSet], cfg: &Ineq6Config) -> Result<Ineq6Report> {
    let g = check(c, f, cfg)?;
    if family.is_empty() {
        return Err(Error::Precondition("empty set family".into()));
    }
    let (k, d) = (c.k() as f64, c.d() as f64);
    let fnorm = g.lp_norm(d / k);
    let rows: Vec<Ineq6Row> = family
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let (lhs, stderr) = lhs_mc(c, &g, e, (1.0, 2.0), cfg, i as u64);
            let m = e.measure();
            let rhs = fnorm * m.powf(k / d);
            let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
            Ineq6Row { set_id: i, kind: e.kind().to_string(), measure: m, lhs, stderr, rhs, ratio }
        })
        .collect();
    let (mut sup, mut argmax) = (0.0, 0);
    let mut half_sup = 0.0;
    let half = (rows.len() - 1) / 2;
    for r in &rows {
        if r.ratio > sup {
            sup = r.ratio;
            argmax = r.set_id;
        }
        if r.set_id == half {
            half_sup = sup;
        }
    }
    let doubling_growth = if half_sup > 0.0 { sup / half_sup - 1.0 } else { 0.0 };
    Ok(Ineq6Report { rows, sup, argmax, doubling_growth })
}

/// Box unions and sheared boxes around the densest part of the image of
/// `(x, y) -> (y; L(x, y))`: `y` hugs the inner corner `|y_i| = 1` of the
/// shell and `u` sits near `L(mean, y)`. Each set has one scale in
/// `[1/4, 1]`, jittered per axis by at most `2^{-1/2}`; `u` widths are in
/// units of the spread of `L(x, y)` under `f`.
pub fn ineq6_family(c: &CoefficientMatrix, f: &GaussianSpec, size: usize, seed: u64) -> Result<Vec<TestSet>> {
    let g = f.build()?;
    let (k, l, d) = (c.k(), c.l(), c.d());
    (0..size)
        .map(|i| {
            let mut r = rng::stream(seed, i as u64);
            let scale = 2f64.powf(-r.random_range(0.0..2.0));
            let jitter = |r: &mut rng::Rng| scale * 2f64.powf(-r.random_range(0.0..0.5));
            let signs: Vec<f64> = (0..k).map(|_| if r.random::<bool>() { 1.0 } else { -1.0 }).collect();
            let a: Vec<f64> = (0..k).map(|_| 0.5 * jitter(&mut r)).collect();
            let y0: Vec<f64> = (0..k).map(|j| signs[j] * (1.0 + a[j])).collect();
            let spread: Vec<f64> = (0..l)
                .map(|j| {
                    (0..k)
                        .map(|i| {
                            let s = c.c(i, j) * y0[i];
                            s * s * g.spec.cov[i * k + i]
                        })
                        .sum::<f64>()
                        .sqrt()
                })
                .collect();
            let u0: Vec<f64> = bilinear(c, &g.spec.mean, &y0)
                .iter()
                .zip(&spread)
                .map(|(u, s)| u + 0.25 * s * scale * r.random_range(-1.0..1.0))
                .collect();
            let mut hw = a.clone();
            hw.extend(spread.iter().map(|s| 2.0 * s * jitter(&mut r)));
            let mut mid = y0.clone();
            mid.extend(&u0);
            let boxed = |mid: &[f64], hw: &[f64]| {
                (
                    mid.iter().zip(hw).map(|(m, h)| m - h).collect::<Vec<f64>>(),
                    mid.iter().zip(hw).map(|(m, h)| m + h).collect::<Vec<f64>>(),
                )
            };
            match i % 3 {
                0 => TestSet::box_union(vec![boxed(&mid, &hw)]),
                1 => {
                    let shifted: Vec<f64> =
                        mid.iter().zip(&hw).map(|(m, h)| m + h * r.random_range(-1.0..1.0)).collect();
                    TestSet::box_union(vec![boxed(&mid, &hw), boxed(&shifted, &hw)])
                }
                _ => {
                    let ph = phi(c, &y0);
                    for j in 0..l {
                        mid[k + j] = 2.0 * u0[j] - ph[j];
                        hw[k + j] *= 2.0;
                    }
                    TestSet::sheared(TestSet::box_union(vec![boxed(&mid, &hw)])?, c)
                }
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| {
            debug_assert!(v.iter().all(|e| e.dim() == d));
            v
        })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShellTerm {
    pub n: Vec<i32>,
    pub lhs: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShellSumReport {
    pub depth: u32,
    pub shells: Vec<ShellTerm>,
    pub shell_total: f64,
    pub shell_stderr: f64,
    /// The same integral over `2^{-depth} <= |y_i| < 2` in one piece.
    pub direct: f64,
    pub direct_stderr: f64,
}

/// Left side of the estimate restricted to `{|y_i| ~ 2^{n_i}}` for every
/// `n` with `-depth <= n_i <= 0`, summed and compared with a direct
/// evaluation over the union of those shells.
pub fn ineq6_shell_sum(
    c: &CoefficientMatrix,
    f: &GaussianSpec,
    e: &TestSet,
    depth: u32,
    cfg: &Ineq6Config,
) -> Result<ShellSumReport> {
    let g = check(c, f, cfg)?;
    let k = c.k();
    let per_axis = depth as usize + 1;
    let count = per_axis.pow(k as u32);
    let mut shells = Vec::with_capacity(count);
    for si in 0..count {
        let mut t = si;
        let n: Vec<i32> = (0..k)
            .map(|_| {
                let v = -((t % per_axis) as i32);
                t /= per_axis;
                v
            })
            .collect();
        let (lhs, stderr) = shell_lhs(c, &g, e, &n, cfg, si as u64 + 1);
        shells.push(ShellTerm { n, lhs, stderr });
    }
    let shell_total = shells.iter().map(|s| s.lhs).sum();
    let shell_stderr = shells.iter().map(|s| s.stderr * s.stderr).sum::<f64>().sqrt();
    let (direct, direct_stderr) = lhs_mc(c, &g, e, (2f64.powi(-(depth as i32)), 2.0), cfg, 0);
    Ok(ShellSumReport { depth, shells, shell_total, shell_stderr, direct, direct_stderr })
}

fn shell_lhs(c: &CoefficientMatrix, g: &Gaussian, e: &TestSet, n: &[i32], cfg: &Ineq6Config, task: u64) -> (f64, f64) {
    let k = c.k();
    let (elo, ehi) = e.bounding_box();
    let bands: Vec<(f64, f64)> = n.iter().map(|&ni| (2f64.powi(ni), 2f64.powi(ni + 1))).collect();
    let pieces: Vec<Vec<(f64, f64)>> = (0..k).map(|i| signed_band(bands[i].0, bands[i].1, elo[i], ehi[i])).collect();
    let lens: Vec<f64> = pieces.iter().map(|p| p.iter().map(|(a, b)| b - a).sum()).collect();
    let vol: f64 = lens.iter().product();
    if vol == 0.0 || e.measure() == 0.0 {
        return (0.0, 0.0);
    }
    let mut r = rng::stream(cfg.seed, task.wrapping_mul(1 << 24) ^ rng::label_id("shell-term"));
    let mut y = vec![0.0; k];
    let mut z = vec![0.0; c.d()];
    let mut hits = 0u64;
    for _ in 0..cfg.samples {
        let x = g.sample(&mut r);
        for i in 0..k {
            let mut t = r.random_range(0.0..lens[i]);
            for &(a, b) in &pieces[i] {
                if t < b - a {
                    y[i] = a + t;
                    break;
                }
                t -= b - a;
            }
        }
        z[..k].copy_from_slice(&y);
        z[k..].copy_from_slice(&bilinear(c, &x, &y));
        if e.contains(&z) {
            hits += 1;
        }
    }
    let nn = cfg.samples as f64;
    let p = hits as f64 / nn;
    let scale = g.integral() * vol;
    (scale * p, scale * (p * (1.0 - p) / nn).sqrt())
}
