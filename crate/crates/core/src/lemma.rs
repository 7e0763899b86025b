//! Monte Carlo and quadrature checks of the weighted frequency integral
//!
//! ```text
//! int_{|y_j| ~ 1} int_{R^l} |zeta|^rho w(y . C zeta) dzeta dy
//!     ~  int_{R^k} |tau|^{rho - k + l} w(tau) dtau
//! ```
//!
//! for Gaussian weights `w`, together with its per-`Q` split, the change of
//! variables behind it and the `L^2` bound it implies.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gaussian::{Gaussian, GaussianSpec};
use crate::linalg::{self, norm2};
use crate::quadrature::{composite, radial_integral, radial_rule, AngularRule, RadialParams};
use crate::rng;
use crate::surface::{adjoint_one, check_star, constant_m, in_f_q, select_q, CoefficientMatrix, Partition};
use crate::{Error, Result};

/// Smallest admissible `rho + l`.
pub const RHO_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub seed: u64,
    /// Samples of `y` in the unit shell.
    pub n_y: usize,
    #[serde(default)]
    pub radial: RadialParams,
    /// Truncation radius in units of the weight's `sigma_bound`.
    #[serde(default = "default_truncation")]
    pub truncation_sigmas: f64,
}

fn default_truncation() -> f64 {
    9.0
}

impl Default for McConfig {
    fn default() -> Self {
        Self { seed: rng::DEFAULT_SEED, n_y: 256, radial: RadialParams::default(), truncation_sigmas: 9.0 }
    }
}

impl McConfig {
    /// Twice the `y` samples and a finer quadrature.
    pub fn doubled(&self) -> Self {
        Self { n_y: self.n_y * 2, radial: self.radial.doubled(), ..self.clone() }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if self.n_y == 0 {
            return Err(Error::Precondition("n_y must be positive".into()));
        }
        let tail = gaussian_tail_bound(dim, self.truncation_sigmas);
        if tail > 1e-3 {
            return Err(Error::Precondition(format!(
                "truncation at {} sigma leaves up to {tail:.2e} of the weight's mass",
                self.truncation_sigmas
            )));
        }
        Ok(())
    }
}

/// Chernoff bound on `P(|X - m| > t sigma_bound)` for a Gaussian on `R^dim`.
pub fn gaussian_tail_bound(dim: usize, t: f64) -> f64 {
    let k = dim as f64;
    let x = t * t;
    if x <= k {
        return 1.0;
    }
    ((x / k).powf(k / 2.0) * (0.5 * (k - x)).exp()).min(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// Standard error of `ratio` from the `y` sampling.
    pub stderr: f64,
    pub rho: f64,
    pub q: Option<Vec<usize>>,
    pub n_y: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverReport {
    pub total: RatioReport,
    pub per_q: Vec<RatioReport>,
    /// Sum of the per-`Q` left sides over the total.
    pub cover_ratio: f64,
    /// Same sum with `F_Q` taken as the full membership cone
    /// `{|zeta| <= M |(C zeta)_i|, i in Q}`, which overlaps.
    pub membership_cover_ratio: f64,
    pub zero_mass: Vec<Vec<usize>>,
}

fn check_lemma_inputs(c: &CoefficientMatrix, rho: f64, w: &GaussianSpec, cfg: &McConfig) -> Result<Gaussian> {
    if !check_star(c).holds {
        return Err(Error::Precondition("the coefficient matrix has a singular l x l row-submatrix".into()));
    }
    if !(rho > -(c.l() as f64) + RHO_MARGIN) || !rho.is_finite() {
        return Err(Error::Precondition(format!(
            "rho = {rho} is too small; the frequency integral needs rho > {}",
            -(c.l() as f64) + RHO_MARGIN
        )));
    }
    if w.mean.len() != c.k() {
        return Err(Error::InvalidDimension("the weight must live on R^k".into()));
    }
    if w.amplitude < 0.0 {
        return Err(Error::Precondition("the weight must be nonnegative".into()));
    }
    if w.amplitude == 0.0 {
        return Err(Error::Degenerate("the weight vanishes identically".into()));
    }
    cfg.validate(c.k())?;
    w.build()
}

/// `y` uniform on `[1, 2)^k` with signs, as a Latin hypercube in the
/// magnitudes with the `2^k` sign patterns cycled evenly.
pub fn shell_samples(k: usize, seed: u64, n: usize) -> Vec<Vec<f64>> {
    let mut r = rng::stream(seed, rng::label_id("shell"));
    let perms: Vec<Vec<usize>> = (0..k)
        .map(|_| {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(&mut r);
            p
        })
        .collect();
    (0..n)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let u: f64 = r.random();
                    let mag = 1.0 + (perms[j][i] as f64 + u) / n as f64;
                    if (i >> j) & 1 == 0 {
                        mag
                    } else {
                        -mag
                    }
                })
                .collect()
        })
        .collect()
}

/// Per-direction data of the frequency sphere: the selected `Q` (index into
/// the list of candidate sets) and membership in each candidate cone.
struct DirectionTable {
    ang: AngularRule,
    selected: Vec<Option<usize>>,
    member: Vec<Vec<bool>>,
    sets: Vec<Vec<usize>>,
}

impl DirectionTable {
    fn new(c: &CoefficientMatrix, m: f64, n_polar: usize) -> Self {
        let ang = AngularRule::new(c.l(), n_polar);
        let sets: Vec<Vec<usize>> = (0..c.k()).combinations(c.k() - c.l()).collect();
        let mut selected = Vec::with_capacity(ang.directions.len());
        let mut member = Vec::with_capacity(ang.directions.len());
        for dir in &ang.directions {
            selected.push(select_q(c, dir, m).ok().and_then(|q| sets.iter().position(|s| *s == q)));
            member.push(sets.iter().map(|s| in_f_q(c, dir, m, s)).collect());
        }
        Self { ang, selected, member, sets }
    }
}

/// Per-direction radial integrals `int_0^R r^{rho + l - 1} w(y . C (r dir)) dr`.
fn direction_integrals(
    c: &CoefficientMatrix,
    y: &[f64],
    w: &Gaussian,
    table: &DirectionTable,
    unit_rule: &(Vec<f64>, Vec<f64>),
    beta: f64,
    radius: f64,
) -> Vec<f64> {
    let scale_w = radius.powf(beta + 1.0);
    let mut tau = vec![0.0; c.k()];
    table
        .ang
        .directions
        .iter()
        .map(|dir| {
            let v = adjoint_one(c, dir);
            let mut s = 0.0;
            for (r, wr) in unit_rule.0.iter().zip(&unit_rule.1) {
                let rr = r * radius;
                for i in 0..tau.len() {
                    tau[i] = y[i] * v[i] * rr;
                }
                s += wr * w.value(&tau);
            }
            s * scale_w
        })
        .collect()
}

/// `int_{R^k} |tau|^{rho - k + l} w(tau) dtau`.
fn weight_moment(c: &CoefficientMatrix, rho: f64, w: &Gaussian, cfg: &McConfig) -> f64 {
    let radius = norm2(&w.spec.mean) + cfg.truncation_sigmas * w.sigma_bound();
    radial_integral(c.k(), rho - c.k() as f64 + c.l() as f64, radius, &cfg.radial, |t| w.value(t))
}

struct ShellSums {
    total: Vec<f64>,
    per_q: Vec<Vec<f64>>,
    member: Vec<f64>,
}

fn shell_sums(c: &CoefficientMatrix, rho: f64, w: &Gaussian, cfg: &McConfig) -> Result<(ShellSums, DirectionTable)> {
    let m = constant_m(c)?;
    let table = DirectionTable::new(c, m, cfg.radial.angular);
    let beta = rho + c.l() as f64 - 1.0;
    let unit_rule = radial_rule(1.0, beta, &cfg.radial);
    let reach = norm2(&w.spec.mean) + cfg.truncation_sigmas * w.sigma_bound();
    let k = c.k();
    let shell_volume = 2f64.powi(k as i32);
    let nq = table.sets.len();
    let ys = shell_samples(k, cfg.seed, cfg.n_y);
    let rows: Vec<(f64, Vec<f64>, f64)> = ys
        .par_iter()
        .map(|y| {
            let ymin = y.iter().fold(f64::INFINITY, |a, b| a.min(b.abs()));
            let radius = m * reach / ymin;
            let dirs = direction_integrals(c, y, w, &table, &unit_rule, beta, radius);
            let mut total = 0.0;
            let mut per_q = vec![0.0; nq];
            let mut member = 0.0;
            for (d, (s, wd)) in dirs.iter().zip(&table.ang.weights).enumerate() {
                let v = s * wd;
                total += v;
                if let Some(qi) = table.selected[d] {
                    per_q[qi] += v;
                }
                member += v * table.member[d].iter().filter(|b| **b).count() as f64;
            }
            (total * shell_volume, per_q.into_iter().map(|x| x * shell_volume).collect(), member * shell_volume)
        })
        .collect();
    let mut sums = ShellSums { total: Vec::with_capacity(rows.len()), per_q: vec![Vec::new(); nq], member: Vec::new() };
    for (t, pq, mb) in rows {
        sums.total.push(t);
        for (acc, v) in sums.per_q.iter_mut().zip(pq) {
            acc.push(v);
        }
        sums.member.push(mb);
    }
    Ok((sums, table))
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn report(samples: &[f64], rhs: f64, rho: f64, q: Option<Vec<usize>>, cfg: &McConfig) -> RatioReport {
    let (lhs, se) = mean_stderr(samples);
    RatioReport { lhs, rhs, ratio: lhs / rhs, stderr: se / rhs, rho, q, n_y: cfg.n_y, seed: cfg.seed }
}

/// Ratio of the shell frequency integral to the weighted moment of `w`.
pub fn lemma_ratio(c: &CoefficientMatrix, rho: f64, w: &GaussianSpec, cfg: &McConfig) -> Result<RatioReport> {
    let g = check_lemma_inputs(c, rho, w, cfg)?;
    let rhs = weight_moment(c, rho, &g, cfg);
    if rhs <= 0.0 {
        return Err(Error::Degenerate("the weighted moment of w vanishes".into()));
    }
    let (sums, _) = shell_sums(c, rho, &g, cfg)?;
    Ok(report(&sums.total, rhs, rho, None, cfg))
}

/// The ratio restricted to the frequency cone `F_Q`, where `F_Q` is the set
/// of `zeta` for which [`select_q`] returns `Q`.
pub fn per_q_ratio(
    c: &CoefficientMatrix,
    rho: f64,
    w: &GaussianSpec,
    q: &[usize],
    cfg: &McConfig,
) -> Result<RatioReport> {
    let cover = cover_check(c, rho, w, cfg)?;
    cover
        .per_q
        .into_iter()
        .find(|r| r.q.as_deref() == Some(q))
        .ok_or_else(|| Error::Precondition(format!("{q:?} is not a {}-subset of the rows", c.k() - c.l())))
}

/// Total and per-`Q` ratios from one pass over the same samples.
pub fn cover_check(c: &CoefficientMatrix, rho: f64, w: &GaussianSpec, cfg: &McConfig) -> Result<CoverReport> {
    let g = check_lemma_inputs(c, rho, w, cfg)?;
    let rhs = weight_moment(c, rho, &g, cfg);
    if rhs <= 0.0 {
        return Err(Error::Degenerate("the weighted moment of w vanishes".into()));
    }
    let (sums, table) = shell_sums(c, rho, &g, cfg)?;
    let total = report(&sums.total, rhs, rho, None, cfg);
    let per_q: Vec<RatioReport> = table
        .sets
        .iter()
        .zip(&sums.per_q)
        .map(|(q, s)| report(s, rhs, rho, Some(q.clone()), cfg))
        .collect();
    let zero_mass = per_q.iter().filter(|r| r.lhs == 0.0).filter_map(|r| r.q.clone()).collect();
    let cover_ratio = per_q.iter().map(|r| r.lhs).sum::<f64>() / total.lhs;
    let membership_cover_ratio = mean_stderr(&sums.member).0 / total.lhs;
    Ok(CoverReport { total, per_q, cover_ratio, membership_cover_ratio, zero_mass })
}

/// `2 |c|^{-rho-1} int_1^2 y^{-rho-1} dy`: the ratio for `k = l = 1`.
pub fn one_dim_ratio(c: f64, rho: f64) -> f64 {
    let yint = if rho == 0.0 { std::f64::consts::LN_2 } else { (1.0 - 2f64.powf(-rho)) / rho };
    2.0 * c.abs().powf(-rho - 1.0) * yint
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovConfig {
    /// Gauss-Legendre panels per axis.
    pub panels: usize,
    pub order: usize,
    /// Half-width of the `tau` box in units of `sigma_bound`.
    pub sigmas: f64,
}

impl Default for CovConfig {
    fn default() -> Self {
        Self { panels: 12, order: 8, sigmas: 8.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovReport {
    pub closed_form: f64,
    pub integral: f64,
    pub rel_err: f64,
}

/// Compares `int g` with `int g(tau(zeta, y_tail)) J dzeta dy_tail`, where
/// `tau_i = y_i (C zeta)_i`, the head coordinates of `y` are fixed and `J` is
/// the closed-form Jacobian.
///
/// The map is injective off a null set on all of `R^l x R^{k-l}`, so the
/// whole space is integrated: `zeta` over the preimage of the `tau_head` box
/// and each `y_i` over `|y_i (C zeta)_i| <= T`.
pub fn change_of_variables_check(
    c: &CoefficientMatrix,
    part: &Partition,
    y_head: &[f64],
    g: &GaussianSpec,
    cfg: &CovConfig,
) -> Result<CovReport> {
    let (k, l) = (c.k(), c.l());
    if part.head.len() != l || part.tail.len() != k - l || y_head.len() != l {
        return Err(Error::InvalidDimension("partition does not match the matrix".into()));
    }
    if y_head.iter().any(|y| !(1.0..2.0).contains(&y.abs())) {
        return Err(Error::Precondition("fixed coordinates must satisfy 1 <= |y| < 2".into()));
    }
    if g.mean.len() != k {
        return Err(Error::InvalidDimension("g must live on R^k".into()));
    }
    if g.amplitude == 0.0 {
        return Ok(CovReport { closed_form: 0.0, integral: 0.0, rel_err: 0.0 });
    }
    let gauss = g.build()?;
    let half = cfg.sigmas * gauss.sigma_bound();
    let mut y = vec![0.0; k];
    for (a, &i) in part.head.iter().enumerate() {
        y[i] = y_head[a];
    }
    // tau_head = A zeta with A = diag(y_head) C_head
    let mut a = vec![0.0; l * l];
    for (r, &i) in part.head.iter().enumerate() {
        for j in 0..l {
            a[r * l + j] = y[i] * c.c(i, j);
        }
    }
    let a_inv = linalg::inverse(&a, l).ok_or_else(|| Error::SingularSubmatrix { rows: part.head.clone() })?;
    let m_head: Vec<f64> = part.head.iter().map(|&i| g.mean[i]).collect();
    let zc = linalg::mat_vec(&a_inv, l, l, &m_head);
    let zh: Vec<f64> = (0..l).map(|i| half * (0..l).map(|j| a_inv[i * l + j].abs()).sum::<f64>()).collect();

    let (un, uw) = composite(-1.0, 1.0, cfg.panels, cfg.order);
    let n1 = un.len();
    let det_head = crate::rational::to_f64(&crate::surface::row_subset_det(c, &part.head)).abs();
    let total_z = n1.pow(l as u32);
    let partial: Vec<f64> = (0..total_z)
        .into_par_iter()
        .map(|zi| {
            let mut zeta = vec![0.0; l];
            let mut wz = 1.0;
            let mut idx = zi;
            for j in 0..l {
                let t = idx % n1;
                idx /= n1;
                zeta[j] = zc[j] + zh[j] * un[t];
                wz *= zh[j] * uw[t];
            }
            let v = adjoint_one(c, &zeta);
            let mut yy = y.clone();
            let mut tau = vec![0.0; k];
            let tail_n = n1.pow((k - l) as u32);
            let mut s = 0.0;
            for ti in 0..tail_n {
                let mut wt = 1.0;
                let mut idx = ti;
                let mut ok = true;
                for &i in &part.tail {
                    let t = idx % n1;
                    idx /= n1;
                    if v[i] == 0.0 {
                        ok = false;
                        break;
                    }
                    let h = (half + g.mean[i].abs()) / v[i].abs();
                    yy[i] = h * un[t];
                    wt *= h * uw[t];
                }
                if !ok {
                    continue;
                }
                for i in 0..k {
                    tau[i] = yy[i] * v[i];
                }
                let jac = crate::surface::jacobian_closed_form_with_det(c, &yy, &zeta, part, det_head);
                s += wt * jac * gauss.value(&tau);
            }
            wz * s
        })
        .collect();
    let integral: f64 = partial.iter().sum();
    let closed_form = gauss.integral();
    Ok(CovReport { closed_form, integral, rel_err: (integral - closed_form).abs() / closed_form.abs() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlancherelReport {
    /// Shell integral of `|f^(L*_y zeta)|^2 |zeta|^{d-2l}`.
    pub weighted_integral: f64,
    pub l2_norm_sq: f64,
    pub ratio: f64,
    pub stderr: f64,
}

/// `|f^|^2` of a Gaussian, as a Gaussian spec on frequency space.
pub fn fourier_power_spec(f: &GaussianSpec) -> Result<GaussianSpec> {
    let n = f.mean.len();
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let inv = linalg::inverse(&f.cov, n).ok_or_else(|| Error::Precondition("singular covariance".into()))?;
    let cov: Vec<f64> = inv.iter().map(|x| x / (8.0 * pi2)).collect();
    let det = linalg::det(&cov, n);
    let amplitude =
        f.amplitude * f.amplitude * (2.0 * std::f64::consts::PI).powf(n as f64 / 2.0) * det.sqrt();
    Ok(GaussianSpec { mean: vec![0.0; n], cov, amplitude })
}

/// The weighted integral with `w = |f^|^2` and `rho = d - 2l` against
/// `||f||_2^2`.
pub fn plancherel_chain(c: &CoefficientMatrix, f: &GaussianSpec, cfg: &McConfig) -> Result<PlancherelReport> {
    let w = fourier_power_spec(f)?;
    let rho = c.d() as f64 - 2.0 * c.l() as f64;
    let g = check_lemma_inputs(c, rho, &w, cfg)?;
    let (sums, _) = shell_sums(c, rho, &g, cfg)?;
    let (a, se) = mean_stderr(&sums.total);
    let b = f.build()?.l2_norm_sq();
    Ok(PlancherelReport { weighted_integral: a, l2_norm_sq: b, ratio: a / b, stderr: se / b })
}

/// `(d - 2l) - (k - l)`, the power of `|tau|` in the moment used by the
/// `L^2` bound; zero for every `(k, l)`.
pub fn plancherel_exponent(k: i64, l: i64) -> i64 {
    let d = k + l;
    (d - 2 * l) - (k - l)
}
