use num_traits::{One, Zero};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{lq_norm_mc, SamplerSpec, SurfaceMeasure, TestSet};
use crate::exponent::{critical_p0, critical_q0, ExponentPair, Membership, TypeSet};
use crate::rational::{self, Rational};
use crate::rng;
use crate::surface::{check_star, surface_point, CoefficientMatrix};
use crate::{Error, Result};

/// Least-squares slope and intercept of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// `k + l / q0`, the decay exponent of `||mu * chi_{B_delta}||_{q0}`.
pub fn ball_exponent(k: u32, l: u32) -> Result<Rational> {
    let q0 = critical_q0(k, k + l)?;
    Ok(Rational::from_integer(k.into()) + Rational::from_integer(l.into()) / q0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallScanConfig {
    #[serde(default)]
    pub sampler: SamplerSpec,
    /// Grid cells per ball radius.
    #[serde(default = "default_cells")]
    pub cells_per_delta: usize,
    /// Surface points used as ball centres besides the origin.
    #[serde(default = "default_centres")]
    pub random_centres: usize,
}

fn default_cells() -> usize {
    8
}

fn default_centres() -> usize {
    2
}

impl Default for BallScanConfig {
    fn default() -> Self {
        Self { sampler: SamplerSpec::default(), cells_per_delta: 8, random_centres: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallRow {
    pub delta: f64,
    pub p_num: String,
    pub p_den: String,
    pub norm: f64,
    pub ratio: f64,
    pub stderr: f64,
    pub center_id: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub inv_p: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallScan {
    pub q0: f64,
    pub expected_exponent: f64,
    pub fitted_exponent: f64,
    pub per_centre_exponent: Vec<f64>,
    pub ratio_slopes: Vec<SlopeFit>,
    pub centres: Vec<Vec<f64>>,
    pub rows: Vec<BallRow>,
    pub low_confidence: bool,
}

/// `||mu * chi_{B(z, delta)}||_{q0}` over dyadic `delta` and the ratios
/// against `m_d(B)^{1/p}` for each `1/p` in `inv_ps`.
///
/// Each `delta` gets its own grid with spacing `delta / cells_per_delta`.
/// Slopes are least-squares fits in `log delta` with the coarsest `delta`
/// left out.
pub fn ball_scaling_experiment(
    c: &CoefficientMatrix,
    deltas: &[f64],
    inv_ps: &[Rational],
    cfg: &BallScanConfig,
) -> Result<BallScan> {
    if !check_star(c).holds {
        return Err(Error::Precondition("the coefficient matrix has a singular l x l row-submatrix".into()));
    }
    let mut ds = deltas.to_vec();
    ds.sort_by(|a, b| b.total_cmp(a));
    ds.dedup();
    if ds.len() < 3 || ds.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::Precondition("the ball scan needs at least three distinct positive radii".into()));
    }
    for ip in inv_ps {
        if ip <= &Rational::zero() || ip > &Rational::one() {
            return Err(Error::InvalidExponent(format!("1/p = {ip} is not in (0, 1]")));
        }
    }
    let (k, l, d) = (c.k() as u32, c.l() as u32, c.d());
    let q0 = rational::to_f64(&critical_q0(k, k + l)?);
    let expected = rational::to_f64(&ball_exponent(k, l)?);

    let mut r = rng::stream(cfg.sampler.seed, rng::label_id("ball-centres"));
    let mut centres = vec![vec![0.0; d]];
    for _ in 0..cfg.random_centres {
        let y: Vec<f64> = loop {
            let y: Vec<f64> = (0..c.k()).map(|_| r.random_range(-0.5..0.5)).collect();
            if y.iter().map(|v| v * v).sum::<f64>() < 0.25 {
                break y;
            }
        };
        centres.push(surface_point(c, &y));
    }

    let mut rows = Vec::new();
    let mut norms = vec![Vec::new(); centres.len()];
    let mut low = false;
    for (ci, z) in centres.iter().enumerate() {
        for (di, &delta) in ds.iter().enumerate() {
            let mu = SurfaceMeasure::with_spacing(c, delta / cfg.cells_per_delta as f64)?;
            let e = TestSet::ball(z.clone(), delta)?;
            let sampler = SamplerSpec { seed: cfg.sampler.seed ^ ((ci as u64) << 32 | di as u64), ..cfg.sampler };
            let est = lq_norm_mc(&mu, &e, q0, &sampler)?;
            low |= est.low_confidence;
            norms[ci].push(est.norm);
            for ip in inv_ps {
                let p = ip.recip();
                rows.push(BallRow {
                    delta,
                    p_num: p.numer().to_string(),
                    p_den: p.denom().to_string(),
                    norm: est.norm,
                    ratio: est.norm / e.measure().powf(rational::to_f64(ip)),
                    stderr: est.stderr,
                    center_id: ci,
                });
            }
        }
    }

    let logd: Vec<f64> = ds[1..].iter().map(|d| d.ln()).collect();
    let per_centre_exponent = norms.iter().map(|ns| fit_slope(&logd, &ns[1..].iter().map(|n| n.ln()).collect::<Vec<_>>()).0).collect();
    let xs: Vec<f64> = norms.iter().flat_map(|_| logd.iter().copied()).collect();
    let ys: Vec<f64> = norms.iter().flat_map(|ns| ns[1..].iter().map(|n| n.ln())).collect();
    let fitted_exponent = fit_slope(&xs, &ys).0;
    let ball_log_vol = |delta: f64| (crate::quadrature::ball_volume(d) * delta.powi(d as i32)).ln();
    let ratio_slopes = inv_ps
        .iter()
        .map(|ip| {
            let ipf = rational::to_f64(ip);
            let rs: Vec<f64> = norms
                .iter()
                .flat_map(|ns| ns[1..].iter().zip(&ds[1..]).map(move |(n, dl)| n.ln() - ipf * ball_log_vol(*dl)))
                .collect();
            SlopeFit { inv_p: ipf, slope: fit_slope(&xs, &rs).0 }
        })
        .collect();
    Ok(BallScan {
        q0,
        expected_exponent: expected,
        fitted_exponent,
        per_centre_exponent,
        ratio_slopes,
        centres,
        rows,
        low_confidence: low,
    })
}

/// `1/p0 -+ offset`, the two sides of the vertex probed by the ball scan.
pub fn vertex_probe(k: u32, d: u32, offset: &Rational) -> Result<[Rational; 2]> {
    let inv_p0 = critical_p0(k, d)?.recip();
    Ok([&inv_p0 - offset, &inv_p0 + offset])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub size: usize,
    pub seed: u64,
}

/// Balls, box unions, tangent tubes and sheared box unions with half-widths
/// between `1/16` and `1/2`; the `i`-th set depends only on `(seed, i)`.
pub fn restricted_family(c: &CoefficientMatrix, spec: &FamilySpec) -> Result<Vec<TestSet>> {
    let (k, d) = (c.k(), c.d());
    (0..spec.size)
        .map(|i| {
            let mut r = rng::stream(spec.seed, i as u64);
            let width = |r: &mut rng::Rng| 2f64.powf(-r.random_range(1.0..4.0));
            match i % 4 {
                1 => {
                    let centre = (0..d).map(|_| r.random_range(-0.5..0.5)).collect();
                    TestSet::ball(centre, width(&mut r))
                }
                2 => {
                    let n = r.random_range(1..=3usize);
                    let boxes = (0..n)
                        .map(|_| {
                            let mid: Vec<f64> = (0..d).map(|_| r.random_range(-0.5..0.5)).collect();
                            let hw: Vec<f64> = (0..d).map(|_| width(&mut r)).collect();
                            (
                                mid.iter().zip(&hw).map(|(m, h)| m - h).collect(),
                                mid.iter().zip(&hw).map(|(m, h)| m + h).collect(),
                            )
                        })
                        .collect();
                    TestSet::box_union(boxes)
                }
                3 => {
                    let y0: Vec<f64> = (0..k).map(|_| r.random_range(-0.5..0.5)).collect();
                    let a = width(&mut r);
                    let b = a * a * 2f64.powf(r.random_range(0.0..2.0));
                    TestSet::graph_tube(c, &y0, a, b)
                }
                _ => {
                    let mid: Vec<f64> = (0..d).map(|_| r.random_range(-0.5..0.5)).collect();
                    let hw: Vec<f64> = (0..d).map(|_| width(&mut r)).collect();
                    let base = TestSet::box_union(vec![(
                        mid.iter().zip(&hw).map(|(m, h)| m - h).collect(),
                        mid.iter().zip(&hw).map(|(m, h)| m + h).collect(),
                    )])?;
                    TestSet::sheared(base, c)
                }
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictedConfig {
    #[serde(default)]
    pub sampler: SamplerSpec,
    /// Grid cells per smallest half-width of a set.
    #[serde(default = "default_feature_cells")]
    pub cells_per_feature: usize,
    /// Upper bound on grid cells across a set's largest half-width.
    #[serde(default = "default_span_cells")]
    pub max_cells_per_span: usize,
}

fn default_feature_cells() -> usize {
    6
}

fn default_span_cells() -> usize {
    32
}

impl Default for RestrictedConfig {
    fn default() -> Self {
        Self { sampler: SamplerSpec { samples: 8192, ..SamplerSpec::default() }, cells_per_feature: 6, max_cells_per_span: 32 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestrictedRow {
    pub set_id: usize,
    pub kind: String,
    pub measure: f64,
    pub norm: f64,
    pub stderr: f64,
    pub ratio: f64,
    pub low_confidence: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestrictedScan {
    pub inv_p: f64,
    pub q0: f64,
    pub rows: Vec<RestrictedRow>,
    /// Running supremum of the ratio after each set.
    pub running_sup: Vec<f64>,
    pub sup: f64,
    pub argmax: usize,
    /// `sup(all sets) / sup(first half) - 1`.
    pub doubling_growth: f64,
}

/// Grid for resolving `e`.
pub fn measure_for(c: &CoefficientMatrix, e: &TestSet, cells_per_feature: usize, max_cells_per_span: usize) -> Result<SurfaceMeasure> {
    let (lo, hi) = e.bounding_box();
    let span = (0..c.k()).map(|i| 0.5 * (hi[i] - lo[i])).fold(0.0, f64::max);
    let h = (e.feature_size(c.k()) / cells_per_feature as f64).max(span / max_cells_per_span as f64);
    SurfaceMeasure::with_spacing(c, h.min(0.25))
}

/// `||mu * chi_E||_{q0} / m_d(E)^{1/p}` over a family of sets, for
/// `p0 < p < q0`.
pub fn restricted_estimate_scan(
    c: &CoefficientMatrix,
    inv_p: &Rational,
    family: &[TestSet],
    cfg: &RestrictedConfig,
) -> Result<RestrictedScan> {
    let (k, l) = (c.k() as u32, c.l() as u32);
    let ts = TypeSet::new(k, k + l)?;
    let q0 = critical_q0(k, k + l)?;
    let pt = ExponentPair::new(inv_p.clone(), q0.recip())?;
    if !ts.contains(&pt, Membership::Interior) {
        return Err(Error::OutsideTypeSet(format!(
            "(1/p, 1/q0) = ({inv_p}, {}) is not interior to the type set with vertices {:?}; need p0 < p < q0",
            q0.recip(),
            ts.vertices.iter().map(|v| (v.inv_p.to_string(), v.inv_q.to_string())).collect::<Vec<_>>()
        )));
    }
    if family.is_empty() {
        return Err(Error::Precondition("empty set family".into()));
    }
    let q0f = rational::to_f64(&q0);
    let ipf = rational::to_f64(inv_p);
    let mut rows = Vec::with_capacity(family.len());
    for (i, e) in family.iter().enumerate() {
        let mu = measure_for(c, e, cfg.cells_per_feature, cfg.max_cells_per_span)?;
        let sampler = SamplerSpec { seed: cfg.sampler.seed ^ (i as u64) << 20, ..cfg.sampler };
        let est = lq_norm_mc(&mu, e, q0f, &sampler)?;
        let m = e.measure();
        rows.push(RestrictedRow {
            set_id: i,
            kind: e.kind().to_string(),
            measure: m,
            norm: est.norm,
            stderr: est.stderr,
            ratio: est.norm / m.powf(ipf),
            low_confidence: est.low_confidence,
        });
    }
    let mut running_sup = Vec::with_capacity(rows.len());
    let (mut sup, mut argmax) = (f64::NEG_INFINITY, 0);
    for r in &rows {
        if r.ratio > sup {
            sup = r.ratio;
            argmax = r.set_id;
        }
        running_sup.push(sup);
    }
    let half = running_sup[(rows.len() - 1) / 2];
    Ok(RestrictedScan { inv_p: ipf, q0: q0f, rows, running_sup, sup, argmax, doubling_growth: sup / half - 1.0 })
}
