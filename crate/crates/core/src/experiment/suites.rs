use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::config::{parse_params, ResolvedConfig, Suite};
use crate::conv::{
    ball_scaling_experiment, ineq6_check, ineq6_family, restricted_estimate_scan, restricted_family, vertex_probe,
    BallScanConfig, FamilySpec, Ineq6Config, RestrictedConfig, SamplerSpec,
};
use crate::exponent::{critical_p0, critical_q0, ricci_gap, vertex_identity_holds, TypeSet};
use crate::gaussian::GaussianSpec;
use crate::lemma::{cover_check, lemma_ratio, one_dim_ratio, plancherel_chain, McConfig};
use crate::quadrature::RadialParams;
use crate::rational::{self, Rational};
use crate::rng;
use crate::surface::{check_star, CoefficientMatrix};
use crate::transform::{
    fourier_check, oscillatory_sup_bound, pairing_check, transform, Deposit, GridFunction, TargetSpec,
};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: String,
}

impl Verdict {
    fn new(name: impl Into<String>, passed: bool, value: f64, tolerance: impl Into<String>) -> Self {
        Self { name: name.into(), passed, value, tolerance: tolerance.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutput {
    pub payload: Value,
    pub verdicts: Vec<Verdict>,
    pub tables: Vec<Table>,
    /// JSON-lines records, by file stem.
    pub records: Vec<(String, Vec<Value>)>,
    /// Ratio per ensemble member, for plots.
    pub ensemble: Vec<EnsembleRatio>,
    pub samples: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRatio {
    pub member: String,
    pub ratio: f64,
}

impl EnsembleRatio {
    fn new(member: impl Into<String>, ratio: f64) -> Self {
        Self { member: member.into(), ratio }
    }
}

impl SuiteOutput {
    fn new(payload: Value) -> Self {
        Self { payload, verdicts: Vec::new(), tables: Vec::new(), records: Vec::new(), ensemble: Vec::new(), samples: 0 }
    }
}

fn f(x: f64) -> String {
    format!("{x}")
}

pub fn run_suite(cfg: &ResolvedConfig) -> Result<SuiteOutput> {
    let c = &cfg.matrix;
    let p = &cfg.config.params;
    match cfg.config.suite {
        Suite::CheckStar => check_star_suite(c, &parse_params(p)?),
        Suite::Typeset => typeset_suite(c, &parse_params(p)?),
        Suite::BallScan => ball_scan_suite(c, &parse_params(p)?, cfg.seed),
        Suite::RestrictedScan => restricted_suite(c, &parse_params(p)?, cfg.seed),
        Suite::LemmaMc => lemma_suite(c, &parse_params(p)?, cfg.seed, &cfg.matrix_id),
        Suite::TransformCheck => transform_suite(c, &parse_params(p)?, cfg.seed),
        Suite::Plancherel => plancherel_suite(c, &parse_params(p)?, cfg.seed),
        Suite::Ineq6 => ineq6_suite(c, &parse_params(p)?, cfg.seed),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    #[default]
    Holds,
    Fails,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckStarParams {
    #[serde(default)]
    pub expect: Expectation,
}

fn check_star_suite(c: &CoefficientMatrix, p: &CheckStarParams) -> Result<SuiteOutput> {
    let r = check_star(c);
    let mut out = SuiteOutput::new(r.to_json());
    let want = p.expect == Expectation::Holds;
    out.verdicts.push(Verdict::new(
        "star-condition",
        r.holds == want,
        rational::to_f64(&r.min_abs_det),
        if want { "holds" } else { "fails" },
    ));
    Ok(out)
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypesetParams {
    pub k: Option<u32>,
    pub d: Option<u32>,
}

fn typeset_suite(c: &CoefficientMatrix, p: &TypesetParams) -> Result<SuiteOutput> {
    let k = p.k.unwrap_or(c.k() as u32);
    let d = p.d.unwrap_or(c.d() as u32);
    let ts = TypeSet::new(k, d)?;
    let q0 = critical_q0(k, d)?;
    let p0 = critical_p0(k, d)?;
    let gap = ricci_gap(k, d)?;
    let mut payload = ts.to_json();
    payload["q0"] = rational::to_json(&q0);
    payload["p0"] = rational::to_json(&p0);
    let mut out = SuiteOutput::new(payload);
    let v = &ts.vertices[2];
    let dual_ok = p0.recip() + q0.recip() == rational::int(1)
        && v.inv_p == p0.recip()
        && v.inv_q == q0.recip();
    out.verdicts.push(Verdict::new("vertex-self-duality", dual_ok, 0.0, "exact"));
    let ident = vertex_identity_holds(k, d - k)?;
    out.verdicts.push(Verdict::new("vertex-identity", ident, 0.0, "exact"));
    let mut t = Table::new("vertices", &["vertex", "inv_p", "inv_q"]);
    for (i, v) in ts.vertices.iter().enumerate() {
        t.push(vec![i.to_string(), v.inv_p.to_string(), v.inv_q.to_string()]);
    }
    out.tables.push(t);
    if let Some(g) = gap {
        out.payload["ricci_gap"] = rational::to_json(&g);
    }
    Ok(out)
}

fn default_deltas() -> Vec<f64> {
    vec![0.125, 0.0625, 0.03125, 0.015625]
}

fn default_exponent_tol() -> f64 {
    0.15
}

fn default_samples() -> usize {
    16384
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallScanParams {
    #[serde(default = "default_deltas")]
    pub deltas: Vec<f64>,
    /// Values of `1/p` as `[num, den]`; defaults to `1/p0 -+ 1/20`.
    #[serde(default, with = "crate::rational::json_vec")]
    pub inv_p: Vec<Rational>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_strata")]
    pub strata: usize,
    #[serde(default = "default_cells")]
    pub cells_per_delta: usize,
    #[serde(default = "default_centres")]
    pub random_centres: usize,
    #[serde(default = "default_exponent_tol")]
    pub tolerance: f64,
    /// Slope margin for the sign flip across the vertex.
    #[serde(default = "default_slope_margin")]
    pub slope_margin: f64,
}

fn default_strata() -> usize {
    8
}
fn default_cells() -> usize {
    8
}
fn default_centres() -> usize {
    2
}
fn default_slope_margin() -> f64 {
    0.05
}

impl Default for BallScanParams {
    fn default() -> Self {
        parse_params(&json!({})).expect("defaults")
    }
}

fn ball_scan_suite(c: &CoefficientMatrix, p: &BallScanParams, seed: u64) -> Result<SuiteOutput> {
    let (k, d) = (c.k() as u32, c.d() as u32);
    let probe = vertex_probe(k, d, &rational::rat(1, 20))?;
    let inv_ps = if p.inv_p.is_empty() { probe.to_vec() } else { p.inv_p.clone() };
    let cfg = BallScanConfig {
        sampler: SamplerSpec { samples: p.samples, strata: p.strata, seed },
        cells_per_delta: p.cells_per_delta,
        random_centres: p.random_centres,
    };
    let scan = ball_scaling_experiment(c, &p.deltas, &inv_ps, &cfg)?;
    let mut out = SuiteOutput::new(serde_json::to_value(&scan)?);
    let err = (scan.fitted_exponent - scan.expected_exponent).abs();
    out.verdicts.push(Verdict::new("delta-exponent", err <= p.tolerance, scan.fitted_exponent, format!("{} +- {}", scan.expected_exponent, p.tolerance)));
    let inv_p0 = rational::to_f64(&critical_p0(k, d)?.recip());
    for s in &scan.ratio_slopes {
        if s.inv_p < inv_p0 {
            out.verdicts.push(Verdict::new(format!("ratio-slope-below-vertex@{}", s.inv_p), s.slope >= -p.slope_margin, s.slope, format!(">= -{}", p.slope_margin)));
        } else if s.inv_p > inv_p0 {
            out.verdicts.push(Verdict::new(format!("ratio-slope-above-vertex@{}", s.inv_p), s.slope <= -p.slope_margin, s.slope, format!("<= -{}", p.slope_margin)));
        }
    }
    let mut t = Table::new("ball_scan", &["delta", "p_num", "p_den", "norm", "ratio", "stderr", "center_id"]);
    for r in &scan.rows {
        t.push(vec![f(r.delta), r.p_num.clone(), r.p_den.clone(), f(r.norm), f(r.ratio), f(r.stderr), r.center_id.to_string()]);
    }
    out.tables.push(t);
    out.samples = (p.samples * p.deltas.len() * (1 + p.random_centres)) as u64;
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictedParams {
    /// `1/p` as `[num, den]`; defaults to the midpoint of `(1/q0, 1/p0)`.
    #[serde(default, with = "crate::rational::json_opt")]
    pub inv_p: Option<Rational>,
    #[serde(default = "default_family")]
    pub family_size: usize,
    #[serde(default = "default_restricted_samples")]
    pub samples: usize,
    #[serde(default = "default_growth")]
    pub growth_tolerance: f64,
}

fn default_family() -> usize {
    32
}
fn default_restricted_samples() -> usize {
    8192
}
fn default_growth() -> f64 {
    0.25
}

impl Default for RestrictedParams {
    fn default() -> Self {
        parse_params(&json!({})).expect("defaults")
    }
}

fn restricted_suite(c: &CoefficientMatrix, p: &RestrictedParams, seed: u64) -> Result<SuiteOutput> {
    let (k, d) = (c.k() as u32, c.d() as u32);
    let inv_p = match &p.inv_p {
        Some(v) => v.clone(),
        None => (critical_p0(k, d)?.recip() + critical_q0(k, d)?.recip()) / rational::int(2),
    };
    let family = restricted_family(c, &FamilySpec { size: p.family_size, seed })?;
    let cfg = RestrictedConfig { sampler: SamplerSpec { samples: p.samples, seed, ..SamplerSpec::default() }, ..RestrictedConfig::default() };
    let scan = restricted_estimate_scan(c, &inv_p, &family, &cfg)?;
    let mut out = SuiteOutput::new(serde_json::to_value(&scan)?);
    out.verdicts.push(Verdict::new("sup-finite", scan.sup.is_finite(), scan.sup, "finite"));
    out.verdicts.push(Verdict::new("family-doubling-growth", scan.doubling_growth < p.growth_tolerance, scan.doubling_growth, format!("< {}", p.growth_tolerance)));
    let mut t = Table::new("restricted_scan", &["set_id", "kind", "measure", "ratio"]);
    for r in &scan.rows {
        t.push(vec![r.set_id.to_string(), r.kind.clone(), f(r.measure), f(r.ratio)]);
        out.ensemble.push(EnsembleRatio::new(format!("set{}", r.set_id), r.ratio));
    }
    out.tables.push(t);
    out.samples = (p.samples * p.family_size) as u64;
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaParams {
    /// Defaults to `{0, 1, d - 2l}`.
    #[serde(default)]
    pub rhos: Vec<f64>,
    #[serde(default = "default_weights")]
    pub n_weights: usize,
    #[serde(default = "default_ny")]
    pub n_y: usize,
    #[serde(default)]
    pub radial: RadialParams,
    #[serde(default = "default_drift")]
    pub drift_tolerance: f64,
    #[serde(default = "default_cover")]
    pub cover_range: [f64; 2],
}

fn default_weights() -> usize {
    20
}
fn default_ny() -> usize {
    128
}
fn default_drift() -> f64 {
    0.1
}
fn default_cover() -> [f64; 2] {
    [0.98, 1.10]
}

impl Default for LemmaParams {
    fn default() -> Self {
        parse_params(&json!({})).expect("defaults")
    }
}

/// The standard Gaussian ensemble for weights and test functions.
pub fn gaussian_ensemble(dim: usize, n: usize, seed: u64, label: &str) -> Vec<GaussianSpec> {
    let mut r = rng::stream(seed, rng::label_id(label));
    (0..n).map(|_| GaussianSpec::random(dim, &mut r, 1.0, 0.3, 1.0)).collect()
}

fn default_rhos(c: &CoefficientMatrix) -> Vec<f64> {
    let mut v = vec![0.0, 1.0, c.d() as f64 - 2.0 * c.l() as f64];
    v.dedup();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn lemma_suite(c: &CoefficientMatrix, p: &LemmaParams, seed: u64, matrix_id: &str) -> Result<SuiteOutput> {
    let rhos = if p.rhos.is_empty() { default_rhos(c) } else { p.rhos.clone() };
    let cfg = McConfig { seed, n_y: p.n_y, radial: p.radial, ..McConfig::default() };
    let weights = gaussian_ensemble(c.k(), p.n_weights, seed, "lemma-weights");
    let mut t = Table::new("lemma", &["matrix_id", "rho", "w_id", "Q", "lhs", "rhs", "ratio", "stderr", "n_y", "seed"]);
    let mut records = Vec::new();
    let mut worst_drift: f64 = 0.0;
    let (mut cover_lo, mut cover_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut max_total: f64 = 0.0;
    let mut max_per_q: f64 = 0.0;
    let mut one_dim_err: f64 = 0.0;
    let mut summary = Vec::new();
    let mut ensemble = Vec::new();
    for (wi, w) in weights.iter().enumerate() {
        for &rho in &rhos {
            let cover = cover_check(c, rho, w, &cfg)?;
            let fine = lemma_ratio(c, rho, w, &cfg.doubled())?;
            let drift = (fine.ratio / cover.total.ratio - 1.0).abs();
            worst_drift = worst_drift.max(drift);
            cover_lo = cover_lo.min(cover.cover_ratio);
            cover_hi = cover_hi.max(cover.cover_ratio);
            max_total = max_total.max(cover.total.ratio);
            for r in &cover.per_q {
                max_per_q = max_per_q.max(r.ratio);
            }
            if c.k() == 1 && c.l() == 1 {
                let exact = one_dim_ratio(c.c(0, 0), rho);
                one_dim_err = one_dim_err.max((cover.total.ratio / exact - 1.0).abs());
            }
            let mut row = |r: &crate::lemma::RatioReport, q: String| {
                t.push(vec![
                    matrix_id.to_string(),
                    f(rho),
                    wi.to_string(),
                    q,
                    f(r.lhs),
                    f(r.rhs),
                    f(r.ratio),
                    f(r.stderr),
                    r.n_y.to_string(),
                    r.seed.to_string(),
                ]);
            };
            row(&cover.total, "all".into());
            for r in &cover.per_q {
                let q = r.q.as_ref().map(|q| q.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")).unwrap_or_default();
                row(r, format!("{{{q}}}"));
            }
            row(&fine, "all(doubled)".into());
            ensemble.push(EnsembleRatio::new(format!("w{wi}/rho={rho}"), cover.total.ratio));
            let mut rec = serde_json::to_value(&cover.total)?;
            rec["matrix_id"] = json!(matrix_id);
            rec["w_id"] = json!(wi);
            records.push(rec);
            summary.push(json!({
                "w_id": wi,
                "rho": rho,
                "ratio": cover.total.ratio,
                "ratio_doubled": fine.ratio,
                "drift": drift,
                "cover_ratio": cover.cover_ratio,
                "membership_cover_ratio": cover.membership_cover_ratio,
                "zero_mass": cover.zero_mass,
            }));
        }
    }
    let mut out = SuiteOutput::new(json!({ "rhos": rhos, "weights": weights, "runs": summary }));
    out.ensemble = ensemble;
    out.verdicts.push(Verdict::new("doubling-drift", worst_drift < p.drift_tolerance, worst_drift, format!("< {}", p.drift_tolerance)));
    let cover_ok = cover_lo >= p.cover_range[0] && cover_hi <= p.cover_range[1];
    out.verdicts.push(Verdict::new("per-q-cover", cover_ok, cover_hi, format!("in [{}, {}]", p.cover_range[0], p.cover_range[1])));
    out.verdicts.push(Verdict::new("per-q-below-total", max_per_q <= max_total * (1.0 + 1e-12), max_per_q, format!("<= {max_total}")));
    if c.k() == 1 && c.l() == 1 {
        out.verdicts.push(Verdict::new("one-dim-closed-form", one_dim_err <= 0.02, one_dim_err, "<= 0.02"));
    }
    out.tables.push(t);
    out.records.push(("ratios".into(), records));
    out.samples = (p.n_weights * rhos.len() * p.n_y * 3) as u64;
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlancherelParams {
    #[serde(default = "default_weights")]
    pub n_functions: usize,
    #[serde(default = "default_ny")]
    pub n_y: usize,
    #[serde(default = "default_drift")]
    pub drift_tolerance: f64,
}

impl Default for PlancherelParams {
    fn default() -> Self {
        parse_params(&json!({})).expect("defaults")
    }
}

fn plancherel_suite(c: &CoefficientMatrix, p: &PlancherelParams, seed: u64) -> Result<SuiteOutput> {
    let cfg = McConfig { seed, n_y: p.n_y, ..McConfig::default() };
    let fs = gaussian_ensemble(c.k(), p.n_functions, seed, "plancherel-functions");
    let mut t = Table::new("plancherel", &["f_id", "weighted_integral", "l2_norm_sq", "ratio", "ratio_doubled", "drift"]);
    let mut worst: f64 = 0.0;
    let mut min_ratio = f64::INFINITY;
    let mut ensemble = Vec::new();
    for (i, spec) in fs.iter().enumerate() {
        let a = plancherel_chain(c, spec, &cfg)?;
        let b = plancherel_chain(c, spec, &cfg.doubled())?;
        let drift = (b.ratio / a.ratio - 1.0).abs();
        worst = worst.max(drift);
        min_ratio = min_ratio.min(if a.ratio.is_finite() { a.ratio } else { f64::NAN });
        t.push(vec![i.to_string(), f(a.weighted_integral), f(a.l2_norm_sq), f(a.ratio), f(b.ratio), f(drift)]);
        ensemble.push(EnsembleRatio::new(format!("f{i}"), a.ratio));
    }
    let exponent = crate::lemma::plancherel_exponent(c.k() as i64, c.l() as i64);
    let mut out = SuiteOutput::new(json!({ "functions": fs, "rho": c.d() as f64 - 2.0 * c.l() as f64, "moment_exponent": exponent }));
    out.ensemble = ensemble;
    out.verdicts.push(Verdict::new("ratio-finite", min_ratio.is_finite() && min_ratio > 0.0, min_ratio, "finite and positive"));
    out.verdicts.push(Verdict::new("doubling-drift", worst < p.drift_tolerance, worst, format!("< {}", p.drift_tolerance)));
    out.verdicts.push(Verdict::new("moment-exponent-zero", exponent == 0, exponent as f64, "== 0"));
    out.tables.push(t);
    out.samples = (p.n_functions * p.n_y * 3) as u64;
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformParams {
    #[serde(default = "default_transform_cells")]
    pub cells: usize,
    #[serde(default = "default_transform_functions")]
    pub n_functions: usize,
    #[serde(default = "default_pairing_tol")]
    pub pairing_tolerance: f64,
    #[serde(default = "default_leak_tol")]
    pub leak_tolerance: f64,
    #[serde(default = "default_fourier_tol")]
    pub fourier_tolerance: f64,
    #[serde(default = "default_s_values")]
    pub s_values: Vec<f64>,
    #[serde(default = "default_osc_functions")]
    pub oscillatory_functions: usize,
    #[serde(default = "default_osc_cells")]
    pub oscillatory_cells: usize,
}

fn default_transform_cells() -> usize {
    128
}
fn default_transform_functions() -> usize {
    3
}
fn default_pairing_tol() -> f64 {
    0.01
}
fn default_leak_tol() -> f64 {
    0.001
}
fn default_fourier_tol() -> f64 {
    0.02
}
fn default_osc_functions() -> usize {
    10
}
fn default_osc_cells() -> usize {
    16
}
fn default_s_values() -> Vec<f64> {
    vec![0.5, 1.0, 2.0]
}

impl Default for TransformParams {
    fn default() -> Self {
        parse_params(&json!({})).expect("defaults")
    }
}

fn transform_suite(c: &CoefficientMatrix, p: &TransformParams, seed: u64) -> Result<SuiteOutput> {
    if c.k() > 3 {
        return Err(Error::Precondition("transform checks need k <= 3".into()));
    }
    let (k, l) = (c.k(), c.l());
    let mut r = rng::stream(seed, rng::label_id("transform-inputs"));
    let fs = gaussian_ensemble(k, p.n_functions, seed, "transform-f");
    let mut t = Table::new("transform", &["f_id", "check", "value"]);
    let (mut worst_pair, mut worst_leak, mut worst_ft): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut worst_osc = f64::NEG_INFINITY;
    let mut excluded = 0usize;
    let mut hs = Vec::new();
    for (i, fs_i) in fs.iter().enumerate() {
        use rand::Rng as _;
        let y: Vec<f64> = (0..k).map(|_| r.random_range(1.0..2.0) * if r.random::<bool>() { 1.0 } else { -1.0 }).collect();
        let g = fs_i.build()?;
        let src = GridFunction::box_around(&fs_i.mean, 6.0 * g.sigma_bound(), p.cells)?.fill(|x| g.value(x));
        let tf = transform(&src, c, &y, &TargetSpec::cells(p.cells))?;
        let leak = tf.leak_fraction();
        // test function resolved by the target grid
        let radius = crate::transform::default_target_radius(&src, c, &y);
        let hs_i = GaussianSpec::random(l, &mut r, 0.3 * radius, 0.1 * radius, 0.3 * radius);
        let hg = hs_i.build()?;
        hs.push(hs_i);
        let h = tf.grid.clone().fill(|u| hg.value(u));
        let pair = pairing_check(&src, &h, c, &y, Deposit::Nearest)?;
        let zetas: Vec<Vec<f64>> = (0..6)
            .map(|j| {
                let nyq = 0.5 / tf.grid.spacing;
                let rad = 0.5 * nyq * (j as f64 + 1.0) / 6.0;
                let dir: Vec<f64> = (0..l).map(|_| r.random_range(-1.0..1.0)).collect();
                let n = crate::linalg::norm2(&dir).max(1e-12);
                dir.iter().map(|v| v * rad / n).collect()
            })
            .collect();
        let ft = fourier_check(&g, c, &y, &zetas, p.cells)?;
        excluded += ft.excluded.len();
        worst_pair = worst_pair.max(pair.rel_err);
        worst_leak = worst_leak.max(leak);
        worst_ft = worst_ft.max(ft.max_rel_err);
        t.push(vec![i.to_string(), "pairing_rel_err".into(), f(pair.rel_err)]);
        t.push(vec![i.to_string(), "leak_fraction".into(), f(leak)]);
        t.push(vec![i.to_string(), "fourier_max_rel_err".into(), f(ft.max_rel_err)]);
    }
    let mut worst_zero: f64 = 0.0;
    let osc = gaussian_ensemble(k, p.oscillatory_functions, seed, "transform-oscillatory");
    for (i, spec) in osc.iter().enumerate() {
        use rand::Rng as _;
        let y: Vec<f64> = (0..k).map(|_| r.random_range(1.0..2.0) * if r.random::<bool>() { 1.0 } else { -1.0 }).collect();
        let g = spec.build()?;
        let fc = GridFunction::box_around(&spec.mean, 3.0 * g.sigma_bound(), p.oscillatory_cells)?.fill(|x| g.value(x));
        let ug = GridFunction::box_around(&vec![0.0; l], default_u_half(c, &fc, &y), p.oscillatory_cells)?;
        let zero = oscillatory_sup_bound(&fc, c, &y, 0.0, &ug)?;
        worst_zero = worst_zero.max((zero.sup_abs / zero.l1_norm_f - 1.0).abs());
        for &s in &p.s_values {
            let o = oscillatory_sup_bound(&fc, c, &y, s, &ug)?;
            let excess = o.sup_abs / o.l1_norm_f - 1.0;
            worst_osc = worst_osc.max(excess);
            t.push(vec![i.to_string(), format!("oscillatory_excess@{s}"), f(excess)]);
        }
    }
    let mut out = SuiteOutput::new(json!({ "functions": fs, "test_functions": hs, "excluded_frequencies": excluded }));
    out.verdicts.push(Verdict::new("pairing", worst_pair <= p.pairing_tolerance, worst_pair, format!("<= {}", p.pairing_tolerance)));
    out.verdicts.push(Verdict::new("mass-leak", worst_leak < p.leak_tolerance, worst_leak, format!("< {}", p.leak_tolerance)));
    out.verdicts.push(Verdict::new("fourier", worst_ft <= p.fourier_tolerance, worst_ft, format!("<= {}", p.fourier_tolerance)));
    out.verdicts.push(Verdict::new("oscillatory-bound", worst_osc <= 1e-3, worst_osc, "<= 1e-3"));
    out.verdicts.push(Verdict::new("oscillatory-equality-at-zero", worst_zero <= 1e-12, worst_zero, "<= 1e-12"));
    out.tables.push(t);
    out.samples = (p.n_functions * p.cells.pow(k as u32)) as u64;
    Ok(out)
}

fn default_u_half(c: &CoefficientMatrix, f: &GridFunction, y: &[f64]) -> f64 {
    crate::transform::default_target_radius(f, c, y)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ineq6Params {
    #[serde(default = "default_ineq6_family")]
    pub family_size: usize,
    #[serde(default = "default_ineq6_samples")]
    pub samples: usize,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "default_growth")]
    pub growth_tolerance: f64,
    #[serde(default = "default_drift")]
    pub drift_tolerance: f64,
}

fn default_ineq6_family() -> usize {
    128
}
fn default_ineq6_samples() -> usize {
    20000
}
fn default_sigma() -> f64 {
    0.5
}

impl Default for Ineq6Params {
    fn default() -> Self {
        parse_params(&json!({})).expect("defaults")
    }
}

fn ineq6_suite(c: &CoefficientMatrix, p: &Ineq6Params, seed: u64) -> Result<SuiteOutput> {
    let f = GaussianSpec::isotropic(c.k(), p.sigma);
    let family = ineq6_family(c, &f, p.family_size, seed)?;
    let cfg = Ineq6Config { samples: p.samples, seed };
    let rep = ineq6_check(c, &f, &family, &cfg)?;
    let fine = ineq6_check(c, &f, &family, &cfg.doubled())?;
    let drift = (fine.sup / rep.sup - 1.0).abs();
    let mut out = SuiteOutput::new(json!({
        "f": f,
        "sup": rep.sup,
        "argmax": rep.argmax,
        "doubling_growth": rep.doubling_growth,
        "sup_doubled_samples": fine.sup,
        "rows": rep.rows,
    }));
    out.verdicts.push(Verdict::new("sup-finite", rep.sup.is_finite() && rep.sup > 0.0, rep.sup, "finite and positive"));
    out.verdicts.push(Verdict::new("family-doubling-growth", rep.doubling_growth < p.growth_tolerance, rep.doubling_growth, format!("< {}", p.growth_tolerance)));
    out.verdicts.push(Verdict::new("sample-doubling-drift", drift < p.drift_tolerance, drift, format!("< {}", p.drift_tolerance)));
    let mut t = Table::new("ineq6", &["set_id", "kind", "measure", "lhs", "stderr", "rhs", "ratio"]);
    for r in &rep.rows {
        t.push(vec![r.set_id.to_string(), r.kind.clone(), f64s(r.measure), f64s(r.lhs), f64s(r.stderr), f64s(r.rhs), f64s(r.ratio)]);
        out.ensemble.push(EnsembleRatio::new(format!("set{}", r.set_id), r.ratio));
    }
    out.tables.push(t);
    out.samples = (3 * p.samples * p.family_size) as u64;
    Ok(out)
}

fn f64s(x: f64) -> String {
    f(x)
}

