use rand::Rng as _;

use crate::rational::{self, Rational};
use crate::rng;
use crate::surface::{check_star, CoefficientMatrix};
use crate::{Error, Result};

pub const MAX_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct GenMatrixSpec {
    pub k: usize,
    pub l: usize,
    pub seed: u64,
    pub threshold: Rational,
}

/// Integer entries in `[-9, 9]`, redrawn until every `l x l` minor has
/// `|det| >= threshold`.
pub fn gen_matrix(spec: &GenMatrixSpec) -> Result<CoefficientMatrix> {
    let (k, l) = (spec.k, spec.l);
    if l == 0 || l > k {
        return Err(Error::InvalidDimension(format!("need 1 <= l <= k, got k = {k}, l = {l}")));
    }
    let mut r = rng::stream(spec.seed, rng::label_id("gen-matrix"));
    for _ in 0..MAX_ATTEMPTS {
        let entries: Vec<Rational> = (0..k * l).map(|_| rational::int(r.random_range(-9..=9))).collect();
        let c = CoefficientMatrix::new(k, l, entries)?;
        let star = check_star(&c);
        if star.holds && star.min_abs_det >= spec.threshold {
            return Ok(c);
        }
    }
    Err(Error::ThresholdTooHigh { attempts: MAX_ATTEMPTS })
}
