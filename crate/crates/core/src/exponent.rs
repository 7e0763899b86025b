//! Exact geometry of the exponent region for `L^p -> L^q` convolution estimates.
//!
//! Points are `(1/p, 1/q)` pairs in the unit square. The region for a
//! `k`-surface in `R^d` is the closed triangle with vertices `(0,0)`, `(1,1)`
//! and `(d/(2d-k), (d-k)/(2d-k))`, cut by the band
//! `1/p - 1/q <= 2k/(6d - k^2 - 5k)` when `k(k+3) < 2d`.
//!
//! All arithmetic is exact; conversion to floating point only happens when a
//! caller asks for it.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, int, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentPair {
    pub inv_p: Rational,
    pub inv_q: Rational,
}

impl ExponentPair {
    pub fn new(inv_p: Rational, inv_q: Rational) -> Result<Self> {
        let unit = |r: &Rational| !r.is_negative() && *r <= Rational::one();
        if !unit(&inv_p) || !unit(&inv_q) {
            return Err(Error::InvalidExponent(format!(
                "({inv_p}, {inv_q}) is outside [0,1]^2"
            )));
        }
        Ok(Self { inv_p, inv_q })
    }

    /// The pair for exponents `p` and `q` themselves (both `>= 1`).
    pub fn from_exponents(p: &Rational, q: &Rational) -> Result<Self> {
        if p < &Rational::one() || q < &Rational::one() {
            return Err(Error::InvalidExponent(format!("p = {p}, q = {q} must be >= 1")));
        }
        Self::new(p.recip(), q.recip())
    }

    /// `(a, b) -> (1 - b, 1 - a)`, the exponent map induced by duality.
    pub fn dual(&self) -> Self {
        Self {
            inv_p: Rational::one() - &self.inv_q,
            inv_q: Rational::one() - &self.inv_p,
        }
    }

    pub fn as_f64(&self) -> (f64, f64) {
        (rational::to_f64(&self.inv_p), rational::to_f64(&self.inv_q))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Boundary,
    Interior,
}

fn check_dims(k: u32, d: u32) -> Result<()> {
    if k == 0 || d <= k {
        return Err(Error::InvalidDimension(format!(
            "need 1 <= k < d, got k = {k}, d = {d}"
        )));
    }
    Ok(())
}

/// `(0,0)`, `(1,1)` and `(d/(2d-k), (d-k)/(2d-k))`.
pub fn triangle_vertices(k: u32, d: u32) -> Result<[ExponentPair; 3]> {
    check_dims(k, d)?;
    let (k, d) = (int(k as i64), int(d as i64));
    let denom = int(2) * &d - &k;
    let third = ExponentPair {
        inv_p: &d / &denom,
        inv_q: (&d - &k) / &denom,
    };
    Ok([
        ExponentPair { inv_p: Rational::zero(), inv_q: Rational::zero() },
        ExponentPair { inv_p: Rational::one(), inv_q: Rational::one() },
        third,
    ])
}

/// `2k/(6d - k^2 - 5k)` when `k(k+3) < 2d`, otherwise `None`.
pub fn ricci_gap(k: u32, d: u32) -> Result<Option<Rational>> {
    check_dims(k, d)?;
    let (ki, di) = (k as i64, d as i64);
    if ki * (ki + 3) >= 2 * di {
        return Ok(None);
    }
    let denom = 6 * di - ki * ki - 5 * ki;
    // k(k+3) < 2d gives 6d - k^2 - 5k > 3k(k+3) - k^2 - 5k = 2k^2 + 4k > 0.
    assert!(denom > 0, "band denominator must be positive when the band is present");
    Ok(Some(rational::rat(2 * ki, denom)))
}

/// `q_0 = (2d-k)/(d-k)`.
pub fn critical_q0(k: u32, d: u32) -> Result<Rational> {
    check_dims(k, d)?;
    Ok(rational::rat(2 * d as i64 - k as i64, d as i64 - k as i64))
}

/// `p_0 = (2d-k)/d`.
pub fn critical_p0(k: u32, d: u32) -> Result<Rational> {
    check_dims(k, d)?;
    Ok(rational::rat(2 * d as i64 - k as i64, d as i64))
}

/// Maps the auxiliary exponent `p~` to `p` through
/// `1/p = (1 + (d/l)(1/p~)) / q_0` with `d = k + l`.
///
/// `p~ > d/k` holds exactly when the result exceeds `(2d-k)/d`.
pub fn ptilde_to_p(ptilde: &Rational, k: u32, l: u32) -> Result<Rational> {
    if ptilde <= &Rational::one() {
        return Err(Error::InvalidExponent(format!("p~ = {ptilde} must exceed 1")));
    }
    if l == 0 {
        return Err(Error::InvalidDimension("l must be positive".into()));
    }
    let d = k + l;
    let q0 = critical_q0(k, d)?;
    let ratio = rational::rat(d as i64, l as i64);
    let inv_p = (Rational::one() + ratio / ptilde) / q0;
    Ok(inv_p.recip())
}

/// Cross product `(b - a) x (c - a)`.
fn orient(a: &ExponentPair, b: &ExponentPair, c: &ExponentPair) -> Rational {
    (&b.inv_p - &a.inv_p) * (&c.inv_q - &a.inv_q) - (&b.inv_q - &a.inv_q) * (&c.inv_p - &a.inv_p)
}

/// The admissible region `T(k,d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeSet {
    pub k: u32,
    pub l: u32,
    pub d: u32,
    pub vertices: [ExponentPair; 3],
    pub ricci_gap: Option<Rational>,
}

impl TypeSet {
    pub fn new(k: u32, d: u32) -> Result<Self> {
        Ok(Self {
            k,
            l: d - k.min(d),
            d,
            vertices: triangle_vertices(k, d)?,
            ricci_gap: ricci_gap(k, d)?,
        })
    }

    /// Half-plane tests against the three edges, plus the band when present.
    /// `Interior` demands strict inequalities throughout.
    pub fn contains(&self, pt: &ExponentPair, mode: Membership) -> bool {
        let v = &self.vertices;
        for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let reference = orient(&v[a], &v[b], &v[c]);
            let side = orient(&v[a], &v[b], pt) * reference.signum();
            let ok = match mode {
                Membership::Boundary => !side.is_negative(),
                Membership::Interior => side.is_positive(),
            };
            if !ok {
                return false;
            }
        }
        if let Some(gap) = &self.ricci_gap {
            let diff = &pt.inv_p - &pt.inv_q;
            let ok = match mode {
                Membership::Boundary => &diff <= gap,
                Membership::Interior => &diff < gap,
            };
            if !ok {
                return false;
            }
        }
        true
    }

    pub fn centroid(&self) -> ExponentPair {
        let three = int(3);
        let v = &self.vertices;
        ExponentPair {
            inv_p: (&v[0].inv_p + &v[1].inv_p + &v[2].inv_p) / &three,
            inv_q: (&v[0].inv_q + &v[1].inv_q + &v[2].inv_q) / &three,
        }
    }

    /// `{"k", "l", "vertices": [[num,den], ...], "ricci_gap": [num,den] | null}`.
    /// `vertices` lists `1/p, 1/q` of each vertex in turn (six rationals).
    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<serde_json::Value> = self
            .vertices
            .iter()
            .flat_map(|v| [rational::to_json(&v.inv_p), rational::to_json(&v.inv_q)])
            .collect();
        serde_json::json!({
            "k": self.k,
            "l": self.l,
            "vertices": vertices,
            "ricci_gap": self.ricci_gap.as_ref().map(rational::to_json),
        })
    }
}

/// Exact `k + l/q_0 == d/p_0`: the ball-scaling exponent meets the critical line.
pub fn vertex_identity_holds(k: u32, l: u32) -> Result<bool> {
    let d = k + l;
    let lhs = int(k as i64) + int(l as i64) / critical_q0(k, d)?;
    let rhs = int(d as i64) / critical_p0(k, d)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn pair(a: (i64, i64), b: (i64, i64)) -> ExponentPair {
        ExponentPair::new(rat(a.0, a.1), rat(b.0, b.1)).unwrap()
    }

    #[test]
    fn vertices_k3_d5() {
        let v = triangle_vertices(3, 5).unwrap();
        assert_eq!(v[0], pair((0, 1), (0, 1)));
        assert_eq!(v[1], pair((1, 1), (1, 1)));
        assert_eq!(v[2], pair((5, 7), (2, 7)));
    }

    #[test]
    fn vertices_k1_d2_self_dual() {
        let v = triangle_vertices(1, 2).unwrap();
        assert_eq!(v[2], pair((2, 3), (1, 3)));
        assert_eq!(v[2].dual(), v[2]);
    }

    #[test]
    fn degenerate_dimensions_rejected() {
        assert!(matches!(triangle_vertices(3, 3), Err(Error::InvalidDimension(_))));
        assert!(matches!(triangle_vertices(0, 3), Err(Error::InvalidDimension(_))));
        assert!(TypeSet::new(4, 2).is_err());
    }

    #[test]
    fn ricci_band_cases() {
        assert_eq!(ricci_gap(1, 3).unwrap(), Some(rat(1, 6)));
        assert_eq!(ricci_gap(3, 5).unwrap(), None);
        assert_eq!(ricci_gap(1, 2).unwrap(), None);
    }

    #[test]
    fn ricci_band_absent_in_theorem_regime() {
        for k in 1..=8u32 {
            for l in 1..=k {
                assert_eq!(ricci_gap(k, k + l).unwrap(), None, "k={k} l={l}");
            }
        }
    }

    #[test]
    fn membership_examples() {
        let ts = TypeSet::new(3, 5).unwrap();
        assert!(ts.contains(&pair((1, 2), (1, 3)), Membership::Interior));
        assert!(!ts.contains(&pair((1, 2), (1, 2)), Membership::Interior));
        assert!(ts.contains(&pair((1, 2), (1, 2)), Membership::Boundary));

        let ts13 = TypeSet::new(1, 3).unwrap();
        assert!(!ts13.contains(&pair((1, 2), (1, 4)), Membership::Boundary));
    }

    #[test]
    fn band_cuts_the_vertex() {
        // k=1, d=3: the vertex (3/5, 2/5) has gap 1/5 > 1/6.
        let ts = TypeSet::new(1, 3).unwrap();
        assert!(!ts.contains(&ts.vertices[2], Membership::Boundary));
        // On the band line, inside the triangle: boundary only.
        let on_band = pair((7, 12), (5, 12));
        assert!(ts.contains(&on_band, Membership::Boundary));
        assert!(!ts.contains(&on_band, Membership::Interior));
    }

    #[test]
    fn critical_indices() {
        assert_eq!(critical_q0(3, 5).unwrap(), rat(7, 2));
        assert_eq!(critical_p0(3, 5).unwrap(), rat(7, 5));
        assert_eq!(critical_q0(1, 2).unwrap(), rat(3, 1));
        assert_eq!(critical_p0(1, 2).unwrap(), rat(3, 2));
        let v = triangle_vertices(3, 5).unwrap();
        assert_eq!(critical_p0(3, 5).unwrap().recip(), v[2].inv_p);
        assert_eq!(critical_q0(3, 5).unwrap().recip(), v[2].inv_q);
        assert_eq!(
            critical_p0(3, 5).unwrap().recip() - critical_q0(3, 5).unwrap().recip(),
            rat(3, 7)
        );
    }

    #[test]
    fn ptilde_at_threshold_gives_p0() {
        assert_eq!(ptilde_to_p(&rat(5, 3), 3, 2).unwrap(), rat(7, 5));
        assert!(ptilde_to_p(&rat(1, 1), 3, 2).is_err());
        // Large p~ approaches q_0.
        let p = ptilde_to_p(&rat(1_000_000_000, 1), 3, 2).unwrap();
        assert!((rational::to_f64(&p.recip()) - 2.0 / 7.0).abs() < 1e-8);
    }

    #[test]
    fn vertex_identity_all_small_dims() {
        for k in 1..=8u32 {
            for l in 1..=k {
                assert!(vertex_identity_holds(k, l).unwrap());
            }
        }
    }

    #[test]
    fn json_shape() {
        let v = TypeSet::new(3, 5).unwrap().to_json();
        assert_eq!(
            v,
            serde_json::json!({
                "k": 3, "l": 2,
                "vertices": [[0,1],[0,1],[1,1],[1,1],[5,7],[2,7]],
                "ricci_gap": null
            })
        );
        assert_eq!(TypeSet::new(1, 3).unwrap().to_json()["ricci_gap"], serde_json::json!([1, 6]));
    }

    fn dims() -> impl Strategy<Value = (u32, u32)> {
        (1u32..=9).prop_flat_map(|k| (Just(k), (k + 1)..=(k + 12)))
    }

    proptest! {
        #[test]
        fn duality_permutes_vertices((k, d) in dims()) {
            let v = triangle_vertices(k, d).unwrap();
            prop_assert_eq!(v[0].dual(), v[1].clone());
            prop_assert_eq!(v[1].dual(), v[0].clone());
            prop_assert_eq!(v[2].dual(), v[2].clone());
        }

        #[test]
        fn interior_implies_boundary_and_centroid_pull(
            (k, d) in dims(),
            a in 0i64..=60, b in 0i64..=60, t in 1i64..=10,
        ) {
            let ts = TypeSet::new(k, d).unwrap();
            let pt = pair((a, 60), (b, 60));
            if ts.contains(&pt, Membership::Interior) {
                prop_assert!(ts.contains(&pt, Membership::Boundary));
            }
            if ts.contains(&pt, Membership::Boundary) {
                let c = ts.centroid();
                let s = rat(t, 10);
                let moved = ExponentPair {
                    inv_p: &pt.inv_p + (&c.inv_p - &pt.inv_p) * &s,
                    inv_q: &pt.inv_q + (&c.inv_q - &pt.inv_q) * &s,
                };
                prop_assert!(ts.contains(&moved, Membership::Interior));
            }
        }

        #[test]
        fn ptilde_equivalence(k in 1u32..=6, dl in 0u32..6, num in 2i64..400, den in 1i64..60) {
            let l = 1 + dl % k;
            let d = k + l;
            let pt = rat(num, den);
            prop_assume!(pt > rat(1, 1));
            let p = ptilde_to_p(&pt, k, l).unwrap();
            let above = pt > rat(d as i64, k as i64);
            prop_assert_eq!(above, p > critical_p0(k, d).unwrap());
            prop_assert!(p < critical_q0(k, d).unwrap());
        }
    }
}
