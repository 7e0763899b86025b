//! Reference computations written independently of the library code.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_traits::{One, Zero};
use surfconv::rational::Rational;

/// Determinant by permutation expansion.
pub fn leibniz_det(m: &[Rational], n: usize) -> Rational {
    fn perms(n: usize) -> Vec<(Vec<usize>, bool)> {
        if n == 0 {
            return vec![(vec![], true)];
        }
        let mut out = Vec::new();
        for (p, even) in perms(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                // inserting at `pos` moves the new element past n-1-pos others
                let flips = (n - 1 - pos) % 2 == 1;
                out.push((q, even != flips));
            }
        }
        out
    }
    let mut total = Rational::zero();
    for (p, even) in perms(n) {
        let mut term = Rational::one();
        for (r, &c) in p.iter().enumerate() {
            term *= &m[r * n + c];
        }
        if even {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Composite Simpson rule on `[a, b]` with `n` (even) intervals.
pub fn simpson<F: Fn(f64) -> f64>(a: f64, b: f64, n: usize, f: F) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// For `k = l = 1`, `C = (c)`: the left side of the weighted frequency
/// identity over the right side, by substituting `tau = c y zeta`:
/// `int_{1 <= |y| < 2} |c y|^{-rho-1} dy`, evaluated by quadrature.
pub fn one_dim_lemma_ratio(c: f64, rho: f64) -> f64 {
    2.0 * simpson(1.0, 2.0, 2000, |y| (c * y).abs().powf(-rho - 1.0))
}

/// `int f(x) h(A x) dx` for a normalized Gaussian `f = amp_f N(m, S)` on
/// `R^k` and `h(u) = amp_h N(n, H)` on `R^l`, with `A` an `l x k` matrix.
/// Uses `A x ~ N(A m, A S A^T)` and the Gaussian convolution identity.
pub fn gaussian_pairing(
    amp_f: f64,
    m: &[f64],
    s: &[f64],
    amp_h: f64,
    n: &[f64],
    h: &[f64],
    a: &[f64],
) -> f64 {
    let k = m.len();
    let l = n.len();
    let mut cov = h.to_vec();
    for i in 0..l {
        for j in 0..l {
            for p in 0..k {
                for q in 0..k {
                    cov[i * l + j] += a[i * k + p] * s[p * k + q] * a[j * k + q];
                }
            }
        }
    }
    let diff: Vec<f64> = (0..l).map(|i| (0..k).map(|p| a[i * k + p] * m[p]).sum::<f64>() - n[i]).collect();
    let (det, inv) = small_inverse(&cov, l);
    let mut quad = 0.0;
    for i in 0..l {
        for j in 0..l {
            quad += diff[i] * inv[i * l + j] * diff[j];
        }
    }
    amp_f * amp_h * (2.0 * PI).powf(-(l as f64) / 2.0) / det.sqrt() * (-0.5 * quad).exp()
}

/// Determinant and inverse for `n <= 3` by cofactors.
pub fn small_inverse(a: &[f64], n: usize) -> (f64, Vec<f64>) {
    match n {
        1 => (a[0], vec![1.0 / a[0]]),
        2 => {
            let d = a[0] * a[3] - a[1] * a[2];
            (d, vec![a[3] / d, -a[1] / d, -a[2] / d, a[0] / d])
        }
        3 => {
            let cof = |r: usize, c: usize| {
                let rs: Vec<usize> = (0..3).filter(|&x| x != r).collect();
                let cs: Vec<usize> = (0..3).filter(|&x| x != c).collect();
                let v = a[rs[0] * 3 + cs[0]] * a[rs[1] * 3 + cs[1]] - a[rs[0] * 3 + cs[1]] * a[rs[1] * 3 + cs[0]];
                if (r + c) % 2 == 0 {
                    v
                } else {
                    -v
                }
            };
            let d: f64 = (0..3).map(|c| a[c] * cof(0, c)).sum();
            let mut inv = vec![0.0; 9];
            for r in 0..3 {
                for c in 0..3 {
                    inv[c * 3 + r] = cof(r, c) / d;
                }
            }
            (d, inv)
        }
        _ => panic!("small_inverse supports n <= 3"),
    }
}

/// `P(a <= s X <= b)` for `X ~ N(0, sigma^2)`, `s != 0`.
pub fn normal_band_probability(sigma: f64, s: f64, a: f64, b: f64) -> f64 {
    let (lo, hi) = if s > 0.0 { (a / s, b / s) } else { (b / s, a / s) };
    let z = sigma * std::f64::consts::SQRT_2;
    0.5 * (libm::erf(hi / z) - libm::erf(lo / z))
}

/// For `k = l = 1`, `C = (c)` and `f = N(0, sigma^2)`: the double integral
/// `int_{1 <= |y| < 2} int f(x) chi_E(y, c x y) dx dy` with
/// `E = [y0, y1] x [u0, u1]`.
pub fn one_dim_ineq6_lhs(c: f64, sigma: f64, y0: f64, y1: f64, u0: f64, u1: f64) -> f64 {
    let mut total = 0.0;
    for (lo, hi) in [(-2.0, -1.0), (1.0, 2.0)] {
        let a = y0.max(lo);
        let b = y1.min(hi);
        if b > a {
            total += simpson(a, b, 4000, |y| normal_band_probability(sigma, c * y, u0, u1));
        }
    }
    total
}

/// `|| mu * chi_{B(0, delta)} ||_q^q` for the parabola `(y, y^2)`, `|y| < 1`,
/// by a dense grid in `R^2` and a fine `y` sweep at each grid point.
pub fn parabola_ball_norm_q(delta: f64, q: f64, cells_per_delta: usize, y_nodes: usize) -> f64 {
    let h = delta / cells_per_delta as f64;
    let (x0, x1) = (-1.0 - delta, 1.0 + delta);
    let (v0, v1) = (-delta, 1.0 + delta);
    let nx = ((x1 - x0) / h).ceil() as usize;
    let nv = ((v1 - v0) / h).ceil() as usize;
    let mut total = 0.0;
    for i in 0..nx {
        let w1 = x0 + (i as f64 + 0.5) * h;
        // only y within delta of w1 can contribute
        let ya = (w1 - delta).max(-1.0);
        let yb = (w1 + delta).min(1.0);
        if yb <= ya {
            continue;
        }
        let dy = (yb - ya) / y_nodes as f64;
        for j in 0..nv {
            let w2 = v0 + (j as f64 + 0.5) * h;
            let mut mass = 0.0;
            for t in 0..y_nodes {
                let y = ya + (t as f64 + 0.5) * dy;
                let (a, b) = (w1 - y, w2 - y * y);
                if a * a + b * b <= delta * delta {
                    mass += dy;
                }
            }
            total += mass.powf(q) * h * h;
        }
    }
    total
}

/// Unit-ball volume in `R^n` from the two-step recursion.
pub fn ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * ball_volume(n - 2),
    }
}
