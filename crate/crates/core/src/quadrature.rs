//! Gauss-Legendre rules, composite panels, and a polar rule for integrands
//! carrying a radial power `|x|^alpha` that may be singular at the origin.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Newton on P_n from the Tricomi initial guess.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre on `[a, b]` split into `panels` equal pieces.
pub fn composite(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + h * p as f64;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(lo + 0.5 * h * (xi + 1.0));
            weights.push(0.5 * h * wi);
        }
    }
    (nodes, weights)
}

/// Directions on the unit sphere `S^{dim-1}` with surface weights.
#[derive(Debug, Clone)]
pub struct AngularRule {
    pub dim: usize,
    pub directions: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl AngularRule {
    /// Hyperspherical coordinates: Gauss-Legendre in each polar angle with
    /// `n_polar` nodes, trapezoid with `2 n_polar` nodes in the azimuth.
    pub fn new(dim: usize, n_polar: usize) -> Self {
        assert!(dim >= 1);
        if dim == 1 {
            return Self { dim, directions: vec![vec![1.0], vec![-1.0]], weights: vec![1.0, 1.0] };
        }
        let n_az = 2 * n_polar;
        let azimuth: Vec<(f64, f64)> = (0..n_az)
            .map(|j| (2.0 * PI * (j as f64 + 0.5) / n_az as f64, 2.0 * PI / n_az as f64))
            .collect();
        let (gx, gw) = gauss_legendre(n_polar);
        let polar: Vec<(f64, f64)> = gx
            .iter()
            .zip(&gw)
            .map(|(x, w)| (0.5 * PI * (x + 1.0), 0.5 * PI * w))
            .collect();

        let mut directions = Vec::new();
        let mut weights = Vec::new();
        let n_polar_angles = dim - 2;
        let mut idx = vec![0usize; n_polar_angles];
        loop {
            for &(theta, w_az) in &azimuth {
                let mut dir = Vec::with_capacity(dim);
                let mut sin_prod = 1.0;
                let mut w = w_az;
                for (j, &pi) in idx.iter().enumerate() {
                    let (phi, wp) = polar[pi];
                    dir.push(sin_prod * phi.cos());
                    sin_prod *= phi.sin();
                    w *= wp * phi.sin().powi((dim - 2 - j) as i32);
                }
                dir.push(sin_prod * theta.cos());
                dir.push(sin_prod * theta.sin());
                directions.push(dir);
                weights.push(w);
            }
            // odometer over polar indices
            let mut pos = 0;
            loop {
                if pos == n_polar_angles {
                    return Self { dim, directions, weights };
                }
                idx[pos] += 1;
                if idx[pos] < n_polar {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Surface area of `S^{n-1}`.
pub fn sphere_area(n: usize) -> f64 {
    // 2 pi^{n/2} / Gamma(n/2) via the recurrence A_{n+2} = 2 pi A_n / n.
    let (mut a, mut m) = if n % 2 == 0 { (2.0 * PI, 2) } else { (2.0, 1) };
    while m < n {
        a *= 2.0 * PI / m as f64;
        m += 2;
    }
    a
}

/// Volume of the unit ball in `R^n`.
pub fn ball_volume(n: usize) -> f64 {
    sphere_area(n) / n as f64
}

/// Panel layout for radial integrals `int_0^R r^beta g(r) dr`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RadialParams {
    /// Equal panels on `[R/8, R]`.
    pub uniform_panels: usize,
    /// Geometrically shrinking panels (ratio 1/2) below `R/8`.
    pub geometric_panels: usize,
    /// Gauss-Legendre order per panel.
    pub order: usize,
    /// Polar-angle nodes of the angular rule.
    pub angular: usize,
}

impl Default for RadialParams {
    fn default() -> Self {
        Self { uniform_panels: 16, geometric_panels: 16, order: 8, angular: 24 }
    }
}

impl RadialParams {
    pub fn doubled(&self) -> Self {
        Self {
            uniform_panels: self.uniform_panels * 2,
            geometric_panels: self.geometric_panels + 4,
            order: self.order,
            angular: self.angular * 2,
        }
    }
}

/// Radial nodes with the weight `r^beta` folded in (`beta > -1`).
///
/// The innermost piece `[0, a]` is a single node at `a/2` carrying the exact
/// mass `a^{beta+1}/(beta+1)` of the power weight.
pub fn radial_rule(radius: f64, beta: f64, p: &RadialParams) -> (Vec<f64>, Vec<f64>) {
    assert!(beta > -1.0, "radial power {beta} is not integrable at the origin");
    let inner = radius / 8.0;
    let (mut nodes, mut weights) = composite(inner, radius, p.uniform_panels.max(1), p.order);
    let mut hi = inner;
    for _ in 0..p.geometric_panels {
        let lo = hi * 0.5;
        let (x, w) = composite(lo, hi, 1, p.order);
        nodes.extend(x);
        weights.extend(w);
        hi = lo;
    }
    for (x, w) in nodes.iter().zip(weights.iter_mut()) {
        *w *= x.powf(beta);
    }
    nodes.push(0.5 * hi);
    weights.push(hi.powf(beta + 1.0) / (beta + 1.0));
    (nodes, weights)
}

/// `int_{|x| < R} |x|^alpha f(x) dx` over `R^dim` in polar coordinates.
pub fn radial_integral<F>(dim: usize, alpha: f64, radius: f64, p: &RadialParams, f: F) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    let ang = AngularRule::new(dim, p.angular);
    let (rn, rw) = radial_rule(radius, alpha + dim as f64 - 1.0, p);
    radial_integral_with(&ang, &rn, &rw, f)
}

/// Same as [`radial_integral`] with prebuilt rules.
pub fn radial_integral_with<F>(ang: &AngularRule, rn: &[f64], rw: &[f64], f: F) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    let mut x = vec![0.0; ang.dim];
    let mut total = 0.0;
    for (dir, wd) in ang.directions.iter().zip(&ang.weights) {
        let mut s = 0.0;
        for (r, wr) in rn.iter().zip(rw) {
            for (xi, di) in x.iter_mut().zip(dir) {
                *xi = r * di;
            }
            s += wr * f(&x);
        }
        total += wd * s;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in 1..=12 {
            let (x, w) = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((approx - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn angular_weights_sum_to_sphere_area() {
        for dim in 1..=5 {
            let a = AngularRule::new(dim, 16);
            let s: f64 = a.weights.iter().sum();
            assert!((s - sphere_area(dim)).abs() < 1e-10 * sphere_area(dim), "dim {dim}");
            for d in &a.directions {
                assert!((crate::linalg::norm2(d) - 1.0).abs() < 1e-14);
            }
        }
        assert!((ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((ball_volume(2) - PI).abs() < 1e-14);
        assert!((ball_volume(1) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn radial_power_gaussian_moments() {
        let p = RadialParams::default();
        let g = |x: &[f64]| (-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp();
        // |x|^0 and |x|^2 against the Gaussian in R^n.
        for n in 1..=4usize {
            let base = (2.0 * PI).powf(n as f64 / 2.0);
            let i0 = radial_integral(n, 0.0, 12.0, &p, g);
            let i2 = radial_integral(n, 2.0, 12.0, &p, g);
            assert!((i0 / base - 1.0).abs() < 1e-8, "n={n}: {i0}");
            assert!((i2 / (n as f64 * base) - 1.0).abs() < 1e-8, "n={n}: {i2}");
        }
        // Singular weight |x|^{-1.5} in R^2: 2 pi 2^{-3/4} Gamma(1/4).
        let gamma_quarter = 3.625_609_908_221_908_3;
        let exact = 2.0 * PI * 2f64.powf(-0.75) * gamma_quarter;
        let v = radial_integral(2, -1.5, 12.0, &p, g);
        assert!((v / exact - 1.0).abs() < 1e-3, "{v} vs {exact}");
    }
}
