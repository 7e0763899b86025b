//! The restricted `(k - l)`-plane transform.
//!
//! For frozen `y`, `Tf(y; .)` is the density on `R^l` of the pushforward of
//! `f dm_k` under `x -> L_y x = (L_1(x, y), ..., L_l(x, y))`; equivalently
//! `f` integrated over the planes `{x : L_y x = u}`. It is characterised by
//! the pairing `int Tf(y;u) h(u) du = int f(x) h(L_y x) dx`.

mod checks;
mod grid;

pub use checks::{
    fourier_check, oscillatory_sup_bound, pairing_check, FourierReport, FourierSample, OscillatoryReport,
    PairingReport,
};
pub use grid::GridFunction;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::surface::{bilinear, check_star, CoefficientMatrix};
use crate::{Error, Result};

/// How a source cell's mass is assigned to target cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Deposit {
    /// Whole mass to the target cell containing the image point.
    #[default]
    Nearest,
    /// Cloud-in-cell: multilinear weights over the neighbouring centres.
    Cic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetSpec {
    pub cells_per_axis: usize,
    /// Half-width of the target box; defaults to [`default_target_radius`].
    pub radius: Option<f64>,
    #[serde(default)]
    pub deposit: Deposit,
}

impl TargetSpec {
    pub fn cells(n: usize) -> Self {
        Self { cells_per_axis: n, radius: None, deposit: Deposit::Nearest }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PushforwardDensity {
    pub y: Vec<f64>,
    pub grid: GridFunction,
    /// Mass deposited outside the target box.
    pub leaked_mass: f64,
    /// `int f` over the source grid.
    pub source_mass: f64,
}

impl PushforwardDensity {
    pub fn leak_fraction(&self) -> f64 {
        if self.source_mass == 0.0 {
            0.0
        } else {
            self.leaked_mass.abs() / self.source_mass.abs()
        }
    }
}

/// Lower and upper bound of `|y_i|` accepted by [`transform`].
pub const Y_WINDOW: (f64, f64) = (0.5, 4.0);

/// `1.05 * max |L_y x|` over the corners of the source box.
pub fn default_target_radius(f: &GridFunction, c: &CoefficientMatrix, y: &[f64]) -> f64 {
    let lo = &f.origin;
    let hi = f.upper();
    let k = f.dim;
    let mut best: f64 = 0.0;
    let mut x = vec![0.0; k];
    for corner in 0..(1usize << k) {
        for a in 0..k {
            x[a] = if (corner >> a) & 1 == 1 { hi[a] } else { lo[a] };
        }
        best = best.max(crate::linalg::norm2(&bilinear(c, &x, y)));
    }
    1.05 * best
}

fn check_inputs(f: &GridFunction, c: &CoefficientMatrix, y: &[f64]) -> Result<()> {
    if f.dim != c.k() || y.len() != c.k() {
        return Err(Error::InvalidDimension(format!(
            "source grid has dim {}, y has {} entries, matrix has k = {}",
            f.dim,
            y.len(),
            c.k()
        )));
    }
    let star = check_star(c);
    if let Some(rows) = star.witness {
        return Err(Error::SingularSubmatrix { rows });
    }
    if let Some(v) = y.iter().find(|v| !(Y_WINDOW.0..=Y_WINDOW.1).contains(&v.abs())) {
        return Err(Error::Precondition(format!(
            "|y_i| must lie in [{}, {}], got {v}",
            Y_WINDOW.0, Y_WINDOW.1
        )));
    }
    Ok(())
}

/// Pushforward of `f dm_k` under `L_y` onto the grid `[-R, R]^l`.
pub fn transform(f: &GridFunction, c: &CoefficientMatrix, y: &[f64], target: &TargetSpec) -> Result<PushforwardDensity> {
    check_inputs(f, c, y)?;
    let radius = target.radius.unwrap_or_else(|| default_target_radius(f, c, y));
    let grid = GridFunction::centered_cube(c.l(), radius, target.cells_per_axis)?;
    transform_onto(f, c, y, grid, target.deposit)
}

const CHUNK: usize = 1 << 14;

/// As [`transform`] with an explicit target layout (its values are overwritten).
///
/// Image points are computed in parallel; deposits are accumulated in source
/// order, so the result does not depend on the thread count.
pub fn transform_onto(
    f: &GridFunction,
    c: &CoefficientMatrix,
    y: &[f64],
    mut target: GridFunction,
    deposit: Deposit,
) -> Result<PushforwardDensity> {
    check_inputs(f, c, y)?;
    if target.dim != c.l() {
        return Err(Error::InvalidDimension("target grid must live in R^l".into()));
    }
    target.values.iter_mut().for_each(|v| *v = 0.0);
    let src_vol = f.cell_volume();
    let n_chunks = f.len().div_ceil(CHUNK);
    let deposits: Vec<Vec<(usize, f64)>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut out = Vec::new();
            let mut x = vec![0.0; f.dim];
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(f.len());
            for idx in lo..hi {
                let w = f.values[idx] * src_vol;
                if w == 0.0 {
                    continue;
                }
                f.center_into(idx, &mut x);
                let u = bilinear(c, &x, y);
                match deposit {
                    Deposit::Nearest => match target.index_of(&u) {
                        Some(t) => out.push((t, w)),
                        None => out.push((usize::MAX, w)),
                    },
                    Deposit::Cic => {
                        let mut placed = 0.0;
                        target.for_each_stencil(&u, |t, s| {
                            out.push((t, w * s));
                            placed += s;
                        });
                        if placed < 1.0 {
                            out.push((usize::MAX, w * (1.0 - placed)));
                        }
                    }
                }
            }
            out
        })
        .collect();

    let mut leaked = 0.0;
    for chunk in deposits {
        for (t, w) in chunk {
            if t == usize::MAX {
                leaked += w;
            } else {
                target.values[t] += w;
            }
        }
    }
    let tvol = target.cell_volume();
    target.values.iter_mut().for_each(|v| *v /= tvol);
    Ok(PushforwardDensity { y: y.to_vec(), grid: target, leaked_mass: leaked, source_mass: f.integral() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_mass_is_conserved() {
        for k in 1..=3usize {
            let c = CoefficientMatrix::paraboloid(k);
            let f = GridFunction::centered_cube(k, 1.0, 64 / k.max(1)).unwrap().fill(|_| 1.0);
            let y = vec![1.0; k];
            let t = transform(&f, &c, &y, &TargetSpec::cells(64)).unwrap();
            assert_eq!(t.leaked_mass, 0.0);
            let total = t.grid.integral();
            assert!((total / 2f64.powi(k as i32) - 1.0).abs() < 1e-12, "k={k}: {total}");
            assert!(t.grid.values.iter().all(|v| *v >= 0.0));
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = GridFunction::centered_cube(3, 1.0, 4).unwrap().fill(|_| 1.0);
        let bad = CoefficientMatrix::from_integers(3, 2, &[1, 0, 2, 0, 0, 1]).unwrap();
        assert!(matches!(
            transform(&f, &bad, &[1.0; 3], &TargetSpec::cells(8)),
            Err(Error::SingularSubmatrix { .. })
        ));
        let c = CoefficientMatrix::example_three_surface();
        assert!(transform(&f, &c, &[1.0, 0.1, 1.0], &TargetSpec::cells(8)).is_err());
        assert!(transform(&f, &c, &[1.0, 1.0], &TargetSpec::cells(8)).is_err());
    }

    #[test]
    fn explicit_small_target_reports_leak() {
        let c = CoefficientMatrix::paraboloid(1);
        let f = GridFunction::centered_cube(1, 1.0, 100).unwrap().fill(|_| 1.0);
        let spec = TargetSpec { cells_per_axis: 10, radius: Some(0.5), deposit: Deposit::Nearest };
        let t = transform(&f, &c, &[1.0], &spec).unwrap();
        assert!((t.leaked_mass - 1.0).abs() < 1e-12);
        assert!((t.grid.integral() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cic_conserves_mass_inside_box() {
        let c = CoefficientMatrix::example_three_surface();
        let f = GridFunction::centered_cube(3, 1.0, 12).unwrap().fill(|x| (-x[0] * x[0]).exp());
        let spec = TargetSpec { cells_per_axis: 16, radius: None, deposit: Deposit::Cic };
        let t = transform(&f, &c, &[1.0, -1.5, 2.0], &spec).unwrap();
        assert!(((t.grid.integral() + t.leaked_mass) / t.source_mass - 1.0).abs() < 1e-12);
    }
}
