//! Sampled functions on uniform box grids.

use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Values at the centres of a uniform grid of cubes.
///
/// `origin` is the lower corner of the box; cell `m` (a multi-index, last
/// axis fastest) has centre `origin + (m + 1/2) h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub dim: usize,
    pub origin: Vec<f64>,
    pub spacing: f64,
    pub extents: Vec<usize>,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(origin: Vec<f64>, spacing: f64, extents: Vec<usize>) -> Result<Self> {
        if origin.len() != extents.len() || origin.is_empty() {
            return Err(Error::InvalidDimension("grid origin and extents disagree".into()));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::Precondition(format!("grid spacing must be positive, got {spacing}")));
        }
        if extents.iter().any(|&n| n == 0) {
            return Err(Error::InvalidDimension("grid extents must be positive".into()));
        }
        let len = extents.iter().product();
        Ok(Self { dim: origin.len(), origin, spacing, extents, values: vec![0.0; len] })
    }

    /// `[-half_width, half_width]^dim` with `cells` cells per axis.
    pub fn centered_cube(dim: usize, half_width: f64, cells: usize) -> Result<Self> {
        Self::zeros(vec![-half_width; dim], 2.0 * half_width / cells as f64, vec![cells; dim])
    }

    pub fn box_around(center: &[f64], half_width: f64, cells: usize) -> Result<Self> {
        Self::zeros(
            center.iter().map(|c| c - half_width).collect(),
            2.0 * half_width / cells as f64,
            vec![cells; center.len()],
        )
    }

    pub fn fill<F: Fn(&[f64]) -> f64>(mut self, f: F) -> Self {
        let mut x = vec![0.0; self.dim];
        for idx in 0..self.values.len() {
            self.center_into(idx, &mut x);
            self.values[idx] = f(&x);
        }
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dim as i32)
    }

    pub fn upper(&self) -> Vec<f64> {
        self.origin
            .iter()
            .zip(&self.extents)
            .map(|(o, &n)| o + self.spacing * n as f64)
            .collect()
    }

    pub fn center_into(&self, mut idx: usize, out: &mut [f64]) {
        for a in (0..self.dim).rev() {
            let n = self.extents[a];
            let m = idx % n;
            idx /= n;
            out[a] = self.origin[a] + (m as f64 + 0.5) * self.spacing;
        }
    }

    pub fn center(&self, idx: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.dim];
        self.center_into(idx, &mut x);
        x
    }

    /// Flat index of the cell containing `x`, if any.
    pub fn index_of(&self, x: &[f64]) -> Option<usize> {
        let mut idx = 0usize;
        for a in 0..self.dim {
            let t = ((x[a] - self.origin[a]) / self.spacing).floor();
            if !(t >= 0.0 && t < self.extents[a] as f64) {
                return None;
            }
            idx = idx * self.extents[a] + t as usize;
        }
        Some(idx)
    }

    /// `h^dim * sum(values)`.
    pub fn integral(&self) -> f64 {
        self.cell_volume() * self.values.iter().sum::<f64>()
    }

    pub fn l1_norm(&self) -> f64 {
        self.cell_volume() * self.values.iter().map(|v| v.abs()).sum::<f64>()
    }

    /// Multilinear interpolation between cell centres; zero outside the grid.
    pub fn interpolate(&self, x: &[f64]) -> f64 {
        let mut total = 0.0;
        self.for_each_stencil(x, |idx, w| total += w * self.values[idx]);
        total
    }

    /// Calls `f(index, weight)` for the `2^dim` multilinear neighbours of `x`
    /// that fall inside the grid.
    pub fn for_each_stencil<F: FnMut(usize, f64)>(&self, x: &[f64], mut f: F) {
        let dim = self.dim;
        let mut base = vec![0i64; dim];
        let mut frac = vec![0.0; dim];
        for a in 0..dim {
            let t = (x[a] - self.origin[a]) / self.spacing - 0.5;
            if !t.is_finite() {
                return;
            }
            let b = t.floor();
            base[a] = b as i64;
            frac[a] = t - b;
        }
        'corners: for corner in 0..(1usize << dim) {
            let mut idx = 0usize;
            let mut w = 1.0;
            for a in 0..dim {
                let up = (corner >> (dim - 1 - a)) & 1 == 1;
                let m = base[a] + up as i64;
                if m < 0 || m >= self.extents[a] as i64 {
                    continue 'corners;
                }
                idx = idx * self.extents[a] + m as usize;
                w *= if up { frac[a] } else { 1.0 - frac[a] };
            }
            if w != 0.0 {
                f(idx, w);
            }
        }
    }

    /// Text dump: `dim`, `origin`, `spacing`, `extents` header rows, then one
    /// value per row in row-major order.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "dim,{}", self.dim)?;
        let join = |v: Vec<String>| v.join(",");
        writeln!(w, "origin,{}", join(self.origin.iter().map(|v| format!("{v:?}")).collect()))?;
        writeln!(w, "spacing,{:?}", self.spacing)?;
        writeln!(w, "extents,{}", join(self.extents.iter().map(|v| v.to_string()).collect()))?;
        for v in &self.values {
            writeln!(w, "{v:?}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let bad = |m: &str| Error::Precondition(format!("grid csv: {m}"));
        let mut lines = r.lines();
        let mut header = |key: &str| -> Result<Vec<String>> {
            let line = lines.next().ok_or_else(|| bad("truncated header"))??;
            let mut parts = line.split(',').map(str::to_string);
            if parts.next().as_deref() != Some(key) {
                return Err(bad(&format!("expected `{key}` row")));
            }
            Ok(parts.collect())
        };
        let parse_f = |s: &String| s.trim().parse::<f64>().map_err(|_| bad("bad number"));
        let parse_u = |s: &String| s.trim().parse::<usize>().map_err(|_| bad("bad integer"));
        let dim = header("dim")?.first().ok_or_else(|| bad("missing dim")).and_then(parse_u)?;
        let origin = header("origin")?.iter().map(parse_f).collect::<Result<Vec<_>>>()?;
        let spacing = header("spacing")?.first().ok_or_else(|| bad("missing spacing")).and_then(parse_f)?;
        let extents = header("extents")?.iter().map(parse_u).collect::<Result<Vec<_>>>()?;
        if origin.len() != dim {
            return Err(bad("origin length differs from dim"));
        }
        let mut g = Self::zeros(origin, spacing, extents)?;
        let mut n = 0;
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            if n >= g.values.len() {
                return Err(bad("too many values"));
            }
            g.values[n] = parse_f(&line)?;
            n += 1;
        }
        if n != g.values.len() {
            return Err(bad("too few values"));
        }
        Ok(g)
    }

    /// Little-endian binary dump: magic `SCGF`, `u32` version, `u32` dim,
    /// `f64` origin, `f64` spacing, `u64` extents, `f64` values.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(b"SCGF")?;
        w.write_all(&1u32.to_le_bytes())?;
        w.write_all(&(self.dim as u32).to_le_bytes())?;
        for o in &self.origin {
            w.write_all(&o.to_le_bytes())?;
        }
        w.write_all(&self.spacing.to_le_bytes())?;
        for e in &self.extents {
            w.write_all(&(*e as u64).to_le_bytes())?;
        }
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let bad = |m: &str| Error::Precondition(format!("grid binary: {m}"));
        let mut b4 = [0u8; 4];
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b4)?;
        if &b4 != b"SCGF" {
            return Err(bad("bad magic"));
        }
        r.read_exact(&mut b4)?;
        if u32::from_le_bytes(b4) != 1 {
            return Err(bad("unsupported version"));
        }
        r.read_exact(&mut b4)?;
        let dim = u32::from_le_bytes(b4) as usize;
        let mut read8 = |r: &mut R| -> Result<[u8; 8]> {
            r.read_exact(&mut b8)?;
            Ok(b8)
        };
        let origin = (0..dim)
            .map(|_| read8(&mut r).map(f64::from_le_bytes))
            .collect::<Result<Vec<_>>>()?;
        let spacing = f64::from_le_bytes(read8(&mut r)?);
        let extents = (0..dim)
            .map(|_| read8(&mut r).map(|b| u64::from_le_bytes(b) as usize))
            .collect::<Result<Vec<_>>>()?;
        let mut g = Self::zeros(origin, spacing, extents)?;
        for v in g.values.iter_mut() {
            *v = f64::from_le_bytes(read8(&mut r)?);
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn centers_and_lookup() {
        let g = GridFunction::zeros(vec![0.0, -1.0], 0.5, vec![2, 4]).unwrap();
        assert_eq!(g.center(0), vec![0.25, -0.75]);
        assert_eq!(g.center(5), vec![0.75, -0.25]);
        assert_eq!(g.index_of(&[0.75, -0.25]), Some(5));
        assert_eq!(g.index_of(&[1.0, 0.0]), None);
        assert_eq!(g.upper(), vec![1.0, 1.0]);
    }

    #[test]
    fn interpolation_reproduces_affine_functions() {
        let g = GridFunction::centered_cube(2, 1.0, 8).unwrap().fill(|x| 2.0 * x[0] - x[1] + 0.5);
        for x in [[0.1, 0.2], [-0.6, 0.33], [0.0, 0.0]] {
            assert!((g.interpolate(&x) - (2.0 * x[0] - x[1] + 0.5)).abs() < 1e-12);
        }
        assert_eq!(g.interpolate(&[5.0, 0.0]), 0.0);
    }

    #[test]
    fn integral_of_constant() {
        let g = GridFunction::centered_cube(3, 1.0, 4).unwrap().fill(|_| 1.0);
        assert!((g.integral() - 8.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn dumps_roundtrip(vals in proptest::collection::vec(-1e3f64..1e3, 6), h in 0.01f64..3.0, o in -5.0f64..5.0) {
            let mut g = GridFunction::zeros(vec![o, -o], h, vec![2, 3]).unwrap();
            g.values.copy_from_slice(&vals);
            let mut buf = Vec::new();
            g.write_csv(&mut buf).unwrap();
            prop_assert_eq!(&GridFunction::read_csv(&buf[..]).unwrap(), &g);
            let mut bin = Vec::new();
            g.write_binary(&mut bin).unwrap();
            prop_assert_eq!(&GridFunction::read_binary(&bin[..]).unwrap(), &g);
        }
    }
}
