use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Dyadic exponents `n` with `2^{n_i} <= |y_i| < 2^{n_i + 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShellIndex {
    pub n: Vec<i32>,
}

impl ShellIndex {
    pub fn contains(&self, y: &[f64]) -> bool {
        y.len() == self.n.len()
            && y.iter().zip(&self.n).all(|(v, &n)| {
                let lo = 2f64.powi(n);
                lo <= v.abs() && v.abs() < 2.0 * lo
            })
    }

    /// `2^{sum (n_i + 1)}`: the bound on `m_d(E_n)` for sets inside `[-2, 2]^d`
    /// restricted to this shell.
    pub fn measure_bound(&self) -> f64 {
        2f64.powi(self.n.iter().map(|n| n + 1).sum())
    }

    /// Volume of the shell in `R^k` (all sign patterns).
    pub fn volume(&self) -> f64 {
        self.n.iter().map(|&n| 2.0 * 2f64.powi(n)).product()
    }
}

pub fn dyadic_shell_index(y: &[f64]) -> Result<ShellIndex> {
    let n = y
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let a = v.abs();
            if a == 0.0 || !a.is_finite() {
                return Err(Error::UndefinedShell { index: i });
            }
            let mut n = a.log2().floor() as i32;
            while 2f64.powi(n) > a {
                n -= 1;
            }
            while 2f64.powi(n + 1) <= a {
                n += 1;
            }
            Ok(n)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ShellIndex { n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(dyadic_shell_index(&[1.0, 1.0, 1.0]).unwrap().n, vec![0, 0, 0]);
        assert_eq!(dyadic_shell_index(&[0.3, -1.5]).unwrap().n, vec![-2, 0]);
        assert_eq!(dyadic_shell_index(&[2.0, 0.5]).unwrap().n, vec![1, -1]);
        assert!(matches!(dyadic_shell_index(&[1.0, 0.0]), Err(Error::UndefinedShell { index: 1 })));
    }

    #[test]
    fn measure_bound_and_volume() {
        let s = ShellIndex { n: vec![0, -1] };
        assert_eq!(s.measure_bound(), 2.0);
        assert_eq!(s.volume(), 2.0);
    }

    proptest! {
        #[test]
        fn point_lies_in_its_shell(y in proptest::collection::vec(
            prop_oneof![-1e6f64..-1e-6, 1e-6f64..1e6], 1..6)) {
            let s = dyadic_shell_index(&y).unwrap();
            prop_assert!(s.contains(&y));
        }
    }
}
