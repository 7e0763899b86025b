//! Numerical laboratory for convolution estimates on quadratic model surfaces
//! of low codimension.
//!
//! A surface is given by a `k x l` coefficient matrix `C = [c_i^j]` through the
//! diagonal bilinear forms `L_j(x, y) = sum_i c_i^j x_i y_i` and the graph map
//! `y -> (y; L_1(y, y), ..., L_l(y, y))` over the unit ball of `R^k`.
//!
//! The crate is organised by subsystem:
//!
//! * [`exponent`]: exact-rational geometry of the admissible `(1/p, 1/q)` region.
//! * [`surface`]: the coefficient matrix, the nonsingularity condition on its
//!   `l x l` row-submatrices, the forms, their adjoints and the Jacobian of the
//!   frequency-space change of variables.
//! * [`transform`]: the restricted plane transform realised as a pushforward.
//! * [`lemma`]: quadrature / Monte Carlo checks of the weighted frequency-side
//!   inequality and the Plancherel chain built on it.
//! * [`conv`]: discretised surface measures, pointwise convolution and
//!   Monte Carlo `L^q` norms.
//! * [`experiment`]: configuration-driven suites behind the `surfconv` binary.

pub mod conv;
pub mod error;
pub mod experiment;
pub mod exponent;
pub mod gaussian;
pub mod lemma;
pub mod linalg;
pub mod quadrature;
pub mod rational;
pub mod rng;
pub mod surface;
pub mod transform;

pub use error::{Error, Result};
