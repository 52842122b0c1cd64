//! Summation-by-parts (SBP) first-derivative operators and the quadrature
//! rules hidden in their weight matrices.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`] and [`stencil`]: exact rationals, Bernoulli numbers and
//!   centered-difference coefficients.
//! * [`operator`]: the diag-1-2, diag-2-4, diag-3-6 and full-3-4 operators on
//!   uniform grids, `D` application and exact verification of
//!   `Q + Qᵀ = diag(-1, 0, …, 0, 1)`.
//! * [`endcorrect`]: the Bernoulli-number order conditions for trapezoid
//!   rules with end corrections, and an exact rule synthesizer.
//! * [`tensor`]: tensor-product operators on curvilinear 2-D grids, discrete
//!   metric terms, mapped quadrature and the discrete divergence theorem.
//! * [`study`] and [`report`]: grid-refinement studies and CSV/JSON output.
//!
//! ```
//! use sbp_quad::operator::{build_operator, OperatorFamily, UniformGrid1D};
//!
//! let grid = UniformGrid1D::unit(64).unwrap();
//! let op = build_operator(OperatorFamily::Diag24, grid).unwrap();
//! let integral: f64 = op
//!     .quadrature_weights()
//!     .iter()
//!     .zip(grid.nodes())
//!     .map(|(w, x)| w * x.powi(3))
//!     .sum();
//! assert!((integral - 0.25).abs() < 1e-14);
//! ```

pub mod endcorrect;
pub mod error;
pub mod exact;
pub mod operator;
pub mod report;
pub mod stencil;
pub mod study;
pub mod tensor;

pub use error::{Error, Result};
pub use exact::Rational;
pub use operator::{build_operator, OperatorFamily, SbpOperator1D, UniformGrid1D};
