//! Numerics for Eisenstein-series inner products on SL(2, Z) and its higher-rank lifts.
//!
//! The crate is layered bottom-up:
//!
//! * [`specfun`]: log-gamma, Riemann zeta, completed zeta and K-Bessel functions.
//! * [`maass`]: Hecke–Maass cusp form data, Hecke multiplicativity and the
//!   normalization `|rho(1)|^2 = 8 / Lambda(1, ad phi)`.
//! * [`lfun`]: standard and adjoint L-functions, including two approximate
//!   functional equations.
//! * [`eisen2`]: the GL(2) layer: fundamental-domain reduction, Fourier
//!   expansions, the unfolded triple product and its brute-force quadrature.
//! * [`wimu`]: the closed formulas for `mu_{n,t}` and its square.
//! * [`moments`]: windowed integrals in `t`: mean value, oscillatory first
//!   moment, second moment of `L(1/2 + it)`, and the quantum variance.

pub mod arith;
pub mod eisen2;
pub mod error;
pub mod lfun;
pub mod maass;
pub mod moments;
pub mod quad;
pub mod report;
pub mod specfun;
pub mod verify;
pub mod wimu;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use specfun::QuadratureSpec;

/// Version string embedded in CLI output headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
