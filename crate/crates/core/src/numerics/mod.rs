//! Numerical kernels: adaptive quadrature, safeguarded root finding,
//! an embedded Runge-Kutta pair with dense output, and Richardson
//! finite-difference helpers used by the cross-validation mode.

pub mod fd;
pub mod ode;
pub mod quad;
pub mod root;
