//! Small numerical kernels: bracketing root finding, Gauss–Legendre and
//! double-exponential quadrature, and a symmetric tridiagonal eigensolver.

pub mod gauss;
pub mod roots;
pub mod tanh_sinh;
pub mod tridiagonal;
