//! Dense-matrix reference machinery shared by the oracle and acceptance
//! suites. Everything here is built independently of the bitmask kernels it
//! checks: matrices are assembled entry-by-entry from 2x2 Pauli blocks, the
//! exponential uses scaling-and-squaring on a Taylor series, and the
//! Hermitian eigensolver is a complex Jacobi iteration that validates its own
//! residual.

pub mod dense;
