//! Numerical laboratory for the geometry of sub-Hardy Hilbert spaces.
//!
//! The crate takes a symbol `b` in the closed unit ball of H-infinity
//! (finite Blaschke products, polynomials, outer functions reconstructed
//! from a boundary modulus, and products/scalings of these), samples it on
//! the unit circle, and builds the linear-algebra objects needed to study
//! the backward shift restricted to the associated de Branges-Rovnyak
//! space H(b):
//!
//! * [`symbol`] — symbol specs, boundary grids, Taylor coefficients,
//!   moments of |b|^2, parity and inner/extremality diagnostics;
//! * [`hardy`] — truncated Hardy-space operations: shifts, Toeplitz
//!   actions, weighted inner products, the Cauchy transform;
//! * [`space`] — H(b) inner products and Gram matrices of the orbit
//!   {S*^n b} by three independent methods, the defect-identity suite,
//!   and the exact model-space representation for finite Blaschke symbols;
//! * [`reduce`] — the reducibility decision for the squared restricted
//!   backward shift: bilinear orthogonality system, nullspace solver,
//!   moment recurrences, subspace construction/verification, the inner
//!   structural test and commutant projection check;
//! * [`report`] — machine-readable reports, CSV companions and the batch
//!   runner behind the CLI.
//!
//! Everything is deterministic: identical inputs and configuration produce
//! identical reports (timing is kept in a separate field).

pub mod config;
pub mod fft;
pub mod hardy;
pub mod reduce;
pub mod report;
pub mod space;
pub mod symbol;

pub use num_complex::Complex64;

/// Shorthand used throughout the crate.
pub type C64 = num_complex::Complex64;
