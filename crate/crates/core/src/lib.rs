//! Numerics for open quantum systems described by non-Hermitian effective
//! Hamiltonians.
//!
//! The crate is `no_std` and needs only `alloc`. It covers:
//!
//! * [`linalg`]: dense complex eigendecomposition (Hessenberg + shifted QR),
//!   biorthogonal c-product normalization, Jordan chains at coalescence.
//! * [`models`]: two-level, toy chain, band-coupled, PT-symmetric and
//!   three-level Hamiltonians, including the principal-value self-energy.
//! * [`spectra`]: annotated mode sets (overlaps, phase rigidity, EP flags).
//! * [`sweeps`]: branch continuation, avoided crossings, EP location and
//!   encircling.
//! * [`observables`]: S matrix, Wigner-Smith delay, phase lapses, internal
//!   wavefunction, decay rate, order parameter.
//! * [`nonlinear`]: the cubic source-term Schrodinger equation.
//! * [`scenarios`]: canned end-to-end experiments with built-in assertions.
//!
//! All energies and widths are in common model units with hbar = 1.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod linalg;
pub mod models;
pub mod nonlinear;
pub mod observables;
pub mod quadrature;
pub mod scenarios;
pub mod series;
pub mod spectra;
pub mod sweeps;

pub use error::{Error, Result};
pub use linalg::{C64, EigenPair, JordanSolve, Matrix};
pub use models::{ModelSpec, Overrides};
pub use spectra::{solve_modes, ModeSet};
