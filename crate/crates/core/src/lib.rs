//! Simulation and parameter-estimation toolkit for a mechanical light memory
//! based on optomechanically induced transparency (OMIT).
//!
//! The crate models a single mechanical mode coupled to one optical cavity
//! mode driven on the red sideband. It provides
//!
//! - [`system`]: physical parameters, derived drive quantities
//!   (photon number, optical damping, cooperativity) and elementary
//!   susceptibilities,
//! - [`response`]: steady-state frequency-domain models (OMIT probe
//!   response, bare-cavity limit, detuning-dependent effective linewidth,
//!   transmitted power),
//! - [`memory`]: the time-domain write/store/read protocol, with exact
//!   piecewise closed forms, a fixed-step RK4 oracle, lock-in envelope
//!   extraction, and efficiency accounting,
//! - [`estimation`]: damped Gauss-Newton least squares and the calibration
//!   fits (cavity spectroscopy, input power, vacuum coupling rate, ringdown,
//!   storage-time decay, efficiency scalings).
//!
//! All frequencies and rates inside the crate are angular (rad/s). Ordinary
//! frequencies (Hz) should be converted at the boundary with [`units`].
//!
//! Everything is pure computation on immutable inputs; the crate is
//! `no_std` (with `alloc`) and safe to call from any number of threads.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod estimation;
pub mod memory;
pub mod response;
pub mod system;
pub mod units;

pub use num_complex::Complex64;
