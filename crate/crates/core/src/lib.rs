//! Numerics for two-slit interference in magnetic fields, the Aharonov-Bohm
//! phase, Madelung hydrodynamics and the gausson soliton of the logarithmic
//! Schrödinger equation.
//!
//! The closed-form layers ([`fringe`], [`gausson`], [`grid`], [`wavefunction`])
//! build without `std` (only `alloc`). The spectral machinery ([`spectral`],
//! [`tdse`], [`madelung`], [`lognls`]) needs an FFT and is gated on the
//! default `std` feature.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod fringe;
pub mod gausson;
pub mod grid;
pub mod units;
pub mod wavefunction;

#[cfg(feature = "std")]
pub mod lognls;
#[cfg(feature = "std")]
pub mod madelung;
#[cfg(feature = "std")]
pub mod spectral;
#[cfg(feature = "std")]
pub mod tdse;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use grid::{Axis, Grid};
pub use units::UnitsConfig;
pub use wavefunction::Wavefunction;

pub use num_complex::Complex64;

mod prelude {
    pub(crate) use alloc::format;
    pub(crate) use alloc::string::String;
    #[allow(unused_imports)]
    pub(crate) use alloc::vec;
    pub(crate) use alloc::vec::Vec;
    #[allow(unused_imports)]
    pub(crate) use num_traits::Float;
}
