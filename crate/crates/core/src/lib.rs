//! Photon statistics and phase-space functions for multimode Gaussian and
//! even/odd coherent states, built on multivariable Hermite polynomials.

pub mod cat_states;
pub mod error;
pub mod fock_oracle;
pub mod format;
pub mod gaussian;
pub mod linalg;
pub mod multi_hermite;
pub mod oscillator;
pub mod phase_space;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Crate version, recorded in CLI provenance blocks.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/hermite.md")]
    pub struct Hermite;
    #[doc = include_str!("../../../book/src/gaussian.md")]
    pub struct Gaussian;
    #[doc = include_str!("../../../book/src/cats.md")]
    pub struct Cats;
    #[doc = include_str!("../../../book/src/phase_space.md")]
    pub struct PhaseSpace;
    #[doc = include_str!("../../../book/src/oscillator.md")]
    pub struct Oscillator;
    #[doc = include_str!("../../../book/src/fock_oracle.md")]
    pub struct FockOracle;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
