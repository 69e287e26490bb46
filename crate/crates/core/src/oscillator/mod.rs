//! Oscillator with time-dependent frequency, `H = p²/2 + ω²(t)x²/2`.
//!
//! Everything follows from the classical solution `ε̈ + ω²(t)ε = 0` with
//! `ε(0) = 1`, `ε̇(0) = i`: the Gaussian packets
//! `Ψ₀ = π^{−1/4}ε^{−1/2}exp(iε̇x²/2ε)`, their coherent and cat relatives, the
//! variances `σ_x = |ε|²/2`, `σ_p = |ε̇|²/2`, and the replacement map used by
//! [`crate::phase_space::evolve_wigner`].

mod packets;
mod profile;
mod trajectory;

pub use packets::{apply_invariant, cat_packet, coherent_packet};
pub use profile::FrequencyProfile;
pub use trajectory::{
    solve_epsilon, symplectic_map, variances, wronskian, EpsilonTrajectory, Instant, Variances, WRONSKIAN_TOL,
};
