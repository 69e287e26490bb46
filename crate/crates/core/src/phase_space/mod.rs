//! Grid transforms among the coordinate density matrix `ρ(x, x′)`, the Wigner
//! function `W(p, q)` and the Q-function `Q(β)`, and evolution by replacement
//! of arguments under linear symplectic maps.
//!
//! Grids are uniform tensor products with axes in per-mode pairs:
//! `(p_k, q_k)` for Wigner functions, `(x_k, x′_k)` for density matrices and
//! `(Re β_k, Im β_k)` for Q-functions. The last axis varies fastest.
//! Normalizations are `∫W dp dq/(2π)^N = 1`, `∫ρ(x, x) dx = 1` and
//! `∫Q d²β/π^N = 1`, with `β = (q + ip)/√2`.
//!
//! Density and Wigner transforms handle up to two modes, mode by mode. The
//! Q-kernel transforms are single-mode.

mod evolve;
mod grid;
mod qkernel;
mod transforms;

pub use evolve::{evolve_q, evolve_wigner, interpolate, ComplexLinearMap, LinearSymplecticMap, SYMPLECTIC_TOL};
pub use grid::{Axis, GridFunction, GridSidecar, Representation, GRID_SCHEMA_VERSION};
pub use qkernel::{
    density_from_analytic_q, density_from_q, fit_q_grid, wigner_from_analytic_q, wigner_from_q, AnalyticQ,
    ComplexGrid, FitOptions, FockFit,
};
pub use transforms::{
    density_from_wigner, q_from_density, q_from_wigner, q_from_wigner_on, wigner_from_density, HERMITICITY_TOL,
    MAX_GRID_MODES, SUPPORT_TOL,
};
