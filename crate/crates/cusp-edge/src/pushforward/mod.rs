//! Finite-part integrals and the small-time expansion of pushed-forward
//! b-densities on the cusp edge heat space.
//!
//! For a polyhomogeneous density `u` with coefficients `u_{i,tf}` at the
//! temporal face, `u_{j,ff}` at the front face and corner coefficients
//! `u_{α,β}`, [`expansion_coefficients`] returns the coefficients of
//!
//! `Σ a_i τ^{−n+i} + Σ b_j τ^{−(b+1)+j/k} + c_0 + c_1 log τ + Σ d_i τ^{−n+i} log τ`.
//!
//! [`direct_pushforward_oracle`] integrates synthetic densities directly at
//! fixed `τ` and [`fit_template`] recovers the same coefficients from the
//! samples. Only `k > 1` is covered.

mod coeffs;
mod density;
mod direct;
mod finite;

pub use coeffs::{bkf_extension, expansion_coefficients, Coefficients, ExpansionResult};
pub use density::{cutoff, preset, Atom, volume_bdensity, Coefficient, Generator, PhgBDensity, VolumeDensity, PRESETS};
pub use direct::{
    compare, direct_pushforward_oracle, fit_by_generator, fit_template, Comparison, ComparisonRow, FitOptions, PushforwardSamples,
    TemplateFit, MAX_CONDITION,
};
pub use finite::{finite_part, finite_part_with, shift_orders, FinitePart, FinitePartOptions, Order};
