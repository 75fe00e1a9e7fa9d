//! Closed-form model heat kernels and their residual certification.
//!
//! The Bessel kernels solve `∂_t H = P_{A,B} H` with
//! `P_{A,B} = ∂_s² − (A/s)∂_s + B/s²`:
//!
//! ```text
//! H(s, σ, t) = (sσ)^{(A+1)/2} (1/2t) e^{−(s²+σ²)/4t} I_ν(sσ/2t),   ν² = ((A+1)/2)² − B
//! ```
//!
//! as a kernel against `σ^{−A} dσ`. Every order is certified by measuring the
//! heat-equation residual before a kernel is handed out.

mod bessel;
mod heat;
mod model;

pub use bessel::{bessel_i, bessel_i_scaled};
pub use heat::{circle_dirac_heat_trace, circle_heat, euclid_heat, ff_normal_kernel};
pub use model::{
    bessel_heat_kernel, bkf_pointwise_supertrace, bkf_time_residual, certify_bkf_time,
    heat_residual, model_heat_residual, nu_from_ab, nu_squared, semigroup_error, smoothing_error, BesselOrder,
    BesselParams, BkfNormalKernel, GradingExponents, KernelConvention, ModelKernel,
    TimeConvention, CERTIFY_TOL,
};
