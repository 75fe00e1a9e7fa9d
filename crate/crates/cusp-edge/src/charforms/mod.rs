//! Characteristic forms on explicit curvature matrices, eta invariants of
//! circle Dirac families, and the assembled index and signature predictions.
//!
//! `Â` and `L` are the multiplicative genera `Π (x/2)/sinh(x/2)` and
//! `Π x/tanh x` over the Pontryagin roots, so `Â = 1 − p₁/24 + …` and
//! `L = 1 + p₁/3 + …` with `p₁ = −tr(R²)/2`. Forms are exact.

mod eta;
mod forms;
mod predict;

pub use eta::{circle_spectrum, eta_heat, eta_zeta_circle, EtaMethod, EtaResult};
pub use forms::{
    a_hat_form, bernoulli, chern_char, form_exp, l_form, p1_form, FormMatrix, FormSeries,
};
pub use predict::{
    fiber_shift, index_prediction, signature_prediction, EtaInput, FiberSpin, IndexGeometry,
    Prediction, PredictionTerm,
};
