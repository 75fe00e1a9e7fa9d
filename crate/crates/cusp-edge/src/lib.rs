//! Computable pieces of index theory for Dirac operators on incomplete cusp
//! edge spaces, i.e. metrics of the form `dx² + x^{2k} g_Z + φ* g_Y` near the
//! singular stratum.
//!
//! * [`clifford`]: exact complexified Clifford algebra, symbol map, Berezin
//!   integral, spinor representations and supertrace identities.
//! * [`indexsets`]: polyhomogeneous index sets and families, pullback,
//!   pushforward and the composition formulas of the cusp edge calculus.
//! * [`blowup`]: projective charts on the heat and double spaces and
//!   numerically verified lifts of vector fields.
//! * [`kernels`]: closed form model heat kernels, including the Bessel kernels
//!   of the signature operator.
//! * [`charforms`]: characteristic forms, eta invariants of circle families and
//!   the assembled index and signature predictions.
//! * [`spectral`]: Fourier-mode discretisations of the cusp Dirac and Laplace
//!   operators, eigenvalues, heat supertraces and the domain model ODE.
//! * [`pushforward`]: finite-part integrals and the small-time expansion
//!   coefficients of pushed-forward b-densities.
//! * [`cli`]: configuration, scenario runners and report serialisation used by
//!   the `cusp-edge` binary.

pub mod blowup;
pub mod charforms;
pub mod cli;
pub mod clifford;
mod error;
pub mod indexsets;
pub mod kernels;
pub mod pushforward;
pub mod quad;
pub mod spectral;

pub use error::{Error, Result};
