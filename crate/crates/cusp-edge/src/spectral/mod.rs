//! Fourier-mode discretisations of the model cusp operators on
//! `(0, x_max] × S¹` with metric `dx² + x^{2k}dθ²`.
//!
//! Each fiber mode gives a one-dimensional operator on `L²(x^{kf}dx)`.
//! Dirac modes use a staggered grid, so that the chiral blocks are exact
//! transposes and squared operators pair up; Laplace modes use a flux form
//! with exact dual-cell weights. Eigenvalues come from Sturm bisection on
//! symmetric tridiagonal matrices, which keeps relative accuracy despite the
//! `x^{−2k}` potential near `x = 0`.

mod grid;
mod heat;
mod modes;
mod ode;
mod scenario;
mod solve;
mod tridiag;

pub use grid::{build_grid, Grid, GridScheme};
pub use heat::{
    boundary_decay_check, heat_trace, laplace_weyl, mckean_singer, torus_weyl_ratio, weyl_check, DecayFit,
    HeatTrace, TraceKind, WeylReport,
};
pub use modes::{
    assemble_dirac_mode, assemble_flat_mode, assemble_laplace_mode, assemble_laplace_mode_with, ModeOperator,
    OperatorKind, WallCondition,
};
pub use ode::{domain_ode_check, ConstantRule, DomainOdeReport};
pub use scenario::{dirac_modes, run_dirac_scenario, DiracReport, DiracScenario, ModeReport};
pub use solve::{eigen_solve, eigenvalues_below, refine, Spectrum, RESIDUAL_TOL};
pub use tridiag::SymTridiag;
