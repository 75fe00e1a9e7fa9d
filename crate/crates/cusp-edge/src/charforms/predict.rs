use serde::Serialize;

use crate::blowup::GeometryParams;
use crate::clifford::ExteriorElement;
use crate::error::{invalid, Error, Result};

use super::eta::{circle_spectrum, eta_heat, eta_zeta_circle};
use super::forms::{a_hat_form, FormMatrix};

/// Spin structure on the circle fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FiberSpin {
    /// spectrum `ℤ + a`
    Periodic,
    /// spectrum `ℤ + 1/2 + a`
    Antiperiodic,
}

/// Cusp edge geometry with a circle fiber over a point.
#[derive(Clone, Debug)]
pub struct IndexGeometry {
    pub params: GeometryParams,
    pub spin: FiberSpin,
    /// Flat-connection twist `a` on the fiber.
    pub twist: f64,
    /// `∫_M Â(M)`, required when `dim M ≥ 4`.
    pub interior: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PredictionTerm {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prediction {
    pub prediction: f64,
    pub terms: Vec<PredictionTerm>,
    pub error_estimate: f64,
}

fn term(name: &str, value: f64) -> PredictionTerm {
    PredictionTerm { name: name.into(), value }
}

/// Fractional shift of the fiber spectrum.
pub fn fiber_shift(spin: FiberSpin, twist: f64) -> f64 {
    let s = match spin {
        FiberSpin::Periodic => twist,
        FiberSpin::Antiperiodic => twist + 0.5,
    };
    s - s.floor()
}

/// Interior term of the index formula. In dimension 2 it is the top
/// coefficient of `Â` on a surface, which vanishes identically.
fn interior_a_hat(g: &IndexGeometry) -> Result<f64> {
    let dim = 1 + g.params.b + g.params.f;
    match (g.interior, dim) {
        (Some(v), _) => Ok(v),
        (None, 2) => {
            let r = FormMatrix::from_blocks(2, &[ExteriorElement::basis(2, &[1, 2])?])?;
            let top = a_hat_form(&r)?.top();
            Ok(top.to_c64().re)
        }
        (None, d) => invalid(format!("supply the interior A-hat integral for dimension {d}")),
    }
}

/// `ind(∂̸⁺) = ∫_M Â(M) − ∫_Y Â(Y) η̃`, with `Y` a point and a circle fiber,
/// so that the boundary term is half the fiber eta invariant.
pub fn index_prediction(g: &IndexGeometry) -> Result<Prediction> {
    if g.params.f != 1 {
        return Err(Error::Unsupported(format!("fiber must be a circle, got dimension {}", g.params.f)));
    }
    if g.params.b != 0 {
        return Err(Error::Unsupported(
            "only a point base is supported; higher-degree eta forms are not modelled".into(),
        ));
    }
    if !g.twist.is_finite() {
        return invalid("twist must be finite");
    }
    let a = fiber_shift(g.spin, g.twist);
    if a == 0.0 {
        return Err(Error::Unsupported("fiber Dirac operator has a kernel".into()));
    }
    let interior = interior_a_hat(g)?;
    let eta = eta_heat(&circle_spectrum(a, 2000))?;
    let oracle = eta_zeta_circle(a);
    let eta_term = 0.5 * eta.value;
    Ok(Prediction {
        prediction: interior - eta_term,
        terms: vec![
            term("interior_a_hat", interior),
            term("eta_tilde", eta_term),
            term("eta_fiber", eta.value),
            term("eta_fiber_zeta", oracle.value),
        ],
        error_estimate: 0.5 * eta.error_estimate,
    })
}

/// Eta data of the boundary signature-type operator.
#[derive(Clone, Debug)]
pub enum EtaInput {
    Value(f64),
    Spectrum(Vec<f64>),
}

/// `sgn = ∫_M L(M) − ∫_Y L(Y) η̃`; with `Y` a point, `∫_Y L(Y) = 1` and `η̃`
/// is half the fiber eta invariant.
pub fn signature_prediction(interior_l: f64, fiber_eta: &EtaInput) -> Result<Prediction> {
    let (eta, err) = match fiber_eta {
        EtaInput::Value(v) => (*v, 0.0),
        EtaInput::Spectrum(s) => {
            let r = eta_heat(s)?;
            (r.value, r.error_estimate)
        }
    };
    Ok(Prediction {
        prediction: interior_l - 0.5 * eta,
        terms: vec![term("interior_l", interior_l), term("eta_tilde", 0.5 * eta)],
        error_estimate: 0.5 * err,
    })
}
