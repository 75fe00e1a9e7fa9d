//! Projective charts on the heat space and the cusp edge double space, the
//! quasihomogeneous blowup map, and numerical lifts of vector fields.
//!
//! Points are stored as flat coordinate vectors so that lifts can be computed
//! by transporting a base field through the chart map. Validity regions carry
//! explicit margins: `s ∈ [0.1, 10]` on the back-face chart and `x ≥ 0.1 x'`
//! near the diagonal. These are engineering choices.

mod charts;
mod lift;
mod qh;

pub use charts::{
    BaseSpace, BkfChartPoint, Chart, DoubleChartPoint, FfChartPoint, TfFfChartPoint, BKF_S_RANGE,
    RATIO_MARGIN,
};
pub use lift::{
    closed_form_lifts, heat_lift_check, lift_field_numeric, sample_chart_point, verify_lifts,
    HeatLiftReport, LiftCheck, LiftFormula,
};
pub use qh::{qh_blowdown, qh_blowup_map, weighted_radius};

use crate::error::{invalid, Error, Result};

/// Dimensions of the cusp edge geometry `dx² + x^{2k} g_fiber + g_base`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeometryParams {
    pub k: u32,
    pub f: usize,
    pub b: usize,
}

impl GeometryParams {
    pub fn new(k: u32, f: usize, b: usize) -> Result<Self> {
        if k < 2 {
            return invalid(format!("k must be at least 2, got {k}"));
        }
        if f < 1 {
            return invalid("fiber dimension must be at least 1");
        }
        Ok(Self { k, f, b })
    }

    /// `n = 1 + b + f`
    pub fn n(&self) -> usize {
        1 + self.b + self.f
    }
}

/// Point of the heat space (or double space, with `t = 0` unused) near the
/// boundary corner.
#[derive(Clone, Debug, PartialEq)]
pub struct BasePoint {
    pub x: f64,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub xp: f64,
    pub yp: Vec<f64>,
    pub zp: Vec<f64>,
    pub t: f64,
}

impl BasePoint {
    pub fn zeros(g: &GeometryParams) -> Self {
        Self {
            x: 0.0,
            y: vec![0.0; g.b],
            z: vec![0.0; g.f],
            xp: 0.0,
            yp: vec![0.0; g.b],
            zp: vec![0.0; g.f],
            t: 0.0,
        }
    }

    pub fn to_flat(&self, space: BaseSpace) -> Vec<f64> {
        let mut v = vec![self.x];
        v.extend(&self.y);
        v.extend(&self.z);
        v.push(self.xp);
        v.extend(&self.yp);
        v.extend(&self.zp);
        if space == BaseSpace::Heat {
            v.push(self.t);
        }
        v
    }

    pub fn from_flat(g: &GeometryParams, space: BaseSpace, v: &[f64]) -> Result<Self> {
        if v.len() != space.dim(g) {
            return Err(Error::DimensionMismatch { left: v.len(), right: space.dim(g) });
        }
        let (b, f) = (g.b, g.f);
        let h = 1 + b + f;
        Ok(Self {
            x: v[0],
            y: v[1..1 + b].to_vec(),
            z: v[1 + b..h].to_vec(),
            xp: v[h],
            yp: v[h + 1..h + 1 + b].to_vec(),
            zp: v[h + 1 + b..2 * h].to_vec(),
            t: if space == BaseSpace::Heat { v[2 * h] } else { 0.0 },
        })
    }
}
