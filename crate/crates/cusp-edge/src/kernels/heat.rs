use std::f64::consts::PI;

use crate::blowup::GeometryParams;
use crate::error::{invalid, Result};

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return invalid(format!("time must be positive and finite, got {t}"));
    }
    Ok(())
}

/// `(4πt)^{−1/2} e^{−(x−x')²/4t}`
pub fn euclid_heat(t: f64, x: f64, xp: f64) -> Result<f64> {
    check_time(t)?;
    let d = x - xp;
    Ok((-d * d / (4.0 * t)).exp() / (4.0 * PI * t).sqrt())
}

/// Heat kernel of `∂_θ²` on the circle of length `2π`.
///
/// Image sum for `t < 4`, eigenfunction sum otherwise; both are truncated once
/// terms drop below `1e−18` of the leading one.
pub fn circle_heat(t: f64, theta: f64, theta_p: f64) -> Result<f64> {
    check_time(t)?;
    let d = (theta - theta_p).rem_euclid(2.0 * PI);
    if t < 4.0 {
        let mut sum = 0.0;
        for m in -8i32..=8 {
            let w = d + 2.0 * PI * m as f64;
            sum += (-w * w / (4.0 * t)).exp();
        }
        Ok(sum / (4.0 * PI * t).sqrt())
    } else {
        let mut sum = 1.0;
        let mut n = 1.0;
        loop {
            let w = (-t * n * n).exp();
            if w < 1e-18 {
                break;
            }
            sum += 2.0 * w * (n * d).cos();
            n += 1.0;
        }
        Ok(sum / (2.0 * PI))
    }
}

/// `Σ_{n∈ℤ} e^{−t(n+a)²}`, the heat trace of `(−i∂_θ + a)²` on the circle.
pub fn circle_dirac_heat_trace(t: f64, a: f64) -> Result<f64> {
    check_time(t)?;
    let a = a - a.floor();
    let reach = (40.0 / t).sqrt().ceil() as i64 + 2;
    Ok((-reach..=reach).map(|n| (-t * (n as f64 + a).powi(2)).exp()).sum())
}

/// Front-face normal kernel
/// `(4π)^{−(b+1)/2} T̃^{−(b+1)} e^{−(s² + |η|²)/4T̃²} · fiber`.
///
/// The negative power of `4π` makes the kernel tend to `δ_{s=0} δ_{η=0}` as
/// `T̃ → 0`; `fiber` is the value of the fiber heat factor at time `T̃²`.
pub fn ff_normal_kernel(g: &GeometryParams, tt: f64, s: f64, eta: &[f64], fiber: f64) -> Result<f64> {
    check_time(tt)?;
    if eta.len() != g.b {
        return Err(crate::Error::DimensionMismatch { left: eta.len(), right: g.b });
    }
    let d = (g.b + 1) as f64;
    let r2 = s * s + eta.iter().map(|e| e * e).sum::<f64>();
    Ok((4.0 * PI).powf(-d / 2.0) * tt.powf(-d) * (-r2 / (4.0 * tt * tt)).exp() * fiber)
}
