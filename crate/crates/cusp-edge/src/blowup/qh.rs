use crate::error::{invalid, Result};

/// `r_a(ω, ν) = (Σ ω_i^{2a} + Σ ν_j²)^{1/(2a)}`, homogeneous of degree one
/// under `(ω, ν) → (Rω, R^a ν)`.
pub fn weighted_radius(a: u32, omega: &[f64], nu: &[f64]) -> f64 {
    let a = a as i32;
    let s: f64 = omega.iter().map(|w| w.powi(2 * a)).sum::<f64>() + nu.iter().map(|v| v * v).sum::<f64>();
    s.powf(1.0 / (2.0 * a as f64))
}

/// `(ω, ν, R) ↦ (Rω, R^a ν)` for `(ω, ν)` on the weighted unit sphere.
pub fn qh_blowup_map(a: u32, omega: &[f64], nu: &[f64], r: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if a == 0 {
        return invalid("weight a must be positive");
    }
    if r < 0.0 || !r.is_finite() {
        return invalid(format!("radius must be nonnegative, got {r}"));
    }
    let rad = weighted_radius(a, omega, nu);
    if (rad - 1.0).abs() > 1e-12 {
        return invalid(format!("(omega, nu) is off the weighted sphere: r_a = {rad}"));
    }
    let ra = r.powi(a as i32);
    Ok((omega.iter().map(|w| r * w).collect(), nu.iter().map(|v| ra * v).collect()))
}

/// Inverse of [`qh_blowup_map`] away from the origin.
pub fn qh_blowdown(a: u32, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    if a == 0 {
        return invalid("weight a must be positive");
    }
    let r = weighted_radius(a, x, y);
    if !(r > 0.0) {
        return invalid("the blowdown is singular at the origin");
    }
    let ra = r.powi(a as i32);
    Ok((x.iter().map(|v| v / r).collect(), y.iter().map(|v| v / ra).collect(), r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let (x, _) = qh_blowup_map(1, &[1.0], &[], 0.5).unwrap();
        assert_eq!(x, vec![0.5]);
        let (x, y) = qh_blowup_map(2, &[1.0, 0.0], &[0.0], 0.3).unwrap();
        assert_eq!((x, y), (vec![0.3, 0.0], vec![0.0]));
        assert!(qh_blowup_map(2, &[0.5], &[0.0], 1.0).is_err());
    }

    #[test]
    fn radius_is_recovered() {
        let w = 0.6f64;
        let nu = (1.0 - w.powi(6)).sqrt();
        let (x, y) = qh_blowup_map(3, &[w], &[nu], 0.7).unwrap();
        assert!((weighted_radius(3, &x, &y) - 0.7).abs() < 1e-14);
        let (w2, nu2, r) = qh_blowdown(3, &x, &y).unwrap();
        assert!((w2[0] - w).abs() < 1e-14 && (nu2[0] - nu).abs() < 1e-14 && (r - 0.7).abs() < 1e-14);
    }
}
