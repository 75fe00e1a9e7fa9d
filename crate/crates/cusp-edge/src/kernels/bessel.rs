use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Result};

/// `e^{−x} I_ν(x)` for `x ≥ 0`, `ν ≥ 0`.
///
/// Power series for `x ≤ max(20, ν²)`, Hankel asymptotic expansion beyond.
pub fn bessel_i_scaled(nu: f64, x: f64) -> Result<f64> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return invalid(format!("bessel order must be a finite nonnegative real, got {nu}"));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return invalid(format!("bessel argument must be finite and nonnegative, got {x}"));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x <= 20.0f64.max(nu * nu) {
        Ok(series_scaled(nu, x))
    } else {
        Ok(asymptotic_scaled(nu, x))
    }
}

/// `I_ν(x)`; overflows to `+∞` past `x ≈ 700`.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_i_scaled(nu, x)? * x.exp())
}

fn series_scaled(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    // leading term (x/2)^ν / Γ(ν+1) e^{−x}, in logs
    let log_t0 = nu * half.ln() - ln_gamma(nu + 1.0) - x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut m = 0.0;
    loop {
        m += 1.0;
        term *= q / (m * (m + nu));
        sum += term;
        if term < 1e-17 * sum && m > q.sqrt() {
            break;
        }
    }
    // sum may be huge; combine in logs
    (log_t0 + sum.ln()).exp()
}

fn asymptotic_scaled(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for m in 1..200 {
        let k = (2 * m - 1) as f64;
        term *= -(mu - k * k) / (m as f64 * 8.0 * x);
        if term.abs() >= prev {
            break;
        }
        sum += term;
        prev = term.abs();
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_order_closed_form() {
        for x in [0.5, 5.0, 50.0] {
            let want = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sinh();
            let got = bessel_i(0.5, x).unwrap();
            assert!((got / want - 1.0).abs() < 1e-12, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn at_zero() {
        assert_eq!(bessel_i(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1.3, 0.0).unwrap(), 0.0);
        assert!(bessel_i(-1.0, 1.0).is_err());
    }

    #[test]
    fn branch_continuity() {
        for nu in [0.0, 1.0, 2.5] {
            let a = series_scaled(nu, 20.0);
            let b = asymptotic_scaled(nu, 20.0);
            assert!((a / b - 1.0).abs() < 1e-12, "nu={nu}: {a} {b}");
        }
    }
}
