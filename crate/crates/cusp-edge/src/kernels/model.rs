use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::quad::{integrate, QuadOptions};

use super::bessel::bessel_i_scaled;
use super::heat::{circle_heat, euclid_heat};

/// Residual bound for certifying a Bessel kernel.
pub const CERTIFY_TOL: f64 = 1e-6;

/// Which prefactor and pairing measure the Bessel kernel uses.
///
/// `Consistent`: `(sσ)^{(A+1)/2}` against `s^{−A} ds`, the fundamental
/// solution of `∂_t = ∂_s² − (A/s)∂_s + B/s²`. `AsPrinted`: `(sσ)^{−(A−1)/2}`
/// against `s^{A} ds`, which solves the equation with the drift sign flipped
/// and fails certification whenever `A ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum KernelConvention {
    #[default]
    Consistent,
    AsPrinted,
}

/// Order of the Bessel function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum BesselOrder {
    Real(f64),
    /// `ν = i·value`; no kernel is produced.
    Imaginary(f64),
}

/// Parameters of `P_{A,B} = ∂_s² − (A/s)∂_s + B/s²` and its heat kernel.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BesselParams {
    pub a: f64,
    pub b: f64,
    pub nu: BesselOrder,
    pub convention: KernelConvention,
    /// Measured heat-equation residual, once certified.
    pub residual: Option<f64>,
    /// Where `ν` came from.
    pub note: String,
}

/// `ν² = ((A+1)/2)² − B`, from conjugating `P_{A,B}` to Schrödinger form by
/// `u ↦ s^{A/2} u`.
pub fn nu_squared(a: f64, b: f64) -> f64 {
    let h = 0.5 * (a + 1.0);
    h * h - b
}

impl BesselParams {
    /// Candidate parameters, not yet certified.
    pub fn candidate(a: f64, b: f64, convention: KernelConvention) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return invalid("A and B must be finite");
        }
        let q = nu_squared(a, b);
        let nu = if q >= 0.0 { BesselOrder::Real(q.sqrt()) } else { BesselOrder::Imaginary((-q).sqrt()) };
        Ok(Self { a, b, nu, convention, residual: None, note: "nu^2 = ((A+1)/2)^2 - B".into() })
    }

    pub fn real_nu(&self) -> Result<f64> {
        match self.nu {
            BesselOrder::Real(v) => Ok(v),
            BesselOrder::Imaginary(v) => Err(Error::Unsupported(format!(
                "imaginary Bessel order nu = {v}i for (A, B) = ({}, {})",
                self.a, self.b
            ))),
        }
    }

    /// Exponent `m` of the pairing measure `s^m ds`.
    pub fn measure_exponent(&self) -> f64 {
        match self.convention {
            KernelConvention::Consistent => -self.a,
            KernelConvention::AsPrinted => self.a,
        }
    }

    fn prefactor_exponent(&self) -> f64 {
        match self.convention {
            KernelConvention::Consistent => 0.5 * (self.a + 1.0),
            KernelConvention::AsPrinted => -0.5 * (self.a - 1.0),
        }
    }

    pub fn is_certified(&self) -> bool {
        self.residual.is_some_and(|r| r <= CERTIFY_TOL)
    }

    /// `P_{A,B}` applied in `s` by fourth-order central differences.
    pub fn apply_p(&self, u: &dyn Fn(f64) -> f64, s: f64, h: f64) -> f64 {
        let (d1, d2) = fd4(u, s, h);
        d2 - self.a / s * d1 + self.b / (s * s) * u(s)
    }
}

fn kernel_with(p: &BesselParams, nu: f64, s: f64, sigma: f64, t: f64) -> Result<f64> {
    if !(s > 0.0 && sigma > 0.0 && t > 0.0) {
        return invalid(format!("need s, sigma, t > 0, got ({s}, {sigma}, {t})"));
    }
    let x = s * sigma / (2.0 * t);
    let d = s - sigma;
    Ok((s * sigma).powf(p.prefactor_exponent()) / (2.0 * t)
        * (-d * d / (4.0 * t)).exp()
        * bessel_i_scaled(nu, x)?)
}

/// `H_{A,B}(s, σ, t)`; requires certified parameters with real `ν`.
pub fn bessel_heat_kernel(p: &BesselParams, s: f64, sigma: f64, t: f64) -> Result<f64> {
    let nu = p.real_nu()?;
    if !p.is_certified() {
        return Err(Error::Unsupported("Bessel parameters are not certified".into()));
    }
    kernel_with(p, nu, s, sigma, t)
}

/// First and second derivatives by fourth-order central differences.
pub(crate) fn fd4(u: &dyn Fn(f64) -> f64, s: f64, h: f64) -> (f64, f64) {
    let (m2, m1, c, p1, p2) = (u(s - 2.0 * h), u(s - h), u(s), u(s + h), u(s + 2.0 * h));
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
    (d1, d2)
}

const RES_S: [f64; 4] = [0.6, 1.0, 1.4, 2.0];
const RES_SIGMA: [f64; 2] = [0.8, 1.5];
const RES_T: [f64; 3] = [0.2, 0.5, 1.0];

fn residual_for(p: &BesselParams, nu: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for &sigma in &RES_SIGMA {
        for &t in &RES_T {
            for &s in &RES_S {
                let hs = 2e-3 * s;
                let ht = 2e-3 * t;
                let u_s = |v: f64| kernel_with(p, nu, v, sigma, t).unwrap_or(f64::NAN);
                let u_t = |v: f64| kernel_with(p, nu, s, sigma, v).unwrap_or(f64::NAN);
                let (dt, _) = fd4(&u_t, t, ht);
                let pu = p.apply_p(&u_s, s, hs);
                let h = u_s(s);
                worst = worst.max((dt - pu).abs() / h.abs());
            }
        }
    }
    if worst.is_nan() {
        return Err(Error::Numerical("kernel residual is not finite".into()));
    }
    Ok(worst)
}

/// Relative heat-equation residual `max |(∂_t − P_{A,B})H| / |H|` on a fixed
/// interior grid, for the candidate order.
pub fn heat_residual(p: &BesselParams) -> Result<f64> {
    residual_for(p, p.real_nu()?)
}

/// Relative heat-equation residual of a model kernel on the same grid as
/// [`heat_residual`]; `∂_t − ∂_s²` for the flat kernels.
pub fn model_heat_residual(kernel: &ModelKernel) -> Result<f64> {
    if let ModelKernel::Bessel(p) = kernel {
        return heat_residual(p);
    }
    let mut worst = 0.0f64;
    for &sigma in &RES_SIGMA {
        for &t in &RES_T {
            for &s in &RES_S {
                let u_s = |v: f64| kernel.eval(v, sigma, t).unwrap_or(f64::NAN);
                let u_t = |v: f64| kernel.eval(s, sigma, v).unwrap_or(f64::NAN);
                let (dt, _) = fd4(&u_t, t, 2e-3 * t);
                let (_, d2) = fd4(&u_s, s, 2e-3 * s);
                worst = worst.max((dt - d2).abs() / u_s(s).abs());
            }
        }
    }
    if worst.is_nan() {
        return Err(Error::Numerical("kernel residual is not finite".into()));
    }
    Ok(worst)
}

/// Candidate `ν` certified by the residual oracle.
///
/// Imaginary candidates are returned flagged and uncertified. A real
/// candidate with residual above [`CERTIFY_TOL`] yields
/// [`Error::ConventionMismatch`] carrying the best order found on a grid.
pub fn nu_from_ab(a: f64, b: f64, convention: KernelConvention) -> Result<BesselParams> {
    let mut p = BesselParams::candidate(a, b, convention)?;
    let nu = match p.nu {
        BesselOrder::Imaginary(_) => return Ok(p),
        BesselOrder::Real(v) => v,
    };
    let r = residual_for(&p, nu)?;
    if r <= CERTIFY_TOL {
        p.residual = Some(r);
        return Ok(p);
    }
    let (best_nu, residual) = best_order(&p)?;
    Err(Error::ConventionMismatch { best_nu, residual })
}

fn best_order(p: &BesselParams) -> Result<(f64, f64)> {
    let mut best = (0.0, f64::INFINITY);
    for i in 0..=160 {
        let nu = 0.05 * i as f64;
        let r = residual_for(p, nu)?;
        if r < best.1 {
            best = (nu, r);
        }
    }
    // golden-section refinement around the grid minimum
    let (mut lo, mut hi) = ((best.0 - 0.05).max(0.0), best.0 + 0.05);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..40 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if residual_for(p, m1)? < residual_for(p, m2)? {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let nu = 0.5 * (lo + hi);
    let r = residual_for(p, nu)?;
    Ok(if r < best.1 { (nu, r) } else { best })
}

/// Relative semigroup defect
/// `|∫ H(s,u,t₁) H(u,σ,t₂) u^m du − H(s,σ,t₁+t₂)| / H(s,σ,t₁+t₂)`.
pub fn semigroup_error(p: &BesselParams, s: f64, sigma: f64, t1: f64, t2: f64) -> Result<f64> {
    let m = p.measure_exponent();
    let upper = s.max(sigma) + 12.0 * (2.0 * t1.max(t2)).sqrt();
    let f = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let a = bessel_heat_kernel(p, s, u, t1).unwrap_or(f64::NAN);
        let b = bessel_heat_kernel(p, u, sigma, t2).unwrap_or(f64::NAN);
        a * b * u.powf(m)
    };
    let q = integrate(f, 0.0, upper, QuadOptions::rel(1e-10))?;
    let want = bessel_heat_kernel(p, s, sigma, t1 + t2)?;
    Ok((q.value - want).abs() / want)
}

/// `|∫ H(s,σ,t) φ(σ) σ^m dσ − φ(s)|`, which tends to zero as `t → 0`.
pub fn smoothing_error(p: &BesselParams, s: f64, t: f64, phi: &dyn Fn(f64) -> f64, support: (f64, f64)) -> Result<f64> {
    let m = p.measure_exponent();
    let f = |u: f64| bessel_heat_kernel(p, s, u, t).unwrap_or(f64::NAN) * phi(u) * u.powf(m);
    let q = integrate(f, support.0, support.1, QuadOptions::rel(1e-10))?;
    Ok((q.value - phi(s)).abs())
}

/// Exponents of the signature model operators for fiber degree `N`:
/// `α = −kf`, `β = kN(1 − k(f−N))`, `γ = k(f−N)(1 − kN)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GradingExponents {
    pub k: i64,
    pub f: i64,
    pub n: i64,
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
}

impl GradingExponents {
    pub fn new(k: u32, f: u32, n: u32) -> Result<Self> {
        if k < 2 {
            return invalid(format!("k must be at least 2, got {k}"));
        }
        if n > f {
            return invalid(format!("degree N = {n} exceeds fiber dimension {f}"));
        }
        if 2 * n == f {
            return invalid(format!("N = f/2 = {n} is excluded"));
        }
        let (k, f, n) = (k as i64, f as i64, n as i64);
        Ok(Self {
            k,
            f,
            n,
            alpha: -k * f,
            beta: k * n * (1 - k * (f - n)),
            gamma: k * (f - n) * (1 - k * n),
        })
    }

    /// `(A, B) = (α, β)`
    pub fn beta_pair(&self) -> (f64, f64) {
        (self.alpha as f64, self.beta as f64)
    }

    /// `(A, B) = (α, γ)`
    pub fn gamma_pair(&self) -> (f64, f64) {
        (self.alpha as f64, self.gamma as f64)
    }
}

/// How the back-face variable `T` enters `H_{A,B}(s, 1, ·)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TimeConvention {
    /// kernel time `T²`
    Squared,
    /// kernel time `T`
    Linear,
}

impl TimeConvention {
    pub fn kernel_time(self, tb: f64) -> f64 {
        match self {
            TimeConvention::Squared => tb * tb,
            TimeConvention::Linear => tb,
        }
    }
}

/// Residual of `½T∂_T K − T² P K` for `K(s,T) = H(s, 1, τ(T))`.
pub fn bkf_time_residual(p: &BesselParams, conv: TimeConvention) -> Result<f64> {
    let mut worst = 0.0f64;
    for &tb in &[0.4, 0.7, 1.0] {
        for &s in &RES_S {
            let k_t = |v: f64| bessel_heat_kernel(p, s, 1.0, conv.kernel_time(v)).unwrap_or(f64::NAN);
            let k_s = |v: f64| bessel_heat_kernel(p, v, 1.0, conv.kernel_time(tb)).unwrap_or(f64::NAN);
            let (dtb, _) = fd4(&k_t, tb, 2e-3 * tb);
            let lhs = 0.5 * tb * dtb;
            let rhs = tb * tb * p.apply_p(&k_s, s, 2e-3 * s);
            worst = worst.max((lhs - rhs).abs() / k_s(s).abs());
        }
    }
    if worst.is_nan() {
        return Err(Error::Numerical("back-face residual is not finite".into()));
    }
    Ok(worst)
}

/// The time convention whose residual is below [`CERTIFY_TOL`].
pub fn certify_bkf_time(p: &BesselParams) -> Result<(TimeConvention, f64)> {
    let mut best = (TimeConvention::Squared, f64::INFINITY);
    for conv in [TimeConvention::Squared, TimeConvention::Linear] {
        let r = bkf_time_residual(p, conv)?;
        if r < best.1 {
            best = (conv, r);
        }
    }
    if best.1 > CERTIFY_TOL {
        return Err(Error::Numerical(format!(
            "no back-face time convention certified (best residual {:e})",
            best.1
        )));
    }
    Ok(best)
}

/// Diagonal blocks `(H_{α,β}(s,1,·), H_{α,γ}(s,1,·))` of the back-face normal
/// kernel at fiber degree `N`.
#[derive(Clone, Debug)]
pub struct BkfNormalKernel {
    pub exponents: GradingExponents,
    pub even: BesselParams,
    pub odd: BesselParams,
    pub time: TimeConvention,
}

impl BkfNormalKernel {
    pub fn new(k: u32, f: u32, n: u32) -> Result<Self> {
        let exponents = GradingExponents::new(k, f, n)?;
        let (a, b) = exponents.beta_pair();
        let even = nu_from_ab(a, b, KernelConvention::Consistent)?;
        let (a, c) = exponents.gamma_pair();
        let odd = nu_from_ab(a, c, KernelConvention::Consistent)?;
        even.real_nu()?;
        odd.real_nu()?;
        let (time, _) = certify_bkf_time(&even)?;
        Ok(Self { exponents, even, odd, time })
    }

    /// Block values at `(s, T)`.
    pub fn eval(&self, s: f64, tb: f64) -> Result<(f64, f64)> {
        let tau = self.time.kernel_time(tb);
        Ok((bessel_heat_kernel(&self.even, s, 1.0, tau)?, bessel_heat_kernel(&self.odd, s, 1.0, tau)?))
    }
}

/// Pointwise supertrace at `s = 1` of the back-face kernel on the pair of
/// fiber degrees `N` (even part) and `f − N` (odd part, reached by the
/// grading).
pub fn bkf_pointwise_supertrace(k: u32, f: u32, n: u32, tb: f64) -> Result<f64> {
    let even = BkfNormalKernel::new(k, f, n)?;
    let partner = GradingExponents::new(k, f, f - n)?;
    let (a, c) = partner.gamma_pair();
    let odd = nu_from_ab(a, c, KernelConvention::Consistent)?;
    let tau = even.time.kernel_time(tb);
    Ok(bessel_heat_kernel(&even.even, 1.0, 1.0, tau)? - bessel_heat_kernel(&odd, 1.0, 1.0, tau)?)
}

/// A model kernel with its metadata.
#[derive(Clone, Debug)]
pub enum ModelKernel {
    Euclid,
    Circle,
    Bessel(BesselParams),
}

impl ModelKernel {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKernel::Euclid => "euclid",
            ModelKernel::Circle => "circle",
            ModelKernel::Bessel(_) => "bessel",
        }
    }

    pub fn eval(&self, s: f64, sigma: f64, t: f64) -> Result<f64> {
        match self {
            ModelKernel::Euclid => euclid_heat(t, s, sigma),
            ModelKernel::Circle => circle_heat(t, s, sigma),
            ModelKernel::Bessel(p) => bessel_heat_kernel(p, s, sigma, t),
        }
    }
}
