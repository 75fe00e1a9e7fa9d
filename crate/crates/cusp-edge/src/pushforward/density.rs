use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use statrs::function::gamma::{digamma, gamma};

use crate::blowup::GeometryParams;
use crate::error::{invalid, Result};
use crate::quad::{integrate, QuadOptions};

use super::finite::{FinitePart, Order};

/// Terms of the `e^{−x}` series kept when declaring expansion orders.
pub(crate) const SERIES_TERMS: usize = 16;

/// The product-type factor of the heat-space volume b-density in the chart
/// `(x, T̃)`, `x^{kf+1}/(x T̃)`. The `O(x^{2k})` metric correction is not
/// modelled; it is absent when the base is a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VolumeDensity {
    pub k: u32,
    pub f: usize,
    pub exact: bool,
}

pub fn volume_bdensity(g: &GeometryParams) -> VolumeDensity {
    VolumeDensity { k: g.k, f: g.f, exact: g.b == 0 }
}

impl VolumeDensity {
    pub fn eval(&self, x: f64, t_tilde: f64) -> f64 {
        x.powi((self.k as usize * self.f) as i32) / t_tilde
    }
}

/// Smooth cutoff, `1` on `[0, 1]` and `0` on `[2, ∞)`.
pub fn cutoff(x: f64) -> f64 {
    if x <= 1.0 {
        return 1.0;
    }
    if x >= 2.0 {
        return 0.0;
    }
    let h = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    let t = 2.0 - x;
    h(t) / (h(t) + h(1.0 - t))
}

/// A term of a synthetic coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Atom {
    /// `c s^p e^{−s}`
    Exp { c: f64, p: f64 },
    /// `c χ(s) s^p` with the smooth [`cutoff`] `χ`.
    Cut { c: f64, p: f64 },
}

impl Atom {
    fn eval(&self, s: f64) -> f64 {
        match *self {
            Atom::Exp { c, p } => c * s.powf(p) * (-s).exp(),
            Atom::Cut { c, p } => {
                let w = cutoff(s);
                if w == 0.0 {
                    0.0
                } else {
                    c * w * s.powf(p)
                }
            }
        }
    }

    /// `FP ∫_0^∞ atom(s) s^shift ds/s` and its error estimate.
    fn finite_part(&self, shift: f64) -> Result<(f64, f64)> {
        match *self {
            Atom::Exp { c, p } => {
                let q = p + shift;
                let n = -q.round();
                if n >= 0.0 && (q + n).abs() < 1e-9 {
                    // Hadamard part at the pole of Γ
                    let fact: f64 = (1..=n as u64).map(|i| i as f64).product();
                    let sign = if n as u64 % 2 == 0 { 1.0 } else { -1.0 };
                    let v = c * sign / fact * digamma(n + 1.0);
                    Ok((v, 1e-15 * v.abs()))
                } else {
                    let v = c * gamma(q);
                    Ok((v, 1e-14 * v.abs()))
                }
            }
            Atom::Cut { c, p } => {
                let q = p + shift;
                let head = if q.abs() < 1e-12 { 0.0 } else { 1.0 / q };
                let opts = QuadOptions { rel_tol: 1e-14, abs_tol: 1e-300, max_intervals: 4000 };
                let tail = integrate(|x| cutoff(x) * x.powf(q - 1.0), 1.0, 2.0, opts)?;
                Ok((c * (head + tail.value), (c * tail.error).abs()))
            }
        }
    }
}

/// A coefficient function of one variable with its declared expansion at
/// `0`. Coefficients are taken constant along `∂M`.
#[derive(Clone)]
pub struct Coefficient {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub orders: Vec<Order>,
    /// The coefficient vanishes beyond this point.
    pub support: f64,
    atoms: Option<Vec<Atom>>,
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Coefficient").field("orders", &self.orders).field("support", &self.support).finish()
    }
}

impl Coefficient {
    pub fn new(eval: impl Fn(f64) -> f64 + Send + Sync + 'static, orders: Vec<Order>) -> Self {
        Self { eval: Arc::new(eval), orders, support: f64::INFINITY, atoms: None }
    }

    pub fn from_atoms(atoms: Vec<Atom>) -> Self {
        let mut orders: Vec<Order> = Vec::new();
        let mut push = |o: Order| {
            if !orders.iter().any(|q| (q.exponent - o.exponent).abs() < 1e-12) {
                orders.push(o);
            }
        };
        for a in &atoms {
            match *a {
                Atom::Exp { p, .. } => (0..SERIES_TERMS).for_each(|m| push(Order::power(p + m as f64))),
                Atom::Cut { p, .. } => push(Order::power(p)),
            }
        }
        let support = if atoms.iter().all(|a| matches!(a, Atom::Cut { .. })) { 2.0 } else { f64::INFINITY };
        let terms = atoms.clone();
        let mut c = Self::new(move |s: f64| terms.iter().map(|a| a.eval(s)).sum(), orders);
        c.support = support;
        c.atoms = Some(atoms);
        c
    }

    /// `Σ c · s^p e^{−s}` over `(c, p)`.
    pub fn exp_atoms(atoms: Vec<(f64, f64)>) -> Self {
        Self::from_atoms(atoms.into_iter().map(|(c, p)| Atom::Exp { c, p }).collect())
    }

    pub fn zero() -> Self {
        Self::new(|_| 0.0, vec![Order::power(0.0)])
    }

    pub fn eval(&self, s: f64) -> f64 {
        (self.eval)(s)
    }

    /// `FP ∫_0^∞ u(s) s^shift ds/s` in closed form, for coefficients built
    /// from atoms.
    pub fn exact_finite_part(&self, shift: f64) -> Option<Result<FinitePart>> {
        let atoms = self.atoms.as_ref()?;
        let mut value = 0.0;
        let mut error = 0.0;
        for a in atoms {
            match a.finite_part(shift) {
                Ok((v, e)) => {
                    value += v;
                    error += e;
                }
                Err(e) => return Some(Err(e)),
            }
        }
        Some(Ok(FinitePart { value, fit_residual: 0.0, quadrature_error: error }))
    }

    pub fn leading_order(&self) -> f64 {
        self.orders.iter().map(|o| o.exponent).fold(f64::INFINITY, f64::min)
    }
}

/// Building blocks of synthetic densities, given directly as functions of
/// `(x, τ)` so that the pushforward can be integrated without reference to
/// the coefficient data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Generator {
    /// `c τ^{−n+i} x^γ e^{−x}`
    Tf { i: usize, c: f64, gamma: u32 },
    /// `c χ(x) x^{−kn−1+j} T̃^α e^{−T̃}` with `T̃ = τ x^{−k}`, the smooth
    /// [`cutoff`] `χ` and `1 ≤ j ≤ k(b+1)`.
    Ff { j: usize, c: f64, alpha: i64 },
    /// `c T e^{−T}` at the back face.
    Bkf { c: f64 },
}

/// A polyhomogeneous b-density on the heat space, by its coefficients at
/// `tf`, `ff`, the mixed corner and optionally `bkf`.
///
/// `tf[i]` is `u_{i,tf}(x)`, the coefficient of `τ^{−n+i}`; `ff[j]` is
/// `u_{j,ff}(T̃)`, the coefficient of `x^{−kn−1+j}`; `corner[(α, β)]` is the
/// coefficient of `T̃^α x^β`.
#[derive(Clone, Debug)]
pub struct PhgBDensity {
    pub params: GeometryParams,
    /// `vol(∂M)`
    pub boundary_volume: f64,
    pub tf: BTreeMap<usize, Coefficient>,
    pub ff: BTreeMap<usize, Coefficient>,
    pub corner: BTreeMap<(i64, i64), f64>,
    pub bkf: Option<Coefficient>,
    pub generators: Vec<Generator>,
}

impl PhgBDensity {
    pub fn new(params: GeometryParams, boundary_volume: f64) -> Result<Self> {
        if !(boundary_volume > 0.0 && boundary_volume.is_finite()) {
            return invalid("boundary volume must be positive");
        }
        Ok(Self {
            params,
            boundary_volume,
            tf: BTreeMap::new(),
            ff: BTreeMap::new(),
            corner: BTreeMap::new(),
            bkf: None,
            generators: Vec::new(),
        })
    }

    /// `n = 1 + b + f`
    pub fn n(&self) -> i64 {
        self.params.n() as i64
    }

    pub fn k(&self) -> i64 {
        self.params.k as i64
    }

    /// The density carrying exactly the given generators, with its
    /// coefficient data derived from them.
    ///
    /// Pure powers of `T̃` in the `ff` expansion of `Tf` generators are not
    /// recorded; their finite part over `(0, ∞)` is zero.
    pub fn synthetic(params: GeometryParams, boundary_volume: f64, generators: &[Generator]) -> Result<Self> {
        let mut d = Self::new(params, boundary_volume)?;
        let n = d.n();
        let k = d.k();
        let top = k * (params.b as i64 + 1);
        let mut tf: BTreeMap<usize, Vec<Atom>> = BTreeMap::new();
        let mut ff: BTreeMap<usize, Vec<Atom>> = BTreeMap::new();
        let mut bkf: Vec<Atom> = Vec::new();
        for gen in generators {
            match *gen {
                Generator::Tf { i, c, gamma } => {
                    tf.entry(i).or_default().push(Atom::Exp { c, p: gamma as f64 });
                }
                Generator::Ff { j, c, alpha } => {
                    if j == 0 || j as i64 > top {
                        return invalid(format!("ff generators need 1 ≤ j ≤ k(b+1) = {top}, got {j}"));
                    }
                    if alpha < -n {
                        return invalid(format!("ff generator exponent {alpha} below −n = {}", -n));
                    }
                    let beta = -k * n - 1 + j as i64;
                    let mut fact = 1.0;
                    for l in 0..=(n - alpha).max(0) {
                        if l > 0 {
                            fact *= l as f64;
                        }
                        let a = alpha + l;
                        let w = if l % 2 == 0 { c / fact } else { -c / fact };
                        tf.entry((n + a) as usize).or_default().push(Atom::Cut { c: w, p: (beta - k * a) as f64 });
                        if a <= 0 {
                            *d.corner.entry((a, beta)).or_default() += w;
                        }
                    }
                    ff.entry(j).or_default().push(Atom::Exp { c, p: alpha as f64 });
                }
                Generator::Bkf { c } => bkf.push(Atom::Exp { c, p: 1.0 }),
            }
        }
        d.tf = tf.into_iter().map(|(i, a)| (i, Coefficient::from_atoms(a))).collect();
        d.ff = ff.into_iter().map(|(j, a)| (j, Coefficient::from_atoms(a))).collect();
        d.bkf = (!bkf.is_empty()).then(|| Coefficient::from_atoms(bkf));
        d.generators = generators.to_vec();
        Ok(d)
    }

    /// Checks the index-set shape: `ff` coefficients start at `j = 1` and
    /// the `tf` expansion starts at `τ^{−n}`.
    pub fn validate(&self) -> Result<()> {
        if self.ff.contains_key(&0) {
            return invalid("ff index set starts at −k(b+1)+1; u_{0,ff} is not allowed");
        }
        for &(a, _) in self.corner.keys() {
            if a < -self.n() {
                return invalid(format!("corner coefficient at τ-order {a} below −n"));
            }
        }
        Ok(())
    }
}

/// Named synthetic densities used by the demo and the acceptance suite.
pub fn preset(name: &str, params: GeometryParams) -> Result<Vec<Generator>> {
    let n = params.n() as i64;
    let k = params.k as usize;
    let top = k * (params.b + 1);
    let gens = match name {
        "tf" => vec![
            Generator::Tf { i: 0, c: 1.0, gamma: 0 },
            Generator::Tf { i: 1, c: -0.5, gamma: 2 },
            Generator::Tf { i: params.n(), c: 0.25, gamma: 1 },
        ],
        "ff" => vec![
            Generator::Ff { j: 1, c: 1.0, alpha: 1 },
            Generator::Ff { j: 2, c: -0.7, alpha: 0 },
            Generator::Ff { j: top, c: 0.3, alpha: 2 },
        ],
        "log" => vec![
            Generator::Tf { i: 0, c: 0.5, gamma: 1 },
            Generator::Ff { j: 1, c: 1.0, alpha: -n + 1 },
            Generator::Ff { j: top, c: 0.4, alpha: -1 },
        ],
        "mixed" => vec![
            Generator::Tf { i: 1, c: 1.0, gamma: 0 },
            Generator::Ff { j: 1, c: 0.6, alpha: 0 },
            Generator::Ff { j: 1, c: -0.3, alpha: -n },
            Generator::Bkf { c: 0.8 },
        ],
        other => return invalid(format!("unknown preset {other:?}; expected tf, ff, log or mixed")),
    };
    Ok(gens)
}

pub const PRESETS: [&str; 4] = ["tf", "ff", "log", "mixed"];

#[cfg(test)]
mod tests {
    use super::super::finite::finite_part;
    use super::*;

    #[test]
    fn closed_form_finite_parts() {
        let atoms = [Atom::Exp { c: 0.7, p: 0.5 }, Atom::Exp { c: -1.3, p: -1.0 }, Atom::Cut { c: 2.0, p: -1.5 }];
        for a in atoms {
            let u = Coefficient::from_atoms(vec![a]);
            for shift in [0.0, 1.0, 2.5] {
                let exact = u.exact_finite_part(shift).unwrap().unwrap().value;
                let orders = super::super::finite::shift_orders(&u.orders, shift);
                let fitted = finite_part(&|s: f64| u.eval(s) * s.powf(shift), &orders, u.support).unwrap().value;
                assert!((exact - fitted).abs() < 1e-8, "{a:?}, shift {shift}: {exact} {fitted}");
            }
        }
        let sum = Coefficient::from_atoms(atoms.to_vec()).exact_finite_part(0.0).unwrap().unwrap().value;
        assert!((sum - 1.047_704_497_537_315_2).abs() < 1e-13);
        // FP ∫ s^{−3} e^{−s} ds/s = −ψ(4)/6
        let triple = Coefficient::exp_atoms(vec![(1.0, -3.0)]).exact_finite_part(0.0).unwrap().unwrap().value;
        let psi4 = 1.0 + 0.5 + 1.0 / 3.0 - 0.577_215_664_901_532_9;
        assert!((triple + psi4 / 6.0).abs() < 1e-14);
        assert!(Coefficient::zero().exact_finite_part(0.0).is_none());
    }

    #[test]
    fn volume_factor() {
        let g = GeometryParams::new(3, 1, 0).unwrap();
        let v = volume_bdensity(&g);
        assert!(v.exact);
        assert!((v.eval(0.5, 2.0) - 0.125 / 2.0).abs() < 1e-15);
        assert!(!volume_bdensity(&GeometryParams::new(3, 1, 1).unwrap()).exact);
    }

    #[test]
    fn synthetic_tf_expansion() {
        // the tf coefficients re-sum the generator at small τ
        let g = GeometryParams::new(2, 1, 0).unwrap();
        let d = PhgBDensity::synthetic(g, 1.0, &[Generator::Ff { j: 1, c: 1.0, alpha: -1 }]).unwrap();
        let (x, tau) = (0.4f64, 1e-3f64);
        let tt = tau * x.powi(-2);
        let direct = x.powi(-2 * 2 - 1 + 1) * tt.powi(-1) * (-tt).exp();
        let series: f64 = d.tf.iter().map(|(i, c)| tau.powi(*i as i32 - 2) * c.eval(x)).sum();
        assert!((series - direct).abs() < 1e-9 * direct.abs());
    }
}
