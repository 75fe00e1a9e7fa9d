//! Acceptance suite. Every criterion is checked against an oracle written
//! here, independent of the library code under test, and reported on one
//! PASS/FAIL line.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cusp_edge::blowup::{
    closed_form_lifts, heat_lift_check, sample_chart_point, verify_lifts, BaseSpace, GeometryParams,
};
use cusp_edge::charforms::{circle_spectrum, eta_heat, index_prediction, FiberSpin, IndexGeometry};
use cusp_edge::clifford::{
    spinor_rep, split_trace, supertrace_even, trace_odd, volume_element, CliffordElement, GaussRat, MultiIndex,
    Rational, TraceConvention,
};
use cusp_edge::indexsets::{action_on_function, compose_double, IndexFamily, IndexSet, IndexTerm};
use cusp_edge::kernels::{
    bessel_heat_kernel, bkf_pointwise_supertrace, nu_from_ab, semigroup_error, BesselOrder, BkfNormalKernel,
    GradingExponents, KernelConvention, ModelKernel,
};
use cusp_edge::pushforward::{
    bkf_extension, compare, direct_pushforward_oracle, expansion_coefficients, fit_by_generator, fit_template, preset,
    Coefficient, FitOptions, Order, PhgBDensity,
};
use cusp_edge::spectral::{
    build_grid, domain_ode_check, laplace_weyl, run_dirac_scenario, torus_weyl_ratio, ConstantRule, DiracScenario,
    GridScheme,
};
use cusp_edge::Error;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: cusp_edge::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

// ---------------------------------------------------------------- Clifford

/// `i^phase · X^x Z^z` on qubits; bit `j` of `x`, `z` acts on qubit `j`.
#[derive(Clone, Copy, Debug)]
struct Pauli {
    phase: u8,
    x: u32,
    z: u32,
}

impl Pauli {
    const ONE: Pauli = Pauli { phase: 0, x: 0, z: 0 };

    fn mul(self, o: Pauli) -> Pauli {
        // Z^z X^x' = (−1)^{|z ∧ x'|} X^x' Z^z
        let sign = 2 * ((self.z & o.x).count_ones() % 2) as u8;
        Pauli { phase: (self.phase + o.phase + sign) % 4, x: self.x ^ o.x, z: self.z ^ o.z }
    }

    fn scale_i(self, p: u8) -> Pauli {
        Pauli { phase: (self.phase + p) % 4, ..self }
    }

    /// Trace on `qubits` qubits as a Gaussian integer.
    fn trace(self, qubits: usize) -> (i128, i128) {
        if self.x != 0 || self.z != 0 {
            return (0, 0);
        }
        let m = 1i128 << qubits;
        [(m, 0), (0, m), (-m, 0), (0, -m)][self.phase as usize]
    }
}

/// Generators of `Cl(2k)` squaring to `−1`: `i Z^{<j} X_j` and
/// `i Z^{<j} Y_j` with `Y = iXZ`.
fn pauli_generators(k: usize) -> Vec<Pauli> {
    let mut g = Vec::new();
    for j in 0..k {
        let below = (1u32 << j) - 1;
        g.push(Pauli { phase: 1, x: 1 << j, z: below });
        g.push(Pauli { phase: 2, x: 1 << j, z: below | (1 << j) });
    }
    g
}

fn pauli_product(gens: &[Pauli], mask: u32) -> Pauli {
    (0..gens.len()).filter(|i| mask >> i & 1 == 1).fold(Pauli::ONE, |acc, i| acc.mul(gens[i]))
}

/// `tr(Γ ρ(e_I))` with `Γ = i^k e_1⋯e_{2k}`.
fn oracle_supertrace(n: usize, mask: u32) -> (i128, i128) {
    let k = n / 2;
    let gens = pauli_generators(k);
    let gamma = pauli_product(&gens, (1u32 << n) - 1).scale_i((k % 4) as u8);
    gamma.mul(pauli_product(&gens, mask)).trace(k)
}

/// Twice the trace of `e_I ∈ Cl(2k−1)` on the `±` half spin module of
/// `Cl(2k)`, with `e_i ↦ −e_0 e_i`.
fn oracle_odd_trace_doubled(n: usize, mask: u32, positive: bool) -> (i128, i128) {
    let k = (n + 1) / 2;
    let gens = pauli_generators(k);
    let images: Vec<Pauli> = (1..=n).map(|i| gens[0].mul(gens[i]).scale_i(2)).collect();
    let m = (0..n).filter(|i| mask >> i & 1 == 1).fold(Pauli::ONE, |acc, i| acc.mul(images[i]));
    let gamma = pauli_product(&gens, (1u32 << (2 * k)) - 1).scale_i((k % 4) as u8);
    let (a, b) = m.trace(k);
    let (c, d) = gamma.mul(m).trace(k);
    if positive {
        (a + c, b + d)
    } else {
        (a - c, b - d)
    }
}

fn gauss(v: (i128, i128)) -> GaussRat {
    GaussRat::from_ints(v.0, v.1)
}

fn monomial(n: usize, mask: u32) -> CliffordElement {
    CliffordElement::monomial(n, MultiIndex::from_mask(mask), GaussRat::from_ints(1, 0))
}

fn criterion_clifford() -> Outcome {
    // (−2i)^k
    let mut want = (1i128, 0i128);
    for k in 1..=5 {
        want = (2 * want.1, -2 * want.0);
        let got = lib(supertrace_even(&lib(volume_element(2 * k))?))?;
        ensure(got == gauss(want), || format!("str(gamma_{}) = {got}, expected {want:?}", 2 * k))?;
        ensure(oracle_supertrace(2 * k, (1 << (2 * k)) - 1) == want, || format!("Pauli oracle disagrees at k = {k}"))?;
    }
    let mut cases = 0usize;
    for n in (2..=8).step_by(2) {
        let rep = lib(spinor_rep(n))?;
        for mask in 0..(1u32 << n) {
            let a = monomial(n, mask);
            let o = gauss(oracle_supertrace(n, mask));
            let s = lib(supertrace_even(&a))?;
            ensure(s == o, || format!("n = {n}, mask {mask:b}: str {s} vs oracle {o}"))?;
            if mask != (1 << n) - 1 {
                ensure(s == GaussRat::from_ints(0, 0), || format!("str nonzero below top: n = {n}, mask {mask:b}"))?;
            }
            let m = lib(rep.matrix_supertrace(&a))?;
            ensure(m == o, || format!("matrix representation: n = {n}, mask {mask:b}: {m} vs {o}"))?;
            cases += 1;
        }
    }
    let two = GaussRat::from_ints(2, 0);
    for total in (1..=7).step_by(2) {
        for mask in 0..(1u32 << total) {
            let a = monomial(total, mask);
            for (conv, positive) in [(TraceConvention::PositiveHalf, true), (TraceConvention::NegativeHalf, false)] {
                let direct = lib(trace_odd(&a, conv))?;
                // the odd trace keeps only the top-degree part
                let o = if mask == 0 { GaussRat::from_ints(0, 0) } else { gauss(oracle_odd_trace_doubled(total, mask, positive)) };
                ensure(direct * two == o, || format!("odd trace n = {total}, mask {mask:b}: {direct} vs oracle {o}/2"))?;
                for split in 0..=total {
                    let s = lib(split_trace(&a, split, conv))?;
                    ensure(s == direct, || format!("split {split} of n = {total}, mask {mask:b}: {s} vs {direct}"))?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} exact cases"))
}

// ---------------------------------------------------------------- index sets

type Elements = BTreeSet<(Rational, Rational, u32)>;

fn q(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

/// Every element of the set generated by `gens` below `cut`.
fn enumerate(gens: &[IndexTerm], cut: Rational) -> Elements {
    let mut out = Elements::new();
    for g in gens {
        let mut re = g.re;
        while re < cut {
            for p in 0..=g.p {
                out.insert((re, g.im, p));
            }
            re += q(1, 1);
        }
    }
    out
}

fn e_sum(a: &Elements, b: &Elements, cut: Rational) -> Elements {
    let mut out = Elements::new();
    for x in a {
        for y in b {
            if x.0 + y.0 < cut {
                out.insert((x.0 + y.0, x.1 + y.1, x.2 + y.2));
            }
        }
    }
    out
}

fn e_shift(a: &Elements, c: i128) -> Elements {
    a.iter().map(|&(r, i, p)| (r + q(c, 1), i, p)).collect()
}

fn e_union(a: &Elements, b: &Elements) -> Elements {
    let mut out: Elements = a.union(b).copied().collect();
    for x in a {
        for y in b {
            if x.0 == y.0 && x.1 == y.1 {
                out.insert((x.0, x.1, x.2 + y.2 + 1));
            }
        }
    }
    out
}

fn e_inf(a: &Elements) -> Option<Rational> {
    a.iter().map(|e| e.0).min()
}

struct RandomFamily {
    lib: IndexFamily,
    faces: Vec<(&'static str, Elements)>,
}

impl RandomFamily {
    fn face(&self, name: &str) -> &Elements {
        &self.faces.iter().find(|(f, _)| *f == name).unwrap().1
    }
}

const CUT: i128 = 3;
const BRUTE_CUT: i128 = CUT + 8;
const COMPARE_BELOW: i128 = CUT + 4;

fn random_terms(rng: &mut ChaCha8Rng) -> Vec<IndexTerm> {
    let count = rng.random_range(0..=3);
    (0..count)
        .map(|_| {
            let den = [1, 2, 3][rng.random_range(0..3)];
            let re = q(rng.random_range(-den..2 * den), den);
            let im = if rng.random_bool(0.2) { q(rng.random_range(-1..=1), 2) } else { q(0, 1) };
            IndexTerm::new(re, im, rng.random_range(0..=2))
        })
        .collect()
}

fn random_set(rng: &mut ChaCha8Rng) -> (IndexSet, Elements) {
    let t = random_terms(rng);
    (IndexSet::from_terms(t.clone(), q(CUT, 1)), enumerate(&t, q(BRUTE_CUT, 1)))
}

fn random_family(rng: &mut ChaCha8Rng) -> RandomFamily {
    let mut fam = IndexFamily::new();
    let mut faces = Vec::new();
    for face in ["lf", "rf", "bkf", "ff"] {
        let (s, e) = random_set(rng);
        fam.insert(face, s);
        faces.push((face, e));
    }
    RandomFamily { lib: fam, faces }
}

/// Library set against the enumerated one, below the library cutoff.
fn same_set(what: &str, got: &IndexSet, want: &Elements) -> Result<(), String> {
    ensure(got.is_empty() == want.is_empty(), || format!("{what}: emptiness differs ({got})"))?;
    let Some(cut) = got.cutoff() else { return Ok(()) };
    ensure(cut >= q(CUT - 2, 1), || format!("{what}: cutoff {cut} unexpectedly low"))?;
    let below = cut.min(q(COMPARE_BELOW, 1));
    let g: Elements = got.elements().into_iter().filter(|t| t.re < below).map(|t| (t.re, t.im, t.p)).collect();
    let w: Elements = want.iter().copied().filter(|t| t.0 < below).collect();
    ensure(g == w, || format!("{what}: library {got} differs from enumeration below {below}"))
}

fn defined(a: &Elements, b: &Elements) -> bool {
    match (e_inf(a), e_inf(b)) {
        (Some(x), Some(y)) => x + y > q(-1, 1),
        _ => true,
    }
}

fn brute_compose(e: &RandomFamily, f: &RandomFamily, k: i128, b: i128) -> Vec<(&'static str, Elements)> {
    let c = q(BRUTE_CUT, 1);
    let nat = enumerate(&[IndexTerm::real(q(0, 1), 0)], c);
    let (elf, erf, ebk, eff) = (e.face("lf"), e.face("rf"), e.face("bkf"), e.face("ff"));
    let (flf, frf, fbk, fff) = (f.face("lf"), f.face("rf"), f.face("bkf"), f.face("ff"));
    let ff = e_union(
        &e_union(&e_sum(eff, fff, c), &e_shift(&e_sum(elf, frf, c), k * (b + 1))),
        &e_shift(&e_sum(ebk, fbk, c), (k + 1) * (b + 1)),
    );
    let bkf = e_union(
        &e_union(&e_union(&e_shift(&e_sum(ebk, fbk, c), b + 1), &e_sum(eff, fbk, c)), &e_sum(ebk, fff, c)),
        &e_sum(elf, frf, c),
    );
    let lf = e_union(&e_union(&e_shift(&e_sum(ebk, flf, c), b + 1), &e_sum(eff, flf, c)), &e_sum(elf, &nat, c));
    let rf = e_union(
        &e_union(&e_shift(&e_sum(erf, fbk, c), b + 1), &e_shift(&e_sum(erf, fff, c), k * (b + 1))),
        &e_sum(frf, &nat, c),
    );
    vec![("ff", ff), ("bkf", bkf), ("lf", lf), ("rf", rf)]
}

fn brute_action(e: &RandomFamily, fb: &Elements, b: i128) -> Elements {
    let c = q(BRUTE_CUT, 1);
    let nat = enumerate(&[IndexTerm::real(q(0, 1), 0)], c);
    e_union(
        &e_union(&e_sum(e.face("lf"), &nat, c), &e_shift(&e_sum(e.face("bkf"), fb, c), b + 1)),
        &e_sum(e.face("ff"), fb, c),
    )
}

fn criterion_indexsets() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut composed, mut refused) = (0, 0);
    for case in 0..200 {
        let k = rng.random_range(2..=3u32);
        let b = rng.random_range(0..=1u32);
        let e = random_family(&mut rng);
        let f = random_family(&mut rng);
        let ok = defined(e.face("rf"), f.face("lf"));
        match compose_double(&e.lib, &f.lib, k, b) {
            Ok(g) => {
                ensure(ok, || format!("case {case}: composition accepted a divergent pair"))?;
                for (face, want) in brute_compose(&e, &f, k as i128, b as i128) {
                    same_set(&format!("case {case} G({face})"), lib(g.get(face))?, &want)?;
                }
                composed += 1;
            }
            Err(Error::Divergent(_)) => {
                ensure(!ok, || format!("case {case}: composition refused a convergent pair"))?;
                refused += 1;
            }
            Err(other) => return Err(format!("case {case}: {other}")),
        }
        let (fb_lib, fb) = random_set(&mut rng);
        let ok = defined(e.face("rf"), &fb);
        match action_on_function(&e.lib, &fb_lib, b) {
            Ok(s) => {
                ensure(ok, || format!("case {case}: action accepted a divergent pair"))?;
                same_set(&format!("case {case} action"), &s, &brute_action(&e, &fb, b as i128))?;
            }
            Err(Error::Divergent(_)) => ensure(!ok, || format!("case {case}: action refused a convergent pair"))?,
            Err(other) => return Err(format!("case {case}: {other}")),
        }
    }
    ensure(composed > 50 && refused > 0, || format!("poor coverage: {composed} composed, {refused} refused"))?;

    // small calculus: ff = ℕ, every other face empty
    let nat = IndexSet::naturals(q(8, 1));
    let small = IndexFamily::new()
        .with("ff", nat.clone())
        .with("bkf", IndexSet::empty())
        .with("lf", IndexSet::empty())
        .with("rf", IndexSet::empty());
    for k in 2..=3 {
        for b in 0..=1 {
            let g = lib(compose_double(&small, &small, k, b))?;
            let ff = lib(g.get("ff"))?;
            ensure(ff.truncate(q(6, 1)) == nat.truncate(q(6, 1)), || format!("small calculus ff: {ff}"))?;
            for face in ["bkf", "lf", "rf"] {
                ensure(lib(g.get(face))?.is_empty(), || format!("small calculus {face} not empty"))?;
            }
        }
    }

    // constructed violations, including the boundary case
    let violations = [(q(-1, 2), q(-1, 2)), (q(-2, 3), q(-1, 3)), (q(-3, 2), q(1, 4))];
    for (x, y) in violations {
        let e = small.clone().with("rf", IndexSet::from_terms([IndexTerm::real(x, 0)], q(4, 1)));
        let f = small.clone().with("lf", IndexSet::from_terms([IndexTerm::real(y, 0)], q(4, 1)));
        ensure(matches!(compose_double(&e, &f, 2, 0), Err(Error::Divergent(_))), || {
            format!("inf E(rf) + inf F(lf) = {} not refused", x + y)
        })?;
    }
    let e = small.clone().with("rf", IndexSet::from_terms([IndexTerm::real(q(-1, 2), 0)], q(4, 1)));
    let f = small.clone().with("lf", IndexSet::from_terms([IndexTerm::real(q(-2, 5), 0)], q(4, 1)));
    lib(compose_double(&e, &f, 2, 0))?;
    Ok(format!("{composed} compositions and {refused} refusals matched the enumerator"))
}

// ---------------------------------------------------------------- kernels

/// Sixth-order central first and second derivatives.
fn fd6(u: &dyn Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64) {
    let v: Vec<f64> = (-3..=3).map(|j| u(x + j as f64 * h)).collect();
    let d1 = (-v[0] + 9.0 * v[1] - 45.0 * v[2] + 45.0 * v[4] - 9.0 * v[5] + v[6]) / (60.0 * h);
    let d2 = (2.0 * v[0] - 27.0 * v[1] + 270.0 * v[2] - 490.0 * v[3] + 270.0 * v[4] - 27.0 * v[5] + 2.0 * v[6])
        / (180.0 * h * h);
    (d1, d2)
}

const PROBE_S: [f64; 3] = [0.7, 1.1, 1.7];
const PROBE_SIGMA: [f64; 2] = [0.9, 1.2];
const PROBE_T: [f64; 2] = [0.3, 0.8];

/// `max |∂_t H − ∂_s² H + (A/s)∂_s H − (B/s²) H| / |H|` over the probe grid.
fn pde_residual(h: &dyn Fn(f64, f64, f64) -> f64, a: f64, b: f64) -> f64 {
    let mut worst = 0.0f64;
    for &sigma in &PROBE_SIGMA {
        for &t in &PROBE_T {
            for &s in &PROBE_S {
                let (dt, _) = fd6(&|v| h(s, sigma, v), t, 1e-2 * t);
                let (ds, dss) = fd6(&|v| h(v, sigma, t), s, 1e-2 * s);
                let u = h(s, sigma, t);
                worst = worst.max((dt - dss + a / s * ds - b / (s * s) * u).abs() / u.abs());
            }
        }
    }
    worst
}

/// `I_ν(x)` by its power series.
fn bessel_i_series(nu: f64, x: f64) -> f64 {
    let h = 0.5 * x;
    let mut sum = 0.0;
    for m in 0..200 {
        let log_term = (2 * m) as f64 * h.ln() + nu * h.ln()
            - statrs::function::gamma::ln_gamma(m as f64 + 1.0)
            - statrs::function::gamma::ln_gamma(m as f64 + nu + 1.0);
        let term = log_term.exp();
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// `(sσ)^{(A+1)/2} (2t)^{−1} e^{−(s²+σ²)/4t} I_ν(sσ/2t)`
fn bessel_kernel_oracle(a: f64, nu: f64, s: f64, sigma: f64, t: f64) -> f64 {
    (s * sigma).powf(0.5 * (a + 1.0)) / (2.0 * t) * (-(s * s + sigma * sigma) / (4.0 * t)).exp()
        * bessel_i_series(nu, s * sigma / (2.0 * t))
}

/// Composite Simpson rule for `∫ H(s,r,t₁) H(r,σ,t₂) r^{−A} dr`.
fn semigroup_oracle(h: &dyn Fn(f64, f64, f64) -> f64, a: f64, s: f64, sigma: f64, t1: f64, t2: f64) -> f64 {
    let (upper, n) = (12.0, 24000);
    let step = upper / n as f64;
    let g = |r: f64| if r == 0.0 { 0.0 } else { h(s, r, t1) * h(r, sigma, t2) * r.powf(-a) };
    let mut sum = g(0.0) + g(upper);
    for i in 1..n {
        sum += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * step);
    }
    sum * step / 3.0
}

const RESIDUAL_TOL: f64 = 1e-6;
const SEMIGROUP_TOL: f64 = 1e-5;

fn criterion_kernels() -> Outcome {
    let mut worst_res = 0.0f64;
    let mut worst_sg = 0.0f64;
    for m in [ModelKernel::Euclid, ModelKernel::Circle] {
        let h = |s: f64, sigma: f64, t: f64| m.eval(s, sigma, t).unwrap();
        let r = pde_residual(&h, 0.0, 0.0);
        ensure(r < RESIDUAL_TOL, || format!("{} residual {r:e}", m.name()))?;
        worst_res = worst_res.max(r);
    }
    for (s, sigma, t) in [(0.3f64, 1.9f64, 0.2f64), (1.0, 1.0, 2.0), (0.0, 3.0, 5.0)] {
        let e = (-(s - sigma) * (s - sigma) / (4.0 * t)).exp() / (4.0 * PI * t).sqrt();
        let got = lib(ModelKernel::Euclid.eval(s, sigma, t))?;
        ensure((got - e).abs() <= 1e-14 * e, || format!("euclid kernel {got} vs {e}"))?;
        let c: f64 = (1.0 + 2.0 * (1..60).map(|n| (-t * (n * n) as f64).exp() * (n as f64 * (s - sigma)).cos()).sum::<f64>())
            / (2.0 * PI);
        let got = lib(ModelKernel::Circle.eval(s, sigma, t))?;
        ensure((got - c).abs() <= 1e-12 * c.abs(), || format!("circle kernel {got} vs {c}"))?;
    }

    let (mut real, mut imaginary) = (0, 0);
    for k in [2u32, 3] {
        for f in [1u32, 2] {
            for n in 0..=f {
                if 2 * n == f {
                    continue;
                }
                let e = lib(GradingExponents::new(k, f, n))?;
                let (k, f, n) = (k as f64, f as f64, n as f64);
                let alpha = -k * f;
                let beta = k * n * (1.0 - k * (f - n));
                let gamma = k * (f - n) * (1.0 - k * n);
                ensure(e.beta_pair() == (alpha, beta) && e.gamma_pair() == (alpha, gamma), || {
                    format!("grading exponents at (k,f,N) = ({k},{f},{n})")
                })?;
                for (a, b) in [(alpha, beta), (alpha, gamma)] {
                    let nu2 = (0.5 * (a + 1.0)).powi(2) - b;
                    let p = lib(nu_from_ab(a, b, KernelConvention::Consistent))?;
                    if nu2 < 0.0 {
                        ensure(matches!(p.nu, BesselOrder::Imaginary(_)) && !p.is_certified(), || {
                            format!("(A,B) = ({a},{b}) with nu^2 = {nu2} not flagged imaginary")
                        })?;
                        ensure(bessel_heat_kernel(&p, 1.0, 1.0, 0.5).is_err(), || "imaginary kernel evaluated".into())?;
                        imaginary += 1;
                        continue;
                    }
                    let nu = nu2.sqrt();
                    ensure(p.nu == BesselOrder::Real(nu) && p.is_certified(), || {
                        format!("(A,B) = ({a},{b}): {:?}, certified {}", p.nu, p.is_certified())
                    })?;
                    for (s, sigma, t) in [(0.5, 1.3, 0.4), (1.2, 0.8, 1.0), (2.0, 2.5, 0.7)] {
                        let got = lib(bessel_heat_kernel(&p, s, sigma, t))?;
                        let want = bessel_kernel_oracle(a, nu, s, sigma, t);
                        ensure((got - want).abs() <= 1e-10 * want.abs(), || {
                            format!("(A,B) = ({a},{b}) kernel {got} vs series {want}")
                        })?;
                    }
                    let h = |s: f64, sigma: f64, t: f64| bessel_heat_kernel(&p, s, sigma, t).unwrap();
                    let r = pde_residual(&h, a, b);
                    ensure(r < RESIDUAL_TOL, || format!("(A,B) = ({a},{b}) residual {r:e}"))?;
                    worst_res = worst_res.max(r);
                    let (s, sigma, t1, t2) = (0.9, 1.4, 0.25, 0.35);
                    let direct = h(s, sigma, t1 + t2);
                    let sg = (semigroup_oracle(&h, a, s, sigma, t1, t2) - direct).abs() / direct.abs();
                    let lib_sg = lib(semigroup_error(&p, s, sigma, t1, t2))?;
                    ensure(sg < SEMIGROUP_TOL && lib_sg < SEMIGROUP_TOL, || {
                        format!("(A,B) = ({a},{b}) semigroup {sg:e} (library {lib_sg:e})")
                    })?;
                    worst_sg = worst_sg.max(sg);
                    real += 1;
                    // the flipped drift must be refused rather than fitted silently
                    if a != 0.0 {
                        ensure(
                            matches!(nu_from_ab(a, b, KernelConvention::AsPrinted), Err(Error::ConventionMismatch { .. })),
                            || format!("(A,B) = ({a},{b}) accepted under the flipped drift"),
                        )?;
                    }
                }
            }
        }
    }
    ensure(real > 0 && imaginary > 0, || format!("coverage: {real} real, {imaginary} imaginary"))?;
    Ok(format!(
        "{real} certified kernels, {imaginary} flagged imaginary; residual {worst_res:.1e}, semigroup {worst_sg:.1e}"
    ))
}

// ---------------------------------------------------------------- lifts

/// `DΨ(p)·V(p)` by a fourth-order central difference of the chart map.
fn jacobian_oracle(
    chart: cusp_edge::blowup::Chart,
    g: &GeometryParams,
    field: &dyn Fn(&[f64]) -> Vec<f64>,
    c: &[f64],
) -> Result<Vec<f64>, String> {
    let p = lib(chart.to_base(g, c))?;
    let v = field(&p);
    let h = 1 + g.b + g.f;
    let mut singular = vec![0, h];
    if chart.space() == BaseSpace::Heat {
        singular.push(2 * h);
    }
    let mut step: f64 = 1e-3;
    for (i, (pi, vi)) in p.iter().zip(&v).enumerate() {
        if *vi != 0.0 {
            let room = if singular.contains(&i) { 2e-3 * pi.abs() } else { 1e-3 * pi.abs().max(1.0) };
            step = step.min(room / vi.abs());
        }
    }
    let at = |s: f64| -> Result<Vec<f64>, String> {
        let q: Vec<f64> = p.iter().zip(&v).map(|(a, d)| a + s * d).collect();
        lib(chart.from_base(g, &q))
    };
    let (p2, p1, m1, m2) = (at(2.0 * step)?, at(step)?, at(-step)?, at(-2.0 * step)?);
    Ok((0..c.len()).map(|i| (-p2[i] + 8.0 * p1[i] - 8.0 * m1[i] + m2[i]) / (12.0 * step)).collect())
}

const LIFT_TOL: f64 = 1e-8;

fn criterion_lifts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut formulas, mut worst) = (0, 0.0f64);
    for k in [2u32, 3] {
        for (f, b) in [(1usize, 0usize), (1, 1), (2, 0), (2, 1)] {
            let g = lib(GeometryParams::new(k, f, b))?;
            for lf in closed_form_lifts(&g) {
                for _ in 0..100 {
                    let c = sample_chart_point(lf.chart, &g, &mut rng);
                    let num = jacobian_oracle(lf.chart, &g, &|p: &[f64]| (lf.field)(&g, p), &c)?;
                    let exp = (lf.expected)(&g, &c);
                    let scale = exp.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                    let err = num.iter().zip(&exp).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale;
                    ensure(err < LIFT_TOL, || format!("k={k} f={f} b={b} {}: rel error {err:e} at {c:?}", lf.name))?;
                    worst = worst.max(err);
                }
                formulas += 1;
            }
            for check in lib(verify_lifts(&g, 100, LIFT_TOL, &mut rng))? {
                ensure(check.pass, || format!("library check {} failed: {:e}", check.name, check.max_rel_error))?;
            }
            let heat = lib(heat_lift_check(&g))?;
            ensure(heat.pass, || format!("heat operator lift failed for k={k} f={f} b={b}"))?;
        }
    }
    Ok(format!("{formulas} formula/geometry pairs at 100 points each, worst rel error {worst:.1e}"))
}

// ---------------------------------------------------------------- spectrum

fn criterion_spectrum() -> Outcome {
    let scenario = DiracScenario { grid: 4000, ..DiracScenario::default() };
    ensure(scenario.k == 3 && scenario.mu_max == 5.5 && scenario.spin == FiberSpin::Antiperiodic, || {
        "scenario defaults changed".into()
    })?;
    let d = lib(run_dirac_scenario(&scenario))?;
    ensure(d.min_gap > 0.0, || format!("minimum gap {}", d.min_gap))?;
    ensure(d.modes.iter().all(|m| m.mu.abs() <= 5.5 && m.gap > 0.0), || "mode outside range or without gap".into())?;
    ensure(d.max_rel_change < 5e-3, || format!("grid doubling change {:e}", d.max_rel_change))?;
    let st = &d.supertrace;
    ensure(st.t.first().is_some_and(|t| (t - 0.05).abs() < 1e-12) && st.t.last().is_some_and(|t| (t - 0.5).abs() < 1e-12), || {
        "time grid does not span [0.05, 0.5]".into()
    })?;
    let mean = st.values.iter().sum::<f64>() / st.values.len() as f64;
    let wobble = st.values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    let off = st.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    ensure(wobble <= 0.05 && off <= 0.05, || format!("supertrace {:?}", st.values))?;
    let geom = IndexGeometry {
        params: lib(GeometryParams::new(3, 1, 0))?,
        spin: FiberSpin::Antiperiodic,
        twist: 0.0,
        interior: None,
    };
    let p = lib(index_prediction(&geom))?;
    ensure(p.prediction.abs() <= 0.05, || format!("index prediction {}", p.prediction))?;
    ensure(st.values.iter().all(|v| (v - p.prediction).abs() <= 0.05), || "supertrace differs from prediction".into())?;
    Ok(format!(
        "min gap {:.4}, doubling change {:.1e}, |Str| <= {off:.1e}, prediction {:.1e}",
        d.min_gap, d.max_rel_change, p.prediction
    ))
}

// ---------------------------------------------------------------- Weyl

fn criterion_weyl() -> Outcome {
    let g = lib(GeometryParams::new(3, 1, 0))?;
    let w = lib(laplace_weyl(&g, 1.0, 2000, &[1000.0, 2000.0, 4000.0]))?;
    // area of (0,1] × S¹ in dx² + x^{2k}dθ²
    let area = 2.0 * PI / 4.0;
    ensure((w.area - area).abs() < 1e-9 * area, || format!("area {} vs {area}", w.area))?;
    let top = w.top_ratio();
    ensure((0.85..=1.15).contains(&top), || format!("Weyl ratio {top} at lambda = 4000"))?;
    // lattice count on (ℝ/2πℤ)², area 4π²
    let lambda = 4000.0;
    let r = (lambda as f64).sqrt() as i64 + 1;
    let count = (-r..=r).flat_map(|m| (-r..=r).map(move |n| m * m + n * n)).filter(|v| (*v as f64) < lambda).count();
    let torus = count as f64 / (PI * lambda);
    ensure((torus_weyl_ratio(lambda) - torus).abs() < 1e-12, || "torus count differs".into())?;
    ensure((torus - 1.0).abs() < 0.05, || format!("torus ratio {torus}"))?;
    Ok(format!("cusp ratio {top:.4}, torus ratio {torus:.4}"))
}

// ---------------------------------------------------------------- eta

fn criterion_eta() -> Outcome {
    let mut worst = 0.0f64;
    for a in [0.1, 0.25, 0.4] {
        let e = lib(eta_heat(&circle_spectrum(a, 2000)))?;
        // ζ(0, a) − ζ(0, 1 − a) with ζ(0, a) = 1/2 − a
        let zeta = (0.5 - a) - (0.5 - (1.0 - a));
        let err = (e.value - zeta).abs();
        ensure(err < 1e-3, || format!("a = {a}: eta {} vs {zeta}", e.value))?;
        worst = worst.max(err);
    }
    for a in [0.0, 0.5] {
        let e = lib(eta_heat(&circle_spectrum(a, 2000)))?;
        ensure(e.value.abs() < 1e-6, || format!("symmetric spectrum (a = {a}) gives eta {}", e.value))?;
    }
    Ok(format!("max deviation {worst:.1e}"))
}

// ---------------------------------------------------------------- pushforward

fn criterion_pushforward() -> Outcome {
    let opts = FitOptions::default();
    let mut worst = 0.0f64;
    let mut densities = 0;
    for k in [2u32, 3] {
        for b in [0usize, 1] {
            let g = lib(GeometryParams::new(k, 1, b))?;
            for name in ["ff", "log", "mixed"] {
                let d = lib(PhgBDensity::synthetic(g, 1.0, &lib(preset(name, g))?))?;
                let e = lib(bkf_extension(&d, lib(expansion_coefficients(&d))?))?;
                let samples = lib(direct_pushforward_oracle(&d, &opts.tau_grid(k)))?;
                let fit = if b == 0 { lib(fit_template(&g, &samples, &opts))? } else { lib(fit_by_generator(&g, &samples, &opts))? };
                let c = compare(&e, &fit);
                ensure(c.max_rel_error <= 1e-5, || {
                    let bad: Vec<String> = c.rows.iter().filter(|r| r.rel_error > 1e-5).map(|r| format!("{} {:e}", r.name, r.rel_error)).collect();
                    format!("k={k} b={b} {name}: {}", bad.join(", "))
                })?;
                worst = worst.max(c.max_rel_error);
                if name == "log" {
                    let row = c.rows.iter().find(|r| r.name == "c_1").unwrap();
                    ensure(row.expansion.abs() > 1e-2 && (row.expansion - row.direct).abs() <= 1e-5 * row.expansion.abs(), || {
                        format!("k={k} b={b}: c_1 {} vs {}", row.expansion, row.direct)
                    })?;
                }
                if name == "mixed" {
                    // c T e^{−T} against dT/T integrates to c
                    let t = e.bkf_term.ok_or("no back-face term")?;
                    ensure((t - 0.8).abs() < 1e-9, || format!("bkf term {t}"))?;
                }
                densities += 1;
            }
        }
    }

    // equal blocks at degrees N and f − N
    for (k, f, n) in [(2u32, 3u32, 0u32)] {
        let blocks = lib(BkfNormalKernel::new(k, f, n))?;
        for tb in [0.3, 1.0, 3.0] {
            let (even, _) = lib(blocks.eval(1.0, tb))?;
            ensure(even.abs() > 1e-6, || format!("even block vanishes at T = {tb}"))?;
        }
        let g = lib(GeometryParams::new(k, f as usize, 0))?;
        let mut d = lib(PhgBDensity::new(g, 1.0))?;
        d.bkf = Some(Coefficient::new(move |tb| bkf_pointwise_supertrace(k, f, n, tb).unwrap(), vec![Order::power(0.0)]));
        let e = lib(bkf_extension(&d, lib(expansion_coefficients(&d))?))?;
        let t = e.bkf_term.ok_or("no back-face term")?;
        ensure(t.abs() < 1e-12, || format!("equal-block bkf contribution {t}"))?;
    }
    Ok(format!("{densities} densities, worst rel error {worst:.1e}; equal-block bkf term 0"))
}

// ---------------------------------------------------------------- domain ODE

fn criterion_domain_ode() -> Outcome {
    let mut worst = 0.0f64;
    for k in [2u32, 3] {
        let g = lib(GeometryParams::new(k, 1, 0))?;
        let grid = lib(build_grid(GridScheme::Graded(2.0), 200, 1.0, &g))?;
        let ki = k as i32;
        for lambda in [-2.0, 2.0] {
            // u* = x^k solves the equation with f = k x^{k−1} + λ
            let rhs = move |x: f64| k as f64 * x.powi(ki - 1) + lambda;
            let r = lib(domain_ode_check(lambda, &g, &rhs, &grid))?;
            let phi = |x: f64| lambda * x.powi(1 - ki) / (1 - ki) as f64;
            let exact = |x: f64| {
                if lambda > 0.0 {
                    x.powi(ki)
                } else {
                    // u(x_max) = 0
                    x.powi(ki) - (phi(1.0) - phi(x)).exp()
                }
            };
            let scale = r.nodes.iter().map(|x| exact(*x).abs()).fold(0.0, f64::max);
            let err = r.nodes.iter().zip(&r.u).map(|(x, u)| (u - exact(*x)).abs()).fold(0.0, f64::max) / scale;
            ensure(err < 1e-6, || format!("k={k} lambda={lambda}: solution off by {err:e}"))?;
            ensure(r.formula_agreement < 1e-6, || format!("closed form agreement {:e}", r.formula_agreement))?;
            worst = worst.max(err);
            ensure(r.norm_converged, || format!("k={k} lambda={lambda}: norms {:?}", r.weighted_norms))?;
            if lambda > 0.0 {
                // x^{−k}u = 1, so the norm is (kf+1)^{−1/2}
                let want = 1.0 / ((k + 1) as f64).sqrt();
                let got = *r.weighted_norms.last().unwrap();
                ensure((got - want).abs() < 1e-3 * want, || format!("k={k}: weighted norm {got} vs {want}"))?;
                ensure(matches!(r.rule, ConstantRule::Forced(_)), || "lambda > 0 constant not forced".into())?;
                ensure(r.second_solution_diverges == Some(true), || {
                    format!("second solution not certified non-L2: {:?}", r.second_solution_log_norms)
                })?;
            } else {
                ensure(r.rule == ConstantRule::Zero, || "lambda < 0 constant not zero".into())?;
            }
        }
    }
    Ok(format!("worst deviation from the exact solution {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Clifford identity suite", criterion_clifford),
        ("index-set composition", criterion_indexsets),
        ("model kernels", criterion_kernels),
        ("lift verification", criterion_lifts),
        ("spectral pipeline", criterion_spectrum),
        ("Weyl check", criterion_weyl),
        ("eta invariant", criterion_eta),
        ("pushforward expansion", criterion_pushforward),
        ("domain ODE", criterion_domain_ode),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} ({secs:.1} s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} ({secs:.1} s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
