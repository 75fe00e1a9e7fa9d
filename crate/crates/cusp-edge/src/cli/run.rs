use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::blowup::{heat_lift_check, verify_lifts, GeometryParams};
use crate::charforms::{
    circle_spectrum, eta_heat, eta_zeta_circle, index_prediction, signature_prediction, EtaInput, IndexGeometry,
    Prediction,
};
use crate::clifford::{
    module_trace_odd, spinor_rep, split_trace, supertrace_even, trace_odd, volume_element, volume_supertrace,
    CliffordElement, GaussRat, MultiIndex, TraceConvention,
};
use crate::error::{invalid, Error, Result};
use crate::indexsets::{compose_double, parse_families, IndexFamily};
use crate::kernels::{
    model_heat_residual, nu_from_ab, semigroup_error, BesselOrder, GradingExponents, KernelConvention, ModelKernel,
};
use crate::pushforward::{
    bkf_extension, compare, direct_pushforward_oracle, expansion_coefficients, fit_by_generator, fit_template, preset,
    FitOptions, PhgBDensity,
};
use crate::spectral::{run_dirac_scenario, DiracReport, DiracScenario};

use super::config::{Scenario, ScenarioConfig};
use super::report::{finite, Check, ErrorEstimate, RunReport};

/// Runs the scenario named in `cfg`. Failed checks are reported, not
/// raised; errors mean the scenario could not be evaluated.
pub fn execute(cfg: &ScenarioConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut r = RunReport::new(cfg);
    match cfg.command {
        Scenario::CliffordCheck => clifford_check(cfg, &mut r)?,
        Scenario::IndexsetsCompose => indexsets_compose(cfg, &mut r)?,
        Scenario::BlowupVerify => blowup_verify(cfg, &mut r)?,
        Scenario::KernelsCheck => kernels_check(cfg, &mut r)?,
        Scenario::Spectrum => spectrum(cfg, &mut r)?,
        Scenario::Index => index(cfg, &mut r)?,
        Scenario::Eta => eta(cfg, &mut r)?,
        Scenario::Signature => signature(cfg, &mut r)?,
        Scenario::PushforwardDemo => pushforward_demo(cfg, &mut r)?,
    }
    Ok(r)
}

fn params(cfg: &ScenarioConfig) -> Result<GeometryParams> {
    GeometryParams::new(cfg.k, cfg.f, cfg.b)
}

fn monomial(n: usize, mask: u32) -> CliffordElement {
    CliffordElement::monomial(n, MultiIndex::from_mask(mask), GaussRat::from_ints(1, 0))
}

/// The exact identity suite: `str(γ_{2k}) = (−2i)^k` for `k ≤ 5`, `str`
/// vanishing below the top degree for `n ≤ 8`, split traces against the
/// odd trace for `n + m ≤ 7`, and the spinor matrices for `n ≤ 8`.
fn clifford_check(_cfg: &ScenarioConfig, r: &mut RunReport) -> Result<()> {
    let mut suites: Vec<(&str, usize, usize)> = Vec::new();

    let mut bad = 0;
    for k in 1..=5 {
        if supertrace_even(&volume_element(2 * k)?)? != volume_supertrace(k) {
            bad += 1;
        }
    }
    suites.push(("volume_supertrace", 5, bad));

    let (mut cases, mut bad) = (0, 0);
    for n in (2..=8).step_by(2) {
        let top = (1u32 << n) - 1;
        for mask in 0..top {
            cases += 1;
            if supertrace_even(&monomial(n, mask))? != GaussRat::from_ints(0, 0) {
                bad += 1;
            }
        }
    }
    suites.push(("supertrace_below_top", cases, bad));

    let (mut cases, mut bad) = (0, 0);
    for total in (1..=7).step_by(2) {
        for mask in 0..(1u32 << total) {
            let a = monomial(total, mask);
            for conv in [TraceConvention::PositiveHalf, TraceConvention::NegativeHalf] {
                let direct = trace_odd(&a, conv)?;
                for split in 0..=total {
                    cases += 1;
                    if split_trace(&a, split, conv)? != direct {
                        bad += 1;
                    }
                }
            }
        }
    }
    suites.push(("split_trace", cases, bad));

    let (mut cases, mut bad) = (0, 0);
    for n in (2..=8).step_by(2) {
        let rep = spinor_rep(n)?;
        for mask in 0..(1u32 << n) {
            cases += 1;
            let a = monomial(n, mask);
            if rep.matrix_supertrace(&a)? != supertrace_even(&a)? {
                bad += 1;
            }
        }
    }
    for n in (1..=7).step_by(2) {
        // the scalar part is seen only by the module trace
        for mask in 1..(1u32 << n) {
            cases += 1;
            let a = monomial(n, mask);
            if module_trace_odd(&a, TraceConvention::PositiveHalf)? != trace_odd(&a, TraceConvention::PositiveHalf)? {
                bad += 1;
            }
        }
    }
    suites.push(("matrix_representation", cases, bad));

    for (name, cases, failures) in suites {
        r.results.push(json!({ "identity": name, "cases": cases, "failures": failures }));
        r.checks.push(Check::flag(name, failures == 0));
    }
    Ok(())
}

fn family_rows(fam: &IndexFamily) -> Vec<Value> {
    let records = fam.records();
    fam.faces()
        .map(|(face, set)| json!({ "face": face, "set": set.to_string(), "record": records[face] }))
        .collect()
}

/// `E ∘ F` for the families named `E` and `F` in the file.
fn indexsets_compose(cfg: &ScenarioConfig, r: &mut RunReport) -> Result<()> {
    let Some(path) = &cfg.file else {
        return invalid("indexsets compose needs --file");
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?;
    let file = parse_families(&text)?;
    let k = file.k.unwrap_or(cfg.k);
    let b = file.b.unwrap_or(cfg.b as u32);
    let e = file.family("E")?;
    let f = file.family("F")?;
    let g = compose_double(e, f, k, b)?;
    r.results = family_rows(&g);
    r.checks.push(Check::flag("composition_defined", true));
    Ok(())
}

fn blowup_verify(cfg: &ScenarioConfig, r: &mut RunReport) -> Result<()> {
    let g = params(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for c in verify_lifts(&g, cfg.samples, cfg.tolerance, &mut rng)? {
        r.results.push(json!({
            "formula": c.name,
            "chart": c.chart,
            "samples": c.samples,
            "max_rel_error": finite(c.max_rel_error),
            "pass": c.pass,
        }));
        r.checks.push(Check::at_most(format!("lift {}", c.name), c.max_rel_error, cfg.tolerance));
    }
    let h = heat_lift_check(&g)?;
    r.results.push(json!({
        "formula": "heat operator near the front face",
        "chart": "tf-ff",
        "samples": h.xp.len(),
        "max_rel_error": finite(h.errors.iter().copied().fold(0.0, f64::max)),
        "pass": h.pass,
    }));
    r.checks.push(Check::flag("heat operator lift", h.pass));
    Ok(())
}

/// Semigroup probe `H(1,·,0.3) ∗ H(·,1.3,0.4) = H(1,1.3,0.7)`.
const SEMIGROUP_PROBE: (f64, f64, f64, f64) = (1.0, 1.3, 0.3, 0.4);

fn kernels_check(cfg: &ScenarioConfig, r: &mut RunReport) -> Result<()> {
    for kernel in [ModelKernel::Euclid, ModelKernel::Circle] {
        let res = model_heat_residual(&kernel)?;
        r.results.push(json!({
            "model": kernel.name(),
            "params": {},
            "residual": finite(res),
            "nu": null,
            "certified": res <= cfg.tolerance,
        }));
        r.checks.push(Check::at_most(format!("{} residual", kernel.name()), res, cfg.tolerance));
    }
    let e = GradingExponents::new(cfg.k, cfg.f as u32, cfg.degree)?;
    for (label, (a, b)) in [("alpha,beta", e.beta_pair()), ("alpha,gamma", e.gamma_pair())] {
        let name = format!("bessel({label})");
        match nu_from_ab(a, b, KernelConvention::Consistent) {
            Ok(p) => match p.nu {
                BesselOrder::Imaginary(v) => {
                    r.results.push(json!({
                        "model": name,
                        "params": { "A": a, "B": b },
                        "residual": null,
                        "nu": { "imaginary": v },
                        "certified": false,
                    }));
                    r.checks.push(Check::flag(format!("{name} imaginary order flagged"), !p.is_certified()));
                }
                BesselOrder::Real(nu) => {
                    let res = p.residual.unwrap_or(f64::INFINITY);
                    let (s, sigma, t1, t2) = SEMIGROUP_PROBE;
                    let sg = semigroup_error(&p, s, sigma, t1, t2)?;
                    r.results.push(json!({
                        "model": name,
                        "params": { "A": a, "B": b },
                        "residual": finite(res),
                        "nu": nu,
                        "certified": p.is_certified() && res <= cfg.tolerance,
                        "semigroup_error": finite(sg),
                    }));
                    r.checks.push(Check::at_most(format!("{name} residual"), res, cfg.tolerance));
                    r.checks.push(Check::at_most(format!("{name} semigroup"), sg, cfg.semigroup_tolerance));
                }
            },
            Err(Error::ConventionMismatch { best_nu, residual }) => {
                r.results.push(json!({
                    "model": name,
                    "params": { "A": a, "B": b },
                    "residual": finite(residual),
                    "nu": best_nu,
                    "certified": false,
                }));
                r.checks.push(Check::flag(format!("{name} certified"), false));
            }
            Err(other) => return Err(other),
        }
    }
    Ok(())
}

fn dirac_scenario(cfg: &ScenarioConfig) -> Result<DiracReport> {
    if cfg.f != 1 || cfg.b != 0 {
        return Err(Error::Unsupported("the Dirac spectrum is implemented for a circle fiber over a point".into()));
    }
    if cfg.twist != 0.0 {
        return Err(Error::Unsupported("the discretised Dirac operator carries no twist".into()));
    }
    run_dirac_scenario(&DiracScenario {
        k: cfg.k,
        spin: cfg.spin.into(),
        mu_max: cfg.modes,
        grid: cfg.grid,
        x_max: cfg.xmax,
        count: cfg.count,
        t_grid: cfg.t_grid(),
        wall_compare: None,
    })
}

fn spectrum(cfg: &ScenarioConfig, r: &mut RunReport) -> Result<()> {
    let d = dirac_scenario(cfg)?;
    for m in &d.modes {
        let s = &m.spectrum;
        for i in 0..s.eigenvalues.len() {
            r.results.push(json!({
                "mode": m.mu,
                "index": i,
                "eigenvalue": s.eigenvalues[i],
                "residual": finite(s.residuals[i]),
                "refinement_delta": s.refinement_delta[i].and_then(finite),
            }));
        }
    }
    r.checks.push(Check { name: "positive gap".into(), pass: d.min_gap > 0.0, value: finite(d.min_gap), tolerance: None });
    r.checks.push(Check::at_most("grid doubling change", d.max_rel_change, cfg.tolerance));
    r.error_estimates.push(ErrorEstimate::new("max_residual", d.max_residual));
    Ok(())
}

fn prediction_row(p: &Prediction) -> Value {
    json!({ "prediction": p.prediction, "terms": p.terms, "error_estimate": p.error_estimate })
}

fn index(cfg: &ScenarioConfig, r: &mut RunReport) -> Result<()> {
    let geom = IndexGeometry { params: params(cfg)?, spin: cfg.spin.into(), twist: cfg.twist, interior: cfg.interior };
    let p = index_prediction(&geom)?;
    let mut row = prediction_row(&p);
    r.error_estimates.push(ErrorEstimate::new("prediction", p.error_estimate));
    if cfg.twist == 0.0 {
        let d = dirac_scenario(cfg)?;
        let st = &d.supertrace;
        let dev = st.values.iter().map(|v| (v - p.prediction).abs()).fold(0.0, f64::max);
        row["measured"] = json!({ "t": st.t, "supertrace": st.values });
        r.checks.push(Check::at_most("supertrace matches prediction", dev, cfg.tolerance));
        r.checks.push(Check::at_most("supertrace constant in t", st.spread(), cfg.tolerance));
    }
    r.results.push(row);
    Ok(())
}

fn eta(cfg: &ScenarioConfig, r: &mut RunReport) -> Result<()> {
    let heat = eta_heat(&circle_spectrum(cfg.twist, cfg.modes as i64))?;
    let zeta = eta_zeta_circle(cfg.twist);
    r.results.push(json!({
        "prediction": heat.value,
        "terms": [
            { "name": "eta_heat", "value": heat.value },
            { "name": "eta_zeta", "value": zeta.value },
        ],
        "error_estimate": heat.error_estimate,
    }));
    r.checks.push(Check::at_most("heat eta matches zeta oracle", (heat.value - zeta.value).abs(), cfg.tolerance));
    r.error_estimates.push(ErrorEstimate::new("eta_heat", heat.error_estimate));
    Ok(())
}

fn signature(cfg: &ScenarioConfig, r: &mut RunReport) -> Result<()> {
    let interior = cfg.interior.unwrap_or(0.0);
    let spectrum = circle_spectrum(cfg.twist, cfg.modes as i64);
    let p = signature_prediction(interior, &EtaInput::Spectrum(spectrum))?;
    let want = interior - 0.5 * eta_zeta_circle(cfg.twist).value;
    r.results.push(prediction_row(&p));
    r.checks.push(Check::at_most("matches zeta oracle", (p.prediction - want).abs(), cfg.tolerance));
    r.error_estimates.push(ErrorEstimate::new("prediction", p.error_estimate));
    Ok(())
}

/// Expansion coefficients of a preset density against a template fit of
/// its directly computed pushforward. For `b ≥ 1` the template is fitted
/// one generator at a time.
fn pushforward_demo(cfg: &ScenarioConfig, r: &mut RunReport) -> Result<()> {
    if cfg.b > 1 {
        return Err(Error::Unsupported("pushforward scenarios cover b ≤ 1".into()));
    }
    let g = params(cfg)?;
    let d = PhgBDensity::synthetic(g, 1.0, &preset(&cfg.preset, g)?)?;
    let e = bkf_extension(&d, expansion_coefficients(&d)?)?;
    let opts = FitOptions::default();
    let samples = direct_pushforward_oracle(&d, &opts.tau_grid(g.k))?;
    let fit = if g.b == 0 { fit_template(&g, &samples, &opts)? } else { fit_by_generator(&g, &samples, &opts)? };
    let cmp = compare(&e, &fit);
    let errors = e.errors.merged(&g).entries(&g);
    for (row, (_, err)) in cmp.rows.iter().zip(errors) {
        r.results.push(json!({
            "coefficient": row.name,
            "expansion": row.expansion,
            "direct": row.direct,
            "rel_error": finite(row.rel_error),
            "error_estimate": finite(err),
        }));
    }
    r.checks.push(Check::at_most("expansion matches direct pushforward", cmp.max_rel_error, cfg.tolerance));
    if let Some(t) = e.bkf_term {
        // already included in c_0
        r.results.push(json!({
            "coefficient": "c_0 bkf part",
            "expansion": t,
            "direct": null,
            "rel_error": null,
            "error_estimate": null,
        }));
    }
    r.error_estimates.push(ErrorEstimate::new("fit_condition", cmp.condition));
    r.error_estimates.push(ErrorEstimate::new("fit_residual", cmp.fit_residual));
    Ok(())
}
