//! Small-time expansion of the pushforward of synthetic b-densities, from
//! finite-part integrals of their face coefficients, compared with a
//! template fit of the directly integrated pushforward.

use cusp_edge::blowup::GeometryParams;
use cusp_edge::pushforward::{
    bkf_extension, compare, direct_pushforward_oracle, expansion_coefficients, finite_part, fit_by_generator,
    fit_template, preset, FitOptions, Order, PhgBDensity, PRESETS,
};

fn main() -> cusp_edge::Result<()> {
    // FP ∫_0^∞ e^{−x} dx/x is minus Euler's constant
    let orders: Vec<Order> = (0..12).map(|m| Order::power(m as f64)).collect();
    let fp = finite_part(&|x: f64| (-x).exp(), &orders, f64::INFINITY)?;
    println!("FP int e^-x dx/x = {:.12}", fp.value);

    let opts = FitOptions::default();
    for (k, b) in [(2, 0), (3, 1)] {
        let g = GeometryParams::new(k, 1, b)?;
        for name in PRESETS {
            let d = PhgBDensity::synthetic(g, 1.0, &preset(name, g)?)?;
            let e = bkf_extension(&d, expansion_coefficients(&d)?)?;
            let samples = direct_pushforward_oracle(&d, &opts.tau_grid(k))?;
            let fit = if b == 0 { fit_template(&g, &samples, &opts)? } else { fit_by_generator(&g, &samples, &opts)? };
            let c = compare(&e, &fit);
            println!("k={k} b={b} {name:<6} max rel error {:.2e}  c_1 = {:+.6}", c.max_rel_error, e.coefficients.c1);
        }
    }
    Ok(())
}
